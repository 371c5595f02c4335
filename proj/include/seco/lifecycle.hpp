// Scenario definitions and the sequential orchestrator that drives one
// derived product's participants through a complete order life cycle.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "seco/broker.hpp"
#include "seco/clearing.hpp"
#include "seco/custodian.hpp"
#include "seco/domain.hpp"
#include "seco/exchange.hpp"
#include "seco/feature_model.hpp"
#include "seco/ledger.hpp"
#include "seco/registry.hpp"

namespace seco::lifecycle {

enum class ScenarioKind { RetailRetail, RetailInstitutional, InstitutionalInstitutional };

std::string_view to_string(ScenarioKind kind);
ScenarioKind parse_scenario_kind(std::string_view text);

class ScenarioError : public std::runtime_error {
public:
    ScenarioError(const std::string& message, int line = 0);
    int line() const { return line_; }

private:
    int line_;
};

struct Holdings {
    std::int64_t money = 0;
    std::map<std::string, std::int64_t> positions;
};

struct RetailClient {
    std::string account;
    std::string broker;
};

struct Institution {
    std::string id;
    std::string broker;
    std::string custodian;
    std::vector<std::string> end_clients;
};

struct OrderStep {
    bool block = false;
    std::string broker;
    broker::OrderDraft draft;
};

struct AllocationSpec {
    std::string alloc_id;
    std::string block_order_id;
    std::string end_client;
    std::int64_t quantity = 0;
    Money price;
};

struct Scenario {
    ScenarioKind kind = ScenarioKind::RetailRetail;
    std::vector<ParticipantId> participants;
    std::set<std::string> listed;
    std::map<std::string, Holdings> accounts;
    std::vector<RetailClient> retail_clients;
    std::vector<Institution> institutions;
    std::vector<OrderStep> orders;
    std::vector<AllocationSpec> allocations;
    /// alloc_id -> price offset applied to that allocation's contract.
    std::map<std::string, std::int64_t> contract_price_tamper;
    /// Empty when the scenario carries no expected final balances.
    std::map<std::string, Holdings> expected;

    broker::BrokerSettings broker_settings;
    exchange::ExchangeSettings exchange_settings;
    clearing::ClearingSettings clearing_settings;
};

Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

/// Throws ScenarioError unless the participant roles fit the scenario kind:
/// at least one broker, exactly one exchange, clearing corporation,
/// clearing bank and depository, and custodians iff institutional.
void check_participants(const Scenario& scenario);

/// Ledger, registry and every participant of one scenario run.
class Ecosystem {
public:
    Ecosystem(const fm::ProductSpec& product, const Scenario& scenario);
    ~Ecosystem();
    Ecosystem(const Ecosystem&) = delete;
    Ecosystem& operator=(const Ecosystem&) = delete;

    Ledger& ledger() { return ledger_; }
    ServiceRegistry& registry() { return registry_; }

    std::vector<broker::Broker*> brokers() const;
    std::vector<custodian::Custodian*> custodians() const;
    std::vector<exchange::Exchange*> exchanges() const;
    clearing::ClearingCorporation& clearing_corporation() const;
    clearing::ClearingBank& clearing_bank() const;
    clearing::Depository& depository() const;

private:
    Ledger ledger_;
    ServiceRegistry registry_;
    std::vector<std::unique_ptr<Participant>> participants_;
};

struct StepRecord {
    std::string name;
    Snapshot snapshot;
    std::size_t journal_end = 0;  // journal entries committed up to and including this step
    std::vector<std::string> events;
};

struct ScenarioReport {
    std::string scenario_id;
    std::string product_name;
    Snapshot initial;
    std::vector<StepRecord> steps;
    std::vector<JournalEntry> journal;
    std::vector<std::string> trades;
    std::vector<std::string> audit;
    std::vector<std::string> settlement;
    std::vector<std::string> affirmations;
    std::map<std::string, Holdings> expected;
    std::optional<std::string> aborted_step;
    std::string abort_cause;

    bool completed() const { return !aborted_step; }
    const Snapshot& final_snapshot() const { return steps.empty() ? initial : steps.back().snapshot; }
};

class ScenarioAborted : public std::runtime_error {
public:
    explicit ScenarioAborted(ScenarioReport report);
    const std::string& step() const { return *report_.aborted_step; }
    const std::string& cause() const { return report_.abort_cause; }
    const ScenarioReport& report() const { return report_; }

private:
    ScenarioReport report_;
};

/// Called at the end of each step, before its snapshot is taken.
using StepHook = std::function<void(const std::string& step, Ecosystem& eco)>;

/// Runs every step strictly in sequence. Throws ScenarioAborted, carrying
/// the report up to the failing step, on any rejection or error.
ScenarioReport run_scenario(const fm::ProductSpec& product, const Scenario& scenario, const StepHook& hook = {});
ScenarioReport run_scenario(const fm::ProductSpec& product, const Scenario& scenario, Ecosystem& eco,
                            const StepHook& hook = {});

struct ConservationResult {
    std::vector<std::string> failures;
    bool expected_checked = false;
    bool ok() const { return failures.empty(); }
};

/// Checks every consecutive snapshot pair for constant money and per-symbol
/// totals, every step snapshot against journal replay, and the final
/// snapshot against the expected balances when the scenario has them.
ConservationResult assert_conservation(const ScenarioReport& report);

std::string format_human_report(const ScenarioReport& report, const ConservationResult& result);
/// Line-oriented, diffable, free of timestamps.
std::string format_machine_report(const ScenarioReport& report, const ConservationResult& result);

/// What the report command needs back from a machine report.
struct ParsedReport {
    std::string scenario_id;
    std::string product_name;
    std::string status;
    Snapshot initial;
    Snapshot final;
    std::vector<JournalEntry> journal;
    std::vector<std::string> assertions;
    std::size_t steps = 0;
};

ParsedReport parse_machine_report(std::string_view text);

}  // namespace seco::lifecycle
