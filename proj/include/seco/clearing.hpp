// Clearing corporation product line plus the clearing bank and depository
// services that execute the money and equity legs of settlement.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "seco/domain.hpp"
#include "seco/feature_model.hpp"
#include "seco/ledger.hpp"
#include "seco/registry.hpp"

namespace seco::clearing {

/// What one party owes or is owed for one symbol. Signs are from the
/// party's side: a buyer has net_quantity > 0 and net_money < 0.
struct Obligation {
    std::string party;
    std::string counterparty;
    std::string symbol;
    std::int64_t net_quantity = 0;
    std::int64_t net_money = 0;
    std::vector<std::string> trade_refs;

    friend bool operator==(const Obligation&, const Obligation&) = default;
};

/// Client-level record a custodian forwards for one affirmed allocation.
struct AllocationRecord {
    std::string alloc_id;
    std::string block_order_id;
    ParticipantId custodian{ParticipantRole::Custodian, {}};
    std::string end_client;
    Side side = Side::Buy;
    std::string symbol;
    std::int64_t quantity = 0;
    Money price;
};

class ServiceUnavailable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Executes money legs on the shared ledger.
class ClearingBank : public Participant {
public:
    ClearingBank(ParticipantId id, Ledger& ledger) : id_(std::move(id)), ledger_(ledger) {}
    const ParticipantId& participant_id() const override { return id_; }

    std::uint64_t transfer_money(const std::string& from, const std::string& to, const Money& amount,
                                 const std::string& cause);
    /// The transfer this bank would execute, for inclusion in an atomic batch.
    Transfer stage_money(const MoneyLeg& leg, const std::string& cause) const;

    /// While offline every transfer and stage request throws ServiceUnavailable.
    void set_offline(bool offline) { offline_ = offline; }

private:
    std::string annotate(const std::string& cause) const;
    ParticipantId id_;
    Ledger& ledger_;
    bool offline_ = false;
};

/// Executes equity legs on the shared ledger.
class Depository : public Participant {
public:
    Depository(ParticipantId id, Ledger& ledger) : id_(std::move(id)), ledger_(ledger) {}
    const ParticipantId& participant_id() const override { return id_; }

    std::uint64_t transfer_equity(const std::string& from, const std::string& to,
                                  const std::string& symbol, std::int64_t qty,
                                  const std::string& cause);
    Transfer stage_equity(const EquityLeg& leg, const std::string& cause) const;

    void set_offline(bool offline) { offline_ = offline; }

private:
    std::string annotate(const std::string& cause) const;
    ParticipantId id_;
    Ledger& ledger_;
    bool offline_ = false;
};

class SettlementFailed : public std::runtime_error {
public:
    SettlementFailed(std::string instruction_id, std::string leg, const std::string& cause);
    const std::string& instruction_id() const { return instruction_id_; }
    /// "money" or "equity".
    const std::string& leg() const { return leg_; }

private:
    std::string instruction_id_;
    std::string leg_;
};

enum class ClearingRule { TradeForTrade, MultilateralNetting };

/// Bound at the trade-validation point, after the base rules.
class TradeValidationRule {
public:
    virtual ~TradeValidationRule() = default;
    virtual std::string_view name() const = 0;
    virtual std::optional<std::string> check(const Trade& trade) const = 0;
};

struct ClearingSettings {
    std::set<std::string> listed_symbols;
    std::int64_t min_price = 1;             // minor units, inclusive
    std::int64_t max_price = 1'000'000'000;  // minor units, inclusive
    ParticipantId bank{ParticipantRole::ClearingBank, "CB1"};
    ParticipantId depository{ParticipantRole::Depository, "D1"};
};

inline constexpr std::string_view kTradeValidationStage = "trade_validation";

/// A trade whose buyer and seller have been mapped to settling accounts.
struct ResolvedTrade {
    Trade trade;
    std::string buyer_account;
    std::string seller_account;
};

std::vector<Obligation> gross_obligations(const std::vector<ResolvedTrade>& trades);
std::vector<Obligation> net_obligations(const std::vector<ResolvedTrade>& trades,
                                        const std::string& ccp_account);

class ClearingCorporation : public Participant {
public:
    ClearingCorporation(ParticipantId id, const fm::ProductSpec& product, ClearingSettings settings,
                        ServiceRegistry& registry, Ledger& ledger);
    ~ClearingCorporation() override;

    const ParticipantId& participant_id() const override { return id_; }
    ClearingRule clearing_rule() const { return rule_; }
    /// Central counterparty account; flat after every netting cycle.
    std::string ccp_account() const { return house_account(id_); }

    /// Exchange-sourced trade. Base rules: NonPositiveQuantity,
    /// NonPositivePrice, DuplicateTrade, UnknownAccount; then variants.
    Outcome<Accepted> submit_trade(const Trade& trade);
    /// Custodian-sourced record for one affirmed allocation; it resolves the
    /// institutional side of the block order's trades.
    Outcome<Accepted> submit_allocation(const AllocationRecord& record);

    /// Clears every queued trade whose sides are resolved under the bound
    /// clearing rule. Returns the obligations produced.
    std::vector<Obligation> clear_rec();

    /// Executes the cleared obligations through the clearing bank and
    /// depository. Throws SettlementFailed; nothing of the failing
    /// instruction (netting: of the failing cycle) is committed.
    std::vector<SettlementInstruction> settle_rec();

    std::optional<TradeStatus> trade_status(const std::string& trade_id) const;
    /// Settled trades in settlement order.
    std::vector<Trade> settled_trades() const;
    /// True once every trade of the record's block order has settled.
    bool allocation_settled(const std::string& alloc_id) const;

    std::size_t queued_trades() const { return queue_.size(); }
    std::size_t pending_obligations() const;
    const std::vector<SettlementInstruction>& executed_instructions() const { return executed_; }

private:
    struct TradeEntry {
        Trade trade;
        TradeStatus status = TradeStatus::Executed;
    };
    struct Batch {
        ClearingRule rule;
        std::vector<ResolvedTrade> trades;
        std::vector<Obligation> obligations;
    };

    std::optional<std::string> party_account(const TradeParty& party) const;
    std::optional<std::string> resolve(const Trade& trade, Side side) const;
    void settle_gross(Batch& batch, std::vector<SettlementInstruction>& out);
    void settle_netting(Batch& batch, std::vector<SettlementInstruction>& out);
    void mark_settled(const std::vector<std::string>& trade_ids);
    std::string next_instruction_id() { return id_.id + "-SI" + std::to_string(++instruction_counter_); }

    ParticipantId id_;
    ClearingSettings settings_;
    ServiceRegistry& registry_;
    Ledger& ledger_;
    ClearingRule rule_;
    std::vector<std::unique_ptr<TradeValidationRule>> rules_;

    std::map<std::string, TradeEntry> trades_;
    std::vector<std::string> queue_;
    std::vector<std::string> settled_order_;
    std::map<std::string, AllocationRecord> allocations_;
    std::vector<Batch> pending_;
    std::vector<SettlementInstruction> executed_;
    std::uint64_t instruction_counter_ = 0;
};

/// `instruction_id|trade_refs|payer|payee|amount|deliverer|receiver|symbol|qty`,
/// absent legs leave their fields empty.
std::string format_instruction_line(const SettlementInstruction& si);

}  // namespace seco::clearing
