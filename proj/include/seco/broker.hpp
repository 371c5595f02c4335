// Broker product line: client order intake, the staged pre-trade pipeline,
// placeholder venue-selection and portfolio algorithms, contract creation
// for institutional blocks and retail settlement crediting.

#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <boost/rational.hpp>

#include "seco/domain.hpp"
#include "seco/feature_model.hpp"
#include "seco/ledger.hpp"
#include "seco/registry.hpp"
#include "seco/transfer_methods.hpp"

namespace seco::broker {

namespace stage {
inline constexpr std::string_view kValidation = "validation";
inline constexpr std::string_view kRisk = "risk";
inline constexpr std::string_view kGovernmentalCompliance = "governmental_compliance";
inline constexpr std::string_view kClientCompliance = "client_compliance";
inline constexpr std::string_view kVenueSelection = "venue_selection";
inline constexpr std::string_view kPrepayment = "prepayment";
inline constexpr std::string_view kRouting = "routing";
inline constexpr std::string_view kAllocationValidation = "allocation_validation";
inline constexpr std::string_view kAffirmation = "affirmation";
inline constexpr std::string_view kPortfolio = "portfolio_optimization";
}  // namespace stage

/// What a client hands the broker.
struct OrderDraft {
    std::string order_id;
    std::string client;  // retail account, or institution id for block orders
    Side side = Side::Buy;
    std::string symbol;
    std::int64_t quantity = 0;
    std::optional<Money> limit_price;
    /// Funding bound for retail market buys.
    std::optional<Money> price_cap;
    OrderType type = OrderType::Limit;
    /// Used when no best-venue algorithm is bound.
    std::optional<ParticipantId> venue;
};

/// Parameters of the rule variants; a rule only reads them when bound.
struct BrokerSettings {
    std::int64_t lot_size = 1;
    std::int64_t max_order_quantity = 1'000'000;
    /// Fat-finger band: limit (or cap) within this many percent of the reference price.
    std::map<std::string, Money> reference_prices;
    std::int64_t fat_finger_percent = 10;
    std::set<std::string> restricted_symbols;
    std::set<std::string> sanctioned_clients;
    std::int64_t max_order_value = std::numeric_limits<std::int64_t>::max();  // minor units
    std::map<std::string, std::int64_t> client_max_order_value;
    /// Clients absent from the map may trade any symbol.
    std::map<std::string, std::set<std::string>> client_mandates;
    std::int64_t min_allocation_quantity = 1;
    ParticipantId default_venue{ParticipantRole::Exchange, "X1"};
    ParticipantId clearing{ParticipantRole::ClearingCorporation, "CC1"};
};

enum class Responsibility { Broker, Custodian };

struct BrokerOrder {
    Order order;
    ParticipantId venue{ParticipantRole::Exchange, {}};
    /// Retail prepayment still held by the broker: money in minor units for
    /// buys, shares for sells.
    std::int64_t prepaid = 0;
    bool refunded = false;
    Responsibility responsibility = Responsibility::Broker;
};

/// Stage-local check bound from one of the rule variation points.
class OrderRule {
public:
    virtual ~OrderRule() = default;
    virtual std::string_view name() const = 0;
    /// `funding_price` is the limit price, else the price cap, if any.
    virtual std::optional<std::string> check(const OrderDraft& draft,
                                             const std::optional<Money>& funding_price) const = 0;
};

class VenueSelector {
public:
    virtual ~VenueSelector() = default;
    virtual std::string_view name() const = 0;
    /// Precondition: `venues` is non-empty.
    virtual ParticipantId select(const Order& order, const std::vector<ParticipantId>& venues,
                                 const ServiceRegistry& registry) const = 0;
};

std::unique_ptr<VenueSelector> make_venue_selector(std::string_view variant);

using Weight = boost::rational<std::int64_t>;

class PortfolioOptimizer {
public:
    virtual ~PortfolioOptimizer() = default;
    virtual std::string_view name() const = 0;
    /// Precondition: `candidates` is non-empty.
    virtual std::map<std::string, Weight> optimize(const std::map<std::string, std::int64_t>& holdings,
                                                   const std::vector<std::string>& candidates) const = 0;
};

std::unique_ptr<PortfolioOptimizer> make_portfolio_optimizer(std::string_view variant);

/// Test hook applied to each contract before it leaves the broker.
using ContractTamper = std::function<void(Contract&)>;

class Broker : public Participant {
public:
    Broker(ParticipantId id, const fm::ProductSpec& product, BrokerSettings settings,
           ServiceRegistry& registry, Ledger& ledger);
    ~Broker() override;

    const ParticipantId& participant_id() const override { return id_; }
    std::string house_account() const { return seco::house_account(id_); }
    const BrokerSettings& settings() const { return settings_; }
    std::set<OrderType> offered_order_types() const { return offered_; }

    void register_retail_client(const std::string& account);
    void register_institution(const std::string& institution, const ParticipantId& custodian,
                              std::set<std::string> end_clients);

    /// Starts a new duplicate-detection window.
    void begin_step() { window_.clear(); }

    Outcome<std::string> place_retail_order(const OrderDraft& draft);
    Outcome<std::string> place_institutional_order(const OrderDraft& draft);

    Outcome<ParticipantId> select_venue(const Order& order, const std::vector<ParticipantId>& venues) const;
    Outcome<std::map<std::string, Weight>> optimize_portfolio(
        const std::map<std::string, std::int64_t>& holdings, const std::vector<std::string>& candidates) const;

    /// Validates one block's allocation details and sends one contract per
    /// detail to the institution's custodian.
    Outcome<std::vector<Contract>> handle_allocation_details(const std::vector<AllocationDetail>& details);
    Outcome<Accepted> receive_affirmation(const Affirmation& affirmation);

    /// Credits clients for settled retail trades and refunds unused
    /// prepayment of finished orders. Idempotent.
    void settle_retail_rec();

    const BrokerOrder* find_order(const std::string& order_id) const;
    std::optional<Responsibility> responsibility(const std::string& order_id) const;
    const std::vector<Contract>& contracts_sent() const { return contracts_; }
    /// `order_id|stage|outcome|rule` lines in the order stages ran.
    const std::vector<std::string>& audit_trail() const { return audit_; }
    /// Trade sides this broker credited, as `trade_id:buy` / `trade_id:sell`.
    const std::set<std::string>& credited() const { return credited_; }

    void set_contract_tamper(ContractTamper tamper) { tamper_ = std::move(tamper); }

private:
    struct Institution {
        ParticipantId custodian;
        std::set<std::string> end_clients;
    };
    struct StageRules {
        std::string_view stage;
        std::vector<std::unique_ptr<OrderRule>> rules;
    };

    Outcome<std::string> place(const OrderDraft& draft, bool institutional);
    std::optional<Rejection> run_rules(const OrderDraft& draft, const std::optional<Money>& funding,
                                       const StageRules& stage);
    std::optional<std::string> base_validation(const OrderDraft& draft, bool institutional) const;
    void audit(const std::string& order_id, std::string_view stage, const std::string& rule);
    Rejection reject(const std::string& order_id, std::string_view stage, std::string rule,
                     std::string detail = {});
    void refund(BrokerOrder& bo, const std::string& cause);

    ParticipantId id_;
    BrokerSettings settings_;
    ServiceRegistry& registry_;
    Ledger& ledger_;

    std::set<OrderType> offered_;
    std::vector<StageRules> stages_;
    std::unique_ptr<VenueSelector> venue_selector_;
    std::unique_ptr<PortfolioOptimizer> optimizer_;
    std::unique_ptr<MoneyTransferMethod> money_method_;
    std::unique_ptr<EquityTransferMethod> equity_method_;
    std::vector<std::string> allocation_rule_names_;

    std::set<std::string> retail_clients_;
    std::map<std::string, Institution> institutions_;
    std::map<std::string, BrokerOrder> orders_;
    std::vector<std::string> order_sequence_;
    std::vector<std::tuple<std::string, std::string, Side, std::int64_t>> window_;
    std::vector<Contract> contracts_;
    std::map<std::string, std::string> contract_block_;
    std::set<std::string> affirmed_contracts_;
    std::set<std::string> credited_;
    std::vector<std::string> audit_;
    std::uint64_t contract_counter_ = 0;
    ContractTamper tamper_;
};

}  // namespace seco::broker
