// Exchange product line: incoming-order validation, a price-priority order
// book ranked by configurable precedence rules, and one matching algorithm
// per order type.

#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "seco/domain.hpp"
#include "seco/feature_model.hpp"
#include "seco/registry.hpp"

namespace seco::exchange {

// --- precedence -----------------------------------------------------------

/// Tie-break applied after price. `compare` is negative when `a` trades first.
class SecondaryPrecedenceRule {
public:
    virtual ~SecondaryPrecedenceRule() = default;
    virtual std::string_view name() const = 0;
    virtual std::weak_ordering compare(const Order& a, const Order& b) const = 0;
};

/// Applied when the secondary rule ranks two orders equal.
class DefaultPrecedenceRule {
public:
    virtual ~DefaultPrecedenceRule() = default;
    virtual std::string_view name() const = 0;
    virtual std::weak_ordering compare(const Order& a, const Order& b) const = 0;
};

enum class SecondaryRule { TimePriority, SizePriority };
enum class DefaultRule { SequenceNumber, OrderId };

std::unique_ptr<SecondaryPrecedenceRule> make_secondary_rule(SecondaryRule rule);
std::unique_ptr<DefaultPrecedenceRule> make_default_rule(DefaultRule rule);

/// Strict total order on resting orders of one side: better price, then
/// the secondary rule, then the default rule, then sequence number.
class PrecedenceComparator {
public:
    PrecedenceComparator(SecondaryRule secondary, DefaultRule default_rule);

    bool ranks_before(const Order& a, const Order& b) const;
    bool operator()(const Order& a, const Order& b) const { return ranks_before(a, b); }

    SecondaryRule secondary() const { return secondary_; }
    DefaultRule default_rule() const { return default_; }

private:
    SecondaryRule secondary_;
    DefaultRule default_;
    std::shared_ptr<const SecondaryPrecedenceRule> secondary_rule_;
    std::shared_ptr<const DefaultPrecedenceRule> default_rule_;
};

// --- order book -----------------------------------------------------------

class OrderBook {
public:
    explicit OrderBook(PrecedenceComparator comparator) : comparator_(std::move(comparator)) {}

    const PrecedenceComparator& comparator() const { return comparator_; }

    /// Resting orders on one side, best first.
    const std::vector<Order>& side(const std::string& symbol, Side side) const;
    std::vector<Order>& mutable_side(const std::string& symbol, Side side);

    void rest(Order order);
    /// Re-ranks after remaining quantities changed.
    void reorder(const std::string& symbol);

    /// True when the best bid is at or above the best ask.
    bool crossed(const std::string& symbol) const;
    std::optional<Money> best_price(const std::string& symbol, Side side) const;
    std::int64_t depth(const std::string& symbol, Side side) const;
    std::vector<std::string> symbols() const;
    bool empty() const;

private:
    struct Sides {
        std::vector<Order> bids;
        std::vector<Order> asks;
    };
    PrecedenceComparator comparator_;
    std::map<std::string, Sides> books_;
};

/// Whether a resting order at `resting_price` can trade with `incoming`.
bool price_compatible(const Order& incoming, const Money& resting_price);

// --- matching -------------------------------------------------------------

struct MatchResult {
    std::vector<Trade> trades;
    /// Final state of the incoming order.
    Order order;
    /// Resting orders whose remaining quantity changed, in their new state.
    std::vector<Order> touched;
};

class TradeIdSource {
public:
    explicit TradeIdSource(std::string prefix) : prefix_(std::move(prefix)) {}
    std::string next() { return prefix_ + std::to_string(++counter_); }

private:
    std::string prefix_;
    std::uint64_t counter_ = 0;
};

/// The peer algorithm for one order type.
class MatchingAlgorithm {
public:
    virtual ~MatchingAlgorithm() = default;
    virtual OrderType order_type() const = 0;
    virtual MatchResult match(OrderBook& book, Order incoming, const ParticipantId& exchange,
                              TradeIdSource& ids) const = 0;
};

std::unique_ptr<MatchingAlgorithm> make_matching_algorithm(OrderType type);

/// Book plus the bound matching algorithms. Orders must already carry a
/// unique sequence number.
class MatchingEngine {
public:
    MatchingEngine(PrecedenceComparator comparator, const std::set<OrderType>& algorithms,
                   ParticipantId exchange, std::string trade_prefix = "T");

    bool supports(OrderType type) const { return algorithms_.contains(type); }
    std::set<OrderType> supported() const;

    /// Throws std::logic_error for unsupported types or a crossed book
    /// afterwards; both are defects upstream.
    MatchResult submit(Order order);

    const OrderBook& book() const { return book_; }

private:
    OrderBook book_;
    std::map<OrderType, std::unique_ptr<MatchingAlgorithm>> algorithms_;
    ParticipantId exchange_;
    TradeIdSource ids_;
};

// --- exchange participant -------------------------------------------------

/// Extra validation rule bound at the exchange-order-validation point.
class OrderValidationRule {
public:
    virtual ~OrderValidationRule() = default;
    virtual std::string_view name() const = 0;
    /// Name of the violated rule, or nullopt.
    virtual std::optional<std::string> check(const Order& order) const = 0;
};

struct ExchangeSettings {
    std::set<std::string> listed_symbols;
    std::int64_t tick_size = 1;             // minor units
    std::int64_t max_order_size = 1'000'000;  // shares
    ParticipantId clearing{ParticipantRole::ClearingCorporation, "CC1"};
};

inline constexpr std::string_view kExchangeValidationStage = "exchange_validation";

class Exchange : public Participant {
public:
    Exchange(ParticipantId id, const fm::ProductSpec& product, ExchangeSettings settings,
             ServiceRegistry& registry);
    ~Exchange() override;

    const ParticipantId& participant_id() const override { return id_; }
    const ExchangeSettings& settings() const { return settings_; }
    std::set<OrderType> supported_order_types() const { return engine_.supported(); }

    /// Base rules, in order: UnknownSymbol, NonPositiveQuantity,
    /// MissingPrice / PriceNotAllowed, NonPositivePrice,
    /// UnsupportedOrderType; then the bound rule variants. Accepted orders
    /// receive the next sequence number and status validated.
    Outcome<Order> validate_incoming_order(Order order);

    /// Precondition: `order` came back from validate_incoming_order.
    MatchResult submit_order(Order order);

    /// validate_incoming_order followed by submit_order.
    Outcome<MatchResult> accept(Order order);

    /// Sends every executed, unreported trade to the clearing corporation.
    /// Returns the clearing corporation's rejections (empty on success).
    std::vector<Rejection> report_trades_rec();

    const Order* find_order(const std::string& order_id) const;
    const std::vector<Trade>& trades() const { return trades_; }
    std::vector<Trade> trades_for_order(const std::string& order_id) const;
    std::size_t unreported_trades() const { return trades_.size() - reported_; }
    const OrderBook& book() const { return engine_.book(); }

    /// `symbol|price|qty|buy_order|sell_order` lines prefixed by trade id.
    std::vector<std::string> trade_log() const;

private:
    ParticipantId id_;
    ExchangeSettings settings_;
    ServiceRegistry& registry_;
    MatchingEngine engine_;
    std::vector<std::unique_ptr<OrderValidationRule>> rules_;
    std::map<std::string, Order> orders_;
    std::vector<Trade> trades_;
    std::size_t reported_ = 0;
    std::uint64_t next_seq_ = 0;
};

/// `trade_id|symbol|price|qty|buy_order|sell_order`
std::string format_trade_line(const Trade& trade);

}  // namespace seco::exchange
