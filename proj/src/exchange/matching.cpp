#include <algorithm>
#include <stdexcept>

#include "seco/exchange.hpp"

namespace seco::exchange {

namespace {

class TimePriorityRule final : public SecondaryPrecedenceRule {
public:
    std::string_view name() const override { return "TimePriority"; }
    std::weak_ordering compare(const Order& a, const Order& b) const override {
        return a.seq <=> b.seq;
    }
};

class SizePriorityRule final : public SecondaryPrecedenceRule {
public:
    std::string_view name() const override { return "SizePriority"; }
    // Larger remaining quantity trades first.
    std::weak_ordering compare(const Order& a, const Order& b) const override {
        return b.remaining <=> a.remaining;
    }
};

class SequenceNumberRule final : public DefaultPrecedenceRule {
public:
    std::string_view name() const override { return "SequenceNumberRule"; }
    std::weak_ordering compare(const Order& a, const Order& b) const override {
        return a.seq <=> b.seq;
    }
};

class OrderIdRule final : public DefaultPrecedenceRule {
public:
    std::string_view name() const override { return "OrderIdRule"; }
    std::weak_ordering compare(const Order& a, const Order& b) const override {
        const int c = a.order_id.compare(b.order_id);
        return c < 0 ? std::weak_ordering::less
                     : (c > 0 ? std::weak_ordering::greater : std::weak_ordering::equivalent);
    }
};

}  // namespace

std::unique_ptr<SecondaryPrecedenceRule> make_secondary_rule(SecondaryRule rule) {
    if (rule == SecondaryRule::TimePriority) return std::make_unique<TimePriorityRule>();
    return std::make_unique<SizePriorityRule>();
}

std::unique_ptr<DefaultPrecedenceRule> make_default_rule(DefaultRule rule) {
    if (rule == DefaultRule::SequenceNumber) return std::make_unique<SequenceNumberRule>();
    return std::make_unique<OrderIdRule>();
}

PrecedenceComparator::PrecedenceComparator(SecondaryRule secondary, DefaultRule default_rule)
    : secondary_(secondary),
      default_(default_rule),
      secondary_rule_(make_secondary_rule(secondary)),
      default_rule_(make_default_rule(default_rule)) {}

bool PrecedenceComparator::ranks_before(const Order& a, const Order& b) const {
    if (a.limit_price && b.limit_price) {
        const auto pa = a.limit_price->minor_units();
        const auto pb = b.limit_price->minor_units();
        if (pa != pb) return a.side == Side::Buy ? pa > pb : pa < pb;
    }
    if (auto c = secondary_rule_->compare(a, b); c != 0) return c < 0;
    if (auto c = default_rule_->compare(a, b); c != 0) return c < 0;
    return a.seq < b.seq;
}

// ---------------------------------------------------------------------------

const std::vector<Order>& OrderBook::side(const std::string& symbol, Side side) const {
    static const std::vector<Order> empty;
    auto it = books_.find(symbol);
    if (it == books_.end()) return empty;
    return side == Side::Buy ? it->second.bids : it->second.asks;
}

std::vector<Order>& OrderBook::mutable_side(const std::string& symbol, Side side) {
    auto& s = books_[symbol];
    return side == Side::Buy ? s.bids : s.asks;
}

void OrderBook::rest(Order order) {
    if (!order.limit_price) throw std::logic_error("order " + order.order_id + " cannot rest without a price");
    if (order.remaining <= 0) throw std::logic_error("order " + order.order_id + " has nothing to rest");
    auto& side = mutable_side(order.symbol, order.side);
    auto pos = std::upper_bound(side.begin(), side.end(), order, comparator_);
    side.insert(pos, std::move(order));
}

void OrderBook::reorder(const std::string& symbol) {
    auto it = books_.find(symbol);
    if (it == books_.end()) return;
    std::sort(it->second.bids.begin(), it->second.bids.end(), comparator_);
    std::sort(it->second.asks.begin(), it->second.asks.end(), comparator_);
}

bool OrderBook::crossed(const std::string& symbol) const {
    auto bid = best_price(symbol, Side::Buy);
    auto ask = best_price(symbol, Side::Sell);
    return bid && ask && *bid >= *ask;
}

std::optional<Money> OrderBook::best_price(const std::string& symbol, Side s) const {
    const auto& orders = side(symbol, s);
    if (orders.empty()) return std::nullopt;
    return orders.front().limit_price;
}

std::int64_t OrderBook::depth(const std::string& symbol, Side s) const {
    std::int64_t total = 0;
    for (const auto& o : side(symbol, s)) total += o.remaining;
    return total;
}

std::vector<std::string> OrderBook::symbols() const {
    std::vector<std::string> out;
    for (const auto& [s, _] : books_) out.push_back(s);
    return out;
}

bool OrderBook::empty() const {
    return std::all_of(books_.begin(), books_.end(),
                       [](const auto& kv) { return kv.second.bids.empty() && kv.second.asks.empty(); });
}

bool price_compatible(const Order& incoming, const Money& resting_price) {
    if (incoming.type == OrderType::Market) return true;
    if (!incoming.limit_price) return false;
    return incoming.side == Side::Buy ? *incoming.limit_price >= resting_price
                                      : *incoming.limit_price <= resting_price;
}

// ---------------------------------------------------------------------------

namespace {

TradeParty party_of(const Order& o) {
    return TradeParty{o.order_id, o.broker, o.client, o.custodian};
}

/// Trades `incoming` against the opposite side in precedence order while
/// prices are compatible, each at the resting order's price.
void sweep(OrderBook& book, MatchResult& result, const ParticipantId& exchange,
           TradeIdSource& ids) {
    Order& incoming = result.order;
    auto& opposite_side = book.mutable_side(incoming.symbol, opposite(incoming.side));
    while (incoming.remaining > 0 && !opposite_side.empty()) {
        Order& resting = opposite_side.front();
        if (!price_compatible(incoming, *resting.limit_price)) break;

        const auto qty = std::min(incoming.remaining, resting.remaining);
        Trade trade;
        trade.trade_id = ids.next();
        trade.buyer = party_of(incoming.side == Side::Buy ? incoming : resting);
        trade.seller = party_of(incoming.side == Side::Sell ? incoming : resting);
        trade.symbol = incoming.symbol;
        trade.price = *resting.limit_price;
        trade.quantity = qty;
        trade.exchange = exchange;
        result.trades.push_back(std::move(trade));

        incoming.remaining -= qty;
        resting.remaining -= qty;
        resting.status = resting.remaining == 0 ? OrderStatus::Filled : OrderStatus::PartiallyFilled;
        result.touched.push_back(resting);
        if (resting.remaining == 0) opposite_side.erase(opposite_side.begin());
    }
    if (incoming.remaining == 0) incoming.status = OrderStatus::Filled;
}

std::int64_t fillable_quantity(const OrderBook& book, const Order& incoming) {
    std::int64_t total = 0;
    for (const auto& resting : book.side(incoming.symbol, opposite(incoming.side))) {
        if (!price_compatible(incoming, *resting.limit_price)) break;
        total += resting.remaining;
        if (total >= incoming.remaining) break;
    }
    return total;
}

void cancel_remainder(Order& order) {
    if (order.remaining > 0) order.status = OrderStatus::Cancelled;
}

class LimitMatching final : public MatchingAlgorithm {
public:
    OrderType order_type() const override { return OrderType::Limit; }
    MatchResult match(OrderBook& book, Order incoming, const ParticipantId& exchange,
                      TradeIdSource& ids) const override {
        MatchResult r{{}, std::move(incoming), {}};
        sweep(book, r, exchange, ids);
        if (r.order.remaining > 0) {
            r.order.status = r.order.filled() > 0 ? OrderStatus::PartiallyFilled : OrderStatus::Resting;
            book.rest(r.order);
        }
        return r;
    }
};

class MarketMatching final : public MatchingAlgorithm {
public:
    OrderType order_type() const override { return OrderType::Market; }
    MatchResult match(OrderBook& book, Order incoming, const ParticipantId& exchange,
                      TradeIdSource& ids) const override {
        MatchResult r{{}, std::move(incoming), {}};
        sweep(book, r, exchange, ids);
        cancel_remainder(r.order);
        return r;
    }
};

class ImmediateOrCancelMatching final : public MatchingAlgorithm {
public:
    OrderType order_type() const override { return OrderType::ImmediateOrCancel; }
    MatchResult match(OrderBook& book, Order incoming, const ParticipantId& exchange,
                      TradeIdSource& ids) const override {
        MatchResult r{{}, std::move(incoming), {}};
        sweep(book, r, exchange, ids);
        cancel_remainder(r.order);
        return r;
    }
};

class FillOrKillMatching final : public MatchingAlgorithm {
public:
    OrderType order_type() const override { return OrderType::FillOrKill; }
    MatchResult match(OrderBook& book, Order incoming, const ParticipantId& exchange,
                      TradeIdSource& ids) const override {
        MatchResult r{{}, std::move(incoming), {}};
        if (fillable_quantity(book, r.order) < r.order.remaining) {
            r.order.status = OrderStatus::Cancelled;
            return r;
        }
        sweep(book, r, exchange, ids);
        return r;
    }
};

}  // namespace

std::unique_ptr<MatchingAlgorithm> make_matching_algorithm(OrderType type) {
    switch (type) {
        case OrderType::Market: return std::make_unique<MarketMatching>();
        case OrderType::Limit: return std::make_unique<LimitMatching>();
        case OrderType::ImmediateOrCancel: return std::make_unique<ImmediateOrCancelMatching>();
        case OrderType::FillOrKill: return std::make_unique<FillOrKillMatching>();
    }
    throw std::logic_error("unknown order type");
}

MatchingEngine::MatchingEngine(PrecedenceComparator comparator, const std::set<OrderType>& algorithms,
                               ParticipantId exchange, std::string trade_prefix)
    : book_(std::move(comparator)), exchange_(std::move(exchange)), ids_(std::move(trade_prefix)) {
    for (auto t : algorithms) algorithms_.emplace(t, make_matching_algorithm(t));
}

std::set<OrderType> MatchingEngine::supported() const {
    std::set<OrderType> out;
    for (const auto& [t, _] : algorithms_) out.insert(t);
    return out;
}

MatchResult MatchingEngine::submit(Order order) {
    auto it = algorithms_.find(order.type);
    if (it == algorithms_.end()) {
        throw std::logic_error("no matching algorithm bound for " + std::string(to_string(order.type)));
    }
    const auto symbol = order.symbol;
    auto result = it->second->match(book_, std::move(order), exchange_, ids_);
    book_.reorder(symbol);
    if (book_.crossed(symbol)) throw std::logic_error("order book for " + symbol + " is crossed");
    return result;
}

}  // namespace seco::exchange
