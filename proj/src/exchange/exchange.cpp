#include "seco/exchange.hpp"

#include <stdexcept>

#include "seco/catalog.hpp"
#include "seco/clearing.hpp"

namespace seco::exchange {

namespace {

namespace v = catalog::variant;

class TickSizeRule final : public OrderValidationRule {
public:
    explicit TickSizeRule(std::int64_t tick) : tick_(tick) {}
    std::string_view name() const override { return v::kTickSizeCheck; }
    std::optional<std::string> check(const Order& order) const override {
        if (order.limit_price && tick_ > 0 && order.limit_price->minor_units() % tick_ != 0) {
            return "TickSizeViolation";
        }
        return std::nullopt;
    }

private:
    std::int64_t tick_;
};

class MaxOrderSizeRule final : public OrderValidationRule {
public:
    explicit MaxOrderSizeRule(std::int64_t max) : max_(max) {}
    std::string_view name() const override { return v::kMaxOrderSizeCheck; }
    std::optional<std::string> check(const Order& order) const override {
        if (order.quantity > max_) return "MaxOrderSizeExceeded";
        return std::nullopt;
    }

private:
    std::int64_t max_;
};

PrecedenceComparator comparator_for(const fm::ProductSpec& product) {
    const auto secondary = catalog::single_variant(product, catalog::vp::kSecondaryPrecedence,
                                                   {v::kTimePriority, v::kSizePriority});
    const auto fallback = catalog::single_variant(product, catalog::vp::kDefaultPrecedence,
                                                  {v::kSequenceNumberRule, v::kOrderIdRule});
    return PrecedenceComparator(
        secondary == v::kTimePriority ? SecondaryRule::TimePriority : SecondaryRule::SizePriority,
        fallback == v::kSequenceNumberRule ? DefaultRule::SequenceNumber : DefaultRule::OrderId);
}

std::set<OrderType> algorithms_for(const fm::ProductSpec& product) {
    const auto bound = catalog::bound_variants(
        product, catalog::vp::kMatchingAlgorithms,
        {"MarketMatching", "LimitMatching", "ImmediateOrCancelMatching", "FillOrKillMatching"});
    std::set<OrderType> out;
    for (auto t : {OrderType::Market, OrderType::Limit, OrderType::ImmediateOrCancel,
                   OrderType::FillOrKill}) {
        if (catalog::binds(bound, catalog::matching_algorithm_feature(t))) out.insert(t);
    }
    return out;
}

Rejection reject(std::string rule, std::string detail = {}) {
    return Rejection{std::string(kExchangeValidationStage), std::move(rule), std::move(detail)};
}

}  // namespace

Exchange::Exchange(ParticipantId id, const fm::ProductSpec& product, ExchangeSettings settings,
                   ServiceRegistry& registry)
    : id_(std::move(id)),
      settings_(std::move(settings)),
      registry_(registry),
      engine_(comparator_for(product), algorithms_for(product), id_, id_.id + "-T") {
    for (const auto& name : catalog::bound_variants(product, catalog::vp::kExchangeOrderValidation,
                                                    {v::kTickSizeCheck, v::kMaxOrderSizeCheck})) {
        if (name == v::kTickSizeCheck) {
            rules_.push_back(std::make_unique<TickSizeRule>(settings_.tick_size));
        } else {
            rules_.push_back(std::make_unique<MaxOrderSizeRule>(settings_.max_order_size));
        }
    }
}

Exchange::~Exchange() = default;

Outcome<Order> Exchange::validate_incoming_order(Order order) {
    if (!settings_.listed_symbols.contains(order.symbol)) return reject("UnknownSymbol", order.symbol);
    if (order.quantity <= 0) return reject("NonPositiveQuantity");
    if (requires_price(order.type) && !order.limit_price) return reject("MissingPrice");
    if (!requires_price(order.type) && order.limit_price) return reject("PriceNotAllowed");
    if (order.limit_price && !order.limit_price->is_positive()) return reject("NonPositivePrice");
    if (!engine_.supports(order.type)) {
        return reject("UnsupportedOrderType", std::string(to_string(order.type)));
    }
    for (const auto& rule : rules_) {
        if (auto violated = rule->check(order)) return reject(*violated);
    }
    if (orders_.contains(order.order_id)) return reject("DuplicateOrderId", order.order_id);
    order.seq = ++next_seq_;
    order.remaining = order.quantity;
    order.status = OrderStatus::Validated;
    return order;
}

MatchResult Exchange::submit_order(Order order) {
    if (order.status != OrderStatus::Validated || order.seq == 0) {
        throw std::logic_error("order " + order.order_id + " was not validated by " + id_.to_string());
    }
    auto result = engine_.submit(std::move(order));
    orders_.insert_or_assign(result.order.order_id, result.order);
    for (const auto& t : result.touched) orders_.insert_or_assign(t.order_id, t);
    trades_.insert(trades_.end(), result.trades.begin(), result.trades.end());
    return result;
}

Outcome<MatchResult> Exchange::accept(Order order) {
    auto validated = validate_incoming_order(std::move(order));
    if (!validated) return validated.rejection();
    return submit_order(std::move(validated.value()));
}

std::vector<Rejection> Exchange::report_trades_rec() {
    std::vector<Rejection> rejections;
    if (reported_ == trades_.size()) return rejections;
    auto& cc = registry_.lookup_as<clearing::ClearingCorporation>(settings_.clearing);
    for (; reported_ < trades_.size(); ++reported_) {
        auto outcome = cc.submit_trade(trades_[reported_]);
        if (!outcome) rejections.push_back(outcome.rejection());
    }
    return rejections;
}

const Order* Exchange::find_order(const std::string& order_id) const {
    auto it = orders_.find(order_id);
    return it == orders_.end() ? nullptr : &it->second;
}

std::vector<Trade> Exchange::trades_for_order(const std::string& order_id) const {
    std::vector<Trade> out;
    for (const auto& t : trades_) {
        if (t.buy_order_id() == order_id || t.sell_order_id() == order_id) out.push_back(t);
    }
    return out;
}

std::vector<std::string> Exchange::trade_log() const {
    std::vector<std::string> out;
    for (const auto& t : trades_) out.push_back(format_trade_line(t));
    return out;
}

std::string format_trade_line(const Trade& t) {
    return t.trade_id + "|" + t.symbol + "|" + std::to_string(t.price.minor_units()) + "|" +
           std::to_string(t.quantity) + "|" + t.buy_order_id() + "|" + t.sell_order_id();
}

}  // namespace seco::exchange
