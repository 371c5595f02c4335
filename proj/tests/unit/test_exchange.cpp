#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "seco/exchange.hpp"

using namespace seco;
using namespace seco::exchange;

namespace {

const ParticipantId kX1{ParticipantRole::Exchange, "X1"};

ExchangeSettings settings() {
    ExchangeSettings s;
    s.listed_symbols = {"AAA"};
    s.tick_size = 5;
    s.max_order_size = 1000;
    return s;
}

Order order(std::string id, Side side, std::int64_t qty, std::optional<std::int64_t> price,
            OrderType type = OrderType::Limit, std::string broker = "B1") {
    Order o;
    o.order_id = std::move(id);
    o.client = "client-" + broker;
    o.broker = fixture::broker(broker);
    o.side = side;
    o.symbol = "AAA";
    o.quantity = qty;
    if (price) o.limit_price = Money(*price);
    o.type = type;
    return o;
}

std::string rule_of(Exchange& x, Order o) {
    auto r = x.validate_incoming_order(std::move(o));
    REQUIRE_FALSE(r.ok());
    REQUIRE(r.rejection().stage == "exchange_validation");
    return r.rejection().rule;
}

}  // namespace

TEST_CASE("base validation rules", "[exchange]") {
    fixture::ClearingRig rig(fixture::product("seco_a"));
    Exchange x(kX1, fixture::product("seco_a"), settings(), rig.registry);
    auto unknown = order("O1", Side::Buy, 10, 1000);
    unknown.symbol = "ZZZ";
    REQUIRE(rule_of(x, unknown) == "UnknownSymbol");
    REQUIRE(rule_of(x, order("O2", Side::Buy, 0, 1000)) == "NonPositiveQuantity");
    REQUIRE(rule_of(x, order("O3", Side::Buy, 10, std::nullopt)) == "MissingPrice");
    REQUIRE(rule_of(x, order("O4", Side::Buy, 10, 1000, OrderType::Market)) == "PriceNotAllowed");
    REQUIRE(rule_of(x, order("O5", Side::Buy, 10, -5)) == "NonPositivePrice");
    REQUIRE(rule_of(x, order("O6", Side::Buy, 10, 1002)) == "TickSizeViolation");
    // seco_a binds no order-size limit.
    REQUIRE(x.validate_incoming_order(order("O7", Side::Buy, 5000, 1000)).ok());
}

TEST_CASE("product bindings decide order types and size limits", "[exchange]") {
    fixture::ClearingRig rig(fixture::product("seco_b"));
    Exchange x(kX1, fixture::product("seco_b"), settings(), rig.registry);
    REQUIRE_FALSE(x.supported_order_types().contains(OrderType::FillOrKill));
    REQUIRE(rule_of(x, order("O1", Side::Buy, 10, 1000, OrderType::FillOrKill)) == "UnsupportedOrderType");
    REQUIRE(rule_of(x, order("O2", Side::Buy, 1001, 1000)) == "MaxOrderSizeExceeded");
    REQUIRE(rule_of(x, order("O3", Side::Buy, 10, 1002)) == "TickSizeViolation");
    REQUIRE(x.validate_incoming_order(order("O4", Side::Buy, 1000, 1005)).ok());
}

TEST_CASE("accepted orders get increasing sequence numbers and ids stay unique", "[exchange]") {
    fixture::ClearingRig rig(fixture::product("seco_a"));
    Exchange x(kX1, fixture::product("seco_a"), settings(), rig.registry);
    auto a = x.accept(order("O1", Side::Sell, 10, 1000));
    auto b = x.accept(order("O2", Side::Sell, 10, 1005));
    REQUIRE(a.ok());
    REQUIRE(b.ok());
    REQUIRE(a.value().order.seq < b.value().order.seq);
    REQUIRE(rule_of(x, order("O1", Side::Buy, 10, 1000)) == "DuplicateOrderId");
    REQUIRE(x.find_order("O1")->status == OrderStatus::Resting);
    REQUIRE_THROWS_AS(x.submit_order(order("O9", Side::Buy, 10, 1000)), std::logic_error);
}

TEST_CASE("trades are reported to clearing exactly once", "[exchange]") {
    fixture::ClearingRig rig(fixture::product("seco_a"));
    Exchange x(kX1, fixture::product("seco_a"), settings(), rig.registry);
    rig.registry.register_service(kX1, x);
    REQUIRE(x.accept(order("S1", Side::Sell, 40, 1000, OrderType::Limit, "B2")).ok());
    auto r = x.accept(order("B1", Side::Buy, 40, 1010, OrderType::Limit, "B1"));
    REQUIRE(r.value().trades.size() == 1);
    REQUIRE(x.unreported_trades() == 1);
    REQUIRE(x.report_trades_rec().empty());
    REQUIRE(x.unreported_trades() == 0);
    REQUIRE(rig.cc->queued_trades() == 1);
    REQUIRE(x.report_trades_rec().empty());
    REQUIRE(rig.cc->queued_trades() == 1);
    REQUIRE(x.trades_for_order("S1").size() == 1);
    REQUIRE(x.trade_log().size() == 1);
    REQUIRE(format_trade_line(x.trades()[0]) == "X1-T1|AAA|1000|40|B1|S1");
}
