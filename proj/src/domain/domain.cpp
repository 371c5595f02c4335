#include "seco/domain.hpp"

#include <stdexcept>

namespace seco {

std::string_view to_string(Side side) { return side == Side::Buy ? "buy" : "sell"; }

std::string_view to_string(OrderType type) {
    switch (type) {
        case OrderType::Market: return "market";
        case OrderType::Limit: return "limit";
        case OrderType::ImmediateOrCancel: return "immediate_or_cancel";
        case OrderType::FillOrKill: return "fill_or_kill";
    }
    return "?";
}

std::string_view to_string(OrderStatus status) {
    switch (status) {
        case OrderStatus::New: return "new";
        case OrderStatus::Validated: return "validated";
        case OrderStatus::Routed: return "routed";
        case OrderStatus::Resting: return "resting";
        case OrderStatus::PartiallyFilled: return "partially_filled";
        case OrderStatus::Filled: return "filled";
        case OrderStatus::Cancelled: return "cancelled";
        case OrderStatus::Rejected: return "rejected";
    }
    return "?";
}

std::string_view to_string(TradeStatus status) {
    switch (status) {
        case TradeStatus::Executed: return "executed";
        case TradeStatus::Cleared: return "cleared";
        case TradeStatus::Settled: return "settled";
    }
    return "?";
}

Side parse_side(std::string_view text) {
    if (text == "buy") return Side::Buy;
    if (text == "sell") return Side::Sell;
    throw std::invalid_argument("unknown side '" + std::string(text) + "'");
}

OrderType parse_order_type(std::string_view text) {
    for (auto t : {OrderType::Market, OrderType::Limit, OrderType::ImmediateOrCancel,
                   OrderType::FillOrKill}) {
        if (to_string(t) == text) return t;
    }
    if (text == "ioc") return OrderType::ImmediateOrCancel;
    if (text == "fok") return OrderType::FillOrKill;
    throw std::invalid_argument("unknown order type '" + std::string(text) + "'");
}

std::string Rejection::to_string() const {
    std::string out = stage.empty() ? rule : stage + "/" + rule;
    if (!detail.empty()) out += " (" + detail + ")";
    return out;
}

}  // namespace seco
