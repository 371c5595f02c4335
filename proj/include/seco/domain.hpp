// Orders, trades and the institutional post-trade documents shared by all
// participants.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "seco/money.hpp"
#include "seco/registry.hpp"

namespace seco {

enum class Side { Buy, Sell };
enum class OrderType { Market, Limit, ImmediateOrCancel, FillOrKill };
enum class OrderStatus { New, Validated, Routed, Resting, PartiallyFilled, Filled, Cancelled, Rejected };
enum class TradeStatus { Executed, Cleared, Settled };

std::string_view to_string(Side side);
std::string_view to_string(OrderType type);
std::string_view to_string(OrderStatus status);
std::string_view to_string(TradeStatus status);
Side parse_side(std::string_view text);
OrderType parse_order_type(std::string_view text);

/// Ledger account a participant holds in its own name ("broker/B1").
inline std::string house_account(const ParticipantId& pid) {
    return std::string(to_string(pid.role)) + "/" + pid.id;
}

inline Side opposite(Side side) { return side == Side::Buy ? Side::Sell : Side::Buy; }

/// Limit, immediate-or-cancel and fill-or-kill orders carry a limit price;
/// market orders must not.
inline bool requires_price(OrderType type) { return type != OrderType::Market; }

struct Order {
    std::string order_id;
    std::uint64_t seq = 0;  // assigned by the exchange on acceptance
    std::string client;
    ParticipantId broker{ParticipantRole::Broker, {}};
    /// Set for institutional block orders; the custodian settles them.
    std::optional<ParticipantId> custodian;
    Side side = Side::Buy;
    std::string symbol;
    std::int64_t quantity = 0;
    std::int64_t remaining = 0;
    std::optional<Money> limit_price;
    OrderType type = OrderType::Limit;
    OrderStatus status = OrderStatus::New;

    bool institutional() const { return custodian.has_value(); }
    std::int64_t filled() const { return quantity - remaining; }
};

/// One side of an executed trade, as the clearing corporation needs it.
struct TradeParty {
    std::string order_id;
    ParticipantId broker{ParticipantRole::Broker, {}};
    std::string client;
    std::optional<ParticipantId> custodian;

    bool institutional() const { return custodian.has_value(); }
};

struct Trade {
    std::string trade_id;
    TradeParty buyer;
    TradeParty seller;
    std::string symbol;
    Money price;
    std::int64_t quantity = 0;
    ParticipantId exchange{ParticipantRole::Exchange, {}};
    TradeStatus status = TradeStatus::Executed;

    const std::string& buy_order_id() const { return buyer.order_id; }
    const std::string& sell_order_id() const { return seller.order_id; }
    const TradeParty& party(Side side) const { return side == Side::Buy ? buyer : seller; }
};

struct AllocationDetail {
    std::string alloc_id;
    std::string institution;
    std::string end_client_account;
    std::string block_order_id;
    Side side = Side::Buy;
    std::string symbol;
    std::int64_t quantity = 0;
    Money price;

    friend bool operator==(const AllocationDetail&, const AllocationDetail&) = default;
};

struct Contract {
    std::string contract_id;
    ParticipantId broker{ParticipantRole::Broker, {}};
    ParticipantId custodian{ParticipantRole::Custodian, {}};
    std::string alloc_ref;
    std::string symbol;
    std::int64_t quantity = 0;
    Money price;

    friend bool operator==(const Contract&, const Contract&) = default;
};

struct Affirmation {
    std::string affirmation_id;
    ParticipantId custodian{ParticipantRole::Custodian, {}};
    ParticipantId broker{ParticipantRole::Broker, {}};
    std::vector<std::string> contract_ids;
};

struct MoneyLeg {
    std::string payer;
    std::string payee;
    Money amount;
};

struct EquityLeg {
    std::string deliverer;
    std::string receiver;
    std::string symbol;
    std::int64_t quantity = 0;
};

/// Delivery versus payment: the present legs commit together or not at all.
/// A leg is absent when its net amount is zero or both parties coincide.
struct SettlementInstruction {
    std::string instruction_id;
    std::optional<MoneyLeg> money_leg;
    std::optional<EquityLeg> equity_leg;
    std::vector<std::string> trade_refs;
};

/// A business-rule refusal; ordinary control flow, not an exception.
struct Rejection {
    std::string stage;
    std::string rule;
    std::string detail;

    std::string to_string() const;
};

template <typename T>
class Outcome {
public:
    Outcome(T value) : v_(std::move(value)) {}
    Outcome(Rejection rejection) : v_(std::move(rejection)) {}

    bool ok() const { return std::holds_alternative<T>(v_); }
    explicit operator bool() const { return ok(); }
    const T& value() const { return std::get<T>(v_); }
    T& value() { return std::get<T>(v_); }
    const Rejection& rejection() const { return std::get<Rejection>(v_); }

private:
    std::variant<T, Rejection> v_;
};

struct Accepted {};

}  // namespace seco
