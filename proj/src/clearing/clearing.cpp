#include "seco/clearing.hpp"

#include <algorithm>
#include <tuple>

#include "seco/catalog.hpp"

namespace seco::clearing {

// --- infrastructure services ------------------------------------------------

std::string ClearingBank::annotate(const std::string& cause) const { return cause + " via " + id_.id; }

std::uint64_t ClearingBank::transfer_money(const std::string& from, const std::string& to,
                                           const Money& amount, const std::string& cause) {
    if (offline_) throw ServiceUnavailable("clearing bank " + id_.id + " is offline");
    return ledger_.transfer_money(from, to, amount, annotate(cause));
}

Transfer ClearingBank::stage_money(const MoneyLeg& leg, const std::string& cause) const {
    if (offline_) throw ServiceUnavailable("clearing bank " + id_.id + " is offline");
    return Transfer::money(leg.payer, leg.payee, leg.amount, annotate(cause));
}

std::string Depository::annotate(const std::string& cause) const { return cause + " via " + id_.id; }

std::uint64_t Depository::transfer_equity(const std::string& from, const std::string& to,
                                          const std::string& symbol, std::int64_t qty,
                                          const std::string& cause) {
    if (offline_) throw ServiceUnavailable("depository " + id_.id + " is offline");
    return ledger_.transfer_equity(from, to, symbol, qty, annotate(cause));
}

Transfer Depository::stage_equity(const EquityLeg& leg, const std::string& cause) const {
    if (offline_) throw ServiceUnavailable("depository " + id_.id + " is offline");
    return Transfer::equity(leg.deliverer, leg.receiver, leg.symbol, leg.quantity, annotate(cause));
}

SettlementFailed::SettlementFailed(std::string instruction_id, std::string leg, const std::string& cause)
    : std::runtime_error("settlement instruction " + instruction_id + " failed on " + leg + " leg: " + cause),
      instruction_id_(std::move(instruction_id)),
      leg_(std::move(leg)) {}

// --- pure clearing ------------------------------------------------------------

std::vector<Obligation> gross_obligations(const std::vector<ResolvedTrade>& trades) {
    std::vector<Obligation> out;
    for (const auto& rt : trades) {
        const auto& t = rt.trade;
        const auto value = (t.price * t.quantity).minor_units();
        out.push_back({rt.buyer_account, rt.seller_account, t.symbol, t.quantity, -value, {t.trade_id}});
        out.push_back({rt.seller_account, rt.buyer_account, t.symbol, -t.quantity, value, {t.trade_id}});
    }
    return out;
}

std::vector<Obligation> net_obligations(const std::vector<ResolvedTrade>& trades,
                                        const std::string& ccp_account) {
    std::map<std::pair<std::string, std::string>, Obligation> by_key;
    auto add = [&](const std::string& account, const Trade& t, std::int64_t sign) {
        auto& o = by_key[{account, t.symbol}];
        o.party = account;
        o.counterparty = ccp_account;
        o.symbol = t.symbol;
        o.net_quantity += sign * t.quantity;
        o.net_money -= sign * (t.price * t.quantity).minor_units();
        if (std::find(o.trade_refs.begin(), o.trade_refs.end(), t.trade_id) == o.trade_refs.end()) {
            o.trade_refs.push_back(t.trade_id);
        }
    };
    for (const auto& rt : trades) {
        add(rt.buyer_account, rt.trade, +1);
        add(rt.seller_account, rt.trade, -1);
    }
    std::vector<Obligation> out;
    for (auto& [_, o] : by_key) {
        if (o.net_quantity != 0 || o.net_money != 0) out.push_back(std::move(o));
    }
    return out;
}

// --- clearing corporation ------------------------------------------------------

namespace {

namespace v = catalog::variant;

class ListedSymbolRule final : public TradeValidationRule {
public:
    explicit ListedSymbolRule(std::set<std::string> listed) : listed_(std::move(listed)) {}
    std::string_view name() const override { return v::kListedSymbolCheck; }
    std::optional<std::string> check(const Trade& t) const override {
        if (!listed_.contains(t.symbol)) return "UnlistedSymbol";
        return std::nullopt;
    }

private:
    std::set<std::string> listed_;
};

class PriceBandRule final : public TradeValidationRule {
public:
    PriceBandRule(std::int64_t lo, std::int64_t hi) : lo_(lo), hi_(hi) {}
    std::string_view name() const override { return v::kPriceBandCheck; }
    std::optional<std::string> check(const Trade& t) const override {
        const auto p = t.price.minor_units();
        if (p < lo_ || p > hi_) return "PriceOutOfBand";
        return std::nullopt;
    }

private:
    std::int64_t lo_;
    std::int64_t hi_;
};

Rejection reject(std::string rule, std::string detail = {}) {
    return Rejection{std::string(kTradeValidationStage), std::move(rule), std::move(detail)};
}

}  // namespace

ClearingCorporation::ClearingCorporation(ParticipantId id, const fm::ProductSpec& product,
                                         ClearingSettings settings, ServiceRegistry& registry,
                                         Ledger& ledger)
    : id_(std::move(id)), settings_(std::move(settings)), registry_(registry), ledger_(ledger) {
    const auto rule = catalog::single_variant(product, catalog::vp::kTradeClearing,
                                              {v::kTradeForTrade, v::kMultilateralNetting});
    rule_ = rule == v::kTradeForTrade ? ClearingRule::TradeForTrade : ClearingRule::MultilateralNetting;
    for (const auto& name : catalog::bound_variants(product, catalog::vp::kTradeValidation,
                                                    {v::kListedSymbolCheck, v::kPriceBandCheck}, false)) {
        if (name == v::kListedSymbolCheck) {
            rules_.push_back(std::make_unique<ListedSymbolRule>(settings_.listed_symbols));
        } else {
            rules_.push_back(std::make_unique<PriceBandRule>(settings_.min_price, settings_.max_price));
        }
    }
}

ClearingCorporation::~ClearingCorporation() = default;

std::optional<std::string> ClearingCorporation::party_account(const TradeParty& party) const {
    auto account = party.institutional() ? house_account(*party.custodian) : house_account(party.broker);
    if (!ledger_.has_account(account)) return std::nullopt;
    return account;
}

Outcome<Accepted> ClearingCorporation::submit_trade(const Trade& trade) {
    if (trade.quantity <= 0) return reject("NonPositiveQuantity", trade.trade_id);
    if (!trade.price.is_positive()) return reject("NonPositivePrice", trade.trade_id);
    if (trades_.contains(trade.trade_id)) return reject("DuplicateTrade", trade.trade_id);
    for (const auto* party : {&trade.buyer, &trade.seller}) {
        if (!party_account(*party)) return reject("UnknownAccount", party->order_id);
    }
    for (const auto& rule : rules_) {
        if (auto violated = rule->check(trade)) return reject(*violated, trade.trade_id);
    }
    Trade stored = trade;
    stored.status = TradeStatus::Executed;
    trades_.emplace(trade.trade_id, TradeEntry{stored, TradeStatus::Executed});
    queue_.push_back(trade.trade_id);
    return Accepted{};
}

Outcome<Accepted> ClearingCorporation::submit_allocation(const AllocationRecord& r) {
    if (allocations_.contains(r.alloc_id)) return reject("DuplicateAllocation", r.alloc_id);
    if (r.quantity <= 0) return reject("NonPositiveQuantity", r.alloc_id);

    std::int64_t executed_at_price = 0;
    bool order_seen = false;
    for (const auto& [_, e] : trades_) {
        for (auto side : {Side::Buy, Side::Sell}) {
            const auto& party = e.trade.party(side);
            if (party.order_id != r.block_order_id || !party.institutional()) continue;
            if (side != r.side) return reject("SideMismatch", r.alloc_id);
            if (*party.custodian != r.custodian) return reject("CustodianMismatch", r.alloc_id);
            if (e.trade.symbol != r.symbol) return reject("SymbolMismatch", r.alloc_id);
            order_seen = true;
            if (e.trade.price == r.price) executed_at_price += e.trade.quantity;
        }
    }
    if (!order_seen) return reject("UnknownOrder", r.block_order_id);
    if (executed_at_price == 0) return reject("PriceMismatch", r.alloc_id);

    std::int64_t allocated = r.quantity;
    for (const auto& [_, a] : allocations_) {
        if (a.block_order_id == r.block_order_id && a.price == r.price) allocated += a.quantity;
    }
    if (allocated > executed_at_price) return reject("QuantityExceedsExecution", r.alloc_id);
    allocations_.emplace(r.alloc_id, r);
    return Accepted{};
}

std::optional<std::string> ClearingCorporation::resolve(const Trade& trade, Side side) const {
    const auto& party = trade.party(side);
    if (!party.institutional()) return party_account(party);

    // The institutional side clears only once its block is fully allocated
    // at every execution price.
    std::map<std::int64_t, std::int64_t> executed;
    for (const auto& [_, e] : trades_) {
        if (e.trade.party(side).order_id == party.order_id) {
            executed[e.trade.price.minor_units()] += e.trade.quantity;
        }
    }
    std::map<std::int64_t, std::int64_t> allocated;
    for (const auto& [_, a] : allocations_) {
        if (a.block_order_id == party.order_id && a.side == side) {
            allocated[a.price.minor_units()] += a.quantity;
        }
    }
    if (executed != allocated) return std::nullopt;
    return party_account(party);
}

std::vector<Obligation> ClearingCorporation::clear_rec() {
    Batch batch{rule_, {}, {}};
    std::vector<std::string> still_queued;
    for (const auto& id : queue_) {
        auto& entry = trades_.at(id);
        auto buyer = resolve(entry.trade, Side::Buy);
        auto seller = resolve(entry.trade, Side::Sell);
        if (!buyer || !seller) {
            still_queued.push_back(id);
            continue;
        }
        entry.status = TradeStatus::Cleared;
        entry.trade.status = TradeStatus::Cleared;
        batch.trades.push_back({entry.trade, *buyer, *seller});
    }
    queue_ = std::move(still_queued);
    if (batch.trades.empty()) return {};

    batch.obligations = rule_ == ClearingRule::TradeForTrade
                            ? gross_obligations(batch.trades)
                            : net_obligations(batch.trades, ccp_account());
    auto out = batch.obligations;
    pending_.push_back(std::move(batch));
    return out;
}

std::size_t ClearingCorporation::pending_obligations() const {
    std::size_t n = 0;
    for (const auto& b : pending_) n += b.obligations.size();
    return n;
}

std::vector<SettlementInstruction> ClearingCorporation::settle_rec() {
    std::vector<SettlementInstruction> out;
    while (!pending_.empty()) {
        auto& batch = pending_.front();
        if (batch.rule == ClearingRule::TradeForTrade) {
            settle_gross(batch, out);
        } else {
            settle_netting(batch, out);
        }
        pending_.erase(pending_.begin());
    }
    return out;
}

void ClearingCorporation::settle_gross(Batch& batch, std::vector<SettlementInstruction>& out) {
    auto& bank = registry_.lookup_as<ClearingBank>(settings_.bank);
    auto& depository = registry_.lookup_as<Depository>(settings_.depository);

    // Trades settled by an earlier, interrupted call are already gone from
    // the batch, so a retry resumes where it stopped.
    while (!batch.trades.empty()) {
        const auto& rt = batch.trades.front();
        const auto& t = rt.trade;
        SettlementInstruction si;
        si.instruction_id = id_.id + "-SI" + std::to_string(instruction_counter_ + 1);
        si.trade_refs = {t.trade_id};
        if (rt.buyer_account != rt.seller_account) {
            si.money_leg = MoneyLeg{rt.buyer_account, rt.seller_account, t.price * t.quantity};
            si.equity_leg = EquityLeg{rt.seller_account, rt.buyer_account, t.symbol, t.quantity};
        }

        std::vector<Transfer> transfers;
        std::vector<std::string> legs;
        try {
            if (si.money_leg) {
                transfers.push_back(bank.stage_money(*si.money_leg, si.instruction_id));
                legs.push_back("money");
            }
            if (si.equity_leg) {
                legs.push_back("equity");
                transfers.push_back(depository.stage_equity(*si.equity_leg, si.instruction_id));
            }
            ledger_.commit(transfers);
        } catch (const ServiceUnavailable& e) {
            throw SettlementFailed(si.instruction_id, legs.empty() ? "money" : legs.back(), e.what());
        } catch (const LedgerError& e) {
            throw SettlementFailed(si.instruction_id, legs.at(e.batch_index().value_or(0)), e.what());
        }

        ++instruction_counter_;
        mark_settled(si.trade_refs);
        executed_.push_back(si);
        out.push_back(std::move(si));
        batch.trades.erase(batch.trades.begin());
    }
}

void ClearingCorporation::settle_netting(Batch& batch, std::vector<SettlementInstruction>& out) {
    auto& bank = registry_.lookup_as<ClearingBank>(settings_.bank);
    auto& depository = registry_.lookup_as<Depository>(settings_.depository);
    const auto ccp = ccp_account();

    std::vector<SettlementInstruction> instructions;
    std::uint64_t counter = instruction_counter_;
    for (const auto& o : batch.obligations) {
        SettlementInstruction si;
        si.instruction_id = id_.id + "-SI" + std::to_string(++counter);
        si.trade_refs = o.trade_refs;
        if (o.net_money < 0) {
            si.money_leg = MoneyLeg{o.party, ccp, Money(-o.net_money, ledger_.currency())};
        } else if (o.net_money > 0) {
            si.money_leg = MoneyLeg{ccp, o.party, Money(o.net_money, ledger_.currency())};
        }
        if (o.net_quantity < 0) {
            si.equity_leg = EquityLeg{o.party, ccp, o.symbol, -o.net_quantity};
        } else if (o.net_quantity > 0) {
            si.equity_leg = EquityLeg{ccp, o.party, o.symbol, o.net_quantity};
        }
        instructions.push_back(std::move(si));
    }

    // The whole cycle commits as one batch. Pay-ins go first so the central
    // counterparty never needs to advance funds or shares it does not hold.
    struct Staged {
        std::size_t instruction;
        std::string leg;
    };
    std::vector<Transfer> transfers;
    std::vector<Staged> origin;
    auto stage = [&](bool pay_in) {
        for (std::size_t i = 0; i < instructions.size(); ++i) {
            const auto& si = instructions[i];
            if (si.money_leg && (si.money_leg->payee == ccp) == pay_in) {
                origin.push_back({i, "money"});
                transfers.push_back(bank.stage_money(*si.money_leg, si.instruction_id));
            }
            if (si.equity_leg && (si.equity_leg->receiver == ccp) == pay_in) {
                origin.push_back({i, "equity"});
                transfers.push_back(depository.stage_equity(*si.equity_leg, si.instruction_id));
            }
        }
    };
    try {
        stage(true);
        stage(false);
        ledger_.commit(transfers);
    } catch (const ServiceUnavailable& e) {
        const auto& o = origin.back();
        throw SettlementFailed(instructions[o.instruction].instruction_id, o.leg, e.what());
    } catch (const LedgerError& e) {
        const auto& o = origin.at(e.batch_index().value_or(0));
        throw SettlementFailed(instructions[o.instruction].instruction_id, o.leg, e.what());
    }

    instruction_counter_ = counter;
    for (const auto& rt : batch.trades) mark_settled({rt.trade.trade_id});
    for (auto& si : instructions) {
        executed_.push_back(si);
        out.push_back(std::move(si));
    }
}

void ClearingCorporation::mark_settled(const std::vector<std::string>& trade_ids) {
    for (const auto& id : trade_ids) {
        auto& e = trades_.at(id);
        if (e.status == TradeStatus::Settled) continue;
        e.status = TradeStatus::Settled;
        e.trade.status = TradeStatus::Settled;
        settled_order_.push_back(id);
    }
}

std::optional<TradeStatus> ClearingCorporation::trade_status(const std::string& trade_id) const {
    auto it = trades_.find(trade_id);
    if (it == trades_.end()) return std::nullopt;
    return it->second.status;
}

std::vector<Trade> ClearingCorporation::settled_trades() const {
    std::vector<Trade> out;
    for (const auto& id : settled_order_) out.push_back(trades_.at(id).trade);
    return out;
}

bool ClearingCorporation::allocation_settled(const std::string& alloc_id) const {
    auto it = allocations_.find(alloc_id);
    if (it == allocations_.end()) return false;
    const auto& r = it->second;
    bool any = false;
    for (const auto& [_, e] : trades_) {
        if (e.trade.party(r.side).order_id != r.block_order_id) continue;
        if (e.status != TradeStatus::Settled) return false;
        any = true;
    }
    return any;
}

std::string format_instruction_line(const SettlementInstruction& si) {
    std::string refs;
    for (const auto& r : si.trade_refs) refs += (refs.empty() ? "" : ",") + r;
    std::string out = si.instruction_id + "|" + refs + "|";
    if (si.money_leg) {
        out += si.money_leg->payer + "|" + si.money_leg->payee + "|" +
               std::to_string(si.money_leg->amount.minor_units()) + "|";
    } else {
        out += "|||";
    }
    if (si.equity_leg) {
        out += si.equity_leg->deliverer + "|" + si.equity_leg->receiver + "|" + si.equity_leg->symbol + "|" +
               std::to_string(si.equity_leg->quantity);
    } else {
        out += "|||";
    }
    return out;
}

}  // namespace seco::clearing
