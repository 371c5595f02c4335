#include "seco/broker.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "seco/catalog.hpp"
#include "seco/clearing.hpp"
#include "seco/custodian.hpp"
#include "seco/exchange.hpp"

namespace seco::broker {

namespace {

namespace v = catalog::variant;

using Window = std::vector<std::tuple<std::string, std::string, Side, std::int64_t>>;

// Order value in minor units without overflow.
__int128 order_value(std::int64_t qty, const Money& price) {
    return static_cast<__int128>(qty) * price.minor_units();
}

class SymbolFormatRule final : public OrderRule {
public:
    std::string_view name() const override { return v::kSymbolFormatCheck; }
    std::optional<std::string> check(const OrderDraft& d, const std::optional<Money>&) const override {
        const bool ok = !d.symbol.empty() && d.symbol.size() <= 5 &&
                        std::all_of(d.symbol.begin(), d.symbol.end(),
                                    [](unsigned char c) { return std::isupper(c) != 0; });
        if (!ok) return "InvalidSymbol";
        return std::nullopt;
    }
};

class LotSizeRule final : public OrderRule {
public:
    explicit LotSizeRule(std::int64_t lot) : lot_(lot) {}
    std::string_view name() const override { return v::kLotSizeCheck; }
    std::optional<std::string> check(const OrderDraft& d, const std::optional<Money>&) const override {
        if (lot_ > 1 && d.quantity % lot_ != 0) return "LotSizeViolation";
        return std::nullopt;
    }

private:
    std::int64_t lot_;
};

class DuplicateOrderRule final : public OrderRule {
public:
    explicit DuplicateOrderRule(const Window& window) : window_(window) {}
    std::string_view name() const override { return v::kDuplicateOrderDetection; }
    std::optional<std::string> check(const OrderDraft& d, const std::optional<Money>&) const override {
        const auto key = std::make_tuple(d.client, d.symbol, d.side, d.quantity);
        if (std::find(window_.begin(), window_.end(), key) != window_.end()) return "DuplicateOrder";
        return std::nullopt;
    }

private:
    const Window& window_;
};

class MaxQuantityRule final : public OrderRule {
public:
    explicit MaxQuantityRule(std::int64_t max) : max_(max) {}
    std::string_view name() const override { return v::kMaxOrderQuantityRisk; }
    std::optional<std::string> check(const OrderDraft& d, const std::optional<Money>&) const override {
        if (d.quantity > max_) return "MaxQuantityExceeded";
        return std::nullopt;
    }

private:
    std::int64_t max_;
};

class FatFingerRule final : public OrderRule {
public:
    FatFingerRule(std::map<std::string, Money> refs, std::int64_t percent)
        : refs_(std::move(refs)), percent_(percent) {}
    std::string_view name() const override { return v::kFatFingerPriceRisk; }
    std::optional<std::string> check(const OrderDraft& d, const std::optional<Money>& price) const override {
        auto it = refs_.find(d.symbol);
        if (it == refs_.end() || !price) return std::nullopt;
        const __int128 ref = it->second.minor_units();
        const __int128 diff = price->minor_units() - ref;
        if ((diff < 0 ? -diff : diff) * 100 > ref * percent_) return "PriceOutOfBand";
        return std::nullopt;
    }

private:
    std::map<std::string, Money> refs_;
    std::int64_t percent_;
};

class RestrictedSymbolRule final : public OrderRule {
public:
    explicit RestrictedSymbolRule(std::set<std::string> symbols) : symbols_(std::move(symbols)) {}
    std::string_view name() const override { return v::kRestrictedSymbolList; }
    std::optional<std::string> check(const OrderDraft& d, const std::optional<Money>&) const override {
        if (symbols_.contains(d.symbol)) return "RestrictedSymbol";
        return std::nullopt;
    }

private:
    std::set<std::string> symbols_;
};

class SanctionedClientRule final : public OrderRule {
public:
    explicit SanctionedClientRule(std::set<std::string> clients) : clients_(std::move(clients)) {}
    std::string_view name() const override { return v::kSanctionedClientList; }
    std::optional<std::string> check(const OrderDraft& d, const std::optional<Money>&) const override {
        if (clients_.contains(d.client)) return "SanctionedClient";
        return std::nullopt;
    }

private:
    std::set<std::string> clients_;
};

class MaxOrderValueRule final : public OrderRule {
public:
    MaxOrderValueRule(std::int64_t cap, std::map<std::string, std::int64_t> per_client)
        : cap_(cap), per_client_(std::move(per_client)) {}
    std::string_view name() const override { return v::kMaxOrderValueCheck; }
    std::optional<std::string> check(const OrderDraft& d, const std::optional<Money>& price) const override {
        if (!price) return std::nullopt;
        auto it = per_client_.find(d.client);
        const auto cap = it == per_client_.end() ? cap_ : it->second;
        if (order_value(d.quantity, *price) > cap) return "MaxOrderValueExceeded";
        return std::nullopt;
    }

private:
    std::int64_t cap_;
    std::map<std::string, std::int64_t> per_client_;
};

class MandateRule final : public OrderRule {
public:
    explicit MandateRule(std::map<std::string, std::set<std::string>> mandates)
        : mandates_(std::move(mandates)) {}
    std::string_view name() const override { return v::kAllowedSymbolsCheck; }
    std::optional<std::string> check(const OrderDraft& d, const std::optional<Money>&) const override {
        auto it = mandates_.find(d.client);
        if (it != mandates_.end() && !it->second.contains(d.symbol)) return "SymbolNotInMandate";
        return std::nullopt;
    }

private:
    std::map<std::string, std::set<std::string>> mandates_;
};

// --- venue selection ----------------------------------------------------------

class FirstVenue final : public VenueSelector {
public:
    std::string_view name() const override { return v::kFirstVenue; }
    ParticipantId select(const Order&, const std::vector<ParticipantId>& venues,
                         const ServiceRegistry&) const override {
        return venues.front();
    }
};

class BestQuoteVenue final : public VenueSelector {
public:
    std::string_view name() const override { return v::kBestQuoteVenue; }
    ParticipantId select(const Order& order, const std::vector<ParticipantId>& venues,
                         const ServiceRegistry& registry) const override {
        std::optional<ParticipantId> best;
        std::optional<Money> best_price;
        for (const auto& venue : venues) {
            const auto& x = registry.lookup_as<exchange::Exchange>(venue);
            auto quote = x.book().best_price(order.symbol, opposite(order.side));
            if (!quote) continue;
            const bool better = !best_price ||
                                (order.side == Side::Buy ? *quote < *best_price : *quote > *best_price);
            if (better) {
                best = venue;
                best_price = quote;
            }
        }
        return best.value_or(venues.front());
    }
};

class DeepestBookVenue final : public VenueSelector {
public:
    std::string_view name() const override { return v::kDeepestBookVenue; }
    ParticipantId select(const Order& order, const std::vector<ParticipantId>& venues,
                         const ServiceRegistry& registry) const override {
        const ParticipantId* best = &venues.front();
        std::int64_t best_depth = 0;
        for (const auto& venue : venues) {
            const auto& x = registry.lookup_as<exchange::Exchange>(venue);
            const auto depth = x.book().depth(order.symbol, opposite(order.side));
            if (depth > best_depth) {
                best = &venue;
                best_depth = depth;
            }
        }
        return *best;
    }
};

// --- portfolio optimization ----------------------------------------------------

std::vector<std::string> unique_in_order(const std::vector<std::string>& xs) {
    std::vector<std::string> out;
    for (const auto& x : xs) {
        if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
    }
    return out;
}

class EqualWeight final : public PortfolioOptimizer {
public:
    std::string_view name() const override { return v::kEqualWeightPortfolio; }
    std::map<std::string, Weight> optimize(const std::map<std::string, std::int64_t>&,
                                           const std::vector<std::string>& candidates) const override {
        const auto symbols = unique_in_order(candidates);
        std::map<std::string, Weight> out;
        for (const auto& s : symbols) out[s] = Weight(1, static_cast<std::int64_t>(symbols.size()));
        return out;
    }
};

class SingleBest final : public PortfolioOptimizer {
public:
    std::string_view name() const override { return v::kSingleBestPortfolio; }
    std::map<std::string, Weight> optimize(const std::map<std::string, std::int64_t>&,
                                           const std::vector<std::string>& candidates) const override {
        return {{candidates.front(), Weight(1)}};
    }
};

bool terminal(OrderStatus s) { return s == OrderStatus::Filled || s == OrderStatus::Cancelled; }

}  // namespace

std::unique_ptr<VenueSelector> make_venue_selector(std::string_view variant) {
    if (variant == v::kFirstVenue) return std::make_unique<FirstVenue>();
    if (variant == v::kBestQuoteVenue) return std::make_unique<BestQuoteVenue>();
    if (variant == v::kDeepestBookVenue) return std::make_unique<DeepestBookVenue>();
    throw std::invalid_argument("unknown venue selection '" + std::string(variant) + "'");
}

std::unique_ptr<PortfolioOptimizer> make_portfolio_optimizer(std::string_view variant) {
    if (variant == v::kEqualWeightPortfolio) return std::make_unique<EqualWeight>();
    if (variant == v::kSingleBestPortfolio) return std::make_unique<SingleBest>();
    throw std::invalid_argument("unknown portfolio optimizer '" + std::string(variant) + "'");
}

// --- broker --------------------------------------------------------------------------

Broker::Broker(ParticipantId id, const fm::ProductSpec& product, BrokerSettings settings,
               ServiceRegistry& registry, Ledger& ledger)
    : id_(std::move(id)), settings_(std::move(settings)), registry_(registry), ledger_(ledger) {
    namespace vp = catalog::vp;

    for (auto t : {OrderType::Market, OrderType::Limit, OrderType::ImmediateOrCancel, OrderType::FillOrKill}) {
        if (product.has(std::string(catalog::order_type_feature(t)))) offered_.insert(t);
    }
    catalog::bound_variants(product, vp::kClientOrderTypes, {"Market", "Limit", "ImmediateOrCancel", "FillOrKill"});

    StageRules validation{stage::kValidation, {}};
    for (const auto& n : catalog::bound_variants(product, vp::kBrokerOrderValidation,
                                                 {v::kSymbolFormatCheck, v::kLotSizeCheck}, false)) {
        if (n == v::kSymbolFormatCheck) {
            validation.rules.push_back(std::make_unique<SymbolFormatRule>());
        } else {
            validation.rules.push_back(std::make_unique<LotSizeRule>(settings_.lot_size));
        }
    }
    StageRules risk{stage::kRisk, {}};
    for (const auto& n : catalog::bound_variants(
             product, vp::kOrderRisks,
             {v::kDuplicateOrderDetection, v::kMaxOrderQuantityRisk, v::kFatFingerPriceRisk}, false)) {
        if (n == v::kDuplicateOrderDetection) {
            risk.rules.push_back(std::make_unique<DuplicateOrderRule>(window_));
        } else if (n == v::kMaxOrderQuantityRisk) {
            risk.rules.push_back(std::make_unique<MaxQuantityRule>(settings_.max_order_quantity));
        } else {
            risk.rules.push_back(
                std::make_unique<FatFingerRule>(settings_.reference_prices, settings_.fat_finger_percent));
        }
    }
    StageRules governmental{stage::kGovernmentalCompliance, {}};
    for (const auto& n : catalog::bound_variants(product, vp::kGovernmentalCompliance,
                                                 {v::kRestrictedSymbolList, v::kSanctionedClientList}, false)) {
        if (n == v::kRestrictedSymbolList) {
            governmental.rules.push_back(std::make_unique<RestrictedSymbolRule>(settings_.restricted_symbols));
        } else {
            governmental.rules.push_back(std::make_unique<SanctionedClientRule>(settings_.sanctioned_clients));
        }
    }
    StageRules client{stage::kClientCompliance, {}};
    for (const auto& n : catalog::bound_variants(product, vp::kClientCompliance,
                                                 {v::kMaxOrderValueCheck, v::kAllowedSymbolsCheck}, false)) {
        if (n == v::kMaxOrderValueCheck) {
            client.rules.push_back(
                std::make_unique<MaxOrderValueRule>(settings_.max_order_value, settings_.client_max_order_value));
        } else {
            client.rules.push_back(std::make_unique<MandateRule>(settings_.client_mandates));
        }
    }
    stages_.push_back(std::move(validation));
    stages_.push_back(std::move(risk));
    stages_.push_back(std::move(governmental));
    stages_.push_back(std::move(client));

    allocation_rule_names_ = catalog::bound_variants(
        product, vp::kBrokerAllocationValidation, {v::kEndClientAccountCheck, v::kMinAllocationQuantityCheck},
        false);

    auto venue = catalog::bound_variants(product, vp::kBestVenueAnalysis,
                                         {v::kFirstVenue, v::kBestQuoteVenue, v::kDeepestBookVenue}, false);
    if (!venue.empty()) venue_selector_ = make_venue_selector(venue.front());
    auto portfolio = catalog::bound_variants(product, vp::kPortfolioOptimization,
                                             {v::kEqualWeightPortfolio, v::kSingleBestPortfolio}, false);
    if (!portfolio.empty()) optimizer_ = make_portfolio_optimizer(portfolio.front());

    money_method_ = make_money_transfer_method(catalog::single_variant(
        product, vp::kBrokerMoneyTransfer, {v::kBrokerInternalBook, v::kBrokerBankWire}));
    equity_method_ = make_equity_transfer_method(catalog::single_variant(
        product, vp::kBrokerEquityTransfer, {v::kBrokerDepositoryBook, v::kBrokerCertificate}));
}

Broker::~Broker() = default;

void Broker::register_retail_client(const std::string& account) { retail_clients_.insert(account); }

void Broker::register_institution(const std::string& institution, const ParticipantId& custodian,
                                  std::set<std::string> end_clients) {
    institutions_.insert_or_assign(institution, Institution{custodian, std::move(end_clients)});
}

void Broker::audit(const std::string& order_id, std::string_view stage, const std::string& rule) {
    audit_.push_back(order_id + "|" + std::string(stage) + "|" + (rule.empty() ? "pass" : "reject") + "|" + rule);
}

Rejection Broker::reject(const std::string& order_id, std::string_view stage, std::string rule,
                         std::string detail) {
    audit(order_id, stage, rule);
    return Rejection{std::string(stage), std::move(rule), std::move(detail)};
}

std::optional<std::string> Broker::base_validation(const OrderDraft& d, bool institutional) const {
    if (institutional ? !institutions_.contains(d.client) : !retail_clients_.contains(d.client)) {
        return "UnknownClient";
    }
    if (d.order_id.empty() || d.order_id.find_first_of("|\n ") != std::string::npos) return "InvalidOrderId";
    if (orders_.contains(d.order_id)) return "DuplicateOrderId";
    if (d.quantity <= 0) return "NonPositiveQuantity";
    if (requires_price(d.type) && !d.limit_price) return "MissingPrice";
    if (!requires_price(d.type) && d.limit_price) return "PriceNotAllowed";
    if (d.limit_price && !d.limit_price->is_positive()) return "NonPositivePrice";
    if (d.price_cap && !d.price_cap->is_positive()) return "NonPositivePrice";
    if (!offered_.contains(d.type)) return "UnsupportedOrderType";
    if (!institutional && d.type == OrderType::Market && d.side == Side::Buy && !d.price_cap) {
        return "MissingPriceCap";
    }
    return std::nullopt;
}

std::optional<Rejection> Broker::run_rules(const OrderDraft& draft, const std::optional<Money>& funding,
                                           const StageRules& stage) {
    for (const auto& rule : stage.rules) {
        if (auto violated = rule->check(draft, funding)) return reject(draft.order_id, stage.stage, *violated);
    }
    audit(draft.order_id, stage.stage, {});
    return std::nullopt;
}

Outcome<std::string> Broker::place_retail_order(const OrderDraft& draft) { return place(draft, false); }

Outcome<std::string> Broker::place_institutional_order(const OrderDraft& draft) { return place(draft, true); }

Outcome<std::string> Broker::place(const OrderDraft& draft, bool institutional) {
    if (auto rule = base_validation(draft, institutional)) {
        return reject(draft.order_id, stage::kValidation, *rule);
    }
    const auto funding = draft.limit_price ? draft.limit_price : draft.price_cap;
    for (const auto& s : stages_) {
        if (auto r = run_rules(draft, funding, s)) return *r;
    }

    Order order;
    order.order_id = draft.order_id;
    order.client = draft.client;
    order.broker = id_;
    if (institutional) order.custodian = institutions_.at(draft.client).custodian;
    order.side = draft.side;
    order.symbol = draft.symbol;
    order.quantity = draft.quantity;
    order.remaining = draft.quantity;
    order.limit_price = draft.limit_price;
    order.type = draft.type;

    ParticipantId venue = draft.venue.value_or(settings_.default_venue);
    if (venue_selector_) {
        auto selected = select_venue(order, registry_.list_by_role(ParticipantRole::Exchange));
        if (!selected) return reject(draft.order_id, stage::kVenueSelection, selected.rejection().rule);
        venue = selected.value();
    }
    audit(draft.order_id, stage::kVenueSelection, {});

    BrokerOrder bo{order, venue, 0, false, Responsibility::Broker};
    if (!institutional) {
        const auto cause = draft.order_id + " prepayment";
        try {
            if (draft.side == Side::Buy) {
                const auto amount = *funding * draft.quantity;
                money_method_->transfer(ledger_, draft.client, house_account(), amount, cause);
                bo.prepaid = amount.minor_units();
            } else {
                equity_method_->transfer(ledger_, draft.client, house_account(), draft.symbol, draft.quantity,
                                         cause);
                bo.prepaid = draft.quantity;
            }
        } catch (const LedgerError& e) {
            return reject(draft.order_id, stage::kPrepayment, std::string(to_string(e.kind())), e.what());
        }
        audit(draft.order_id, stage::kPrepayment, {});
    }

    auto& x = registry_.lookup_as<exchange::Exchange>(venue);
    order.status = OrderStatus::Routed;
    auto routed = x.accept(order);
    if (!routed) {
        refund(bo, draft.order_id + " routing refund");
        const auto& r = routed.rejection();
        return reject(draft.order_id, stage::kRouting, r.rule, r.stage + ": " + r.detail);
    }
    audit(draft.order_id, stage::kRouting, {});
    bo.order = routed.value().order;
    orders_.emplace(draft.order_id, std::move(bo));
    order_sequence_.push_back(draft.order_id);
    window_.emplace_back(draft.client, draft.symbol, draft.side, draft.quantity);
    return draft.order_id;
}

void Broker::refund(BrokerOrder& bo, const std::string& cause) {
    if (bo.prepaid > 0) {
        if (bo.order.side == Side::Buy) {
            money_method_->transfer(ledger_, house_account(), bo.order.client, Money(bo.prepaid, ledger_.currency()),
                                    cause);
        } else {
            equity_method_->transfer(ledger_, house_account(), bo.order.client, bo.order.symbol, bo.prepaid, cause);
        }
    }
    bo.prepaid = 0;
    bo.refunded = true;
}

Outcome<ParticipantId> Broker::select_venue(const Order& order, const std::vector<ParticipantId>& venues) const {
    if (venues.empty()) return Rejection{std::string(stage::kVenueSelection), "NoVenues", order.order_id};
    if (!venue_selector_) return venues.front();
    return venue_selector_->select(order, venues, registry_);
}

Outcome<std::map<std::string, Weight>> Broker::optimize_portfolio(
    const std::map<std::string, std::int64_t>& holdings, const std::vector<std::string>& candidates) const {
    if (candidates.empty()) return Rejection{std::string(stage::kPortfolio), "NoCandidates", {}};
    if (!optimizer_) return Rejection{std::string(stage::kPortfolio), "NoAlgorithmBound", {}};
    return optimizer_->optimize(holdings, candidates);
}

Outcome<std::vector<Contract>> Broker::handle_allocation_details(const std::vector<AllocationDetail>& details) {
    if (details.empty()) return reject("-", stage::kAllocationValidation, "NoDetails");
    const auto& block_id = details.front().block_order_id;
    auto fail = [&](std::string rule, std::string detail = {}) {
        return reject(block_id, stage::kAllocationValidation, std::move(rule), std::move(detail));
    };

    auto it = orders_.find(block_id);
    if (it == orders_.end() || !it->second.order.institutional()) return fail("UnknownOrder");
    const auto& bo = it->second;
    const auto& institution = institutions_.at(bo.order.client);

    const auto& x = registry_.lookup_as<exchange::Exchange>(bo.venue);
    std::map<std::int64_t, std::int64_t> executed;
    for (const auto& t : x.trades_for_order(block_id)) executed[t.price.minor_units()] += t.quantity;

    std::set<std::string> ids;
    std::map<std::int64_t, std::int64_t> allocated;
    for (const auto& d : details) {
        if (d.block_order_id != block_id) return fail("MixedBlocks", d.alloc_id);
        if (!ids.insert(d.alloc_id).second) return fail("DuplicateAllocation", d.alloc_id);
        if (d.institution != bo.order.client) return fail("InstitutionMismatch", d.alloc_id);
        if (d.side != bo.order.side) return fail("SideMismatch", d.alloc_id);
        if (d.symbol != bo.order.symbol) return fail("SymbolMismatch", d.alloc_id);
        if (d.quantity <= 0) return fail("NonPositiveQuantity", d.alloc_id);
        if (!executed.contains(d.price.minor_units())) return fail("PriceMismatch", d.alloc_id);
        for (const auto& rule : allocation_rule_names_) {
            if (rule == v::kEndClientAccountCheck && !institution.end_clients.contains(d.end_client_account)) {
                return fail("UnknownEndClient", d.alloc_id);
            }
            if (rule == v::kMinAllocationQuantityCheck && d.quantity < settings_.min_allocation_quantity) {
                return fail("AllocationBelowMinimum", d.alloc_id);
            }
        }
        allocated[d.price.minor_units()] += d.quantity;
    }
    if (allocated != executed) return fail("QuantityMismatch");
    audit(block_id, stage::kAllocationValidation, {});

    std::vector<Contract> contracts;
    for (const auto& d : details) {
        Contract c{id_.id + "-CT" + std::to_string(++contract_counter_), id_, institution.custodian, d.alloc_id,
                   d.symbol, d.quantity, d.price};
        if (tamper_) tamper_(c);
        contract_block_[c.contract_id] = block_id;
        contracts.push_back(std::move(c));
    }
    registry_.lookup_as<custodian::Custodian>(institution.custodian).receive_contracts(contracts);
    contracts_.insert(contracts_.end(), contracts.begin(), contracts.end());
    return contracts;
}

Outcome<Accepted> Broker::receive_affirmation(const Affirmation& a) {
    auto fail = [&](std::string detail) {
        return reject(a.affirmation_id, stage::kAffirmation, "UnknownContracts", std::move(detail));
    };
    if (a.broker != id_ || a.contract_ids.empty()) return fail("affirmation not addressed to " + id_.id);
    for (const auto& cid : a.contract_ids) {
        auto it = std::find_if(contracts_.begin(), contracts_.end(),
                               [&](const Contract& c) { return c.contract_id == cid; });
        if (it == contracts_.end() || it->custodian != a.custodian) return fail(cid);
    }
    for (const auto& cid : a.contract_ids) {
        affirmed_contracts_.insert(cid);
        orders_.at(contract_block_.at(cid)).responsibility = Responsibility::Custodian;
    }
    audit(a.affirmation_id, stage::kAffirmation, {});
    return Accepted{};
}

void Broker::settle_retail_rec() {
    const auto& cc = registry_.lookup_as<clearing::ClearingCorporation>(settings_.clearing);
    for (const auto& t : cc.settled_trades()) {
        for (auto side : {Side::Buy, Side::Sell}) {
            const auto& party = t.party(side);
            if (party.broker != id_ || party.institutional()) continue;
            const auto key = t.trade_id + ":" + std::string(to_string(side));
            if (credited_.contains(key)) continue;
            auto& bo = orders_.at(party.order_id);
            const auto cause = t.trade_id + " settlement " + id_.id;
            const auto value = t.price * t.quantity;
            if (side == Side::Buy) {
                equity_method_->transfer(ledger_, house_account(), party.client, t.symbol, t.quantity, cause);
                bo.prepaid -= value.minor_units();
            } else {
                money_method_->transfer(ledger_, house_account(), party.client, value, cause);
                bo.prepaid -= t.quantity;
            }
            if (bo.prepaid < 0) throw std::logic_error("order " + party.order_id + " settled beyond its prepayment");
            credited_.insert(key);
        }
    }

    for (const auto& id : order_sequence_) {
        auto& bo = orders_.at(id);
        if (bo.order.institutional() || bo.refunded) continue;
        const auto& x = registry_.lookup_as<exchange::Exchange>(bo.venue);
        const auto* live = x.find_order(id);
        if (!live || !terminal(live->status)) continue;
        const auto trades = x.trades_for_order(id);
        const bool all_settled = std::all_of(trades.begin(), trades.end(), [&](const Trade& t) {
            return cc.trade_status(t.trade_id) == TradeStatus::Settled;
        });
        if (!all_settled) continue;
        bo.order = *live;
        refund(bo, id + " residual refund");
    }
}

const BrokerOrder* Broker::find_order(const std::string& order_id) const {
    auto it = orders_.find(order_id);
    return it == orders_.end() ? nullptr : &it->second;
}

std::optional<Responsibility> Broker::responsibility(const std::string& order_id) const {
    auto it = orders_.find(order_id);
    if (it == orders_.end()) return std::nullopt;
    return it->second.responsibility;
}

}  // namespace seco::broker
