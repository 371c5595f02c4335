#include "seco/custodian.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

#include "seco/broker.hpp"
#include "seco/catalog.hpp"
#include "seco/clearing.hpp"

namespace seco::custodian {

namespace {

namespace v = catalog::variant;

using Terms = std::tuple<std::string, std::int64_t, std::int64_t>;  // symbol, quantity, price

Terms terms(const Contract& c) { return {c.symbol, c.quantity, c.price.minor_units()}; }
Terms terms(const AllocationDetail& d) { return {d.symbol, d.quantity, d.price.minor_units()}; }

class ContractPartyRule final : public AffirmationRule {
public:
    explicit ContractPartyRule(ParticipantId custodian) : custodian_(std::move(custodian)) {}
    std::string_view name() const override { return v::kContractPartyAffirmation; }
    void check(const std::vector<Contract>& contracts, const std::vector<AllocationDetail>&,
               std::vector<AffirmationViolation>& out) const override {
        for (const auto& c : contracts) {
            if (c.custodian != custodian_) out.push_back({"WrongCustodian", c.contract_id, c.alloc_ref});
        }
    }

private:
    ParticipantId custodian_;
};

class ContractIdUniquenessRule final : public AffirmationRule {
public:
    std::string_view name() const override { return v::kContractIdUniquenessAffirmation; }
    void check(const std::vector<Contract>& contracts, const std::vector<AllocationDetail>&,
               std::vector<AffirmationViolation>& out) const override {
        std::map<std::string, int> seen;
        for (const auto& c : contracts) ++seen[c.contract_id];
        for (const auto& c : contracts) {
            if (seen[c.contract_id] > 1) out.push_back({"DuplicateContractId", c.contract_id, c.alloc_ref});
        }
    }
};

}  // namespace

std::string AffirmationViolation::to_string() const {
    std::string out = rule;
    if (!contract_id.empty()) out += " contract=" + contract_id;
    if (!alloc_id.empty()) out += " alloc=" + alloc_id;
    return out;
}

std::unique_ptr<AffirmationRule> make_affirmation_rule(std::string_view variant, const ParticipantId& custodian) {
    if (variant == v::kContractPartyAffirmation) return std::make_unique<ContractPartyRule>(custodian);
    if (variant == v::kContractIdUniquenessAffirmation) return std::make_unique<ContractIdUniquenessRule>();
    throw std::invalid_argument("unknown affirmation rule '" + std::string(variant) + "'");
}

AffirmationVerdict affirm(const std::vector<Contract>& contracts, const std::vector<AllocationDetail>& details,
                          const std::vector<const AffirmationRule*>& variants) {
    std::vector<AffirmationViolation> out;

    std::map<std::string, std::vector<const Contract*>> by_ref;
    std::map<std::string, std::vector<const AllocationDetail*>> by_id;
    for (const auto& c : contracts) by_ref[c.alloc_ref].push_back(&c);
    for (const auto& d : details) by_id[d.alloc_id].push_back(&d);

    std::set<std::string> keys;
    for (const auto& [k, _] : by_ref) keys.insert(k);
    for (const auto& [k, _] : by_id) keys.insert(k);

    for (const auto& key : keys) {
        auto cs = by_ref[key];
        auto ds = by_id[key];
        std::sort(cs.begin(), cs.end(), [](const Contract* a, const Contract* b) {
            return std::make_pair(terms(*a), a->contract_id) < std::make_pair(terms(*b), b->contract_id);
        });
        std::sort(ds.begin(), ds.end(),
                  [](const AllocationDetail* a, const AllocationDetail* b) { return terms(*a) < terms(*b); });

        // Remove exact matches; whatever is left on either side disagrees.
        std::vector<const Contract*> left_c;
        std::vector<const AllocationDetail*> left_d;
        std::size_t i = 0, j = 0;
        while (i < cs.size() && j < ds.size()) {
            if (terms(*cs[i]) == terms(*ds[j])) {
                ++i;
                ++j;
            } else if (terms(*cs[i]) < terms(*ds[j])) {
                left_c.push_back(cs[i++]);
            } else {
                left_d.push_back(ds[j++]);
            }
        }
        for (; i < cs.size(); ++i) left_c.push_back(cs[i]);
        for (; j < ds.size(); ++j) left_d.push_back(ds[j]);

        std::size_t k = 0;
        for (; k < left_c.size() && k < left_d.size(); ++k) {
            const auto& c = *left_c[k];
            const auto& d = *left_d[k];
            if (c.symbol != d.symbol) out.push_back({"SymbolMismatch", c.contract_id, key});
            if (c.quantity != d.quantity) out.push_back({"QuantityMismatch", c.contract_id, key});
            if (c.price != d.price) out.push_back({"PriceMismatch", c.contract_id, key});
        }
        for (std::size_t m = k; m < left_c.size(); ++m) {
            out.push_back({ds.empty() ? "UnknownAllocation" : "DuplicateContract", left_c[m]->contract_id, key});
        }
        for (std::size_t m = k; m < left_d.size(); ++m) out.push_back({"UnmatchedDetails", {}, key});
    }

    std::int64_t contract_total = 0;
    std::int64_t detail_total = 0;
    for (const auto& c : contracts) contract_total += c.quantity;
    for (const auto& d : details) detail_total += d.quantity;
    if (contract_total != detail_total) out.push_back({"TotalQuantityMismatch", {}, {}});

    for (const auto* rule : variants) rule->check(contracts, details, out);

    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return AffirmationVerdict{std::move(out)};
}

// --- custodian ----------------------------------------------------------------------

Custodian::Custodian(ParticipantId id, const fm::ProductSpec& product, CustodianSettings settings,
                     ServiceRegistry& registry, Ledger& ledger)
    : id_(std::move(id)), settings_(std::move(settings)), registry_(registry), ledger_(ledger) {
    namespace vp = catalog::vp;
    detail_rule_names_ = catalog::bound_variants(product, vp::kCustodianAllocationValidation,
                                                 {v::kKnownEndClientCheck, v::kDuplicateAllocationCheck}, false);
    for (const auto& n : catalog::bound_variants(
             product, vp::kAffirmationRules, {v::kContractPartyAffirmation, v::kContractIdUniquenessAffirmation},
             false)) {
        affirmation_rules_.push_back(make_affirmation_rule(n, id_));
    }
    money_method_ = make_money_transfer_method(catalog::single_variant(
        product, vp::kCustodianMoneyTransfer, {v::kCustodianInternalBook, v::kCustodianBankWire}));
    equity_method_ = make_equity_transfer_method(catalog::single_variant(
        product, vp::kCustodianEquityTransfer, {v::kCustodianDepositoryBook, v::kCustodianCertificate}));
}

Custodian::~Custodian() = default;

void Custodian::register_institution(const std::string& institution, std::set<std::string> end_clients) {
    institutions_.insert_or_assign(institution, std::move(end_clients));
}

void Custodian::deposit_money(const std::string& end_client, const Money& amount) {
    money_method_->transfer(ledger_, end_client, omnibus_account(), amount, end_client + " deposit " + id_.id);
    deposits_[end_client].money += amount.minor_units();
}

void Custodian::deposit_equity(const std::string& end_client, const std::string& symbol, std::int64_t qty) {
    equity_method_->transfer(ledger_, end_client, omnibus_account(), symbol, qty, end_client + " deposit " + id_.id);
    deposits_[end_client].positions[symbol] += qty;
}

Rejection Custodian::reject(std::string rule, std::string detail) const {
    return Rejection{std::string(kAllocationStage), std::move(rule), std::move(detail)};
}

Outcome<Accepted> Custodian::receive_allocation_details(const std::vector<AllocationDetail>& details) {
    if (details.empty()) return reject("NoDetails");
    std::map<std::string, std::string> block_symbol;
    std::set<std::string> seen;
    for (const auto& p : pending_) {
        block_symbol.emplace(p.block_order_id, p.symbol);
        seen.insert(p.alloc_id);
    }
    for (const auto& a : affirmed_) seen.insert(a.detail.alloc_id);

    for (const auto& d : details) {
        if (d.quantity <= 0) return reject("NonPositiveQuantity", d.alloc_id);
        auto inst = institutions_.find(d.institution);
        if (inst == institutions_.end()) return reject("UnknownInstitution", d.institution);
        auto [it, fresh] = block_symbol.emplace(d.block_order_id, d.symbol);
        if (!fresh && it->second != d.symbol) return reject("InconsistentSymbol", d.alloc_id);
        for (const auto& rule : detail_rule_names_) {
            if (rule == v::kKnownEndClientCheck && !inst->second.contains(d.end_client_account)) {
                return reject("UnknownEndClient", d.alloc_id);
            }
            if (rule == v::kDuplicateAllocationCheck && seen.contains(d.alloc_id)) {
                return reject("DuplicateAllocation", d.alloc_id);
            }
        }
        seen.insert(d.alloc_id);
    }
    pending_.insert(pending_.end(), details.begin(), details.end());
    return Accepted{};
}

void Custodian::receive_contracts(const std::vector<Contract>& contracts) {
    inbox_.insert(inbox_.end(), contracts.begin(), contracts.end());
}

Outcome<Affirmation> Custodian::affirm_received() {
    auto contracts = std::move(inbox_);
    inbox_.clear();
    return affirm_contracts(contracts);
}

Outcome<Affirmation> Custodian::affirm_contracts(const std::vector<Contract>& contracts) {
    if (pending_.empty()) return Rejection{std::string(kAffirmationStage), "NoPendingDetails", {}};

    std::set<std::string> blocks;
    for (const auto& c : contracts) {
        for (const auto& d : pending_) {
            if (d.alloc_id == c.alloc_ref) blocks.insert(d.block_order_id);
        }
    }
    std::vector<AllocationDetail> relevant;
    std::vector<AllocationDetail> rest;
    for (const auto& d : pending_) {
        (blocks.empty() || blocks.contains(d.block_order_id) ? relevant : rest).push_back(d);
    }

    std::vector<const AffirmationRule*> rules;
    for (const auto& r : affirmation_rules_) rules.push_back(r.get());
    auto verdict = affirm(contracts, relevant, rules);
    last_verdict_ = verdict;
    if (!verdict.affirmed()) {
        std::string detail;
        for (const auto& violation : verdict.violations) {
            detail += (detail.empty() ? "" : "; ") + violation.to_string();
        }
        log_.push_back("rejected|" + verdict.violations.front().rule + "|" + detail);
        return Rejection{std::string(kAffirmationStage), verdict.violations.front().rule, detail};
    }

    Affirmation a;
    a.affirmation_id = id_.id + "-AF" + std::to_string(affirmation_counter_ + 1);
    a.custodian = id_;
    a.broker = contracts.front().broker;
    for (const auto& c : contracts) a.contract_ids.push_back(c.contract_id);

    auto sent = registry_.lookup_as<broker::Broker>(a.broker).receive_affirmation(a);
    if (!sent) return sent.rejection();

    ++affirmation_counter_;
    for (auto& d : relevant) affirmed_.push_back(Allocation{std::move(d), false, false});
    pending_ = std::move(rest);
    std::string ids;
    for (const auto& c : a.contract_ids) ids += (ids.empty() ? "" : ",") + c;
    log_.push_back(a.affirmation_id + "|" + a.broker.to_string() + "|" + ids);
    return a;
}

std::vector<Rejection> Custodian::send_trades_to_clearing_rec() {
    std::vector<Rejection> rejections;
    if (std::none_of(affirmed_.begin(), affirmed_.end(), [](const Allocation& a) { return !a.forwarded; })) {
        return rejections;
    }
    auto& cc = registry_.lookup_as<clearing::ClearingCorporation>(settings_.clearing);
    for (auto& a : affirmed_) {
        if (a.forwarded) continue;
        const auto& d = a.detail;
        clearing::AllocationRecord record{d.alloc_id, d.block_order_id, id_,        d.end_client_account,
                                          d.side,     d.symbol,         d.quantity, d.price};
        auto outcome = cc.submit_allocation(record);
        if (!outcome) rejections.push_back(outcome.rejection());
        a.forwarded = true;
    }
    return rejections;
}

void Custodian::settle_institutional_rec() {
    const auto& cc = registry_.lookup_as<clearing::ClearingCorporation>(settings_.clearing);
    for (auto& a : affirmed_) {
        if (!a.forwarded || a.settled || !cc.allocation_settled(a.detail.alloc_id)) continue;
        const auto& d = a.detail;
        auto& deposit = deposits_[d.end_client_account];
        const auto value = d.price * d.quantity;
        const auto cause = d.alloc_id + " settlement " + id_.id;
        if (d.side == Side::Buy) {
            if (deposit.money < value.minor_units()) {
                throw std::logic_error(d.end_client_account + " deposit at " + id_.id + " cannot cover " + d.alloc_id);
            }
            equity_method_->transfer(ledger_, omnibus_account(), d.end_client_account, d.symbol, d.quantity, cause);
            deposit.money -= value.minor_units();
        } else {
            auto& held = deposit.positions[d.symbol];
            if (held < d.quantity) {
                throw std::logic_error(d.end_client_account + " deposit at " + id_.id + " cannot cover " + d.alloc_id);
            }
            money_method_->transfer(ledger_, omnibus_account(), d.end_client_account, value, cause);
            held -= d.quantity;
        }
        a.settled = true;
    }
    release_deposits();
}

void Custodian::release_deposits() {
    for (auto& [client, deposit] : deposits_) {
        bool settled_any = false;
        bool open = std::any_of(pending_.begin(), pending_.end(),
                                [&](const AllocationDetail& d) { return d.end_client_account == client; });
        for (const auto& a : affirmed_) {
            if (a.detail.end_client_account != client) continue;
            if (!a.settled) open = true;
            settled_any = true;
        }
        if (open || !settled_any) continue;
        const auto cause = client + " deposit release " + id_.id;
        if (deposit.money > 0) {
            money_method_->transfer(ledger_, omnibus_account(), client, Money(deposit.money, ledger_.currency()), cause);
            deposit.money = 0;
        }
        for (auto& [symbol, qty] : deposit.positions) {
            if (qty > 0) {
                equity_method_->transfer(ledger_, omnibus_account(), client, symbol, qty, cause);
                qty = 0;
            }
        }
    }
}

std::size_t Custodian::unsettled_allocations() const {
    return static_cast<std::size_t>(
        std::count_if(affirmed_.begin(), affirmed_.end(), [](const Allocation& a) { return !a.settled; }));
}

std::vector<std::string> Custodian::settled_allocations() const {
    std::vector<std::string> out;
    for (const auto& a : affirmed_) {
        if (a.settled) out.push_back(a.detail.alloc_id);
    }
    return out;
}

}  // namespace seco::custodian
