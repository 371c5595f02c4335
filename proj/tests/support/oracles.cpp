#include "oracles.hpp"

#include <algorithm>

namespace oracle {

using seco::fm::FeatureModel;
using seco::fm::GroupKind;
using seco::fm::Op;

std::filesystem::path data_dir() { return std::filesystem::path(SECO_SOURCE_DIR) / "data"; }
std::filesystem::path fixture_dir() { return std::filesystem::path(SECO_SOURCE_DIR) / "tests" / "fixtures"; }

bool eval(const seco::fm::Formula& f, const std::set<std::string>& selected) {
    switch (f.op()) {
        case Op::Var: return selected.count(f.name()) == 1;
        case Op::Not: return !eval(f.operand(), selected);
        case Op::And: return eval(f.lhs(), selected) && eval(f.rhs(), selected);
        case Op::Or: return eval(f.lhs(), selected) || eval(f.rhs(), selected);
        case Op::Implies: return !eval(f.lhs(), selected) || eval(f.rhs(), selected);
        case Op::Iff: return eval(f.lhs(), selected) == eval(f.rhs(), selected);
    }
    return false;
}

namespace {

void visit(const seco::fm::Feature& f, const seco::fm::Feature* parent,
           const std::function<void(const seco::fm::Feature&, const seco::fm::Feature*)>& fn) {
    fn(f, parent);
    for (const auto& c : f.children) visit(c, &f, fn);
}

}  // namespace

bool subset_valid(const FeatureModel& model, const std::set<std::string>& s) {
    if (!s.count(model.root().name)) return false;
    bool ok = true;
    visit(model.root(), nullptr, [&](const seco::fm::Feature& f, const seco::fm::Feature* parent) {
        if (!s.count(f.name)) return;
        if (parent && !s.count(parent->name)) ok = false;
        int picked = 0;
        for (const auto& c : f.children) {
            if (s.count(c.name)) ++picked;
            if (f.group == GroupKind::And && c.optionality == seco::fm::Optionality::Mandatory && !s.count(c.name)) {
                ok = false;
            }
        }
        if (f.group == GroupKind::Alternative && picked != 1) ok = false;
        if (f.group == GroupKind::Or && picked == 0) ok = false;
    });
    for (const auto& c : model.constraints()) {
        if (!eval(c.formula, s)) ok = false;
    }
    return ok;
}

std::set<std::string> closure(const FeatureModel& model, std::set<std::string> s) {
    bool grew = true;
    while (grew) {
        grew = false;
        visit(model.root(), nullptr, [&](const seco::fm::Feature& f, const seco::fm::Feature* parent) {
            if (!s.count(f.name)) return;
            if (parent && s.insert(parent->name).second) grew = true;
            if (f.group != GroupKind::And) return;
            for (const auto& c : f.children) {
                if (c.optionality == seco::fm::Optionality::Mandatory && s.insert(c.name).second) grew = true;
            }
        });
    }
    return s;
}

bool selection_valid(const FeatureModel& model, const std::set<std::string>& selected) {
    return subset_valid(model, closure(model, selected));
}

std::vector<std::set<std::string>> all_valid_subsets(const FeatureModel& model) {
    std::vector<std::string> names;
    visit(model.root(), nullptr, [&](const seco::fm::Feature& f, const seco::fm::Feature*) { names.push_back(f.name); });
    std::vector<std::set<std::string>> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << names.size()); ++mask) {
        std::set<std::string> s;
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (mask & (std::uint64_t{1} << i)) s.insert(names[i]);
        }
        if (subset_valid(model, s)) out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::set<std::string> random_selection(const FeatureModel& model, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(0.5), rare(0.08);
    std::set<std::string> s;
    std::function<void(const seco::fm::Feature&)> pick = [&](const seco::fm::Feature& f) {
        s.insert(f.name);
        std::vector<const seco::fm::Feature*> chosen;
        if (f.group == GroupKind::And) {
            for (const auto& c : f.children) {
                const bool mandatory = c.optionality == seco::fm::Optionality::Mandatory;
                if (mandatory ? !rare(rng) : coin(rng)) chosen.push_back(&c);
            }
        } else if (f.group == GroupKind::Alternative) {
            std::uniform_int_distribution<std::size_t> idx(0, f.children.size() - 1);
            if (!rare(rng)) chosen.push_back(&f.children[idx(rng)]);
            if (rare(rng)) chosen.push_back(&f.children[idx(rng)]);
        } else if (f.group == GroupKind::Or) {
            for (const auto& c : f.children) {
                if (!rare(rng) && (coin(rng) || coin(rng))) chosen.push_back(&c);
            }
        }
        for (const auto* c : chosen) pick(*c);
    };
    pick(model.root());
    if (rare(rng)) {
        const auto& names = model.names();
        s.insert(names[std::uniform_int_distribution<std::size_t>(0, names.size() - 1)(rng)]);
    }
    return s;
}

// --- matching ---------------------------------------------------------------

bool NaiveMatcher::crosses(const NaiveOrder& incoming, std::int64_t resting_price) const {
    if (incoming.type == seco::OrderType::Market) return true;
    return incoming.side == seco::Side::Buy ? *incoming.price >= resting_price : *incoming.price <= resting_price;
}

bool NaiveMatcher::better(const Resting& a, const Resting& b) const {
    if (*a.order.price != *b.order.price) {
        return a.order.side == seco::Side::Buy ? *a.order.price > *b.order.price : *a.order.price < *b.order.price;
    }
    if (size_priority_) {
        if (a.remaining != b.remaining) return a.remaining > b.remaining;
    } else if (a.order.seq != b.order.seq) {
        return a.order.seq < b.order.seq;
    }
    if (order_id_tiebreak_ && a.order.id != b.order.id) return a.order.id < b.order.id;
    return a.order.seq < b.order.seq;
}

std::vector<NaiveTrade> NaiveMatcher::submit(const NaiveOrder& order) {
    std::vector<NaiveTrade> trades;
    auto eligible = [&](const Resting& r) {
        return r.remaining > 0 && r.order.side != order.side && crosses(order, *r.order.price);
    };

    if (order.type == seco::OrderType::FillOrKill) {
        std::int64_t available = 0;
        for (const auto& r : book_) {
            if (eligible(r)) available += r.remaining;
        }
        if (available < order.quantity) return trades;
    }

    std::int64_t left = order.quantity;
    while (left > 0) {
        Resting* best = nullptr;
        for (auto& r : book_) {
            if (eligible(r) && (!best || better(r, *best))) best = &r;
        }
        if (!best) break;
        const auto qty = std::min(left, best->remaining);
        const bool buy = order.side == seco::Side::Buy;
        trades.emplace_back(buy ? order.id : best->order.id, buy ? best->order.id : order.id, *best->order.price, qty);
        left -= qty;
        best->remaining -= qty;
    }
    book_.erase(std::remove_if(book_.begin(), book_.end(), [](const Resting& r) { return r.remaining == 0; }),
                book_.end());
    if (left > 0 && order.type == seco::OrderType::Limit) book_.push_back({order, left});
    return trades;
}

std::map<std::string, std::int64_t> NaiveMatcher::resting() const {
    std::map<std::string, std::int64_t> out;
    for (const auto& r : book_) out[r.order.id] = r.remaining;
    return out;
}

// --- affirmation ------------------------------------------------------------

bool multisets_match(const std::vector<seco::Contract>& contracts,
                     const std::vector<seco::AllocationDetail>& details) {
    using Key = std::tuple<std::string, std::string, std::int64_t, std::int64_t>;
    std::multiset<Key> a, b;
    for (const auto& c : contracts) a.emplace(c.alloc_ref, c.symbol, c.quantity, c.price.minor_units());
    for (const auto& d : details) b.emplace(d.alloc_id, d.symbol, d.quantity, d.price.minor_units());
    return a == b;
}

// --- ledger -----------------------------------------------------------------

HandLedger HandLedger::from(const seco::Snapshot& s) {
    HandLedger h;
    for (const auto& [owner, st] : s.accounts()) {
        h.money[owner] = st.money;
        for (const auto& [sym, q] : st.positions) h.shares[owner][sym] = q;
    }
    return h;
}

void HandLedger::apply(const seco::JournalEntry& e) {
    const auto& t = e.transfer;
    if (t.kind == seco::TransferKind::Money) {
        money[t.from] -= t.amount;
        money[t.to] += t.amount;
    } else {
        shares[t.from][t.symbol] -= t.amount;
        shares[t.to][t.symbol] += t.amount;
    }
}

bool HandLedger::same_as(const seco::Snapshot& s) const {
    std::set<std::string> owners;
    for (const auto& [o, _] : money) owners.insert(o);
    for (const auto& [o, _] : shares) owners.insert(o);
    for (const auto& [o, _] : s.accounts()) owners.insert(o);
    for (const auto& o : owners) {
        const seco::AccountState none{};
        const auto& st = s.contains(o) ? s.at(o) : none;
        auto m = money.find(o);
        if ((m == money.end() ? 0 : m->second) != st.money) return false;
        std::set<std::string> symbols;
        auto sh = shares.find(o);
        if (sh != shares.end()) {
            for (const auto& [sym, _] : sh->second) symbols.insert(sym);
        }
        for (const auto& [sym, _] : st.positions) symbols.insert(sym);
        for (const auto& sym : symbols) {
            std::int64_t mine = 0;
            if (sh != shares.end()) {
                auto it = sh->second.find(sym);
                if (it != sh->second.end()) mine = it->second;
            }
            if (mine != st.position(sym)) return false;
        }
    }
    return true;
}

// --- scenario fixtures -----------------------------------------------------

std::map<std::string, Holding> hand_ledger_finals(const std::string& id) {
    std::map<std::string, Holding> h;
    auto fill = [&](const std::string& buyer, const std::string& seller, std::int64_t qty, std::int64_t price) {
        h[buyer].money -= qty * price;
        h[buyer].shares["ACME"] += qty;
        h[seller].money += qty * price;
        h[seller].shares["ACME"] -= qty;
    };
    if (id == "retail_retail") {
        h["C1"].money = 200000;
        h["C2"].shares["ACME"] = 500;
        fill("C1", "C2", 60, 1040);
        fill("C1", "C2", 40, 1045);
    } else if (id == "retail_institutional") {
        h["C2"].shares["ACME"] = 500;
        h["E1"].money = 100000;
        h["E2"].money = 100000;
        fill("E1", "C2", 60, 1040);
        fill("E2", "C2", 40, 1040);
    } else if (id == "institutional_institutional") {
        h["E1"].money = 100000;
        h["E2"].money = 100000;
        h["E3"].shares["ACME"] = 300;
        h["E4"].shares["ACME"] = 200;
        // Any pairing of the 100 bought with the 100 sold gives the same
        // per-client totals at a single price.
        fill("E1", "E3", 60, 1040);
        fill("E2", "E3", 10, 1040);
        fill("E2", "E4", 30, 1040);
    } else {
        throw std::invalid_argument("no hand ledger for " + id);
    }
    return h;
}

bool matches_hand_ledger(const std::map<std::string, Holding>& expected, const seco::Snapshot& fin,
                         std::string* mismatch) {
    auto fail = [&](const std::string& why) {
        if (mismatch) *mismatch = why;
        return false;
    };
    for (const auto& [owner, st] : fin.accounts()) {
        auto it = expected.find(owner);
        const Holding none{};
        const auto& want = it == expected.end() ? none : it->second;
        if (st.money != want.money) {
            return fail(owner + " money " + std::to_string(st.money) + " != " + std::to_string(want.money));
        }
        std::set<std::string> symbols;
        for (const auto& [s, _] : st.positions) symbols.insert(s);
        for (const auto& [s, _] : want.shares) symbols.insert(s);
        for (const auto& s : symbols) {
            auto w = want.shares.find(s);
            const auto q = w == want.shares.end() ? 0 : w->second;
            if (st.position(s) != q) {
                return fail(owner + " " + s + " " + std::to_string(st.position(s)) + " != " + std::to_string(q));
            }
        }
    }
    for (const auto& [owner, _] : expected) {
        if (!fin.contains(owner)) return fail("missing account " + owner);
    }
    return true;
}

}  // namespace oracle
