#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <utility>

#include "seco/lifecycle.hpp"

namespace seco::lifecycle {

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto pos = s.find(sep, start);
        const auto end = pos == std::string_view::npos ? s.size() : pos;
        if (end > start) out.emplace_back(s.substr(start, end - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::vector<std::string> words(std::string_view line) {
    std::vector<std::string> out;
    std::istringstream in{std::string(line)};
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

class LineParser {
public:
    LineParser(int line, const std::vector<std::string>& w, std::size_t first_kv) : line_(line) {
        for (std::size_t i = first_kv; i < w.size(); ++i) {
            const auto eq = w[i].find('=');
            if (eq == std::string::npos || eq == 0) fail("expected key=value, got '" + w[i] + "'");
            if (!kv_.emplace(w[i].substr(0, eq), w[i].substr(eq + 1)).second) {
                fail("repeated key '" + w[i].substr(0, eq) + "'");
            }
        }
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ScenarioError(msg, line_); }

    std::optional<std::string> take(const std::string& key) {
        auto it = kv_.find(key);
        if (it == kv_.end()) return std::nullopt;
        auto v = it->second;
        kv_.erase(it);
        return v;
    }
    std::string require(const std::string& key) {
        auto v = take(key);
        if (!v) fail("missing " + key + "=");
        return *v;
    }
    std::int64_t integer(const std::string& text) const {
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || p != text.data() + text.size()) fail("bad integer '" + text + "'");
        return v;
    }
    std::optional<std::int64_t> take_int(const std::string& key) {
        auto v = take(key);
        if (!v) return std::nullopt;
        return integer(*v);
    }
    std::int64_t require_int(const std::string& key) { return integer(require(key)); }

    /// Remaining keys, for lines that allow free symbol=quantity pairs.
    std::map<std::string, std::string> rest() { return std::exchange(kv_, {}); }

    void done() const {
        if (!kv_.empty()) fail("unknown key '" + kv_.begin()->first + "'");
    }

    int line() const { return line_; }

private:
    int line_;
    std::map<std::string, std::string> kv_;
};

Holdings parse_holdings(LineParser& p) {
    Holdings h;
    h.money = p.take_int("money").value_or(0);
    for (const auto& [symbol, qty] : p.rest()) h.positions[symbol] = p.integer(qty);
    return h;
}

void apply_settings(Scenario& sc, const std::string& role, LineParser& p) {
    auto list = [](const std::string& v) {
        auto parts = split(v, ',');
        return std::set<std::string>(parts.begin(), parts.end());
    };
    if (role == "broker") {
        auto& b = sc.broker_settings;
        if (auto v = p.take_int("lot_size")) b.lot_size = *v;
        if (auto v = p.take_int("max_order_quantity")) b.max_order_quantity = *v;
        if (auto v = p.take_int("fat_finger_percent")) b.fat_finger_percent = *v;
        if (auto v = p.take_int("max_order_value")) b.max_order_value = *v;
        if (auto v = p.take_int("min_allocation_quantity")) b.min_allocation_quantity = *v;
        if (auto v = p.take("restricted")) b.restricted_symbols = list(*v);
        if (auto v = p.take("sanctioned")) b.sanctioned_clients = list(*v);
        if (auto v = p.take("reference_prices")) {
            for (const auto& item : split(*v, ',')) {
                auto kv = split(item, ':');
                if (kv.size() != 2) p.fail("reference_prices wants SYMBOL:price items");
                b.reference_prices.insert_or_assign(kv[0], Money(p.integer(kv[1])));
            }
        }
        if (auto v = p.take("client_max_order_value")) {
            for (const auto& item : split(*v, ',')) {
                auto kv = split(item, ':');
                if (kv.size() != 2) p.fail("client_max_order_value wants CLIENT:value items");
                b.client_max_order_value[kv[0]] = p.integer(kv[1]);
            }
        }
        if (auto v = p.take("mandates")) {
            for (const auto& item : split(*v, ',')) {
                auto kv = split(item, ':');
                if (kv.size() != 2) p.fail("mandates wants CLIENT:SYM+SYM items");
                auto symbols = split(kv[1], '+');
                b.client_mandates[kv[0]] = std::set<std::string>(symbols.begin(), symbols.end());
            }
        }
    } else if (role == "exchange") {
        if (auto v = p.take_int("tick_size")) sc.exchange_settings.tick_size = *v;
        if (auto v = p.take_int("max_order_size")) sc.exchange_settings.max_order_size = *v;
    } else if (role == "clearing_corporation") {
        if (auto v = p.take_int("min_price")) sc.clearing_settings.min_price = *v;
        if (auto v = p.take_int("max_price")) sc.clearing_settings.max_price = *v;
    } else {
        p.fail("no settings for role '" + role + "'");
    }
    p.done();
}

broker::OrderDraft parse_draft(const std::string& id, LineParser& p, const std::string& client_key) {
    broker::OrderDraft d;
    d.order_id = id;
    d.client = p.require(client_key);
    try {
        d.side = parse_side(p.require("side"));
        d.type = parse_order_type(p.require("type"));
    } catch (const std::invalid_argument& e) {
        p.fail(e.what());
    }
    d.quantity = p.require_int("qty");
    d.symbol = p.require("symbol");
    if (auto v = p.take_int("price")) d.limit_price = Money(*v);
    if (auto v = p.take_int("cap")) d.price_cap = Money(*v);
    if (auto v = p.take("venue")) d.venue = ParticipantId{ParticipantRole::Exchange, *v};
    return d;
}

}  // namespace

ScenarioError::ScenarioError(const std::string& message, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

std::string_view to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::RetailRetail: return "retail_retail";
        case ScenarioKind::RetailInstitutional: return "retail_institutional";
        case ScenarioKind::InstitutionalInstitutional: return "institutional_institutional";
    }
    return "?";
}

ScenarioKind parse_scenario_kind(std::string_view text) {
    for (auto k : {ScenarioKind::RetailRetail, ScenarioKind::RetailInstitutional,
                   ScenarioKind::InstitutionalInstitutional}) {
        if (to_string(k) == text) return k;
    }
    throw ScenarioError("unknown scenario '" + std::string(text) + "'");
}

Scenario parse_scenario(std::string_view text) {
    Scenario sc;
    bool have_kind = false;
    int line_no = 0;
    std::istringstream in{std::string(text)};
    for (std::string raw; std::getline(in, raw);) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const auto w = words(raw);
        if (w.empty()) continue;
        const auto& kw = w[0];
        auto need = [&](std::size_t n) {
            if (w.size() < n) throw ScenarioError("'" + kw + "' needs more fields", line_no);
        };

        if (kw == "scenario") {
            need(2);
            if (have_kind) throw ScenarioError("second scenario line", line_no);
            try {
                sc.kind = parse_scenario_kind(w[1]);
            } catch (const ScenarioError& e) {
                throw ScenarioError(e.what(), line_no);
            }
            have_kind = true;
        } else if (kw == "participant") {
            need(3);
            try {
                ParticipantId pid{parse_role(w[1]), w[2]};
                for (const auto& existing : sc.participants) {
                    if (existing == pid) throw ScenarioError("duplicate participant " + pid.to_string(), line_no);
                }
                sc.participants.push_back(pid);
            } catch (const std::invalid_argument& e) {
                throw ScenarioError(e.what(), line_no);
            }
        } else if (kw == "listed") {
            need(2);
            sc.listed.insert(w.begin() + 1, w.end());
        } else if (kw == "account" || kw == "expect") {
            need(2);
            LineParser p(line_no, w, 2);
            auto& target = kw == "account" ? sc.accounts : sc.expected;
            if (!target.emplace(w[1], parse_holdings(p)).second) {
                throw ScenarioError("repeated " + kw + " for " + w[1], line_no);
            }
        } else if (kw == "retail") {
            need(2);
            LineParser p(line_no, w, 2);
            sc.retail_clients.push_back({w[1], p.require("broker")});
            p.done();
        } else if (kw == "institution") {
            need(2);
            LineParser p(line_no, w, 2);
            Institution inst{w[1], p.require("broker"), p.require("custodian"), split(p.require("clients"), ',')};
            p.done();
            sc.institutions.push_back(std::move(inst));
        } else if (kw == "order" || kw == "block") {
            need(2);
            LineParser p(line_no, w, 2);
            OrderStep step;
            step.block = kw == "block";
            step.broker = p.require("broker");
            step.draft = parse_draft(w[1], p, step.block ? "institution" : "client");
            p.done();
            sc.orders.push_back(std::move(step));
        } else if (kw == "allocate") {
            need(2);
            LineParser p(line_no, w, 2);
            AllocationSpec a{w[1], p.require("block"), p.require("client"), p.require_int("qty"),
                             Money(p.require_int("price"))};
            p.done();
            sc.allocations.push_back(std::move(a));
        } else if (kw == "tamper") {
            need(2);
            LineParser p(line_no, w, 2);
            sc.contract_price_tamper[w[1]] = p.require_int("price_delta");
            p.done();
        } else if (kw == "set") {
            need(2);
            LineParser p(line_no, w, 2);
            apply_settings(sc, w[1], p);
        } else {
            throw ScenarioError("unknown keyword '" + kw + "'", line_no);
        }
    }
    if (!have_kind) throw ScenarioError("missing 'scenario' line");
    sc.exchange_settings.listed_symbols = sc.listed;
    sc.clearing_settings.listed_symbols = sc.listed;

    for (const auto& a : sc.allocations) {
        const bool known = std::any_of(sc.orders.begin(), sc.orders.end(), [&](const OrderStep& o) {
            return o.block && o.draft.order_id == a.block_order_id;
        });
        if (!known) throw ScenarioError("allocation " + a.alloc_id + " names unknown block " + a.block_order_id);
    }
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_scenario(buf.str());
    } catch (const ScenarioError& e) {
        throw ScenarioError(path.filename().string() + ": " + e.what());
    }
}

void check_participants(const Scenario& sc) {
    std::map<ParticipantRole, int> count;
    for (const auto& p : sc.participants) ++count[p.role];
    auto require = [&](ParticipantRole role, bool ok, const char* what) {
        if (!ok) {
            throw ScenarioError(std::string(to_string(sc.kind)) + " needs " + what + " " +
                                std::string(seco::to_string(role)));
        }
    };
    require(ParticipantRole::Broker, count[ParticipantRole::Broker] >= 1, "at least one");
    require(ParticipantRole::Exchange, count[ParticipantRole::Exchange] == 1, "exactly one");
    require(ParticipantRole::ClearingCorporation, count[ParticipantRole::ClearingCorporation] == 1, "exactly one");
    require(ParticipantRole::ClearingBank, count[ParticipantRole::ClearingBank] == 1, "exactly one");
    require(ParticipantRole::Depository, count[ParticipantRole::Depository] == 1, "exactly one");
    const bool institutional = sc.kind != ScenarioKind::RetailRetail;
    require(ParticipantRole::Custodian, (count[ParticipantRole::Custodian] >= 1) == institutional,
            institutional ? "at least one" : "no");

    const std::size_t blocks = std::count_if(sc.orders.begin(), sc.orders.end(), [](const OrderStep& o) {
        return o.block;
    });
    const std::size_t retail = sc.orders.size() - blocks;
    const bool shape_ok = sc.kind == ScenarioKind::RetailRetail
                              ? blocks == 0 && retail >= 2
                              : (sc.kind == ScenarioKind::RetailInstitutional ? blocks >= 1 && retail >= 1
                                                                              : blocks >= 2 && retail == 0);
    if (!shape_ok) {
        throw ScenarioError(std::string(to_string(sc.kind)) + " does not fit " + std::to_string(retail) +
                            " retail and " + std::to_string(blocks) + " block orders");
    }
}

}  // namespace seco::lifecycle
