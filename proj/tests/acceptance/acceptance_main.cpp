// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "seco/catalog.hpp"
#include "seco/cli.hpp"
#include "seco/exchange.hpp"
#include "seco/lifecycle.hpp"

namespace {

using namespace seco;

struct Verdict {
    bool pass = true;
    std::string detail;
};

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& what) {
    if (!cond) throw Failure(what);
}

const std::vector<std::string> kScenarios{"retail_retail", "retail_institutional", "institutional_institutional"};
const std::vector<std::string> kProducts{"seco_a", "seco_b"};

lifecycle::Scenario scenario(const std::string& id) {
    return lifecycle::load_scenario(oracle::data_dir() / "scenarios" / (id + ".scn"));
}

// 1 ---------------------------------------------------------------------------

Verdict two_products() {
    const auto& a = fixture::product("seco_a");
    const auto& b = fixture::product("seco_b");
    require(a.bindings().size() == 20 && b.bindings().size() == 20, "both products bind all 20 variation points");
    int differing = 0;
    for (const auto& [vp, variants] : a.bindings()) {
        if (b.bound(vp) != variants) ++differing;
    }
    using V = std::vector<std::string>;
    require(a.bound("SecondaryPrecedence") == V{"TimePriority"}, "A uses time priority");
    require(b.bound("SecondaryPrecedence") == V{"SizePriority"}, "B uses size priority");
    require(a.bound("TradeClearingRules") == V{"TradeForTrade"}, "A clears gross");
    require(b.bound("TradeClearingRules") == V{"MultilateralNetting"}, "B nets");
    require(differing >= 5, "only " + std::to_string(differing) + " bindings differ");
    return {true, std::to_string(differing) + " of 20 variation points bound differently"};
}

// 2 ---------------------------------------------------------------------------

Verdict three_scenarios() {
    int runs = 0;
    for (const auto& p : kProducts) {
        for (const auto& id : kScenarios) {
            const auto sc = scenario(id);
            const auto report = lifecycle::run_scenario(fixture::product(p), sc);
            require(report.completed(), p + "/" + id + " aborted");
            std::string why;
            require(oracle::matches_hand_ledger(oracle::hand_ledger_finals(id), report.final_snapshot(), &why),
                    p + "/" + id + ": " + why);
            const auto checked = lifecycle::assert_conservation(report);
            require(checked.ok() && checked.expected_checked, p + "/" + id + " fixture expectations not met");
            ++runs;
        }
    }
    return {true, std::to_string(runs) + " runs match the hand ledger exactly"};
}

// 3 ---------------------------------------------------------------------------

Verdict conservation() {
    std::size_t pairs = 0;
    for (const auto& p : kProducts) {
        for (const auto& id : kScenarios) {
            const auto report = lifecycle::run_scenario(fixture::product(p), scenario(id));
            const Snapshot* prev = &report.initial;
            for (const auto& st : report.steps) {
                require(st.snapshot.total_money() == prev->total_money(), p + "/" + id + " money at " + st.name);
                for (const auto& s : prev->symbols()) {
                    require(st.snapshot.total_position(s) == prev->total_position(s),
                            p + "/" + id + " " + s + " at " + st.name);
                }
                auto hand = oracle::HandLedger::from(report.initial);
                for (std::size_t i = 0; i < st.journal_end; ++i) hand.apply(report.journal[i]);
                require(hand.same_as(st.snapshot), p + "/" + id + " replay at " + st.name);
                prev = &st.snapshot;
                ++pairs;
            }
            require(lifecycle::assert_conservation(report).ok(), p + "/" + id + " assert_conservation");
        }
    }

    // A leak out of the system and a balanced but unjournaled move must both be caught.
    const auto sc = scenario("retail_retail");
    auto mutate = [&](bool balanced) {
        lifecycle::Ecosystem eco(fixture::product("seco_a"), sc);
        auto report = lifecycle::run_scenario(fixture::product("seco_a"), sc, eco,
                                              [balanced](const std::string& step, lifecycle::Ecosystem& e) {
                                                  if (step != "clear") return;
                                                  e.ledger().adjust_unjournaled("C1", -7);
                                                  if (balanced) e.ledger().adjust_unjournaled("C2", 7);
                                              });
        const auto result = lifecycle::assert_conservation(report);
        const bool named = std::any_of(result.failures.begin(), result.failures.end(), [](const std::string& f) {
            return f.find("'clear'") != std::string::npos;
        });
        return !result.ok() && named;
    };
    require(mutate(false), "unbalanced off-journal mutation went unnoticed");
    require(mutate(true), "balanced off-journal mutation went unnoticed");
    return {true, std::to_string(pairs) + " snapshot pairs conserved; both injected mutations detected"};
}

// 4 ---------------------------------------------------------------------------

Verdict cross_tree() {
    const auto& model = fixture::catalog();
    const auto base = fm::load_configuration(oracle::data_dir() / "seco_a.cfg");
    const std::vector<OrderType> types{OrderType::Market, OrderType::Limit, OrderType::ImmediateOrCancel,
                                       OrderType::FillOrKill};
    int checked = 0;
    for (unsigned tmask = 1; tmask < 16; ++tmask) {
        for (unsigned amask = 1; amask < 16; ++amask) {
            auto cfg = base;
            for (std::size_t i = 0; i < types.size(); ++i) {
                cfg.selected.erase(std::string(catalog::order_type_feature(types[i])));
                cfg.selected.erase(std::string(catalog::matching_algorithm_feature(types[i])));
                if (tmask & (1u << i)) cfg.selected.insert(std::string(catalog::order_type_feature(types[i])));
                if (amask & (1u << i)) cfg.selected.insert(std::string(catalog::matching_algorithm_feature(types[i])));
            }
            const auto report = fm::validate_configuration(model, cfg);
            std::set<std::string> expected;
            for (std::size_t i = 0; i < types.size(); ++i) {
                if ((tmask & (1u << i)) && !(amask & (1u << i))) {
                    expected.insert(std::string(catalog::order_type_feature(types[i])) + " => " +
                                    std::string(catalog::matching_algorithm_feature(types[i])));
                }
            }
            std::set<std::string> named;
            for (const auto& v : report.violations) {
                require(v.kind == fm::ViolationKind::ConstraintViolated, "unexpected violation " + v.message);
                require(v.message.find(v.subject) != std::string::npos, "message does not name " + v.subject);
                named.insert(v.subject);
            }
            require(named == expected, "wrong constraints reported for type mask " + std::to_string(tmask) +
                                           ", algorithm mask " + std::to_string(amask));
            require(report.valid() == expected.empty(), "validity disagrees with the constraints");
            ++checked;
        }
    }
    return {true, std::to_string(checked) + " order-type/algorithm combinations"};
}

// 5 ---------------------------------------------------------------------------

Verdict enumeration_oracle() {
    const std::vector<std::string> toys{
        "abstract mandatory R group:and\n"
        "  concrete optional A\n"
        "  concrete optional B\n"
        "  abstract mandatory G group:or\n"
        "    concrete optional C\n"
        "    concrete optional D\n"
        "    concrete optional E\n"
        "constraints:\n"
        "A => !B\n"
        "C & D => A\n",

        "abstract mandatory Shop group:and\n"
        "  abstract mandatory Pay group:alt\n"
        "    concrete optional Card\n"
        "    concrete optional Cash\n"
        "    concrete optional Voucher\n"
        "  abstract optional Ship group:or\n"
        "    concrete optional Post\n"
        "    concrete optional Courier\n"
        "  concrete optional Gift\n"
        "  abstract optional Extras group:and\n"
        "    concrete mandatory Wrap\n"
        "    concrete optional Card2\n"
        "constraints:\n"
        "Gift <=> Extras\n"
        "Voucher => !Ship | Post\n",

        "abstract mandatory M group:and\n"
        "  abstract optional X group:alt\n"
        "    concrete optional X1\n"
        "    concrete optional X2\n"
        "  abstract optional Y group:alt\n"
        "    concrete optional Y1\n"
        "    concrete optional Y2\n"
        "  abstract optional Z group:or\n"
        "    concrete optional Z1\n"
        "    concrete optional Z2\n"
        "constraints:\n"
        "(X1 | Y1) => Z1\n"
        "X2 <=> !Y2\n",
    };
    std::vector<fm::FeatureModel> models;
    for (const auto& t : toys) models.push_back(fm::parse_feature_model(t));
    models.push_back(fm::load_feature_model(oracle::fixture_dir() / "toy.fm"));

    std::size_t configs = 0;
    for (const auto& m : models) {
        require(m.size() <= 12, "toy model too large");
        std::vector<std::set<std::string>> got;
        for (const auto& c : fm::enumerate_valid_configurations(m)) got.push_back(c.selected);
        std::sort(got.begin(), got.end());
        require(got == oracle::all_valid_subsets(m), "enumeration differs from brute force on " + m.root().name);
        configs += got.size();
    }

    std::mt19937_64 rng(20240601);
    int valid = 0;
    for (int i = 0; i < 100; ++i) {
        const auto sel = oracle::random_selection(fixture::catalog(), rng);
        const bool want = oracle::selection_valid(fixture::catalog(), sel);
        require(fm::validate_configuration(fixture::catalog(), {sel}).valid() == want,
                "random catalog selection " + std::to_string(i) + " disagrees");
        valid += want;
    }
    require(valid > 0 && valid < 100, "random selections were not mixed");
    return {true, std::to_string(models.size()) + " toy models (" + std::to_string(configs) +
                      " configurations), 100 catalog selections (" + std::to_string(valid) + " valid)"};
}

// 6 ---------------------------------------------------------------------------

Verdict matching_oracle() {
    std::mt19937_64 rng(7);
    const std::vector<OrderType> types{OrderType::Market, OrderType::Limit, OrderType::ImmediateOrCancel,
                                       OrderType::FillOrKill};
    const ParticipantId x1{ParticipantRole::Exchange, "X1"};
    std::size_t trades = 0;
    for (int instance = 0; instance < 1000; ++instance) {
        std::uniform_int_distribution<int> n_orders(1, 10), level(0, 2), qty(1, 10), side(0, 1), type(0, 3);
        std::vector<oracle::NaiveOrder> orders;
        const int n = n_orders(rng);
        std::vector<int> ids(n);
        std::iota(ids.begin(), ids.end(), 0);
        std::shuffle(ids.begin(), ids.end(), rng);
        for (int i = 0; i < n; ++i) {
            oracle::NaiveOrder o;
            o.id = "O" + std::to_string(ids[i]);
            o.seq = static_cast<std::uint64_t>(i + 1);
            o.side = side(rng) ? Side::Buy : Side::Sell;
            o.type = types[type(rng)];
            o.quantity = qty(rng);
            if (o.type != OrderType::Market) o.price = 1000 + 10 * level(rng);
            orders.push_back(o);
        }

        for (auto secondary : {exchange::SecondaryRule::TimePriority, exchange::SecondaryRule::SizePriority}) {
            for (auto tiebreak : {exchange::DefaultRule::SequenceNumber, exchange::DefaultRule::OrderId}) {
                exchange::MatchingEngine engine(exchange::PrecedenceComparator(secondary, tiebreak),
                                                {types.begin(), types.end()}, x1);
                oracle::NaiveMatcher naive(secondary == exchange::SecondaryRule::SizePriority,
                                           tiebreak == exchange::DefaultRule::OrderId);
                for (const auto& o : orders) {
                    Order order;
                    order.order_id = o.id;
                    order.seq = o.seq;
                    order.client = "C";
                    order.side = o.side;
                    order.symbol = "ACME";
                    order.quantity = o.quantity;
                    order.remaining = o.quantity;
                    if (o.price) order.limit_price = Money(*o.price);
                    order.type = o.type;
                    order.status = OrderStatus::Validated;

                    const auto result = engine.submit(order);
                    std::vector<oracle::NaiveTrade> got;
                    std::int64_t filled = 0;
                    for (const auto& t : result.trades) {
                        got.emplace_back(t.buy_order_id(), t.sell_order_id(), t.price.minor_units(), t.quantity);
                        filled += t.quantity;
                    }
                    auto want = naive.submit(o);
                    const auto where = "instance " + std::to_string(instance) + " order " + o.id;
                    std::sort(got.begin(), got.end());
                    std::sort(want.begin(), want.end());
                    require(got == want, "trades differ from naive matcher at " + where);
                    require(!engine.book().crossed("ACME"), "crossed book at " + where);
                    if (o.type == OrderType::FillOrKill) {
                        require(filled == 0 || filled == o.quantity, "fill-or-kill partially filled at " + where);
                    }
                    std::map<std::string, std::int64_t> resting;
                    for (auto s : {Side::Buy, Side::Sell}) {
                        for (const auto& r : engine.book().side("ACME", s)) resting[r.order_id] = r.remaining;
                    }
                    require(resting == naive.resting(), "resting book differs at " + where);
                    trades += got.size();
                }
            }
        }
    }
    return {true, "1000 instances x 4 comparators, " + std::to_string(trades) + " trades compared"};
}

// 7 ---------------------------------------------------------------------------

Verdict clearing_equivalence() {
    std::mt19937_64 rng(99);
    const auto ccp = house_account({ParticipantRole::ClearingCorporation, "CC1"});
    auto settle = [](fixture::ClearingRig& rig, const std::vector<Trade>& trades) {
        for (const auto& t : trades) require(rig.cc->submit_trade(t).ok(), "trade rejected");
        rig.cc->clear_rec();
        rig.cc->settle_rec();
    };
    // Every leg an executed instruction carries is journaled exactly once, and nothing else is.
    auto dvp_paired = [](const fixture::ClearingRig& rig) {
        std::map<std::string, std::pair<int, int>> journaled;
        for (const auto& e : rig.ledger.journal()) {
            const auto id = e.transfer.cause.substr(0, e.transfer.cause.find(' '));
            (e.transfer.kind == TransferKind::Money ? journaled[id].first : journaled[id].second)++;
        }
        std::map<std::string, std::pair<int, int>> expected;
        for (const auto& si : rig.cc->executed_instructions()) {
            if (!si.money_leg && !si.equity_leg) continue;
            expected[si.instruction_id] = {si.money_leg ? 1 : 0, si.equity_leg ? 1 : 0};
        }
        return journaled == expected;
    };

    int failures_injected = 0;
    for (int round = 0; round < 200; ++round) {
        const auto trades = fixture::random_trades(rng);
        fixture::ClearingRig gross(fixture::product("seco_a"));
        fixture::ClearingRig net(fixture::product("seco_b"));
        const auto initial = gross.ledger.snapshot();
        settle(gross, trades);
        settle(net, trades);
        const auto where = "round " + std::to_string(round);
        require(gross.ledger.snapshot() == net.ledger.snapshot(), "gross and netting differ at " + where);
        require(net.ledger.snapshot().at(ccp) == initial.at(ccp), "CCP not flat at " + where);
        require(dvp_paired(gross) && dvp_paired(net), "unpaired DVP legs at " + where);

        // Single-leg failures: a deliverer short of shares, or an infrastructure service down.
        for (const auto* product : {&fixture::product("seco_a"), &fixture::product("seco_b")}) {
            const int mode = round % 3;
            fixture::ClearingRig rig(*product, {"B1", "B2", "B3"}, {"AAA", "BBB"}, 10'000'000, mode == 0 ? 0 : 10'000);
            if (mode == 1) rig.bank.set_offline(true);
            if (mode == 2) rig.depository.set_offline(true);
            bool crossing = false;
            for (const auto& t : trades) {
                rig.cc->submit_trade(t);
                crossing |= t.buyer.broker != t.seller.broker;
            }
            rig.cc->clear_rec();
            const auto before = rig.ledger.snapshot();
            try {
                rig.cc->settle_rec();
                require(!crossing, "settlement should have failed at " + where);
                continue;
            } catch (const clearing::SettlementFailed& e) {
                ++failures_injected;
                require(rig.ledger.journal().empty() && rig.ledger.snapshot() == before,
                        "failed settlement moved assets at " + where + " (" + e.what() + ")");
            }
        }
    }
    return {true, "200 trade sets settle identically; CCP flat; " + std::to_string(failures_injected) +
                      " injected failures left the ledger untouched"};
}

// 8 ---------------------------------------------------------------------------

Verdict catalog_coverage() {
    const std::vector<std::pair<std::string, std::string>> rows{
        {"Order validation rules", "BrokerOrderValidationRules"},
        {"Portfolio optimization algorithms", "PortfolioOptimizationAlgorithms"},
        {"Best venue analysis algorithms", "BestVenueAnalysisAlgorithms"},
        {"Client's order types", "ClientOrderTypes"},
        {"Broker money transfer methods", "BrokerMoneyTransferMethods"},
        {"Broker equity transfer methods", "BrokerEquityTransferMethods"},
        {"Order risks", "OrderRisks"},
        {"Governmental compliance checks", "GovernmentalComplianceChecks"},
        {"Client's compliance checks", "ClientComplianceChecks"},
        {"Broker allocation detail validation rules", "BrokerAllocationDetailValidationRules"},
        {"Custodian allocation detail validation rules", "CustodianAllocationDetailValidationRules"},
        {"Allocation detail affirmation rules", "AllocationDetailAffirmationRules"},
        {"Custodian money transfer methods", "CustodianMoneyTransferMethods"},
        {"Custodian equity transfer methods", "CustodianEquityTransferMethods"},
        {"Exchange order validation rules", "ExchangeOrderValidationRules"},
        {"Secondary order precedence rules", "SecondaryPrecedence"},
        {"Default secondary order precedence rules", "DefaultSecondaryPrecedence"},
        {"Order matching algorithms", "OrderMatchingAlgorithms"},
        {"Trade validation rules", "TradeValidationRules"},
        {"Trade clearing rules", "TradeClearingRules"},
    };
    const auto& model = fixture::catalog();
    std::size_t variants = 0;
    for (const auto& [title, name] : rows) {
        require(model.contains(name), "no feature for '" + title + "'");
        require(model.is_variation_point(name), name + " is not a variation point");
        std::size_t concrete = 0;
        for (const auto& c : model.feature(name).children) concrete += c.kind == fm::FeatureKind::Concrete;
        require(concrete >= 2, name + " has fewer than two variants");
        variants += concrete;
    }
    require(model.variation_points().size() == rows.size(), "model has variation points outside the expected set");
    require(variants >= 46, "only " + std::to_string(variants) + " variants");
    return {true, "20 variation points, " + std::to_string(variants) + " variants"};
}

// 9 ---------------------------------------------------------------------------

Verdict determinism() {
    const auto model = (oracle::data_dir() / "catalog.fm").string();
    int pairs = 0;
    for (const auto& p : kProducts) {
        for (const auto& id : kScenarios) {
            std::string runs[2];
            for (auto& r : runs) {
                std::ostringstream out, err;
                const int code = cli::dispatch(
                    {"run", model, (oracle::data_dir() / (p + ".cfg")).string(), id, "--format", "machine"}, out, err);
                require(code == 0, p + "/" + id + " exited " + std::to_string(code) + ": " + err.str());
                r = out.str();
            }
            require(!runs[0].empty() && runs[0] == runs[1], p + "/" + id + " reports differ between runs");
            ++pairs;
        }
    }
    return {true, std::to_string(pairs) + " report pairs byte-identical"};
}

}  // namespace

int main() {
    struct Criterion {
        std::string title;
        std::function<Verdict()> check;
        long budget_ms;  // 0: no time limit
    };
    const std::vector<Criterion> criteria{
        {"two-product derivation", two_products, 1000},
        {"three-scenario validation", three_scenarios, 5000},
        {"conservation", conservation, 0},
        {"cross-tree constraint enforcement", cross_tree, 0},
        {"configuration-enumeration oracle", enumeration_oracle, 10000},
        {"matching-engine oracle", matching_oracle, 30000},
        {"clearing equivalence", clearing_equivalence, 10000},
        {"catalog coverage", catalog_coverage, 0},
        {"determinism", determinism, 0},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].check();
        } catch (const std::exception& e) {
            v = {false, e.what()};
        }
        const auto ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
        if (v.pass && criteria[i].budget_ms > 0 && ms > criteria[i].budget_ms) {
            v = {false, "took " + std::to_string(ms) + " ms, budget " + std::to_string(criteria[i].budget_ms) + " ms"};
        }
        failed += !v.pass;
        std::cout << (v.pass ? "PASS" : "FAIL") << "  criterion " << i + 1 << ": " << criteria[i].title << " ("
                  << ms << " ms) " << v.detail << std::endl;
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
