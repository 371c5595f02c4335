#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "seco/lifecycle.hpp"

using namespace seco;
using namespace seco::custodian;

namespace {

const ParticipantId kB1{ParticipantRole::Broker, "B1"};
const ParticipantId kK1{ParticipantRole::Custodian, "K1"};

AllocationDetail detail(std::string alloc, std::string client, std::int64_t qty, std::int64_t price = 1040,
                        std::string institution = "F1") {
    return {std::move(alloc), std::move(institution), std::move(client), "BL1", Side::Buy, "ACME", qty, Money(price)};
}

Contract contract_for(const AllocationDetail& d, std::string id) {
    return {std::move(id), kB1, kK1, d.alloc_id, d.symbol, d.quantity, d.price};
}

std::vector<Contract> contracts_for(const std::vector<AllocationDetail>& ds) {
    std::vector<Contract> out;
    for (std::size_t i = 0; i < ds.size(); ++i) out.push_back(contract_for(ds[i], "B1-CT" + std::to_string(i + 1)));
    return out;
}

std::vector<std::string> rules_of(const AffirmationVerdict& v) {
    std::vector<std::string> out;
    for (const auto& x : v.violations) out.push_back(x.rule);
    return out;
}

struct World {
    explicit World(const std::string& product = "seco_a")
        : scenario(lifecycle::load_scenario(oracle::data_dir() / "scenarios" / "retail_institutional.scn")),
          eco(fixture::product(product), scenario) {}
    Custodian& k1() { return *eco.custodians()[0]; }

    lifecycle::Scenario scenario;
    lifecycle::Ecosystem eco;
};

}  // namespace

TEST_CASE("matching contracts and details are affirmed", "[custodian]") {
    const std::vector<AllocationDetail> ds{detail("A1", "E1", 60), detail("A2", "E2", 40)};
    REQUIRE(affirm(contracts_for(ds), ds, {}).affirmed());
}

TEST_CASE("a price one unit off is a price mismatch", "[custodian]") {
    const std::vector<AllocationDetail> ds{detail("A1", "E1", 60), detail("A2", "E2", 40)};
    auto cs = contracts_for(ds);
    cs[1].price = Money(1041);
    const auto v = affirm(cs, ds, {});
    REQUIRE(rules_of(v) == std::vector<std::string>{"PriceMismatch"});
    REQUIRE(v.violations[0].contract_id == "B1-CT2");
}

TEST_CASE("details without contracts are unmatched", "[custodian]") {
    const auto v = affirm({}, {detail("A1", "E1", 60)}, {});
    REQUIRE(std::count(v.violations.begin(), v.violations.end(),
                       AffirmationViolation{"UnmatchedDetails", "", "A1"}) == 1);
    REQUIRE_FALSE(v.affirmed());
}

TEST_CASE("bound affirmation variants add their own checks", "[custodian]") {
    const std::vector<AllocationDetail> ds{detail("A1", "E1", 60)};
    auto cs = contracts_for(ds);
    cs[0].custodian = {ParticipantRole::Custodian, "K2"};
    const auto party = make_affirmation_rule("ContractPartyAffirmation", kK1);
    REQUIRE(rules_of(affirm(cs, ds, {party.get()})) == std::vector<std::string>{"WrongCustodian"});

    const std::vector<AllocationDetail> two{detail("A1", "E1", 60), detail("A2", "E2", 40)};
    auto dup = contracts_for(two);
    dup[1].contract_id = dup[0].contract_id;
    const auto unique = make_affirmation_rule("ContractIdUniquenessAffirmation", kK1);
    REQUIRE(affirm(dup, two, {}).affirmed());
    REQUIRE_FALSE(affirm(dup, two, {unique.get()}).affirmed());
}

TEST_CASE("affirmation agrees with multiset equality and ignores input order", "[custodian][property]") {
    std::mt19937_64 rng(13);
    for (int round = 0; round < 500; ++round) {
        std::vector<AllocationDetail> ds;
        const int n = static_cast<int>(rng() % 4) + 1;
        for (int i = 0; i < n; ++i) {
            ds.push_back(detail("A" + std::to_string(rng() % 3), "E1", static_cast<std::int64_t>(rng() % 3 + 1) * 10,
                                1040 + static_cast<std::int64_t>(rng() % 2)));
        }
        auto cs = contracts_for(ds);
        switch (rng() % 5) {
            case 0: cs[rng() % cs.size()].quantity += 10; break;
            case 1: cs[rng() % cs.size()].price = Money(1039); break;
            case 2: cs.pop_back(); break;
            case 3: cs.push_back(contract_for(ds[rng() % ds.size()], "B1-CT99")); break;
            default: break;
        }
        const auto verdict = affirm(cs, ds, {});
        REQUIRE(verdict.affirmed() == oracle::multisets_match(cs, ds));

        auto cs2 = cs;
        auto ds2 = ds;
        std::shuffle(cs2.begin(), cs2.end(), rng);
        std::shuffle(ds2.begin(), ds2.end(), rng);
        REQUIRE(affirm(cs2, ds2, {}).violations == verdict.violations);
    }
}

TEST_CASE("allocation detail rejections", "[custodian]") {
    World w;
    auto neg = w.k1().receive_allocation_details({detail("A1", "E1", -5)});
    REQUIRE(neg.rejection().stage == "allocation_validation");
    REQUIRE(neg.rejection().rule == "NonPositiveQuantity");
    REQUIRE(w.k1().receive_allocation_details({detail("A1", "E1", 5, 1040, "F9")}).rejection().rule ==
            "UnknownInstitution");
    REQUIRE(w.k1().receive_allocation_details({detail("A1", "E7", 5)}).rejection().rule == "UnknownEndClient");
    REQUIRE(w.k1().receive_allocation_details({}).rejection().rule == "NoDetails");
    REQUIRE(w.k1().pending_details() == 0);
    REQUIRE(w.k1().affirm_received().rejection().rule == "NoPendingDetails");
}

TEST_CASE("deposits move client assets into the omnibus account", "[custodian]") {
    World w;
    w.k1().deposit_money("E1", Money(62400));
    REQUIRE(w.eco.ledger().account("E1").money == 100000 - 62400);
    REQUIRE(w.eco.ledger().account(w.k1().omnibus_account()).money == 62400);
    REQUIRE(w.k1().deposits().at("E1").money == 62400);
}

TEST_CASE("clearing submission happens once and settlement is idempotent", "[custodian]") {
    World w;
    std::size_t forwarded_at_clear = 0;
    lifecycle::run_scenario(fixture::product("seco_a"), w.scenario, w.eco, [&](const std::string& step, auto& eco) {
        if (step == "send_trades_to_clearing") {
            forwarded_at_clear = eco.custodians()[0]->affirmed_allocations();
            REQUIRE(eco.custodians()[0]->send_trades_to_clearing_rec().empty());
        }
    });
    REQUIRE(forwarded_at_clear == 2);
    REQUIRE(w.k1().unsettled_allocations() == 0);
    REQUIRE(w.k1().settled_allocations() == std::vector<std::string>{"A1", "A2"});
    const auto journal = w.eco.ledger().journal().size();
    w.k1().settle_institutional_rec();
    REQUIRE(w.eco.ledger().journal().size() == journal);
    REQUIRE(w.k1().affirmation_log().size() == 1);
}
