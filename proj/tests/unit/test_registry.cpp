#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "seco/lifecycle.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace seco;

namespace {

struct Stub : Participant {
    explicit Stub(ParticipantId id) : id_(std::move(id)) {}
    const ParticipantId& participant_id() const override { return id_; }
    ParticipantId id_;
};

struct OtherStub : Stub {
    using Stub::Stub;
};

ParticipantId broker_id(std::string id) { return {ParticipantRole::Broker, std::move(id)}; }

RegistryError::Kind error_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const RegistryError& e) {
        return e.kind();
    }
    FAIL("no registry error");
    return RegistryError::Kind::NotFound;
}

}  // namespace

TEST_CASE("lookup returns the registered handle", "[registry]") {
    ServiceRegistry reg;
    Stub b1(broker_id("B1"));
    reg.register_service(b1.participant_id(), b1);
    REQUIRE(&reg.lookup(broker_id("B1")) == &b1);
    REQUIRE(&reg.lookup_as<Stub>(broker_id("B1")) == &b1);
}

TEST_CASE("registration errors", "[registry]") {
    ServiceRegistry reg;
    Stub b1(broker_id("B1"));
    reg.register_service(b1.participant_id(), b1);
    REQUIRE(error_of([&] { reg.register_service(b1.participant_id(), b1); }) ==
            RegistryError::Kind::DuplicateRegistration);
    REQUIRE(error_of([&] { reg.lookup(broker_id("B9")); }) == RegistryError::Kind::NotFound);
    REQUIRE(error_of([&] { reg.lookup_as<OtherStub>(broker_id("B1")); }) == RegistryError::Kind::WrongType);
}

TEST_CASE("list_by_role keeps registration order per role", "[registry]") {
    ServiceRegistry reg;
    REQUIRE(reg.list_by_role(ParticipantRole::Broker).empty());
    Stub b2(broker_id("B2")), b1(broker_id("B1")), x1({ParticipantRole::Exchange, "X1"});
    reg.register_service(b2.participant_id(), b2);
    reg.register_service(x1.participant_id(), x1);
    reg.register_service(b1.participant_id(), b1);
    REQUIRE(reg.list_by_role(ParticipantRole::Broker) == std::vector<ParticipantId>{broker_id("B2"), broker_id("B1")});
    REQUIRE(reg.size() == 3);
}

TEST_CASE("register, lookup and list stay consistent", "[registry][property]") {
    std::mt19937_64 rng(5);
    const std::vector<ParticipantRole> roles{ParticipantRole::Broker, ParticipantRole::Custodian,
                                             ParticipantRole::Exchange, ParticipantRole::Depository};
    for (int round = 0; round < 50; ++round) {
        ServiceRegistry reg;
        std::vector<std::unique_ptr<Stub>> stubs;
        std::map<ParticipantRole, std::vector<ParticipantId>> expected;
        for (int i = 0; i < 20; ++i) {
            ParticipantId pid{roles[rng() % roles.size()], "P" + std::to_string(rng() % 8)};
            auto stub = std::make_unique<Stub>(pid);
            if (reg.contains(pid)) {
                REQUIRE_THROWS_AS(reg.register_service(pid, *stub), RegistryError);
                continue;
            }
            reg.register_service(pid, *stub);
            expected[pid.role].push_back(pid);
            stubs.push_back(std::move(stub));
        }
        for (auto role : roles) {
            REQUIRE(reg.list_by_role(role) == expected[role]);
            for (const auto& pid : reg.list_by_role(role)) REQUIRE(reg.lookup(pid).participant_id() == pid);
        }
    }
}

TEST_CASE("scenario wiring registers one exchange", "[registry]") {
    const auto sc = lifecycle::load_scenario(oracle::data_dir() / "scenarios" / "retail_institutional.scn");
    lifecycle::Ecosystem eco(fixture::product("seco_a"), sc);
    const auto& reg = eco.registry();
    REQUIRE(reg.list_by_role(ParticipantRole::Exchange) ==
            std::vector<ParticipantId>{{ParticipantRole::Exchange, "X1"}});
    REQUIRE(&reg.lookup({ParticipantRole::Exchange, "X1"}) == eco.exchanges().front());
    REQUIRE(reg.list_by_role(ParticipantRole::Broker).size() == 2);
    REQUIRE(reg.list_by_role(ParticipantRole::Custodian).size() == 1);
}

TEST_CASE("role names parse and print", "[registry]") {
    for (auto role : {ParticipantRole::Broker, ParticipantRole::Custodian, ParticipantRole::Exchange,
                      ParticipantRole::ClearingCorporation, ParticipantRole::ClearingBank, ParticipantRole::Depository}) {
        REQUIRE(parse_role(to_string(role)) == role);
    }
    REQUIRE_THROWS_AS(parse_role("bank"), std::invalid_argument);
}
