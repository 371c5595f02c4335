// Builders shared by the unit and acceptance tests.

#pragma once

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "seco/clearing.hpp"
#include "seco/feature_model.hpp"
#include "seco/ledger.hpp"
#include "seco/registry.hpp"

namespace fixture {

const seco::fm::FeatureModel& catalog();
/// "seco_a" or "seco_b", derived from the shipped configuration.
const seco::fm::ProductSpec& product(const std::string& name);

seco::ParticipantId broker(const std::string& id);

/// A retail trade between the house accounts of two brokers.
seco::Trade retail_trade(const std::string& id, const std::string& buyer_broker, const std::string& seller_broker,
                         const std::string& symbol, std::int64_t price, std::int64_t qty);

/// Ledger, registry, bank, depository and a clearing corporation for one product.
struct ClearingRig {
    explicit ClearingRig(const seco::fm::ProductSpec& product, std::vector<std::string> brokers = {"B1", "B2", "B3"},
                         std::vector<std::string> symbols = {"AAA", "BBB"}, std::int64_t money = 10'000'000,
                         std::int64_t shares = 10'000);

    seco::Ledger ledger;
    seco::ServiceRegistry registry;
    seco::clearing::ClearingBank bank;
    seco::clearing::Depository depository;
    std::unique_ptr<seco::clearing::ClearingCorporation> cc;
};

/// Random trades among brokers B1..B3 over AAA and BBB.
std::vector<seco::Trade> random_trades(std::mt19937_64& rng, int max_trades = 8);

}  // namespace fixture
