#include "fixtures.hpp"

#include <map>

#include "oracles.hpp"

namespace fixture {

const seco::fm::FeatureModel& catalog() {
    static const auto model = seco::fm::load_feature_model(oracle::data_dir() / "catalog.fm");
    return model;
}

const seco::fm::ProductSpec& product(const std::string& name) {
    static std::map<std::string, seco::fm::ProductSpec> cache;
    auto it = cache.find(name);
    if (it == cache.end()) {
        auto cfg = seco::fm::load_configuration(oracle::data_dir() / (name + ".cfg"));
        it = cache.emplace(name, seco::fm::derive_product(catalog(), cfg, name)).first;
    }
    return it->second;
}

seco::ParticipantId broker(const std::string& id) { return {seco::ParticipantRole::Broker, id}; }

seco::Trade retail_trade(const std::string& id, const std::string& buyer_broker, const std::string& seller_broker,
                         const std::string& symbol, std::int64_t price, std::int64_t qty) {
    seco::Trade t;
    t.trade_id = id;
    t.buyer = {"O-" + id + "-b", broker(buyer_broker), "client-" + buyer_broker, std::nullopt};
    t.seller = {"O-" + id + "-s", broker(seller_broker), "client-" + seller_broker, std::nullopt};
    t.symbol = symbol;
    t.price = seco::Money(price);
    t.quantity = qty;
    t.exchange = {seco::ParticipantRole::Exchange, "X1"};
    return t;
}

ClearingRig::ClearingRig(const seco::fm::ProductSpec& product, std::vector<std::string> brokers,
                         std::vector<std::string> symbols, std::int64_t money, std::int64_t shares)
    : bank({seco::ParticipantRole::ClearingBank, "CB1"}, ledger),
      depository({seco::ParticipantRole::Depository, "D1"}, ledger) {
    for (const auto& b : brokers) {
        std::map<std::string, std::int64_t> positions;
        for (const auto& s : symbols) positions[s] = shares;
        ledger.open_account(seco::house_account(broker(b)), money, positions);
    }
    const seco::ParticipantId cc_id{seco::ParticipantRole::ClearingCorporation, "CC1"};
    ledger.open_account(seco::house_account(cc_id));
    seco::clearing::ClearingSettings settings;
    settings.listed_symbols = {symbols.begin(), symbols.end()};
    registry.register_service(bank.participant_id(), bank);
    registry.register_service(depository.participant_id(), depository);
    cc = std::make_unique<seco::clearing::ClearingCorporation>(cc_id, product, settings, registry, ledger);
    registry.register_service(cc_id, *cc);
}

std::vector<seco::Trade> random_trades(std::mt19937_64& rng, int max_trades) {
    const std::vector<std::string> brokers{"B1", "B2", "B3"};
    const std::vector<std::string> symbols{"AAA", "BBB"};
    std::uniform_int_distribution<int> n(1, max_trades), b(0, 2), s(0, 1), price(95, 105), qty(1, 20);
    std::vector<seco::Trade> out;
    const int count = n(rng);
    for (int i = 0; i < count; ++i) {
        out.push_back(retail_trade("T" + std::to_string(i + 1), brokers[b(rng)], brokers[b(rng)], symbols[s(rng)],
                                   price(rng) * 10, qty(rng)));
    }
    return out;
}

}  // namespace fixture
