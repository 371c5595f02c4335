#include "seco/catalog.hpp"

#include <algorithm>

namespace seco::catalog {

std::string_view order_type_feature(OrderType type) {
    switch (type) {
        case OrderType::Market: return "Market";
        case OrderType::Limit: return "Limit";
        case OrderType::ImmediateOrCancel: return "ImmediateOrCancel";
        case OrderType::FillOrKill: return "FillOrKill";
    }
    return "?";
}

std::string_view matching_algorithm_feature(OrderType type) {
    switch (type) {
        case OrderType::Market: return "MarketMatching";
        case OrderType::Limit: return "LimitMatching";
        case OrderType::ImmediateOrCancel: return "ImmediateOrCancelMatching";
        case OrderType::FillOrKill: return "FillOrKillMatching";
    }
    return "?";
}

std::vector<std::string> bound_variants(const fm::ProductSpec& product,
                                        std::string_view variation_point,
                                        std::initializer_list<std::string_view> known,
                                        bool required) {
    const auto& variants = product.bound(std::string(variation_point));
    if (required && variants.empty()) {
        throw ProductError("product '" + product.product_name() + "' binds nothing at " +
                           std::string(variation_point));
    }
    for (const auto& v : variants) {
        if (std::find(known.begin(), known.end(), v) == known.end()) {
            throw ProductError("no implementation for variant '" + v + "' of " +
                               std::string(variation_point));
        }
    }
    return variants;
}

std::string single_variant(const fm::ProductSpec& product, std::string_view variation_point,
                           std::initializer_list<std::string_view> known) {
    auto variants = bound_variants(product, variation_point, known);
    if (variants.size() != 1) {
        throw ProductError(std::string(variation_point) + " must bind exactly one variant");
    }
    return variants.front();
}

bool binds(const std::vector<std::string>& variants, std::string_view name) {
    return std::find(variants.begin(), variants.end(), name) != variants.end();
}

}  // namespace seco::catalog
