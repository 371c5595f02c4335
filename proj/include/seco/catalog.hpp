// Names of the variation points and variants in the shipped feature model,
// and the lookup participants use to read their bound variants from a
// derived product.

#pragma once

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "seco/domain.hpp"
#include "seco/feature_model.hpp"

namespace seco::catalog {

namespace vp {
// Broker
inline constexpr std::string_view kBrokerOrderValidation = "BrokerOrderValidationRules";
inline constexpr std::string_view kPortfolioOptimization = "PortfolioOptimizationAlgorithms";
inline constexpr std::string_view kBestVenueAnalysis = "BestVenueAnalysisAlgorithms";
inline constexpr std::string_view kClientOrderTypes = "ClientOrderTypes";
inline constexpr std::string_view kBrokerMoneyTransfer = "BrokerMoneyTransferMethods";
inline constexpr std::string_view kBrokerEquityTransfer = "BrokerEquityTransferMethods";
inline constexpr std::string_view kOrderRisks = "OrderRisks";
inline constexpr std::string_view kGovernmentalCompliance = "GovernmentalComplianceChecks";
inline constexpr std::string_view kClientCompliance = "ClientComplianceChecks";
inline constexpr std::string_view kBrokerAllocationValidation = "BrokerAllocationDetailValidationRules";
// Custodian
inline constexpr std::string_view kCustodianAllocationValidation = "CustodianAllocationDetailValidationRules";
inline constexpr std::string_view kAffirmationRules = "AllocationDetailAffirmationRules";
inline constexpr std::string_view kCustodianMoneyTransfer = "CustodianMoneyTransferMethods";
inline constexpr std::string_view kCustodianEquityTransfer = "CustodianEquityTransferMethods";
// Exchange
inline constexpr std::string_view kExchangeOrderValidation = "ExchangeOrderValidationRules";
inline constexpr std::string_view kSecondaryPrecedence = "SecondaryPrecedence";
inline constexpr std::string_view kDefaultPrecedence = "DefaultSecondaryPrecedence";
inline constexpr std::string_view kMatchingAlgorithms = "OrderMatchingAlgorithms";
// Clearing corporation
inline constexpr std::string_view kTradeValidation = "TradeValidationRules";
inline constexpr std::string_view kTradeClearing = "TradeClearingRules";
}  // namespace vp

namespace variant {
inline constexpr std::string_view kSymbolFormatCheck = "SymbolFormatCheck";
inline constexpr std::string_view kLotSizeCheck = "LotSizeCheck";
inline constexpr std::string_view kEqualWeightPortfolio = "EqualWeightPortfolio";
inline constexpr std::string_view kSingleBestPortfolio = "SingleBestPortfolio";
inline constexpr std::string_view kFirstVenue = "FirstVenueSelection";
inline constexpr std::string_view kBestQuoteVenue = "BestQuoteVenueSelection";
inline constexpr std::string_view kDeepestBookVenue = "DeepestBookVenueSelection";
inline constexpr std::string_view kBrokerInternalBook = "BrokerInternalBookTransfer";
inline constexpr std::string_view kBrokerBankWire = "BrokerBankWireTransfer";
inline constexpr std::string_view kBrokerDepositoryBook = "BrokerDepositoryBookTransfer";
inline constexpr std::string_view kBrokerCertificate = "BrokerCertificateTransfer";
inline constexpr std::string_view kDuplicateOrderDetection = "DuplicateOrderDetection";
inline constexpr std::string_view kMaxOrderQuantityRisk = "MaxOrderQuantityRisk";
inline constexpr std::string_view kFatFingerPriceRisk = "FatFingerPriceRisk";
inline constexpr std::string_view kRestrictedSymbolList = "RestrictedSymbolList";
inline constexpr std::string_view kSanctionedClientList = "SanctionedClientList";
inline constexpr std::string_view kMaxOrderValueCheck = "MaxOrderValueCheck";
inline constexpr std::string_view kAllowedSymbolsCheck = "AllowedSymbolsCheck";
inline constexpr std::string_view kEndClientAccountCheck = "EndClientAccountCheck";
inline constexpr std::string_view kMinAllocationQuantityCheck = "MinAllocationQuantityCheck";
inline constexpr std::string_view kKnownEndClientCheck = "KnownEndClientCheck";
inline constexpr std::string_view kDuplicateAllocationCheck = "DuplicateAllocationCheck";
inline constexpr std::string_view kContractPartyAffirmation = "ContractPartyAffirmation";
inline constexpr std::string_view kContractIdUniquenessAffirmation = "ContractIdUniquenessAffirmation";
inline constexpr std::string_view kCustodianInternalBook = "CustodianInternalBookTransfer";
inline constexpr std::string_view kCustodianBankWire = "CustodianBankWireTransfer";
inline constexpr std::string_view kCustodianDepositoryBook = "CustodianDepositoryBookTransfer";
inline constexpr std::string_view kCustodianCertificate = "CustodianCertificateTransfer";
inline constexpr std::string_view kTickSizeCheck = "TickSizeCheck";
inline constexpr std::string_view kMaxOrderSizeCheck = "MaxOrderSizeCheck";
inline constexpr std::string_view kTimePriority = "TimePriority";
inline constexpr std::string_view kSizePriority = "SizePriority";
inline constexpr std::string_view kSequenceNumberRule = "SequenceNumberRule";
inline constexpr std::string_view kOrderIdRule = "OrderIdRule";
inline constexpr std::string_view kListedSymbolCheck = "ListedSymbolCheck";
inline constexpr std::string_view kPriceBandCheck = "PriceBandCheck";
inline constexpr std::string_view kTradeForTrade = "TradeForTrade";
inline constexpr std::string_view kMultilateralNetting = "MultilateralNetting";
}  // namespace variant

/// Order-type variant offered by brokers ("Market", "FillOrKill", ...).
std::string_view order_type_feature(OrderType type);
/// The exchange matching algorithm each order type depends on.
std::string_view matching_algorithm_feature(OrderType type);

class ProductError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Variants bound at `variation_point`. Throws ProductError when a bound
/// variant has no implementation in `known`, or when `required` and
/// nothing is bound.
std::vector<std::string> bound_variants(const fm::ProductSpec& product,
                                        std::string_view variation_point,
                                        std::initializer_list<std::string_view> known,
                                        bool required = true);

/// Exactly one bound variant of an alternative group.
std::string single_variant(const fm::ProductSpec& product, std::string_view variation_point,
                           std::initializer_list<std::string_view> known);

bool binds(const std::vector<std::string>& variants, std::string_view name);

}  // namespace seco::catalog
