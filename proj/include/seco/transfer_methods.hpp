// Money and equity transfer-method variants shared by brokers and
// custodians. Every method is a ledger transfer; they differ in how the
// journal entry is annotated.

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "seco/ledger.hpp"

namespace seco {

class MoneyTransferMethod {
public:
    virtual ~MoneyTransferMethod() = default;
    virtual std::string_view name() const = 0;
    std::uint64_t transfer(Ledger& ledger, const std::string& from, const std::string& to,
                           const Money& amount, const std::string& cause) const {
        return ledger.transfer_money(from, to, amount, cause + " [" + std::string(name()) + "]");
    }
};

class EquityTransferMethod {
public:
    virtual ~EquityTransferMethod() = default;
    virtual std::string_view name() const = 0;
    std::uint64_t transfer(Ledger& ledger, const std::string& from, const std::string& to,
                           const std::string& symbol, std::int64_t qty, const std::string& cause) const {
        return ledger.transfer_equity(from, to, symbol, qty, cause + " [" + std::string(name()) + "]");
    }
};

/// Accepts the broker and custodian variant names of the catalog
/// ("BrokerBankWireTransfer", "CustodianInternalBookTransfer", ...).
std::unique_ptr<MoneyTransferMethod> make_money_transfer_method(std::string_view variant);
std::unique_ptr<EquityTransferMethod> make_equity_transfer_method(std::string_view variant);

}  // namespace seco
