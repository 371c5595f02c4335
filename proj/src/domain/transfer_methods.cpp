#include "seco/transfer_methods.hpp"

#include <stdexcept>

namespace seco {

namespace {

class InternalBook final : public MoneyTransferMethod {
public:
    std::string_view name() const override { return "internal_book"; }
};

class BankWire final : public MoneyTransferMethod {
public:
    std::string_view name() const override { return "bank_wire"; }
};

class DepositoryBook final : public EquityTransferMethod {
public:
    std::string_view name() const override { return "depository_book"; }
};

class Certificate final : public EquityTransferMethod {
public:
    std::string_view name() const override { return "certificate"; }
};

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

std::unique_ptr<MoneyTransferMethod> make_money_transfer_method(std::string_view variant) {
    if (ends_with(variant, "InternalBookTransfer")) return std::make_unique<InternalBook>();
    if (ends_with(variant, "BankWireTransfer")) return std::make_unique<BankWire>();
    throw std::invalid_argument("unknown money transfer method '" + std::string(variant) + "'");
}

std::unique_ptr<EquityTransferMethod> make_equity_transfer_method(std::string_view variant) {
    if (ends_with(variant, "DepositoryBookTransfer")) return std::make_unique<DepositoryBook>();
    if (ends_with(variant, "CertificateTransfer")) return std::make_unique<Certificate>();
    throw std::invalid_argument("unknown equity transfer method '" + std::string(variant) + "'");
}

}  // namespace seco
