#include "seco/money.hpp"

#include <cctype>
#include <compare>

namespace seco {

Money::Money(std::int64_t minor_units, std::string_view currency)
    : amount_(minor_units), currency_(currency) {
    if (currency_.size() != 3 || !std::isupper(static_cast<unsigned char>(currency_[0])) ||
        !std::isupper(static_cast<unsigned char>(currency_[1])) ||
        !std::isupper(static_cast<unsigned char>(currency_[2]))) {
        throw std::invalid_argument("currency must be a 3-letter code, got '" + currency_ + "'");
    }
}

void Money::require_same_currency(const Money& rhs) const {
    if (currency_ != rhs.currency_) {
        throw CurrencyMismatch("cannot combine " + currency_ + " with " + rhs.currency_);
    }
}

Money Money::operator+(const Money& rhs) const {
    require_same_currency(rhs);
    std::int64_t out;
    if (__builtin_add_overflow(amount_, rhs.amount_, &out)) throw std::overflow_error("money overflow");
    return Money(out, currency_);
}

Money Money::operator-(const Money& rhs) const {
    require_same_currency(rhs);
    std::int64_t out;
    if (__builtin_sub_overflow(amount_, rhs.amount_, &out)) throw std::overflow_error("money overflow");
    return Money(out, currency_);
}

Money Money::operator-() const { return Money(0, currency_) - *this; }

Money Money::operator*(std::int64_t quantity) const {
    std::int64_t out;
    if (__builtin_mul_overflow(amount_, quantity, &out)) throw std::overflow_error("money overflow");
    return Money(out, currency_);
}

bool Money::operator==(const Money& rhs) const {
    require_same_currency(rhs);
    return amount_ == rhs.amount_;
}

std::strong_ordering Money::operator<=>(const Money& rhs) const {
    require_same_currency(rhs);
    return amount_ <=> rhs.amount_;
}

std::string Money::to_string() const { return std::to_string(amount_) + " " + currency_; }

}  // namespace seco
