#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace seco {

class CurrencyMismatch : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Exact amount in integer minor units (cents) of one currency.
class Money {
public:
    static constexpr std::string_view kDefaultCurrency = "USD";

    Money() : Money(0) {}
    explicit Money(std::int64_t minor_units, std::string_view currency = kDefaultCurrency);

    std::int64_t minor_units() const { return amount_; }
    const std::string& currency() const { return currency_; }

    bool is_positive() const { return amount_ > 0; }
    bool is_zero() const { return amount_ == 0; }

    Money operator+(const Money& rhs) const;
    Money operator-(const Money& rhs) const;
    Money operator-() const;
    Money& operator+=(const Money& rhs) { return *this = *this + rhs; }
    Money& operator-=(const Money& rhs) { return *this = *this - rhs; }
    /// Per-share price times a share count; throws std::overflow_error.
    Money operator*(std::int64_t quantity) const;

    bool operator==(const Money& rhs) const;
    std::strong_ordering operator<=>(const Money& rhs) const;

    std::string to_string() const;  // "1040 USD"

private:
    void require_same_currency(const Money& rhs) const;

    std::int64_t amount_;
    std::string currency_;
};

}  // namespace seco
