// Double-entry ledger of money balances and per-symbol equity positions.
//
// Every committed movement debits one account and credits another by the
// same amount, so totals per currency and per symbol never change after
// the accounts are opened. A failed operation leaves the ledger untouched.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "seco/money.hpp"

namespace seco {

enum class TransferKind { Money, Equity };

struct Transfer {
    TransferKind kind = TransferKind::Money;
    std::string from;
    std::string to;
    std::int64_t amount = 0;  // minor units, or shares
    std::string symbol;       // equity only
    std::string cause;

    static Transfer money(std::string from, std::string to, const Money& amount, std::string cause);
    static Transfer equity(std::string from, std::string to, std::string symbol, std::int64_t qty,
                           std::string cause);
};

struct JournalEntry {
    std::uint64_t seq = 0;
    Transfer transfer;
};

struct AccountState {
    std::int64_t money = 0;  // minor units in the ledger currency
    std::map<std::string, std::int64_t> positions;

    std::int64_t position(const std::string& symbol) const {
        auto it = positions.find(symbol);
        return it == positions.end() ? 0 : it->second;
    }
    /// Absent positions equal zero ones.
    friend bool operator==(const AccountState& a, const AccountState& b);
};

/// Immutable point-in-time copy of every account.
class Snapshot {
public:
    using Accounts = std::map<std::string, AccountState>;

    Snapshot() : accounts_(std::make_shared<const Accounts>()) {}
    explicit Snapshot(Accounts accounts)
        : accounts_(std::make_shared<const Accounts>(std::move(accounts))) {}

    const Accounts& accounts() const { return *accounts_; }
    bool contains(const std::string& owner) const { return accounts_->contains(owner); }
    const AccountState& at(const std::string& owner) const { return accounts_->at(owner); }
    bool empty() const { return accounts_->empty(); }

    std::int64_t total_money() const;
    std::int64_t total_position(const std::string& symbol) const;
    /// Every symbol held (at any quantity, including zero) by any account.
    std::vector<std::string> symbols() const;

    friend bool operator==(const Snapshot& a, const Snapshot& b) {
        return a.accounts_ == b.accounts_ || *a.accounts_ == *b.accounts_;
    }

private:
    std::shared_ptr<const Accounts> accounts_;
};

class LedgerError : public std::runtime_error {
public:
    enum class Kind {
        InsufficientFunds,
        InsufficientPosition,
        UnknownAccount,
        NonPositiveAmount,
        NonPositiveQuantity,
        SameAccount,
        DuplicateAccount,
        MalformedCause,
    };
    LedgerError(Kind kind, const std::string& message);
    Kind kind() const { return kind_; }
    /// Position of the offending transfer when thrown from Ledger::commit.
    std::optional<std::size_t> batch_index() const { return batch_index_; }
    void set_batch_index(std::size_t i) { batch_index_ = i; }

private:
    Kind kind_;
    std::optional<std::size_t> batch_index_;
};

std::string_view to_string(LedgerError::Kind kind);

class Ledger {
public:
    explicit Ledger(std::string currency = std::string(Money::kDefaultCurrency));

    const std::string& currency() const { return currency_; }

    /// Setup only: endowments are not journal entries.
    void open_account(const std::string& owner, std::int64_t money = 0,
                      std::map<std::string, std::int64_t> positions = {});
    bool has_account(const std::string& owner) const { return accounts_.contains(owner); }
    const AccountState& account(const std::string& owner) const;

    std::uint64_t transfer_money(const std::string& from, const std::string& to, const Money& amount,
                                 const std::string& cause);
    std::uint64_t transfer_equity(const std::string& from, const std::string& to,
                                  const std::string& symbol, std::int64_t qty,
                                  const std::string& cause);

    /// Applies every transfer in order or none of them; returns the journal
    /// sequence numbers assigned.
    std::vector<std::uint64_t> commit(std::span<const Transfer> transfers);

    Snapshot snapshot() const { return Snapshot(accounts_); }
    const std::vector<JournalEntry>& journal() const { return journal_; }

    /// Rebuilds balances from `initial` by applying `entries` in order.
    static Snapshot replay(const Snapshot& initial, std::span<const JournalEntry> entries);

    /// Bypasses the journal. Exists so tests can prove the conservation
    /// checks notice out-of-band changes.
    void adjust_unjournaled(const std::string& owner, std::int64_t money_delta);

private:
    void check(const Snapshot::Accounts& accounts, const Transfer& t) const;
    static void apply(Snapshot::Accounts& accounts, const Transfer& t);

    std::string currency_;
    Snapshot::Accounts accounts_;
    std::vector<JournalEntry> journal_;
};

/// `seq|money|from|to|amount||cause` or `seq|equity|from|to|qty|symbol|cause`.
std::string format_journal_line(const JournalEntry& entry);
JournalEntry parse_journal_line(std::string_view line);

}  // namespace seco
