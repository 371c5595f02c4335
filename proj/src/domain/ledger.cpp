#include "seco/ledger.hpp"

#include <charconv>
#include <set>

namespace seco {

bool operator==(const AccountState& a, const AccountState& b) {
    if (a.money != b.money) return false;
    auto covers = [](const AccountState& x, const AccountState& y) {
        for (const auto& [symbol, qty] : x.positions) {
            if (y.position(symbol) != qty) return false;
        }
        return true;
    };
    return covers(a, b) && covers(b, a);
}

Transfer Transfer::money(std::string from, std::string to, const Money& amount, std::string cause) {
    return Transfer{TransferKind::Money, std::move(from), std::move(to), amount.minor_units(), {},
                    std::move(cause)};
}

Transfer Transfer::equity(std::string from, std::string to, std::string symbol, std::int64_t qty,
                          std::string cause) {
    return Transfer{TransferKind::Equity, std::move(from), std::move(to), qty, std::move(symbol),
                    std::move(cause)};
}

std::int64_t Snapshot::total_money() const {
    std::int64_t sum = 0;
    for (const auto& [_, a] : *accounts_) sum += a.money;
    return sum;
}

std::int64_t Snapshot::total_position(const std::string& symbol) const {
    std::int64_t sum = 0;
    for (const auto& [_, a] : *accounts_) sum += a.position(symbol);
    return sum;
}

std::vector<std::string> Snapshot::symbols() const {
    std::set<std::string> out;
    for (const auto& [_, a] : *accounts_) {
        for (const auto& [s, _q] : a.positions) out.insert(s);
    }
    return {out.begin(), out.end()};
}

std::string_view to_string(LedgerError::Kind kind) {
    using K = LedgerError::Kind;
    switch (kind) {
        case K::InsufficientFunds: return "InsufficientFunds";
        case K::InsufficientPosition: return "InsufficientPosition";
        case K::UnknownAccount: return "UnknownAccount";
        case K::NonPositiveAmount: return "NonPositiveAmount";
        case K::NonPositiveQuantity: return "NonPositiveQuantity";
        case K::SameAccount: return "SameAccount";
        case K::DuplicateAccount: return "DuplicateAccount";
        case K::MalformedCause: return "MalformedCause";
    }
    return "?";
}

LedgerError::LedgerError(Kind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

Ledger::Ledger(std::string currency) : currency_(std::move(currency)) {
    (void)Money(0, currency_);  // validates the code
}

void Ledger::open_account(const std::string& owner, std::int64_t money,
                          std::map<std::string, std::int64_t> positions) {
    if (owner.empty() || owner.find('|') != std::string::npos) {
        throw LedgerError(LedgerError::Kind::UnknownAccount, "invalid account name '" + owner + "'");
    }
    if (money < 0) throw LedgerError(LedgerError::Kind::InsufficientFunds, owner + " opened negative");
    for (const auto& [s, q] : positions) {
        if (q < 0) throw LedgerError(LedgerError::Kind::InsufficientPosition, owner + " opened short " + s);
    }
    if (accounts_.contains(owner)) {
        throw LedgerError(LedgerError::Kind::DuplicateAccount, owner + " already exists");
    }
    accounts_.emplace(owner, AccountState{money, std::move(positions)});
}

const AccountState& Ledger::account(const std::string& owner) const {
    auto it = accounts_.find(owner);
    if (it == accounts_.end()) throw LedgerError(LedgerError::Kind::UnknownAccount, owner);
    return it->second;
}

void Ledger::check(const Snapshot::Accounts& accounts, const Transfer& t) const {
    using K = LedgerError::Kind;
    if (t.cause.find_first_of("|\n") != std::string::npos) {
        throw LedgerError(K::MalformedCause, "'" + t.cause + "'");
    }
    auto from = accounts.find(t.from);
    if (from == accounts.end()) throw LedgerError(K::UnknownAccount, t.from);
    if (!accounts.contains(t.to)) throw LedgerError(K::UnknownAccount, t.to);
    if (t.from == t.to) throw LedgerError(K::SameAccount, t.from);
    if (t.kind == TransferKind::Money) {
        if (t.amount <= 0) throw LedgerError(K::NonPositiveAmount, std::to_string(t.amount));
        if (from->second.money < t.amount) {
            throw LedgerError(K::InsufficientFunds, t.from + " holds " + std::to_string(from->second.money) +
                                                       ", needs " + std::to_string(t.amount));
        }
    } else {
        if (t.amount <= 0) throw LedgerError(K::NonPositiveQuantity, std::to_string(t.amount));
        if (t.symbol.empty() || t.symbol.find('|') != std::string::npos) {
            throw LedgerError(K::MalformedCause, "invalid symbol '" + t.symbol + "'");
        }
        const auto held = from->second.position(t.symbol);
        if (held < t.amount) {
            throw LedgerError(K::InsufficientPosition, t.from + " holds " + std::to_string(held) + " " +
                                                           t.symbol + ", needs " + std::to_string(t.amount));
        }
    }
}

void Ledger::apply(Snapshot::Accounts& accounts, const Transfer& t) {
    auto& from = accounts.at(t.from);
    auto& to = accounts.at(t.to);
    if (t.kind == TransferKind::Money) {
        from.money -= t.amount;
        to.money += t.amount;
    } else {
        from.positions[t.symbol] -= t.amount;
        to.positions[t.symbol] += t.amount;
    }
}

std::uint64_t Ledger::transfer_money(const std::string& from, const std::string& to,
                                     const Money& amount, const std::string& cause) {
    if (amount.currency() != currency_) {
        throw CurrencyMismatch("ledger is " + currency_ + ", transfer is " + amount.currency());
    }
    const Transfer t = Transfer::money(from, to, amount, cause);
    return commit(std::span(&t, 1)).front();
}

std::uint64_t Ledger::transfer_equity(const std::string& from, const std::string& to,
                                      const std::string& symbol, std::int64_t qty,
                                      const std::string& cause) {
    const Transfer t = Transfer::equity(from, to, symbol, qty, cause);
    return commit(std::span(&t, 1)).front();
}

std::vector<std::uint64_t> Ledger::commit(std::span<const Transfer> transfers) {
    // Stage on a copy so a failure part-way through leaves nothing behind.
    Snapshot::Accounts staged = accounts_;
    for (std::size_t i = 0; i < transfers.size(); ++i) {
        try {
            check(staged, transfers[i]);
        } catch (LedgerError& e) {
            e.set_batch_index(i);
            throw;
        }
        apply(staged, transfers[i]);
    }
    accounts_ = std::move(staged);
    std::vector<std::uint64_t> seqs;
    for (const auto& t : transfers) {
        const auto seq = journal_.size() + 1;
        journal_.push_back({seq, t});
        seqs.push_back(seq);
    }
    return seqs;
}

Snapshot Ledger::replay(const Snapshot& initial, std::span<const JournalEntry> entries) {
    Snapshot::Accounts accounts = initial.accounts();
    for (const auto& e : entries) {
        if (!accounts.contains(e.transfer.from) || !accounts.contains(e.transfer.to)) {
            throw LedgerError(LedgerError::Kind::UnknownAccount,
                              "journal entry " + std::to_string(e.seq) + " names an unknown account");
        }
        apply(accounts, e.transfer);
    }
    return Snapshot(std::move(accounts));
}

void Ledger::adjust_unjournaled(const std::string& owner, std::int64_t money_delta) {
    auto it = accounts_.find(owner);
    if (it == accounts_.end()) throw LedgerError(LedgerError::Kind::UnknownAccount, owner);
    it->second.money += money_delta;
}

std::string format_journal_line(const JournalEntry& e) {
    const auto& t = e.transfer;
    std::string out = std::to_string(e.seq);
    out += t.kind == TransferKind::Money ? "|money|" : "|equity|";
    out += t.from + "|" + t.to + "|" + std::to_string(t.amount) + "|" + t.symbol + "|" + t.cause;
    return out;
}

JournalEntry parse_journal_line(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (int i = 0; i < 6; ++i) {
        const auto bar = line.find('|', start);
        if (bar == std::string_view::npos) {
            throw std::invalid_argument("journal line needs 7 fields: '" + std::string(line) + "'");
        }
        fields.push_back(line.substr(start, bar - start));
        start = bar + 1;
    }
    fields.push_back(line.substr(start));

    auto to_int = [&](std::string_view s) {
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size()) {
            throw std::invalid_argument("bad integer '" + std::string(s) + "' in journal line");
        }
        return v;
    };

    JournalEntry e;
    e.seq = static_cast<std::uint64_t>(to_int(fields[0]));
    if (fields[1] == "money") {
        e.transfer.kind = TransferKind::Money;
    } else if (fields[1] == "equity") {
        e.transfer.kind = TransferKind::Equity;
    } else {
        throw std::invalid_argument("bad journal kind '" + std::string(fields[1]) + "'");
    }
    e.transfer.from = std::string(fields[2]);
    e.transfer.to = std::string(fields[3]);
    e.transfer.amount = to_int(fields[4]);
    e.transfer.symbol = std::string(fields[5]);
    e.transfer.cause = std::string(fields[6]);
    return e;
}

}  // namespace seco
