// Custodian product line: safekeeping of institutional deposits, allocation
// detail validation, affirmation of broker contracts, forwarding of
// allocations to clearing and institutional settlement.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "seco/domain.hpp"
#include "seco/feature_model.hpp"
#include "seco/ledger.hpp"
#include "seco/registry.hpp"
#include "seco/transfer_methods.hpp"

namespace seco::custodian {

inline constexpr std::string_view kAllocationStage = "allocation_validation";
inline constexpr std::string_view kAffirmationStage = "affirmation";

struct AffirmationViolation {
    std::string rule;
    std::string contract_id;  // empty when the violation concerns details only
    std::string alloc_id;

    auto operator<=>(const AffirmationViolation&) const = default;
    std::string to_string() const;
};

struct AffirmationVerdict {
    std::vector<AffirmationViolation> violations;  // sorted
    bool affirmed() const { return violations.empty(); }
};

/// Extra rule bound at the affirmation variation point.
class AffirmationRule {
public:
    virtual ~AffirmationRule() = default;
    virtual std::string_view name() const = 0;
    virtual void check(const std::vector<Contract>& contracts, const std::vector<AllocationDetail>& details,
                       std::vector<AffirmationViolation>& out) const = 0;
};

std::unique_ptr<AffirmationRule> make_affirmation_rule(std::string_view variant, const ParticipantId& custodian);

/// Base rules: each contract matches exactly one detail through alloc_ref
/// with equal symbol, quantity and price; contract and detail quantity
/// totals agree; no detail is left unmatched. Then the bound variants.
/// The verdict does not depend on the order of either input.
AffirmationVerdict affirm(const std::vector<Contract>& contracts, const std::vector<AllocationDetail>& details,
                          const std::vector<const AffirmationRule*>& variants);

struct CustodianSettings {
    ParticipantId clearing{ParticipantRole::ClearingCorporation, "CC1"};
};

/// What the custodian holds on behalf of one end client.
struct Deposit {
    std::int64_t money = 0;
    std::map<std::string, std::int64_t> positions;
};

class Custodian : public Participant {
public:
    Custodian(ParticipantId id, const fm::ProductSpec& product, CustodianSettings settings,
              ServiceRegistry& registry, Ledger& ledger);
    ~Custodian() override;

    const ParticipantId& participant_id() const override { return id_; }
    /// Omnibus account holding every client deposit.
    std::string omnibus_account() const { return house_account(id_); }

    void register_institution(const std::string& institution, std::set<std::string> end_clients);

    /// Moves assets from the end client's account into the omnibus account.
    void deposit_money(const std::string& end_client, const Money& amount);
    void deposit_equity(const std::string& end_client, const std::string& symbol, std::int64_t qty);
    const std::map<std::string, Deposit>& deposits() const { return deposits_; }

    /// Base rules: NonPositiveQuantity, UnknownInstitution,
    /// InconsistentSymbol; then the bound variants.
    Outcome<Accepted> receive_allocation_details(const std::vector<AllocationDetail>& details);

    /// Contracts arriving from a broker, held until affirm_received.
    void receive_contracts(const std::vector<Contract>& contracts);
    std::size_t contracts_waiting() const { return inbox_.size(); }

    /// On success the affirmation goes to the contracts' broker and the
    /// custodian takes over settlement of the affirmed allocations.
    Outcome<Affirmation> affirm_contracts(const std::vector<Contract>& contracts);
    Outcome<Affirmation> affirm_received();
    const std::optional<AffirmationVerdict>& last_verdict() const { return last_verdict_; }

    /// Submits each affirmed, unforwarded allocation to clearing once.
    std::vector<Rejection> send_trades_to_clearing_rec();

    /// Delivers or pays each end client whose allocation has settled, then
    /// returns what is left of fully settled clients' deposits. Idempotent.
    void settle_institutional_rec();

    std::size_t pending_details() const { return pending_.size(); }
    std::size_t affirmed_allocations() const { return affirmed_.size(); }
    std::size_t unsettled_allocations() const;
    /// Alloc ids whose clients this custodian credited.
    std::vector<std::string> settled_allocations() const;
    /// `affirmation_id|broker|contract_ids` and `rejection|rule|detail` lines.
    const std::vector<std::string>& affirmation_log() const { return log_; }

private:
    struct Allocation {
        AllocationDetail detail;
        bool forwarded = false;
        bool settled = false;
    };

    Rejection reject(std::string rule, std::string detail = {}) const;
    void release_deposits();

    ParticipantId id_;
    CustodianSettings settings_;
    ServiceRegistry& registry_;
    Ledger& ledger_;

    std::vector<std::string> detail_rule_names_;
    std::vector<std::unique_ptr<AffirmationRule>> affirmation_rules_;
    std::unique_ptr<MoneyTransferMethod> money_method_;
    std::unique_ptr<EquityTransferMethod> equity_method_;

    std::map<std::string, std::set<std::string>> institutions_;
    std::map<std::string, Deposit> deposits_;
    std::vector<AllocationDetail> pending_;
    std::vector<Contract> inbox_;
    std::vector<Allocation> affirmed_;
    std::optional<AffirmationVerdict> last_verdict_;
    std::vector<std::string> log_;
    std::uint64_t affirmation_counter_ = 0;
};

}  // namespace seco::custodian
