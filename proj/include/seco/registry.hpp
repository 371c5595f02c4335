// In-process service registry. Participants find each other by
// (role, id); the key stands in for a network address.

#pragma once

#include <compare>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace seco {

enum class ParticipantRole {
    Broker,
    Custodian,
    Exchange,
    ClearingCorporation,
    ClearingBank,
    Depository,
};

std::string_view to_string(ParticipantRole role);
ParticipantRole parse_role(std::string_view text);

struct ParticipantId {
    ParticipantRole role;
    std::string id;

    auto operator<=>(const ParticipantId&) const = default;
    std::string to_string() const;
};

/// Common surface of every participant's software.
class Participant {
public:
    virtual ~Participant() = default;
    virtual const ParticipantId& participant_id() const = 0;
};

class RegistryError : public std::runtime_error {
public:
    enum class Kind { DuplicateRegistration, NotFound, WrongType };
    RegistryError(Kind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Holds non-owning handles; registrants must outlive the registry's use.
class ServiceRegistry {
public:
    void register_service(const ParticipantId& pid, Participant& handle);

    Participant& lookup(const ParticipantId& pid) const;

    template <typename T>
    T& lookup_as(const ParticipantId& pid) const {
        auto* typed = dynamic_cast<T*>(&lookup(pid));
        if (!typed) {
            throw RegistryError(RegistryError::Kind::WrongType,
                                pid.to_string() + " is registered with an unexpected service type");
        }
        return *typed;
    }

    /// Registration order.
    std::vector<ParticipantId> list_by_role(ParticipantRole role) const;

    bool contains(const ParticipantId& pid) const { return entries_.contains(pid); }
    std::size_t size() const { return entries_.size(); }

private:
    std::map<ParticipantId, Participant*> entries_;
    std::vector<ParticipantId> order_;
};

}  // namespace seco
