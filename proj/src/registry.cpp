#include "seco/registry.hpp"

namespace seco {

std::string_view to_string(ParticipantRole role) {
    switch (role) {
        case ParticipantRole::Broker: return "broker";
        case ParticipantRole::Custodian: return "custodian";
        case ParticipantRole::Exchange: return "exchange";
        case ParticipantRole::ClearingCorporation: return "clearing_corporation";
        case ParticipantRole::ClearingBank: return "clearing_bank";
        case ParticipantRole::Depository: return "depository";
    }
    return "?";
}

ParticipantRole parse_role(std::string_view text) {
    for (auto role : {ParticipantRole::Broker, ParticipantRole::Custodian, ParticipantRole::Exchange,
                      ParticipantRole::ClearingCorporation, ParticipantRole::ClearingBank,
                      ParticipantRole::Depository}) {
        if (to_string(role) == text) return role;
    }
    throw std::invalid_argument("unknown participant role '" + std::string(text) + "'");
}

std::string ParticipantId::to_string() const {
    return std::string(seco::to_string(role)) + ":" + id;
}

void ServiceRegistry::register_service(const ParticipantId& pid, Participant& handle) {
    if (!entries_.emplace(pid, &handle).second) {
        throw RegistryError(RegistryError::Kind::DuplicateRegistration,
                            pid.to_string() + " is already registered");
    }
    order_.push_back(pid);
}

Participant& ServiceRegistry::lookup(const ParticipantId& pid) const {
    auto it = entries_.find(pid);
    if (it == entries_.end()) {
        throw RegistryError(RegistryError::Kind::NotFound, pid.to_string() + " is not registered");
    }
    return *it->second;
}

std::vector<ParticipantId> ServiceRegistry::list_by_role(ParticipantRole role) const {
    std::vector<ParticipantId> out;
    for (const auto& pid : order_) {
        if (pid.role == role) out.push_back(pid);
    }
    return out;
}

}  // namespace seco
