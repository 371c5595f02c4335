#include <algorithm>

#include "seco/lifecycle.hpp"

namespace seco::lifecycle {

namespace {

class StepFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

[[noreturn]] void fail(const Rejection& r) { throw StepFailure("rejected: " + r.to_string()); }

ParticipantId find_participant(const Scenario& sc, ParticipantRole role) {
    for (const auto& p : sc.participants) {
        if (p.role == role) return p;
    }
    throw ScenarioError("no " + std::string(to_string(role)) + " participant");
}

template <typename T>
std::vector<T*> all_of_role(const std::vector<std::unique_ptr<Participant>>& ps, ParticipantRole role) {
    std::vector<T*> out;
    for (const auto& p : ps) {
        if (p->participant_id().role == role) out.push_back(dynamic_cast<T*>(p.get()));
    }
    return out;
}

std::string one_line(std::string s) {
    std::replace(s.begin(), s.end(), '\n', ' ');
    std::replace(s.begin(), s.end(), '|', '/');
    return s;
}

}  // namespace

// --- wiring ---------------------------------------------------------------------------

Ecosystem::Ecosystem(const fm::ProductSpec& product, const Scenario& sc) {
    check_participants(sc);

    for (const auto& [owner, h] : sc.accounts) ledger_.open_account(owner, h.money, h.positions);
    for (const auto& p : sc.participants) {
        const auto account = house_account(p);
        if (!ledger_.has_account(account)) ledger_.open_account(account);
    }

    const auto cc = find_participant(sc, ParticipantRole::ClearingCorporation);
    const auto xid = find_participant(sc, ParticipantRole::Exchange);

    for (const auto& pid : sc.participants) {
        std::unique_ptr<Participant> p;
        switch (pid.role) {
            case ParticipantRole::Broker: {
                auto settings = sc.broker_settings;
                settings.clearing = cc;
                settings.default_venue = xid;
                p = std::make_unique<broker::Broker>(pid, product, settings, registry_, ledger_);
                break;
            }
            case ParticipantRole::Custodian: {
                custodian::CustodianSettings settings;
                settings.clearing = cc;
                p = std::make_unique<custodian::Custodian>(pid, product, settings, registry_, ledger_);
                break;
            }
            case ParticipantRole::Exchange: {
                auto settings = sc.exchange_settings;
                settings.clearing = cc;
                p = std::make_unique<exchange::Exchange>(pid, product, settings, registry_);
                break;
            }
            case ParticipantRole::ClearingCorporation: {
                auto settings = sc.clearing_settings;
                settings.bank = find_participant(sc, ParticipantRole::ClearingBank);
                settings.depository = find_participant(sc, ParticipantRole::Depository);
                p = std::make_unique<clearing::ClearingCorporation>(pid, product, settings, registry_, ledger_);
                break;
            }
            case ParticipantRole::ClearingBank:
                p = std::make_unique<clearing::ClearingBank>(pid, ledger_);
                break;
            case ParticipantRole::Depository:
                p = std::make_unique<clearing::Depository>(pid, ledger_);
                break;
        }
        registry_.register_service(pid, *p);
        participants_.push_back(std::move(p));
    }

    auto broker_of = [&](const std::string& id) -> broker::Broker& {
        const ParticipantId pid{ParticipantRole::Broker, id};
        if (!registry_.contains(pid)) throw ScenarioError("unknown broker " + id);
        return registry_.lookup_as<broker::Broker>(pid);
    };
    for (const auto& rc : sc.retail_clients) {
        if (!ledger_.has_account(rc.account)) throw ScenarioError("retail client " + rc.account + " has no account");
        broker_of(rc.broker).register_retail_client(rc.account);
    }
    for (const auto& inst : sc.institutions) {
        const ParticipantId kid{ParticipantRole::Custodian, inst.custodian};
        if (!registry_.contains(kid)) throw ScenarioError("unknown custodian " + inst.custodian);
        for (const auto& e : inst.end_clients) {
            if (!ledger_.has_account(e)) throw ScenarioError("end client " + e + " has no account");
        }
        std::set<std::string> clients(inst.end_clients.begin(), inst.end_clients.end());
        broker_of(inst.broker).register_institution(inst.id, kid, clients);
        registry_.lookup_as<custodian::Custodian>(kid).register_institution(inst.id, clients);
    }
}

Ecosystem::~Ecosystem() = default;

std::vector<broker::Broker*> Ecosystem::brokers() const {
    return all_of_role<broker::Broker>(participants_, ParticipantRole::Broker);
}
std::vector<custodian::Custodian*> Ecosystem::custodians() const {
    return all_of_role<custodian::Custodian>(participants_, ParticipantRole::Custodian);
}
std::vector<exchange::Exchange*> Ecosystem::exchanges() const {
    return all_of_role<exchange::Exchange>(participants_, ParticipantRole::Exchange);
}
clearing::ClearingCorporation& Ecosystem::clearing_corporation() const {
    return *all_of_role<clearing::ClearingCorporation>(participants_, ParticipantRole::ClearingCorporation).front();
}
clearing::ClearingBank& Ecosystem::clearing_bank() const {
    return *all_of_role<clearing::ClearingBank>(participants_, ParticipantRole::ClearingBank).front();
}
clearing::Depository& Ecosystem::depository() const {
    return *all_of_role<clearing::Depository>(participants_, ParticipantRole::Depository).front();
}

ScenarioAborted::ScenarioAborted(ScenarioReport report)
    : std::runtime_error("scenario " + report.scenario_id + " aborted at step '" + report.aborted_step.value_or("?") +
                         "': " + report.abort_cause),
      report_(std::move(report)) {}

// --- orchestration ---------------------------------------------------------------------

ScenarioReport run_scenario(const fm::ProductSpec& product, const Scenario& scenario, const StepHook& hook) {
    Ecosystem eco(product, scenario);
    return run_scenario(product, scenario, eco, hook);
}

ScenarioReport run_scenario(const fm::ProductSpec& product, const Scenario& sc, Ecosystem& eco,
                            const StepHook& hook) {
    ScenarioReport report;
    report.scenario_id = std::string(to_string(sc.kind));
    report.product_name = product.product_name();
    report.expected = sc.expected;
    report.initial = eco.ledger().snapshot();

    auto& cc = eco.clearing_corporation();
    const auto brokers = eco.brokers();
    const auto custodians = eco.custodians();
    const auto exchanges = eco.exchanges();

    auto collect = [&] {
        report.journal = eco.ledger().journal();
        report.trades.clear();
        for (const auto* x : exchanges) {
            for (const auto& line : x->trade_log()) report.trades.push_back(line);
        }
        report.audit.clear();
        for (const auto* b : brokers) {
            for (const auto& line : b->audit_trail()) report.audit.push_back(line);
        }
        report.affirmations.clear();
        for (const auto* k : custodians) {
            for (const auto& line : k->affirmation_log()) report.affirmations.push_back(line);
        }
        report.settlement.clear();
        for (const auto& si : cc.executed_instructions()) {
            report.settlement.push_back(clearing::format_instruction_line(si));
        }
    };

    auto run_step = [&](const std::string& name, const std::function<std::vector<std::string>()>& body) {
        std::vector<std::string> events;
        try {
            events = body();
        } catch (const std::exception& e) {
            collect();
            report.aborted_step = name;
            report.abort_cause = one_line(e.what());
            throw ScenarioAborted(std::move(report));
        }
        if (hook) hook(name, eco);
        report.steps.push_back({name, eco.ledger().snapshot(), eco.ledger().journal().size(), std::move(events)});
    };

    auto broker_named = [&](const std::string& id) -> broker::Broker& {
        return eco.registry().lookup_as<broker::Broker>({ParticipantRole::Broker, id});
    };
    auto block_step = [&](const std::string& block_id) -> const OrderStep& {
        return *std::find_if(sc.orders.begin(), sc.orders.end(),
                             [&](const OrderStep& o) { return o.block && o.draft.order_id == block_id; });
    };
    auto institution_named = [&](const std::string& id) -> const Institution& {
        auto it = std::find_if(sc.institutions.begin(), sc.institutions.end(),
                               [&](const Institution& i) { return i.id == id; });
        if (it == sc.institutions.end()) throw ScenarioError("unknown institution " + id);
        return *it;
    };
    auto custodian_of = [&](const std::string& institution) -> custodian::Custodian& {
        return eco.registry().lookup_as<custodian::Custodian>(
            {ParticipantRole::Custodian, institution_named(institution).custodian});
    };

    run_step("setup", [&] {
        std::vector<std::string> events;
        for (const auto& a : sc.allocations) {
            const auto& block = block_step(a.block_order_id).draft;
            auto& k = custodian_of(block.client);
            if (block.side == Side::Buy) {
                const auto price = block.limit_price ? block.limit_price : block.price_cap;
                if (!price) throw ScenarioError("block " + block.order_id + " has no price to size deposits");
                k.deposit_money(a.end_client, *price * a.quantity);
                events.push_back(a.end_client + " deposits " + std::to_string((*price * a.quantity).minor_units()) +
                                 " at " + k.participant_id().id);
            } else {
                k.deposit_equity(a.end_client, block.symbol, a.quantity);
                events.push_back(a.end_client + " deposits " + std::to_string(a.quantity) + " " + block.symbol +
                                 " at " + k.participant_id().id);
            }
        }
        return events;
    });

    for (const auto& step : sc.orders) {
        run_step("place " + step.draft.order_id, [&] {
            auto& b = broker_named(step.broker);
            b.begin_step();
            const auto before = b.audit_trail().size();
            auto placed = step.block ? b.place_institutional_order(step.draft) : b.place_retail_order(step.draft);
            if (!placed) fail(placed.rejection());
            return std::vector<std::string>(b.audit_trail().begin() + static_cast<std::ptrdiff_t>(before),
                                            b.audit_trail().end());
        });
    }

    run_step("report_trades", [&] {
        std::vector<std::string> events;
        for (auto* x : exchanges) {
            const auto first = x->trades().size() - x->unreported_trades();
            auto rejections = x->report_trades_rec();
            if (!rejections.empty()) fail(rejections.front());
            for (std::size_t i = first; i < x->trades().size(); ++i) {
                events.push_back(exchange::format_trade_line(x->trades()[i]));
            }
        }
        return events;
    });

    if (!sc.allocations.empty()) {
        std::vector<std::string> block_order;
        std::map<std::string, std::vector<AllocationDetail>> details;
        for (const auto& a : sc.allocations) {
            const auto& block = block_step(a.block_order_id).draft;
            if (!details.contains(a.block_order_id)) block_order.push_back(a.block_order_id);
            details[a.block_order_id].push_back(AllocationDetail{a.alloc_id, block.client, a.end_client,
                                                                 a.block_order_id, block.side, block.symbol,
                                                                 a.quantity, a.price});
        }

        if (!sc.contract_price_tamper.empty()) {
            for (auto* b : brokers) {
                b->set_contract_tamper([&tamper = sc.contract_price_tamper](Contract& c) {
                    if (auto it = tamper.find(c.alloc_ref); it != tamper.end()) {
                        c.price = c.price + Money(it->second, c.price.currency());
                    }
                });
            }
        }

        run_step("allocation_details", [&] {
            std::vector<std::string> events;
            for (const auto& id : block_order) {
                auto& k = custodian_of(block_step(id).draft.client);
                auto accepted = k.receive_allocation_details(details[id]);
                if (!accepted) fail(accepted.rejection());
                events.push_back(k.participant_id().id + " holds " + std::to_string(details[id].size()) +
                                 " allocation details for " + id);
            }
            return events;
        });

        run_step("contracts", [&] {
            std::vector<std::string> events;
            for (const auto& id : block_order) {
                auto& b = broker_named(block_step(id).broker);
                auto contracts = b.handle_allocation_details(details[id]);
                if (!contracts) fail(contracts.rejection());
                for (const auto& c : contracts.value()) {
                    events.push_back(c.contract_id + "|" + c.alloc_ref + "|" + c.symbol + "|" +
                                     std::to_string(c.quantity) + "|" + std::to_string(c.price.minor_units()));
                }
            }
            return events;
        });

        run_step("affirmation", [&] {
            std::vector<std::string> events;
            for (auto* k : custodians) {
                if (k->contracts_waiting() == 0) continue;
                auto affirmed = k->affirm_received();
                if (!affirmed) fail(affirmed.rejection());
                events.push_back(affirmed.value().affirmation_id + " sent to " + affirmed.value().broker.id);
            }
            return events;
        });

        run_step("send_trades_to_clearing", [&] {
            for (auto* k : custodians) {
                auto rejections = k->send_trades_to_clearing_rec();
                if (!rejections.empty()) fail(rejections.front());
            }
            return std::vector<std::string>{};
        });
    }

    run_step("clear", [&] {
        std::vector<std::string> events;
        for (const auto& o : cc.clear_rec()) {
            events.push_back(o.party + "|" + o.counterparty + "|" + o.symbol + "|" + std::to_string(o.net_quantity) +
                             "|" + std::to_string(o.net_money));
        }
        return events;
    });

    run_step("settle", [&] {
        std::vector<std::string> events;
        for (const auto& si : cc.settle_rec()) events.push_back(clearing::format_instruction_line(si));
        return events;
    });

    run_step("broker_settlement", [&] {
        for (auto* b : brokers) b->settle_retail_rec();
        return std::vector<std::string>{};
    });

    if (!custodians.empty()) {
        run_step("custodian_settlement", [&] {
            for (auto* k : custodians) k->settle_institutional_rec();
            return std::vector<std::string>{};
        });
    }

    collect();

    std::vector<std::string> leftovers;
    for (const auto* x : exchanges) {
        if (x->unreported_trades() > 0) leftovers.push_back(x->participant_id().id + " has unreported trades");
    }
    if (cc.queued_trades() > 0) leftovers.push_back("clearing queue not drained");
    if (cc.pending_obligations() > 0) leftovers.push_back("unsettled obligations");
    for (const auto* k : custodians) {
        if (k->pending_details() > 0 || k->contracts_waiting() > 0) {
            leftovers.push_back(k->participant_id().id + " has unaffirmed contracts or details");
        }
        if (k->unsettled_allocations() > 0) leftovers.push_back(k->participant_id().id + " has unsettled allocations");
    }
    if (!leftovers.empty()) {
        std::string cause;
        for (const auto& l : leftovers) cause += (cause.empty() ? "" : "; ") + l;
        report.aborted_step = "completion";
        report.abort_cause = cause;
        throw ScenarioAborted(std::move(report));
    }
    return report;
}

// --- assertions ----------------------------------------------------------------------------

ConservationResult assert_conservation(const ScenarioReport& report) {
    ConservationResult result;
    if (report.aborted_step) {
        result.failures.push_back("scenario aborted at " + *report.aborted_step + ": " + report.abort_cause);
    }

    const Snapshot* prev = &report.initial;
    for (const auto& step : report.steps) {
        const auto& cur = step.snapshot;
        if (cur.total_money() != prev->total_money()) {
            result.failures.push_back("step '" + step.name + "': total money " + std::to_string(prev->total_money()) +
                                      " -> " + std::to_string(cur.total_money()));
        }
        std::set<std::string> symbols;
        for (const auto& s : prev->symbols()) symbols.insert(s);
        for (const auto& s : cur.symbols()) symbols.insert(s);
        for (const auto& s : symbols) {
            if (cur.total_position(s) != prev->total_position(s)) {
                result.failures.push_back("step '" + step.name + "': total " + s + " " +
                                          std::to_string(prev->total_position(s)) + " -> " +
                                          std::to_string(cur.total_position(s)));
            }
        }
        if (step.journal_end > report.journal.size()) {
            result.failures.push_back("step '" + step.name + "': journal shorter than recorded");
        } else {
            const auto replayed = Ledger::replay(
                report.initial, std::span<const JournalEntry>(report.journal.data(), step.journal_end));
            if (!(replayed == cur)) {
                result.failures.push_back("step '" + step.name + "': snapshot differs from journal replay");
            }
        }
        prev = &cur;
    }

    if (!report.expected.empty()) {
        result.expected_checked = true;
        const auto& fin = report.final_snapshot();
        for (const auto& [owner, want] : report.expected) {
            if (!fin.contains(owner)) {
                result.failures.push_back("final: no account " + owner);
                continue;
            }
            const auto& got = fin.at(owner);
            if (got.money != want.money) {
                result.failures.push_back("final: " + owner + " money " + std::to_string(got.money) + ", expected " +
                                          std::to_string(want.money));
            }
            std::set<std::string> symbols;
            for (const auto& [s, _] : got.positions) symbols.insert(s);
            for (const auto& [s, _] : want.positions) symbols.insert(s);
            for (const auto& s : symbols) {
                auto it = want.positions.find(s);
                const auto expected = it == want.positions.end() ? 0 : it->second;
                if (got.position(s) != expected) {
                    result.failures.push_back("final: " + owner + " " + s + " " + std::to_string(got.position(s)) +
                                              ", expected " + std::to_string(expected));
                }
            }
        }
    }
    return result;
}

}  // namespace seco::lifecycle
