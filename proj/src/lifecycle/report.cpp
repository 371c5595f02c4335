#include <charconv>
#include <iomanip>
#include <sstream>

#include "seco/lifecycle.hpp"

namespace seco::lifecycle {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::int64_t to_int(std::string_view s) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
        throw std::invalid_argument("malformed number '" + std::string(s) + "'");
    }
    return v;
}

std::string positions_field(const std::map<std::string, std::int64_t>& positions) {
    std::string out;
    for (const auto& [sym, qty] : positions) {
        if (!out.empty()) out += ',';
        out += sym + "=" + std::to_string(qty);
    }
    return out;
}

std::map<std::string, std::int64_t> totals_by_symbol(const Snapshot& s) {
    std::map<std::string, std::int64_t> out;
    for (const auto& sym : s.symbols()) out[sym] = s.total_position(sym);
    return out;
}

void write_snapshot(std::ostream& os, const Snapshot& s) {
    for (const auto& [owner, st] : s.accounts()) {
        os << owner << '|' << st.money << '|' << positions_field(st.positions) << '\n';
    }
}

void write_lines(std::ostream& os, std::string_view header, const std::vector<std::string>& lines) {
    os << '[' << header << "]\n";
    for (const auto& l : lines) os << l << '\n';
}

std::string status_line(const ScenarioReport& report) {
    if (report.completed()) return "status|completed";
    return "status|aborted|" + *report.aborted_step + "|" + report.abort_cause;
}

std::string money_text(std::int64_t minor) {
    std::ostringstream os;
    if (minor < 0) os << '-';
    const auto a = minor < 0 ? -minor : minor;
    os << a / 100 << '.' << std::setw(2) << std::setfill('0') << a % 100;
    return os.str();
}

}  // namespace

std::string format_machine_report(const ScenarioReport& report, const ConservationResult& result) {
    std::ostringstream os;
    os << "scenario|" << report.scenario_id << '\n';
    os << "product|" << report.product_name << '\n';
    os << status_line(report) << '\n';

    os << "[initial]\n";
    write_snapshot(os, report.initial);

    os << "[steps]\n";
    for (std::size_t i = 0; i < report.steps.size(); ++i) {
        const auto& st = report.steps[i];
        os << i + 1 << '|' << st.name << '|' << st.journal_end << '|' << st.snapshot.total_money() << '|'
           << positions_field(totals_by_symbol(st.snapshot)) << '\n';
    }

    os << "[journal]\n";
    for (const auto& e : report.journal) os << format_journal_line(e) << '\n';
    write_lines(os, "trades", report.trades);
    write_lines(os, "audit", report.audit);
    write_lines(os, "affirmations", report.affirmations);
    write_lines(os, "settlement", report.settlement);

    os << "[final]\n";
    write_snapshot(os, report.final_snapshot());

    os << "[assertions]\n";
    os << "conservation|" << (result.ok() ? "pass" : "fail") << '\n';
    os << "expected_finals|" << (result.expected_checked ? "checked" : "skipped") << '\n';
    for (const auto& f : result.failures) os << "failure|" << f << '\n';
    return os.str();
}

std::string format_human_report(const ScenarioReport& report, const ConservationResult& result) {
    std::ostringstream os;
    os << "Scenario " << report.scenario_id << " on product " << report.product_name << '\n';
    if (report.completed()) {
        os << "Status: completed\n";
    } else {
        os << "Status: ABORTED at step '" << *report.aborted_step << "': " << report.abort_cause << '\n';
    }

    os << "\nSteps\n";
    const Snapshot* prev = &report.initial;
    std::size_t journal_start = 0;
    for (std::size_t i = 0; i < report.steps.size(); ++i) {
        const auto& st = report.steps[i];
        os << "  " << std::setw(2) << i + 1 << ". " << std::left << std::setw(26) << st.name << std::right
           << " journal entries " << journal_start << ".." << st.journal_end << '\n';
        for (const auto& e : st.events) os << "        " << e << '\n';
        for (const auto& [owner, now] : st.snapshot.accounts()) {
            if (prev->contains(owner) && prev->at(owner) == now) continue;
            const auto before = prev->contains(owner) ? prev->at(owner) : AccountState{};
            os << "        " << owner << ": money " << money_text(before.money) << " -> " << money_text(now.money);
            std::set<std::string> syms;
            for (const auto& [s, _] : before.positions) syms.insert(s);
            for (const auto& [s, _] : now.positions) syms.insert(s);
            for (const auto& s : syms) {
                if (before.position(s) != now.position(s)) {
                    os << ", " << s << ' ' << before.position(s) << " -> " << now.position(s);
                }
            }
            os << '\n';
        }
        prev = &st.snapshot;
        journal_start = st.journal_end;
    }

    if (!report.trades.empty()) {
        os << "\nTrades\n";
        for (const auto& t : report.trades) os << "  " << t << '\n';
    }
    if (!report.settlement.empty()) {
        os << "\nSettlement instructions\n";
        for (const auto& s : report.settlement) os << "  " << s << '\n';
    }

    os << "\nFinal balances\n";
    for (const auto& [owner, st] : report.final_snapshot().accounts()) {
        os << "  " << std::left << std::setw(28) << owner << std::right << std::setw(14) << money_text(st.money);
        for (const auto& [s, q] : st.positions) os << "  " << s << ' ' << q;
        os << '\n';
    }

    os << "\nAssertions\n";
    os << "  conservation: " << (result.ok() ? "pass" : "FAIL") << '\n';
    os << "  expected finals: " << (result.expected_checked ? "checked" : "none given") << '\n';
    for (const auto& f : result.failures) os << "  - " << f << '\n';
    return os.str();
}

ParsedReport parse_machine_report(std::string_view text) {
    ParsedReport out;
    Snapshot::Accounts initial;
    Snapshot::Accounts final_accounts;
    std::string section;
    int line_no = 0;

    auto read_account = [](std::string_view line, Snapshot::Accounts& into) {
        auto f = split(line, '|');
        if (f.size() != 3) throw std::invalid_argument("malformed account line");
        AccountState st;
        st.money = to_int(f[1]);
        if (!f[2].empty()) {
            for (auto kv : split(f[2], ',')) {
                auto eq = kv.find('=');
                if (eq == std::string_view::npos) throw std::invalid_argument("malformed position");
                st.positions[std::string(kv.substr(0, eq))] = to_int(kv.substr(eq + 1));
            }
        }
        into[std::string(f[0])] = std::move(st);
    };

    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (line.empty()) continue;
        try {
            if (line.front() == '[' && line.back() == ']') {
                section = std::string(line.substr(1, line.size() - 2));
                continue;
            }
            if (section.empty()) {
                auto f = split(line, '|');
                if (f[0] == "scenario" && f.size() == 2) {
                    out.scenario_id = std::string(f[1]);
                } else if (f[0] == "product" && f.size() == 2) {
                    out.product_name = std::string(f[1]);
                } else if (f[0] == "status" && f.size() >= 2) {
                    out.status = std::string(f[1]);
                } else {
                    throw std::invalid_argument("unexpected header line");
                }
            } else if (section == "initial") {
                read_account(line, initial);
            } else if (section == "final") {
                read_account(line, final_accounts);
            } else if (section == "journal") {
                out.journal.push_back(parse_journal_line(line));
            } else if (section == "steps") {
                ++out.steps;
            } else if (section == "assertions") {
                out.assertions.emplace_back(line);
            }
        } catch (const std::exception& e) {
            throw std::invalid_argument("report line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (out.scenario_id.empty() || out.status.empty()) {
        throw std::invalid_argument("report has no scenario or status header");
    }
    out.initial = Snapshot(std::move(initial));
    out.final = Snapshot(std::move(final_accounts));
    return out;
}

}  // namespace seco::lifecycle
