#include "seco/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "seco/feature_model.hpp"
#include "seco/lifecycle.hpp"

namespace seco::cli {

namespace {

namespace fs = std::filesystem;

enum class Format { Human, Machine };

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path scenario_path(const fs::path& model, const std::string& scenario) {
    if (fs::path(scenario).extension() == ".scn") return scenario;
    return model.parent_path() / "scenarios" / (scenario + ".scn");
}

int validate_model(const fs::path& model, std::ostream& out) {
    const auto fm = fm::load_feature_model(model);
    out << "model ok: " << fm.size() << " features, " << fm.variation_points().size() << " variation points, "
        << fm.constraints().size() << " constraints\n";
    return kExitOk;
}

int validate_config(const fs::path& model, const fs::path& config, std::ostream& out) {
    const auto fm = fm::load_feature_model(model);
    const auto report = fm::validate_configuration(fm, fm::load_configuration(config));
    if (!report.valid()) {
        out << report.to_string();
        return kExitFailure;
    }
    out << "configuration valid: " << report.normalized.selected.size() << " features selected\n";
    return kExitOk;
}

int derive(const fs::path& model, const fs::path& config, const std::string& name, Format format,
           std::ostream& out) {
    const auto fm = fm::load_feature_model(model);
    const auto product = fm::derive_product(fm, fm::load_configuration(config), name);
    if (format == Format::Machine) {
        out << "product|" << product.product_name() << '\n';
        for (const auto& [vp, variants] : product.bindings()) {
            out << "binding|" << vp;
            for (const auto& v : variants) out << '|' << v;
            out << '\n';
        }
        return kExitOk;
    }
    out << "Product " << product.product_name() << ": " << product.configuration().selected.size()
        << " features, " << product.bindings().size() << " bound variation points\n";
    for (const auto& [vp, variants] : product.bindings()) {
        out << "  " << vp << ':';
        for (const auto& v : variants) out << ' ' << v;
        out << '\n';
    }
    return kExitOk;
}

int run(const fs::path& model, const fs::path& config, const std::string& scenario_id, Format format,
        std::ostream& out, std::ostream& err) {
    const auto fm = fm::load_feature_model(model);
    const auto product = fm::derive_product(fm, fm::load_configuration(config), config.stem().string());
    const auto scenario = lifecycle::load_scenario(scenario_path(model, scenario_id));

    auto emit = [&](const lifecycle::ScenarioReport& report) {
        const auto result = lifecycle::assert_conservation(report);
        out << (format == Format::Machine ? lifecycle::format_machine_report(report, result)
                                          : lifecycle::format_human_report(report, result));
        return result;
    };

    try {
        const auto report = lifecycle::run_scenario(product, scenario);
        const auto result = emit(report);
        if (!result.ok()) {
            err << "error: " << result.failures.size() << " assertion(s) failed\n";
            return kExitFailure;
        }
        return kExitOk;
    } catch (const lifecycle::ScenarioAborted& e) {
        emit(e.report());
        err << "error: scenario aborted at step '" << e.step() << "': " << e.cause() << '\n';
        return kExitFailure;
    }
}

int report(const fs::path& path, Format format, std::ostream& out) {
    const auto parsed = lifecycle::parse_machine_report(read_file(path));
    const bool replay_ok = Ledger::replay(parsed.initial, parsed.journal) == parsed.final;
    bool assertions_ok = true;
    for (const auto& a : parsed.assertions) {
        if (a.starts_with("failure|") || a == "conservation|fail") assertions_ok = false;
    }
    const bool ok = parsed.status == "completed" && replay_ok && assertions_ok;
    if (format == Format::Machine) {
        out << "scenario|" << parsed.scenario_id << '\n'
            << "product|" << parsed.product_name << '\n'
            << "status|" << parsed.status << '\n'
            << "steps|" << parsed.steps << '\n'
            << "journal_entries|" << parsed.journal.size() << '\n'
            << "replay|" << (replay_ok ? "pass" : "fail") << '\n'
            << "assertions|" << (assertions_ok ? "pass" : "fail") << '\n';
    } else {
        out << "Scenario " << parsed.scenario_id << " on product " << parsed.product_name << ": " << parsed.status
            << '\n'
            << "  steps: " << parsed.steps << ", journal entries: " << parsed.journal.size() << '\n'
            << "  journal replay reproduces final balances: " << (replay_ok ? "yes" : "NO") << '\n';
        for (const auto& a : parsed.assertions) out << "  " << a << '\n';
    }
    return ok ? kExitOk : kExitFailure;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Equity market product line: validate models, derive products, run scenarios", "seco"};
    app.require_subcommand(1);

    Format format = Format::Human;
    const std::map<std::string, Format> formats{{"human", Format::Human}, {"machine", Format::Machine}};
    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", format, "Output mode")->transform(CLI::CheckedTransformer(formats));
    };

    std::string model, config, name, scenario, report_path;

    auto* vm = app.add_subcommand("validate-model", "Parse a feature model and check its structure");
    vm->add_option("model", model, "Feature model file")->required();

    auto* vc = app.add_subcommand("validate-config", "Validate a configuration against a feature model");
    vc->add_option("model", model, "Feature model file")->required();
    vc->add_option("config", config, "Configuration file")->required();

    auto* dv = app.add_subcommand("derive", "Derive a product and list its variant bindings");
    dv->add_option("model", model, "Feature model file")->required();
    dv->add_option("config", config, "Configuration file")->required();
    dv->add_option("--name", name, "Product name (default: configuration file stem)");
    add_format(dv);

    auto* rn = app.add_subcommand("run", "Run a life-cycle scenario on a derived product");
    rn->add_option("model", model, "Feature model file")->required();
    rn->add_option("config", config, "Configuration file")->required();
    rn->add_option("scenario", scenario,
                   "Scenario id (looked up in <model dir>/scenarios) or a .scn file")
        ->required();
    add_format(rn);

    auto* rp = app.add_subcommand("report", "Summarize and re-check a machine-format run report");
    rp->add_option("path", report_path, "Report file")->required();
    add_format(rp);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (vm->parsed()) return validate_model(model, out);
        if (vc->parsed()) return validate_config(model, config, out);
        if (dv->parsed()) return derive(model, config, name.empty() ? fs::path(config).stem().string() : name,
                                        format, out);
        if (rn->parsed()) return run(model, config, scenario, format, out, err);
        if (rp->parsed()) return report(report_path, format, out);
    } catch (const fm::InvalidConfiguration& e) {
        out << e.report().to_string();
        err << "error: invalid configuration\n";
        return kExitFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace seco::cli
