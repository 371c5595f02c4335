#include <algorithm>
#include <functional>
#include <sstream>

#include "seco/feature_model.hpp"

namespace seco::fm {

std::string_view to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::RootNotSelected: return "RootNotSelected";
        case ViolationKind::ParentNotSelected: return "ParentNotSelected";
        case ViolationKind::MandatoryChildMissing: return "MandatoryChildMissing";
        case ViolationKind::AlternativeCardinality: return "AlternativeCardinality";
        case ViolationKind::OrCardinality: return "OrCardinality";
        case ViolationKind::ConstraintViolated: return "ConstraintViolated";
    }
    return "?";
}

std::string ValidationReport::to_string() const {
    std::ostringstream out;
    if (valid()) {
        out << "valid (" << normalized.selected.size() << " features selected)\n";
        return out.str();
    }
    out << "invalid: " << violations.size() << " violation(s)\n";
    for (const auto& v : violations) {
        out << "  " << fm::to_string(v.kind) << ": " << v.message << '\n';
    }
    return out.str();
}

InvalidConfiguration::InvalidConfiguration(ValidationReport report)
    : FeatureModelError(ErrorKind::InvalidConfiguration, report.to_string()),
      report_(std::move(report)) {}

const std::vector<std::string>& ProductSpec::bound(const std::string& variation_point) const {
    static const std::vector<std::string> none;
    auto it = bindings_.find(variation_point);
    return it == bindings_.end() ? none : it->second;
}

Configuration normalize(const FeatureModel& model, const Configuration& cfg) {
    Configuration out = cfg;
    std::vector<std::string> work(cfg.selected.begin(), cfg.selected.end());
    while (!work.empty()) {
        const auto name = std::move(work.back());
        work.pop_back();
        const auto& f = model.feature(name);
        if (const auto* p = model.parent(name); p && out.selected.insert(p->name).second) {
            work.push_back(p->name);
        }
        if (f.group == GroupKind::And) {
            for (const auto& c : f.children) {
                if (c.optionality == Optionality::Mandatory && out.selected.insert(c.name).second) {
                    work.push_back(c.name);
                }
            }
        }
    }
    return out;
}

ValidationReport validate_configuration(const FeatureModel& model, const Configuration& cfg) {
    for (const auto& n : cfg.selected) {
        if (!model.contains(n)) {
            throw FeatureModelError(ErrorKind::UnknownFeatureName,
                                    "configuration selects '" + n + "', which the model lacks");
        }
    }

    ValidationReport report;
    report.normalized = normalize(model, cfg);
    const auto& sel = report.normalized.selected;
    auto add = [&](ViolationKind kind, const std::string& subject, std::string message) {
        report.violations.push_back({kind, subject, std::move(message)});
    };

    if (!sel.contains(model.root().name)) {
        add(ViolationKind::RootNotSelected, model.root().name,
            "root '" + model.root().name + "' is not selected");
    }

    // Walk in pre-order so violations come out in model order.
    for (const auto& name : model.names()) {
        if (!sel.contains(name)) continue;
        const auto& f = model.feature(name);
        if (const auto* p = model.parent(name); p && !sel.contains(p->name)) {
            add(ViolationKind::ParentNotSelected, name,
                "'" + name + "' is selected but its parent '" + p->name + "' is not");
        }
        const auto chosen = std::count_if(f.children.begin(), f.children.end(),
                                          [&](const Feature& c) { return sel.contains(c.name); });
        switch (f.group) {
            case GroupKind::And:
                for (const auto& c : f.children) {
                    if (c.optionality == Optionality::Mandatory && !sel.contains(c.name)) {
                        add(ViolationKind::MandatoryChildMissing, c.name,
                            "mandatory '" + c.name + "' of '" + name + "' is not selected");
                    }
                }
                break;
            case GroupKind::Alternative:
                if (chosen != 1) {
                    add(ViolationKind::AlternativeCardinality, name,
                        "alternative group '" + name + "' needs exactly one child, has " +
                            std::to_string(chosen));
                }
                break;
            case GroupKind::Or:
                if (chosen < 1) {
                    add(ViolationKind::OrCardinality, name,
                        "or group '" + name + "' needs at least one child");
                }
                break;
            case GroupKind::Leaf:
                break;
        }
    }

    for (const auto& c : model.constraints()) {
        if (!c.formula.evaluate(sel)) {
            add(ViolationKind::ConstraintViolated, c.text(), "constraint violated: " + c.text());
        }
    }
    return report;
}

std::vector<Configuration> enumerate_valid_configurations(const FeatureModel& model,
                                                          std::size_t max_features) {
    const auto& names = model.names();
    if (names.size() > max_features || names.size() >= 63) {
        throw FeatureModelError(ErrorKind::ModelTooLarge,
                                std::to_string(names.size()) + " features exceeds the cap of " +
                                    std::to_string(max_features));
    }

    std::vector<Configuration> out;
    const std::uint64_t total = std::uint64_t{1} << names.size();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        Configuration cfg;
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (mask & (std::uint64_t{1} << i)) cfg.selected.insert(names[i]);
        }
        // Keep closure fixed points only: every valid product appears once.
        auto report = validate_configuration(model, cfg);
        if (report.valid() && report.normalized == cfg) out.push_back(std::move(cfg));
    }
    std::sort(out.begin(), out.end(), [](const Configuration& a, const Configuration& b) {
        return std::lexicographical_compare(a.selected.begin(), a.selected.end(),
                                            b.selected.begin(), b.selected.end());
    });
    return out;
}

ProductSpec derive_product(const FeatureModel& model, const Configuration& cfg,
                           const std::string& name) {
    auto report = validate_configuration(model, cfg);
    if (!report.valid()) throw InvalidConfiguration(std::move(report));

    ProductSpec spec;
    spec.name_ = name;
    spec.configuration_ = report.normalized;
    const auto& sel = spec.configuration_.selected;

    std::function<void(const Feature&, std::vector<std::string>&)> collect =
        [&](const Feature& f, std::vector<std::string>& into) {
            for (const auto& c : f.children) {
                if (!sel.contains(c.name)) continue;
                if (c.kind == FeatureKind::Concrete) into.push_back(c.name);
                collect(c, into);
            }
        };
    for (const auto& vp : model.variation_points()) {
        if (!sel.contains(vp)) continue;
        std::vector<std::string> variants;
        collect(model.feature(vp), variants);
        spec.bindings_.emplace(vp, std::move(variants));
    }
    return spec;
}

}  // namespace seco::fm
