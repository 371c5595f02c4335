// Feature models: a feature tree with and/or/alternative groups plus
// cross-tree constraints, configurations over it, and product derivation.

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "seco/formula.hpp"

namespace seco::fm {

enum class FeatureKind { Abstract, Concrete };
enum class Optionality { Mandatory, Optional };
enum class GroupKind { And, Or, Alternative, Leaf };

struct Feature {
    std::string name;
    FeatureKind kind = FeatureKind::Abstract;
    Optionality optionality = Optionality::Mandatory;
    GroupKind group = GroupKind::Leaf;
    std::vector<Feature> children;

    friend bool operator==(const Feature&, const Feature&) = default;
};

struct CrossTreeConstraint {
    Formula formula;
    std::string text() const { return formula.to_string(); }
    friend bool operator==(const CrossTreeConstraint&, const CrossTreeConstraint&) = default;
};

enum class ErrorKind {
    Syntax,
    DuplicateFeatureName,
    UnknownNameInConstraint,
    MalformedGroup,
    UnknownFeatureName,
    ModelTooLarge,
    InvalidConfiguration,
};

std::string_view to_string(ErrorKind kind);

class FeatureModelError : public std::runtime_error {
public:
    FeatureModelError(ErrorKind kind, const std::string& message, int line = 0, int column = 0);

    ErrorKind kind() const { return kind_; }
    int line() const { return line_; }
    int column() const { return column_; }

private:
    ErrorKind kind_;
    int line_;
    int column_;
};

/// Immutable after construction; copies share the underlying tree.
class FeatureModel {
public:
    /// Checks the structural invariants and throws FeatureModelError on
    /// duplicate names, degenerate groups, or unresolved constraint names.
    FeatureModel(Feature root, std::vector<CrossTreeConstraint> constraints);

    const Feature& root() const { return data_->root; }
    const std::vector<CrossTreeConstraint>& constraints() const { return data_->constraints; }

    std::size_t size() const { return data_->preorder.size(); }
    bool contains(const std::string& name) const { return data_->index.contains(name); }
    const Feature& feature(const std::string& name) const;
    /// nullptr for the root.
    const Feature* parent(const std::string& name) const;
    /// Feature names in pre-order.
    const std::vector<std::string>& names() const { return data_->preorder; }

    /// An abstract feature owning an or/alternative group.
    bool is_variation_point(const std::string& name) const;
    std::vector<std::string> variation_points() const;

    friend bool operator==(const FeatureModel& a, const FeatureModel& b) {
        return a.root() == b.root() && a.constraints() == b.constraints();
    }

private:
    struct Entry {
        const Feature* feature;
        const Feature* parent;
    };
    struct Data {
        Feature root;
        std::vector<CrossTreeConstraint> constraints;
        std::map<std::string, Entry> index;
        std::vector<std::string> preorder;
    };
    std::shared_ptr<const Data> data_;
};

struct Configuration {
    std::set<std::string> selected;

    bool contains(const std::string& name) const { return selected.contains(name); }
    friend bool operator==(const Configuration&, const Configuration&) = default;
};

enum class ViolationKind {
    RootNotSelected,
    ParentNotSelected,
    MandatoryChildMissing,
    AlternativeCardinality,
    OrCardinality,
    ConstraintViolated,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    /// The group owner, child, or the constraint text that failed.
    std::string subject;
    std::string message;
};

struct ValidationReport {
    Configuration normalized;
    std::vector<Violation> violations;

    bool valid() const { return violations.empty(); }
    std::string to_string() const;
};

class InvalidConfiguration : public FeatureModelError {
public:
    explicit InvalidConfiguration(ValidationReport report);
    const ValidationReport& report() const { return report_; }

private:
    ValidationReport report_;
};

/// A derived product: a valid configuration plus the variants bound at
/// each variation point. Only derive_product constructs one.
class ProductSpec {
public:
    const std::string& product_name() const { return name_; }
    const Configuration& configuration() const { return configuration_; }
    const std::map<std::string, std::vector<std::string>>& bindings() const { return bindings_; }

    bool has(const std::string& feature) const { return configuration_.contains(feature); }
    /// Variants bound at `variation_point`; empty when it is not bound.
    const std::vector<std::string>& bound(const std::string& variation_point) const;

private:
    friend ProductSpec derive_product(const FeatureModel&, const Configuration&, const std::string&);
    ProductSpec() = default;

    std::string name_;
    Configuration configuration_;
    std::map<std::string, std::vector<std::string>> bindings_;
};

FeatureModel parse_feature_model(std::string_view text);
std::string serialize_feature_model(const FeatureModel& model);

Configuration parse_configuration(std::string_view text);
std::string serialize_configuration(const Configuration& cfg);

FeatureModel load_feature_model(const std::filesystem::path& path);
Configuration load_configuration(const std::filesystem::path& path);

/// Adds every ancestor of a selected feature and every mandatory child of a
/// selected and-group, to a fixed point. Never removes a selection.
Configuration normalize(const FeatureModel& model, const Configuration& cfg);

/// Throws FeatureModelError(UnknownFeatureName) when `cfg` names a feature
/// the model does not have.
ValidationReport validate_configuration(const FeatureModel& model, const Configuration& cfg);

/// All valid, fully normalized configurations in lexicographic order of
/// their sorted name lists. Exhaustive over 2^n subsets.
std::vector<Configuration> enumerate_valid_configurations(const FeatureModel& model,
                                                          std::size_t max_features = 20);

ProductSpec derive_product(const FeatureModel& model, const Configuration& cfg,
                           const std::string& name);

}  // namespace seco::fm
