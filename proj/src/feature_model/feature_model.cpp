#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>

#include "seco/feature_model.hpp"

namespace seco::fm {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Syntax: return "SyntaxError";
        case ErrorKind::DuplicateFeatureName: return "DuplicateFeatureName";
        case ErrorKind::UnknownNameInConstraint: return "UnknownNameInConstraint";
        case ErrorKind::MalformedGroup: return "MalformedGroup";
        case ErrorKind::UnknownFeatureName: return "UnknownFeatureName";
        case ErrorKind::ModelTooLarge: return "ModelTooLarge";
        case ErrorKind::InvalidConfiguration: return "InvalidConfiguration";
    }
    return "?";
}

FeatureModelError::FeatureModelError(ErrorKind kind, const std::string& message, int line,
                                     int column)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      line_(line),
      column_(column) {}

FeatureModel::FeatureModel(Feature root, std::vector<CrossTreeConstraint> constraints) {
    auto data = std::make_shared<Data>();
    data->root = std::move(root);
    data->constraints = std::move(constraints);

    std::function<void(const Feature&, const Feature*)> index = [&](const Feature& f,
                                                                    const Feature* parent) {
        if (f.name.empty()) {
            throw FeatureModelError(ErrorKind::Syntax, "feature with empty name");
        }
        if (!data->index.emplace(f.name, Entry{&f, parent}).second) {
            throw FeatureModelError(ErrorKind::DuplicateFeatureName, "'" + f.name + "' declared twice");
        }
        data->preorder.push_back(f.name);
        switch (f.group) {
            case GroupKind::Leaf:
                if (!f.children.empty()) {
                    throw FeatureModelError(ErrorKind::MalformedGroup,
                                            "'" + f.name + "' has children but no group");
                }
                break;
            case GroupKind::And:
                if (f.children.empty()) {
                    throw FeatureModelError(ErrorKind::MalformedGroup,
                                            "and-group '" + f.name + "' has no children");
                }
                break;
            case GroupKind::Or:
            case GroupKind::Alternative:
                if (f.children.size() < 2) {
                    throw FeatureModelError(ErrorKind::MalformedGroup,
                                            "group '" + f.name + "' needs at least 2 children");
                }
                break;
        }
        for (const auto& c : f.children) index(c, &f);
    };
    index(data->root, nullptr);

    for (const auto& c : data->constraints) {
        for (const auto& v : c.formula.variables()) {
            if (!data->index.contains(v)) {
                throw FeatureModelError(ErrorKind::UnknownNameInConstraint,
                                        "'" + v + "' in constraint " + c.text());
            }
        }
    }
    data_ = std::move(data);
}

const Feature& FeatureModel::feature(const std::string& name) const {
    auto it = data_->index.find(name);
    if (it == data_->index.end()) {
        throw FeatureModelError(ErrorKind::UnknownFeatureName, "'" + name + "'");
    }
    return *it->second.feature;
}

const Feature* FeatureModel::parent(const std::string& name) const {
    auto it = data_->index.find(name);
    if (it == data_->index.end()) {
        throw FeatureModelError(ErrorKind::UnknownFeatureName, "'" + name + "'");
    }
    return it->second.parent;
}

bool FeatureModel::is_variation_point(const std::string& name) const {
    const auto& f = feature(name);
    return f.kind == FeatureKind::Abstract &&
           (f.group == GroupKind::Or || f.group == GroupKind::Alternative);
}

std::vector<std::string> FeatureModel::variation_points() const {
    std::vector<std::string> out;
    for (const auto& n : names()) {
        if (is_variation_point(n)) out.push_back(n);
    }
    return out;
}

// ---------------------------------------------------------------------------
// .fm text format

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string_view strip_comment(std::string_view s) {
    const auto hash = s.find('#');
    return hash == std::string_view::npos ? s : s.substr(0, hash);
}

std::vector<std::string_view> split_words(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && s[i] == ' ') ++i;
        const auto start = i;
        while (i < s.size() && s[i] != ' ') ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

bool valid_name(std::string_view n) {
    if (n.empty() || std::isdigit(static_cast<unsigned char>(n[0]))) return false;
    for (char c : n) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    }
    return true;
}

struct Line {
    int number;
    int depth;
    Feature feature;
};

[[noreturn]] void syntax(int line, int column, const std::string& what) {
    std::ostringstream msg;
    msg << "line " << line << ", column " << column << ": " << what;
    throw FeatureModelError(ErrorKind::Syntax, msg.str(), line, column);
}

Line parse_feature_line(std::string_view raw, int number) {
    std::size_t indent = 0;
    while (indent < raw.size() && raw[indent] == ' ') ++indent;
    if (indent < raw.size() && raw[indent] == '\t') syntax(number, int(indent) + 1, "tab in indentation");
    if (indent % 2 != 0) syntax(number, 1, "indentation must be a multiple of 2 spaces");

    const auto words = split_words(trim(raw));
    auto column_of = [&](std::string_view w) { return int(w.data() - raw.data()) + 1; };
    if (words.size() < 3 || words.size() > 4) {
        syntax(number, int(indent) + 1,
               "expected '<abstract|concrete> <mandatory|optional> <Name> [group:and|or|alt]'");
    }

    Feature f;
    if (words[0] == "abstract") {
        f.kind = FeatureKind::Abstract;
    } else if (words[0] == "concrete") {
        f.kind = FeatureKind::Concrete;
    } else {
        syntax(number, column_of(words[0]), "expected 'abstract' or 'concrete'");
    }
    if (words[1] == "mandatory") {
        f.optionality = Optionality::Mandatory;
    } else if (words[1] == "optional") {
        f.optionality = Optionality::Optional;
    } else {
        syntax(number, column_of(words[1]), "expected 'mandatory' or 'optional'");
    }
    if (!valid_name(words[2])) syntax(number, column_of(words[2]), "invalid feature name");
    f.name = std::string(words[2]);
    f.group = GroupKind::Leaf;
    if (words.size() == 4) {
        if (words[3] == "group:and") {
            f.group = GroupKind::And;
        } else if (words[3] == "group:or") {
            f.group = GroupKind::Or;
        } else if (words[3] == "group:alt") {
            f.group = GroupKind::Alternative;
        } else {
            syntax(number, column_of(words[3]), "expected group:and, group:or or group:alt");
        }
    }
    return Line{number, int(indent / 2), std::move(f)};
}

}  // namespace

FeatureModel parse_feature_model(std::string_view text) {
    std::vector<Line> lines;
    std::vector<CrossTreeConstraint> constraints;
    bool in_constraints = false;

    int number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view raw = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++number;
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);

        const auto content = strip_comment(raw);
        if (trim(content).empty()) continue;

        if (in_constraints) {
            const auto body = trim(content);
            const auto offset = int(body.data() - raw.data());
            try {
                constraints.push_back({parse_formula(body, number)});
            } catch (const FeatureModelError& e) {
                syntax(number, e.column() + offset, "in constraint: " + std::string(body));
            }
            continue;
        }
        if (trim(content) == "constraints:") {
            if (content.front() == ' ') syntax(number, 1, "'constraints:' must start at column 1");
            in_constraints = true;
            continue;
        }
        lines.push_back(parse_feature_line(content, number));
    }

    if (lines.empty()) syntax(number, 1, "model has no root feature");
    if (lines.front().depth != 0) syntax(lines.front().number, 1, "root must not be indented");

    // Rebuild the tree from depth-annotated lines with an explicit stack.
    std::vector<Feature*> stack;
    Feature root = std::move(lines.front().feature);
    stack.push_back(&root);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto& ln = lines[i];
        if (ln.depth == 0) syntax(ln.number, 1, "second root feature");
        if (ln.depth > int(stack.size())) syntax(ln.number, 1, "indentation jumps more than one level");
        stack.resize(ln.depth);
        Feature* parent = stack.back();
        if (parent->group == GroupKind::Leaf) {
            throw FeatureModelError(ErrorKind::MalformedGroup,
                                    "'" + parent->name + "' has children but no group",
                                    ln.number, 1);
        }
        parent->children.push_back(std::move(ln.feature));
        stack.push_back(&parent->children.back());
    }
    return FeatureModel(std::move(root), std::move(constraints));
}

std::string serialize_feature_model(const FeatureModel& model) {
    std::ostringstream out;
    std::function<void(const Feature&, int)> emit = [&](const Feature& f, int depth) {
        out << std::string(std::size_t(depth) * 2, ' ')
            << (f.kind == FeatureKind::Abstract ? "abstract" : "concrete") << ' '
            << (f.optionality == Optionality::Mandatory ? "mandatory" : "optional") << ' '
            << f.name;
        switch (f.group) {
            case GroupKind::And: out << " group:and"; break;
            case GroupKind::Or: out << " group:or"; break;
            case GroupKind::Alternative: out << " group:alt"; break;
            case GroupKind::Leaf: break;
        }
        out << '\n';
        for (const auto& c : f.children) emit(c, depth + 1);
    };
    emit(model.root(), 0);
    if (!model.constraints().empty()) {
        out << "constraints:\n";
        for (const auto& c : model.constraints()) out << c.text() << '\n';
    }
    return out.str();
}

Configuration parse_configuration(std::string_view text) {
    Configuration cfg;
    int number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        const auto raw = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++number;
        const auto name = trim(strip_comment(raw));
        if (name.empty()) continue;
        if (!valid_name(name)) {
            syntax(number, int(name.data() - raw.data()) + 1,
                   "expected one feature name per line, got '" + std::string(name) + "'");
        }
        cfg.selected.emplace(name);
    }
    return cfg;
}

std::string serialize_configuration(const Configuration& cfg) {
    std::string out;
    for (const auto& n : cfg.selected) out += n + '\n';
    return out;
}

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

FeatureModel load_feature_model(const std::filesystem::path& path) {
    return parse_feature_model(read_file(path));
}

Configuration load_configuration(const std::filesystem::path& path) {
    return parse_configuration(read_file(path));
}

}  // namespace seco::fm
