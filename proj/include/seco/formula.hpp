// Propositional formulas over feature names.
//
// Grammar (lowest to highest precedence):
//   iff     := implies ( "<=>" implies )*      left-associative
//   implies := or ( "=>" implies )?            right-associative
//   or      := and ( "|" and )*
//   and     := unary ( "&" unary )*
//   unary   := "!" unary | atom
//   atom    := NAME | "(" iff ")"

#pragma once

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace seco::fm {

enum class Op { Var, Not, And, Or, Implies, Iff };

class Formula {
public:
    static Formula var(std::string name);
    static Formula negate(Formula operand);
    static Formula binary(Op op, Formula lhs, Formula rhs);

    Op op() const { return node_->op; }
    const std::string& name() const { return node_->name; }
    const Formula& lhs() const { return node_->children.at(0); }
    const Formula& rhs() const { return node_->children.at(1); }
    const Formula& operand() const { return node_->children.at(0); }

    bool evaluate(const std::function<bool(const std::string&)>& is_selected) const;
    bool evaluate(const std::set<std::string>& selected) const;

    /// Every variable referenced, sorted.
    std::set<std::string> variables() const;

    /// Minimal-parenthesis rendering that reparses to an equal tree.
    std::string to_string() const;

    friend bool operator==(const Formula& a, const Formula& b);

private:
    struct Node {
        Op op;
        std::string name;
        std::vector<Formula> children;
    };
    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Parses `text`; throws FeatureModelError(Syntax) with `line` and a
/// 1-based column on malformed input.
Formula parse_formula(std::string_view text, int line = 0);

}  // namespace seco::fm
