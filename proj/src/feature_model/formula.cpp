#include "seco/formula.hpp"

#include <cctype>
#include <sstream>

#include "seco/feature_model.hpp"

namespace seco::fm {

Formula Formula::var(std::string name) {
    return Formula(std::make_shared<const Node>(Node{Op::Var, std::move(name), {}}));
}

Formula Formula::negate(Formula operand) {
    return Formula(std::make_shared<const Node>(Node{Op::Not, {}, {std::move(operand)}}));
}

Formula Formula::binary(Op op, Formula lhs, Formula rhs) {
    return Formula(
        std::make_shared<const Node>(Node{op, {}, {std::move(lhs), std::move(rhs)}}));
}

bool Formula::evaluate(const std::function<bool(const std::string&)>& is_selected) const {
    switch (op()) {
        case Op::Var: return is_selected(name());
        case Op::Not: return !operand().evaluate(is_selected);
        case Op::And: return lhs().evaluate(is_selected) && rhs().evaluate(is_selected);
        case Op::Or: return lhs().evaluate(is_selected) || rhs().evaluate(is_selected);
        case Op::Implies: return !lhs().evaluate(is_selected) || rhs().evaluate(is_selected);
        case Op::Iff: return lhs().evaluate(is_selected) == rhs().evaluate(is_selected);
    }
    return false;
}

bool Formula::evaluate(const std::set<std::string>& selected) const {
    return evaluate([&](const std::string& n) { return selected.contains(n); });
}

std::set<std::string> Formula::variables() const {
    std::set<std::string> out;
    std::function<void(const Formula&)> walk = [&](const Formula& f) {
        if (f.op() == Op::Var) {
            out.insert(f.name());
            return;
        }
        for (const auto& c : f.node_->children) walk(c);
    };
    walk(*this);
    return out;
}

namespace {

// Binding strength; higher binds tighter.
int precedence(Op op) {
    switch (op) {
        case Op::Iff: return 1;
        case Op::Implies: return 2;
        case Op::Or: return 3;
        case Op::And: return 4;
        case Op::Not: return 5;
        case Op::Var: return 6;
    }
    return 0;
}

const char* symbol(Op op) {
    switch (op) {
        case Op::And: return " & ";
        case Op::Or: return " | ";
        case Op::Implies: return " => ";
        case Op::Iff: return " <=> ";
        default: return "";
    }
}

}  // namespace

std::string Formula::to_string() const {
    auto wrap = [](const Formula& f, bool paren) {
        auto s = f.to_string();
        return paren ? "(" + s + ")" : s;
    };
    switch (op()) {
        case Op::Var: return name();
        case Op::Not: return "!" + wrap(operand(), precedence(operand().op()) < precedence(Op::Not));
        default: break;
    }
    const int p = precedence(op());
    const int pl = precedence(lhs().op());
    const int pr = precedence(rhs().op());
    bool paren_l = pl < p;
    bool paren_r = pr < p;
    if (op() == Op::Implies) {
        paren_l = pl <= p;  // right-associative
    } else {
        paren_r = pr <= p;  // left-associative
    }
    return wrap(lhs(), paren_l) + symbol(op()) + wrap(rhs(), paren_r);
}

bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.op() != b.op() || a.name() != b.name()) return false;
    return a.node_->children == b.node_->children;
}

namespace {

class FormulaParser {
public:
    FormulaParser(std::string_view text, int line) : text_(text), line_(line) {}

    Formula parse() {
        Formula f = parse_iff();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return f;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        std::ostringstream msg;
        msg << "line " << line_ << ", column " << pos_ + 1 << ": " << what;
        throw FeatureModelError(ErrorKind::Syntax, msg.str(), line_, static_cast<int>(pos_) + 1);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(std::string_view tok) {
        skip_space();
        if (text_.substr(pos_, tok.size()) == tok) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    Formula parse_iff() {
        Formula f = parse_implies();
        while (accept("<=>")) f = Formula::binary(Op::Iff, f, parse_implies());
        return f;
    }

    Formula parse_implies() {
        Formula f = parse_or();
        skip_space();
        // "<=>" starts with '<', so "=>" here is never part of an iff.
        if (accept("=>")) return Formula::binary(Op::Implies, f, parse_implies());
        return f;
    }

    Formula parse_or() {
        Formula f = parse_and();
        while (accept("|")) f = Formula::binary(Op::Or, f, parse_and());
        return f;
    }

    Formula parse_and() {
        Formula f = parse_unary();
        while (accept("&")) f = Formula::binary(Op::And, f, parse_unary());
        return f;
    }

    Formula parse_unary() {
        if (accept("!")) return Formula::negate(parse_unary());
        return parse_atom();
    }

    Formula parse_atom() {
        if (accept("(")) {
            Formula f = parse_iff();
            if (!accept(")")) fail("expected ')'");
            return f;
        }
        skip_space();
        const auto start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        if (start == pos_) {
            if (pos_ == text_.size()) fail("unexpected end of formula");
            fail("expected feature name, found '" + std::string(1, text_[pos_]) + "'");
        }
        if (std::isdigit(static_cast<unsigned char>(text_[start]))) {
            pos_ = start;
            fail("feature names must not start with a digit");
        }
        return Formula::var(std::string(text_.substr(start, pos_ - start)));
    }

    std::string_view text_;
    int line_;
    std::size_t pos_ = 0;
};

}  // namespace

Formula parse_formula(std::string_view text, int line) {
    return FormulaParser(text, line).parse();
}

}  // namespace seco::fm
