#pragma once

// Classical propositional logic: AST, parser, evaluator, tautology and
// entailment decisions over exhaustive valuation scans.
//
// Text format (v1, ASCII only):
//   atom   := [a-z][a-z0-9_]*
//   unary  := '!' unary | primary
//   and    := unary ('&' unary)*
//   or     := and ('|' and)*
//   imp    := or ('->' imp)?            right-associative
//   iff    := imp ('<->' imp)?          non-associative; chains need parentheses
//   primary := atom | '(' iff ')'
// Precedence: ! > & > | > -> > <->.

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "logos/text.hpp"

namespace logos::logic {

class SyntaxError : public std::runtime_error {
public:
    SyntaxError(const std::string& msg, std::size_t offset)
        : std::runtime_error(msg + " (at byte " + std::to_string(offset) + ")"),
          offset(offset) {}
    std::size_t offset;
};

class MissingAtom : public std::runtime_error {
public:
    explicit MissingAtom(const std::string& atom)
        : std::runtime_error("valuation has no entry for atom '" + atom + "'"), atom(atom) {}
    std::string atom;
};

class AtomLimit : public std::runtime_error {
public:
    explicit AtomLimit(std::size_t n)
        : std::runtime_error("formula has " + std::to_string(n) +
                             " atoms; the exhaustive scan is capped at 24") {}
};

class Unsatisfiable : public std::runtime_error {
public:
    Unsatisfiable() : std::runtime_error("premise set is unsatisfiable") {}
};

inline constexpr std::size_t kMaxAtoms = 24;

inline bool is_atom_name(std::string_view s) {
    if (s.empty() || s[0] < 'a' || s[0] > 'z') return false;
    for (char c : s.substr(1)) {
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) return false;
    }
    return true;
}

class PropFormula {
public:
    enum class Kind { Atom, Not, And, Or, Implies, Iff };

    static PropFormula atom(std::string name) {
        if (!is_atom_name(name)) throw std::invalid_argument("bad atom name: " + name);
        return PropFormula(std::make_shared<Node>(Node{Kind::Atom, std::move(name), {}, {}}));
    }
    static PropFormula negation(PropFormula f) {
        return PropFormula(std::make_shared<Node>(Node{Kind::Not, {}, f.node_, {}}));
    }
    static PropFormula conjunction(PropFormula a, PropFormula b) {
        return binary(Kind::And, std::move(a), std::move(b));
    }
    static PropFormula disjunction(PropFormula a, PropFormula b) {
        return binary(Kind::Or, std::move(a), std::move(b));
    }
    static PropFormula implication(PropFormula a, PropFormula b) {
        return binary(Kind::Implies, std::move(a), std::move(b));
    }
    static PropFormula equivalence(PropFormula a, PropFormula b) {
        return binary(Kind::Iff, std::move(a), std::move(b));
    }

    Kind kind() const { return node_->kind; }
    const std::string& atom_name() const { return node_->name; }
    PropFormula child() const { return PropFormula(node_->a); }  // Not
    PropFormula left() const { return PropFormula(node_->a); }
    PropFormula right() const { return PropFormula(node_->b); }

    bool operator==(const PropFormula& o) const { return equal(node_.get(), o.node_.get()); }
    bool operator!=(const PropFormula& o) const { return !(*this == o); }

    // Sorted, de-duplicated atom names.
    std::vector<std::string> atoms() const {
        std::set<std::string> s;
        collect(node_.get(), s);
        return {s.begin(), s.end()};
    }

private:
    struct Node {
        Kind kind;
        std::string name;
        std::shared_ptr<const Node> a, b;
    };

    explicit PropFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    static PropFormula binary(Kind k, PropFormula a, PropFormula b) {
        return PropFormula(std::make_shared<Node>(Node{k, {}, a.node_, b.node_}));
    }

    static bool equal(const Node* x, const Node* y) {
        if (x == y) return true;
        if (x->kind != y->kind) return false;
        switch (x->kind) {
            case Kind::Atom: return x->name == y->name;
            case Kind::Not: return equal(x->a.get(), y->a.get());
            default: return equal(x->a.get(), y->a.get()) && equal(x->b.get(), y->b.get());
        }
    }

    static void collect(const Node* n, std::set<std::string>& out) {
        if (n->kind == Kind::Atom) {
            out.insert(n->name);
            return;
        }
        if (n->a) collect(n->a.get(), out);
        if (n->b) collect(n->b.get(), out);
    }

    std::shared_ptr<const Node> node_;

    friend struct PropEval;
};

using Valuation = std::map<std::string, bool>;

namespace detail {

// Shared cursor for the formula parsers. Offsets are byte positions into the
// original text and surface in every SyntaxError.
struct Cursor {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() &&
               (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\r' || text[pos] == '\n'))
            ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= text.size();
    }
    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }
    bool match(std::string_view tok) {
        skip_ws();
        if (text.substr(pos, tok.size()) == tok) {
            pos += tok.size();
            return true;
        }
        return false;
    }
    void expect(std::string_view tok, const std::string& what) {
        if (!match(tok)) throw SyntaxError("expected '" + std::string(tok) + "' " + what, pos);
    }
    // Lower-case identifier: [a-z][a-z0-9_]*
    std::string lower_ident() {
        skip_ws();
        std::size_t start = pos;
        if (pos >= text.size() || text[pos] < 'a' || text[pos] > 'z')
            throw SyntaxError("expected identifier", pos);
        ++pos;
        while (pos < text.size()) {
            char c = text[pos];
            if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')
                ++pos;
            else
                break;
        }
        return std::string(text.substr(start, pos - start));
    }
};

struct PropParser {
    Cursor cur;

    PropFormula parse_iff() {
        std::size_t before = cur.pos;
        PropFormula lhs = parse_imp();
        if (cur.match("<->")) {
            PropFormula rhs = parse_imp();
            cur.skip_ws();
            if (cur.text.substr(cur.pos, 3) == "<->")
                throw SyntaxError("'<->' is non-associative; parenthesize the chain", cur.pos);
            return PropFormula::equivalence(std::move(lhs), std::move(rhs));
        }
        (void)before;
        return lhs;
    }
    PropFormula parse_imp() {
        PropFormula lhs = parse_or();
        cur.skip_ws();
        // '->' but not '<->' (already consumed) -- check it is not the tail of '<-'.
        if (cur.text.substr(cur.pos, 2) == "->") {
            cur.pos += 2;
            return PropFormula::implication(std::move(lhs), parse_imp());
        }
        return lhs;
    }
    PropFormula parse_or() {
        PropFormula f = parse_and();
        while (true) {
            cur.skip_ws();
            if (cur.pos < cur.text.size() && cur.text[cur.pos] == '|') {
                ++cur.pos;
                f = PropFormula::disjunction(std::move(f), parse_and());
            } else {
                return f;
            }
        }
    }
    PropFormula parse_and() {
        PropFormula f = parse_unary();
        while (cur.match("&")) f = PropFormula::conjunction(std::move(f), parse_unary());
        return f;
    }
    PropFormula parse_unary() {
        if (cur.match("!")) return PropFormula::negation(parse_unary());
        return parse_primary();
    }
    PropFormula parse_primary() {
        cur.skip_ws();
        if (cur.pos >= cur.text.size()) throw SyntaxError("unexpected end of input", cur.pos);
        if (cur.text[cur.pos] == '(') {
            ++cur.pos;
            PropFormula f = parse_iff();
            cur.expect(")", "to close '('");
            return f;
        }
        char c = cur.text[cur.pos];
        if (c >= 'a' && c <= 'z') return PropFormula::atom(cur.lower_ident());
        throw SyntaxError(std::string("unexpected character '") + c + "'", cur.pos);
    }
};

}  // namespace detail

inline PropFormula parse_prop(std::string_view text) {
    if (!is_ascii(text)) throw SyntaxError("non-ASCII byte in formula", 0);
    detail::PropParser p{detail::Cursor{text}};
    PropFormula f = p.parse_iff();
    if (!p.cur.eof()) throw SyntaxError("trailing input after formula", p.cur.pos);
    return f;
}

// Indexed form for mask-based valuation scans.
struct PropEval {
    std::vector<std::string> atom_names;  // sorted

    explicit PropEval(PropFormula f) : atom_names(f.atoms()), formula_(std::move(f)) {}

    std::size_t atom_count() const { return atom_names.size(); }

    bool eval_mask(std::uint32_t mask) const { return eval_node(formula_.node_.get(), mask); }

private:
    PropFormula formula_;

    bool eval_node(const PropFormula::Node* n, std::uint32_t mask) const {
        switch (n->kind) {
            case PropFormula::Kind::Atom: {
                auto it = std::lower_bound(atom_names.begin(), atom_names.end(), n->name);
                std::size_t idx = static_cast<std::size_t>(it - atom_names.begin());
                return (mask >> idx) & 1u;
            }
            case PropFormula::Kind::Not: return !eval_node(n->a.get(), mask);
            case PropFormula::Kind::And:
                return eval_node(n->a.get(), mask) && eval_node(n->b.get(), mask);
            case PropFormula::Kind::Or:
                return eval_node(n->a.get(), mask) || eval_node(n->b.get(), mask);
            case PropFormula::Kind::Implies:
                return !eval_node(n->a.get(), mask) || eval_node(n->b.get(), mask);
            default:
                return eval_node(n->a.get(), mask) == eval_node(n->b.get(), mask);
        }
    }
};

inline bool eval_prop(const PropFormula& f, const Valuation& v) {
    switch (f.kind()) {
        case PropFormula::Kind::Atom: {
            auto it = v.find(f.atom_name());
            if (it == v.end()) throw MissingAtom(f.atom_name());
            return it->second;
        }
        case PropFormula::Kind::Not: return !eval_prop(f.child(), v);
        case PropFormula::Kind::And: return eval_prop(f.left(), v) && eval_prop(f.right(), v);
        case PropFormula::Kind::Or: return eval_prop(f.left(), v) || eval_prop(f.right(), v);
        case PropFormula::Kind::Implies:
            return !eval_prop(f.left(), v) || eval_prop(f.right(), v);
        default: return eval_prop(f.left(), v) == eval_prop(f.right(), v);
    }
}

inline bool is_tautology(const PropFormula& f) {
    PropEval ev(f);
    if (ev.atom_count() > kMaxAtoms) throw AtomLimit(ev.atom_count());
    std::uint32_t total = 1u << ev.atom_count();
    for (std::uint32_t m = 0; m < total; ++m) {
        if (!ev.eval_mask(m)) return false;
    }
    return true;
}

struct Sequent {
    std::vector<PropFormula> premises;
    PropFormula conclusion;
};

namespace detail {

struct SequentScan {
    std::vector<std::string> atoms;
    std::vector<PropEval> premise_evals;

    SequentScan(const std::vector<PropFormula>& premises, const PropFormula* conclusion) {
        std::set<std::string> s;
        for (const auto& p : premises) {
            auto a = p.atoms();
            s.insert(a.begin(), a.end());
        }
        if (conclusion) {
            auto a = conclusion->atoms();
            s.insert(a.begin(), a.end());
        }
        atoms.assign(s.begin(), s.end());
        if (atoms.size() > kMaxAtoms) throw AtomLimit(atoms.size());
        for (const auto& p : premises) premise_evals.emplace_back(p);
    }

    // Mask over a sub-formula's own sorted atoms, sliced from the combined mask.
    std::uint32_t mask_for(const PropEval& ev, std::uint32_t combined) const {
        std::uint32_t m = 0;
        for (std::size_t i = 0; i < ev.atom_names.size(); ++i) {
            auto it = std::lower_bound(atoms.begin(), atoms.end(), ev.atom_names[i]);
            std::size_t idx = static_cast<std::size_t>(it - atoms.begin());
            if ((combined >> idx) & 1u) m |= (1u << i);
        }
        return m;
    }

    bool premises_hold(std::uint32_t combined) const {
        for (const auto& ev : premise_evals) {
            if (!ev.eval_mask(mask_for(ev, combined))) return false;
        }
        return true;
    }
};

}  // namespace detail

inline bool entails(const Sequent& s) {
    detail::SequentScan scan(s.premises, &s.conclusion);
    PropEval conc(s.conclusion);
    std::uint32_t total = 1u << scan.atoms.size();
    for (std::uint32_t m = 0; m < total; ++m) {
        if (scan.premises_hold(m) && !conc.eval_mask(scan.mask_for(conc, m))) return false;
    }
    return true;
}

inline bool is_satisfiable(const std::vector<PropFormula>& premises) {
    detail::SequentScan scan(premises, nullptr);
    std::uint32_t total = 1u << scan.atoms.size();
    for (std::uint32_t m = 0; m < total; ++m) {
        if (scan.premises_hold(m)) return true;
    }
    return false;
}

struct Literal {
    std::string atom;
    bool negated = false;

    bool operator<(const Literal& o) const {
        return atom != o.atom ? atom < o.atom : negated < o.negated;
    }
    bool operator==(const Literal& o) const = default;

    std::string render() const { return negated ? "!" + atom : atom; }
};

// All literals over atoms(premises) entailed by the premises. Requires the
// premises to be jointly satisfiable.
inline std::set<Literal> entailed_literals(const std::vector<PropFormula>& premises) {
    detail::SequentScan scan(premises, nullptr);
    std::size_t n = scan.atoms.size();
    std::vector<bool> seen_true(n, false), seen_false(n, false);
    bool any_model = false;
    std::uint32_t total = n ? (1u << n) : 1u;
    for (std::uint32_t m = 0; m < total; ++m) {
        if (!scan.premises_hold(m)) continue;
        any_model = true;
        for (std::size_t i = 0; i < n; ++i) {
            if ((m >> i) & 1u)
                seen_true[i] = true;
            else
                seen_false[i] = true;
        }
    }
    if (!any_model) throw Unsatisfiable();
    std::set<Literal> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (!seen_false[i]) out.insert(Literal{scan.atoms[i], false});
        if (!seen_true[i]) out.insert(Literal{scan.atoms[i], true});
    }
    return out;
}

// --- rendering ------------------------------------------------------------

namespace detail {

// Precedence levels used by the canonical renderer; higher binds tighter.
inline int prop_prec(PropFormula::Kind k) {
    switch (k) {
        case PropFormula::Kind::Iff: return 1;
        case PropFormula::Kind::Implies: return 2;
        case PropFormula::Kind::Or: return 3;
        case PropFormula::Kind::And: return 4;
        default: return 5;  // Not, Atom
    }
}

inline void render_prop(const PropFormula& f, int parent_prec, std::string& out) {
    int prec = prop_prec(f.kind());
    bool paren = prec < parent_prec;
    if (paren) out += '(';
    switch (f.kind()) {
        case PropFormula::Kind::Atom: out += f.atom_name(); break;
        case PropFormula::Kind::Not:
            out += '!';
            render_prop(f.child(), 5, out);
            break;
        case PropFormula::Kind::And:
            render_prop(f.left(), 4, out);
            out += " & ";
            render_prop(f.right(), 5, out);
            break;
        case PropFormula::Kind::Or:
            render_prop(f.left(), 3, out);
            out += " | ";
            render_prop(f.right(), 4, out);
            break;
        case PropFormula::Kind::Implies:
            render_prop(f.left(), 3, out);  // left operand must bind tighter
            out += " -> ";
            render_prop(f.right(), 2, out);  // right-associative
            break;
        case PropFormula::Kind::Iff:
            render_prop(f.left(), 2, out);
            out += " <-> ";
            render_prop(f.right(), 2, out);
            break;
    }
    if (paren) out += ')';
}

}  // namespace detail

// Minimal-parentheses canonical text; parse_prop(render_ascii(f)) == f.
inline std::string render_ascii(const PropFormula& f) {
    std::string out;
    detail::render_prop(f, 0, out);
    return out;
}

}  // namespace logos::logic
