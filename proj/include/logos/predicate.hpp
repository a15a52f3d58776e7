#pragma once

// Monadic fragment of classical predicate logic: closed formulas over unary
// predicates, no functions, no equality. Validity over all non-empty domains
// is decided by the small-model bound: a formula with k distinct predicates
// is valid iff it holds in every model with at most 2^k elements, and models
// are scanned through their inhabited-type sets (each domain element only
// matters through which predicates it satisfies), which covers exactly the
// same ground.
//
// Text format (v1) extends the propositional grammar:
//   pred    := [A-Z][A-Za-z0-9]*
//   unary   := '!' unary | 'forall' var '.' unary | 'exists' var '.' unary | primary
//   primary := pred '(' var ')' | '(' iff ')'
// A quantifier binds the tightest formula to its right; use parentheses for
// wider scope ("forall x. (P(x) & Q(x))").

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "logos/formula.hpp"

namespace logos::logic {

class NotMonadic : public std::runtime_error {
public:
    NotMonadic(const std::string& msg, std::size_t offset)
        : std::runtime_error(msg + " (at byte " + std::to_string(offset) + ")"),
          offset(offset) {}
    std::size_t offset;
};

class FreeVariable : public std::runtime_error {
public:
    explicit FreeVariable(const std::string& var, std::size_t offset = 0)
        : std::runtime_error("unbound variable '" + var + "' (at byte " +
                             std::to_string(offset) + ")"),
          var(var),
          offset(offset) {}
    std::string var;
    std::size_t offset;
};

class UnknownPredicate : public std::runtime_error {
public:
    explicit UnknownPredicate(const std::string& pred)
        : std::runtime_error("model has no extension for predicate '" + pred + "'"),
          pred(pred) {}
    std::string pred;
};

class PredicateLimit : public std::runtime_error {
public:
    explicit PredicateLimit(std::size_t n)
        : std::runtime_error("formula has " + std::to_string(n) +
                             " predicates; the validity scan is capped at 10") {}
};

inline constexpr std::size_t kMaxPredicates = 10;

inline bool is_pred_name(std::string_view s) {
    if (s.empty() || s[0] < 'A' || s[0] > 'Z') return false;
    for (char c : s.substr(1)) {
        if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9')))
            return false;
    }
    return true;
}

class PredFormula {
public:
    enum class Kind { Atom, Not, And, Or, Implies, Iff, Forall, Exists };

    static PredFormula pred_atom(std::string pred, std::string var) {
        if (!is_pred_name(pred)) throw std::invalid_argument("bad predicate name: " + pred);
        if (!is_atom_name(var)) throw std::invalid_argument("bad variable name: " + var);
        return PredFormula(
            std::make_shared<Node>(Node{Kind::Atom, std::move(pred), std::move(var), {}, {}}));
    }
    static PredFormula negation(PredFormula f) {
        return PredFormula(std::make_shared<Node>(Node{Kind::Not, {}, {}, f.node_, {}}));
    }
    static PredFormula conjunction(PredFormula a, PredFormula b) {
        return binary(Kind::And, std::move(a), std::move(b));
    }
    static PredFormula disjunction(PredFormula a, PredFormula b) {
        return binary(Kind::Or, std::move(a), std::move(b));
    }
    static PredFormula implication(PredFormula a, PredFormula b) {
        return binary(Kind::Implies, std::move(a), std::move(b));
    }
    static PredFormula equivalence(PredFormula a, PredFormula b) {
        return binary(Kind::Iff, std::move(a), std::move(b));
    }
    static PredFormula forall(std::string var, PredFormula body) {
        return quantifier(Kind::Forall, std::move(var), std::move(body));
    }
    static PredFormula exists(std::string var, PredFormula body) {
        return quantifier(Kind::Exists, std::move(var), std::move(body));
    }

    Kind kind() const { return node_->kind; }
    const std::string& pred_name() const { return node_->pred; }
    const std::string& var_name() const { return node_->var; }  // Atom or quantifier
    PredFormula child() const { return PredFormula(node_->a); }  // Not / quantifier body
    PredFormula left() const { return PredFormula(node_->a); }
    PredFormula right() const { return PredFormula(node_->b); }

    bool operator==(const PredFormula& o) const { return equal(node_.get(), o.node_.get()); }
    bool operator!=(const PredFormula& o) const { return !(*this == o); }

    std::vector<std::string> predicates() const {
        std::set<std::string> s;
        collect(node_.get(), s);
        return {s.begin(), s.end()};
    }

    bool is_closed() const { return closed(node_.get(), {}); }

    // Name of some unbound variable occurrence, if any.
    std::optional<std::string> first_free_variable() const {
        std::optional<std::string> out;
        find_free(node_.get(), {}, out);
        return out;
    }

private:
    struct Node {
        Kind kind;
        std::string pred;
        std::string var;
        std::shared_ptr<const Node> a, b;
    };

    explicit PredFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    static PredFormula binary(Kind k, PredFormula a, PredFormula b) {
        return PredFormula(std::make_shared<Node>(Node{k, {}, {}, a.node_, b.node_}));
    }
    static PredFormula quantifier(Kind k, std::string var, PredFormula body) {
        if (!is_atom_name(var)) throw std::invalid_argument("bad variable name: " + var);
        return PredFormula(std::make_shared<Node>(Node{k, {}, std::move(var), body.node_, {}}));
    }

    static bool equal(const Node* x, const Node* y) {
        if (x == y) return true;
        if (x->kind != y->kind || x->pred != y->pred || x->var != y->var) return false;
        if (bool(x->a) != bool(y->a) || bool(x->b) != bool(y->b)) return false;
        if (x->a && !equal(x->a.get(), y->a.get())) return false;
        if (x->b && !equal(x->b.get(), y->b.get())) return false;
        return true;
    }

    static void collect(const Node* n, std::set<std::string>& out) {
        if (n->kind == Kind::Atom) {
            out.insert(n->pred);
            return;
        }
        if (n->a) collect(n->a.get(), out);
        if (n->b) collect(n->b.get(), out);
    }

    static bool closed(const Node* n, std::set<std::string> bound) {
        switch (n->kind) {
            case Kind::Atom: return bound.count(n->var) > 0;
            case Kind::Forall:
            case Kind::Exists:
                bound.insert(n->var);
                return closed(n->a.get(), std::move(bound));
            case Kind::Not: return closed(n->a.get(), std::move(bound));
            default:
                return closed(n->a.get(), bound) && closed(n->b.get(), std::move(bound));
        }
    }

    static void find_free(const Node* n, std::set<std::string> bound,
                          std::optional<std::string>& out) {
        if (out) return;
        switch (n->kind) {
            case Kind::Atom:
                if (!bound.count(n->var)) out = n->var;
                return;
            case Kind::Forall:
            case Kind::Exists:
                bound.insert(n->var);
                find_free(n->a.get(), std::move(bound), out);
                return;
            case Kind::Not: find_free(n->a.get(), std::move(bound), out); return;
            default:
                find_free(n->a.get(), bound, out);
                find_free(n->b.get(), std::move(bound), out);
                return;
        }
    }

    std::shared_ptr<const Node> node_;
};

// Non-empty finite structure: elements 0..domain_size-1, one extension per
// predicate name.
struct FiniteModel {
    int domain_size = 1;
    std::map<std::string, std::set<int>> extensions;
};

namespace detail {

struct PredParser {
    Cursor cur;

    // Bound-variable stack; closedness is checked during the parse so that
    // FreeVariable errors carry a byte offset.
    std::vector<std::string> bound;

    PredFormula parse_iff() {
        PredFormula lhs = parse_imp();
        if (cur.match("<->")) {
            PredFormula rhs = parse_imp();
            cur.skip_ws();
            if (cur.text.substr(cur.pos, 3) == "<->")
                throw SyntaxError("'<->' is non-associative; parenthesize the chain", cur.pos);
            return PredFormula::equivalence(std::move(lhs), std::move(rhs));
        }
        return lhs;
    }
    PredFormula parse_imp() {
        PredFormula lhs = parse_or();
        cur.skip_ws();
        if (cur.text.substr(cur.pos, 2) == "->") {
            cur.pos += 2;
            return PredFormula::implication(std::move(lhs), parse_imp());
        }
        return lhs;
    }
    PredFormula parse_or() {
        PredFormula f = parse_and();
        while (true) {
            cur.skip_ws();
            if (cur.pos < cur.text.size() && cur.text[cur.pos] == '|') {
                ++cur.pos;
                f = PredFormula::disjunction(std::move(f), parse_and());
            } else {
                return f;
            }
        }
    }
    PredFormula parse_and() {
        PredFormula f = parse_unary();
        while (cur.match("&")) f = PredFormula::conjunction(std::move(f), parse_unary());
        return f;
    }
    PredFormula parse_unary() {
        cur.skip_ws();
        if (cur.match("!")) return PredFormula::negation(parse_unary());
        if (cur.pos < cur.text.size() && cur.text[cur.pos] >= 'a' && cur.text[cur.pos] <= 'z') {
            std::size_t at = cur.pos;
            std::string word = cur.lower_ident();
            if (word == "forall" || word == "exists") {
                std::string var = cur.lower_ident();
                cur.expect(".", "after quantified variable");
                bound.push_back(var);
                PredFormula body = parse_unary();
                bound.pop_back();
                return word == "forall" ? PredFormula::forall(var, std::move(body))
                                        : PredFormula::exists(var, std::move(body));
            }
            throw SyntaxError("expected a predicate atom like 'P(" + word + ")', a quantifier, "
                              "'!' or '('",
                              at);
        }
        return parse_primary();
    }
    PredFormula parse_primary() {
        cur.skip_ws();
        if (cur.pos >= cur.text.size()) throw SyntaxError("unexpected end of input", cur.pos);
        if (cur.text[cur.pos] == '(') {
            ++cur.pos;
            PredFormula f = parse_iff();
            cur.expect(")", "to close '('");
            return f;
        }
        char c = cur.text[cur.pos];
        if (c >= 'A' && c <= 'Z') {
            std::size_t start = cur.pos;
            ++cur.pos;
            while (cur.pos < cur.text.size()) {
                char ch = cur.text[cur.pos];
                if ((ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                    (ch >= '0' && ch <= '9'))
                    ++cur.pos;
                else
                    break;
            }
            std::string pred(cur.text.substr(start, cur.pos - start));
            cur.expect("(", "after predicate name");
            if (cur.peek() == ')')
                throw NotMonadic("predicate '" + pred + "' takes no argument; exactly one required",
                                 cur.pos);
            cur.skip_ws();
            std::size_t var_at = cur.pos;
            std::string var = cur.lower_ident();
            cur.skip_ws();
            if (cur.pos < cur.text.size() && cur.text[cur.pos] == ',')
                throw NotMonadic("predicate '" + pred + "' applied to more than one variable",
                                 cur.pos);
            cur.expect(")", "to close predicate argument");
            if (std::find(bound.begin(), bound.end(), var) == bound.end())
                throw FreeVariable(var, var_at);
            return PredFormula::pred_atom(std::move(pred), std::move(var));
        }
        throw SyntaxError(std::string("unexpected character '") + c + "'", cur.pos);
    }
};

}  // namespace detail

inline PredFormula parse_pred(std::string_view text) {
    if (!is_ascii(text)) throw SyntaxError("non-ASCII byte in formula", 0);
    detail::PredParser p{detail::Cursor{text}, {}};
    PredFormula f = p.parse_iff();
    if (!p.cur.eof()) throw SyntaxError("trailing input after formula", p.cur.pos);
    return f;
}

namespace detail {

inline bool eval_pred_env(const PredFormula& f, const FiniteModel& m,
                          std::vector<std::pair<std::string, int>>& env) {
    using K = PredFormula::Kind;
    switch (f.kind()) {
        case K::Atom: {
            int elem = -1;
            for (auto it = env.rbegin(); it != env.rend(); ++it) {
                if (it->first == f.var_name()) {
                    elem = it->second;
                    break;
                }
            }
            if (elem < 0) throw FreeVariable(f.var_name());
            auto ext = m.extensions.find(f.pred_name());
            if (ext == m.extensions.end()) throw UnknownPredicate(f.pred_name());
            return ext->second.count(elem) > 0;
        }
        case K::Not: return !eval_pred_env(f.child(), m, env);
        case K::And: return eval_pred_env(f.left(), m, env) && eval_pred_env(f.right(), m, env);
        case K::Or: return eval_pred_env(f.left(), m, env) || eval_pred_env(f.right(), m, env);
        case K::Implies:
            return !eval_pred_env(f.left(), m, env) || eval_pred_env(f.right(), m, env);
        case K::Iff: return eval_pred_env(f.left(), m, env) == eval_pred_env(f.right(), m, env);
        case K::Forall:
            for (int e = 0; e < m.domain_size; ++e) {
                env.emplace_back(f.var_name(), e);
                bool ok = eval_pred_env(f.child(), m, env);
                env.pop_back();
                if (!ok) return false;
            }
            return true;
        default:  // Exists
            for (int e = 0; e < m.domain_size; ++e) {
                env.emplace_back(f.var_name(), e);
                bool ok = eval_pred_env(f.child(), m, env);
                env.pop_back();
                if (ok) return true;
            }
            return false;
    }
}

}  // namespace detail

// Tarskian truth of a closed formula in m.
inline bool eval_pred(const PredFormula& f, const FiniteModel& m) {
    if (m.domain_size < 1) throw std::invalid_argument("domain must be non-empty");
    std::vector<std::pair<std::string, int>> env;
    return detail::eval_pred_env(f, m, env);
}

// Searches for a falsifying model, smallest domain first. Types are subsets
// of the formula's predicate set; a candidate model has one element per
// inhabited type, so domain sizes run 1..2^k. Returns the first counter-model
// found, or nullopt when the formula is valid.
inline std::optional<FiniteModel> find_countermodel(const PredFormula& f) {
    if (auto free = f.first_free_variable()) throw FreeVariable(*free);
    std::vector<std::string> preds = f.predicates();
    std::size_t k = preds.size();
    if (k > kMaxPredicates) throw PredicateLimit(k);
    std::size_t n_types = std::size_t{1} << k;

    std::vector<std::size_t> combo;
    auto build_model = [&]() {
        FiniteModel m;
        m.domain_size = static_cast<int>(combo.size());
        for (std::size_t p = 0; p < k; ++p) {
            std::set<int> ext;
            for (std::size_t j = 0; j < combo.size(); ++j) {
                if ((combo[j] >> p) & 1u) ext.insert(static_cast<int>(j));
            }
            m.extensions[preds[p]] = std::move(ext);
        }
        return m;
    };

    for (std::size_t size = 1; size <= n_types; ++size) {
        combo.resize(size);
        for (std::size_t i = 0; i < size; ++i) combo[i] = i;
        while (true) {
            FiniteModel m = build_model();
            if (!eval_pred(f, m)) return m;
            // next combination of `size` types out of n_types
            std::size_t i = size;
            while (i > 0 && combo[i - 1] == n_types - size + (i - 1)) --i;
            if (i == 0) break;
            ++combo[i - 1];
            for (std::size_t j = i; j < size; ++j) combo[j] = combo[j - 1] + 1;
        }
    }
    return std::nullopt;
}

inline bool is_valid_monadic(const PredFormula& f) { return !find_countermodel(f).has_value(); }

// --- rendering ------------------------------------------------------------

namespace detail {

inline int pred_prec(PredFormula::Kind k) {
    using K = PredFormula::Kind;
    switch (k) {
        case K::Iff: return 1;
        case K::Implies: return 2;
        case K::Or: return 3;
        case K::And: return 4;
        default: return 5;  // Not, quantifiers, Atom
    }
}

inline void render_pred(const PredFormula& f, int parent_prec, std::string& out) {
    using K = PredFormula::Kind;
    int prec = pred_prec(f.kind());
    bool paren = prec < parent_prec;
    if (paren) out += '(';
    switch (f.kind()) {
        case K::Atom:
            out += f.pred_name();
            out += '(';
            out += f.var_name();
            out += ')';
            break;
        case K::Not:
            out += '!';
            render_pred(f.child(), 5, out);
            break;
        case K::Forall:
        case K::Exists:
            out += f.kind() == K::Forall ? "forall " : "exists ";
            out += f.var_name();
            out += ". ";
            render_pred(f.child(), 5, out);
            break;
        case K::And:
            render_pred(f.left(), 4, out);
            out += " & ";
            render_pred(f.right(), 5, out);
            break;
        case K::Or:
            render_pred(f.left(), 3, out);
            out += " | ";
            render_pred(f.right(), 4, out);
            break;
        case K::Implies:
            render_pred(f.left(), 3, out);
            out += " -> ";
            render_pred(f.right(), 2, out);
            break;
        case K::Iff:
            render_pred(f.left(), 2, out);
            out += " <-> ";
            render_pred(f.right(), 2, out);
            break;
    }
    if (paren) out += ')';
}

}  // namespace detail

inline std::string render_ascii(const PredFormula& f) {
    std::string out;
    detail::render_pred(f, 0, out);
    return out;
}

}  // namespace logos::logic
