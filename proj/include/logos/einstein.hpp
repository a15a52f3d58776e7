#pragma once

// Einstein (zebra) riddles: positions 1..n, one value of every attribute per
// position. The solver enumerates per-attribute permutations with clue
// propagation and reports its backtrack-node count, which doubles as the
// difficulty proxy. The generator draws a hidden assignment from a seeded
// RNG, emits true clues about it, greedily minimizes them while uniqueness
// holds, then pads medium/hard puzzles with redundant and indirect clues.
// Every emitted puzzle is re-verified to have exactly one solution.

#include <algorithm>
#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "logos/text.hpp"

namespace logos::puzzle {

class SizeLimit : public std::runtime_error {
public:
    explicit SizeLimit(const std::string& msg) : std::runtime_error(msg) {}
};

class GenerationFailure : public std::runtime_error {
public:
    explicit GenerationFailure(const std::string& msg) : std::runtime_error(msg) {}
};

class MutationFailure : public std::runtime_error {
public:
    explicit MutationFailure(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr int kMaxEntities = 6;
inline constexpr int kMaxAttributes = 6;

enum class ClueKind { SameEntity, AtPosition, Adjacent, LeftOf, Negation, Disjunction };

struct Clue {
    ClueKind kind = ClueKind::SameEntity;
    std::string attr_a, val_a;
    std::string attr_b, val_b;  // unused for AtPosition
    int position = 0;           // 1-based; AtPosition only
    std::vector<Clue> children; // Negation: 1, Disjunction: 2; nesting depth <= 1
    bool redundant = false;     // generator tag; removal keeps the solution set

    // Logical content only; the redundancy tag does not affect identity.
    bool same_content(const Clue& o) const {
        if (kind != o.kind || attr_a != o.attr_a || val_a != o.val_a || attr_b != o.attr_b ||
            val_b != o.val_b || position != o.position || children.size() != o.children.size())
            return false;
        for (std::size_t i = 0; i < children.size(); ++i)
            if (!children[i].same_content(o.children[i])) return false;
        return true;
    }
};

struct EinsteinPuzzle {
    int n_entities = 0;
    // Attribute name plus its n_entities distinct values, in display order.
    std::vector<std::pair<std::string, std::vector<std::string>>> attributes;
    std::vector<Clue> clues;
    std::uint64_t seed = 0;
    std::uint64_t effective_seed = 0;  // seed actually used; differs after internal reseeding
    Difficulty difficulty = Difficulty::easy;
};

struct Assignment {
    std::map<std::pair<std::string, std::string>, int> position_of;  // 1-based

    bool operator==(const Assignment&) const = default;

    int at(const std::string& attr, const std::string& val) const {
        auto it = position_of.find({attr, val});
        if (it == position_of.end())
            throw std::invalid_argument("assignment has no cell (" + attr + ", " + val + ")");
        return it->second;
    }
};

struct EinsteinSolveResult {
    std::vector<Assignment> assignments;
    long backtrack_nodes = 0;
};

namespace detail {

struct CompiledEinstein {
    int n = 0, a = 0;
    std::vector<std::string> attr_names;
    std::vector<std::vector<std::string>> value_names;  // [attr][val]

    struct CClue {
        ClueKind kind;
        int aa = -1, av = -1, ba = -1, bv = -1, pos = -1;  // pos 0-based
        int c1 = -1, c2 = -1;
        int ready_at = 0;  // highest attribute index referenced
    };
    std::vector<CClue> flat;
    std::vector<int> top;  // indices of top-level clues in `flat`

    int attr_index(const std::string& name) const {
        for (int i = 0; i < a; ++i)
            if (attr_names[static_cast<std::size_t>(i)] == name) return i;
        throw std::invalid_argument("unknown attribute: " + name);
    }
    int value_index(int attr, const std::string& val) const {
        const auto& vals = value_names[static_cast<std::size_t>(attr)];
        for (int i = 0; i < n; ++i)
            if (vals[static_cast<std::size_t>(i)] == val) return i;
        throw std::invalid_argument("unknown value '" + val + "' for attribute " +
                                    attr_names[static_cast<std::size_t>(attr)]);
    }

    int compile_clue(const Clue& c, int depth) {
        if (depth > 1) throw std::invalid_argument("clues nest at most one level");
        CClue cc;
        cc.kind = c.kind;
        switch (c.kind) {
            case ClueKind::Negation: {
                if (c.children.size() != 1)
                    throw std::invalid_argument("negation clue needs exactly one child");
                cc.c1 = compile_clue(c.children[0], depth + 1);
                cc.ready_at = flat[static_cast<std::size_t>(cc.c1)].ready_at;
                break;
            }
            case ClueKind::Disjunction: {
                if (c.children.size() != 2)
                    throw std::invalid_argument("disjunction clue needs exactly two children");
                cc.c1 = compile_clue(c.children[0], depth + 1);
                cc.c2 = compile_clue(c.children[1], depth + 1);
                cc.ready_at = std::max(flat[static_cast<std::size_t>(cc.c1)].ready_at,
                                       flat[static_cast<std::size_t>(cc.c2)].ready_at);
                break;
            }
            case ClueKind::AtPosition: {
                cc.aa = attr_index(c.attr_a);
                cc.av = value_index(cc.aa, c.val_a);
                if (c.position < 1 || c.position > n)
                    throw std::invalid_argument("clue position out of range");
                cc.pos = c.position - 1;
                cc.ready_at = cc.aa;
                break;
            }
            default: {
                cc.aa = attr_index(c.attr_a);
                cc.av = value_index(cc.aa, c.val_a);
                cc.ba = attr_index(c.attr_b);
                cc.bv = value_index(cc.ba, c.val_b);
                cc.ready_at = std::max(cc.aa, cc.ba);
                break;
            }
        }
        flat.push_back(cc);
        return static_cast<int>(flat.size() - 1);
    }

    // place[attr][val] = 0-based position
    bool eval(int idx, const std::vector<std::array<int, kMaxEntities>>& place) const {
        const CClue& c = flat[static_cast<std::size_t>(idx)];
        switch (c.kind) {
            case ClueKind::SameEntity:
                return place[static_cast<std::size_t>(c.aa)][static_cast<std::size_t>(c.av)] ==
                       place[static_cast<std::size_t>(c.ba)][static_cast<std::size_t>(c.bv)];
            case ClueKind::AtPosition:
                return place[static_cast<std::size_t>(c.aa)][static_cast<std::size_t>(c.av)] ==
                       c.pos;
            case ClueKind::Adjacent: {
                int d = place[static_cast<std::size_t>(c.aa)][static_cast<std::size_t>(c.av)] -
                        place[static_cast<std::size_t>(c.ba)][static_cast<std::size_t>(c.bv)];
                return d == 1 || d == -1;
            }
            case ClueKind::LeftOf:
                return place[static_cast<std::size_t>(c.aa)][static_cast<std::size_t>(c.av)] <
                       place[static_cast<std::size_t>(c.ba)][static_cast<std::size_t>(c.bv)];
            case ClueKind::Negation: return !eval(c.c1, place);
            default: return eval(c.c1, place) || eval(c.c2, place);
        }
    }
};

inline CompiledEinstein compile_einstein(const EinsteinPuzzle& p) {
    if (p.n_entities < 1 || p.n_entities > kMaxEntities)
        throw SizeLimit("n_entities must be in 1.." + std::to_string(kMaxEntities));
    if (p.attributes.empty() || p.attributes.size() > kMaxAttributes)
        throw SizeLimit("attribute count must be in 1.." + std::to_string(kMaxAttributes));
    CompiledEinstein ce;
    ce.n = p.n_entities;
    ce.a = static_cast<int>(p.attributes.size());
    for (const auto& [name, vals] : p.attributes) {
        if (static_cast<int>(vals.size()) != p.n_entities)
            throw std::invalid_argument("attribute '" + name + "' must have exactly " +
                                        std::to_string(p.n_entities) + " values");
        std::set<std::string> uniq(vals.begin(), vals.end());
        if (uniq.size() != vals.size())
            throw std::invalid_argument("attribute '" + name + "' has duplicate values");
        ce.attr_names.push_back(name);
        ce.value_names.push_back(vals);
    }
    for (const auto& c : p.clues) ce.top.push_back(ce.compile_clue(c, 0));
    return ce;
}

// All permutations of 0..n-1 in lexicographic order.
inline const std::vector<std::vector<int>>& permutations_of(int n) {
    static std::array<std::vector<std::vector<int>>, kMaxEntities + 1> cache = [] {
        std::array<std::vector<std::vector<int>>, kMaxEntities + 1> c;
        for (int n = 1; n <= kMaxEntities; ++n) {
            std::vector<int> p(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
            do {
                c[static_cast<std::size_t>(n)].push_back(p);
            } while (std::next_permutation(p.begin(), p.end()));
        }
        return c;
    }();
    return cache[static_cast<std::size_t>(n)];
}

}  // namespace detail

// Every assignment satisfying all clues (up to max_solutions), plus the
// number of permutation placements tried.
inline EinsteinSolveResult solve_einstein(const EinsteinPuzzle& p,
                                          std::size_t max_solutions = SIZE_MAX) {
    detail::CompiledEinstein ce = detail::compile_einstein(p);
    const auto& perms = detail::permutations_of(ce.n);

    // Attribute assignment order: greedily pick the attribute that makes the
    // most clues decidable, so pruning kicks in early. Deterministic.
    std::vector<std::set<int>> clue_attrs(ce.flat.size());
    auto collect_attrs = [&](auto&& self, int idx, std::set<int>& out) -> void {
        const auto& c = ce.flat[static_cast<std::size_t>(idx)];
        if (c.aa >= 0) out.insert(c.aa);
        if (c.ba >= 0) out.insert(c.ba);
        if (c.c1 >= 0) self(self, c.c1, out);
        if (c.c2 >= 0) self(self, c.c2, out);
    };
    for (int idx : ce.top) collect_attrs(collect_attrs, idx, clue_attrs[static_cast<std::size_t>(idx)]);

    std::vector<int> order;
    {
        std::set<int> assigned;
        while (static_cast<int>(order.size()) < ce.a) {
            int best = -1, best_score = -1;
            for (int cand = 0; cand < ce.a; ++cand) {
                if (assigned.count(cand)) continue;
                int score = 0;
                for (int idx : ce.top) {
                    const auto& attrs = clue_attrs[static_cast<std::size_t>(idx)];
                    if (attrs.count(cand) == 0) continue;
                    bool rest_assigned = true;
                    for (int a : attrs)
                        if (a != cand && !assigned.count(a)) {
                            rest_assigned = false;
                            break;
                        }
                    if (rest_assigned) ++score;
                }
                if (score > best_score) {
                    best_score = score;
                    best = cand;
                }
            }
            assigned.insert(best);
            order.push_back(best);
        }
    }

    // Clues grouped by the first search depth at which they are decidable.
    std::vector<std::vector<int>> ready(static_cast<std::size_t>(ce.a));
    for (int idx : ce.top) {
        int depth = 0;
        for (int d = 0; d < ce.a; ++d) {
            if (clue_attrs[static_cast<std::size_t>(idx)].count(order[static_cast<std::size_t>(d)]))
                depth = d;
        }
        ready[static_cast<std::size_t>(depth)].push_back(idx);
    }

    EinsteinSolveResult result;
    std::vector<std::array<int, kMaxEntities>> place(static_cast<std::size_t>(ce.a));

    auto record = [&]() {
        Assignment a;
        for (int ai = 0; ai < ce.a; ++ai) {
            for (int vi = 0; vi < ce.n; ++vi) {
                a.position_of[{ce.attr_names[static_cast<std::size_t>(ai)],
                               ce.value_names[static_cast<std::size_t>(ai)]
                                             [static_cast<std::size_t>(vi)]}] =
                    place[static_cast<std::size_t>(ai)][static_cast<std::size_t>(vi)] + 1;
            }
        }
        result.assignments.push_back(std::move(a));
    };

    auto search = [&](auto&& self, int depth) -> bool {
        if (depth == ce.a) {
            record();
            return result.assignments.size() < max_solutions;
        }
        int attr = order[static_cast<std::size_t>(depth)];
        for (const auto& perm : perms) {
            ++result.backtrack_nodes;
            for (int v = 0; v < ce.n; ++v)
                place[static_cast<std::size_t>(attr)][static_cast<std::size_t>(v)] =
                    perm[static_cast<std::size_t>(v)];
            bool ok = true;
            for (int idx : ready[static_cast<std::size_t>(depth)]) {
                if (!ce.eval(idx, place)) {
                    ok = false;
                    break;
                }
            }
            if (ok && !self(self, depth + 1)) return false;
        }
        return true;
    };
    search(search, 0);
    return result;
}

namespace detail {

inline std::size_t count_einstein_solutions(const EinsteinPuzzle& p, std::size_t cap) {
    return solve_einstein(p, cap).assignments.size();
}

}  // namespace detail

// --- generation -------------------------------------------------------------

namespace detail {

// Fixed ASCII vocabulary; the first n values of the first a attributes.
inline const std::vector<std::pair<std::string, std::vector<std::string>>>&
einstein_vocabulary() {
    static const std::vector<std::pair<std::string, std::vector<std::string>>> vocab = {
        {"color", {"red", "blue", "green", "yellow", "white", "black"}},
        {"pet", {"cat", "dog", "bird", "fish", "horse", "rabbit"}},
        {"drink", {"tea", "coffee", "milk", "juice", "water", "cocoa"}},
        {"job", {"baker", "doctor", "teacher", "pilot", "lawyer", "farmer"}},
        {"hobby", {"chess", "tennis", "cycling", "reading", "sailing", "painting"}},
        {"nationality", {"pole", "german", "swede", "dane", "brit", "norwegian"}},
    };
    return vocab;
}

struct HiddenAssignment {
    // value_at[attr][pos] = value index
    std::vector<std::vector<int>> value_at;
    // pos_of[attr][val] = position index
    std::vector<std::vector<int>> pos_of;
};

struct ClueFactory {
    const EinsteinPuzzle& p;
    const HiddenAssignment& h;

    const std::string& attr(int a) const { return p.attributes[static_cast<std::size_t>(a)].first; }
    const std::string& val(int a, int v) const {
        return p.attributes[static_cast<std::size_t>(a)].second[static_cast<std::size_t>(v)];
    }
    int val_at(int a, int pos) const {
        return h.value_at[static_cast<std::size_t>(a)][static_cast<std::size_t>(pos)];
    }
    int pos_of(int a, int v) const {
        return h.pos_of[static_cast<std::size_t>(a)][static_cast<std::size_t>(v)];
    }

    Clue at_position(int a, int pos) const {
        return Clue{ClueKind::AtPosition, attr(a), val(a, val_at(a, pos)), "", "", pos + 1, {}, false};
    }
    Clue at_position_false(int a, int v, int wrong_pos) const {
        return Clue{ClueKind::AtPosition, attr(a), val(a, v), "", "", wrong_pos + 1, {}, false};
    }
    Clue same_entity(int a1, int a2, int pos) const {
        return Clue{ClueKind::SameEntity, attr(a1), val(a1, val_at(a1, pos)),
                    attr(a2),              val(a2, val_at(a2, pos)), 0, {}, false};
    }
    Clue same_entity_false(int a1, int p1, int a2, int p2) const {  // p1 != p2
        return Clue{ClueKind::SameEntity, attr(a1), val(a1, val_at(a1, p1)),
                    attr(a2),              val(a2, val_at(a2, p2)), 0, {}, false};
    }
    Clue left_of(int a1, int p1, int a2, int p2) const {  // p1 < p2
        return Clue{ClueKind::LeftOf, attr(a1), val(a1, val_at(a1, p1)),
                    attr(a2),          val(a2, val_at(a2, p2)), 0, {}, false};
    }
    Clue adjacent(int a1, int p1, int a2, int p2) const {  // |p1-p2| == 1
        return Clue{ClueKind::Adjacent, attr(a1), val(a1, val_at(a1, p1)),
                    attr(a2),            val(a2, val_at(a2, p2)), 0, {}, false};
    }
    static Clue negation(Clue inner) {
        Clue c;
        c.kind = ClueKind::Negation;
        c.children.push_back(std::move(inner));
        return c;
    }
    static Clue disjunction(Clue a, Clue b) {
        Clue c;
        c.kind = ClueKind::Disjunction;
        c.children.push_back(std::move(a));
        c.children.push_back(std::move(b));
        return c;
    }
};

inline std::string clue_key(const Clue& c) {
    std::string k = std::to_string(static_cast<int>(c.kind)) + "|" + c.attr_a + "=" + c.val_a +
                    "|" + c.attr_b + "=" + c.val_b + "|" + std::to_string(c.position);
    for (const auto& ch : c.children) k += "{" + clue_key(ch) + "}";
    return k;
}

}  // namespace detail

// Deterministic per (seed, n_entities, n_attributes, difficulty). Retries
// with seed+1, seed+2, ... when a draw cannot be completed; the seed actually
// used is recorded in effective_seed.
inline EinsteinPuzzle generate_einstein(std::uint64_t seed, int n_entities, int n_attributes,
                                        Difficulty difficulty) {
    if (n_entities < 2 || n_entities > kMaxEntities)
        throw SizeLimit("n_entities must be in 2.." + std::to_string(kMaxEntities));
    if (n_attributes < 2 || n_attributes > kMaxAttributes)
        throw SizeLimit("n_attributes must be in 2.." + std::to_string(kMaxAttributes));

    constexpr int kReseedBudget = 16;
    for (int reseed = 0; reseed < kReseedBudget; ++reseed) {
        std::uint64_t eff = seed + static_cast<std::uint64_t>(reseed);
        Rng rng(Rng::mix(eff, Rng::mix(static_cast<std::uint64_t>(n_entities * 16 + n_attributes),
                                       static_cast<std::uint64_t>(difficulty))));

        EinsteinPuzzle p;
        p.n_entities = n_entities;
        p.seed = seed;
        p.effective_seed = eff;
        p.difficulty = difficulty;
        const auto& vocab = detail::einstein_vocabulary();
        for (int a = 0; a < n_attributes; ++a) {
            const auto& [name, vals] = vocab[static_cast<std::size_t>(a)];
            p.attributes.emplace_back(
                name, std::vector<std::string>(vals.begin(), vals.begin() + n_entities));
        }

        detail::HiddenAssignment hidden;
        hidden.value_at.resize(static_cast<std::size_t>(n_attributes));
        hidden.pos_of.resize(static_cast<std::size_t>(n_attributes));
        for (int a = 0; a < n_attributes; ++a) {
            std::vector<int> perm(static_cast<std::size_t>(n_entities));
            for (int i = 0; i < n_entities; ++i) perm[static_cast<std::size_t>(i)] = i;
            rng.shuffle(perm);
            hidden.value_at[static_cast<std::size_t>(a)] = perm;
            hidden.pos_of[static_cast<std::size_t>(a)].resize(static_cast<std::size_t>(n_entities));
            for (int pos = 0; pos < n_entities; ++pos)
                hidden.pos_of[static_cast<std::size_t>(a)]
                             [static_cast<std::size_t>(perm[static_cast<std::size_t>(pos)])] = pos;
        }
        detail::ClueFactory make{p, hidden};

        // Candidate pool of true clues; composition depends on difficulty.
        std::vector<Clue> pool;
        std::set<std::string> seen;
        auto add = [&](Clue c) {
            auto key = detail::clue_key(c);
            if (seen.insert(key).second) pool.push_back(std::move(c));
        };
        auto sample_pair = [&](auto&& fn, int count) {
            for (int i = 0; i < count * 4 && count > 0; ++i) {
                int a1 = rng.range(0, n_attributes - 1);
                int a2 = rng.range(0, n_attributes - 1);
                int p1 = rng.range(0, n_entities - 1);
                int p2 = rng.range(0, n_entities - 1);
                if (fn(a1, p1, a2, p2)) --count;
            }
        };

        int na = n_entities * n_attributes;
        if (difficulty == Difficulty::easy) {
            for (int a = 0; a < n_attributes; ++a)
                for (int pos = 0; pos < n_entities; ++pos) add(make.at_position(a, pos));
            for (int a1 = 0; a1 < n_attributes; ++a1)
                for (int a2 = a1 + 1; a2 < n_attributes; ++a2)
                    for (int pos = 0; pos < n_entities; ++pos) add(make.same_entity(a1, a2, pos));
        } else if (difficulty == Difficulty::medium) {
            for (int a1 = 0; a1 < n_attributes; ++a1)
                for (int a2 = a1 + 1; a2 < n_attributes; ++a2)
                    for (int pos = 0; pos < n_entities; ++pos) add(make.same_entity(a1, a2, pos));
            sample_pair(
                [&](int a1, int p1, int a2, int p2) {
                    if (p1 >= p2) return false;
                    add(make.left_of(a1, p1, a2, p2));
                    return true;
                },
                2 * na);
            sample_pair(
                [&](int a1, int p1, int a2, int p2) {
                    if (p1 - p2 != 1 && p2 - p1 != 1) return false;
                    add(make.adjacent(a1, p1, a2, p2));
                    return true;
                },
                na);
        } else {
            sample_pair(
                [&](int a1, int p1, int a2, int p2) {
                    if (p1 - p2 != 1 && p2 - p1 != 1) return false;
                    add(make.adjacent(a1, p1, a2, p2));
                    return true;
                },
                2 * na);
            sample_pair(
                [&](int a1, int p1, int a2, int p2) {
                    if (p1 >= p2) return false;
                    add(make.left_of(a1, p1, a2, p2));
                    return true;
                },
                2 * na);
            // True negations: the inner clue is false of the hidden assignment.
            sample_pair(
                [&](int a1, int p1, int a2, int p2) {
                    if (p1 == p2 || a1 == a2) return false;
                    add(detail::ClueFactory::negation(make.same_entity_false(a1, p1, a2, p2)));
                    return true;
                },
                2 * na);
            // Misleading disjunctions: one true branch, one false branch.
            sample_pair(
                [&](int a1, int p1, int a2, int p2) {
                    if (a1 == a2 || p1 == p2) return false;
                    Clue true_branch = make.same_entity(a1, a2, p1);
                    Clue false_branch = make.same_entity_false(a1, p1, a2, p2);
                    if (rng.chance(1, 2))
                        add(detail::ClueFactory::disjunction(std::move(true_branch),
                                                             std::move(false_branch)));
                    else
                        add(detail::ClueFactory::disjunction(std::move(false_branch),
                                                             std::move(true_branch)));
                    return true;
                },
                na);
            for (int a1 = 0; a1 < n_attributes; ++a1)
                for (int a2 = a1 + 1; a2 < n_attributes; ++a2)
                    for (int pos = 0; pos < n_entities; ++pos)
                        if (rng.chance(1, 3)) add(make.same_entity(a1, a2, pos));
        }

        rng.shuffle(pool);
        p.clues = pool;

        // Top up with direct position clues until the pool pins the hidden
        // assignment uniquely.
        std::vector<Clue> anchors;
        for (int a = 0; a < n_attributes; ++a)
            for (int pos = 0; pos < n_entities; ++pos) anchors.push_back(make.at_position(a, pos));
        rng.shuffle(anchors);
        std::size_t next_anchor = 0;
        while (detail::count_einstein_solutions(p, 2) != 1) {
            bool added = false;
            while (next_anchor < anchors.size()) {
                Clue c = anchors[next_anchor++];
                if (seen.insert(detail::clue_key(c)).second) {
                    p.clues.push_back(std::move(c));
                    added = true;
                    break;
                }
            }
            if (!added) break;  // pool exhausted; retry with the next seed
        }
        if (detail::count_einstein_solutions(p, 2) != 1) continue;

        // Greedy single-pass minimization; afterwards every surviving clue is
        // essential relative to the final set.
        std::vector<std::size_t> order(p.clues.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        rng.shuffle(order);
        std::set<std::size_t> dropped;
        for (std::size_t i : order) {
            EinsteinPuzzle probe = p;
            probe.clues.clear();
            for (std::size_t j = 0; j < p.clues.size(); ++j)
                if (j != i && !dropped.count(j)) probe.clues.push_back(p.clues[j]);
            if (detail::count_einstein_solutions(probe, 2) == 1) dropped.insert(i);
        }
        std::vector<Clue> kept;
        for (std::size_t j = 0; j < p.clues.size(); ++j)
            if (!dropped.count(j)) kept.push_back(p.clues[j]);
        p.clues = std::move(kept);

        // Redundant padding: true clues from the unused pool. Hard prefers
        // the indirect variants.
        int extras = difficulty == Difficulty::easy     ? 0
                     : difficulty == Difficulty::medium ? 2 + static_cast<int>(rng.below(2))
                                                        : 4 + static_cast<int>(rng.below(3));
        if (extras > 0) {
            std::set<std::string> in_use;
            for (const auto& c : p.clues) in_use.insert(detail::clue_key(c));
            std::vector<Clue> spare;
            for (const auto& c : pool)
                if (!in_use.count(detail::clue_key(c))) spare.push_back(c);
            if (difficulty == Difficulty::hard) {
                std::stable_partition(spare.begin(), spare.end(), [](const Clue& c) {
                    return c.kind == ClueKind::Negation || c.kind == ClueKind::Disjunction ||
                           c.kind == ClueKind::Adjacent;
                });
            }
            for (const auto& c : spare) {
                if (extras == 0) break;
                p.clues.push_back(c);
                --extras;
            }
        }

        // Tag by definition: a clue is redundant iff its removal keeps the
        // puzzle at exactly one solution.
        for (std::size_t i = 0; i < p.clues.size(); ++i) {
            EinsteinPuzzle probe = p;
            probe.clues.erase(probe.clues.begin() + static_cast<std::ptrdiff_t>(i));
            p.clues[i].redundant = detail::count_einstein_solutions(probe, 2) == 1;
        }

        std::vector<std::size_t> final_order(p.clues.size());
        for (std::size_t i = 0; i < final_order.size(); ++i) final_order[i] = i;
        rng.shuffle(final_order);
        std::vector<Clue> shuffled;
        for (std::size_t i : final_order) shuffled.push_back(p.clues[i]);
        p.clues = std::move(shuffled);

        if (detail::count_einstein_solutions(p, 2) == 1) return p;
    }
    throw GenerationFailure("could not generate a unique-solution puzzle for seed " +
                            std::to_string(seed));
}

// --- rendering --------------------------------------------------------------

struct EinsteinTemplates {
    std::string intro;         // {n}
    std::string attr_line;     // {attr}, {values}
    std::string clue_header;
    std::string same_entity;   // {a_attr} {a_val} {b_attr} {b_val}
    std::string at_position;   // {attr} {val} {pos}
    std::string adjacent;
    std::string left_of;
    std::string negation;      // {inner}
    std::string disjunction;   // {a} {b}
};

namespace detail {

// Embedded template packs; the files under templates/ carry the same text.
inline const EinsteinTemplates& builtin_einstein_templates(Language lang) {
    static const EinsteinTemplates en{
        "There are {n} houses in a row, numbered 1 to {n} from left to right.",
        "Each house has a different {attr}: {values}.",
        "Clues:",
        "The house with {a_attr} {a_val} is the house with {b_attr} {b_val}.",
        "House {pos} has {attr} {val}.",
        "The house with {a_attr} {a_val} is next to the house with {b_attr} {b_val}.",
        "The house with {a_attr} {a_val} is somewhere to the left of the house with {b_attr} "
        "{b_val}.",
        "It is NOT the case that: {inner}",
        "At least one of the following is true: {a} OR {b}",
    };
    static const EinsteinTemplates pl{
        "W rzedzie stoi {n} domow, ponumerowanych od 1 do {n} od lewej do prawej.",
        "Kazdy dom ma inna wartosc cechy {attr}: {values}.",
        "Wskazowki:",
        "Dom o cesze {a_attr} {a_val} to ten sam dom co dom o cesze {b_attr} {b_val}.",
        "Dom {pos} ma {attr} {val}.",
        "Dom o cesze {a_attr} {a_val} sasiaduje z domem o cesze {b_attr} {b_val}.",
        "Dom o cesze {a_attr} {a_val} stoi gdzies na lewo od domu o cesze {b_attr} {b_val}.",
        "NIE jest prawda, ze: {inner}",
        "Przynajmniej jedno z ponizszych jest prawdziwe: {a} LUB {b}",
    };
    return lang == Language::pl ? pl : en;
}

// Polish words for the fixed vocabulary; unknown words pass through.
inline std::string pl_word(const std::string& en) {
    static const std::map<std::string, std::string> lex = {
        {"color", "kolor"}, {"pet", "zwierze"}, {"drink", "napoj"}, {"job", "zawod"},
        {"hobby", "hobby"}, {"nationality", "narodowosc"},
        {"red", "czerwony"}, {"blue", "niebieski"}, {"green", "zielony"},
        {"yellow", "zolty"}, {"white", "bialy"}, {"black", "czarny"},
        {"cat", "kot"}, {"dog", "pies"}, {"bird", "ptak"}, {"fish", "ryba"},
        {"horse", "kon"}, {"rabbit", "krolik"},
        {"tea", "herbata"}, {"coffee", "kawa"}, {"milk", "mleko"}, {"juice", "sok"},
        {"water", "woda"}, {"cocoa", "kakao"},
        {"baker", "piekarz"}, {"doctor", "lekarz"}, {"teacher", "nauczyciel"},
        {"pilot", "pilot"}, {"lawyer", "prawnik"}, {"farmer", "rolnik"},
        {"chess", "szachy"}, {"tennis", "tenis"}, {"cycling", "kolarstwo"},
        {"reading", "czytanie"}, {"sailing", "zeglarstwo"}, {"painting", "malarstwo"},
        {"pole", "polak"}, {"german", "niemiec"}, {"swede", "szwed"}, {"dane", "dunczyk"},
        {"brit", "anglik"}, {"norwegian", "norweg"},
    };
    auto it = lex.find(en);
    return it == lex.end() ? en : it->second;
}

}  // namespace detail

// Display word for an attribute or value of the built-in vocabulary.
inline std::string lexicon_word(const std::string& en, Language lang) {
    return lang == Language::pl ? detail::pl_word(en) : en;
}

// Template pack file: `key = value` lines, `#` comments. Missing keys fall
// back to the built-in pack for the language.
inline EinsteinTemplates load_einstein_templates(std::istream& in, Language lang) {
    EinsteinTemplates tpl = detail::builtin_einstein_templates(lang);
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("template line is not 'key = value': " + t);
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key == "intro") tpl.intro = value;
        else if (key == "attr_line") tpl.attr_line = value;
        else if (key == "clue_header") tpl.clue_header = value;
        else if (key == "same_entity") tpl.same_entity = value;
        else if (key == "at_position") tpl.at_position = value;
        else if (key == "adjacent") tpl.adjacent = value;
        else if (key == "left_of") tpl.left_of = value;
        else if (key == "negation") tpl.negation = value;
        else if (key == "disjunction") tpl.disjunction = value;
        else throw std::invalid_argument("unknown template key: " + key);
    }
    return tpl;
}

inline std::string render_clue(const Clue& c, Language lang,
                               const EinsteinTemplates* tpl = nullptr) {
    const EinsteinTemplates& t = tpl ? *tpl : detail::builtin_einstein_templates(lang);
    std::string out;
    switch (c.kind) {
        case ClueKind::AtPosition:
            out = t.at_position;
            replace_all(out, "{pos}", std::to_string(c.position));
            replace_all(out, "{attr}", lexicon_word(c.attr_a, lang));
            replace_all(out, "{val}", lexicon_word(c.val_a, lang));
            return out;
        case ClueKind::Negation: {
            out = t.negation;
            replace_all(out, "{inner}", render_clue(c.children[0], lang, tpl));
            return out;
        }
        case ClueKind::Disjunction: {
            out = t.disjunction;
            replace_all(out, "{a}", render_clue(c.children[0], lang, tpl));
            replace_all(out, "{b}", render_clue(c.children[1], lang, tpl));
            return out;
        }
        default: {
            out = c.kind == ClueKind::SameEntity ? t.same_entity
                  : c.kind == ClueKind::Adjacent ? t.adjacent
                                                 : t.left_of;
            replace_all(out, "{a_attr}", lexicon_word(c.attr_a, lang));
            replace_all(out, "{a_val}", lexicon_word(c.val_a, lang));
            replace_all(out, "{b_attr}", lexicon_word(c.attr_b, lang));
            replace_all(out, "{b_val}", lexicon_word(c.val_b, lang));
            return out;
        }
    }
}

// Deterministic statement text: intro, attribute lines, numbered clues.
inline std::string render_einstein_ascii(const EinsteinPuzzle& p, Language lang,
                                         const EinsteinTemplates* tpl = nullptr) {
    const EinsteinTemplates& t = tpl ? *tpl : detail::builtin_einstein_templates(lang);
    std::string out = t.intro;
    replace_all(out, "{n}", std::to_string(p.n_entities));
    out += '\n';
    for (const auto& [attr, vals] : p.attributes) {
        std::string line = t.attr_line;
        replace_all(line, "{attr}", lexicon_word(attr, lang));
        std::string vs;
        for (std::size_t i = 0; i < vals.size(); ++i) {
            if (i) vs += ", ";
            vs += lexicon_word(vals[i], lang);
        }
        replace_all(line, "{values}", vs);
        out += line;
        out += '\n';
    }
    out += t.clue_header;
    out += '\n';
    for (std::size_t i = 0; i < p.clues.size(); ++i) {
        out += "  " + std::to_string(i + 1) + ". " + render_clue(p.clues[i], lang, tpl) + "\n";
    }
    return out;
}

// --- mutation ---------------------------------------------------------------

struct EinsteinMutation {
    EinsteinPuzzle puzzle;
    Clue new_clue;
    std::size_t replaced_index = 0;
};

// Replaces one clue so that the puzzle stays unique-solution with a different
// hidden assignment.
inline EinsteinMutation mutate_einstein(const EinsteinPuzzle& p, std::uint64_t seed) {
    auto orig = solve_einstein(p, 2);
    if (orig.assignments.size() != 1)
        throw std::invalid_argument("mutation requires a unique-solution puzzle");
    const Assignment& original = orig.assignments[0];

    Rng rng(Rng::mix(seed, 0x6d75746174656569ull));
    std::vector<std::size_t> idxs(p.clues.size());
    for (std::size_t i = 0; i < idxs.size(); ++i) idxs[i] = i;
    rng.shuffle(idxs);

    int budget = 400;
    for (std::size_t idx : idxs) {
        const Clue& c = p.clues[idx];
        std::vector<Clue> candidates;
        auto push = [&](Clue cand) {
            cand.redundant = false;
            if (!cand.same_content(c)) candidates.push_back(std::move(cand));
        };
        if (c.kind == ClueKind::AtPosition) {
            for (int pos = 1; pos <= p.n_entities; ++pos) {
                if (pos == c.position) continue;
                Clue cand = c;
                cand.position = pos;
                push(std::move(cand));
            }
        } else if (c.kind == ClueKind::SameEntity || c.kind == ClueKind::Adjacent ||
                   c.kind == ClueKind::LeftOf) {
            for (const auto& [attr, vals] : p.attributes) {
                if (attr != c.attr_b) continue;
                for (const auto& v : vals) {
                    if (v == c.val_b) continue;
                    Clue cand = c;
                    cand.val_b = v;
                    push(std::move(cand));
                }
            }
        }
        // Fallback shape: pin some cell of the first referenced attribute.
        const std::string& fa = c.children.empty() ? c.attr_a : c.children[0].attr_a;
        const std::string& fv = c.children.empty() ? c.val_a : c.children[0].val_a;
        for (int pos = 1; pos <= p.n_entities; ++pos)
            push(Clue{ClueKind::AtPosition, fa, fv, "", "", pos, {}, false});

        rng.shuffle(candidates);
        for (const auto& cand : candidates) {
            if (--budget < 0) throw MutationFailure("mutation retry budget exhausted");
            EinsteinPuzzle mutated = p;
            mutated.clues[idx] = cand;
            for (auto& mc : mutated.clues) mc.redundant = false;
            auto sols = solve_einstein(mutated, 2);
            if (sols.assignments.size() == 1 && !(sols.assignments[0] == original)) {
                return EinsteinMutation{std::move(mutated), cand, idx};
            }
        }
    }
    throw MutationFailure("no admissible mutation found");
}

inline std::string render_einstein_mutation_note(const EinsteinMutation& m, Language lang) {
    std::string sentence = render_clue(m.new_clue, lang);
    if (lang == Language::pl)
        return "Poprawka: wskazowka " + std::to_string(m.replaced_index + 1) +
               " byla bledna. Poprawna wskazowka brzmi: " + sentence;
    return "Correction: clue " + std::to_string(m.replaced_index + 1) +
           " was wrong. The correct clue is: " + sentence;
}

}  // namespace logos::puzzle
