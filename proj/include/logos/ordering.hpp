#pragma once

// Queue/lineup puzzles: people in a line under positional and relative
// constraints. Solved by filtering all |people|! permutations, which is also
// the verification oracle for generated instances.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "logos/einstein.hpp"  // SizeLimit, GenerationFailure, MutationFailure
#include "logos/text.hpp"

namespace logos::puzzle {

inline constexpr int kMaxPeople = 8;

enum class OrderingConstraintKind { NotAtPosition, Before, AdjacentTo };

struct OrderingConstraint {
    OrderingConstraintKind kind = OrderingConstraintKind::NotAtPosition;
    std::string a;
    std::string b;        // Before / AdjacentTo
    int position = 0;     // 1-based; NotAtPosition

    bool operator==(const OrderingConstraint&) const = default;
};

struct OrderingPuzzle {
    std::vector<std::string> people;
    std::vector<OrderingConstraint> constraints;
    // Cached by the generator; always equal to solve_ordering(*this).
    std::vector<std::vector<std::string>> solutions;
};

inline bool ordering_constraint_holds(const OrderingConstraint& c,
                                      const std::vector<std::string>& perm) {
    auto index_of = [&](const std::string& name) {
        auto it = std::find(perm.begin(), perm.end(), name);
        if (it == perm.end()) throw std::invalid_argument("constraint names unknown person: " + name);
        return static_cast<int>(it - perm.begin());
    };
    switch (c.kind) {
        case OrderingConstraintKind::NotAtPosition:
            if (c.position < 1 || c.position > static_cast<int>(perm.size()))
                throw std::invalid_argument("constraint position out of range");
            return perm[static_cast<std::size_t>(c.position - 1)] != c.a;
        case OrderingConstraintKind::Before: return index_of(c.a) < index_of(c.b);
        default: {
            int d = index_of(c.a) - index_of(c.b);
            return d == 1 || d == -1;
        }
    }
}

// All valid orders, lexicographically sorted.
inline std::vector<std::vector<std::string>> solve_ordering(const OrderingPuzzle& p) {
    if (p.people.empty() || p.people.size() > kMaxPeople)
        throw SizeLimit("people count must be in 1.." + std::to_string(kMaxPeople));
    std::vector<std::string> names = p.people;
    std::sort(names.begin(), names.end());
    if (std::adjacent_find(names.begin(), names.end()) != names.end())
        throw std::invalid_argument("duplicate person names");
    std::vector<std::vector<std::string>> out;
    do {
        bool ok = true;
        for (const auto& c : p.constraints) {
            if (!ordering_constraint_holds(c, names)) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(names);
    } while (std::next_permutation(names.begin(), names.end()));
    return out;
}

namespace detail {

inline const std::vector<std::string>& ordering_name_pool() {
    static const std::vector<std::string> names = {"Adam",  "Betty", "Celine", "David",
                                                   "Ewa",   "Frank", "Greta",  "Henry"};
    return names;
}

inline std::string ordinal(int pos, Language lang) {
    static const char* en[] = {"first", "second", "third", "fourth",
                               "fifth", "sixth",  "seventh", "eighth"};
    static const char* pl[] = {"pierwsza", "druga", "trzecia", "czwarta",
                               "piata",    "szosta", "siodma",  "osma"};
    return (lang == Language::pl ? pl : en)[pos - 1];
}

}  // namespace detail

inline std::string render_ordering_constraint(const OrderingConstraint& c, Language lang) {
    if (lang == Language::pl) {
        switch (c.kind) {
            case OrderingConstraintKind::NotAtPosition:
                return c.a + " nie stoi na pozycji " + std::to_string(c.position) + " (" +
                       detail::ordinal(c.position, lang) + " od poczatku)";
            case OrderingConstraintKind::Before:
                return c.a + " stoi gdzies przed osoba " + c.b;
            default: return c.a + " stoi tuz obok osoby " + c.b;
        }
    }
    switch (c.kind) {
        case OrderingConstraintKind::NotAtPosition:
            return c.a + " is not " + detail::ordinal(c.position, lang) + " in the line";
        case OrderingConstraintKind::Before:
            return c.a + " is somewhere before " + c.b;
        default: return c.a + " is directly next to " + c.b;
    }
}

inline std::string render_ordering(const OrderingPuzzle& p, Language lang) {
    std::string names;
    for (std::size_t i = 0; i < p.people.size(); ++i) {
        if (i + 1 == p.people.size() && i > 0)
            names += lang == Language::pl ? " i " : " and ";
        else if (i > 0)
            names += ", ";
        names += p.people[i];
    }
    std::string out;
    if (lang == Language::pl) {
        out = names + " stoja w jednej kolejce (pozycja 1 to poczatek).\n";
        for (const auto& c : p.constraints)
            out += "  - " + render_ordering_constraint(c, lang) + ".\n";
    } else {
        out = names + " are standing in a line (position 1 is the front).\n";
        for (const auto& c : p.constraints)
            out += "  - " + render_ordering_constraint(c, lang) + ".\n";
    }
    return out;
}

// Deterministic puzzle with between min_solutions and max_solutions valid
// orders. Constraints are drawn until the solution count lands in range.
inline OrderingPuzzle generate_ordering(std::uint64_t seed, int n_people, int min_solutions = 1,
                                        int max_solutions = 3) {
    if (n_people < 2 || n_people > kMaxPeople)
        throw SizeLimit("n_people must be in 2.." + std::to_string(kMaxPeople));
    constexpr int kReseedBudget = 64;
    for (int reseed = 0; reseed < kReseedBudget; ++reseed) {
        Rng rng(Rng::mix(seed + static_cast<std::uint64_t>(reseed), 0x6f7264657267656eull));
        OrderingPuzzle p;
        const auto& pool = detail::ordering_name_pool();
        p.people.assign(pool.begin(), pool.begin() + n_people);

        // Hidden target order; constraints are drawn true of it so the
        // instance is never contradictory.
        std::vector<std::string> target = p.people;
        rng.shuffle(target);

        auto solution_count_ok = [&](std::size_t n) {
            return n >= static_cast<std::size_t>(min_solutions) &&
                   n <= static_cast<std::size_t>(max_solutions);
        };
        for (int attempts = 0; attempts < 24; ++attempts) {
            OrderingConstraint c;
            int kind = rng.range(0, 2);
            if (kind == 0) {
                c.kind = OrderingConstraintKind::NotAtPosition;
                c.a = rng.pick(p.people);
                // A position the person does not occupy in the target order.
                std::vector<int> wrong;
                for (int pos = 1; pos <= n_people; ++pos)
                    if (target[static_cast<std::size_t>(pos - 1)] != c.a) wrong.push_back(pos);
                c.position = wrong[rng.below(wrong.size())];
            } else {
                std::size_t i = rng.below(target.size()), j = rng.below(target.size());
                if (i == j) continue;
                if (kind == 1) {
                    c.kind = OrderingConstraintKind::Before;
                    c.a = target[std::min(i, j)];
                    c.b = target[std::max(i, j)];
                } else {
                    if (std::max(i, j) - std::min(i, j) != 1) continue;
                    c.kind = OrderingConstraintKind::AdjacentTo;
                    c.a = target[i];
                    c.b = target[j];
                }
            }
            if (std::find(p.constraints.begin(), p.constraints.end(), c) != p.constraints.end())
                continue;
            p.constraints.push_back(c);
            auto sols = solve_ordering(p);
            if (solution_count_ok(sols.size())) {
                p.solutions = std::move(sols);
                return p;
            }
            if (sols.empty()) p.constraints.pop_back();  // cannot happen for true constraints
        }
    }
    throw GenerationFailure("could not generate an ordering puzzle for seed " +
                            std::to_string(seed));
}

struct OrderingMutation {
    OrderingPuzzle puzzle;
    OrderingConstraint new_constraint;
    bool replaced = false;          // false: constraint was added
    std::size_t replaced_index = 0;
};

// Replaces or adds one constraint; the mutated puzzle stays solvable and its
// solution set differs from the original.
inline OrderingMutation mutate_ordering(const OrderingPuzzle& p, std::uint64_t seed) {
    auto original = solve_ordering(p);
    if (original.empty()) throw std::invalid_argument("mutation requires a solvable puzzle");

    Rng rng(Rng::mix(seed, 0x6d75746f72646572ull));
    int n = static_cast<int>(p.people.size());

    std::vector<OrderingMutation> candidates;
    for (std::size_t i = 0; i < p.constraints.size(); ++i) {
        const auto& c = p.constraints[i];
        if (c.kind == OrderingConstraintKind::NotAtPosition) {
            for (int pos = 1; pos <= n; ++pos) {
                if (pos == c.position) continue;
                OrderingMutation m;
                m.new_constraint = c;
                m.new_constraint.position = pos;
                m.replaced = true;
                m.replaced_index = i;
                candidates.push_back(std::move(m));
            }
        } else if (c.kind == OrderingConstraintKind::Before) {
            OrderingMutation m;
            m.new_constraint = OrderingConstraint{OrderingConstraintKind::Before, c.b, c.a, 0};
            m.replaced = true;
            m.replaced_index = i;
            candidates.push_back(std::move(m));
        }
    }
    for (const auto& person : p.people) {
        for (int pos = 1; pos <= n; ++pos) {
            OrderingMutation m;
            m.new_constraint =
                OrderingConstraint{OrderingConstraintKind::NotAtPosition, person, "", pos};
            m.replaced = false;
            candidates.push_back(std::move(m));
        }
    }
    rng.shuffle(candidates);

    for (auto& m : candidates) {
        OrderingPuzzle mutated = p;
        if (m.replaced)
            mutated.constraints[m.replaced_index] = m.new_constraint;
        else {
            if (std::find(mutated.constraints.begin(), mutated.constraints.end(),
                          m.new_constraint) != mutated.constraints.end())
                continue;
            mutated.constraints.push_back(m.new_constraint);
        }
        auto sols = solve_ordering(mutated);
        if (!sols.empty() && sols != original) {
            mutated.solutions = std::move(sols);
            m.puzzle = std::move(mutated);
            return m;
        }
    }
    throw MutationFailure("no admissible ordering mutation found");
}

inline std::string render_ordering_mutation_note(const OrderingMutation& m, Language lang) {
    std::string sentence = render_ordering_constraint(m.new_constraint, lang);
    if (lang == Language::pl) {
        return m.replaced ? "Poprawka: w rzeczywistosci " + sentence + "."
                          : "Poprawka: dodatkowo " + sentence + ".";
    }
    return m.replaced ? "Correction: actually, " + sentence + "."
                      : "Correction: additionally, " + sentence + ".";
}

}  // namespace logos::puzzle
