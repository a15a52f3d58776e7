#pragma once

// Starter task bank: the seven classic authored tasks, an authored
// non-classical-logic bank, and seeded generators for every deterministic
// taxonomy backed by an exact solver. Polish is the canonical language; an
// English mirror shares each task id with a language suffix.
//
// Every generated task is reproducible: its source records the task seed and
// generator parameters, and regenerate_golds() re-runs the same generator and
// solver to re-derive the per-turn gold answers.

#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "logos/clock.hpp"
#include "logos/einstein.hpp"
#include "logos/formula.hpp"
#include "logos/ordering.hpp"
#include "logos/predicate.hpp"
#include "logos/taskset.hpp"
#include "logos/text.hpp"

namespace logos::taskgen {

using task::GoldAnswer;
using task::Task;
using task::TaskSet;
using task::Taxonomy;

struct GenOptions {
    std::uint64_t seed = 1;
    int per_taxonomy = 12;  // generated tasks per deterministic taxonomy
    std::vector<Language> languages = {Language::pl, Language::en};
};

namespace detail {

inline std::uint64_t task_seed(std::uint64_t bank_seed, std::string_view slug, int index) {
    return Rng::mix(bank_seed, fnv1a(slug) ^ static_cast<std::uint64_t>(index) * 0x9e3779b9ull);
}

inline Task base_task(std::string slug, int index, Language lang, Taxonomy tax,
                      Difficulty diff, std::uint64_t tseed, const char* generator) {
    Task t;
    char num[8];
    std::snprintf(num, sizeof(num), "%04d", index);
    t.id = slug + "-" + num + "." + std::string(language_name(lang));
    t.taxonomy = tax;
    t.language = lang;
    t.difficulty = diff;
    t.source.kind = task::Source::Kind::generated;
    t.source.seed = tseed;
    t.source.params = {{"generator", generator}, {"index", index}};
    return t;
}

// --- random propositional formulas -----------------------------------------

inline logic::PropFormula random_prop(Rng& rng, const std::vector<std::string>& atoms,
                                      int depth) {
    using F = logic::PropFormula;
    if (depth <= 0 || rng.chance(1, 5)) return F::atom(rng.pick(atoms));
    switch (rng.below(5)) {
        case 0: return F::negation(random_prop(rng, atoms, depth - 1));
        case 1:
            return F::conjunction(random_prop(rng, atoms, depth - 1),
                                  random_prop(rng, atoms, depth - 1));
        case 2:
            return F::disjunction(random_prop(rng, atoms, depth - 1),
                                  random_prop(rng, atoms, depth - 1));
        case 3:
            return F::implication(random_prop(rng, atoms, depth - 1),
                                  random_prop(rng, atoms, depth - 1));
        default:
            return F::equivalence(random_prop(rng, atoms, depth - 1),
                                  random_prop(rng, atoms, depth - 1));
    }
}

inline logic::PropFormula random_literal(Rng& rng, const std::vector<std::string>& atoms) {
    auto a = logic::PropFormula::atom(rng.pick(atoms));
    return rng.chance(1, 2) ? logic::PropFormula::negation(a) : a;
}

// --- per-taxonomy generators -------------------------------------------------

// Taxonomy 5: tautology yes/no and entailed-literal questions.
inline Task make_prop_task(std::uint64_t tseed, int index, Language lang) {
    using F = logic::PropFormula;
    Rng rng(tseed);
    std::vector<std::string> atoms = {"p", "q", "r"};
    if (index % 2 == 0) {
        // Tautology question; even subindices instantiate a valid schema,
        // odd draws keep sampling until a non-tautology shows up.
        bool want_taut = index % 4 == 0;
        F f = F::atom("p");
        if (want_taut) {
            F a = random_prop(rng, atoms, 2);
            switch (rng.below(3)) {
                case 0: f = F::disjunction(a, F::negation(a)); break;
                case 1: f = F::implication(a, a); break;
                default: {
                    F b = random_prop(rng, atoms, 2);
                    f = F::disjunction(F::implication(a, b), F::implication(b, a));
                    break;
                }
            }
        } else {
            do {
                f = random_prop(rng, atoms, 3);
            } while (logic::is_tautology(f));
        }
        bool taut = logic::is_tautology(f);
        std::string text = logic::render_ascii(f);
        Task t = base_task("prop-taut", index, lang, Taxonomy::classical_propositional_logic,
                           index % 4 == 0 ? Difficulty::easy : Difficulty::medium, tseed, "prop");
        task::Turn turn;
        turn.prompt = lang == Language::pl
                          ? "Czy formula rachunku zdan " + text +
                                " jest tautologia logiki klasycznej? Odpowiedz tak lub nie."
                          : "Is the propositional formula " + text +
                                " a tautology of classical logic? Answer yes or no.";
        turn.gold = GoldAnswer::boolean(taut);
        t.turns.push_back(std::move(turn));
        return t;
    }
    // Entailed literals from a satisfiable premise set anchored by one unit.
    std::vector<F> premises;
    std::map<std::string, bool> hidden;
    for (const auto& a : atoms) hidden[a] = rng.chance(1, 2);
    auto true_literal = [&](const std::string& atom_name) {
        auto a = F::atom(atom_name);
        return hidden[atom_name] ? a : F::negation(a);
    };
    premises.push_back(true_literal(rng.pick(atoms)));
    for (int i = 0; i < 2; ++i) {
        std::string a1 = rng.pick(atoms), a2 = rng.pick(atoms);
        F lit1 = rng.chance(1, 2) ? true_literal(a1) : random_literal(rng, atoms);
        F lit2 = true_literal(a2);
        // At least one disjunct true under the hidden valuation.
        premises.push_back(rng.chance(1, 2) ? F::disjunction(lit1, lit2)
                                            : F::disjunction(lit2, lit1));
    }
    auto lits = logic::entailed_literals(premises);
    std::vector<std::string> gold_texts;
    for (const auto& l : lits) gold_texts.push_back(l.render());
    std::string stmts;
    for (std::size_t i = 0; i < premises.size(); ++i) {
        if (i) stmts += "; ";
        stmts += logic::render_ascii(premises[i]);
    }
    Task t = base_task("prop-ent", index, lang, Taxonomy::classical_propositional_logic,
                       Difficulty::medium, tseed, "prop");
    task::Turn turn;
    turn.prompt =
        lang == Language::pl
            ? "Rozwaz nastepujace zdania: " + stmts +
                  ".\nKtore literaly (zmienna, np. p, lub zanegowana zmienna, np. !p) wynikaja "
                  "logicznie ze wszystkich zdan lacznie?\nWymien wszystkie takie literaly."
            : "Consider the statements: " + stmts +
                  ".\nWhich literals (an atom like p, or a negated atom like !p) follow "
                  "logically from all of the statements taken together?\nList every literal "
                  "that follows.";
    turn.gold = GoldAnswer::literal_set(gold_texts, true);
    t.turns.push_back(std::move(turn));
    return t;
}

// Taxonomy 4: validity questions in the monadic fragment.
inline Task make_pred_task(std::uint64_t tseed, int index, Language lang) {
    using F = logic::PredFormula;
    Rng rng(tseed);
    std::vector<std::string> preds = {"P", "Q", "R"};
    rng.shuffle(preds);
    const std::string &A = preds[0], &B = preds[1];
    auto atom = [](const std::string& p) { return F::pred_atom(p, "x"); };

    F f = atom(A);
    bool want_valid = index % 2 == 0;
    if (want_valid) {
        switch (rng.below(4)) {
            case 0: f = F::implication(F::forall("x", atom(A)), F::exists("x", atom(A))); break;
            case 1:
                f = F::implication(
                    F::conjunction(F::forall("x", atom(A)), F::forall("x", atom(B))),
                    F::forall("x", F::conjunction(atom(A), atom(B))));
                break;
            case 2:
                f = F::implication(F::exists("x", F::conjunction(atom(A), atom(B))),
                                   F::exists("x", atom(A)));
                break;
            default:
                f = F::forall("x", F::disjunction(atom(A), F::negation(atom(A))));
                break;
        }
    } else {
        switch (rng.below(4)) {
            case 0: f = F::implication(F::exists("x", atom(A)), F::forall("x", atom(A))); break;
            case 1:
                f = F::implication(
                    F::conjunction(F::exists("x", atom(A)), F::exists("x", atom(B))),
                    F::exists("x", F::conjunction(atom(A), atom(B))));
                break;
            case 2:
                f = F::implication(F::forall("x", F::disjunction(atom(A), atom(B))),
                                   F::disjunction(F::forall("x", atom(A)),
                                                  F::forall("x", atom(B))));
                break;
            default: f = F::exists("x", atom(A)); break;
        }
    }
    bool valid = logic::is_valid_monadic(f);
    std::string text = logic::render_ascii(f);
    Task t = base_task("pred-valid", index, lang, Taxonomy::classical_predicate_logic,
                       want_valid ? Difficulty::easy : Difficulty::medium, tseed, "pred");
    task::Turn turn;
    turn.prompt =
        lang == Language::pl
            ? "Czy zdanie " + text +
                  " jest prawda logiczna klasycznego rachunku predykatow (prawdziwa w kazdej "
                  "niepustej dziedzinie)? Odpowiedz tak lub nie."
            : "Is the statement " + text +
                  " a logical truth of classical predicate logic (true in every non-empty "
                  "domain)? Answer yes or no.";
    turn.gold = GoldAnswer::boolean(valid);
    t.turns.push_back(std::move(turn));
    return t;
}

// Taxonomy 7: Einstein riddles with a single-cell question.
inline Task make_einstein_task(std::uint64_t tseed, int index, Language lang) {
    int n = 3 + (index % 2);
    int a = 3;
    Difficulty diff = index % 3 == 0   ? Difficulty::easy
                      : index % 3 == 1 ? Difficulty::medium
                                       : Difficulty::hard;
    puzzle::EinsteinPuzzle p = puzzle::generate_einstein(tseed, n, a, diff);
    auto sol = puzzle::solve_einstein(p);
    const puzzle::Assignment& assignment = sol.assignments.at(0);

    Rng rng(Rng::mix(tseed, 0x71756572ull));
    int qa = static_cast<int>(rng.below(static_cast<std::uint64_t>(a)));
    int qv = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    const std::string& attr = p.attributes[static_cast<std::size_t>(qa)].first;
    const std::string& val = p.attributes[static_cast<std::size_t>(qa)].second[static_cast<std::size_t>(qv)];
    int pos = assignment.at(attr, val);

    Task t = base_task("einstein", index, lang,
                       Taxonomy::deductive_reasoning_einstein_riddles, diff, tseed, "einstein");
    task::Turn turn;
    std::string statement = puzzle::render_einstein_ascii(p, lang);
    turn.prompt =
        lang == Language::pl
            ? statement + "Pytanie: na ktorej pozycji (od 1 do " + std::to_string(n) +
                  ") stoi dom, ktorego " + puzzle::lexicon_word(attr, lang) + " to " +
                  puzzle::lexicon_word(val, lang) + "? Odpowiedz numerem pozycji."
            : statement + "Question: at which position (1 to " + std::to_string(n) +
                  ") is the house whose " + attr + " is " + val +
                  "? Answer with the position number.";
    turn.gold = GoldAnswer::literal(std::to_string(pos));
    t.turns.push_back(std::move(turn));
    return t;
}

// Taxonomy 8: lineups (some multi-turn) alternating with clock riddles.
inline Task make_deductive_other_task(std::uint64_t tseed, int index, Language lang) {
    if (index % 2 == 1) {
        puzzle::ClockPuzzle p = puzzle::generate_clock(tseed, 2 + index % 3);
        Task t = base_task("clock", index, lang, Taxonomy::deductive_reasoning_others,
                           index % 3 == 2 ? Difficulty::medium : Difficulty::easy, tseed,
                           "deductive_other");
        task::Turn turn;
        turn.prompt = puzzle::render_clock(p, lang);
        turn.gold = GoldAnswer::time_value(p.answer, p.ampm_fixed);
        t.turns.push_back(std::move(turn));
        return t;
    }
    puzzle::OrderingPuzzle p = puzzle::generate_ordering(tseed, 3 + (index / 2) % 2);
    Task t = base_task("lineup", index, lang, Taxonomy::deductive_reasoning_others,
                       index % 4 == 0 ? Difficulty::easy : Difficulty::medium, tseed,
                       "deductive_other");
    task::Turn turn;
    turn.prompt = render_ordering(p, lang) +
                  (lang == Language::pl
                       ? "Jakie sa mozliwe ustawienia, od pierwszej osoby do ostatniej? Wymien "
                         "wszystkie mozliwe ustawienia."
                       : "What are the possible orders, from first to last? List every "
                         "possible order.");
    turn.gold = GoldAnswer::permutation_set(p.solutions, true);
    t.turns.push_back(std::move(turn));

    if (index % 4 == 2) {
        // Belief-revision turn: one constraint changes, the answer must too.
        auto mutation = puzzle::mutate_ordering(p, Rng::mix(tseed, 0x7475726e32ull));
        task::Turn turn2;
        std::string note = puzzle::render_ordering_mutation_note(mutation, lang);
        turn2.mutation_note = note;
        turn2.prompt = note + (lang == Language::pl
                                   ? " Jakie sa teraz mozliwe ustawienia? Wymien wszystkie."
                                   : " What are the possible orders now? List every possible "
                                     "order.");
        turn2.gold = GoldAnswer::permutation_set(mutation.puzzle.solutions, true);
        t.turns.push_back(std::move(turn2));
    }
    return t;
}

// Taxonomy 6: the same deduction content, stated through an ASCII diagram.
inline Task make_ascii_task(std::uint64_t tseed, int index, Language lang) {
    puzzle::OrderingPuzzle p = puzzle::generate_ordering(tseed, 3 + index % 2);
    int n = static_cast<int>(p.people.size());

    std::string diagram = lang == Language::pl ? "Kolejka widziana z przodu:\n\n  przod -> "
                                               : "A queue seen from the front:\n\n  front -> ";
    for (int i = 1; i <= n; ++i) diagram += "[ " + std::to_string(i) + " ]";
    diagram += lang == Language::pl ? " <- tyl\n\n" : " <- back\n\n";
    diagram += lang == Language::pl ? "Osoby: " : "People: ";
    for (std::size_t i = 0; i < p.people.size(); ++i) {
        if (i) diagram += ", ";
        diagram += p.people[i];
    }
    diagram += lang == Language::pl ? "\nFakty:\n" : "\nFacts:\n";
    std::size_t width = 0;
    for (const auto& c : p.constraints) width = std::max(width, c.a.size());
    for (const auto& c : p.constraints) {
        std::string fact;
        switch (c.kind) {
            case puzzle::OrderingConstraintKind::NotAtPosition:
                fact = lang == Language::pl ? "nie na pozycji " + std::to_string(c.position)
                                            : "not at position " + std::to_string(c.position);
                break;
            case puzzle::OrderingConstraintKind::Before:
                fact = lang == Language::pl ? "gdzies przed: " + c.b
                                            : "somewhere before: " + c.b;
                break;
            default:
                fact = lang == Language::pl ? "tuz obok: " + c.b : "directly next to: " + c.b;
                break;
        }
        diagram += "  " + c.a + std::string(width - c.a.size(), ' ') + " | " + fact + "\n";
    }
    diagram += lang == Language::pl
                   ? "\nWymien wszystkie mozliwe ustawienia od pozycji 1 do pozycji " +
                         std::to_string(n) + "."
                   : "\nList every possible order from position 1 to position " +
                         std::to_string(n) + ".";

    Task t = base_task("ascii-queue", index, lang, Taxonomy::deductive_reasoning_ascii,
                       index % 2 == 0 ? Difficulty::easy : Difficulty::medium, tseed, "ascii");
    task::Turn turn;
    turn.prompt = diagram;
    turn.gold = GoldAnswer::permutation_set(p.solutions, true);
    t.turns.push_back(std::move(turn));
    return t;
}

// Taxonomy 9: is the statement set jointly unsatisfiable?
inline Task make_contradiction_task(std::uint64_t tseed, int index, Language lang) {
    using F = logic::PropFormula;
    Rng rng(tseed);
    std::vector<std::string> atoms = {"p", "q", "r"};
    std::map<std::string, bool> hidden;
    for (const auto& a : atoms) hidden[a] = rng.chance(1, 2);
    auto true_literal = [&](const std::string& atom_name) {
        auto a = F::atom(atom_name);
        return hidden[atom_name] ? a : F::negation(a);
    };
    std::vector<F> premises;
    premises.push_back(true_literal(atoms[0]));
    premises.push_back(F::disjunction(true_literal(rng.pick(atoms)), random_literal(rng, atoms)));
    premises.push_back(F::implication(random_literal(rng, atoms), true_literal(rng.pick(atoms))));
    bool contradictory = index % 2 == 1;
    if (contradictory) premises.push_back(F::negation(premises[static_cast<std::size_t>(
        rng.below(premises.size()))]));
    // The label is re-derived by the oracle, never assumed.
    bool unsat = !logic::is_satisfiable(premises);

    std::string stmts;
    for (std::size_t i = 0; i < premises.size(); ++i) {
        if (i) stmts += "; ";
        stmts += logic::render_ascii(premises[i]);
    }
    Task t = base_task("contradict", index, lang, Taxonomy::detecting_contradictions,
                       contradictory ? Difficulty::medium : Difficulty::easy, tseed,
                       "contradiction");
    task::Turn turn;
    turn.prompt =
        lang == Language::pl
            ? "Przyjmij nastepujace zdania o zmiennych zdaniowych: " + stmts +
                  ".\nCzy te zdania, wziete lacznie, sa ze soba sprzeczne (czy nie istnieje "
                  "wartosciowanie spelniajace wszystkie naraz)? Odpowiedz tak lub nie."
            : "Assume the following statements about propositional variables: " + stmts +
                  ".\nTaken together, do these statements contradict each other (is there no "
                  "valuation satisfying all of them at once)? Answer yes or no.";
    turn.gold = GoldAnswer::boolean(unsat);
    t.turns.push_back(std::move(turn));
    return t;
}

// Taxonomy 14: urn draws with exact rational answers.
inline Task make_probability_task(std::uint64_t tseed, int index, Language lang) {
    Rng rng(tseed);
    int red = 2 + static_cast<int>(rng.below(4));   // 2..5
    int blue = 2 + static_cast<int>(rng.below(4));  // 2..5
    bool both_red = index % 2 == 0;
    long total = red + blue;
    long num = both_red ? static_cast<long>(red) * (red - 1)
                        : static_cast<long>(blue) * (blue - 1);
    long den = total * (total - 1);
    long g = std::gcd(num, den);
    num /= g;
    den /= g;
    std::string fraction =
        num == 0 ? "0" : std::to_string(num) + "/" + std::to_string(den);

    Task t = base_task("urn", index, lang, Taxonomy::probability_estimation,
                       Difficulty::easy, tseed, "probability");
    task::Turn turn;
    std::string color_en = both_red ? "red" : "blue";
    std::string color_pl = both_red ? "czerwone" : "niebieskie";
    turn.prompt =
        lang == Language::pl
            ? "W urnie znajduje sie " + std::to_string(red) + " czerwonych kul i " +
                  std::to_string(blue) +
                  " niebieskich kul. Losujesz dwie kule bez zwracania. Jakie jest "
                  "prawdopodobienstwo, ze obie wylosowane kule sa " +
                  color_pl + "? Podaj odpowiedz jako ulamek nieskracalny, np. 3/10."
            : "An urn contains " + std::to_string(red) + " red balls and " +
                  std::to_string(blue) +
                  " blue balls. You draw two balls at random, without replacement. What is "
                  "the probability that both drawn balls are " +
                  color_en + "? Give the answer as a fraction in lowest terms, like 3/10.";
    turn.gold = GoldAnswer::literal(fraction);
    t.turns.push_back(std::move(turn));
    return t;
}

// --- authored banks -----------------------------------------------------------

struct NonClassicalItem {
    const char* en;
    const char* pl;
    bool valid;
};

// Textbook facts about K, T, S4, S5 and intuitionistic logic; gold answers
// are fixed by the systems' standard semantics.
inline const std::vector<NonClassicalItem>& non_classical_bank() {
    static const std::vector<NonClassicalItem> bank = {
        {"In the modal logic K, is the formula []p -> p valid in every Kripke frame? "
         "Answer yes or no.",
         "Czy w logice modalnej K formula []p -> p jest prawdziwa w kazdej strukturze "
         "Kripkego? Odpowiedz tak lub nie.",
         false},
        {"In the modal logic T (reflexive frames), is the formula []p -> p valid? "
         "Answer yes or no.",
         "Czy w logice modalnej T (struktury zwrotne) formula []p -> p jest prawdziwa? "
         "Odpowiedz tak lub nie.",
         true},
        {"In the modal logic S4, is the formula []p -> [][]p valid? Answer yes or no.",
         "Czy w logice modalnej S4 formula []p -> [][]p jest prawdziwa? Odpowiedz tak lub nie.",
         true},
        {"In the modal logic K, is the formula [](p & q) -> []p valid in every Kripke "
         "frame? Answer yes or no.",
         "Czy w logice modalnej K formula [](p & q) -> []p jest prawdziwa w kazdej "
         "strukturze Kripkego? Odpowiedz tak lub nie.",
         true},
        {"In the modal logic S5, is the formula <>p -> []<>p valid? Answer yes or no.",
         "Czy w logice modalnej S5 formula <>p -> []<>p jest prawdziwa? Odpowiedz tak lub nie.",
         true},
        {"In the modal logic K, is the formula p -> []p valid in every Kripke frame? "
         "Answer yes or no.",
         "Czy w logice modalnej K formula p -> []p jest prawdziwa w kazdej strukturze "
         "Kripkego? Odpowiedz tak lub nie.",
         false},
        {"In intuitionistic propositional logic, is p | !p a theorem? Answer yes or no.",
         "Czy w intuicjonistycznej logice zdan p | !p jest twierdzeniem? Odpowiedz tak lub nie.",
         false},
        {"In intuitionistic propositional logic, is p -> !!p a theorem? Answer yes or no.",
         "Czy w intuicjonistycznej logice zdan p -> !!p jest twierdzeniem? Odpowiedz tak "
         "lub nie.",
         true},
        {"In intuitionistic propositional logic, is !!p -> p a theorem? Answer yes or no.",
         "Czy w intuicjonistycznej logice zdan !!p -> p jest twierdzeniem? Odpowiedz tak "
         "lub nie.",
         false},
        {"In intuitionistic propositional logic, is Peirce's formula ((p -> q) -> p) -> p "
         "a theorem? Answer yes or no.",
         "Czy w intuicjonistycznej logice zdan formula Peirce'a ((p -> q) -> p) -> p jest "
         "twierdzeniem? Odpowiedz tak lub nie.",
         false},
        {"In intuitionistic propositional logic, is (p & (p -> q)) -> q a theorem? "
         "Answer yes or no.",
         "Czy w intuicjonistycznej logice zdan (p & (p -> q)) -> q jest twierdzeniem? "
         "Odpowiedz tak lub nie.",
         true},
        {"In the modal logic K, is the formula ([]p & []q) -> [](p & q) valid in every "
         "Kripke frame? Answer yes or no.",
         "Czy w logice modalnej K formula ([]p & []q) -> [](p & q) jest prawdziwa w "
         "kazdej strukturze Kripkego? Odpowiedz tak lub nie.",
         true},
    };
    return bank;
}

inline Task make_non_classical_task(int index, Language lang) {
    const auto& bank = non_classical_bank();
    const NonClassicalItem& item = bank[static_cast<std::size_t>(index) % bank.size()];
    Task t;
    char num[8];
    std::snprintf(num, sizeof(num), "%04d", index);
    t.id = std::string("nonclassical-") + num + "." + std::string(language_name(lang));
    t.taxonomy = Taxonomy::non_classical_logics;
    t.language = lang;
    t.difficulty = index % 3 == 0 ? Difficulty::easy : Difficulty::medium;
    t.source.kind = task::Source::Kind::authored;
    t.source.author = "logos-bench";
    task::Turn turn;
    turn.prompt = lang == Language::pl ? item.pl : item.en;
    turn.gold = GoldAnswer::boolean(item.valid);
    t.turns.push_back(std::move(turn));
    return t;
}

inline Task authored(std::string id_base, Language lang, Taxonomy tax, Difficulty diff) {
    Task t;
    t.id = std::move(id_base) + "." + std::string(language_name(lang));
    t.taxonomy = tax;
    t.language = lang;
    t.difficulty = diff;
    t.source.kind = task::Source::Kind::authored;
    t.source.author = "logos-bench";
    return t;
}

// The classic seven tasks plus one authored belief-revision variant.
inline std::vector<Task> classic_tasks(Language lang) {
    bool pl = lang == Language::pl;
    std::vector<Task> out;

    {
        Task t = authored("classic-entailment", lang,
                          Taxonomy::classical_propositional_logic, Difficulty::medium);
        task::Turn turn;
        turn.prompt = pl ? "Co wynika logicznie ze zdan !p | !q, p oraz q | r?\nWymien "
                           "wszystkie literaly (zmienna, np. p, lub zanegowana zmienna, np. "
                           "!p), ktore wynikaja ze wszystkich trzech zdan lacznie."
                         : "What follows logically from the statements !p | !q, p, and q | "
                           "r?\nList every literal (an atom like p, or a negated atom like "
                           "!p) that follows from all three statements taken together.";
        turn.gold = GoldAnswer::literal_set({"p", "!q", "r"}, true);
        t.turns.push_back(std::move(turn));
        out.push_back(std::move(t));
    }
    {
        Task t = authored("classic-quantifier", lang, Taxonomy::classical_predicate_logic,
                          Difficulty::easy);
        task::Turn turn;
        turn.prompt = pl ? "Czy zdanie forall x. P(x) -> exists x. P(x) jest prawda logiczna? "
                           "Odpowiedz tak lub nie."
                         : "Is the statement forall x. P(x) -> exists x. P(x) a logical "
                           "truth? Answer yes or no.";
        turn.gold = GoldAnswer::boolean(true);
        t.turns.push_back(std::move(turn));
        out.push_back(std::move(t));
    }
    {
        Task t = authored("classic-coffee", lang, Taxonomy::abductive_reasoning,
                          Difficulty::easy);
        task::Turn turn;
        turn.prompt =
            pl ? "Rano widziales, jak kilkoro wspolpracownikow wchodzi do biurowej kuchni, "
                 "zeby zaparzyc kawe. Potem musiales wyjsc, zeby zalatwic sprawy dla szefa. "
                 "Godzine pozniej, idac korytarzem w pracy, mijasz osobe trzymajaca parujacy "
                 "kubek, z ktorego unosi sie mocny zapach swiezo zaparzonej kawy. Skad "
                 "najprawdopodobniej pochodzi ta kawa? Jaki wniosek sie nasuwa i jak pewny "
                 "jest ten wniosek?"
               : "In the morning you saw several coworkers go into the office kitchen to "
                 "brew coffee. You then had to leave to run errands for your boss. An hour "
                 "later, walking down the hallway at work, you pass someone holding a "
                 "steaming mug with the strong smell of freshly brewed coffee rising from "
                 "it. Where did this coffee most likely come from? What conclusion suggests "
                 "itself, and how certain is that conclusion?";
        t.turns.push_back(std::move(turn));
        task::JudgeRubric r;
        r.criteria =
            pl ? std::vector<std::string>{
                     "Wskazuje, ze kawa najprawdopodobniej zostala zaparzona w biurowej "
                     "kuchni przez wspolpracownikow",
                     "Przedstawia wniosek jako najlepsze dostepne wyjasnienie (wnioskowanie "
                     "abdukcyjne), a nie pewnik",
                     "Zaznacza, ze wniosek jest odwolywalny i moglby zostac obalony przez "
                     "nowe informacje"}
               : std::vector<std::string>{
                     "Identifies that the coffee was most likely brewed in the office "
                     "kitchen by the coworkers",
                     "Frames the conclusion as the best available explanation (abductive "
                     "inference), not a certainty",
                     "Notes the conclusion is defeasible and could be overturned by new "
                     "information"};
        r.score_guidance =
            pl ? "1 = spelnia kryterium 1 oraz przynajmniej jedno z kryteriow 2-3; 0.5 = "
                 "spelnia tylko kryterium 1 i traktuje wniosek jako pewny; 0 = nie wskazuje "
                 "wyjasnienia z kuchni."
               : "1 = meets criterion 1 and at least one of criteria 2-3; 0.5 = meets only "
                 "criterion 1 and treats the conclusion as certain; 0 = does not identify "
                 "the kitchen explanation.";
        t.rubric = std::move(r);
        out.push_back(std::move(t));
    }
    {
        Task t = authored("classic-observations", lang, Taxonomy::abductive_reasoning,
                          Difficulty::medium);
        task::Turn turn;
        turn.prompt =
            pl ? "Przyjmij, ze ponizsze obserwacje sa prawdziwe. Nie przyjmuj zadnych "
                 "dodatkowych zalozen o zaleznosciach miedzy wymienionymi zjawiskami.\n"
                 "Obserwacja 1: goraczka (A), kaszel (B), bol glowy (C) i zmeczenie (D) "
                 "wystepuja razem ze stanem zapalnym, odwodnieniem, odpowiedzia "
                 "immunologiczna i infekcja wirusowa.\n"
                 "Obserwacja 2: kaszel (B), bol glowy (C) i zmeczenie (D) wystepuja razem "
                 "ze stanem zapalnym, odwodnieniem i odpowiedzia immunologiczna.\n"
                 "Zgodnie z tymi zalozeniami, ktore ze zjawisk (A-D) jest przyczyna, "
                 "czescia przyczyny lub skutkiem infekcji wirusowej? Dlaczego?"
               : "Assume the following observations are true. Do not make any additional "
                 "assumptions about the relationships between the listed phenomena.\n"
                 "Observation 1: fever (A), cough (B), headache (C), and fatigue (D) occur "
                 "together with inflammation, dehydration, an immune response, and a viral "
                 "infection.\n"
                 "Observation 2: cough (B), headache (C), and fatigue (D) occur together "
                 "with inflammation, dehydration, and an immune response.\n"
                 "According to these assumptions, which of the listed phenomena (A-D) is a "
                 "cause, part of a cause, or an effect of the viral infection? Why?";
        t.turns.push_back(std::move(turn));
        task::JudgeRubric r;
        r.criteria =
            pl ? std::vector<std::string>{
                     "Wskazuje goraczke (A) jako zjawisko powiazane specyficznie z infekcja "
                     "wirusowa",
                     "Uzasadnia to roznica miedzy Obserwacja 1 a Obserwacja 2: A i infekcja "
                     "wirusowa znikaja razem",
                     "Nie wprowadza dodatkowych zalozen przyczynowych spoza obserwacji"}
               : std::vector<std::string>{
                     "Identifies fever (A) as the phenomenon linked specifically to the "
                     "viral infection",
                     "Justifies it by the difference between Observation 1 and Observation "
                     "2: A and the viral infection disappear together",
                     "Does not introduce causal assumptions beyond the observations"};
        r.score_guidance = pl ? "1 = spelnia kryteria 1 i 2; 0.5 = wskazuje A bez "
                                "poprawnego uzasadnienia; 0 = wskazuje inne zjawisko."
                              : "1 = meets criteria 1 and 2; 0.5 = picks A without the "
                                "correct justification; 0 = picks another phenomenon.";
        t.rubric = std::move(r);
        out.push_back(std::move(t));
    }
    {
        Task t = authored("classic-lineup", lang, Taxonomy::deductive_reasoning_others,
                          Difficulty::easy);
        task::Turn turn;
        turn.prompt = pl ? "Adam, Betty i Celine stoja w kolejce. Adam nie jest pierwszy, "
                           "Betty nie stoi w srodku, a Celine nie jest ostatnia. Jakie sa "
                           "mozliwe ustawienia? Wymien wszystkie."
                         : "Adam, Betty, and Celine are standing in a line. Adam is not "
                           "first, Betty is not in the middle, and Celine is not last. What "
                           "are the possible orders? List every possible order.";
        turn.gold = GoldAnswer::permutation_set(
            {{"Betty", "Celine", "Adam"}, {"Celine", "Adam", "Betty"}}, true);
        t.turns.push_back(std::move(turn));
        out.push_back(std::move(t));
    }
    {
        // Two-turn belief-revision variant of the lineup task. Worded apart
        // from classic-lineup so the two prompts never alias.
        Task t = authored("classic-lineup-revision", lang,
                          Taxonomy::deductive_reasoning_others, Difficulty::medium);
        task::Turn turn1;
        turn1.prompt = pl ? "Adam, Betty i Celine czekaja w jednej kolejce. Adam nie jest "
                            "pierwszy, Betty nie stoi w srodku, a Celine nie jest ostatnia. "
                            "Jakie sa mozliwe ustawienia? Wymien wszystkie."
                          : "Adam, Betty, and Celine are waiting in a single queue. Adam is "
                            "not first, Betty is not in the middle, and Celine is not last. "
                            "What are the possible orders? List every possible order.";
        turn1.gold = GoldAnswer::permutation_set(
            {{"Betty", "Celine", "Adam"}, {"Celine", "Adam", "Betty"}}, true);
        t.turns.push_back(std::move(turn1));
        task::Turn turn2;
        turn2.mutation_note =
            pl ? "Poprawka: w rzeczywistosci Betty nie jest ostatnia (zamiast: nie stoi w "
                 "srodku)."
               : "Correction: actually, Betty is not last (instead of: not in the middle).";
        turn2.prompt = turn2.mutation_note +
                       (pl ? " Jakie sa teraz mozliwe ustawienia? Wymien wszystkie."
                           : " What are the possible orders now? List every possible order.");
        turn2.gold = GoldAnswer::permutation_set(
            {{"Betty", "Celine", "Adam"}, {"Celine", "Betty", "Adam"}}, true);
        t.turns.push_back(std::move(turn2));
        out.push_back(std::move(t));
    }
    {
        Task t = authored("classic-clock", lang, Taxonomy::deductive_reasoning_others,
                          Difficulty::easy);
        puzzle::ClockPuzzle p = puzzle::classic_clock_puzzle();
        task::Turn turn;
        turn.prompt = puzzle::render_clock(p, lang);
        turn.gold = GoldAnswer::time_value(p.answer, p.ampm_fixed);
        t.turns.push_back(std::move(turn));
        out.push_back(std::move(t));
    }
    {
        Task t = authored("classic-rooster", lang, Taxonomy::nonsense, Difficulty::easy);
        task::Turn turn;
        turn.prompt =
            pl ? "Dwie polacie dachu mojego domu sa nierowne: jedna nachylona jest pod "
                 "katem 60 stopni, a druga pod katem 70 stopni. Zalozmy, ze kogut zniosl "
                 "jajko dokladnie na szczycie tego dachu. Na ktora strone dachu spadnie "
                 "jajko?"
               : "The two halves of the roof on my house are uneven: one slopes at an angle "
                 "of 60 degrees and the other at 70 degrees. Suppose a rooster lays an egg "
                 "exactly at the top of that roof. On which side of the roof will the egg "
                 "fall?";
        turn.gold = GoldAnswer::literal(pl ? "koguty nie znosza jajek" : "roosters do not lay eggs");
        t.turns.push_back(std::move(turn));
        task::JudgeRubric r;
        r.criteria = pl ? std::vector<std::string>{
                              "Zauwaza, ze koguty nie znosza jajek, wiec opisana sytuacja "
                              "jest niemozliwa",
                              "Nie wybiera strony dachu na podstawie katow nachylenia"}
                        : std::vector<std::string>{
                              "Recognizes that roosters do not lay eggs, so the described "
                              "situation is impossible",
                              "Does not pick a side of the roof based on the slope angles"};
        r.score_guidance = pl ? "1 = spelnia oba kryteria; 0.5 = wyraza watpliwosc, ale "
                                "mimo to liczy strone; 0 = wybiera strone dachu."
                              : "1 = meets both criteria; 0.5 = expresses doubt but still "
                                "computes a side; 0 = picks a side of the roof.";
        t.rubric = std::move(r);
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace detail

// --- bank assembly ------------------------------------------------------------

inline TaskSet make_starter_taskset(const GenOptions& opt = {}) {
    TaskSet ts;
    for (Language lang : opt.languages) {
        for (auto& t : detail::classic_tasks(lang)) ts.tasks.push_back(std::move(t));
        for (int i = 0; i < opt.per_taxonomy; ++i)
            ts.tasks.push_back(detail::make_non_classical_task(i, lang));
    }

    // No two tasks of one language may share a first prompt: the mock
    // provider keys on conversation hashes and duplicate questions are poor
    // benchmark data anyway. On a collision the task is redrawn from a
    // shifted seed, consistently across the language mirrors.
    std::map<Language, std::set<std::string>> seen;
    for (const auto& t : ts.tasks) seen[t.language].insert(t.turns.front().prompt);

    using Maker = Task (*)(std::uint64_t, int, Language);
    const std::vector<std::pair<const char*, Maker>> generators = {
        {"prop", &detail::make_prop_task},
        {"pred", &detail::make_pred_task},
        {"einstein", &detail::make_einstein_task},
        {"deductive_other", &detail::make_deductive_other_task},
        {"ascii", &detail::make_ascii_task},
        {"contradiction", &detail::make_contradiction_task},
        {"probability", &detail::make_probability_task},
    };
    for (const auto& [slug, maker] : generators) {
        for (int i = 0; i < opt.per_taxonomy; ++i) {
            std::uint64_t base = detail::task_seed(opt.seed, slug, i);
            bool placed = false;
            for (int attempt = 0; attempt < 16 && !placed; ++attempt) {
                std::uint64_t tseed = base + static_cast<std::uint64_t>(attempt) * 0x9e3779b9ull;
                std::vector<Task> mirrors;
                bool fresh = true;
                for (Language lang : opt.languages) {
                    mirrors.push_back(maker(tseed, i, lang));
                    fresh &= !seen[lang].count(mirrors.back().turns.front().prompt);
                }
                if (!fresh) continue;
                for (auto& t : mirrors) {
                    seen[t.language].insert(t.turns.front().prompt);
                    ts.tasks.push_back(std::move(t));
                }
                placed = true;
            }
            if (!placed)
                throw puzzle::GenerationFailure(std::string("could not draw a distinct '") +
                                                slug + "' task for index " + std::to_string(i));
        }
    }
    return ts;
}

// Re-derives the per-turn gold answers of a generated task by re-running its
// generator (and therefore its solver) from the stored seed and parameters.
inline std::vector<std::optional<GoldAnswer>> regenerate_golds(const Task& t) {
    if (t.source.kind != task::Source::Kind::generated)
        throw std::invalid_argument("task " + t.id + " is authored, not generated");
    std::string generator = t.source.params.value("generator", "");
    int index = t.source.params.value("index", 0);
    std::uint64_t seed = t.source.seed;
    Task fresh;
    if (generator == "prop")
        fresh = detail::make_prop_task(seed, index, t.language);
    else if (generator == "pred")
        fresh = detail::make_pred_task(seed, index, t.language);
    else if (generator == "einstein")
        fresh = detail::make_einstein_task(seed, index, t.language);
    else if (generator == "deductive_other")
        fresh = detail::make_deductive_other_task(seed, index, t.language);
    else if (generator == "ascii")
        fresh = detail::make_ascii_task(seed, index, t.language);
    else if (generator == "contradiction")
        fresh = detail::make_contradiction_task(seed, index, t.language);
    else if (generator == "probability")
        fresh = detail::make_probability_task(seed, index, t.language);
    else
        throw std::invalid_argument("task " + t.id + " names unknown generator '" + generator +
                                    "'");
    std::vector<std::optional<GoldAnswer>> out;
    for (const auto& turn : fresh.turns) out.push_back(turn.gold);
    return out;
}

// Structural validation plus the solver cross-check for generated tasks.
inline std::vector<std::string> validate_task_full(const Task& t) {
    return task::validate_task(t, &regenerate_golds);
}

inline std::vector<std::string> validate_taskset_full(const TaskSet& ts) {
    std::vector<std::string> out;
    for (const auto& t : ts.tasks) {
        for (auto& v : validate_task_full(t)) out.push_back(t.id + ": " + v);
    }
    return out;
}

}  // namespace logos::taskgen
