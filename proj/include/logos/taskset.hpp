#pragma once

// Benchmark task schema and JSONL storage.
//
// File format: UTF-8 restricted to ASCII payload, one task per line, with a
// version header line `#schema logos-bench/1`. Field names: id, taxonomy,
// deterministic, language, difficulty, source, turns[] {prompt, gold{kind,..},
// mutation_note}, rubric{criteria[], score_guidance}.

#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "logos/formula.hpp"
#include "logos/text.hpp"

namespace logos::task {

using json = nlohmann::json;

inline constexpr std::string_view kSchemaHeader = "#schema logos-bench/1";

// The 18 benchmark taxonomies with their determinism flags. Deterministic
// rows: 4, 5, 6, 7, 8, 9, 12, 14 (1-based).
enum class Taxonomy {
    abductive_reasoning,
    argument_evaluation,
    argument_standardisation,
    classical_predicate_logic,
    classical_propositional_logic,
    deductive_reasoning_ascii,
    deductive_reasoning_einstein_riddles,
    deductive_reasoning_others,
    detecting_contradictions,
    identifying_premises_and_conclusions,
    inductive_reasoning,
    non_classical_logics,
    nonsense,
    probability_estimation,
    reasoning_by_analogy,
    reasoning_by_reductio_ad_absurdum,
    reasoning_fallacies,
    rhetorical_devices,
};

inline constexpr int kTaxonomyCount = 18;

inline const std::vector<std::pair<Taxonomy, std::string_view>>& taxonomy_table() {
    static const std::vector<std::pair<Taxonomy, std::string_view>> table = {
        {Taxonomy::abductive_reasoning, "abductive_reasoning"},
        {Taxonomy::argument_evaluation, "argument_evaluation"},
        {Taxonomy::argument_standardisation, "argument_standardisation"},
        {Taxonomy::classical_predicate_logic, "classical_predicate_logic"},
        {Taxonomy::classical_propositional_logic, "classical_propositional_logic"},
        {Taxonomy::deductive_reasoning_ascii, "deductive_reasoning_ascii"},
        {Taxonomy::deductive_reasoning_einstein_riddles, "deductive_reasoning_einstein_riddles"},
        {Taxonomy::deductive_reasoning_others, "deductive_reasoning_others"},
        {Taxonomy::detecting_contradictions, "detecting_contradictions"},
        {Taxonomy::identifying_premises_and_conclusions,
         "identifying_premises_and_conclusions"},
        {Taxonomy::inductive_reasoning, "inductive_reasoning"},
        {Taxonomy::non_classical_logics, "non_classical_logics"},
        {Taxonomy::nonsense, "nonsense"},
        {Taxonomy::probability_estimation, "probability_estimation"},
        {Taxonomy::reasoning_by_analogy, "reasoning_by_analogy"},
        {Taxonomy::reasoning_by_reductio_ad_absurdum, "reasoning_by_reductio_ad_absurdum"},
        {Taxonomy::reasoning_fallacies, "reasoning_fallacies"},
        {Taxonomy::rhetorical_devices, "rhetorical_devices"},
    };
    return table;
}

inline std::string_view taxonomy_name(Taxonomy t) {
    return taxonomy_table()[static_cast<std::size_t>(t)].second;
}

inline Taxonomy taxonomy_from_name(std::string_view name) {
    for (const auto& [t, n] : taxonomy_table())
        if (n == name) return t;
    throw std::invalid_argument("unknown taxonomy: " + std::string(name));
}

inline bool is_deterministic(Taxonomy t) {
    switch (t) {
        case Taxonomy::classical_predicate_logic:
        case Taxonomy::classical_propositional_logic:
        case Taxonomy::deductive_reasoning_ascii:
        case Taxonomy::deductive_reasoning_einstein_riddles:
        case Taxonomy::deductive_reasoning_others:
        case Taxonomy::detecting_contradictions:
        case Taxonomy::non_classical_logics:
        case Taxonomy::probability_estimation: return true;
        default: return false;
    }
}

struct GoldAnswer {
    enum class Kind { literal, literal_set, time_value, permutation_set, boolean, formula_equiv };

    Kind kind = Kind::literal;
    std::string text;                                   // literal / formula_equiv
    std::vector<std::string> texts;                     // literal_set
    std::vector<std::vector<std::string>> permutations; // permutation_set
    bool partial_credit = false;                        // literal_set / permutation_set
    int minutes = 0;                                    // time_value
    bool ampm_fixed = false;                            // time_value
    bool value = false;                                 // boolean

    bool operator==(const GoldAnswer&) const = default;

    static GoldAnswer literal(std::string t) {
        GoldAnswer g;
        g.kind = Kind::literal;
        g.text = std::move(t);
        return g;
    }
    static GoldAnswer literal_set(std::vector<std::string> ts, bool partial) {
        GoldAnswer g;
        g.kind = Kind::literal_set;
        g.texts = std::move(ts);
        g.partial_credit = partial;
        return g;
    }
    static GoldAnswer time_value(int minutes, bool ampm_fixed) {
        GoldAnswer g;
        g.kind = Kind::time_value;
        g.minutes = minutes;
        g.ampm_fixed = ampm_fixed;
        return g;
    }
    static GoldAnswer permutation_set(std::vector<std::vector<std::string>> perms, bool partial) {
        GoldAnswer g;
        g.kind = Kind::permutation_set;
        g.permutations = std::move(perms);
        g.partial_credit = partial;
        return g;
    }
    static GoldAnswer boolean(bool v) {
        GoldAnswer g;
        g.kind = Kind::boolean;
        g.value = v;
        return g;
    }
    static GoldAnswer formula_equiv(std::string formula) {
        GoldAnswer g;
        g.kind = Kind::formula_equiv;
        g.text = std::move(formula);
        return g;
    }
};

inline std::string_view gold_kind_name(GoldAnswer::Kind k) {
    switch (k) {
        case GoldAnswer::Kind::literal: return "literal";
        case GoldAnswer::Kind::literal_set: return "literal_set";
        case GoldAnswer::Kind::time_value: return "time_value";
        case GoldAnswer::Kind::permutation_set: return "permutation_set";
        case GoldAnswer::Kind::boolean: return "boolean";
        default: return "formula_equiv";
    }
}

struct JudgeRubric {
    std::vector<std::string> criteria;
    std::string score_guidance;

    bool operator==(const JudgeRubric&) const = default;
};

struct Turn {
    std::string prompt;
    std::optional<GoldAnswer> gold;
    std::string mutation_note;  // empty on turn 1; nonempty on later turns

    bool operator==(const Turn&) const = default;
};

struct Source {
    enum class Kind { generated, authored };
    Kind kind = Kind::authored;
    std::uint64_t seed = 0;  // generated only
    json params;             // generated only; generator name and parameters
    std::string author;      // authored only

    bool operator==(const Source& o) const {
        return kind == o.kind && seed == o.seed && params == o.params && author == o.author;
    }
};

struct Task {
    std::string id;
    Taxonomy taxonomy = Taxonomy::abductive_reasoning;
    Language language = Language::en;
    std::vector<Turn> turns;
    Difficulty difficulty = Difficulty::easy;
    Source source;
    std::optional<JudgeRubric> rubric;

    bool deterministic() const { return is_deterministic(taxonomy); }
};

struct TaskSet {
    std::vector<Task> tasks;

    std::size_t size() const { return tasks.size(); }
};

// --- errors -----------------------------------------------------------------

class SchemaError : public std::runtime_error {
public:
    SchemaError(int line, const std::string& field, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ", field '" + field + "': " + msg),
          line(line),
          field(field) {}
    int line;
    std::string field;
};

class DuplicateId : public std::runtime_error {
public:
    DuplicateId(int line, const std::string& id)
        : std::runtime_error("line " + std::to_string(line) + ": duplicate task id '" + id + "'"),
          line(line),
          id(id) {}
    int line;
    std::string id;
};

class NonAsciiContent : public std::runtime_error {
public:
    NonAsciiContent(int line, const std::string& field)
        : std::runtime_error("line " + std::to_string(line) + ", field '" + field +
                             "': non-ASCII byte in payload"),
          line(line),
          field(field) {}
    int line;
    std::string field;
};

class EmptyStratum : public std::runtime_error {
public:
    explicit EmptyStratum(const std::string& msg) : std::runtime_error(msg) {}
};

// --- JSON conversion --------------------------------------------------------

namespace detail {

inline json gold_to_json(const GoldAnswer& g) {
    json j;
    j["kind"] = std::string(gold_kind_name(g.kind));
    switch (g.kind) {
        case GoldAnswer::Kind::literal: j["text"] = g.text; break;
        case GoldAnswer::Kind::literal_set:
            j["texts"] = g.texts;
            j["partial_credit"] = g.partial_credit;
            break;
        case GoldAnswer::Kind::time_value:
            j["minutes"] = g.minutes;
            j["ampm_fixed"] = g.ampm_fixed;
            break;
        case GoldAnswer::Kind::permutation_set:
            j["permutations"] = g.permutations;
            j["partial_credit"] = g.partial_credit;
            break;
        case GoldAnswer::Kind::boolean: j["value"] = g.value; break;
        case GoldAnswer::Kind::formula_equiv: j["formula"] = g.text; break;
    }
    return j;
}

inline GoldAnswer gold_from_json(const json& j, int line) {
    if (!j.is_object() || !j.contains("kind"))
        throw SchemaError(line, "gold", "gold must be an object with a 'kind'");
    std::string kind = j["kind"].get<std::string>();
    try {
        if (kind == "literal") return GoldAnswer::literal(j.at("text").get<std::string>());
        if (kind == "literal_set")
            return GoldAnswer::literal_set(j.at("texts").get<std::vector<std::string>>(),
                                           j.value("partial_credit", false));
        if (kind == "time_value")
            return GoldAnswer::time_value(j.at("minutes").get<int>(),
                                          j.value("ampm_fixed", false));
        if (kind == "permutation_set")
            return GoldAnswer::permutation_set(
                j.at("permutations").get<std::vector<std::vector<std::string>>>(),
                j.value("partial_credit", false));
        if (kind == "boolean") return GoldAnswer::boolean(j.at("value").get<bool>());
        if (kind == "formula_equiv")
            return GoldAnswer::formula_equiv(j.at("formula").get<std::string>());
    } catch (const json::exception& e) {
        throw SchemaError(line, "gold", e.what());
    }
    throw SchemaError(line, "gold.kind", "unknown gold kind '" + kind + "'");
}

}  // namespace detail

inline json task_to_json(const Task& t) {
    json j;
    j["id"] = t.id;
    j["taxonomy"] = std::string(taxonomy_name(t.taxonomy));
    j["deterministic"] = t.deterministic();
    j["language"] = std::string(language_name(t.language));
    j["difficulty"] = std::string(difficulty_name(t.difficulty));
    json src;
    if (t.source.kind == Source::Kind::generated) {
        src["kind"] = "generated";
        src["seed"] = t.source.seed;
        src["params"] = t.source.params.is_null() ? json::object() : t.source.params;
    } else {
        src["kind"] = "authored";
        src["author"] = t.source.author;
    }
    j["source"] = src;
    json turns = json::array();
    for (const auto& turn : t.turns) {
        json jt;
        jt["prompt"] = turn.prompt;
        if (turn.gold) jt["gold"] = detail::gold_to_json(*turn.gold);
        jt["mutation_note"] = turn.mutation_note;
        turns.push_back(jt);
    }
    j["turns"] = turns;
    if (t.rubric) {
        j["rubric"] = {{"criteria", t.rubric->criteria},
                       {"score_guidance", t.rubric->score_guidance}};
    }
    return j;
}

inline Task task_from_json(const json& j, int line) {
    auto require = [&](const char* field) -> const json& {
        if (!j.contains(field)) throw SchemaError(line, field, "missing required field");
        return j[field];
    };
    Task t;
    try {
        t.id = require("id").get<std::string>();
        t.taxonomy = taxonomy_from_name(require("taxonomy").get<std::string>());
        t.language = language_from_name(require("language").get<std::string>());
        t.difficulty = difficulty_from_name(require("difficulty").get<std::string>());
    } catch (const SchemaError&) {
        throw;
    } catch (const std::exception& e) {
        throw SchemaError(line, "header", e.what());
    }
    bool det = require("deterministic").get<bool>();
    if (det != t.deterministic())
        throw SchemaError(line, "deterministic",
                          "flag does not match taxonomy '" +
                              std::string(taxonomy_name(t.taxonomy)) + "'");
    const json& src = require("source");
    std::string src_kind = src.value("kind", "");
    if (src_kind == "generated") {
        t.source.kind = Source::Kind::generated;
        t.source.seed = src.value("seed", std::uint64_t{0});
        t.source.params = src.value("params", json::object());
    } else if (src_kind == "authored") {
        t.source.kind = Source::Kind::authored;
        t.source.author = src.value("author", "");
    } else {
        throw SchemaError(line, "source.kind", "must be 'generated' or 'authored'");
    }
    const json& turns = require("turns");
    if (!turns.is_array() || turns.empty())
        throw SchemaError(line, "turns", "must be a nonempty array");
    for (const auto& jt : turns) {
        Turn turn;
        if (!jt.contains("prompt")) throw SchemaError(line, "turns.prompt", "missing prompt");
        turn.prompt = jt["prompt"].get<std::string>();
        if (jt.contains("gold") && !jt["gold"].is_null())
            turn.gold = detail::gold_from_json(jt["gold"], line);
        turn.mutation_note = jt.value("mutation_note", "");
        t.turns.push_back(std::move(turn));
    }
    if (j.contains("rubric") && !j["rubric"].is_null()) {
        JudgeRubric r;
        try {
            r.criteria = j["rubric"].at("criteria").get<std::vector<std::string>>();
            r.score_guidance = j["rubric"].at("score_guidance").get<std::string>();
        } catch (const json::exception& e) {
            throw SchemaError(line, "rubric", e.what());
        }
        t.rubric = std::move(r);
    }
    return t;
}

// --- invariant validation ---------------------------------------------------

// Re-derives a generated task's per-turn gold answers from its stored source;
// wired up by the task generators to avoid a dependency cycle.
using GoldRegenerator =
    std::function<std::vector<std::optional<GoldAnswer>>(const Task&)>;

namespace detail {

inline void check_ascii_payload(const Task& t, int line) {
    auto check = [&](const std::string& s, const char* field) {
        if (!is_ascii(s)) throw NonAsciiContent(line, field);
    };
    check(t.id, "id");
    for (const auto& turn : t.turns) {
        check(turn.prompt, "turns.prompt");
        check(turn.mutation_note, "turns.mutation_note");
        if (turn.gold) {
            check(turn.gold->text, "turns.gold");
            for (const auto& s : turn.gold->texts) check(s, "turns.gold");
            for (const auto& perm : turn.gold->permutations)
                for (const auto& s : perm) check(s, "turns.gold");
        }
    }
    if (t.rubric) {
        for (const auto& c : t.rubric->criteria) check(c, "rubric.criteria");
        check(t.rubric->score_guidance, "rubric.score_guidance");
    }
    check(t.source.author, "source.author");
}

}  // namespace detail

// Structural invariant checks; violations are data, not errors. When a
// regenerator is supplied, generated tasks additionally re-run their solver
// and the stored gold must match.
inline std::vector<std::string> validate_task(const Task& t,
                                              const GoldRegenerator& regen = nullptr) {
    std::vector<std::string> violations;
    auto flag = [&](std::string msg) { violations.push_back(std::move(msg)); };

    if (t.id.empty()) flag("id is empty");
    for (char c : t.id) {
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' || c == '_' ||
              c == '.')) {
            flag("id contains a character outside [a-z0-9-_.]");
            break;
        }
    }
    if (t.turns.empty()) flag("turns list is empty");
    try {
        detail::check_ascii_payload(t, 0);
    } catch (const NonAsciiContent& e) {
        flag(std::string("non-ASCII payload in ") + e.field);
    }
    bool det = t.deterministic();
    for (std::size_t i = 0; i < t.turns.size(); ++i) {
        const Turn& turn = t.turns[i];
        if (det && !turn.gold)
            flag("deterministic task: turn " + std::to_string(i + 1) + " has no gold answer");
        if (i == 0 && !turn.mutation_note.empty()) flag("turn 1 must have empty mutation_note");
        if (i > 0 && turn.mutation_note.empty())
            flag("turn " + std::to_string(i + 1) + " of a multi-turn task needs a mutation_note");
        if (turn.gold) {
            const GoldAnswer& g = *turn.gold;
            if (g.kind == GoldAnswer::Kind::permutation_set) {
                std::set<std::string> base;
                for (std::size_t p = 0; p < g.permutations.size(); ++p) {
                    std::set<std::string> names(g.permutations[p].begin(),
                                                g.permutations[p].end());
                    if (names.size() != g.permutations[p].size())
                        flag("permutation_set entry repeats a name");
                    if (p == 0)
                        base = names;
                    else if (names != base)
                        flag("permutation_set entries use different name sets");
                }
                if (g.permutations.empty()) flag("permutation_set is empty");
            }
            if (g.kind == GoldAnswer::Kind::formula_equiv) {
                try {
                    logic::parse_prop(g.text);
                } catch (const std::exception& e) {
                    flag(std::string("formula_equiv gold does not parse: ") + e.what());
                }
            }
            if (g.kind == GoldAnswer::Kind::time_value &&
                (g.minutes < 0 || g.minutes > 1439))
                flag("time_value gold out of range 0..1439");
        }
    }
    if (!det && !t.rubric) flag("non-deterministic task has no rubric");
    if (t.rubric) {
        if (t.rubric->criteria.empty()) flag("rubric has no criteria");
        if (t.rubric->score_guidance.empty()) flag("rubric has no score guidance");
    }
    if (regen && t.source.kind == Source::Kind::generated) {
        try {
            auto golds = regen(t);
            if (golds.size() != t.turns.size()) {
                flag("gold mismatch with solver: turn count differs");
            } else {
                for (std::size_t i = 0; i < golds.size(); ++i) {
                    bool stored = t.turns[i].gold.has_value();
                    bool fresh = golds[i].has_value();
                    if (stored != fresh || (stored && !(*t.turns[i].gold == *golds[i])))
                        flag("gold mismatch with solver on turn " + std::to_string(i + 1));
                }
            }
        } catch (const std::exception& e) {
            flag(std::string("solver re-run failed: ") + e.what());
        }
    }
    return violations;
}

// --- load / save ------------------------------------------------------------

inline TaskSet load_taskset(std::istream& in) {
    TaskSet ts;
    std::string line;
    int line_no = 0;
    std::set<std::string> ids;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string trimmed = trim(line);
        if (line_no == 1) {
            if (trimmed != kSchemaHeader)
                throw SchemaError(1, "#schema",
                                  "first line must be '" + std::string(kSchemaHeader) + "'");
            header_seen = true;
            continue;
        }
        if (trimmed.empty()) continue;
        json j;
        try {
            j = json::parse(trimmed);
        } catch (const json::exception& e) {
            if (!is_ascii(trimmed)) throw NonAsciiContent(line_no, "line");
            throw SchemaError(line_no, "line", std::string("invalid JSON: ") + e.what());
        }
        Task t = task_from_json(j, line_no);
        try {
            detail::check_ascii_payload(t, line_no);
        } catch (const NonAsciiContent&) {
            throw;
        }
        if (!ids.insert(t.id).second) throw DuplicateId(line_no, t.id);
        auto violations = validate_task(t);
        if (!violations.empty())
            throw SchemaError(line_no, "task", "invariant violation: " + violations.front());
        ts.tasks.push_back(std::move(t));
    }
    if (!header_seen) throw SchemaError(1, "#schema", "empty file; schema header required");
    return ts;
}

inline TaskSet load_taskset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open taskset file: " + path.string());
    return load_taskset(in);
}

inline void save_taskset(const TaskSet& ts, std::ostream& out) {
    out << kSchemaHeader << "\n";
    for (const auto& t : ts.tasks) out << task_to_json(t).dump() << "\n";
}

inline void save_taskset(const TaskSet& ts, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write taskset file: " + path.string());
    save_taskset(ts, out);
}

// --- sampling ---------------------------------------------------------------

// Deterministic taxonomy-stratified split. The first part receives
// floor(total * fraction) tasks, allocated per stratum by largest remainder,
// so both parts preserve taxonomy proportions within one task.
inline std::pair<TaskSet, TaskSet> sample_split(const TaskSet& ts, std::uint64_t seed,
                                                double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw std::invalid_argument("fraction must be strictly between 0 and 1");
    if (ts.tasks.empty()) throw EmptyStratum("task set has no tasks to split");

    std::vector<std::vector<std::size_t>> strata(kTaxonomyCount);
    for (std::size_t i = 0; i < ts.tasks.size(); ++i)
        strata[static_cast<std::size_t>(ts.tasks[i].taxonomy)].push_back(i);

    std::size_t target =
        static_cast<std::size_t>(static_cast<double>(ts.tasks.size()) * fraction);

    struct Quota {
        std::size_t stratum;
        std::size_t base;
        double remainder;
    };
    std::vector<Quota> quotas;
    std::size_t base_total = 0;
    for (std::size_t s = 0; s < strata.size(); ++s) {
        if (strata[s].empty()) continue;
        double exact = static_cast<double>(strata[s].size()) * fraction;
        std::size_t base = static_cast<std::size_t>(exact);
        quotas.push_back({s, base, exact - static_cast<double>(base)});
        base_total += base;
    }
    std::sort(quotas.begin(), quotas.end(), [](const Quota& a, const Quota& b) {
        return a.remainder != b.remainder ? a.remainder > b.remainder : a.stratum < b.stratum;
    });
    std::size_t leftover = target > base_total ? target - base_total : 0;
    for (auto& q : quotas) {
        if (leftover == 0) break;
        if (q.base < strata[q.stratum].size()) {
            ++q.base;
            --leftover;
        }
    }

    Rng rng(Rng::mix(seed, 0x73706c6974736565ull));
    std::vector<bool> in_first(ts.tasks.size(), false);
    for (const auto& q : quotas) {
        std::vector<std::size_t> order = strata[q.stratum];
        rng.shuffle(order);
        for (std::size_t i = 0; i < q.base && i < order.size(); ++i) in_first[order[i]] = true;
    }
    TaskSet a, b;
    for (std::size_t i = 0; i < ts.tasks.size(); ++i)
        (in_first[i] ? a : b).tasks.push_back(ts.tasks[i]);
    return {std::move(a), std::move(b)};
}

}  // namespace logos::task
