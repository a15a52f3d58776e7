#pragma once

// Grading on the three-point scale {0, 0.5, 1}: deterministic tasks are
// scored by exact oracles over the normalized final answer, non-deterministic
// tasks by a rubric-driven judge model. Truncated completions score 0
// regardless of content. A deterministic redundancy metric summarizes
// repetition in reasoning traces.

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "logos/formula.hpp"
#include "logos/llm.hpp"
#include "logos/taskset.hpp"
#include "logos/text.hpp"

namespace logos::judge {

class GoldShapeError : public std::runtime_error {
public:
    explicit GoldShapeError(const std::string& msg) : std::runtime_error(msg) {}
};

class JudgeUnparsable : public std::runtime_error {
public:
    explicit JudgeUnparsable(const std::string& msg) : std::runtime_error(msg) {}
};

class JudgeConfigError : public std::runtime_error {
public:
    explicit JudgeConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// The only representable scores.
enum class Score { zero, half, one };

inline double score_value(Score s) {
    switch (s) {
        case Score::zero: return 0.0;
        case Score::half: return 0.5;
        default: return 1.0;
    }
}

inline std::string_view score_text(Score s) {
    switch (s) {
        case Score::zero: return "0";
        case Score::half: return "0.5";
        default: return "1";
    }
}

enum class Method { oracle, llm_judge };

struct Verdict {
    Score score = Score::zero;
    Method method = Method::oracle;
    std::string rationale;
    std::optional<std::string> judge_raw;  // absent on the oracle path
};

// --- normalization ----------------------------------------------------------

namespace detail {

// Lowercase; any character outside [a-z0-9 space keep] becomes a space;
// whitespace collapsed.
inline std::string normalize(std::string_view text, std::string_view keep = "") {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char raw : text) {
        char c = raw;
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                  keep.find(c) != std::string_view::npos;
        if (ok) {
            if (pending_space && !out.empty()) out += ' ';
            pending_space = false;
            out += c;
        } else {
            pending_space = true;
        }
    }
    return out;
}

inline std::vector<std::string> nonempty_lines(std::string_view text) {
    std::vector<std::string> lines;
    for (const auto& l : split_on(text, '\n')) {
        if (!trim(l).empty()) lines.push_back(l);
    }
    return lines;
}

inline bool contains_token(const std::vector<std::string>& tokens, std::string_view t) {
    for (const auto& tok : tokens)
        if (tok == t) return true;
    return false;
}

inline const std::set<std::string>& negation_words() {
    static const std::set<std::string> words = {"not", "no", "never", "nie", "nigdy"};
    return words;
}

// Leading phrases models use to announce a conclusion; stripped before
// literal comparison.
inline const std::set<std::string>& conclusion_fillers() {
    static const std::set<std::string> words = {
        "therefore", "thus",   "so",     "hence",  "answer", "final", "the",
        "conclusion", "is",    "a",      "an",
        "odpowiedz", "zatem",  "wiec",   "czyli",  "to",     "wynik", "ostateczna"};
    return words;
}

inline std::vector<std::string> strip_fillers(std::vector<std::string> tokens) {
    std::size_t i = 0;
    while (i < tokens.size() && conclusion_fillers().count(tokens[i])) ++i;
    return {tokens.begin() + static_cast<std::ptrdiff_t>(i), tokens.end()};
}

// --- per-variant matchers ---------------------------------------------------

inline bool match_literal(const std::string& gold_text, std::string_view answer) {
    const std::string keep = "!/-:";
    std::string gold = normalize(gold_text, keep);
    if (gold.empty()) throw GoldShapeError("literal gold normalizes to nothing");
    if (normalize(answer, keep) == gold) return true;

    auto lines = nonempty_lines(answer);
    if (lines.empty()) return false;
    // Only the last line is considered: reasoning models restate candidates,
    // and the concluding line is the claim being graded.
    std::string line = normalize(lines.back(), keep);
    if (line == gold) return true;
    auto tokens = split_ws(line);
    auto stripped = strip_fillers(tokens);
    std::string joined;
    for (std::size_t i = 0; i < stripped.size(); ++i) {
        if (i) joined += ' ';
        joined += stripped[i];
    }
    if (joined == gold) return true;
    // Suffix match ("... is the dog" for gold "dog"), refused when the line
    // negates unless the gold itself is a negation.
    auto gold_tokens = split_ws(gold);
    if (gold_tokens.empty() || tokens.size() < gold_tokens.size()) return false;
    for (std::size_t i = 0; i < gold_tokens.size(); ++i) {
        if (tokens[tokens.size() - gold_tokens.size() + i] != gold_tokens[i]) return false;
    }
    bool gold_negates = false;
    for (const auto& g : gold_tokens)
        if (negation_words().count(g) || (!g.empty() && g[0] == '!')) gold_negates = true;
    if (!gold_negates) {
        for (const auto& t : tokens)
            if (negation_words().count(t)) return false;
    }
    return true;
}

inline std::optional<bool> extract_boolean(std::string_view answer) {
    static const std::set<std::string> yes = {"yes", "true", "tak", "prawda", "valid"};
    static const std::set<std::string> no = {"no", "false", "nie", "falsz", "invalid"};
    auto scan = [&](const std::string& text) -> std::optional<bool> {
        auto tokens = split_ws(normalize(text));
        for (auto it = tokens.rbegin(); it != tokens.rend(); ++it) {
            if (yes.count(*it)) return true;
            if (no.count(*it)) return false;
        }
        return std::nullopt;
    };
    auto lines = nonempty_lines(answer);
    if (!lines.empty()) {
        if (auto b = scan(lines.back())) return b;
    }
    return scan(std::string(answer));
}

// Last h:mm / hh:mm (or hh.mm) time in the text, as minutes since midnight.
inline std::optional<int> extract_time(std::string_view text) {
    std::optional<int> found;
    for (std::size_t i = 0; i + 3 <= text.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) continue;
        std::size_t j = i;
        int h = 0;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])) &&
               j - i < 2) {
            h = h * 10 + (text[j] - '0');
            ++j;
        }
        if (j >= text.size() || (text[j] != ':' && text[j] != '.')) continue;
        std::size_t k = j + 1;
        if (k + 1 >= text.size() + 1) continue;
        if (k + 1 > text.size()) continue;
        if (k + 2 > text.size() || !std::isdigit(static_cast<unsigned char>(text[k])) ||
            !std::isdigit(static_cast<unsigned char>(text[k + 1])))
            continue;
        int m = (text[k] - '0') * 10 + (text[k + 1] - '0');
        // Reject when a third minute digit follows (e.g. "12:345").
        if (k + 2 < text.size() && std::isdigit(static_cast<unsigned char>(text[k + 2])))
            continue;
        if (h <= 23 && m <= 59) found = h * 60 + m;
        i = k + 1;
    }
    return found;
}

inline const std::set<std::string>& literal_stopwords() {
    static const std::set<std::string> words = {
        "and", "or",  "the", "is",  "are", "a",   "an",  "it",   "that", "follows", "follow",
        "following", "from", "therefore", "thus", "so", "hence", "we",  "have", "get",
        "conclude", "literals", "literal", "answer", "final", "only", "both", "all",
        "oraz", "i",  "lub", "z",  "ze",  "wynika", "wynikaja", "nastepujace", "literaly",
        "literal", "zatem", "wiec", "czyli", "jest", "sa", "odpowiedz", "tylko", "wszystkie"};
    return words;
}

// Literal tokens claimed by a line: identifiers shaped like atoms, with
// "not x" / "nie x" / "~x" folded into "!x". Stopwords are skipped.
inline std::set<std::string> claimed_literals(const std::string& line) {
    auto tokens = split_ws(normalize(line, "!~"));
    std::set<std::string> out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        std::string t = tokens[i];
        bool neg = false;
        if ((t == "not" || t == "nie") && i + 1 < tokens.size()) {
            neg = true;
            t = tokens[++i];
        }
        while (!t.empty() && (t[0] == '!' || t[0] == '~')) {
            neg = !neg;
            t = t.substr(1);
        }
        if (t.empty() || literal_stopwords().count(t)) continue;
        if (!logic::is_atom_name(t)) continue;
        out.insert(neg ? "!" + t : t);
    }
    return out;
}

inline Score score_set_match(const std::set<std::string>& claimed,
                             const std::set<std::string>& gold, bool partial_credit) {
    if (claimed == gold) return Score::one;
    if (claimed.empty()) return Score::zero;
    bool subset = true;
    for (const auto& c : claimed)
        if (!gold.count(c)) subset = false;
    // Partial credit only for a clean strict subset; any foreign element
    // forfeits the half point.
    if (subset && partial_credit) return Score::half;
    return Score::zero;
}

// Sentence-sized segments claiming an order of all the given names.
inline std::set<std::vector<std::string>> claimed_permutations(
    std::string_view answer, const std::set<std::string>& names) {
    std::string text(answer);
    for (const char* sep : {";", " or ", " lub ", ". "})
        replace_all(text, sep, "\n");
    std::set<std::vector<std::string>> out;
    for (const auto& raw_line : split_on(text, '\n')) {
        auto tokens = split_ws(normalize(raw_line));
        std::vector<std::string> order;
        bool dup = false;
        for (const auto& t : tokens) {
            if (names.count(t)) {
                if (std::find(order.begin(), order.end(), t) != order.end()) dup = true;
                order.push_back(t);
            }
        }
        if (!dup && order.size() == names.size()) out.insert(order);
    }
    return out;
}

}  // namespace detail

// --- oracle grading ---------------------------------------------------------

inline Verdict grade_oracle(const task::GoldAnswer& gold, std::string_view final_text) {
    using Kind = task::GoldAnswer::Kind;
    Verdict v;
    v.method = Method::oracle;

    switch (gold.kind) {
        case Kind::literal: {
            bool hit = detail::match_literal(gold.text, final_text);
            v.score = hit ? Score::one : Score::zero;
            v.rationale = hit ? "literal match" : "expected '" + gold.text + "'";
            return v;
        }
        case Kind::boolean: {
            auto claimed = detail::extract_boolean(final_text);
            if (claimed && *claimed == gold.value) {
                v.score = Score::one;
                v.rationale = "boolean match";
            } else {
                v.score = Score::zero;
                v.rationale = claimed ? "wrong boolean answer" : "no yes/no answer found";
            }
            return v;
        }
        case Kind::time_value: {
            if (gold.minutes < 0 || gold.minutes > 1439)
                throw GoldShapeError("time gold out of range");
            auto claimed = detail::extract_time(final_text);
            int modulus = gold.ampm_fixed ? 1440 : 720;
            if (claimed && (*claimed % modulus) == (gold.minutes % modulus)) {
                v.score = Score::one;
                v.rationale = "time match";
            } else {
                v.score = Score::zero;
                v.rationale = claimed ? "wrong time" : "no h:mm time found";
            }
            return v;
        }
        case Kind::literal_set: {
            if (gold.texts.empty()) throw GoldShapeError("literal_set gold is empty");
            std::set<std::string> gold_set;
            for (const auto& t : gold.texts) {
                std::string n = detail::normalize(t, "!");
                if (n.empty()) throw GoldShapeError("literal_set member normalizes to nothing");
                gold_set.insert(n);
            }
            // The last line that claims any literal carries the answer.
            auto lines = detail::nonempty_lines(final_text);
            std::set<std::string> claimed;
            for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
                claimed = detail::claimed_literals(*it);
                if (!claimed.empty()) break;
            }
            v.score = detail::score_set_match(claimed, gold_set, gold.partial_credit);
            v.rationale = v.score == Score::one    ? "literal set match"
                          : v.score == Score::half ? "strict subset of the gold literals"
                                                   : "literal set mismatch";
            return v;
        }
        case Kind::permutation_set: {
            if (gold.permutations.empty()) throw GoldShapeError("permutation_set gold is empty");
            std::set<std::string> names;
            for (const auto& n : gold.permutations.front()) names.insert(detail::normalize(n));
            std::set<std::vector<std::string>> gold_set;
            for (const auto& perm : gold.permutations) {
                std::vector<std::string> p;
                std::set<std::string> seen;
                for (const auto& n : perm) {
                    p.push_back(detail::normalize(n));
                    seen.insert(p.back());
                }
                if (seen != names)
                    throw GoldShapeError("permutation_set entries use different name sets");
                gold_set.insert(std::move(p));
            }
            auto claimed = detail::claimed_permutations(final_text, names);
            if (claimed == gold_set) {
                v.score = Score::one;
                v.rationale = "all valid orders listed";
            } else if (!claimed.empty() && gold.partial_credit &&
                       std::includes(gold_set.begin(), gold_set.end(), claimed.begin(),
                                     claimed.end())) {
                v.score = Score::half;
                v.rationale = "strict subset of the valid orders";
            } else {
                v.score = Score::zero;
                v.rationale = claimed.empty() ? "no complete order found"
                                              : "order set mismatch";
            }
            return v;
        }
        case Kind::formula_equiv: {
            logic::PropFormula goldf = [&] {
                try {
                    return logic::parse_prop(gold.text);
                } catch (const std::exception& e) {
                    throw GoldShapeError(std::string("formula gold does not parse: ") + e.what());
                }
            }();
            // The last line holding a parseable formula is the claim; prose
            // prefixes ("The answer is ...") are shed token by token.
            auto lines = detail::nonempty_lines(final_text);
            std::optional<logic::PropFormula> claimed;
            auto try_line = [&](std::string candidate) {
                std::string cleaned;
                for (char c : candidate)
                    if (c != '`' && c != '"') cleaned += c;
                cleaned = trim(cleaned);
                while (!cleaned.empty() && (cleaned.back() == '.' || cleaned.back() == ','))
                    cleaned.pop_back();
                auto tokens = split_ws(cleaned);
                for (std::size_t k = 0; k < tokens.size() && !claimed; ++k) {
                    std::string suffix;
                    for (std::size_t i = k; i < tokens.size(); ++i) {
                        if (i > k) suffix += ' ';
                        suffix += tokens[i];
                    }
                    try {
                        claimed = logic::parse_prop(suffix);
                    } catch (const std::exception&) {
                    }
                }
            };
            for (auto it = lines.rbegin(); it != lines.rend() && !claimed; ++it) try_line(*it);
            if (claimed &&
                logic::is_tautology(logic::PropFormula::equivalence(goldf, *claimed))) {
                v.score = Score::one;
                v.rationale = "logically equivalent formula";
            } else {
                v.score = Score::zero;
                v.rationale = claimed ? "formula not equivalent to gold"
                                      : "no parseable formula found";
            }
            return v;
        }
    }
    throw GoldShapeError("unhandled gold kind");
}

// --- LLM judge --------------------------------------------------------------

// Mirrors templates/judge_prompt.txt.
inline std::string default_judge_prompt() {
    return "# logos-bench judge prompt v1\n"
           "You are a strict grader. Evaluate the candidate answer below against the rubric.\n"
           "\n"
           "Task:\n"
           "{task}\n"
           "\n"
           "Rubric criteria:\n"
           "{criteria}\n"
           "\n"
           "Scoring guidance:\n"
           "{guidance}\n"
           "\n"
           "Candidate answer:\n"
           "{answer}\n"
           "\n"
           "Judge only whether the candidate answer satisfies the criteria. On the last\n"
           "line of your reply output exactly one of: 0, 0.5, 1.\n";
}

namespace detail {

inline std::optional<Score> parse_judge_score(std::string_view reply) {
    auto lines = nonempty_lines(reply);
    if (lines.empty()) return std::nullopt;
    std::string last = trim(lines.back());
    while (!last.empty() && last.back() == '.') last.pop_back();
    std::string norm;
    for (char c : last) norm += c == ',' ? '.' : c;
    if (norm == "0" || norm == "0.0") return Score::zero;
    if (norm == "0.5" || norm == ".5") return Score::half;
    if (norm == "1" || norm == "1.0") return Score::one;
    return std::nullopt;
}

}  // namespace detail

inline Verdict grade_llm(const task::JudgeRubric& rubric, std::string_view task_prompt,
                         std::string_view final_text, llm::LlmClient& client,
                         const llm::ModelEndpoint& judge_endpoint,
                         const std::string& prompt_template = default_judge_prompt()) {
    if (rubric.criteria.empty()) throw GoldShapeError("rubric has no criteria");
    std::string criteria;
    for (std::size_t i = 0; i < rubric.criteria.size(); ++i)
        criteria += std::to_string(i + 1) + ". " + rubric.criteria[i] + "\n";
    std::string prompt = prompt_template;
    replace_all(prompt, "{task}", std::string(task_prompt));
    replace_all(prompt, "{criteria}", criteria);
    replace_all(prompt, "{guidance}", rubric.score_guidance);
    replace_all(prompt, "{answer}", std::string(final_text));

    std::vector<llm::ChatMessage> msgs{{llm::Role::user, prompt}};
    for (int attempt = 0; attempt < 2; ++attempt) {
        llm::CompletionResult res = client.complete(judge_endpoint, msgs);
        if (auto score = detail::parse_judge_score(res.final_text)) {
            Verdict v;
            v.score = *score;
            v.method = Method::llm_judge;
            v.judge_raw = res.raw_text;
            auto lines = detail::nonempty_lines(res.final_text);
            lines.pop_back();
            for (const auto& l : lines) {
                if (!v.rationale.empty()) v.rationale += ' ';
                v.rationale += trim(l);
            }
            if (v.rationale.empty()) v.rationale = "judge gave no rationale";
            return v;
        }
        // One retry with an explicit format reminder; a fresh message so the
        // retry is a distinct request even behind the cache.
        msgs.push_back({llm::Role::assistant, res.final_text});
        msgs.push_back({llm::Role::user, "Reply with exactly one of: 0, 0.5, 1."});
    }
    throw JudgeUnparsable("judge endpoint '" + judge_endpoint.name +
                          "' did not produce a score in two attempts");
}

// --- dispatch ---------------------------------------------------------------

// Truncation dominates; otherwise deterministic tasks go to the oracle and
// never touch the judge endpoint.
inline Verdict grade(const task::Task& t, std::size_t turn_index,
                     const llm::CompletionResult& result, llm::LlmClient* client,
                     const llm::ModelEndpoint* judge_endpoint,
                     const std::string& prompt_template = default_judge_prompt()) {
    if (turn_index >= t.turns.size())
        throw std::invalid_argument("turn index out of range for task " + t.id);
    if (result.truncated) {
        Verdict v;
        v.score = Score::zero;
        v.method = Method::oracle;
        v.rationale = "truncated";
        return v;
    }
    const task::Turn& turn = t.turns[turn_index];
    if (t.deterministic()) {
        if (!turn.gold)
            throw GoldShapeError("deterministic task " + t.id + " has no gold for turn " +
                                 std::to_string(turn_index + 1));
        return grade_oracle(*turn.gold, result.final_text);
    }
    if (!t.rubric) throw GoldShapeError("non-deterministic task " + t.id + " has no rubric");
    if (!client || !judge_endpoint)
        throw JudgeConfigError("non-deterministic task " + t.id +
                               " needs a configured judge endpoint");
    return grade_llm(*t.rubric, turn.prompt, result.final_text, *client, *judge_endpoint,
                     prompt_template);
}

// --- redundancy -------------------------------------------------------------

struct RedundancyReport {
    long sentence_count = 0;
    long duplicate_sentence_count = 0;
    double redundancy_ratio = 0.0;  // duplicates / max(sentences, 1)
    std::vector<std::pair<std::string, long>> top_repeats;
};

// Sentences split on . ! ? and newline; normalized to letters only. A repeat
// counts as a duplicate only when the normalized sentence has at least four
// words.
inline RedundancyReport redundancy(std::string_view trace) {
    RedundancyReport rep;
    std::string segment;
    std::map<std::string, long> counts;
    std::vector<std::string> order;
    auto flush = [&] {
        std::string norm = detail::normalize(segment);
        // Digits are stripped from the normalized form.
        std::string letters;
        for (char c : norm)
            if (!(c >= '0' && c <= '9')) letters += c;
        norm = detail::normalize(letters);
        segment.clear();
        if (norm.empty()) return;
        ++rep.sentence_count;
        long words = static_cast<long>(split_ws(norm).size());
        auto [it, fresh] = counts.emplace(norm, 0);
        if (fresh) order.push_back(norm);
        ++it->second;
        if (it->second > 1 && words >= 4) ++rep.duplicate_sentence_count;
    };
    for (char c : trace) {
        if (c == '.' || c == '!' || c == '?' || c == '\n')
            flush();
        else
            segment += c;
    }
    flush();
    rep.redundancy_ratio = static_cast<double>(rep.duplicate_sentence_count) /
                           static_cast<double>(std::max<long>(rep.sentence_count, 1));
    for (const auto& norm : order) {
        long n = counts[norm];
        if (n >= 2 && split_ws(norm).size() >= 4) rep.top_repeats.emplace_back(norm, n);
    }
    std::stable_sort(rep.top_repeats.begin(), rep.top_repeats.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    if (rep.top_repeats.size() > 5) rep.top_repeats.resize(5);
    return rep;
}

}  // namespace logos::judge
