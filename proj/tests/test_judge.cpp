#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "logos/judge.hpp"
#include "logos/taskgen.hpp"

using namespace logos;
using namespace logos::judge;
using task::GoldAnswer;

namespace {

std::filesystem::path write_script(const std::string& name, const std::string& content) {
    auto dir = std::filesystem::temp_directory_path() / "logos-judge-tests";
    std::filesystem::create_directories(dir);
    auto path = dir / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

llm::ModelEndpoint judge_endpoint(const std::filesystem::path& script) {
    llm::ModelEndpoint e;
    e.name = "mock-judge";
    e.base_url = "mock://" + script.string();
    return e;
}

llm::CompletionResult completion(const std::string& final_text, bool truncated = false) {
    llm::CompletionResult r;
    r.raw_text = final_text;
    r.final_text = final_text;
    r.truncated = truncated;
    return r;
}

}  // namespace

TEST_CASE("grade_oracle literal answers") {
    CHECK(grade_oracle(GoldAnswer::literal("r"), "Therefore, r.").score == Score::one);
    CHECK(grade_oracle(GoldAnswer::literal("r"), "q").score == Score::zero);
    CHECK(grade_oracle(GoldAnswer::literal("r"), "not r").score == Score::zero);
    CHECK(grade_oracle(GoldAnswer::literal("dog"), "The pet there is the dog.").score ==
          Score::one);
    CHECK(grade_oracle(GoldAnswer::literal("dog"), "It is not the dog.").score == Score::zero);
    CHECK(grade_oracle(GoldAnswer::literal("2"), "I considered 3 first.\nAnswer: 2").score ==
          Score::one);
    CHECK(grade_oracle(GoldAnswer::literal("1/7"), "P = 1/7").score == Score::one);
    CHECK(grade_oracle(GoldAnswer::literal("1/7"), "P = 2/7").score == Score::zero);
    auto v = grade_oracle(GoldAnswer::literal("r"), "Therefore, r.");
    CHECK(v.method == Method::oracle);
    CHECK_FALSE(v.judge_raw.has_value());
}

TEST_CASE("grade_oracle boolean answers use the synonym table") {
    CHECK(grade_oracle(GoldAnswer::boolean(true), "Yes.").score == Score::one);
    CHECK(grade_oracle(GoldAnswer::boolean(true), "Tak, to tautologia.").score == Score::one);
    CHECK(grade_oracle(GoldAnswer::boolean(false), "Nie.").score == Score::one);
    CHECK(grade_oracle(GoldAnswer::boolean(false), "The formula is not valid. No.").score ==
          Score::one);
    CHECK(grade_oracle(GoldAnswer::boolean(true), "no").score == Score::zero);
    CHECK(grade_oracle(GoldAnswer::boolean(true), "I cannot tell.").score == Score::zero);
    // The last line wins when the model restates candidates.
    CHECK(grade_oracle(GoldAnswer::boolean(false), "Maybe yes?\nFinal answer: no").score ==
          Score::one);
}

TEST_CASE("grade_oracle time answers accept either clock face by default") {
    GoldAnswer flex = GoldAnswer::time_value(13 * 60 + 33, false);
    CHECK(grade_oracle(flex, "1:33").score == Score::one);
    CHECK(grade_oracle(flex, "13:33").score == Score::one);
    CHECK(grade_oracle(flex, "The display shows 13.33 now").score == Score::one);
    CHECK(grade_oracle(flex, "13:32").score == Score::zero);
    CHECK(grade_oracle(flex, "no time here").score == Score::zero);
    // Candidates are restated; the last time-shaped span counts.
    CHECK(grade_oracle(flex, "First I thought 12:00, but it is 1:33.").score == Score::one);

    GoldAnswer fixed = GoldAnswer::time_value(13 * 60 + 33, true);
    CHECK(grade_oracle(fixed, "1:33").score == Score::zero);
    CHECK(grade_oracle(fixed, "13:33").score == Score::one);
}

TEST_CASE("grade_oracle literal sets apply rule R1") {
    GoldAnswer gold = GoldAnswer::literal_set({"p", "!q", "r"}, true);
    CHECK(grade_oracle(gold, "p, !q, r").score == Score::one);
    CHECK(grade_oracle(gold, "The literals p, not q, and r all follow.").score == Score::one);
    CHECK(grade_oracle(gold, "p and r follow").score == Score::half);
    CHECK(grade_oracle(gold, "p, q, r").score == Score::zero);  // wrong element, no credit
    CHECK(grade_oracle(gold, "p, !q, r, s").score == Score::zero);
    CHECK(grade_oracle(gold, "nothing follows at all").score == Score::zero);

    GoldAnswer strict = GoldAnswer::literal_set({"p", "!q", "r"}, false);
    CHECK(grade_oracle(strict, "p and r follow").score == Score::zero);
    CHECK(grade_oracle(strict, "p, !q, r").score == Score::one);
}

TEST_CASE("grade_oracle permutation sets apply rule R1") {
    GoldAnswer gold = GoldAnswer::permutation_set(
        {{"Betty", "Celine", "Adam"}, {"Celine", "Adam", "Betty"}}, true);
    CHECK(grade_oracle(gold, "Betty, Celine, Adam\nCeline, Adam, Betty").score == Score::one);
    CHECK(grade_oracle(gold, "Either Betty, Celine, Adam or Celine, Adam, Betty.").score ==
          Score::one);
    CHECK(grade_oracle(gold, "Betty, Celine, Adam").score == Score::half);
    CHECK(grade_oracle(gold, "Adam, Betty, Celine").score == Score::zero);
    CHECK(grade_oracle(gold, "Betty, Celine, Adam; Adam, Celine, Betty").score == Score::zero);
    CHECK(grade_oracle(gold, "no idea").score == Score::zero);

    GoldAnswer no_partial = GoldAnswer::permutation_set(
        {{"Betty", "Celine", "Adam"}, {"Celine", "Adam", "Betty"}}, false);
    CHECK(grade_oracle(no_partial, "Betty, Celine, Adam").score == Score::zero);
}

TEST_CASE("grade_oracle formula equivalence is logical, not textual") {
    GoldAnswer gold = GoldAnswer::formula_equiv("!p | !q");
    CHECK(grade_oracle(gold, "!q | !p").score == Score::one);
    CHECK(grade_oracle(gold, "!(p & q)").score == Score::one);
    CHECK(grade_oracle(gold, "The answer is !(q & p).").score == Score::one);
    CHECK(grade_oracle(gold, "p | q").score == Score::zero);
    CHECK(grade_oracle(gold, "no formula at all").score == Score::zero);
    CHECK_THROWS_AS(grade_oracle(GoldAnswer::formula_equiv("(((p"), "p"), GoldShapeError);
}

TEST_CASE("formula equivalence survives equivalence-preserving rewrites") {
    Rng rng(61);
    std::vector<std::string> atoms = {"p", "q", "r"};
    for (int i = 0; i < 80; ++i) {
        auto f = taskgen::detail::random_prop(rng, atoms, 3);
        std::string gold_text = logic::render_ascii(f);
        GoldAnswer gold = GoldAnswer::formula_equiv(gold_text);
        // Double negation and a commuted equivalent both score 1.
        auto doubled = logic::PropFormula::negation(logic::PropFormula::negation(f));
        CHECK(grade_oracle(gold, logic::render_ascii(doubled)).score == Score::one);
        auto padded = logic::PropFormula::conjunction(f, f);
        CHECK(grade_oracle(gold, logic::render_ascii(padded)).score == Score::one);
        // A flipped truth table scores 0.
        auto negated = logic::PropFormula::negation(f);
        CHECK(grade_oracle(gold, logic::render_ascii(negated)).score == Score::zero);
    }
}

TEST_CASE("grade_llm parses the three-point scale") {
    auto script = write_script("judge_one.json",
                               R"({"default": {"reply": "Meets all criteria.\n1"}})");
    llm::LlmClient client(llm::LlmClient::Options{"", 3, 0});
    task::JudgeRubric rubric{{"states the right explanation"}, "1 if criterion met else 0"};
    auto v = grade_llm(rubric, "the task", "the answer", client, judge_endpoint(script));
    CHECK(v.score == Score::one);
    CHECK(v.method == Method::llm_judge);
    REQUIRE(v.judge_raw.has_value());
    CHECK(v.rationale == "Meets all criteria.");

    auto half = write_script("judge_half.json", R"({"default": {"reply": "0.5"}})");
    CHECK(grade_llm(rubric, "t", "a", client, judge_endpoint(half)).score == Score::half);

    auto zero = write_script("judge_zero.json", R"({"default": {"reply": "Misses it.\n0"}})");
    CHECK(grade_llm(rubric, "t", "a", client, judge_endpoint(zero)).score == Score::zero);

    auto comma = write_script("judge_comma.json", R"({"default": {"reply": "0,5"}})");
    CHECK(grade_llm(rubric, "t", "a", client, judge_endpoint(comma)).score == Score::half);
}

TEST_CASE("grade_llm retries once, then reports JudgeUnparsable") {
    auto script = write_script("judge_bad.json", R"({"default": {"reply": "seven"}})");
    llm::LlmClient client(llm::LlmClient::Options{"", 3, 0});
    task::JudgeRubric rubric{{"criterion"}, "guidance"};
    CHECK_THROWS_AS(grade_llm(rubric, "t", "a", client, judge_endpoint(script)),
                    JudgeUnparsable);
    CHECK(client.stats("mock-judge").provider_calls == 2);
}

TEST_CASE("grade dispatch: truncation dominates everything") {
    auto ts = taskgen::make_starter_taskset();
    llm::LlmClient client(llm::LlmClient::Options{"", 3, 0});
    int graded = 0;
    for (const auto& t : ts.tasks) {
        if (graded >= 12) break;
        auto v = grade(t, 0, completion("whatever the content", true), &client, nullptr);
        CHECK(v.score == Score::zero);
        CHECK(v.rationale == "truncated");
        ++graded;
    }
    CHECK(graded == 12);
}

TEST_CASE("grade dispatch routes by determinism") {
    task::Task det;
    det.id = "det";
    det.taxonomy = task::Taxonomy::classical_propositional_logic;
    det.turns.push_back(task::Turn{"is it?", GoldAnswer::boolean(true), ""});
    llm::LlmClient client(llm::LlmClient::Options{"", 3, 0});
    // Deterministic path needs no judge endpoint at all.
    CHECK(grade(det, 0, completion("yes"), nullptr, nullptr).score == Score::one);
    CHECK(grade(det, 0, completion("no"), nullptr, nullptr).score == Score::zero);

    task::Task soft;
    soft.id = "soft";
    soft.taxonomy = task::Taxonomy::abductive_reasoning;
    soft.rubric = task::JudgeRubric{{"criterion"}, "guidance"};
    soft.turns.push_back(task::Turn{"why?", std::nullopt, ""});
    CHECK_THROWS_AS(grade(soft, 0, completion("because"), &client, nullptr), JudgeConfigError);

    auto script = write_script("judge_route.json", R"({"default": {"reply": "1"}})");
    auto je = judge_endpoint(script);
    CHECK(grade(soft, 0, completion("because"), &client, &je).score == Score::one);

    CHECK_THROWS_AS(grade(det, 5, completion("yes"), nullptr, nullptr), std::invalid_argument);
}

TEST_CASE("redundancy counts repeated long sentences") {
    auto r = redundancy("A b c d e. A b c d e.");
    CHECK(r.sentence_count == 2);
    CHECK(r.duplicate_sentence_count == 1);
    CHECK(r.redundancy_ratio == 0.5);
    REQUIRE(r.top_repeats.size() == 1);
    CHECK(r.top_repeats[0] == std::pair<std::string, long>{"a b c d e", 2});

    CHECK(redundancy("").sentence_count == 0);
    CHECK(redundancy("").redundancy_ratio == 0.0);
    CHECK(redundancy("One sentence here now. Another sentence there then.").redundancy_ratio ==
          0.0);
    // Short repeats are ignored.
    CHECK(redundancy("Go. Go. Go.").duplicate_sentence_count == 0);
    // Case and punctuation do not matter.
    auto fuzzy = redundancy("Check the first clue again!\ncheck, the FIRST clue again?");
    CHECK(fuzzy.duplicate_sentence_count == 1);
    // Digits are stripped before comparison.
    auto digits = redundancy("now checking house 1 carefully. Now checking house 2 carefully.");
    CHECK(digits.duplicate_sentence_count == 1);
}

TEST_CASE("redundancy ratio is invariant under sentence reordering") {
    std::vector<std::string> sentences = {
        "the first constraint pins adam", "betty must be behind celine",
        "the first constraint pins adam", "so the order is fixed now",
        "betty must be behind celine",   "the first constraint pins adam"};
    Rng rng(83);
    auto base = redundancy("the a. the b.");
    (void)base;
    std::string joined;
    for (const auto& s : sentences) joined += s + ". ";
    auto reference = redundancy(joined);
    for (int i = 0; i < 20; ++i) {
        rng.shuffle(sentences);
        std::string text;
        for (const auto& s : sentences) text += s + ". ";
        auto r = redundancy(text);
        CHECK(r.redundancy_ratio == reference.redundancy_ratio);
        CHECK(r.duplicate_sentence_count == reference.duplicate_sentence_count);
        CHECK(r.sentence_count == reference.sentence_count);
    }
}

TEST_CASE("the embedded judge prompt matches the template file") {
    std::ifstream in(std::string(LOGOS_REPO_ROOT) + "/templates/judge_prompt.txt");
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == default_judge_prompt());
}
