#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "logos/report.hpp"
#include "logos/runner.hpp"
#include "logos/taskgen.hpp"

using namespace logos;
using namespace logos::bench;

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "logos-runner-tests" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

// A small deterministic slice of the starter bank (English).
task::TaskSet small_taskset(std::size_t n, bool single_turn_only = false) {
    task::TaskSet out;
    auto full = taskgen::make_starter_taskset();
    for (auto& t : full.tasks) {
        if (out.tasks.size() >= n) break;
        if (t.language != Language::en) continue;
        if (!t.deterministic()) continue;
        if (single_turn_only && t.turns.size() != 1) continue;
        out.tasks.push_back(t);
    }
    REQUIRE(out.tasks.size() == n);
    return out;
}

std::string file_bytes(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig mock_config(const std::filesystem::path& dir, const task::TaskSet& ts,
                      const std::vector<std::pair<std::string, std::string>>& endpoints,
                      int parallelism = 1) {
    task::save_taskset(ts, dir / "tasks.jsonl");
    RunConfig cfg;
    for (const auto& [name, script] : endpoints) {
        llm::ModelEndpoint e;
        e.name = name;
        e.base_url = "mock://" + script;
        e.parallelism = parallelism;
        cfg.endpoints.push_back(e);
    }
    cfg.taskset_path = dir / "tasks.jsonl";
    cfg.output_dir = dir / "out";
    cfg.parallelism = parallelism;
    return cfg;
}

}  // namespace

TEST_CASE("run config files parse the documented key-value format") {
    auto dir = fresh_dir("config");
    {
        std::ofstream f(dir / "run.cfg");
        f << "# demo config\n"
          << "taskset = tasks.jsonl\n"
          << "output_dir = out\n"
          << "parallelism = 3\n"
          << "seed = 9\n"
          << "temperature = 0.25\n"
          << "trace_collection = true\n"
          << "cache_dir = cache\n"
          << "\n"
          << "[endpoint]\n"
          << "name = alpha\n"
          << "base_url = mock://alpha.json\n"
          << "max_tokens = 512\n"
          << "\n"
          << "[endpoint]\n"
          << "name = beta\n"
          << "base_url = http://127.0.0.1:8000/v1\n"
          << "credential_env = BETA_KEY\n"
          << "temperature = 0.9\n"
          << "\n"
          << "[judge]\n"
          << "name = the-judge\n"
          << "base_url = mock://judge.json\n";
    }
    auto cfg = load_run_config(dir / "run.cfg");
    CHECK(cfg.taskset_path == dir / "tasks.jsonl");
    CHECK(cfg.output_dir == dir / "out");
    CHECK(cfg.cache_dir == dir / "cache");
    CHECK(cfg.parallelism == 3);
    CHECK(cfg.seed == 9);
    CHECK(cfg.trace_collection);
    REQUIRE(cfg.endpoints.size() == 2);
    CHECK(cfg.endpoints[0].name == "alpha");
    CHECK(cfg.endpoints[0].max_tokens == 512);
    CHECK(cfg.endpoints[0].temperature == 0.25);   // inherited run policy
    CHECK(cfg.endpoints[0].parallelism == 3);
    CHECK(cfg.endpoints[1].temperature == 0.9);    // explicit override
    CHECK(cfg.endpoints[1].credential_env == "BETA_KEY");
    REQUIRE(cfg.judge_endpoint.has_value());
    CHECK(cfg.judge_endpoint->name == "the-judge");
    CHECK(cfg.judge_endpoint->base_url == "mock://" + (dir / "judge.json").string());
}

TEST_CASE("run config errors are specific") {
    auto dir = fresh_dir("badconfig");
    auto write_cfg = [&](const std::string& body) {
        std::ofstream f(dir / "bad.cfg");
        f << body;
    };
    write_cfg("taskset = t\noutput_dir = o\n");
    CHECK_THROWS_AS(load_run_config(dir / "bad.cfg"), ConfigError);  // no endpoint
    write_cfg("unknown_key = 1\n[endpoint]\nname = a\nbase_url = mock://x\n");
    CHECK_THROWS_AS(load_run_config(dir / "bad.cfg"), ConfigError);
    write_cfg("taskset = t\noutput_dir = o\n[endpoint]\nname = a\nbase_url = mock://x\n"
              "[endpoint]\nname = a\nbase_url = mock://y\n");
    CHECK_THROWS_AS(load_run_config(dir / "bad.cfg"), ConfigError);  // duplicate names
    write_cfg("taskset = t\noutput_dir = o\ntrace_collection = maybe\n"
              "[endpoint]\nname = a\nbase_url = mock://x\n");
    CHECK_THROWS_AS(load_run_config(dir / "bad.cfg"), ConfigError);
    CHECK_THROWS_AS(load_run_config(dir / "missing.cfg"), ConfigError);
}

TEST_CASE("all-gold and all-wrong mock runs hit the exact endpoints of the scale") {
    auto dir = fresh_dir("goldwrong");
    auto ts = small_taskset(10);
    build_mock_script(ts, dir / "gold.json",
                      [](const task::Task&, std::size_t) { return MockBehavior::gold; });
    build_mock_script(ts, dir / "wrong.json",
                      [](const task::Task&, std::size_t) { return MockBehavior::wrong; });
    auto cfg = mock_config(dir, ts,
                           {{"mock-gold", (dir / "gold.json").string()},
                            {"mock-wrong", (dir / "wrong.json").string()}});
    llm::LlmClient client(llm::LlmClient::Options{"", 2, 0});
    auto result = run_benchmark(cfg, client);
    CHECK_FALSE(result.partial_failures);
    auto lb = aggregate(result.records);
    REQUIRE(lb.rows.size() == 2);
    CHECK(lb.rows[0].model == "mock-gold");
    CHECK(lb.rows[0].percent == 100);
    CHECK(lb.rows[0].rank == 1);
    CHECK(lb.rows[1].model == "mock-wrong");
    CHECK(lb.rows[1].percent == 0);
    CHECK(std::filesystem::exists(cfg.output_dir / "records.jsonl"));
}

TEST_CASE("a half-gold script lands at 50 percent") {
    auto dir = fresh_dir("mixed");
    auto ts = small_taskset(10);
    int idx = 0;
    std::map<std::string, bool> gold_ids;
    for (const auto& t : ts.tasks) gold_ids[t.id] = idx++ < 5;
    build_mock_script(ts, dir / "mixed.json", [&](const task::Task& t, std::size_t) {
        return gold_ids[t.id] ? MockBehavior::gold : MockBehavior::wrong;
    });
    auto cfg = mock_config(dir, ts, {{"mock-mixed", (dir / "mixed.json").string()}});
    llm::LlmClient client(llm::LlmClient::Options{"", 2, 0});
    auto lb = aggregate(run_benchmark(cfg, client).records);
    REQUIRE(lb.rows.size() == 1);
    CHECK(lb.rows[0].percent == 50);
}

TEST_CASE("multi-turn tasks revise the gold and stale answers fail turn two") {
    auto full = taskgen::make_starter_taskset();
    const task::Task* revision = nullptr;
    for (const auto& t : full.tasks)
        if (t.id == "classic-lineup-revision.en") revision = &t;
    REQUIRE(revision != nullptr);
    REQUIRE(revision->turns.size() == 2);

    auto dir = fresh_dir("multiturn");

    SECTION("cooperative model earns full credit") {
        task::TaskSet ts;
        ts.tasks.push_back(*revision);
        build_mock_script(ts, dir / "gold.json",
                          [](const task::Task&, std::size_t) { return MockBehavior::gold; });
        llm::ModelEndpoint e;
        e.name = "coop";
        e.base_url = "mock://" + (dir / "gold.json").string();
        llm::LlmClient client(llm::LlmClient::Options{"", 2, 0});
        auto verdicts = run_multi_turn(*revision, e, client);
        REQUIRE(verdicts.size() == 2);
        CHECK(verdicts[0].second.score == judge::Score::one);
        CHECK(verdicts[1].second.score == judge::Score::one);
    }

    SECTION("a model repeating its stale turn-1 answer fails turn 2") {
        // Script turn 1 with the correct answer and turn 2 with the same
        // (now stale) answer.
        std::string stale = gold_reply_text(*revision->turns[0].gold);
        std::vector<llm::ChatMessage> history{{llm::Role::user, revision->turns[0].prompt}};
        std::string h1 = llm::message_hash_hex(history);
        history.push_back({llm::Role::assistant, stale});
        history.push_back({llm::Role::user, revision->turns[1].prompt});
        std::string h2 = llm::message_hash_hex(history);
        nlohmann::json script;
        script["entries"][h1] = {{"reply", stale}};
        script["entries"][h2] = {{"reply", stale}};
        {
            std::ofstream out(dir / "stale.json");
            out << script.dump();
        }
        llm::ModelEndpoint e;
        e.name = "stubborn";
        e.base_url = "mock://" + (dir / "stale.json").string();
        llm::LlmClient client(llm::LlmClient::Options{"", 2, 0});
        auto verdicts = run_multi_turn(*revision, e, client);
        REQUIRE(verdicts.size() == 2);
        CHECK(verdicts[0].second.score == judge::Score::one);
        CHECK(verdicts[1].second.score == judge::Score::zero);
        // Task score = mean of turn scores = 0.5 -> 50 percent on a
        // single-task set.
        task::TaskSet ts;
        ts.tasks.push_back(*revision);
        auto cfg = mock_config(dir, ts, {{"stubborn", (dir / "stale.json").string()}});
        auto lb = aggregate(run_benchmark(cfg, client).records);
        CHECK(lb.rows[0].percent == 50);
    }

    SECTION("single-turn tasks are rejected by run_multi_turn") {
        const task::Task* single = nullptr;
        for (const auto& t : full.tasks)
            if (t.id == "classic-lineup.en") single = &t;
        REQUIRE(single != nullptr);
        llm::ModelEndpoint e;
        e.name = "x";
        e.base_url = "mock://nowhere.json";
        llm::LlmClient client(llm::LlmClient::Options{"", 2, 0});
        CHECK_THROWS_AS(run_multi_turn(*single, e, client), std::invalid_argument);
    }
}

TEST_CASE("deterministic-only runs never touch the judge endpoint") {
    auto dir = fresh_dir("precedence");
    auto ts = small_taskset(8);
    build_mock_script(ts, dir / "gold.json",
                      [](const task::Task&, std::size_t) { return MockBehavior::gold; });
    build_mock_judge_script(dir / "judge.json", "1");
    auto cfg = mock_config(dir, ts, {{"model", (dir / "gold.json").string()}});
    llm::ModelEndpoint judge_ep;
    judge_ep.name = "judge";
    judge_ep.base_url = "mock://" + (dir / "judge.json").string();
    cfg.judge_endpoint = judge_ep;

    llm::LlmClient client(llm::LlmClient::Options{"", 2, 0});
    auto result = run_benchmark(cfg, client);
    CHECK_FALSE(result.partial_failures);
    CHECK(client.stats("judge").provider_calls == 0);
    for (const auto& r : result.records) CHECK(r.method == judge::Method::oracle);
}

TEST_CASE("non-deterministic tasks demand a judge; the judge then scores them") {
    auto dir = fresh_dir("judged");
    task::TaskSet ts;
    auto full = taskgen::make_starter_taskset();
    for (auto& t : full.tasks)
        if (t.id == "classic-coffee.en" || t.id == "classic-rooster.en") ts.tasks.push_back(t);
    REQUIRE(ts.tasks.size() == 2);
    build_mock_script(ts, dir / "model.json",
                      [](const task::Task&, std::size_t) { return MockBehavior::gold; });
    auto cfg = mock_config(dir, ts, {{"model", (dir / "model.json").string()}});

    llm::LlmClient client(llm::LlmClient::Options{"", 2, 0});
    CHECK_THROWS_AS(run_benchmark(cfg, client), ConfigError);

    build_mock_judge_script(dir / "judge.json", "0.5");
    llm::ModelEndpoint judge_ep;
    judge_ep.name = "judge";
    judge_ep.base_url = "mock://" + (dir / "judge.json").string();
    cfg.judge_endpoint = judge_ep;
    auto result = run_benchmark(cfg, client);
    auto lb = aggregate(result.records);
    CHECK(lb.rows[0].percent == 50);
    CHECK(client.stats("judge").provider_calls == 2);
    for (const auto& r : result.records) CHECK(r.method == judge::Method::llm_judge);
}

TEST_CASE("truncated replies always grade zero through the runner") {
    auto dir = fresh_dir("truncated");
    auto ts = small_taskset(4, /*single_turn_only=*/true);
    // Correct answers, but scripted as truncated.
    nlohmann::json entries = nlohmann::json::object();
    for (const auto& t : ts.tasks) {
        std::vector<llm::ChatMessage> history{{llm::Role::user, t.turns[0].prompt}};
        entries[llm::message_hash_hex(history)] = {
            {"reply", gold_reply_text(*t.turns[0].gold)}, {"truncated", true}};
    }
    {
        std::ofstream out(dir / "trunc.json");
        out << nlohmann::json{{"entries", entries}}.dump();
    }
    auto cfg = mock_config(dir, ts, {{"cutoff", (dir / "trunc.json").string()}});
    llm::LlmClient client(llm::LlmClient::Options{"", 2, 0});
    auto result = run_benchmark(cfg, client);
    auto lb = aggregate(result.records);
    CHECK(lb.rows[0].percent == 0);
    CHECK(lb.rows[0].truncation_rate == 1.0);
    for (const auto& r : result.records) {
        CHECK(r.truncated);
        CHECK(r.rationale == "truncated");
    }
}

TEST_CASE("per-endpoint parallelism is respected by an instrumented mock") {
    auto dir = fresh_dir("parallel");
    auto ts = small_taskset(12);
    build_mock_script(ts, dir / "gold.json",
                      [](const task::Task&, std::size_t) { return MockBehavior::gold; });
    // Inject a small delay so workers overlap.
    {
        auto j = nlohmann::json::parse(file_bytes(dir / "gold.json"));
        j["delay_ms"] = 3;
        std::ofstream out(dir / "gold.json");
        out << j.dump();
    }
    auto cfg = mock_config(dir, ts, {{"par", (dir / "gold.json").string()}}, 3);
    llm::LlmClient client(llm::LlmClient::Options{"", 2, 0});
    auto result = run_benchmark(cfg, client);
    CHECK_FALSE(result.partial_failures);
    CHECK(client.stats("par").max_in_flight <= 3);
}

TEST_CASE("reruns resume from the cache with zero new endpoint calls") {
    auto dir = fresh_dir("resume");
    auto ts = small_taskset(6);
    build_mock_script(ts, dir / "gold.json",
                      [](const task::Task&, std::size_t) { return MockBehavior::gold; });
    auto cfg = mock_config(dir, ts, {{"model", (dir / "gold.json").string()}});
    cfg.cache_dir = dir / "cache";

    llm::LlmClient first(llm::LlmClient::Options{cfg.cache_dir, 2, 0});
    auto r1 = run_benchmark(cfg, first);
    CHECK(first.stats("model").provider_calls > 0);
    emit_report(aggregate(r1.records), r1.records, cfg.output_dir);
    std::string md1 = file_bytes(cfg.output_dir / "leaderboard.md");

    llm::LlmClient second(llm::LlmClient::Options{cfg.cache_dir, 2, 0});
    auto r2 = run_benchmark(cfg, second);
    CHECK(second.stats("model").provider_calls == 0);
    emit_report(aggregate(r2.records), r2.records, cfg.output_dir);
    CHECK(file_bytes(cfg.output_dir / "leaderboard.md") == md1);
    CHECK(file_bytes(cfg.output_dir / "leaderboard.csv") ==
          render_csv(aggregate(r1.records)));
}

TEST_CASE("provider failures become error records, not lost tasks") {
    auto dir = fresh_dir("failures");
    auto ts = small_taskset(4, /*single_turn_only=*/true);
    // Script replies for all tasks, then poison one task's prompt hash with
    // endless 500s.
    build_mock_script(ts, dir / "flaky.json",
                      [](const task::Task&, std::size_t) { return MockBehavior::gold; });
    {
        auto j = nlohmann::json::parse(file_bytes(dir / "flaky.json"));
        std::vector<llm::ChatMessage> history{{llm::Role::user, ts.tasks[1].turns[0].prompt}};
        j["faults"] = nlohmann::json::array(
            {{{"match", llm::message_hash_hex(history)}, {"status", 500}, {"times", 1000}}});
        std::ofstream out(dir / "flaky.json");
        out << j.dump();
    }
    auto cfg = mock_config(dir, ts, {{"flaky", (dir / "flaky.json").string()}});
    llm::LlmClient client(llm::LlmClient::Options{"", 1, 0});
    auto result = run_benchmark(cfg, client);
    CHECK(result.partial_failures);
    REQUIRE(result.records.size() == ts.tasks.size());
    int errors = 0;
    for (const auto& r : result.records) errors += r.error;
    CHECK(errors == 1);
    auto lb = aggregate(result.records);
    CHECK(lb.rows[0].error_count == 1);
    CHECK(lb.rows[0].percent == 75);  // 3 of 4 correct; the error scores 0
}

TEST_CASE("aggregation is order-independent and ties break alphabetically") {
    auto make_record = [](const std::string& model, const std::string& task, double score) {
        RunRecord r;
        r.model = model;
        r.task_id = task;
        r.turn_index = 1;
        r.score = score >= 1.0   ? judge::Score::one
                  : score >= 0.5 ? judge::Score::half
                                 : judge::Score::zero;
        r.reasoning_tokens = 100;
        return r;
    };
    std::vector<RunRecord> records;
    for (int i = 0; i < 4; ++i) {
        records.push_back(make_record("zeta", "t" + std::to_string(i), i < 2 ? 1.0 : 0.0));
        records.push_back(make_record("alpha", "t" + std::to_string(i), i < 2 ? 1.0 : 0.0));
    }
    auto lb = aggregate(records);
    REQUIRE(lb.rows.size() == 2);
    CHECK(lb.rows[0].model == "alpha");
    CHECK(lb.rows[1].model == "zeta");
    CHECK(lb.rows[0].percent == 50);

    Rng rng(5);
    for (int i = 0; i < 10; ++i) {
        rng.shuffle(records);
        auto lb2 = aggregate(records);
        REQUIRE(lb2.rows.size() == lb.rows.size());
        for (std::size_t j = 0; j < lb.rows.size(); ++j) {
            CHECK(lb2.rows[j].model == lb.rows[j].model);
            CHECK(lb2.rows[j].percent == lb.rows[j].percent);
            CHECK(lb2.rows[j].avg_reasoning_tokens == lb.rows[j].avg_reasoning_tokens);
        }
    }
}

TEST_CASE("verdict arithmetic: [1, 0.5, 0] averages to 50 percent") {
    std::vector<RunRecord> records;
    double scores[] = {1.0, 0.5, 0.0};
    for (int i = 0; i < 3; ++i) {
        RunRecord r;
        r.model = "m";
        r.task_id = "t" + std::to_string(i);
        r.turn_index = 1;
        r.score = scores[i] >= 1.0 ? judge::Score::one
                  : scores[i] >= 0.5 ? judge::Score::half
                                     : judge::Score::zero;
        records.push_back(r);
    }
    CHECK(aggregate(records).rows[0].percent == 50);
}

TEST_CASE("percent is exact at every taskset size for uniform outcomes") {
    for (int n = 1; n <= 9; ++n) {
        std::vector<RunRecord> gold, wrong;
        for (int i = 0; i < n; ++i) {
            RunRecord r;
            r.model = "m";
            r.task_id = "t" + std::to_string(i);
            r.turn_index = 1;
            r.score = judge::Score::one;
            gold.push_back(r);
            r.score = judge::Score::zero;
            wrong.push_back(r);
        }
        CHECK(aggregate(gold).rows[0].percent == 100);
        CHECK(aggregate(wrong).rows[0].percent == 0);
    }
}

TEST_CASE("reports refuse empty inputs and emit deterministic bytes") {
    CHECK_THROWS_AS(emit_report(Leaderboard{}, {}, fresh_dir("emptyreport")), ReportError);

    auto dir = fresh_dir("reportbytes");
    std::vector<RunRecord> records;
    RunRecord r;
    r.model = "only";
    r.task_id = "t";
    r.turn_index = 1;
    r.score = judge::Score::one;
    r.reasoning_tokens = 123;
    records.push_back(r);
    auto lb = aggregate(records);
    emit_report(lb, records, dir);
    std::string md = file_bytes(dir / "leaderboard.md");
    std::string csv = file_bytes(dir / "leaderboard.csv");
    emit_report(lb, records, dir);
    CHECK(file_bytes(dir / "leaderboard.md") == md);
    CHECK(file_bytes(dir / "leaderboard.csv") == csv);
    CHECK(md.find("| 1 | only | 100% |") != std::string::npos);
    CHECK(csv.find("rank,model,percent") == 0);
}

TEST_CASE("records round-trip through the JSONL sink") {
    auto dir = fresh_dir("records");
    auto ts = small_taskset(5);
    build_mock_script(ts, dir / "gold.json",
                      [](const task::Task&, std::size_t) { return MockBehavior::gold; });
    auto cfg = mock_config(dir, ts, {{"model", (dir / "gold.json").string()}});
    cfg.trace_collection = true;
    llm::LlmClient client(llm::LlmClient::Options{"", 2, 0});
    auto result = run_benchmark(cfg, client);
    auto loaded = read_records(cfg.output_dir / "records.jsonl");
    REQUIRE(loaded.size() == result.records.size());
    for (std::size_t i = 0; i < loaded.size(); ++i) {
        CHECK(loaded[i].task_id == result.records[i].task_id);
        CHECK(loaded[i].score == result.records[i].score);
        CHECK(loaded[i].prompt == result.records[i].prompt);
    }
}

TEST_CASE("trace collection feeds the corpus; filters apply") {
    auto dir = fresh_dir("traces");
    auto ts = small_taskset(6);
    int idx = 0;
    std::map<std::string, bool> gold_ids;
    for (const auto& t : ts.tasks) gold_ids[t.id] = idx++ < 3;
    build_mock_script(ts, dir / "mixed.json", [&](const task::Task& t, std::size_t) {
        return gold_ids[t.id] ? MockBehavior::gold : MockBehavior::wrong;
    });
    auto cfg = mock_config(dir, ts, {{"model", (dir / "mixed.json").string()}});
    cfg.trace_collection = true;
    llm::LlmClient client(llm::LlmClient::Options{"", 2, 0});
    auto result = run_benchmark(cfg, client);

    auto all = collect_traces(result.records, dir / "all.jsonl", false);
    CHECK(all == result.records.size());
    auto correct = collect_traces(result.records, dir / "correct.jsonl", true);
    CHECK(correct == 3);
    std::ifstream in(dir / "correct.jsonl");
    std::string line;
    std::getline(in, line);
    CHECK(line == "#schema logos-bench-traces/1");
    std::size_t lines = 0;
    while (std::getline(in, line))
        if (!trim(line).empty()) ++lines;
    CHECK(lines == correct);

    // Without trace collection the corpus is empty and a warning is issued.
    cfg.trace_collection = false;
    cfg.output_dir = dir / "out2";
    auto bare = run_benchmark(cfg, client);
    std::ostringstream warn;
    auto none = collect_traces(bare.records, dir / "none.jsonl", false, warn);
    CHECK(none == 0);
    CHECK(warn.str().find("trace_collection") != std::string::npos);
}
