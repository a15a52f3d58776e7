#pragma once

// Benchmark orchestration: dispatches (endpoint, task) work items to a
// bounded per-endpoint worker pool, keeps the turns of one task strictly
// sequential inside one conversation, grades every turn, and appends records
// through a single serialized sink. Failures become error records; a run
// never aborts on a single bad task.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "logos/judge.hpp"
#include "logos/llm.hpp"
#include "logos/taskset.hpp"
#include "logos/text.hpp"

namespace logos::bench {

using json = nlohmann::json;

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct RunConfig {
    std::vector<llm::ModelEndpoint> endpoints;
    std::optional<llm::ModelEndpoint> judge_endpoint;
    std::filesystem::path taskset_path;
    int parallelism = 1;  // default per-endpoint worker count
    std::uint64_t seed = 0;
    double temperature = 0.0;
    std::filesystem::path output_dir;
    bool trace_collection = false;
    std::filesystem::path cache_dir;
    std::filesystem::path judge_prompt_path;  // optional template override
};

// --- config file ------------------------------------------------------------
//
// Key-value text format: `key = value` lines, `#` comments, one `[endpoint]`
// section per model endpoint and an optional `[judge]` section. Credentials
// are named by environment variable, never stored in the file.

namespace detail {

inline bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("key '" + key + "' expects a boolean, got '" + v + "'");
}

}  // namespace detail

inline RunConfig load_run_config(std::istream& in, const std::filesystem::path& base_dir = {}) {
    RunConfig cfg;
    enum class Section { top, endpoint, judge };
    Section section = Section::top;
    llm::ModelEndpoint current;
    bool have_current = false;
    bool endpoint_temperature_set = false;
    bool endpoint_parallelism_set = false;
    std::vector<bool> explicit_temps;
    std::vector<bool> explicit_pars;

    auto resolve = [&](const std::string& p) {
        std::filesystem::path path(p);
        if (path.is_absolute() || base_dir.empty()) return path;
        return base_dir / path;
    };
    auto flush_endpoint = [&] {
        if (!have_current) return;
        if (current.name.empty()) throw ConfigError("endpoint section is missing 'name'");
        if (current.base_url.empty())
            throw ConfigError("endpoint '" + current.name + "' is missing 'base_url'");
        if (section == Section::judge) {
            cfg.judge_endpoint = current;
        } else {
            cfg.endpoints.push_back(current);
            explicit_temps.push_back(endpoint_temperature_set);
            explicit_pars.push_back(endpoint_parallelism_set);
        }
        current = llm::ModelEndpoint{};
        endpoint_temperature_set = false;
        endpoint_parallelism_set = false;
        have_current = false;
    };

    std::string line;
    int line_no = 0;
    Section pending = Section::top;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t == "[endpoint]" || t == "[judge]") {
            flush_endpoint();
            pending = t == "[endpoint]" ? Section::endpoint : Section::judge;
            section = pending;
            have_current = true;
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        try {
            if (section == Section::top) {
                if (key == "taskset") cfg.taskset_path = resolve(value);
                else if (key == "output_dir") cfg.output_dir = resolve(value);
                else if (key == "cache_dir") cfg.cache_dir = resolve(value);
                else if (key == "judge_prompt") cfg.judge_prompt_path = resolve(value);
                else if (key == "parallelism") cfg.parallelism = std::stoi(value);
                else if (key == "seed") cfg.seed = std::stoull(value);
                else if (key == "temperature") cfg.temperature = std::stod(value);
                else if (key == "trace_collection")
                    cfg.trace_collection = detail::parse_bool(value, key);
                else throw ConfigError("unknown top-level key '" + key + "'");
            } else {
                if (key == "name") current.name = value;
                else if (key == "base_url") {
                    current.base_url =
                        value.rfind("mock://", 0) == 0
                            ? "mock://" + resolve(value.substr(7)).string()
                            : value;
                } else if (key == "credential_env") current.credential_env = value;
                else if (key == "system_message") current.system_message = value;
                else if (key == "max_tokens") current.max_tokens = std::stoi(value);
                else if (key == "request_timeout") current.request_timeout_s = std::stoi(value);
                else if (key == "parallelism") {
                    current.parallelism = std::stoi(value);
                    endpoint_parallelism_set = true;
                } else if (key == "temperature") {
                    current.temperature = std::stod(value);
                    endpoint_temperature_set = true;
                } else throw ConfigError("unknown endpoint key '" + key + "'");
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError("line " + std::to_string(line_no) + ": bad value for '" + key +
                              "': " + e.what());
        }
    }
    flush_endpoint();

    if (cfg.endpoints.empty()) throw ConfigError("config defines no [endpoint] section");
    if (cfg.taskset_path.empty()) throw ConfigError("config is missing 'taskset'");
    if (cfg.output_dir.empty()) throw ConfigError("config is missing 'output_dir'");
    if (cfg.parallelism < 1) throw ConfigError("parallelism must be >= 1");

    // Run-level temperature and parallelism apply unless an endpoint
    // overrides them.
    for (std::size_t i = 0; i < cfg.endpoints.size(); ++i) {
        if (!explicit_temps[i]) cfg.endpoints[i].temperature = cfg.temperature;
        if (!explicit_pars[i] || cfg.endpoints[i].parallelism < 1)
            cfg.endpoints[i].parallelism = cfg.parallelism;
    }
    std::set<std::string> names;
    for (const auto& e : cfg.endpoints)
        if (!names.insert(e.name).second)
            throw ConfigError("duplicate endpoint name '" + e.name + "'");
    return cfg;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    return load_run_config(in, path.parent_path());
}

// --- run records --------------------------------------------------------------

struct RunRecord {
    std::string model;
    std::string task_id;
    int turn_index = 0;  // 1-based
    std::string prompt_hash;
    long reasoning_tokens = 0;
    long completion_tokens = 0;
    bool truncated = false;
    long latency_ms = 0;
    double temperature = 0.0;
    std::string token_source;
    judge::Score score = judge::Score::zero;
    judge::Method method = judge::Method::oracle;
    std::string rationale;
    judge::RedundancyReport redundancy;
    std::string started_at;   // wall-clock; excluded from reports
    std::string finished_at;
    bool error = false;
    std::string error_kind;
    // Present only when the run collected traces.
    std::string prompt;
    std::string reasoning_trace;
    std::string final_text;
};

inline json record_to_json(const RunRecord& r) {
    json j;
    j["model"] = r.model;
    j["task_id"] = r.task_id;
    j["turn_index"] = r.turn_index;
    j["prompt_hash"] = r.prompt_hash;
    j["reasoning_tokens"] = r.reasoning_tokens;
    j["completion_tokens"] = r.completion_tokens;
    j["truncated"] = r.truncated;
    j["latency_ms"] = r.latency_ms;
    j["temperature"] = r.temperature;
    j["token_source"] = r.token_source;
    j["score"] = judge::score_value(r.score);
    j["method"] = r.method == judge::Method::oracle ? "oracle" : "llm_judge";
    j["rationale"] = r.rationale;
    j["redundancy"] = {{"sentence_count", r.redundancy.sentence_count},
                       {"duplicate_sentence_count", r.redundancy.duplicate_sentence_count},
                       {"redundancy_ratio", r.redundancy.redundancy_ratio}};
    j["started_at"] = r.started_at;
    j["finished_at"] = r.finished_at;
    j["error"] = r.error;
    if (r.error) j["error_kind"] = r.error_kind;
    if (!r.prompt.empty() || !r.reasoning_trace.empty() || !r.final_text.empty()) {
        j["prompt"] = r.prompt;
        j["reasoning_trace"] = r.reasoning_trace;
        j["final_text"] = r.final_text;
    }
    return j;
}

inline RunRecord record_from_json(const json& j) {
    RunRecord r;
    r.model = j.value("model", "");
    r.task_id = j.value("task_id", "");
    r.turn_index = j.value("turn_index", 0);
    r.prompt_hash = j.value("prompt_hash", "");
    r.reasoning_tokens = j.value("reasoning_tokens", 0L);
    r.completion_tokens = j.value("completion_tokens", 0L);
    r.truncated = j.value("truncated", false);
    r.latency_ms = j.value("latency_ms", 0L);
    r.temperature = j.value("temperature", 0.0);
    r.token_source = j.value("token_source", "");
    double s = j.value("score", 0.0);
    r.score = s >= 1.0 ? judge::Score::one : s >= 0.5 ? judge::Score::half : judge::Score::zero;
    r.method = j.value("method", "oracle") == "llm_judge" ? judge::Method::llm_judge
                                                          : judge::Method::oracle;
    r.rationale = j.value("rationale", "");
    if (j.contains("redundancy")) {
        r.redundancy.sentence_count = j["redundancy"].value("sentence_count", 0L);
        r.redundancy.duplicate_sentence_count =
            j["redundancy"].value("duplicate_sentence_count", 0L);
        r.redundancy.redundancy_ratio = j["redundancy"].value("redundancy_ratio", 0.0);
    }
    r.started_at = j.value("started_at", "");
    r.finished_at = j.value("finished_at", "");
    r.error = j.value("error", false);
    r.error_kind = j.value("error_kind", "");
    r.prompt = j.value("prompt", "");
    r.reasoning_trace = j.value("reasoning_trace", "");
    r.final_text = j.value("final_text", "");
    return r;
}

inline void write_records(const std::vector<RunRecord>& records,
                          const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write records file: " + path.string());
    out << "#schema logos-bench-records/1\n";
    for (const auto& r : records) out << record_to_json(r).dump() << "\n";
}

inline std::vector<RunRecord> read_records(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open records file: " + path.string());
    std::vector<RunRecord> out;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (first) {
            first = false;
            if (t == "#schema logos-bench-records/1") continue;
        }
        if (t.empty() || t[0] == '#') continue;
        out.push_back(record_from_json(json::parse(t)));
    }
    return out;
}

// --- execution ----------------------------------------------------------------

struct RunResult {
    std::vector<RunRecord> records;
    std::size_t task_count = 0;
    bool partial_failures = false;
};

namespace detail {

inline std::string iso_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline std::string load_prompt_template(const RunConfig& cfg) {
    if (cfg.judge_prompt_path.empty()) return judge::default_judge_prompt();
    std::ifstream in(cfg.judge_prompt_path);
    if (!in)
        throw ConfigError("cannot open judge prompt template: " +
                          cfg.judge_prompt_path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace detail

// Runs every turn of one task inside a single conversation against one
// endpoint. The per-turn verdicts are independent; the task score is their
// mean.
inline std::vector<std::pair<int, judge::Verdict>> run_multi_turn(
    const task::Task& t, const llm::ModelEndpoint& endpoint, llm::LlmClient& client,
    const llm::ModelEndpoint* judge_endpoint = nullptr,
    const std::string& judge_template = judge::default_judge_prompt(),
    std::vector<RunRecord>* records_out = nullptr, bool collect_traces = false) {
    if (t.turns.size() < 2)
        throw std::invalid_argument("run_multi_turn requires a task with at least two turns");
    for (std::size_t i = 1; i < t.turns.size(); ++i)
        if (t.turns[i].mutation_note.empty())
            throw std::invalid_argument("multi-turn task " + t.id +
                                        " lacks a mutation_note on turn " + std::to_string(i + 1));

    std::vector<std::pair<int, judge::Verdict>> verdicts;
    std::vector<llm::ChatMessage> history;
    if (!endpoint.system_message.empty())
        history.push_back({llm::Role::system, endpoint.system_message});
    for (std::size_t i = 0; i < t.turns.size(); ++i) {
        history.push_back({llm::Role::user, t.turns[i].prompt});
        llm::CompletionResult res = client.complete(endpoint, history);
        judge::Verdict v = judge::grade(t, i, res, &client, judge_endpoint, judge_template);
        if (records_out) {
            RunRecord r;
            r.model = endpoint.name;
            r.task_id = t.id;
            r.turn_index = static_cast<int>(i + 1);
            r.prompt_hash = llm::message_hash_hex(history);
            r.reasoning_tokens = res.reasoning_tokens;
            r.completion_tokens = res.completion_tokens;
            r.truncated = res.truncated;
            r.latency_ms = res.latency_ms;
            r.temperature = endpoint.temperature;
            r.token_source = res.token_source;
            r.score = v.score;
            r.method = v.method;
            r.rationale = v.rationale;
            r.redundancy = judge::redundancy(res.reasoning_trace);
            if (collect_traces) {
                r.prompt = t.turns[i].prompt;
                r.reasoning_trace = res.reasoning_trace;
                r.final_text = res.final_text;
            }
            records_out->push_back(std::move(r));
        }
        verdicts.emplace_back(static_cast<int>(i + 1), v);
        history.push_back({llm::Role::assistant, res.final_text});
    }
    return verdicts;
}

inline RunResult run_benchmark(const RunConfig& cfg, llm::LlmClient& client) {
    task::TaskSet ts;
    try {
        ts = task::load_taskset(cfg.taskset_path);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("taskset failed to load: ") + e.what());
    }
    bool any_nondet = false;
    for (const auto& t : ts.tasks) any_nondet |= !t.deterministic();
    if (any_nondet && !cfg.judge_endpoint)
        throw ConfigError("taskset contains non-deterministic tasks but no [judge] endpoint "
                          "is configured");

    std::string judge_template = detail::load_prompt_template(cfg);
    std::filesystem::create_directories(cfg.output_dir);

    RunResult result;
    result.task_count = ts.tasks.size();
    std::mutex sink_mu;

    for (const auto& endpoint : cfg.endpoints) {
        std::atomic<std::size_t> next{0};
        int workers = std::max(1, std::min<int>(endpoint.parallelism,
                                                static_cast<int>(ts.tasks.size())));
        auto worker = [&] {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= ts.tasks.size()) return;
                const task::Task& t = ts.tasks[i];
                std::vector<llm::ChatMessage> history;
                if (!endpoint.system_message.empty())
                    history.push_back({llm::Role::system, endpoint.system_message});
                bool aborted = false;
                for (std::size_t turn = 0; turn < t.turns.size(); ++turn) {
                    RunRecord r;
                    r.model = endpoint.name;
                    r.task_id = t.id;
                    r.turn_index = static_cast<int>(turn + 1);
                    r.temperature = endpoint.temperature;
                    r.started_at = detail::iso_now();
                    if (aborted) {
                        r.error = true;
                        r.error_kind = "previous turn failed";
                        r.rationale = "not executed: previous turn failed";
                        r.finished_at = r.started_at;
                        std::lock_guard<std::mutex> lock(sink_mu);
                        result.records.push_back(std::move(r));
                        continue;
                    }
                    history.push_back({llm::Role::user, t.turns[turn].prompt});
                    r.prompt_hash = llm::message_hash_hex(history);
                    try {
                        llm::CompletionResult res = client.complete(endpoint, history);
                        judge::Verdict v =
                            judge::grade(t, turn, res, &client,
                                         cfg.judge_endpoint ? &*cfg.judge_endpoint : nullptr,
                                         judge_template);
                        r.reasoning_tokens = res.reasoning_tokens;
                        r.completion_tokens = res.completion_tokens;
                        r.truncated = res.truncated;
                        r.latency_ms = res.latency_ms;
                        r.token_source = res.token_source;
                        r.score = v.score;
                        r.method = v.method;
                        r.rationale = v.rationale;
                        r.redundancy = judge::redundancy(res.reasoning_trace);
                        if (cfg.trace_collection) {
                            r.prompt = t.turns[turn].prompt;
                            r.reasoning_trace = res.reasoning_trace;
                            r.final_text = res.final_text;
                        }
                        history.push_back({llm::Role::assistant, res.final_text});
                    } catch (const std::exception& e) {
                        r.error = true;
                        r.error_kind = e.what();
                        r.score = judge::Score::zero;
                        r.rationale = "provider or grading failure";
                        aborted = true;
                    }
                    r.finished_at = detail::iso_now();
                    std::lock_guard<std::mutex> lock(sink_mu);
                    result.records.push_back(std::move(r));
                }
            }
        };
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (const auto& r : result.records) result.partial_failures |= r.error;

    // Deterministic order: endpoint config order, then taskset order, then turn.
    std::map<std::string, std::size_t> endpoint_rank, task_rank;
    for (std::size_t i = 0; i < cfg.endpoints.size(); ++i)
        endpoint_rank[cfg.endpoints[i].name] = i;
    for (std::size_t i = 0; i < ts.tasks.size(); ++i) task_rank[ts.tasks[i].id] = i;
    std::sort(result.records.begin(), result.records.end(),
              [&](const RunRecord& a, const RunRecord& b) {
                  auto ka = std::tuple(endpoint_rank[a.model], task_rank[a.task_id],
                                       a.turn_index);
                  auto kb = std::tuple(endpoint_rank[b.model], task_rank[b.task_id],
                                       b.turn_index);
                  return ka < kb;
              });

    write_records(result.records, cfg.output_dir / "records.jsonl");
    return result;
}

// --- mock script construction ---------------------------------------------------

// A correct answer, rendered from the gold the way a cooperative model would
// phrase it.
inline std::string gold_reply_text(const task::GoldAnswer& g) {
    using Kind = task::GoldAnswer::Kind;
    switch (g.kind) {
        case Kind::literal: return g.text;
        case Kind::boolean: return g.value ? "yes" : "no";
        case Kind::time_value: {
            int h = g.minutes / 60, m = g.minutes % 60;
            char buf[16];
            std::snprintf(buf, sizeof(buf), "%d:%02d", h, m);
            return buf;
        }
        case Kind::literal_set: {
            std::string out;
            for (std::size_t i = 0; i < g.texts.size(); ++i) {
                if (i) out += ", ";
                out += g.texts[i];
            }
            return out;
        }
        case Kind::permutation_set: {
            std::string out;
            for (std::size_t p = 0; p < g.permutations.size(); ++p) {
                if (p) out += "\n";
                for (std::size_t i = 0; i < g.permutations[p].size(); ++i) {
                    if (i) out += ", ";
                    out += g.permutations[p][i];
                }
            }
            return out;
        }
        default: return g.text;  // formula_equiv
    }
}

enum class MockBehavior { gold, wrong };

// Writes a mock provider script answering every turn of every task either
// correctly or wrongly, chosen per task. Conversations are simulated exactly
// the way the runner builds them, so the hash keys line up.
inline void build_mock_script(
    const task::TaskSet& ts, const std::filesystem::path& script_path,
    const std::function<MockBehavior(const task::Task&, std::size_t)>& behavior,
    const std::string& system_message = "", bool with_think_trace = true) {
    json entries = json::object();
    for (std::size_t idx = 0; idx < ts.tasks.size(); ++idx) {
        const task::Task& t = ts.tasks[idx];
        std::vector<llm::ChatMessage> history;
        if (!system_message.empty()) history.push_back({llm::Role::system, system_message});
        for (std::size_t turn = 0; turn < t.turns.size(); ++turn) {
            history.push_back({llm::Role::user, t.turns[turn].prompt});
            MockBehavior b = behavior(t, turn);
            std::string answer;
            if (b == MockBehavior::gold && t.turns[turn].gold)
                answer = gold_reply_text(*t.turns[turn].gold);
            else if (b == MockBehavior::gold)
                answer = "I follow every rubric criterion carefully.";
            else
                answer = "I do not know.";
            std::string reply = answer;
            if (with_think_trace)
                reply = "<think>Working through the constraints step by step before "
                        "committing to an answer.</think>\n" +
                        answer;
            std::string key = llm::message_hash_hex(history);
            if (entries.contains(key) && entries[key]["reply"] != reply)
                throw std::runtime_error(
                    "mock script conflict: task " + t.id +
                    " shares a conversation hash with an earlier task but needs a "
                    "different reply");
            entries[key] = {{"reply", reply}};
            llm::ThinkSplit split = llm::extract_think(reply);
            history.push_back({llm::Role::assistant, split.final});
        }
    }
    json script;
    script["entries"] = entries;
    script["default"] = {{"reply", "I do not know."}};
    std::ofstream out(script_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write mock script: " + script_path.string());
    out << script.dump(2) << "\n";
}

// Judge script replying with a fixed score whatever the prompt.
inline void build_mock_judge_script(const std::filesystem::path& script_path,
                                    const std::string& score) {
    json script;
    script["default"] = {{"reply", "Evaluated against the rubric criteria.\n" + score}};
    std::ofstream out(script_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write mock script: " + script_path.string());
    out << script.dump(2) << "\n";
}

}  // namespace logos::bench
