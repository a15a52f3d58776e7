#pragma once

// Provider-agnostic chat-completion client.
//
// Two transports share one retry/caching/accounting path:
//   - http(s? plain http only): chat-completions-style POST with a JSON body
//     {model, messages, max_tokens, temperature} to {base_url}/chat/completions.
//   - mock://<script.json>: replies come from a script file keyed by prompt
//     hash, with substring matchers, a default reply, scripted truncation and
//     injectable fault statuses. No sockets involved.
//
// Retry policy: only transient failures (connection errors, timeouts, HTTP
// 429 and 5xx) are retried, with exponential backoff and a request id that is
// stable across attempts. Other 4xx fail immediately.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "logos/text.hpp"

namespace logos::llm {

using json = nlohmann::json;

class AuthError : public std::runtime_error {
public:
    explicit AuthError(const std::string& msg) : std::runtime_error(msg) {}
};

class Timeout : public std::runtime_error {
public:
    explicit Timeout(const std::string& msg) : std::runtime_error(msg) {}
};

class RateLimited : public std::runtime_error {
public:
    explicit RateLimited(const std::string& msg) : std::runtime_error(msg) {}
};

class ProviderError : public std::runtime_error {
public:
    ProviderError(int status, const std::string& body)
        : std::runtime_error("provider error " + std::to_string(status) + ": " + body),
          status(status),
          body(body) {}
    int status;
    std::string body;
};

struct ModelEndpoint {
    std::string name;            // leaderboard label; unique within a run
    std::string base_url;        // http://host:port[/prefix] or mock://script.json
    std::string credential_env;  // env var holding the API key; empty = local, no auth
    std::string system_message;  // optional; prepended when the conversation has none
    int max_tokens = 4096;
    double temperature = 0.0;
    int request_timeout_s = 60;
    int parallelism = 1;

    bool is_mock() const { return base_url.rfind("mock://", 0) == 0; }
};

enum class Role { system, user, assistant };

inline std::string_view role_name(Role r) {
    switch (r) {
        case Role::system: return "system";
        case Role::user: return "user";
        default: return "assistant";
    }
}

struct ChatMessage {
    Role role = Role::user;
    std::string content;
};

struct CompletionResult {
    std::string raw_text;
    std::string reasoning_trace;  // interior of the think span, if any
    std::string final_text;
    long reasoning_tokens = 0;
    long completion_tokens = 0;
    bool truncated = false;       // finish reason was a length stop
    long latency_ms = 0;
    std::optional<long> provider_completion_tokens;
    std::optional<long> provider_reasoning_tokens;
    bool trace_malformed = false;
    std::string token_source;     // "provider", "fallback" or "mixed"
};

// --- think-delimiter extraction ---------------------------------------------

struct ThinkSplit {
    std::string trace;
    std::string final;
    bool malformed = false;  // unbalanced or repeated tags; whole text kept as final
};

inline ThinkSplit extract_think(std::string_view raw) {
    constexpr std::string_view open = "<think>", close = "</think>";
    std::size_t n_open = 0, n_close = 0;
    for (std::size_t p = raw.find(open); p != std::string_view::npos;
         p = raw.find(open, p + open.size()))
        ++n_open;
    for (std::size_t p = raw.find(close); p != std::string_view::npos;
         p = raw.find(close, p + close.size()))
        ++n_close;
    if (n_open == 0 && n_close == 0) return {"", std::string(raw), false};
    std::size_t o = raw.find(open), c = raw.find(close);
    if (n_open != 1 || n_close != 1 || c < o) return {"", std::string(raw), true};
    std::string trace(raw.substr(o + open.size(), c - o - open.size()));
    std::string final = std::string(raw.substr(0, o)) + std::string(raw.substr(c + close.size()));
    return {std::move(trace), trim(final), false};
}

// --- token accounting -------------------------------------------------------

// Fallback counter used when the provider reports nothing: one token per
// maximal non-whitespace run, except runs longer than 12 characters, which
// count ceil(length / 6).
inline long count_tokens(std::string_view text) {
    long tokens = 0;
    std::size_t run = 0;
    auto flush = [&] {
        if (run == 0) return;
        tokens += run > 12 ? static_cast<long>((run + 5) / 6) : 1;
        run = 0;
    };
    for (char ch : text) {
        if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n' || ch == '\f' || ch == '\v')
            flush();
        else
            ++run;
    }
    flush();
    return tokens;
}

// Longest prefix of `text` whose fallback token count stays within budget.
inline std::string clip_to_tokens(std::string_view text, long budget) {
    long tokens = 0;
    std::size_t run_start = 0;
    bool in_run = false;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        bool ws = i == text.size() || text[i] == ' ' || text[i] == '\t' || text[i] == '\r' ||
                  text[i] == '\n' || text[i] == '\f' || text[i] == '\v';
        if (!ws && !in_run) {
            in_run = true;
            run_start = i;
        }
        if (ws && in_run) {
            in_run = false;
            std::size_t len = i - run_start;
            tokens += len > 12 ? static_cast<long>((len + 5) / 6) : 1;
            if (tokens > budget) return std::string(text.substr(0, run_start));
        }
    }
    return std::string(text);
}

// --- hashing ----------------------------------------------------------------

inline std::uint64_t message_hash(const std::vector<ChatMessage>& msgs) {
    std::uint64_t h = fnv1a("logos-chat/1");
    for (const auto& m : msgs) {
        h = fnv1a(role_name(m.role), h);
        h = fnv1a("\x1f", h);
        h = fnv1a(m.content, h);
        h = fnv1a("\x1e", h);
    }
    return h;
}

inline std::string message_hash_hex(const std::vector<ChatMessage>& msgs) {
    return hex64(message_hash(msgs));
}

// --- completion cache -------------------------------------------------------

namespace detail {

inline json completion_to_json(const CompletionResult& r) {
    json j;
    j["raw_text"] = r.raw_text;
    j["reasoning_trace"] = r.reasoning_trace;
    j["final_text"] = r.final_text;
    j["reasoning_tokens"] = r.reasoning_tokens;
    j["completion_tokens"] = r.completion_tokens;
    j["truncated"] = r.truncated;
    j["latency_ms"] = r.latency_ms;
    if (r.provider_completion_tokens) j["provider_completion_tokens"] = *r.provider_completion_tokens;
    if (r.provider_reasoning_tokens) j["provider_reasoning_tokens"] = *r.provider_reasoning_tokens;
    j["trace_malformed"] = r.trace_malformed;
    j["token_source"] = r.token_source;
    return j;
}

inline CompletionResult completion_from_json(const json& j) {
    CompletionResult r;
    r.raw_text = j.value("raw_text", "");
    r.reasoning_trace = j.value("reasoning_trace", "");
    r.final_text = j.value("final_text", "");
    r.reasoning_tokens = j.value("reasoning_tokens", 0L);
    r.completion_tokens = j.value("completion_tokens", 0L);
    r.truncated = j.value("truncated", false);
    r.latency_ms = j.value("latency_ms", 0L);
    if (j.contains("provider_completion_tokens"))
        r.provider_completion_tokens = j["provider_completion_tokens"].get<long>();
    if (j.contains("provider_reasoning_tokens"))
        r.provider_reasoning_tokens = j["provider_reasoning_tokens"].get<long>();
    r.trace_malformed = j.value("trace_malformed", false);
    r.token_source = j.value("token_source", "fallback");
    return r;
}

}  // namespace detail

// File-backed response cache keyed by (endpoint name, message hash,
// temperature); access is serialized.
class CompletionCache {
public:
    CompletionCache() = default;
    explicit CompletionCache(std::filesystem::path dir) : dir_(std::move(dir)) {
        if (!dir_.empty()) std::filesystem::create_directories(dir_);
    }

    bool enabled() const { return !dir_.empty(); }

    static std::string key(const ModelEndpoint& e, std::uint64_t msg_hash) {
        char temp[32];
        std::snprintf(temp, sizeof(temp), "%.6f", e.temperature);
        std::uint64_t h = fnv1a(e.name);
        h = fnv1a("|", h);
        h = fnv1a(hex64(msg_hash), h);
        h = fnv1a("|", h);
        h = fnv1a(temp, h);
        return hex64(h);
    }

    std::optional<CompletionResult> get(const std::string& key) const {
        if (!enabled()) return std::nullopt;
        std::lock_guard<std::mutex> lock(mu_);
        std::ifstream in(dir_ / (key + ".json"));
        if (!in) return std::nullopt;
        try {
            json j = json::parse(in);
            return detail::completion_from_json(j);
        } catch (const json::exception&) {
            return std::nullopt;  // corrupt entry; treated as a miss
        }
    }

    void put(const std::string& key, const CompletionResult& r) const {
        if (!enabled()) return;
        std::lock_guard<std::mutex> lock(mu_);
        std::ofstream out(dir_ / (key + ".json"), std::ios::binary);
        out << detail::completion_to_json(r).dump();
    }

private:
    std::filesystem::path dir_;
    mutable std::mutex mu_;
};

// --- mock provider ----------------------------------------------------------

namespace detail {

struct MockEntry {
    std::string reply;
    bool truncated = false;
};

struct MockFault {
    std::string match;  // "*" or a 16-hex message hash
    int status = 500;
    long times = 0;     // remaining injections; decremented per attempt
};

struct MockScript {
    std::optional<MockEntry> fallback;
    std::map<std::string, MockEntry> entries;                 // message hash -> reply
    std::vector<std::pair<std::string, MockEntry>> contains;  // needle in last user message
    std::vector<MockFault> faults;
    long delay_ms = 0;
};

inline MockEntry mock_entry_from_json(const json& j) {
    MockEntry e;
    e.reply = j.value("reply", "");
    e.truncated = j.value("truncated", false);
    return e;
}

inline MockScript load_mock_script(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ProviderError(0, "mock script not found: " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ProviderError(0, "mock script is not valid JSON: " + std::string(e.what()));
    }
    MockScript s;
    s.delay_ms = j.value("delay_ms", 0L);
    if (j.contains("default")) s.fallback = mock_entry_from_json(j["default"]);
    if (j.contains("entries"))
        for (auto it = j["entries"].begin(); it != j["entries"].end(); ++it)
            s.entries[it.key()] = mock_entry_from_json(it.value());
    if (j.contains("contains"))
        for (const auto& c : j["contains"])
            s.contains.emplace_back(c.value("needle", ""), mock_entry_from_json(c));
    if (j.contains("faults"))
        for (const auto& f : j["faults"])
            s.faults.push_back(MockFault{f.value("match", "*"), f.value("status", 500),
                                         f.value("times", 0L)});
    return s;
}

// Thrown internally by providers; classified by the retry loop.
struct HttpStatus {
    int status;
    std::string body;
};

struct RawReply {
    std::string content;
    bool length_stop = false;
    std::optional<long> provider_completion_tokens;
    std::optional<long> provider_reasoning_tokens;
};

}  // namespace detail

// --- client -----------------------------------------------------------------

struct EndpointStats {
    long provider_calls = 0;  // actual transport dispatches (cache hits excluded)
    int max_in_flight = 0;
};

class LlmClient {
public:
    struct Options {
        std::filesystem::path cache_dir;  // empty disables the cache
        int max_retries = 3;              // retry budget for transient failures
        int backoff_base_ms = 50;
    };

    LlmClient() : LlmClient(Options{}) {}
    explicit LlmClient(Options opt) : opt_(std::move(opt)), cache_(opt_.cache_dir) {}

    CompletionResult complete(const ModelEndpoint& endpoint,
                              const std::vector<ChatMessage>& messages) {
        validate(endpoint, messages);

        if (!endpoint.is_mock() && !endpoint.credential_env.empty() &&
            std::getenv(endpoint.credential_env.c_str()) == nullptr) {
            throw AuthError("environment variable '" + endpoint.credential_env +
                            "' is not set for endpoint '" + endpoint.name + "'");
        }

        std::uint64_t mhash = message_hash(messages);
        std::string cache_key = CompletionCache::key(endpoint, mhash);
        if (auto hit = cache_.get(cache_key)) return *hit;

        auto t0 = std::chrono::steady_clock::now();
        detail::RawReply raw = dispatch_with_retries(endpoint, messages, mhash);
        auto t1 = std::chrono::steady_clock::now();

        CompletionResult r;
        r.raw_text = raw.content;
        ThinkSplit split = extract_think(raw.content);
        r.reasoning_trace = split.trace;
        r.final_text = split.final;
        r.trace_malformed = split.malformed;
        r.truncated = raw.length_stop;
        r.latency_ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
        r.provider_completion_tokens = raw.provider_completion_tokens;
        r.provider_reasoning_tokens = raw.provider_reasoning_tokens;
        r.completion_tokens = raw.provider_completion_tokens
                                  ? *raw.provider_completion_tokens
                                  : count_tokens(r.raw_text);
        r.reasoning_tokens = raw.provider_reasoning_tokens
                                 ? *raw.provider_reasoning_tokens
                                 : count_tokens(r.reasoning_trace);
        bool pc = raw.provider_completion_tokens.has_value();
        bool pr = raw.provider_reasoning_tokens.has_value();
        r.token_source = pc && pr ? "provider" : (!pc && !pr ? "fallback" : "mixed");

        cache_.put(cache_key, r);
        return r;
    }

    EndpointStats stats(const std::string& endpoint_name) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = stats_.find(endpoint_name);
        if (it == stats_.end()) return {};
        return EndpointStats{it->second.calls, it->second.max_in_flight};
    }

private:
    struct Counters {
        long calls = 0;
        int in_flight = 0;
        int max_in_flight = 0;
    };

    void validate(const ModelEndpoint& e, const std::vector<ChatMessage>& msgs) const {
        if (e.name.empty()) throw std::invalid_argument("endpoint name must be nonempty");
        if (e.max_tokens < 1) throw std::invalid_argument("max_tokens must be >= 1");
        if (e.temperature < 0) throw std::invalid_argument("temperature must be >= 0");
        if (msgs.empty()) throw std::invalid_argument("conversation must be nonempty");
        for (std::size_t i = 0; i < msgs.size(); ++i) {
            if (msgs[i].role == Role::system && i != 0)
                throw std::invalid_argument(
                    "conversation may start with at most one system message");
        }
    }

    struct InFlightGuard {
        LlmClient* client;
        const std::string& name;
        InFlightGuard(LlmClient* c, const std::string& n) : client(c), name(n) {
            std::lock_guard<std::mutex> lock(client->mu_);
            Counters& cnt = client->stats_[name];
            ++cnt.calls;
            ++cnt.in_flight;
            cnt.max_in_flight = std::max(cnt.max_in_flight, cnt.in_flight);
        }
        ~InFlightGuard() {
            std::lock_guard<std::mutex> lock(client->mu_);
            --client->stats_[name].in_flight;
        }
    };

    detail::RawReply dispatch_with_retries(const ModelEndpoint& endpoint,
                                           const std::vector<ChatMessage>& messages,
                                           std::uint64_t mhash) {
        std::string request_id = hex64(mhash ^ fnv1a(endpoint.name));
        int attempt = 0;
        while (true) {
            try {
                InFlightGuard guard(this, endpoint.name);
                if (endpoint.is_mock()) return mock_once(endpoint, messages, mhash);
                return http_once(endpoint, messages, request_id);
            } catch (const detail::HttpStatus& hs) {
                bool transient = hs.status == 429 || hs.status >= 500 || hs.status == 0;
                if (hs.status == 401 || hs.status == 403)
                    throw AuthError("endpoint '" + endpoint.name +
                                    "' rejected credentials: " + hs.body);
                if (!transient) throw ProviderError(hs.status, hs.body);
                if (attempt >= opt_.max_retries) {
                    if (hs.status == 429)
                        throw RateLimited("endpoint '" + endpoint.name +
                                          "' still rate-limited after " +
                                          std::to_string(attempt) + " retries");
                    throw ProviderError(hs.status, hs.body);
                }
            } catch (const Timeout&) {
                if (attempt >= opt_.max_retries) throw;
            }
            backoff(attempt++);
        }
    }

    void backoff(int attempt) const {
        if (opt_.backoff_base_ms <= 0) return;
        long ms = static_cast<long>(opt_.backoff_base_ms) << attempt;
        std::this_thread::sleep_for(std::chrono::milliseconds(ms));
    }

    detail::RawReply mock_once(const ModelEndpoint& endpoint,
                               const std::vector<ChatMessage>& messages, std::uint64_t mhash) {
        std::filesystem::path path(endpoint.base_url.substr(7));
        detail::MockScript* script = nullptr;
        {
            std::lock_guard<std::mutex> lock(mock_mu_);
            auto it = mock_scripts_.find(path.string());
            if (it == mock_scripts_.end()) {
                it = mock_scripts_
                         .emplace(path.string(), detail::load_mock_script(path))
                         .first;
            }
            script = &it->second;
            std::string hash = hex64(mhash);
            for (auto& fault : script->faults) {
                if (fault.times > 0 && (fault.match == "*" || fault.match == hash)) {
                    --fault.times;
                    throw detail::HttpStatus{fault.status, "injected fault"};
                }
            }
        }
        if (script->delay_ms > 0)
            std::this_thread::sleep_for(std::chrono::milliseconds(script->delay_ms));

        const detail::MockEntry* entry = nullptr;
        std::string hash = hex64(mhash);
        {
            std::lock_guard<std::mutex> lock(mock_mu_);
            auto hit = script->entries.find(hash);
            if (hit != script->entries.end()) {
                entry = &hit->second;
            } else {
                std::string last_user;
                for (auto it = messages.rbegin(); it != messages.rend(); ++it) {
                    if (it->role == Role::user) {
                        last_user = it->content;
                        break;
                    }
                }
                for (const auto& [needle, e] : script->contains) {
                    if (!needle.empty() && last_user.find(needle) != std::string::npos) {
                        entry = &e;
                        break;
                    }
                }
                if (!entry && script->fallback) entry = &*script->fallback;
            }
        }
        if (!entry) throw detail::HttpStatus{404, "no scripted reply for prompt hash " + hash};

        detail::RawReply raw;
        raw.content = entry->reply;
        raw.length_stop = entry->truncated;
        if (count_tokens(raw.content) > endpoint.max_tokens) {
            raw.content = clip_to_tokens(raw.content, endpoint.max_tokens);
            raw.length_stop = true;
        }
        return raw;
    }

    detail::RawReply http_once(const ModelEndpoint& endpoint,
                               const std::vector<ChatMessage>& messages,
                               const std::string& request_id) {
        auto [root, prefix] = split_url(endpoint.base_url);
        httplib::Client cli(root);
        cli.set_connection_timeout(endpoint.request_timeout_s, 0);
        cli.set_read_timeout(endpoint.request_timeout_s, 0);
        cli.set_write_timeout(endpoint.request_timeout_s, 0);

        json body;
        body["model"] = endpoint.name;
        body["messages"] = json::array();
        for (const auto& m : messages)
            body["messages"].push_back(
                {{"role", std::string(role_name(m.role))}, {"content", m.content}});
        body["max_tokens"] = endpoint.max_tokens;
        body["temperature"] = endpoint.temperature;

        httplib::Headers headers{{"X-Request-Id", request_id}};
        if (!endpoint.credential_env.empty()) {
            const char* key = std::getenv(endpoint.credential_env.c_str());
            headers.emplace("Authorization", std::string("Bearer ") + (key ? key : ""));
        }

        auto res = cli.Post(prefix + "/chat/completions", headers, body.dump(),
                            "application/json");
        if (!res) {
            auto err = res.error();
            if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
                err == httplib::Error::Write)
                throw Timeout("endpoint '" + endpoint.name + "': " + httplib::to_string(err));
            throw detail::HttpStatus{0, httplib::to_string(err)};  // transient transport error
        }
        if (res->status != 200) throw detail::HttpStatus{res->status, res->body};

        json j;
        try {
            j = json::parse(res->body);
        } catch (const json::exception& e) {
            throw ProviderError(res->status, std::string("unparsable body: ") + e.what());
        }
        detail::RawReply raw;
        try {
            const json& choice = j.at("choices").at(0);
            raw.content = choice.at("message").at("content").get<std::string>();
            raw.length_stop = choice.value("finish_reason", "stop") == "length";
        } catch (const json::exception& e) {
            throw ProviderError(res->status, std::string("unexpected body shape: ") + e.what());
        }
        if (j.contains("usage")) {
            const json& u = j["usage"];
            if (u.contains("completion_tokens"))
                raw.provider_completion_tokens = u["completion_tokens"].get<long>();
            if (u.contains("reasoning_tokens"))
                raw.provider_reasoning_tokens = u["reasoning_tokens"].get<long>();
            else if (u.contains("completion_tokens_details") &&
                     u["completion_tokens_details"].contains("reasoning_tokens"))
                raw.provider_reasoning_tokens =
                    u["completion_tokens_details"]["reasoning_tokens"].get<long>();
        }
        return raw;
    }

    static std::pair<std::string, std::string> split_url(const std::string& base_url) {
        auto scheme_end = base_url.find("://");
        if (scheme_end == std::string::npos)
            throw std::invalid_argument("base_url needs a scheme: " + base_url);
        auto path_start = base_url.find('/', scheme_end + 3);
        if (path_start == std::string::npos) return {base_url, ""};
        std::string prefix = base_url.substr(path_start);
        if (prefix == "/") prefix.clear();
        return {base_url.substr(0, path_start), prefix};
    }

    Options opt_;
    CompletionCache cache_;
    mutable std::mutex mu_;
    std::map<std::string, Counters> stats_;
    std::mutex mock_mu_;
    std::map<std::string, detail::MockScript> mock_scripts_;
};

}  // namespace logos::llm
