#pragma once

// Aggregation and reporting: per-model leaderboard (percent score, token
// statistics, truncation rate, redundancy), markdown and CSV emission with
// byte-deterministic output, and reasoning-trace corpus collection.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "logos/runner.hpp"

namespace logos::bench {

class ReportError : public std::runtime_error {
public:
    explicit ReportError(const std::string& msg) : std::runtime_error(msg) {}
};

struct LeaderboardRow {
    int rank = 0;
    std::string model;
    int percent = 0;  // 100 * mean task score, rounded half-up
    long task_count = 0;
    long avg_reasoning_tokens = 0;         // over all completed turns, rounded half-up
    long avg_reasoning_tokens_solved = 0;  // over score-1 turns only
    long solved_turns = 0;
    double truncation_rate = 0.0;          // truncated / completed turns
    double avg_redundancy = 0.0;           // mean redundancy ratio over completed turns
    long error_count = 0;
};

struct Leaderboard {
    std::vector<LeaderboardRow> rows;
};

namespace detail {

inline long round_half_up(long double x) { return static_cast<long>(std::floor(x + 0.5L)); }

}  // namespace detail

// Order-independent aggregation over run records. A task's score is the mean
// of its turn scores; a model's percent is 100 * mean task score, rounded
// half-up. Ranking is percent descending, ties broken by model name.
inline Leaderboard aggregate(const std::vector<RunRecord>& records) {
    struct Acc {
        std::map<std::string, std::pair<long double, long>> task_scores;  // sum, turns
        long completed = 0;
        long truncated = 0;
        long errors = 0;
        long double tokens_sum = 0;
        long double tokens_solved_sum = 0;
        long solved = 0;
        long double redundancy_sum = 0;
    };
    std::map<std::string, Acc> models;
    for (const auto& r : records) {
        Acc& acc = models[r.model];
        auto& [sum, turns] = acc.task_scores[r.task_id];
        sum += static_cast<long double>(judge::score_value(r.score));
        turns += 1;
        if (r.error) {
            ++acc.errors;  // scored 0 above; kept distinguishable in the row
            continue;
        }
        ++acc.completed;
        if (r.truncated) ++acc.truncated;
        acc.tokens_sum += static_cast<long double>(r.reasoning_tokens);
        acc.redundancy_sum += static_cast<long double>(r.redundancy.redundancy_ratio);
        if (r.score == judge::Score::one) {
            ++acc.solved;
            acc.tokens_solved_sum += static_cast<long double>(r.reasoning_tokens);
        }
    }

    Leaderboard lb;
    for (const auto& [model, acc] : models) {
        LeaderboardRow row;
        row.model = model;
        row.task_count = static_cast<long>(acc.task_scores.size());
        long double score_sum = 0;
        for (const auto& [task, st] : acc.task_scores)
            score_sum += st.first / static_cast<long double>(st.second);
        row.percent = static_cast<int>(detail::round_half_up(
            100.0L * score_sum / static_cast<long double>(std::max<long>(row.task_count, 1))));
        row.avg_reasoning_tokens = acc.completed
                                       ? detail::round_half_up(acc.tokens_sum /
                                                               static_cast<long double>(acc.completed))
                                       : 0;
        row.avg_reasoning_tokens_solved =
            acc.solved ? detail::round_half_up(acc.tokens_solved_sum /
                                               static_cast<long double>(acc.solved))
                       : 0;
        row.solved_turns = acc.solved;
        row.truncation_rate = acc.completed ? static_cast<double>(acc.truncated) /
                                                  static_cast<double>(acc.completed)
                                            : 0.0;
        row.avg_redundancy = acc.completed ? static_cast<double>(acc.redundancy_sum /
                                                                 static_cast<long double>(acc.completed))
                                           : 0.0;
        row.error_count = acc.errors;
        lb.rows.push_back(std::move(row));
    }
    std::sort(lb.rows.begin(), lb.rows.end(), [](const LeaderboardRow& a, const LeaderboardRow& b) {
        return a.percent != b.percent ? a.percent > b.percent : a.model < b.model;
    });
    for (std::size_t i = 0; i < lb.rows.size(); ++i) lb.rows[i].rank = static_cast<int>(i + 1);
    return lb;
}

namespace detail {

inline std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

}  // namespace detail

// Markdown report: a ranking table (Rank | Model | Score), a reasoning-token
// table (Rank | Model | Avg. Reasoning Tokens, ascending), and a detail table
// with the remaining statistics.
inline std::string render_markdown(const Leaderboard& lb) {
    std::string out;
    out += "# Model Performance Ranking\n\n";
    out += "| Rank | Model | Score |\n";
    out += "|---:|:---|---:|\n";
    for (const auto& r : lb.rows) {
        out += "| " + std::to_string(r.rank) + " | " + r.model + " | " +
               std::to_string(r.percent) + "% |\n";
    }
    out += "\n# Average Reasoning Tokens\n\n";
    out += "| Rank | Model | Avg. Reasoning Tokens |\n";
    out += "|---:|:---|---:|\n";
    std::vector<LeaderboardRow> by_tokens = lb.rows;
    std::sort(by_tokens.begin(), by_tokens.end(),
              [](const LeaderboardRow& a, const LeaderboardRow& b) {
                  return a.avg_reasoning_tokens != b.avg_reasoning_tokens
                             ? a.avg_reasoning_tokens < b.avg_reasoning_tokens
                             : a.model < b.model;
              });
    for (std::size_t i = 0; i < by_tokens.size(); ++i) {
        out += "| " + std::to_string(i + 1) + " | " + by_tokens[i].model + " | " +
               std::to_string(by_tokens[i].avg_reasoning_tokens) + " |\n";
    }
    out += "\n# Run Details\n\n";
    out += "| Model | Tasks | Score | Avg. Reasoning Tokens (all turns) | "
           "Avg. Reasoning Tokens (solved turns) | Truncation Rate | Avg. Redundancy | "
           "Errors |\n";
    out += "|:---|---:|---:|---:|---:|---:|---:|---:|\n";
    for (const auto& r : lb.rows) {
        out += "| " + r.model + " | " + std::to_string(r.task_count) + " | " +
               std::to_string(r.percent) + "% | " + std::to_string(r.avg_reasoning_tokens) +
               " | " +
               (r.solved_turns ? std::to_string(r.avg_reasoning_tokens_solved) : "n/a") +
               " | " + detail::fixed(100.0 * r.truncation_rate, 1) + "% | " +
               detail::fixed(r.avg_redundancy, 3) + " | " + std::to_string(r.error_count) +
               " |\n";
    }
    return out;
}

inline std::string render_csv(const Leaderboard& lb) {
    std::string out =
        "rank,model,percent,task_count,avg_reasoning_tokens_all,"
        "avg_reasoning_tokens_solved,solved_turns,truncation_rate,avg_redundancy_ratio,"
        "error_count\n";
    for (const auto& r : lb.rows) {
        out += std::to_string(r.rank) + "," + r.model + "," + std::to_string(r.percent) + "," +
               std::to_string(r.task_count) + "," + std::to_string(r.avg_reasoning_tokens) +
               "," + std::to_string(r.avg_reasoning_tokens_solved) + "," +
               std::to_string(r.solved_turns) + "," + detail::fixed(r.truncation_rate, 4) +
               "," + detail::fixed(r.avg_redundancy, 4) + "," + std::to_string(r.error_count) +
               "\n";
    }
    return out;
}

enum class ReportFormat { markdown, csv };

// Deterministic bytes for identical inputs. Refuses an empty record set.
inline std::vector<std::filesystem::path> emit_report(
    const Leaderboard& lb, const std::vector<RunRecord>& records,
    const std::filesystem::path& out_dir,
    const std::vector<ReportFormat>& formats = {ReportFormat::markdown, ReportFormat::csv}) {
    if (records.empty())
        throw ReportError("refusing to generate a report from an empty record set");
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> written;
    for (ReportFormat f : formats) {
        std::filesystem::path path =
            out_dir / (f == ReportFormat::markdown ? "leaderboard.md" : "leaderboard.csv");
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ReportError("cannot write report file: " + path.string());
        out << (f == ReportFormat::markdown ? render_markdown(lb) : render_csv(lb));
        written.push_back(path);
    }
    return written;
}

// Reasoning-trace corpus: one JSONL line per matching record with (prompt,
// reasoning trace, final answer, verdict). Requires a run executed with
// trace_collection = true; otherwise emits an empty corpus with a warning.
inline std::size_t collect_traces(const std::vector<RunRecord>& records,
                                  const std::filesystem::path& out_path, bool only_correct,
                                  std::ostream& warn = std::cerr) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ReportError("cannot write trace corpus: " + out_path.string());
    out << "#schema logos-bench-traces/1\n";
    bool any_payload = false;
    for (const auto& r : records)
        any_payload |= !r.prompt.empty() || !r.final_text.empty() || !r.reasoning_trace.empty();
    if (!any_payload) {
        warn << "warning: records carry no prompts or traces (run with trace_collection = "
                "true); corpus is empty\n";
        return 0;
    }
    std::size_t count = 0;
    for (const auto& r : records) {
        if (r.error) continue;
        if (only_correct && r.score != judge::Score::one) continue;
        json j;
        j["task_id"] = r.task_id;
        j["turn_index"] = r.turn_index;
        j["model"] = r.model;
        j["prompt"] = r.prompt;
        j["reasoning_trace"] = r.reasoning_trace;
        j["final_answer"] = r.final_text;
        j["score"] = judge::score_value(r.score);
        out << j.dump() << "\n";
        ++count;
    }
    return count;
}

}  // namespace logos::bench
