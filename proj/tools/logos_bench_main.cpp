// logos-bench: generate, validate and run reasoning-benchmark tasksets and
// turn the results into leaderboard reports.
//
// Exit codes: 0 success, 1 partial failures during a run, 2 config or schema
// errors.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "logos/report.hpp"
#include "logos/runner.hpp"
#include "logos/taskgen.hpp"
#include "logos/taskset.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartialFailures = 1;
constexpr int kExitConfigError = 2;

int cmd_gen(const std::string& out_path, std::uint64_t seed, int per_taxonomy,
            const std::string& languages) {
    logos::taskgen::GenOptions opt;
    opt.seed = seed;
    opt.per_taxonomy = per_taxonomy;
    opt.languages.clear();
    for (const auto& l : logos::split_on(languages, ',')) {
        if (logos::trim(l).empty()) continue;
        opt.languages.push_back(logos::language_from_name(logos::trim(l)));
    }
    if (opt.languages.empty()) {
        std::cerr << "error: no languages selected\n";
        return kExitConfigError;
    }
    auto ts = logos::taskgen::make_starter_taskset(opt);
    logos::task::save_taskset(ts, out_path);
    std::cout << "wrote " << ts.tasks.size() << " tasks to " << out_path << "\n";
    return kExitOk;
}

int cmd_validate(const std::string& path) {
    logos::task::TaskSet ts;
    try {
        ts = logos::task::load_taskset(std::filesystem::path(path));
    } catch (const std::exception& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kExitConfigError;
    }
    auto violations = logos::taskgen::validate_taskset_full(ts);
    if (violations.empty()) {
        std::cout << "OK: " << ts.tasks.size() << " tasks, no violations\n";
        return kExitOk;
    }
    for (const auto& v : violations) std::cerr << "violation: " << v << "\n";
    std::cerr << violations.size() << " violation(s) in " << ts.tasks.size() << " tasks\n";
    return kExitConfigError;
}

int cmd_run(const std::string& config_path) {
    logos::bench::RunConfig cfg;
    try {
        cfg = logos::bench::load_run_config(std::filesystem::path(config_path));
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    }
    try {
        logos::llm::LlmClient client(logos::llm::LlmClient::Options{cfg.cache_dir, 3, 50});
        auto result = logos::bench::run_benchmark(cfg, client);
        auto lb = logos::bench::aggregate(result.records);
        auto files = logos::bench::emit_report(lb, result.records, cfg.output_dir);
        std::cout << "ran " << result.task_count << " tasks against " << cfg.endpoints.size()
                  << " endpoint(s); " << result.records.size() << " records\n";
        for (const auto& row : lb.rows)
            std::cout << "  #" << row.rank << " " << row.model << " " << row.percent << "%\n";
        std::cout << "records: " << (cfg.output_dir / "records.jsonl").string() << "\n";
        for (const auto& f : files) std::cout << "report:  " << f.string() << "\n";
        if (result.partial_failures) {
            std::cerr << "warning: some task turns failed; their records are flagged with "
                         "error = true\n";
            return kExitPartialFailures;
        }
        return kExitOk;
    } catch (const logos::bench::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << "\n";
        return kExitPartialFailures;
    }
}

int cmd_report(const std::string& records_path, const std::string& out_dir,
               const std::string& formats) {
    try {
        auto records = logos::bench::read_records(records_path);
        std::vector<logos::bench::ReportFormat> fmts;
        for (const auto& f : logos::split_on(formats, ',')) {
            std::string name = logos::trim(f);
            if (name == "markdown") fmts.push_back(logos::bench::ReportFormat::markdown);
            else if (name == "csv") fmts.push_back(logos::bench::ReportFormat::csv);
            else if (!name.empty()) {
                std::cerr << "error: unknown format '" << name << "'\n";
                return kExitConfigError;
            }
        }
        auto lb = logos::bench::aggregate(records);
        auto files = logos::bench::emit_report(lb, records, out_dir, fmts);
        for (const auto& f : files) std::cout << "report: " << f.string() << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "report failed: " << e.what() << "\n";
        return kExitConfigError;
    }
}

int cmd_traces(const std::string& records_path, const std::string& out_path,
               bool only_correct) {
    try {
        auto records = logos::bench::read_records(records_path);
        auto n = logos::bench::collect_traces(records, out_path, only_correct);
        std::cout << "wrote " << n << " trace line(s) to " << out_path << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "traces failed: " << e.what() << "\n";
        return kExitConfigError;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"logos-bench: deterministic reasoning-benchmark harness"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "generate the starter taskset as JSONL");
    std::string gen_out;
    std::uint64_t gen_seed = 1;
    int gen_per_tax = 12;
    std::string gen_langs = "pl,en";
    gen->add_option("--out", gen_out, "output taskset path")->required();
    gen->add_option("--seed", gen_seed, "bank seed");
    gen->add_option("--per-taxonomy", gen_per_tax, "tasks per deterministic taxonomy")
        ->check(CLI::PositiveNumber);
    gen->add_option("--languages", gen_langs, "comma-separated subset of pl,en");

    auto* validate = app.add_subcommand("validate", "lint a taskset file");
    std::string validate_path;
    validate->add_option("taskset", validate_path, "taskset JSONL path")->required();

    auto* run = app.add_subcommand("run", "execute a benchmark run from a config file");
    std::string run_config;
    run->add_option("--config", run_config, "run config path")->required();

    auto* report = app.add_subcommand("report", "aggregate records into leaderboard files");
    std::string report_records, report_out, report_formats = "markdown,csv";
    report->add_option("--records", report_records, "records.jsonl path")->required();
    report->add_option("--out-dir", report_out, "output directory")->required();
    report->add_option("--format", report_formats, "comma-separated: markdown,csv");

    auto* traces = app.add_subcommand("traces", "collect a reasoning-trace corpus");
    std::string traces_records, traces_out;
    bool traces_only_correct = false;
    traces->add_option("--records", traces_records, "records.jsonl path")->required();
    traces->add_option("--out", traces_out, "corpus output path")->required();
    traces->add_flag("--only-correct", traces_only_correct, "keep only score-1 records");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(gen_out, gen_seed, gen_per_tax, gen_langs);
        if (validate->parsed()) return cmd_validate(validate_path);
        if (run->parsed()) return cmd_run(run_config);
        if (report->parsed()) return cmd_report(report_records, report_out, report_formats);
        if (traces->parsed()) return cmd_traces(traces_records, traces_out, traces_only_correct);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
    return kExitConfigError;
}
