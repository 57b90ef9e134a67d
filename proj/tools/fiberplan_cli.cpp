// SPDX-License-Identifier: BSD-3-Clause
//
// fiberplan: plan, bench, meta and scaling commands.
//
// Exit codes: 0 solved or suite completed, 1 usage or config error,
// 2 infeasible, 3 timed out.

#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fiberplan/bench.hpp"
#include "fiberplan/config.hpp"
#include "fiberplan/svg.hpp"

using namespace fiberplan;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitTimeout = 3;

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

std::string svg_path_for(const std::string& csv)
{
    auto dot = csv.find_last_of('.');
    return (dot == std::string::npos ? csv : csv.substr(0, dot)) + ".svg";
}

std::vector<PlannerName> parse_planner_list(const std::string& list)
{
    std::vector<PlannerName> names;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            names.push_back(parse_planner_name(item));
    if (names.empty())
        throw std::invalid_argument("empty planner list");
    return names;
}

std::vector<std::size_t> parse_size_list(const std::string& list)
{
    std::vector<std::size_t> values;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            values.push_back(std::stoull(item));
    return values;
}

void configure_logging()
{
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(spdlog::level::warn);
    if (const char* level = std::getenv("FIBERPLAN_LOG"))
        spdlog::set_level(spdlog::level::from_str(level));
}

struct Options {
    std::string config;
    std::optional<std::string> planner;
    std::optional<std::uint64_t> seed;
    std::optional<double> time_limit;
    std::optional<std::size_t> runs;
    std::optional<std::string> out;
    bool plot = false;
    std::size_t parallel = 1;
    std::string n_list = "3,4,5,6,7";
    bool log_time = false;
};

void log_record(const RunRecord& r)
{
    spdlog::info("{} {} run {} seed {}: {} in {:.3f}s", r.planner, r.environment, r.run, r.seed,
                 status_name(r.status), r.time_s);
}

int cmd_plan(const Options& opt)
{
    ParsedConfig parsed = parse_config(read_file(opt.config));
    if (!std::holds_alternative<ProblemConfig>(parsed))
        throw ConfigError("experiments", 0, "plan expects a problem config, not a suite");
    ProblemConfig config = std::get<ProblemConfig>(parsed);
    if (opt.planner)
        config.planner.planner = parse_planner_name(*opt.planner);
    if (opt.seed)
        config.planner.seed = *opt.seed;
    if (opt.time_limit)
        config.planner.time_limit = *opt.time_limit;
    config.planner.validate();

    PlanningProblem problem = make_problem(config.environment);
    spdlog::info("planning {} with {} ({} levels)", describe(config.environment),
                 planner_name(config.planner.planner), problem.levels());
    PlanOutcome outcome = plan(problem, config.planner);

    const std::string out = opt.out ? *opt.out : config.output.value_or("solution.json");
    write_file(out, solution_to_json(config, problem.space(problem.levels() - 1), outcome).dump(2) + "\n");

    switch (outcome.status)
    {
        case PlanStatus::Solved:
            std::cout << "solved: cost " << outcome.cost << ", " << outcome.path->waypoints.size() << " waypoints, "
                      << outcome.time_s << " s; solution written to " << out << "\n";
            return kExitOk;
        case PlanStatus::Infeasible:
            std::cout << "infeasible (confidence " << outcome.confidence << ")";
            if (!outcome.message.empty())
                std::cout << ": " << outcome.message;
            std::cout << "\n";
            return kExitInfeasible;
        default:
            std::cout << "timed out after " << outcome.time_s << " s without a solution\n";
            return kExitTimeout;
    }
}

BenchSuite suite_from_options(const Options& opt)
{
    BenchSuite suite;
    ParsedConfig parsed = parse_config(read_file(opt.config));
    if (std::holds_alternative<BenchSuite>(parsed))
    {
        suite = std::get<BenchSuite>(parsed);
    }
    else
    {
        const ProblemConfig& pc = std::get<ProblemConfig>(parsed);
        Experiment e;
        e.environment = pc.environment;
        e.planners = {pc.planner};
        e.time_limit = pc.planner.time_limit;
        e.base_seed = pc.planner.seed;
        suite.experiments = {e};
    }
    for (Experiment& e : suite.experiments)
    {
        if (opt.runs)
            e.runs = *opt.runs;
        if (opt.time_limit)
            e.time_limit = *opt.time_limit;
        if (opt.seed)
            e.base_seed = *opt.seed;
        if (opt.planner)
        {
            PlannerConfig base = e.planners.front();
            e.planners.clear();
            for (PlannerName n : parse_planner_list(*opt.planner))
            {
                base.planner = n;
                e.planners.push_back(base);
            }
        }
    }
    if (opt.out)
        suite.csv_path = *opt.out;
    if (opt.parallel > 1)
        suite.parallel = opt.parallel;
    suite.validate();
    return suite;
}

int cmd_bench(const Options& opt)
{
    BenchSuite suite = suite_from_options(opt);
    std::vector<RunRecord> records = run_suite(suite, log_record);
    {
        std::ofstream out(suite.csv_path);
        if (!out)
            throw std::runtime_error("cannot write '" + suite.csv_path + "'");
        write_csv(out, records);
    }
    auto cells = summarize(records);
    write_summary(std::cout, cells);
    if (opt.plot || suite.svg_path)
    {
        std::vector<BoxData> boxes;
        for (const CellSummary& c : cells)
        {
            BoxData b{c.planner + " " + c.environment, {}};
            for (const RunRecord& r : records)
                if (r.planner == c.planner && r.environment == c.environment && r.params_hash == c.params_hash)
                    b.values.push_back(r.time_s);
            boxes.push_back(b);
        }
        const std::string svg = suite.svg_path.value_or(svg_path_for(suite.csv_path));
        write_file(svg, svg_box_plot("run time per cell", "time [s]", boxes));
    }
    std::cout << records.size() << " runs written to " << suite.csv_path << "\n";
    return kExitOk;
}

int cmd_meta(const Options& opt)
{
    auto algorithms = parse_planner_list(opt.planner.value_or("qrrt,qmp"));
    const std::size_t runs = opt.runs.value_or(10);
    const double limit = opt.time_limit.value_or(60.0);
    const std::string out = opt.out.value_or("meta.csv");
    std::vector<RunRecord> records;
    auto rows = meta_analysis(algorithms, default_meta_variants(), default_meta_environments(), runs, limit,
                              opt.seed.value_or(0), opt.parallel, &records, log_record);
    {
        std::ofstream csv(out);
        if (!csv)
            throw std::runtime_error("cannot write '" + out + "'");
        write_meta_csv(csv, rows);
    }
    write_meta_csv(std::cout, rows);
    if (opt.plot)
    {
        std::vector<BoxData> boxes;
        for (const MetaRow& r : rows)
            boxes.push_back({r.algorithm + " " + r.variant, {r.ratio}});
        write_file(svg_path_for(out), svg_box_plot("runtime ratio per primitive", "ratio", boxes));
    }
    return kExitOk;
}

int cmd_scaling(const Options& opt)
{
    PlannerConfig planner;
    planner.planner = parse_planner_name(opt.planner.value_or("rrt"));
    const auto n_list = parse_size_list(opt.n_list);
    const std::size_t runs = opt.runs.value_or(10);
    const double limit = opt.time_limit.value_or(60.0);
    const std::string out = opt.out.value_or("scaling.csv");
    ScalingResult result = scaling_study(planner, n_list, runs, limit, opt.seed.value_or(0), opt.log_time,
                                         opt.parallel, log_record);
    std::ostringstream table;
    table << "n,mean_time_s,successes,runs\n";
    for (const ScalingPoint& p : result.points)
        table << p.n << ',' << p.mean_time << ',' << p.successes << ',' << p.runs << "\n";
    write_file(out, table.str());
    std::cout << table.str();
    if (result.points.size() >= 4)
    {
        const auto& c = result.fit.coefficients;
        std::cout << "cubic fit (" << (result.fit.log_time ? "log-time" : "time") << "): " << c[0] << " + " << c[1]
                  << " n + " << c[2] << " n^2 + " << c[3] << " n^3, rms residual " << result.fit.residual << "\n";
    }
    if (opt.plot)
    {
        Series s{planner_name(planner.planner), {}};
        for (const ScalingPoint& p : result.points)
            s.points.emplace_back(static_cast<double>(p.n), p.mean_time);
        write_file(svg_path_for(out), svg_line_plot("hypercube scaling", "dimension n", "mean time [s]", {s}, true));
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
    configure_logging();
    CLI::App app{"Multilevel motion planning over fiber bundle sequences"};
    app.require_subcommand(1);
    Options opt;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--planner", opt.planner, "planner name (bench, meta: comma-separated list)");
        sub->add_option("--seed", opt.seed, "seed, or base seed for suites");
        sub->add_option("--time-limit", opt.time_limit, "time limit per run in seconds")->check(CLI::PositiveNumber);
        sub->add_option("--out", opt.out, "output path");
    };
    auto* plan_cmd = app.add_subcommand("plan", "solve one problem and write the solution JSON");
    plan_cmd->add_option("--config", opt.config, "problem config (JSON)")->required();
    common(plan_cmd);

    auto* bench_cmd = app.add_subcommand("bench", "run a seeded benchmark suite and write CSV");
    bench_cmd->add_option("--config", opt.config, "suite or problem config (JSON)")->required();
    common(bench_cmd);
    bench_cmd->add_option("--runs", opt.runs, "runs per cell")->check(CLI::PositiveNumber);
    bench_cmd->add_flag("--plot", opt.plot, "also write an SVG box summary");
    bench_cmd->add_option("--parallel", opt.parallel, "worker threads")->check(CLI::PositiveNumber);

    auto* meta_cmd = app.add_subcommand("meta", "runtime ratios of the primitive methods");
    common(meta_cmd);
    meta_cmd->add_option("--runs", opt.runs, "runs per cell")->check(CLI::PositiveNumber);
    meta_cmd->add_flag("--plot", opt.plot, "also write an SVG summary");
    meta_cmd->add_option("--parallel", opt.parallel, "worker threads")->check(CLI::PositiveNumber);

    auto* scaling_cmd = app.add_subcommand("scaling", "hypercube run time over the dimension, with a cubic fit");
    common(scaling_cmd);
    scaling_cmd->add_option("--runs", opt.runs, "runs per dimension")->check(CLI::PositiveNumber);
    scaling_cmd->add_option("--n", opt.n_list, "comma-separated dimensions, ascending");
    scaling_cmd->add_flag("--log-time", opt.log_time, "fit the cubic to log-time");
    scaling_cmd->add_flag("--plot", opt.plot, "also write an SVG line plot");
    scaling_cmd->add_option("--parallel", opt.parallel, "worker threads")->check(CLI::PositiveNumber);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e)
    {
        app.exit(e);
        return kExitUsage;
    }

    try
    {
        if (plan_cmd->parsed())
            return cmd_plan(opt);
        if (bench_cmd->parsed())
            return cmd_bench(opt);
        if (meta_cmd->parsed())
            return cmd_meta(opt);
        return cmd_scaling(opt);
    }
    catch (const ConfigError& e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
