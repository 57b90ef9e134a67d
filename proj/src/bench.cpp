// SPDX-License-Identifier: BSD-3-Clause

#include "fiberplan/bench.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fiberplan/config.hpp"

namespace fiberplan {

namespace {

// Runs job(i) for i in [0, count) on `threads` workers.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& job)
{
    threads = std::max<std::size_t>(1, std::min(threads, count));
    if (threads == 1)
    {
        for (std::size_t i = 0; i < count; ++i)
            job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++)
                job(i);
        });
}

std::string format_double(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    std::ostringstream out;
    out << std::setprecision(17) << v;
    return out.str();
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        parts.push_back(cur);
    if (!s.empty() && s.back() == sep)
        parts.emplace_back();
    return parts;
}

EnvironmentSpec hypercube_spec(std::size_t n)
{
    EnvironmentSpec spec;
    spec.n = n;
    return spec;
}

struct Job {
    const PlanningProblem* problem;
    std::string environment;
    PlannerConfig config;
    std::size_t run;
    std::uint64_t seed;
    double time_limit;
};

std::vector<RunRecord> run_jobs(const std::vector<Job>& jobs, std::size_t parallel, const ProgressFn& progress)
{
    std::vector<RunRecord> records(jobs.size());
    std::mutex lock;
    parallel_for(jobs.size(), parallel, [&](std::size_t i) {
        const Job& j = jobs[i];
        records[i] = run_once(*j.problem, j.environment, j.config, j.run, j.seed, j.time_limit);
        if (progress)
        {
            std::lock_guard guard(lock);
            progress(records[i]);
        }
    });
    return records;
}

}  // namespace

void BenchSuite::validate() const
{
    if (experiments.empty())
        throw std::invalid_argument("suite has no experiments");
    if (parallel < 1)
        throw std::invalid_argument("parallel must be at least 1");
    for (const Experiment& e : experiments)
    {
        if (e.runs < 1)
            throw std::invalid_argument("runs must be at least 1");
        if (!(e.time_limit > 0.0))
            throw std::invalid_argument("time_limit must be positive");
        if (e.planners.empty())
            throw std::invalid_argument("experiment has no planners");
        for (const PlannerConfig& p : e.planners)
            p.validate();
    }
}

std::string params_hash(const PlannerConfig& config)
{
    PlannerConfig canonical = config;
    canonical.seed = 0;
    const std::string text = planner_to_json(canonical).dump();
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text)
    {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

RunRecord run_once(const PlanningProblem& problem, const std::string& environment, const PlannerConfig& config,
                   std::size_t run, std::uint64_t seed, double time_limit)
{
    RunRecord r;
    r.planner = planner_name(config.planner);
    r.environment = environment;
    r.params_hash = params_hash(config);
    r.run = run;
    r.seed = seed;
    PlannerConfig c = config;
    c.seed = seed;
    c.time_limit = time_limit;
    try
    {
        PlanOutcome o = plan(problem, c);
        r.status = o.status;
        r.time_s = o.status == PlanStatus::TimedOut ? time_limit : std::min(o.time_s, time_limit);
        r.cost = o.status == PlanStatus::Solved ? o.cost : std::numeric_limits<double>::infinity();
        r.vertices_per_level = o.vertices_per_level;
    }
    catch (const std::exception&)
    {
        r.status = PlanStatus::Error;
        r.time_s = time_limit;
        r.cost = std::numeric_limits<double>::infinity();
    }
    return r;
}

std::vector<RunRecord> run_suite(const BenchSuite& suite, const ProgressFn& progress)
{
    suite.validate();
    std::vector<PlanningProblem> problems;
    problems.reserve(suite.experiments.size());
    for (const Experiment& e : suite.experiments)
        problems.push_back(make_problem(e.environment));
    std::vector<Job> jobs;
    for (std::size_t x = 0; x < suite.experiments.size(); ++x)
    {
        const Experiment& e = suite.experiments[x];
        for (const PlannerConfig& p : e.planners)
            for (std::size_t run = 0; run < e.runs; ++run)
                jobs.push_back({&problems[x], describe(e.environment), p, run, e.base_seed + run, e.time_limit});
    }
    return run_jobs(jobs, suite.parallel, progress);
}

PlanStatus parse_status(const std::string& s)
{
    for (auto st : {PlanStatus::Solved, PlanStatus::TimedOut, PlanStatus::Infeasible, PlanStatus::Error})
        if (status_name(st) == s)
            return st;
    throw std::invalid_argument("unknown status '" + s + "'");
}

void write_csv(std::ostream& out, const std::vector<RunRecord>& records)
{
    out << kCsvHeader << "\n";
    for (const RunRecord& r : records)
    {
        out << r.planner << ',' << '"' << r.environment << '"' << ',' << r.params_hash << ',' << r.run << ','
            << r.seed << ',' << format_double(r.time_s) << ',' << status_name(r.status) << ','
            << format_double(r.cost) << ',';
        for (std::size_t i = 0; i < r.vertices_per_level.size(); ++i)
            out << (i ? ";" : "") << r.vertices_per_level[i];
        out << "\n";
    }
}

std::vector<RunRecord> read_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw std::invalid_argument("CSV header mismatch");
    std::vector<RunRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line))
    {
        ++line_no;
        if (line.empty())
            continue;
        // The environment label is quoted; it may contain commas.
        auto q1 = line.find('"');
        auto q2 = line.find('"', q1 + 1);
        if (q1 == std::string::npos || q2 == std::string::npos)
            throw std::invalid_argument("CSV line " + std::to_string(line_no) + ": unquoted environment");
        RunRecord r;
        r.planner = line.substr(0, q1 - 1);
        r.environment = line.substr(q1 + 1, q2 - q1 - 1);
        auto rest = split(line.substr(q2 + 2), ',');
        if (rest.size() != 7)
            throw std::invalid_argument("CSV line " + std::to_string(line_no) + ": expected 9 fields");
        r.params_hash = rest[0];
        r.run = std::stoull(rest[1]);
        r.seed = std::stoull(rest[2]);
        r.time_s = std::stod(rest[3]);
        r.status = parse_status(rest[4]);
        r.cost = std::stod(rest[5]);
        if (!rest[6].empty())
            for (const auto& v : split(rest[6], ';'))
                r.vertices_per_level.push_back(std::stoull(v));
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<CellSummary> summarize(const std::vector<RunRecord>& records)
{
    std::vector<CellSummary> cells;
    std::vector<std::vector<double>> times;
    std::map<std::tuple<std::string, std::string, std::string>, std::size_t> slot;
    for (const RunRecord& r : records)
    {
        auto key = std::make_tuple(r.planner, r.environment, r.params_hash);
        auto it = slot.find(key);
        if (it == slot.end())
        {
            it = slot.emplace(key, cells.size()).first;
            CellSummary c;
            c.planner = r.planner;
            c.environment = r.environment;
            c.params_hash = r.params_hash;
            cells.push_back(c);
            times.emplace_back();
        }
        CellSummary& c = cells[it->second];
        ++c.runs;
        if (r.status == PlanStatus::Solved || r.status == PlanStatus::Infeasible)
            ++c.successes;
        times[it->second].push_back(r.time_s);
    }
    for (std::size_t i = 0; i < cells.size(); ++i)
    {
        auto& t = times[i];
        CellSummary& c = cells[i];
        c.mean_time = std::accumulate(t.begin(), t.end(), 0.0) / static_cast<double>(t.size());
        std::sort(t.begin(), t.end());
        c.min_time = t.front();
        c.max_time = t.back();
        std::size_t m = t.size() / 2;
        c.median_time = t.size() % 2 ? t[m] : (t[m - 1] + t[m]) / 2.0;
    }
    return cells;
}

void write_summary(std::ostream& out, const std::vector<CellSummary>& cells)
{
    out << "planner,environment,params_hash,runs,success_rate,mean_time_s,median_time_s,min_time_s,max_time_s,"
           "failures_at_limit\n";
    for (const CellSummary& c : cells)
        out << c.planner << ",\"" << c.environment << "\"," << c.params_hash << ',' << c.runs << ','
            << format_double(c.success_rate()) << ',' << format_double(c.mean_time) << ','
            << format_double(c.median_time) << ',' << format_double(c.min_time) << ','
            << format_double(c.max_time) << ',' << (c.has_failures() ? "yes" : "no") << "\n";
}

double CubicFit::evaluate(double n) const
{
    double y = coefficients[0] + n * (coefficients[1] + n * (coefficients[2] + n * coefficients[3]));
    return log_time ? std::exp(y) : y;
}

CubicFit fit_cubic(const std::vector<double>& n, const std::vector<double>& time, bool log_time)
{
    if (n.size() != time.size() || n.size() < 4)
        throw std::invalid_argument("cubic fit needs at least 4 points");
    const auto rows = static_cast<Eigen::Index>(n.size());
    Eigen::MatrixXd A(rows, 4);
    Eigen::VectorXd y(rows);
    for (Eigen::Index i = 0; i < rows; ++i)
    {
        const double x = n[static_cast<std::size_t>(i)];
        A.row(i) << 1.0, x, x * x, x * x * x;
        const double t = time[static_cast<std::size_t>(i)];
        if (log_time && !(t > 0.0))
            throw std::invalid_argument("log-time fit needs positive times");
        y(i) = log_time ? std::log(t) : t;
    }
    Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
    CubicFit fit;
    fit.log_time = log_time;
    for (int i = 0; i < 4; ++i)
        fit.coefficients[static_cast<std::size_t>(i)] = c(i);
    fit.residual = std::sqrt((A * c - y).squaredNorm() / static_cast<double>(rows));
    return fit;
}

ScalingResult scaling_study(const PlannerConfig& planner, const std::vector<std::size_t>& n_list, std::size_t runs,
                            double time_limit, std::uint64_t base_seed, bool log_time, std::size_t parallel,
                            const ProgressFn& progress)
{
    if (!std::is_sorted(n_list.begin(), n_list.end()))
        throw std::invalid_argument("scaling study needs ascending n");
    std::vector<PlanningProblem> problems;
    for (std::size_t n : n_list)
        problems.push_back(hypercube_problem(n));
    std::vector<Job> jobs;
    for (std::size_t i = 0; i < n_list.size(); ++i)
        for (std::size_t run = 0; run < runs; ++run)
            jobs.push_back({&problems[i], describe(hypercube_spec(n_list[i])), planner,
                            run, base_seed + run, time_limit});
    ScalingResult result;
    result.records = run_jobs(jobs, parallel, progress);
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < n_list.size(); ++i)
    {
        ScalingPoint p;
        p.n = n_list[i];
        p.runs = runs;
        double sum = 0.0;
        for (std::size_t run = 0; run < runs; ++run)
        {
            const RunRecord& r = result.records[i * runs + run];
            sum += r.time_s;
            if (r.status == PlanStatus::Solved)
                ++p.successes;
        }
        p.mean_time = sum / static_cast<double>(runs);
        result.points.push_back(p);
        xs.push_back(static_cast<double>(p.n));
        ys.push_back(p.mean_time);
    }
    if (xs.size() >= 4)
        result.fit = fit_cubic(xs, ys, log_time);
    return result;
}

std::vector<MetaVariant> default_meta_variants()
{
    return {
        {"metric", "intrinsic", [](PlannerConfig& c) { c.metric = MetricKind::Intrinsic; }},
        {"metric", "quotient", [](PlannerConfig& c) { c.metric = MetricKind::QuotientSpace; }},
        {"importance", "uniform", [](PlannerConfig& c) { c.importance.kind = ImportanceKind::Uniform; }},
        {"importance", "exponential", [](PlannerConfig& c) { c.importance.kind = ImportanceKind::Exponential; }},
        {"importance", "greedy", [](PlannerConfig& c) { c.importance.kind = ImportanceKind::EpsilonGreedy; }},
        {"sampling", "rv", [](PlannerConfig& c) { c.sampler.strategy = GraphSampling::RandomVertex; }},
        {"sampling", "re", [](PlannerConfig& c) { c.sampler.strategy = GraphSampling::RandomEdge; }},
        {"sampling", "rdv", [](PlannerConfig& c) { c.sampler.strategy = GraphSampling::RandomDegreeVertex; }},
        {"find_section", "on", [](PlannerConfig& c) { c.find_section = true; }},
        {"find_section", "off", [](PlannerConfig& c) { c.find_section = false; }},
    };
}

std::vector<EnvironmentSpec> default_meta_environments()
{
    EnvironmentSpec cube, disks, wall;
    cube.n = 20;
    disks.name = "disk_crossing";
    disks.robots = 4;
    wall.name = "wall_gap";
    wall.gap_width = 1.2;
    return {cube, disks, wall};
}

std::vector<double> normalize_ratios(const std::vector<double>& values)
{
    if (values.empty())
        return {};
    const double best = *std::min_element(values.begin(), values.end());
    std::vector<double> ratios;
    for (double v : values)
        ratios.push_back(best > 0.0 ? v / best : (v == best ? 1.0 : std::numeric_limits<double>::infinity()));
    return ratios;
}

std::vector<MetaRow> meta_analysis(const std::vector<PlannerName>& algorithms,
                                   const std::vector<MetaVariant>& variants,
                                   const std::vector<EnvironmentSpec>& environments, std::size_t runs,
                                   double time_limit, std::uint64_t base_seed, std::size_t parallel,
                                   std::vector<RunRecord>* records, const ProgressFn& progress)
{
    std::map<std::string, std::size_t> per_axis;
    for (const MetaVariant& v : variants)
        ++per_axis[v.axis];
    for (const auto& [axis, count] : per_axis)
        if (count < 2)
            throw std::invalid_argument("meta-analysis axis '" + axis + "' needs at least 2 variants");

    std::vector<PlanningProblem> problems;
    for (const EnvironmentSpec& e : environments)
        problems.push_back(make_problem(e));
    std::vector<Job> jobs;
    for (PlannerName a : algorithms)
        for (const MetaVariant& v : variants)
        {
            PlannerConfig c;
            c.planner = a;
            v.apply(c);
            for (std::size_t e = 0; e < environments.size(); ++e)
                for (std::size_t run = 0; run < runs; ++run)
                    jobs.push_back({&problems[e], describe(environments[e]), c, run, base_seed + run, time_limit});
        }
    std::vector<RunRecord> all = run_jobs(jobs, parallel, progress);

    std::vector<MetaRow> rows;
    std::size_t j = 0;
    for (PlannerName a : algorithms)
        for (const MetaVariant& v : variants)
        {
            double env_sum = 0.0;
            for (std::size_t e = 0; e < environments.size(); ++e)
            {
                double cell = 0.0;
                for (std::size_t run = 0; run < runs; ++run)
                    cell += all[j++].time_s;
                env_sum += cell / static_cast<double>(runs);
            }
            rows.push_back({planner_name(a), v.axis, v.name, env_sum / static_cast<double>(environments.size()), 1.0});
        }
    // Normalize within each (algorithm, axis) group.
    std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < rows.size(); ++i)
        groups[{rows[i].algorithm, rows[i].axis}].push_back(i);
    for (const auto& [key, idx] : groups)
    {
        std::vector<double> means;
        for (std::size_t i : idx)
            means.push_back(rows[i].mean_time);
        auto ratios = normalize_ratios(means);
        for (std::size_t i = 0; i < idx.size(); ++i)
            rows[idx[i]].ratio = ratios[i];
    }
    if (records)
        *records = std::move(all);
    return rows;
}

void write_meta_csv(std::ostream& out, const std::vector<MetaRow>& rows)
{
    out << "algorithm,axis,variant,mean_time_s,ratio\n";
    for (const MetaRow& r : rows)
        out << r.algorithm << ',' << r.axis << ',' << r.variant << ',' << format_double(r.mean_time) << ','
            << format_double(r.ratio) << "\n";
}

}  // namespace fiberplan
