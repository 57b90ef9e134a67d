// SPDX-License-Identifier: BSD-3-Clause

#include "fiberplan/config.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace fiberplan {

using nlohmann::json;

namespace {

constexpr std::initializer_list<std::pair<const char*, GraphSampling>> kSampling = {
    {"rv", GraphSampling::RandomVertex},
    {"re", GraphSampling::RandomEdge},
    {"rdv", GraphSampling::RandomDegreeVertex},
    {"nbh", GraphSampling::Neighborhood}};
constexpr std::initializer_list<std::pair<const char*, PathBiasMode>> kPathBias = {
    {"off", PathBiasMode::Off}, {"fixed", PathBiasMode::Fixed}, {"decay", PathBiasMode::Decay}};
constexpr std::initializer_list<std::pair<const char*, MetricKind>> kMetric = {
    {"intrinsic", MetricKind::Intrinsic}, {"quotient", MetricKind::QuotientSpace}};
constexpr std::initializer_list<std::pair<const char*, ImportanceKind>> kImportance = {
    {"uniform", ImportanceKind::Uniform},
    {"exponential", ImportanceKind::Exponential},
    {"greedy", ImportanceKind::EpsilonGreedy}};

template <typename E>
std::string enum_name(E e, std::initializer_list<std::pair<const char*, E>> names)
{
    for (const auto& [name, v] : names)
        if (v == e)
            return name;
    return "?";
}

// Line of the first `"key":` in the document, 1-based; 0 if absent.
std::size_t line_of_key(const std::string& text, const std::string& key)
{
    const std::string quoted = "\"" + key + "\"";
    for (std::size_t pos = text.find(quoted); pos != std::string::npos; pos = text.find(quoted, pos + 1))
    {
        std::size_t after = pos + quoted.size();
        while (after < text.size() && std::isspace(static_cast<unsigned char>(text[after])))
            ++after;
        if (after < text.size() && text[after] == ':')
            return static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos),
                                                       '\n')) +
                   1;
    }
    return 0;
}

std::string last_segment(const std::string& path)
{
    auto dot = path.find_last_of('.');
    std::string leaf = dot == std::string::npos ? path : path.substr(dot + 1);
    auto bracket = leaf.find('[');
    return bracket == std::string::npos ? leaf : leaf.substr(0, bracket);
}

class Reader {
public:
    explicit Reader(const std::string& text) : text_(text) {}

    [[noreturn]] void fail(const std::string& path, const std::string& message) const
    {
        throw ConfigError(path, line_of_key(text_, last_segment(path)), path + ": " + message);
    }

    double number(const json& v, const std::string& path) const
    {
        if (!v.is_number())
            fail(path, "expected a number");
        return v.get<double>();
    }
    std::size_t count(const json& v, const std::string& path) const
    {
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0))
            fail(path, "expected a nonnegative integer");
        return v.get<std::size_t>();
    }
    std::uint64_t u64(const json& v, const std::string& path) const
    {
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
            fail(path, "expected a nonnegative integer");
        return v.get<std::uint64_t>();
    }
    bool boolean(const json& v, const std::string& path) const
    {
        if (!v.is_boolean())
            fail(path, "expected true or false");
        return v.get<bool>();
    }
    std::string string(const json& v, const std::string& path) const
    {
        if (!v.is_string())
            fail(path, "expected a string");
        return v.get<std::string>();
    }
    template <typename E>
    E choice(const json& v, const std::string& path, std::initializer_list<std::pair<const char*, E>> names) const
    {
        std::string s = string(v, path);
        for (const auto& [name, e] : names)
            if (s == name)
                return e;
        std::string allowed;
        for (const auto& [name, e] : names)
            allowed += (allowed.empty() ? "" : ", ") + std::string(name);
        fail(path, "unknown value '" + s + "' (expected one of " + allowed + ")");
    }

    using Handler = std::function<void(const json&, const std::string&)>;

    void object(const json& obj, const std::string& prefix, const std::map<std::string, Handler>& handlers) const
    {
        if (!obj.is_object())
            fail(prefix.empty() ? "<root>" : prefix, "expected an object");
        for (const auto& [key, value] : obj.items())
        {
            const std::string path = prefix.empty() ? key : prefix + "." + key;
            auto it = handlers.find(key);
            if (it == handlers.end())
                fail(path, "unknown key");
            it->second(value, path);
        }
    }

    void environment_keys(std::map<std::string, Handler>& h, EnvironmentSpec& env) const
    {
        h["environment"] = [&](const json& v, const std::string& p) {
            env.name = string(v, p);
            if (env.name != "hypercube" && env.name != "wall_gap" && env.name != "disk_crossing")
                fail(p, "unknown environment '" + env.name + "' (expected hypercube, wall_gap or disk_crossing)");
        };
        h["n"] = [&](const json& v, const std::string& p) { env.n = count(v, p); };
        h["epsilon"] = [&](const json& v, const std::string& p) { env.epsilon = number(v, p); };
        h["gap_width"] = [&](const json& v, const std::string& p) { env.gap_width = number(v, p); };
        h["robots"] = [&](const json& v, const std::string& p) { env.robots = count(v, p); };
        h["sequence"] = [&](const json& v, const std::string& p) {
            if (!v.is_array())
                fail(p, "expected an array of projection tag arrays");
            std::vector<ProjectionSpec> seq;
            for (std::size_t i = 0; i < v.size(); ++i)
            {
                const std::string pi = p + "[" + std::to_string(i) + "]";
                if (!v[i].is_array())
                    fail(pi, "expected an array of projection tags");
                ProjectionSpec spec;
                for (std::size_t c = 0; c < v[i].size(); ++c)
                {
                    const std::string pc = pi + "[" + std::to_string(c) + "]";
                    try
                    {
                        spec.components.push_back(ProjectionSpec::parse_tag(string(v[i][c], pc)));
                    }
                    catch (const std::invalid_argument& e)
                    {
                        fail(pc, e.what());
                    }
                }
                seq.push_back(spec);
            }
            env.sequence = seq;
        };
    }

    void planner_keys(std::map<std::string, Handler>& h, PlannerConfig& c, bool run_keys) const
    {
        h["planner"] = [&](const json& v, const std::string& p) {
            try
            {
                c.planner = parse_planner_name(string(v, p));
            }
            catch (const std::invalid_argument& e)
            {
                fail(p, e.what());
            }
        };
        if (run_keys)
        {
            h["seed"] = [&](const json& v, const std::string& p) { c.seed = u64(v, p); };
            h["time_limit"] = [&](const json& v, const std::string& p) { c.time_limit = number(v, p); };
        }
        h["range_factor"] = [&](const json& v, const std::string& p) { c.range_factor = number(v, p); };
        h["resolution_factor"] = [&](const json& v, const std::string& p) { c.resolution_factor = number(v, p); };
        h["k_prm"] = [&](const json& v, const std::string& p) { c.k_prm = number(v, p); };
        h["k_rrt"] = [&](const json& v, const std::string& p) { c.k_rrt = number(v, p); };
        h["qmp_neighbors"] = [&](const json& v, const std::string& p) { c.qmp_neighbors = count(v, p); };
        h["goal_bias"] = [&](const json& v, const std::string& p) { c.goal_bias = number(v, p); };
        h["level_budget"] = [&](const json& v, const std::string& p) { c.level_budget = count(v, p); };
        h["infeasibility_window"] = [&](const json& v, const std::string& p) {
            c.infeasibility_window = count(v, p);
        };
        h["optimize"] = [&](const json& v, const std::string& p) { c.optimize = boolean(v, p); };
        h["find_section"] = [&](const json& v, const std::string& p) { c.find_section = boolean(v, p); };
        h["section_depth"] = [&](const json& v, const std::string& p) { c.section_depth = count(v, p); };
        h["section_sidesteps"] = [&](const json& v, const std::string& p) { c.section_sidesteps = count(v, p); };
        h["trace_interval"] = [&](const json& v, const std::string& p) { c.trace_interval = count(v, p); };
        h["sampling"] = [&](const json& v, const std::string& p) { c.sampler.strategy = choice(v, p, kSampling); };
        h["path_bias"] = [&](const json& v, const std::string& p) { c.sampler.path_bias = choice(v, p, kPathBias); };
        h["beta_fixed"] = [&](const json& v, const std::string& p) { c.sampler.beta_fixed = number(v, p); };
        h["lambda"] = [&](const json& v, const std::string& p) { c.sampler.lambda = number(v, p); };
        h["nbh_epsilon"] = [&](const json& v, const std::string& p) { c.sampler.nbh_epsilon = number(v, p); };
        h["nbh_lambda"] = [&](const json& v, const std::string& p) { c.sampler.nbh_lambda = number(v, p); };
        h["metric"] = [&](const json& v, const std::string& p) { c.metric = choice(v, p, kMetric); };
        h["importance"] = [&](const json& v, const std::string& p) { c.importance.kind = choice(v, p, kImportance); };
        h["importance_epsilon"] = [&](const json& v, const std::string& p) { c.importance.epsilon = number(v, p); };
    }

    // Range checks reported against the field named by the validator.
    void check_planner(const PlannerConfig& c, const std::string& prefix) const
    {
        try
        {
            c.validate();
        }
        catch (const std::invalid_argument& e)
        {
            std::string msg = e.what();
            std::string field = msg.substr(0, msg.find(' '));
            if (field == "epsilon")
                field = "importance_epsilon";
            fail(prefix.empty() ? field : prefix + "." + field, msg);
        }
    }

    void check_environment(const EnvironmentSpec& env, const std::string& prefix) const
    {
        auto at = [&](const char* f) { return prefix.empty() ? std::string(f) : prefix + "." + f; };
        if (env.name == "hypercube")
        {
            if (env.n < 2)
                fail(at("n"), "hypercube needs n >= 2");
            if (!(env.epsilon > 0.0 && env.epsilon < 0.5))
                fail(at("epsilon"), "epsilon must lie in (0, 0.5)");
        }
        if (env.name == "wall_gap" && !(env.gap_width >= 0.0 && env.gap_width <= 10.0))
            fail(at("gap_width"), "gap_width must lie in [0, 10]");
        if (env.name == "disk_crossing" && (env.robots < 2 || env.robots > 8))
            fail(at("robots"), "robots must lie in [2, 8]");
        if (env.sequence)
        {
            try
            {
                BundleSequence::from_specs(make_environment(env).total, *env.sequence);
            }
            catch (const std::invalid_argument& e)
            {
                fail(at("sequence"), e.what());
            }
        }
    }

private:
    const std::string& text_;
};

json parse_json(const std::string& text)
{
    try
    {
        return json::parse(text);
    }
    catch (const json::parse_error& e)
    {
        std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
        byte = std::min(byte, text.size());
        std::size_t line = static_cast<std::size_t>(
                               std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n')) +
                           1;
        throw ConfigError("<document>", line, "malformed JSON at line " + std::to_string(line) + ": " + e.what());
    }
}

}  // namespace

ConfigError::ConfigError(std::string field, std::size_t line, const std::string& message)
    : std::runtime_error(line > 0 ? message + " (line " + std::to_string(line) + ")" : message),
      field_(std::move(field)), line_(line)
{
}

std::string sampling_name(GraphSampling s) { return enum_name(s, kSampling); }
std::string path_bias_name(PathBiasMode m) { return enum_name(m, kPathBias); }
std::string metric_name(MetricKind m) { return enum_name(m, kMetric); }
std::string importance_name(ImportanceKind k) { return enum_name(k, kImportance); }

ProblemConfig parse_problem_config(const std::string& text)
{
    const json doc = parse_json(text);
    Reader r(text);
    ProblemConfig config;
    std::map<std::string, Reader::Handler> h;
    r.environment_keys(h, config.environment);
    r.planner_keys(h, config.planner, true);
    h["output"] = [&](const json& v, const std::string& p) { config.output = r.string(v, p); };
    r.object(doc, "", h);
    r.check_environment(config.environment, "");
    r.check_planner(config.planner, "");
    return config;
}

BenchSuite parse_suite(const std::string& text)
{
    const json doc = parse_json(text);
    Reader r(text);
    BenchSuite suite;
    std::map<std::string, Reader::Handler> top;
    top["csv"] = [&](const json& v, const std::string& p) { suite.csv_path = r.string(v, p); };
    top["svg"] = [&](const json& v, const std::string& p) { suite.svg_path = r.string(v, p); };
    top["parallel"] = [&](const json& v, const std::string& p) {
        suite.parallel = r.count(v, p);
        if (suite.parallel < 1)
            r.fail(p, "parallel must be at least 1");
    };
    top["experiments"] = [&](const json& v, const std::string& p) {
        if (!v.is_array() || v.empty())
            r.fail(p, "expected a non-empty array");
        for (std::size_t i = 0; i < v.size(); ++i)
        {
            const std::string pe = p + "[" + std::to_string(i) + "]";
            Experiment e;
            std::map<std::string, Reader::Handler> h;
            r.environment_keys(h, e.environment);
            h["runs"] = [&](const json& x, const std::string& q) {
                e.runs = r.count(x, q);
                if (e.runs < 1)
                    r.fail(q, "runs must be at least 1");
            };
            h["time_limit"] = [&](const json& x, const std::string& q) {
                e.time_limit = r.number(x, q);
                if (!(e.time_limit > 0.0))
                    r.fail(q, "time_limit must be positive");
            };
            h["seed"] = [&](const json& x, const std::string& q) { e.base_seed = r.u64(x, q); };
            h["planners"] = [&](const json& x, const std::string& q) {
                if (!x.is_array() || x.empty())
                    r.fail(q, "expected a non-empty array");
                for (std::size_t j = 0; j < x.size(); ++j)
                {
                    const std::string pp = q + "[" + std::to_string(j) + "]";
                    PlannerConfig c;
                    if (x[j].is_string())
                    {
                        try
                        {
                            c.planner = parse_planner_name(x[j].get<std::string>());
                        }
                        catch (const std::invalid_argument& err)
                        {
                            r.fail(pp, err.what());
                        }
                    }
                    else
                    {
                        std::map<std::string, Reader::Handler> ph;
                        r.planner_keys(ph, c, false);
                        r.object(x[j], pp, ph);
                    }
                    r.check_planner(c, pp);
                    e.planners.push_back(c);
                }
            };
            r.object(v[i], pe, h);
            if (e.planners.empty())
                r.fail(pe + ".planners", "missing planner list");
            r.check_environment(e.environment, pe);
            suite.experiments.push_back(std::move(e));
        }
    };
    r.object(doc, "", top);
    if (suite.experiments.empty())
        r.fail("experiments", "missing experiment list");
    return suite;
}

ParsedConfig parse_config(const std::string& text)
{
    const json doc = parse_json(text);
    if (doc.is_object() && doc.contains("experiments"))
        return parse_suite(text);
    return parse_problem_config(text);
}

json planner_to_json(const PlannerConfig& c)
{
    json j;
    j["planner"] = planner_name(c.planner);
    j["seed"] = c.seed;
    j["time_limit"] = c.time_limit;
    j["range_factor"] = c.range_factor;
    j["resolution_factor"] = c.resolution_factor;
    if (c.k_prm)
        j["k_prm"] = *c.k_prm;
    if (c.k_rrt)
        j["k_rrt"] = *c.k_rrt;
    j["qmp_neighbors"] = c.qmp_neighbors;
    j["goal_bias"] = c.goal_bias;
    if (c.level_budget)
        j["level_budget"] = *c.level_budget;
    if (c.infeasibility_window)
        j["infeasibility_window"] = *c.infeasibility_window;
    j["optimize"] = c.optimize;
    j["find_section"] = c.find_section;
    j["section_depth"] = c.section_depth;
    j["section_sidesteps"] = c.section_sidesteps;
    j["trace_interval"] = c.trace_interval;
    j["sampling"] = sampling_name(c.sampler.strategy);
    j["path_bias"] = path_bias_name(c.sampler.path_bias);
    j["beta_fixed"] = c.sampler.beta_fixed;
    j["lambda"] = c.sampler.lambda;
    j["nbh_epsilon"] = c.sampler.nbh_epsilon;
    j["nbh_lambda"] = c.sampler.nbh_lambda;
    j["metric"] = metric_name(c.metric);
    j["importance"] = importance_name(c.importance.kind);
    j["importance_epsilon"] = c.importance.epsilon;
    return j;
}

json environment_to_json(const EnvironmentSpec& spec)
{
    json j;
    j["environment"] = spec.name;
    j["n"] = spec.n;
    j["epsilon"] = spec.epsilon;
    j["gap_width"] = spec.gap_width;
    j["robots"] = spec.robots;
    if (spec.sequence)
    {
        json seq = json::array();
        for (const ProjectionSpec& p : *spec.sequence)
        {
            json tags = json::array();
            for (const auto& c : p.components)
                tags.push_back(ProjectionSpec::tag_name(c));
            seq.push_back(tags);
        }
        j["sequence"] = seq;
    }
    return j;
}

json to_json(const ProblemConfig& config)
{
    json j = environment_to_json(config.environment);
    j.update(planner_to_json(config.planner));
    if (config.output)
        j["output"] = *config.output;
    return j;
}

json to_json(const BenchSuite& suite)
{
    json j;
    j["csv"] = suite.csv_path;
    if (suite.svg_path)
        j["svg"] = *suite.svg_path;
    j["parallel"] = suite.parallel;
    json experiments = json::array();
    for (const Experiment& e : suite.experiments)
    {
        json x = environment_to_json(e.environment);
        x["runs"] = e.runs;
        x["time_limit"] = e.time_limit;
        x["seed"] = e.base_seed;
        json planners = json::array();
        for (const PlannerConfig& c : e.planners)
        {
            json p = planner_to_json(c);
            p.erase("seed");
            p.erase("time_limit");
            planners.push_back(p);
        }
        x["planners"] = planners;
        experiments.push_back(x);
    }
    j["experiments"] = experiments;
    return j;
}

json solution_to_json(const ProblemConfig& config, const StateSpace& space, const PlanOutcome& outcome)
{
    json j;
    j["environment"] = environment_to_json(config.environment);
    j["planner"] = planner_name(config.planner.planner);
    j["seed"] = config.planner.seed;
    j["status"] = status_name(outcome.status);
    if (outcome.status == PlanStatus::Infeasible)
        j["confidence"] = outcome.confidence;
    json comps = json::array();
    for (const Component& c : space.components())
    {
        const char* kind = c.kind == ComponentKind::RealVector ? "real_vector"
                           : c.kind == ComponentKind::SO2      ? "so2"
                                                               : "se2";
        comps.push_back({{"kind", kind}, {"dim", c.dim()}});
    }
    j["components"] = comps;
    json waypoints = json::array();
    if (outcome.path)
    {
        j["cost"] = outcome.cost;
        for (const State& s : outcome.path->waypoints)
        {
            json w = json::array();
            for (std::size_t i = 0; i < space.components().size(); ++i)
            {
                const std::size_t off = space.offset(i);
                w.push_back(std::vector<double>(s.values.begin() + static_cast<std::ptrdiff_t>(off),
                                                s.values.begin() +
                                                    static_cast<std::ptrdiff_t>(off + space.components()[i].dim())));
            }
            waypoints.push_back(w);
        }
    }
    j["waypoints"] = waypoints;
    return j;
}

Path solution_path_from_json(const json& doc)
{
    Path p;
    for (const json& w : doc.at("waypoints"))
    {
        State s;
        for (const json& part : w)
            for (const json& v : part)
                s.values.push_back(v.get<double>());
        p.waypoints.push_back(std::move(s));
    }
    return p;
}

}  // namespace fiberplan
