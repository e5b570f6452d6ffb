#include "experiment.hpp"

#include <coexist/analytic.hpp>
#include <coexist/error.hpp>
#include <coexist/optimizer.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace coexist::cli {

using nlohmann::json;

namespace {

constexpr double kMcAgreementFloor = 0.015;
constexpr std::size_t kThroughputDrops = 200'000;

// ---------------------------------------------------------------- parsing

const json& require(const json& obj, const std::string& key, const std::string& path)
{
    if (!obj.is_object())
        throw ConfigError(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end())
        throw ConfigError(path + "/" + key, "missing required field");
    return *it;
}

double number_at(const json& obj, const std::string& key, const std::string& path)
{
    const json& v = require(obj, key, path);
    if (!v.is_number())
        throw ConfigError(path + "/" + key, "expected a number");
    return v.get<double>();
}

std::string string_at(const json& obj, const std::string& key, const std::string& path)
{
    const json& v = require(obj, key, path);
    if (!v.is_string())
        throw ConfigError(path + "/" + key, "expected a string");
    return v.get<std::string>();
}

template <class T>
T unsigned_at(const json& obj, const std::string& key, const std::string& path)
{
    const json& v = require(obj, key, path);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        throw ConfigError(path + "/" + key, "expected a non-negative integer");
    return v.get<T>();
}

RatParams parse_rat(const json& node, const std::string& path)
{
    RatParams rat;
    rat.id = string_at(node, "id", path);
    rat.lambda = number_at(node, "lambda_per_m2", path);
    rat.power = number_at(node, "power_w", path);
    rat.sense_radius = number_at(node, "sense_radius_m", path);
    const bool has_db = node.contains("sir_threshold_db");
    const bool has_linear = node.contains("sir_threshold_linear");
    if (has_db == has_linear)
        throw ConfigError(path, "give exactly one of sir_threshold_db, sir_threshold_linear");
    if (has_db)
        rat.sir_threshold = std::pow(10.0, number_at(node, "sir_threshold_db", path) / 10.0);
    else
        rat.sir_threshold = number_at(node, "sir_threshold_linear", path);
    return rat;
}

NetworkConfig parse_scenario(const json& node, const std::string& path)
{
    NetworkConfig cfg;
    cfg.alpha = number_at(node, "alpha", path);
    const double channels = number_at(node, "channels", path);
    if (channels != std::floor(channels) || channels < 0 || channels > std::numeric_limits<int>::max())
        throw ConfigError(path + "/channels", "expected a non-negative integer");
    cfg.channels = static_cast<int>(channels);
    if (node.contains("fading")) {
        try {
            cfg.fading.kind = parse_fading_kind(string_at(node, "fading", path));
        } catch (const Error& e) {
            throw ConfigError(path + "/fading", e.what());
        }
    }
    if (node.contains("contention")) {
        const auto c = string_at(node, "contention", path);
        if (c == "csma")
            cfg.contention = Contention::csma;
        else if (c == "none")
            cfg.contention = Contention::none;
        else
            throw ConfigError(path + "/contention", "expected \"csma\" or \"none\"");
    }
    const json& rats = require(node, "rats", path);
    if (!rats.is_array())
        throw ConfigError(path + "/rats", "expected an array");
    for (std::size_t i = 0; i < rats.size(); ++i)
        cfg.rats.push_back(parse_rat(rats[i], path + "/rats/" + std::to_string(i)));
    try {
        validate(cfg);
    } catch (const Error& e) {
        throw ConfigError(path, e.what());
    }
    return cfg;
}

ExperimentKind parse_kind(const std::string& name, const std::string& path)
{
    if (name == "analytic") return ExperimentKind::analytic;
    if (name == "simulate") return ExperimentKind::simulate;
    if (name == "sweep-m") return ExperimentKind::sweep_m;
    if (name == "sweep-ratio") return ExperimentKind::sweep_ratio;
    if (name == "optimize") return ExperimentKind::optimize;
    if (name == "throughput") return ExperimentKind::throughput;
    throw ConfigError(path, "unknown experiment '" + name + "'");
}

OutputFormat parse_format(const std::string& name, const std::string& path)
{
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw ConfigError(path, "expected \"csv\" or \"json\"");
}

// ---------------------------------------------------------------- running

McOptions mc_options(const MonteCarloSpec& mc)
{
    McOptions opt;
    opt.drops = mc.drops;
    opt.seed = mc.seed;
    opt.mode = mc.mode;
    if (mc.window_half_width)
        opt.window = Window::centered(*mc.window_half_width);
    return opt;
}

json estimate_json(const McEstimate& e)
{
    return {{"mean", e.mean}, {"ci_half_width", e.ci_half_width}, {"drops", e.drops},
            {"seed", e.seed}, {"mode", std::string(to_string(e.mode))}};
}

bool within_tolerance(double mc, double ci, double analytic)
{
    return std::abs(mc - analytic) <= std::max(2.0 * ci, kMcAgreementFloor);
}

json difference_checks(const std::vector<double>& values)
{
    bool increasing = true;
    bool concave = true;
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
        increasing = increasing && values[i + 1] > values[i];
    for (std::size_t i = 0; i + 2 < values.size(); ++i)
        concave = concave && values[i + 2] - 2.0 * values[i + 1] + values[i] < 0.0;
    return {{"increasing", increasing}, {"concave", concave}};
}

json constraint_json(const ConstraintCheck& c)
{
    return {{"feasible", c.feasible}, {"margin", c.margin}, {"c_s", c.c_s}, {"c_w", c.c_w},
            {"bound", c.bound}};
}

const std::string& rat_id(const NetworkConfig& cfg, std::size_t r)
{
    return cfg.rats[r].id;
}

RunResult run_analytic(const ExperimentSpec& spec)
{
    const auto& cfg = spec.scenario;
    const auto report = analyze(cfg);
    RunResult out;
    out.columns = {"rat", "lambda_per_m2", "power_w", "sense_radius_m", "sir_threshold_linear",
                   "eta", "rho", "rate_bps_per_hz"};
    json rats = json::array();
    for (std::size_t r = 0; r < cfg.size(); ++r) {
        const auto& p = cfg.rats[r];
        out.row_labels.push_back(p.id);
        out.rows.push_back({p.lambda, p.power, p.sense_radius, p.sir_threshold, report.eta[r],
                            report.rho[r], report.rate[r]});
        rats.push_back({{"id", p.id}, {"eta", report.eta[r]}, {"rho", report.rho[r]},
                        {"rate_bps_per_hz", report.rate[r]}});
    }
    out.summary = {{"experiment", "analytic"},
                   {"tau_alpha", tau_alpha(cfg.alpha, cfg.fading)},
                   {"rats", rats},
                   {"rho_ce", report.rho_ce},
                   {"c_ce_bps_per_hz_per_channel", report.c_ce}};
    if (cfg.size() == 2) {
        const auto check = check_constraint(cfg);
        out.summary["constraint"] = constraint_json(check);
        if (check.feasible) {
            out.summary["weighted_ratio_star"] = optimal_weighted_ratio(cfg);
            out.summary["lambda_ratio_star"] = solve_lambda_ratio(cfg);
        }
    }
    return out;
}

RunResult run_simulate(const ExperimentSpec& spec)
{
    const auto& cfg = spec.scenario;
    const auto opt = mc_options(*spec.mc);
    const auto report = analyze(cfg);
    const auto mc = simulate(cfg, opt);
    RunResult out;
    out.columns = {"rat", "eta", "rho_analytic", "rho_mc", "rho_mc_ci", "rate_analytic_bps_per_hz",
                   "rate_mc_bps_per_hz", "rate_mc_ci_bps_per_hz", "no_serving_drops"};
    json rats = json::array();
    for (std::size_t r = 0; r < cfg.size(); ++r) {
        out.row_labels.push_back(rat_id(cfg, r));
        out.rows.push_back({report.eta[r], report.rho[r], mc.success[r].mean,
                            mc.success[r].ci_half_width, report.rate[r], mc.rate[r].mean,
                            mc.rate[r].ci_half_width, static_cast<double>(mc.no_serving[r])});
        rats.push_back({{"id", rat_id(cfg, r)},
                        {"rho_analytic", report.rho[r]},
                        {"rho_mc", estimate_json(mc.success[r])},
                        {"agrees", within_tolerance(mc.success[r].mean, mc.success[r].ci_half_width,
                                                    report.rho[r])}});
    }
    out.summary = {{"experiment", "simulate"},
                   {"rats", rats},
                   {"rho_ce_analytic", report.rho_ce},
                   {"rho_ce_mc", estimate_json(mc.coexisting_success)},
                   {"c_ce_analytic", report.c_ce},
                   {"c_ce_mc", estimate_json(mc.throughput)}};
    return out;
}

const SweepSpec& require_sweep(const ExperimentSpec& spec, std::initializer_list<const char*> names)
{
    if (!spec.sweep)
        throw ConfigError("/sweep", "this experiment needs a sweep section");
    for (const char* n : names)
        if (spec.sweep->variable == n)
            return *spec.sweep;
    throw ConfigError("/sweep/variable", "unsupported sweep variable '" + spec.sweep->variable + "'");
}

RunResult run_sweep_m(const ExperimentSpec& spec)
{
    const auto& sweep = require_sweep(spec, {"channels", "m"});
    const auto& base = spec.scenario;
    const std::size_t n = base.size();

    RunResult out;
    out.columns = {"m"};
    for (std::size_t r = 0; r < n; ++r)
        out.columns.push_back("eta_" + rat_id(base, r));
    for (std::size_t r = 0; r < n; ++r)
        out.columns.push_back("rho_" + rat_id(base, r) + "_analytic");
    out.columns.push_back("rho_ce_analytic");
    if (spec.mc) {
        for (std::size_t r = 0; r < n; ++r) {
            out.columns.push_back("rho_" + rat_id(base, r) + "_mc");
            out.columns.push_back("rho_" + rat_id(base, r) + "_mc_ci");
        }
        out.columns.push_back("rho_ce_mc");
        out.columns.push_back("rho_ce_mc_ci");
    }

    std::vector<std::vector<double>> rho_curves(n + 1);
    bool all_agree = true;
    double max_dev = 0.0;
    for (double mv : grid(sweep.start, sweep.stop, sweep.step)) {
        const int m = static_cast<int>(std::lround(mv));
        if (m < 1)
            throw ConfigError("/sweep", "channel counts must be >= 1");
        NetworkConfig cfg = base;
        cfg.channels = m;
        const auto report = analyze(cfg, false);
        std::vector<double> row{static_cast<double>(m)};
        row.insert(row.end(), report.eta.begin(), report.eta.end());
        row.insert(row.end(), report.rho.begin(), report.rho.end());
        row.push_back(report.rho_ce);
        for (std::size_t r = 0; r < n; ++r)
            rho_curves[r].push_back(report.rho[r]);
        rho_curves[n].push_back(report.rho_ce);
        if (spec.mc) {
            const auto mc = simulate(cfg, mc_options(*spec.mc));
            for (std::size_t r = 0; r < n; ++r) {
                row.push_back(mc.success[r].mean);
                row.push_back(mc.success[r].ci_half_width);
                all_agree = all_agree && within_tolerance(mc.success[r].mean,
                                                          mc.success[r].ci_half_width, report.rho[r]);
                max_dev = std::max(max_dev, std::abs(mc.success[r].mean - report.rho[r]));
            }
            row.push_back(mc.coexisting_success.mean);
            row.push_back(mc.coexisting_success.ci_half_width);
            all_agree = all_agree && within_tolerance(mc.coexisting_success.mean,
                                                      mc.coexisting_success.ci_half_width, report.rho_ce);
            max_dev = std::max(max_dev, std::abs(mc.coexisting_success.mean - report.rho_ce));
        }
        out.rows.push_back(std::move(row));
    }

    json shape = json::object();
    for (std::size_t r = 0; r < n; ++r)
        shape["rho_" + rat_id(base, r)] = difference_checks(rho_curves[r]);
    shape["rho_ce"] = difference_checks(rho_curves[n]);
    out.summary = {{"experiment", "sweep-m"}, {"analytic_shape", shape}};
    if (spec.mc)
        out.summary["mc"] = {{"max_abs_deviation", max_dev},
                             {"all_within_tolerance", all_agree},
                             {"drops", spec.mc->drops},
                             {"seed", spec.mc->seed},
                             {"mode", std::string(to_string(spec.mc->mode))}};
    return out;
}

struct RatioSweep {
    std::vector<double> ratios;
    std::vector<double> rho_ce_analytic;
    std::vector<double> rho_ce_mc;
};

std::size_t argmax(const std::vector<double>& v)
{
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

RunResult run_sweep_ratio(const ExperimentSpec& spec)
{
    const auto& sweep = require_sweep(spec, {"lambda_ratio"});
    const auto& base = spec.scenario;
    require_two_rat(base);
    const std::size_t n = base.size();

    RunResult out;
    out.columns = {"lambda_ratio", "lambda_" + rat_id(base, 1) + "_per_m2"};
    for (std::size_t r = 0; r < n; ++r)
        out.columns.push_back("eta_" + rat_id(base, r));
    for (std::size_t r = 0; r < n; ++r)
        out.columns.push_back("rho_" + rat_id(base, r) + "_analytic");
    out.columns.push_back("rho_ce_analytic");
    if (spec.mc) {
        for (std::size_t r = 0; r < n; ++r) {
            out.columns.push_back("rho_" + rat_id(base, r) + "_mc");
            out.columns.push_back("rho_" + rat_id(base, r) + "_mc_ci");
        }
        out.columns.push_back("rho_ce_mc");
        out.columns.push_back("rho_ce_mc_ci");
    }

    RatioSweep curve;
    for (double q : grid(sweep.start, sweep.stop, sweep.step)) {
        const auto cfg = with_lambda_ratio(base, q);
        const auto report = analyze(cfg, false);
        std::vector<double> row{q, cfg.rats[1].lambda};
        row.insert(row.end(), report.eta.begin(), report.eta.end());
        row.insert(row.end(), report.rho.begin(), report.rho.end());
        row.push_back(report.rho_ce);
        curve.ratios.push_back(q);
        curve.rho_ce_analytic.push_back(report.rho_ce);
        if (spec.mc) {
            const auto mc = simulate(cfg, mc_options(*spec.mc));
            for (std::size_t r = 0; r < n; ++r) {
                row.push_back(mc.success[r].mean);
                row.push_back(mc.success[r].ci_half_width);
            }
            row.push_back(mc.coexisting_success.mean);
            row.push_back(mc.coexisting_success.ci_half_width);
            curve.rho_ce_mc.push_back(mc.coexisting_success.mean);
        }
        out.rows.push_back(std::move(row));
    }
    out.summary = {{"experiment", "sweep-ratio"},
                   {"analytic_argmax_ratio", curve.ratios[argmax(curve.rho_ce_analytic)]},
                   {"analytic_max_rho_ce", curve.rho_ce_analytic[argmax(curve.rho_ce_analytic)]}};
    if (spec.mc)
        out.summary["mc_argmax_ratio"] = curve.ratios[argmax(curve.rho_ce_mc)];
    return out;
}

RunResult run_optimize(const ExperimentSpec& spec)
{
    const auto& cfg = spec.scenario;
    require_two_rat(cfg);
    SweepSpec sweep{"lambda_ratio", 0.5, 4.0, spec.mc ? 0.05 : 0.01};
    if (spec.sweep)
        sweep = require_sweep(spec, {"lambda_ratio"});

    const auto check = check_constraint(cfg);
    RunResult out;
    out.summary = {{"experiment", "optimize"}, {"constraint", constraint_json(check)}};
    if (check.feasible) {
        const auto closed = optimize(cfg);
        const double weighted = *closed.y_star;
        out.summary["weighted_ratio_star"] = weighted;
        out.summary["y_star"] = optimal_y(cfg);
        out.summary["lambda_ratio_star"] = *closed.lambda_ratio_star;
        out.summary["lambda_ratio_star_unit_eta"] = 1.0 / weighted;
        out.summary["rho_ce_at_star"] = closed.rho_ce_at_star;
        out.summary["method"] = std::string(to_string(closed.method));
    }

    const auto by_sweep = optimize_by_sweep(cfg, sweep.start, sweep.stop, sweep.step);
    out.summary["sweep"] = {{"start", sweep.start}, {"stop", sweep.stop}, {"step", sweep.step},
                            {"argmax_ratio", *by_sweep.lambda_ratio_star},
                            {"max_rho_ce", by_sweep.rho_ce_at_star}};

    out.columns = {"lambda_ratio", "rho_ce_analytic"};
    if (spec.mc) {
        out.columns.push_back("rho_ce_mc");
        out.columns.push_back("rho_ce_mc_ci");
    }
    std::vector<double> mc_curve;
    std::vector<double> ratios;
    for (const auto& p : sweep_lambda_ratio(cfg, sweep.start, sweep.stop, sweep.step)) {
        std::vector<double> row{p.ratio, p.rho_ce};
        if (spec.mc) {
            const auto mc = estimate_coexisting_success(with_lambda_ratio(cfg, p.ratio),
                                                        mc_options(*spec.mc));
            row.push_back(mc.mean);
            row.push_back(mc.ci_half_width);
            mc_curve.push_back(mc.mean);
        }
        ratios.push_back(p.ratio);
        out.rows.push_back(std::move(row));
    }
    if (spec.mc)
        out.summary["sweep"]["mc_argmax_ratio"] = ratios[argmax(mc_curve)];
    return out;
}

RunResult run_throughput(const ExperimentSpec& spec)
{
    const auto& base = spec.scenario;
    const std::size_t n = base.size();
    const std::string baseline_id = spec.baseline_rat.value_or(base.rats.back().id);
    NetworkConfig baseline = base;
    baseline.rats = {base.rats.at(base.index_of(baseline_id))};

    std::optional<McOptions> opt;
    if (spec.mc)
        opt = mc_options(*spec.mc);

    const double baseline_analytic = coexisting_throughput(baseline);
    std::optional<McEstimate> baseline_mc;
    if (opt)
        baseline_mc = estimate_throughput(baseline, *opt);

    std::vector<double> ratios;
    if (spec.sweep) {
        require_two_rat(base);
        const auto& sweep = require_sweep(spec, {"lambda_ratio"});
        ratios = grid(sweep.start, sweep.stop, sweep.step);
    }

    RunResult out;
    if (!ratios.empty())
        out.columns.push_back("lambda_ratio");
    for (std::size_t r = 0; r < n; ++r)
        out.columns.push_back("rate_" + rat_id(base, r) + "_analytic_bps_per_hz");
    out.columns.push_back("c_ce_analytic_bps_per_hz_per_channel");
    out.columns.push_back("gain_analytic");
    if (opt) {
        out.columns.push_back("c_ce_mc_bps_per_hz_per_channel");
        out.columns.push_back("c_ce_mc_ci_bps_per_hz_per_channel");
        out.columns.push_back("gain_mc");
    }

    auto evaluate = [&](const NetworkConfig& cfg, std::optional<double> ratio) {
        const auto report = analyze(cfg);
        std::vector<double> row;
        if (ratio)
            row.push_back(*ratio);
        row.insert(row.end(), report.rate.begin(), report.rate.end());
        row.push_back(report.c_ce);
        row.push_back(report.c_ce / baseline_analytic - 1.0);
        if (opt) {
            const auto mc = estimate_throughput(cfg, *opt);
            row.push_back(mc.mean);
            row.push_back(mc.ci_half_width);
            row.push_back(mc.mean / baseline_mc->mean - 1.0);
        }
        out.rows.push_back(std::move(row));
        return report.c_ce;
    };

    std::vector<double> c_curve;
    if (ratios.empty())
        c_curve.push_back(evaluate(base, std::nullopt));
    else
        for (double q : ratios)
            c_curve.push_back(evaluate(with_lambda_ratio(base, q), q));

    const std::size_t best = argmax(c_curve);
    out.summary = {{"experiment", "throughput"},
                   {"baseline_rat", baseline_id},
                   {"baseline_analytic_bps_per_hz_per_channel", baseline_analytic},
                   {"c_ce_analytic_min", *std::min_element(c_curve.begin(), c_curve.end())},
                   {"c_ce_analytic_max", c_curve[best]},
                   {"peak_gain_analytic", c_curve[best] / baseline_analytic - 1.0}};
    if (!ratios.empty())
        out.summary["peak_ratio_analytic"] = ratios[best];
    if (baseline_mc)
        out.summary["baseline_mc"] = estimate_json(*baseline_mc);
    return out;
}

} // namespace

std::string to_string(ExperimentKind kind)
{
    switch (kind) {
    case ExperimentKind::analytic: return "analytic";
    case ExperimentKind::simulate: return "simulate";
    case ExperimentKind::sweep_m: return "sweep-m";
    case ExperimentKind::sweep_ratio: return "sweep-ratio";
    case ExperimentKind::optimize: return "optimize";
    case ExperimentKind::throughput: return "throughput";
    }
    return "unknown";
}

ExperimentSpec parse_spec(const json& doc)
{
    if (!doc.is_object())
        throw ConfigError("/", "expected a JSON object");
    ExperimentSpec spec;
    spec.scenario = parse_scenario(require(doc, "scenario", ""), "/scenario");
    spec.experiment = parse_kind(string_at(doc, "experiment", ""), "/experiment");

    if (doc.contains("sweep")) {
        const json& s = doc["sweep"];
        SweepSpec sweep;
        sweep.variable = string_at(s, "variable", "/sweep");
        sweep.start = number_at(s, "start", "/sweep");
        sweep.stop = number_at(s, "stop", "/sweep");
        sweep.step = number_at(s, "step", "/sweep");
        if (!(sweep.step > 0.0) || sweep.stop < sweep.start)
            throw ConfigError("/sweep", "needs step > 0 and stop >= start");
        spec.sweep = sweep;
    }
    if (doc.contains("mc")) {
        const json& m = doc["mc"];
        MonteCarloSpec mc;
        if (spec.experiment == ExperimentKind::throughput)
            mc.drops = kThroughputDrops;
        if (m.contains("drops"))
            mc.drops = unsigned_at<std::size_t>(m, "drops", "/mc");
        if (m.contains("seed"))
            mc.seed = unsigned_at<std::uint64_t>(m, "seed", "/mc");
        if (m.contains("mode")) {
            try {
                mc.mode = parse_contention_mode(string_at(m, "mode", "/mc"));
            } catch (const Error& e) {
                throw ConfigError("/mc/mode", e.what());
            }
        }
        if (m.contains("window_half_width_m")) {
            mc.window_half_width = number_at(m, "window_half_width_m", "/mc");
            if (!(*mc.window_half_width > 0.0))
                throw ConfigError("/mc/window_half_width_m", "must be > 0");
        }
        spec.mc = mc;
    }
    if (doc.contains("output")) {
        const json& o = doc["output"];
        if (o.contains("path"))
            spec.output.dir = string_at(o, "path", "/output");
        if (o.contains("format"))
            spec.output.format = parse_format(string_at(o, "format", "/output"), "/output/format");
    }
    if (doc.contains("baseline_rat")) {
        spec.baseline_rat = string_at(doc, "baseline_rat", "");
        try {
            spec.scenario.index_of(*spec.baseline_rat);
        } catch (const Error& e) {
            throw ConfigError("/baseline_rat", e.what());
        }
    }
    return spec;
}

ExperimentSpec parse_spec_text(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        // locate the offending byte as a line number
        const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
        throw ConfigError("line " + std::to_string(line), e.what());
    }
    return parse_spec(doc);
}

ExperimentSpec load_spec(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(path.string(), "cannot open config file");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_spec_text(buffer.str());
}

void finalize(ExperimentSpec& spec, const Overrides& o)
{
    if (o.out)
        spec.output.dir = *o.out;
    if (o.format)
        spec.output.format = *o.format;
    if (o.seed || o.drops || o.mode) {
        if (!spec.mc) {
            spec.mc = MonteCarloSpec{};
            if (spec.experiment == ExperimentKind::throughput)
                spec.mc->drops = kThroughputDrops;
        }
        if (o.seed)
            spec.mc->seed = *o.seed;
        if (o.drops)
            spec.mc->drops = *o.drops;
        if (o.mode)
            spec.mc->mode = *o.mode;
    }
    if (spec.mc && spec.mc->drops < 1)
        throw ConfigError("/mc/drops", "must be >= 1");
    const bool sweeps = spec.experiment == ExperimentKind::sweep_m
                     || spec.experiment == ExperimentKind::sweep_ratio;
    if (sweeps && !spec.sweep)
        throw ConfigError("/sweep", to_string(spec.experiment) + " needs a sweep section");
    if (spec.experiment == ExperimentKind::simulate && !spec.mc)
        throw ConfigError("/mc", "simulate needs an mc section (or --drops/--seed/--mode)");
    const bool two_rat_only = spec.experiment == ExperimentKind::sweep_ratio
                           || spec.experiment == ExperimentKind::optimize;
    if (two_rat_only && spec.scenario.size() != 2)
        throw ConfigError("/scenario/rats", to_string(spec.experiment) + " needs exactly two RATs");
}

RunResult run(const ExperimentSpec& spec)
{
    switch (spec.experiment) {
    case ExperimentKind::analytic: return run_analytic(spec);
    case ExperimentKind::simulate: return run_simulate(spec);
    case ExperimentKind::sweep_m: return run_sweep_m(spec);
    case ExperimentKind::sweep_ratio: return run_sweep_ratio(spec);
    case ExperimentKind::optimize: return run_optimize(spec);
    case ExperimentKind::throughput: return run_throughput(spec);
    }
    throw ConfigError("/experiment", "unhandled experiment");
}

std::string format_number(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

namespace {

std::string quote_field(const std::string& field)
{
    if (field.find_first_of(",\"\r\n") == std::string::npos)
        return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace

std::string format_csv(const RunResult& result)
{
    std::string out;
    for (std::size_t i = 0; i < result.columns.size(); ++i) {
        if (i)
            out += ',';
        out += quote_field(result.columns[i]);
    }
    out += "\r\n";
    for (std::size_t r = 0; r < result.rows.size(); ++r) {
        bool first = true;
        if (!result.row_labels.empty()) {
            out += quote_field(result.row_labels[r]);
            first = false;
        }
        for (double v : result.rows[r]) {
            if (!first)
                out += ',';
            out += format_number(v);
            first = false;
        }
        out += "\r\n";
    }
    return out;
}

std::vector<std::filesystem::path> write_outputs(const ExperimentSpec& spec, const RunResult& result)
{
    std::filesystem::create_directories(spec.output.dir);
    const std::string stem = to_string(spec.experiment);
    std::vector<std::filesystem::path> written;

    const auto table = spec.output.dir
                     / (stem + (spec.output.format == OutputFormat::csv ? ".csv" : ".json"));
    {
        std::ofstream out(table, std::ios::binary);
        if (spec.output.format == OutputFormat::csv) {
            out << format_csv(result);
        } else {
            json doc = {{"columns", result.columns}, {"rows", json::array()}};
            for (std::size_t r = 0; r < result.rows.size(); ++r) {
                json row = json::array();
                if (!result.row_labels.empty())
                    row.push_back(result.row_labels[r]);
                for (double v : result.rows[r])
                    row.push_back(v);
                doc["rows"].push_back(std::move(row));
            }
            out << doc.dump(2) << '\n';
        }
    }
    written.push_back(table);

    const auto summary = spec.output.dir / (stem + ".summary.json");
    std::ofstream(summary, std::ios::binary) << result.summary.dump(2) << '\n';
    written.push_back(summary);
    return written;
}

} // namespace coexist::cli
