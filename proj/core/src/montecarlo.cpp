#include <coexist/analytic.hpp>
#include <coexist/error.hpp>
#include <coexist/montecarlo.hpp>
#include <coexist/parallel.hpp>

#include <cmath>
#include <limits>
#include <string>

namespace coexist {

std::string_view to_string(ContentionMode mode) noexcept
{
    switch (mode) {
    case ContentionMode::thinned_ppp: return "thinned";
    case ContentionMode::matern: return "matern";
    }
    return "unknown";
}

ContentionMode parse_contention_mode(std::string_view name)
{
    if (name == "thinned" || name == "thinned_ppp")
        return ContentionMode::thinned_ppp;
    if (name == "matern")
        return ContentionMode::matern;
    throw Error(Errc::non_positive_parameter, "unknown contention mode '" + std::string(name) + "'");
}

Window default_window()
{
    return Window::centered(500.0);
}

namespace {

constexpr double kZ95 = 1.96;
constexpr std::size_t kChunk = 512;

struct DropContext {
    const NetworkConfig& config;
    const McOptions& options;
    Window window;
    std::vector<double> eta;

    DropContext(const NetworkConfig& c, const McOptions& o)
        : config(validate(c)), options(o), window(o.window.value_or(default_window())),
          eta(transmit_probabilities(c))
    {
        if (o.drops < 1)
            throw Error(Errc::non_positive_parameter, "drops must be >= 1");
    }

    void require_populated(std::size_t rat) const
    {
        const double expected = config.rats[rat].lambda * window.area();
        if (expected < 1.0)
            throw Error(Errc::degenerate_scenario,
                        "expected AP count of RAT '" + config.rats[rat].id + "' in the window is "
                            + std::to_string(expected));
    }
};

// Stream layout per drop: 0..R-1 PPP per RAT, R contention, R+1+r fading of user r.
PointPattern drop_pattern(const DropContext& ctx, std::size_t drop)
{
    const auto& cfg = ctx.config;
    const std::size_t n_rats = cfg.size();
    PointPattern pattern;
    pattern.window = ctx.window;
    pattern.torus = ctx.options.torus;
    for (std::size_t r = 0; r < n_rats; ++r) {
        Rng rng = make_stream(ctx.options.seed, drop, r);
        sample_ppp(pattern, cfg.rats[r].lambda, r, rng);
    }
    Rng contention = make_stream(ctx.options.seed, drop, n_rats);
    if (ctx.options.mode == ContentionMode::thinned_ppp)
        contend_thinned_ppp(pattern, ctx.eta, cfg.channels, contention);
    else
        contend_matern_csma(pattern, cfg, contention);
    return pattern;
}

// d^{-alpha} from the squared distance; alpha = 4 is the common case and skips pow
double path_loss(double d2, double alpha)
{
    return alpha == 4.0 ? 1.0 / (d2 * d2) : std::pow(d2, -0.5 * alpha);
}

DropRecord evaluate_drop(const DropContext& ctx, const PointPattern& pattern, std::size_t drop)
{
    const auto& cfg = ctx.config;
    const std::size_t n_rats = cfg.size();
    const Point origin = ctx.window.center();
    DropRecord record;
    record.rats.resize(n_rats);
    for (std::size_t r = 0; r < n_rats; ++r) {
        const auto serving = nearest_transmitting(pattern, r, origin);
        RatOutcome& out = record.rats[r];
        if (!serving)
            continue;   // no transmitting AP of this RAT: counted as a failure with zero rate
        // gain of AP i comes from substream i + 1, so it is tied to the AP rather
        // than to how many interferers precede it (common random numbers across sweeps)
        const std::uint64_t key = stream_key(ctx.options.seed, drop, n_rats + 1 + r);
        Rng serving_rng = substream(key, 0);
        const double h = cfg.fading.sample(serving_rng);
        const int channel = pattern.points[serving->index].channel;
        double interference = 0.0;
        for (std::size_t i = 0; i < pattern.points.size(); ++i) {
            const auto& ap = pattern.points[i];
            if (i == serving->index || !ap.transmitting || ap.channel != channel)
                continue;
            const double d2 = pattern.distance_squared(origin, ap.position);
            Rng rng = substream(key, i + 1);
            interference += cfg.rats[ap.rat].power * cfg.fading.sample(rng) * path_loss(d2, cfg.alpha);
        }
        const double d = serving->distance;
        const double signal = cfg.rats[r].power * h * path_loss(d * d, cfg.alpha);
        out.serving_distance = d;
        out.interference = interference;
        out.sir = interference > 0.0 ? signal / interference : std::numeric_limits<double>::infinity();
        out.success = out.sir >= cfg.rats[r].sir_threshold;
    }
    return record;
}

struct Accumulator {
    std::size_t n = 0;
    std::vector<double> successes;
    std::vector<double> rate_sum;
    std::vector<double> rate_sq;
    std::vector<std::size_t> no_serving;
    double ce_sum = 0.0;
    double ce_sq = 0.0;
    double thr_sum = 0.0;
    double thr_sq = 0.0;

    explicit Accumulator(std::size_t n_rats)
        : successes(n_rats), rate_sum(n_rats), rate_sq(n_rats), no_serving(n_rats) {}

    void add(const DropRecord& rec, int channels)
    {
        ++n;
        double ce = 0.0;
        double thr = 0.0;
        for (std::size_t r = 0; r < rec.rats.size(); ++r) {
            const auto& o = rec.rats[r];
            const double rate = o.serving_distance ? std::log2(1.0 + o.sir) : 0.0;
            if (!o.serving_distance)
                ++no_serving[r];
            successes[r] += o.success ? 1.0 : 0.0;
            rate_sum[r] += rate;
            rate_sq[r] += rate * rate;
            ce += o.success ? 1.0 : 0.0;
            thr += rate;
        }
        ce /= static_cast<double>(rec.rats.size());
        thr /= channels;
        ce_sum += ce;
        ce_sq += ce * ce;
        thr_sum += thr;
        thr_sq += thr * thr;
    }

    void merge(const Accumulator& o)
    {
        n += o.n;
        for (std::size_t r = 0; r < successes.size(); ++r) {
            successes[r] += o.successes[r];
            rate_sum[r] += o.rate_sum[r];
            rate_sq[r] += o.rate_sq[r];
            no_serving[r] += o.no_serving[r];
        }
        ce_sum += o.ce_sum;
        ce_sq += o.ce_sq;
        thr_sum += o.thr_sum;
        thr_sq += o.thr_sq;
    }
};

McEstimate bernoulli_estimate(double successes, std::size_t n, const McOptions& opt)
{
    const double p = successes / static_cast<double>(n);
    return {p, kZ95 * std::sqrt(p * (1.0 - p) / static_cast<double>(n)), n, opt.seed, opt.mode};
}

McEstimate sample_estimate(double sum, double sq, std::size_t n, const McOptions& opt)
{
    const double nn = static_cast<double>(n);
    const double mean = sum / nn;
    double var = 0.0;
    if (n > 1)
        var = std::max(0.0, (sq - nn * mean * mean) / (nn - 1.0));
    return {mean, kZ95 * std::sqrt(var / nn), n, opt.seed, opt.mode};
}

McSummary run(const DropContext& ctx, const std::vector<std::size_t>& populated)
{
    for (std::size_t r : populated)
        ctx.require_populated(r);
    const std::size_t n_rats = ctx.config.size();
    const std::size_t drops = ctx.options.drops;
    const std::size_t n_chunks = (drops + kChunk - 1) / kChunk;

    std::vector<Accumulator> chunks(n_chunks, Accumulator(n_rats));
    parallel_for(n_chunks, ctx.options.threads, [&](std::size_t c) {
        const std::size_t end = std::min(drops, (c + 1) * kChunk);
        for (std::size_t d = c * kChunk; d < end; ++d) {
            const auto pattern = drop_pattern(ctx, d);
            chunks[c].add(evaluate_drop(ctx, pattern, d), ctx.config.channels);
        }
    });

    // fixed merge order keeps results bit-identical for any thread count
    Accumulator total(n_rats);
    for (const auto& c : chunks)
        total.merge(c);

    McSummary summary;
    for (std::size_t r = 0; r < n_rats; ++r) {
        summary.success.push_back(bernoulli_estimate(total.successes[r], drops, ctx.options));
        summary.rate.push_back(sample_estimate(total.rate_sum[r], total.rate_sq[r], drops, ctx.options));
    }
    summary.coexisting_success = sample_estimate(total.ce_sum, total.ce_sq, drops, ctx.options);
    summary.throughput = sample_estimate(total.thr_sum, total.thr_sq, drops, ctx.options);
    summary.no_serving = total.no_serving;
    return summary;
}

std::vector<std::size_t> all_rats(const NetworkConfig& config)
{
    std::vector<std::size_t> out(config.size());
    for (std::size_t r = 0; r < out.size(); ++r)
        out[r] = r;
    return out;
}

} // namespace

PointPattern sample_drop_pattern(const NetworkConfig& config, const McOptions& options,
                                 std::size_t drop_index)
{
    DropContext ctx(config, options);
    return drop_pattern(ctx, drop_index);
}

DropRecord simulate_drop(const NetworkConfig& config, const McOptions& options,
                         std::size_t drop_index)
{
    DropContext ctx(config, options);
    const auto pattern = drop_pattern(ctx, drop_index);
    return evaluate_drop(ctx, pattern, drop_index);
}

McSummary simulate(const NetworkConfig& config, const McOptions& options)
{
    DropContext ctx(config, options);
    return run(ctx, all_rats(config));
}

McEstimate estimate_success(const NetworkConfig& config, std::size_t rat, const McOptions& options)
{
    DropContext ctx(config, options);
    if (rat >= config.size())
        throw Error(Errc::unknown_rat, "RAT index out of range");
    return run(ctx, {rat}).success[rat];
}

McEstimate estimate_coexisting_success(const NetworkConfig& config, const McOptions& options)
{
    return simulate(config, options).coexisting_success;
}

McEstimate estimate_throughput(const NetworkConfig& config, const McOptions& options)
{
    return simulate(config, options).throughput;
}

} // namespace coexist
