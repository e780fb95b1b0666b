#pragma once

#include "urnlab/exact.hpp"
#include "urnlab/urn.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <ostream>
#include <random>

namespace urnlab {

struct SimConfig {
    std::uint64_t trials = 10000;
    std::int64_t horizon = 10;
    std::uint64_t seed = 1;
};

/// Final black counts -> number of trials.
using Histogram = std::map<std::int64_t, std::uint64_t>;

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Uniform integer in [0, bound) by rejection; independent of the standard
/// library's distribution implementations, so histories are portable.
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t bound)
{
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r;
    do
        r = gen();
    while (r >= limit);
    return r % bound;
}

/// One history of length n; trial i uses mt19937_64 seeded with splitmix64(seed + i).
inline std::int64_t simulate_one(const UrnSpec& u, std::int64_t n, std::uint64_t trial_seed)
{
    std::mt19937_64 gen(splitmix64(trial_seed));
    std::int64_t x = u.a0;
    for (std::int64_t i = 0; i < n; ++i) {
        const auto t = static_cast<std::uint64_t>(population(u, i));
        if (uniform_below(gen, t) < static_cast<std::uint64_t>(x))
            x -= u.a;
        else
            x += u.b + u.s;
    }
    return x;
}

inline Histogram simulate(const UrnSpec& u, const SimConfig& cfg)
{
    validate(u);
    if (cfg.trials < 1)
        fail(ErrorKind::InvalidArgument, "trials must be >= 1");
    if (cfg.horizon < 0)
        fail(ErrorKind::InvalidArgument, "horizon must be >= 0");
    Histogram hist;
    for (std::uint64_t i = 0; i < cfg.trials; ++i)
        ++hist[simulate_one(u, cfg.horizon, cfg.seed + i)];
    return hist;
}

inline void merge(Histogram& into, const Histogram& from)
{
    for (const auto& [x, c] : from)
        into[x] += c;
}

inline void write_histogram_csv(std::ostream& os, const Histogram& hist)
{
    std::uint64_t total = 0;
    for (const auto& [x, c] : hist)
        total += c;
    os << "x,count,frequency\n";
    os.precision(12);
    for (const auto& [x, c] : hist)
        os << x << "," << c << "," << static_cast<double>(c) / static_cast<double>(total) << "\n";
}

struct CltReport {
    std::int64_t n;
    double ks_distance;
    double mean;
    double variance;
};

inline double normal_cdf(double z)
{
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

/// Largest exact-rational horizon; beyond it the double-precision DP is used.
inline constexpr std::int64_t clt_exact_limit = 2000;

/// Kolmogorov distance between the standardized law of X_n and N(0, 1),
/// using both one-sided limits of the step CDF at every atom.
inline CltReport clt_report(const UrnSpec& u, std::int64_t n)
{
    validate(u);
    std::vector<std::pair<double, double>> atoms; // (x, p)
    double mean = 0, var = 0;
    if (n <= clt_exact_limit) {
        const auto d = exact_distribution(u, n);
        const auto [m, v] = exact_mean_variance(d);
        if (v == 0)
            fail(ErrorKind::DegenerateDistribution, "X_n is a point mass at n = " + std::to_string(n));
        mean = m.convert_to<double>();
        var = v.convert_to<double>();
        for (const auto& [x, p] : d.probs)
            atoms.emplace_back(static_cast<double>(x), p.convert_to<double>());
    } else {
        const auto d = float_distribution(u, n);
        std::tie(mean, var) = d.mean_variance();
        if (var <= 0)
            fail(ErrorKind::DegenerateDistribution, "X_n is a point mass at n = " + std::to_string(n));
        for (std::size_t k = 0; k < d.probs.size(); ++k)
            if (d.probs[k] > 0)
                atoms.emplace_back(static_cast<double>(k) * static_cast<double>(u.a), d.probs[k]);
    }
    const double sd = std::sqrt(var);
    double cdf = 0, ks = 0;
    for (const auto& [x, p] : atoms) {
        const double phi = normal_cdf((x - mean) / sd);
        ks = std::max(ks, std::abs(cdf - phi));
        cdf += p;
        ks = std::max(ks, std::abs(cdf - phi));
    }
    return {n, std::min(ks, 1.0), mean, var};
}

inline nlohmann::json to_json_value(const CltReport& r)
{
    return {{"n", r.n}, {"ks_distance", r.ks_distance}, {"mean", r.mean}, {"variance", r.variance}};
}

} // namespace urnlab
