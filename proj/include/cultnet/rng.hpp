#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace cultnet {

/// Standard normal CDF.
double norm_cdf(double x);

/// Standard normal quantile (Wichura's AS 241, double precision).
double norm_quantile(double p);

/// Stable 64-bit seed for a named sub-stream (country chains, test oracles).
/// hash(master, name) so per-unit runs are order-independent.
std::uint64_t derive_seed(std::uint64_t master, const std::string& name);

/// Deterministic random source. All distributions are implemented on top of
/// the raw engine so that identical seeds give identical streams on any
/// platform with the same floating-point model.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on (0,1), never returning the endpoints.
    double uniform();

    /// Standard normal via Box-Muller (cached spare).
    double normal();

    double normal(double mean, double sd) { return mean + sd * normal(); }

    /// Gamma(shape, scale) by Marsaglia-Tsang squeeze.
    double gamma(double shape, double scale);

    double chi_squared(double df) { return gamma(0.5 * df, 2.0); }

    /// N(mean, sd^2) conditioned on (lo, hi). Bounds may be +-infinity.
    /// Inverse-CDF in the bulk, one-sided exponential rejection in far tails.
    double truncated_normal(double mean, double sd, double lo, double hi);

    std::mt19937_64& engine() { return engine_; }

private:
    double tail_normal(double a, double b);  // standard normal on [a,b], a >= ~5

    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace cultnet
