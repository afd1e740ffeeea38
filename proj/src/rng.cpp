#include "cultnet/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cultnet {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// AS 241 algorithm PPND16 (Wichura 1988). Accurate to ~1e-16 over (0,1).
double norm_quantile(double p) {
    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    if (p >= 1.0) return std::numeric_limits<double>::infinity();

    const double q = p - 0.5;
    double r;
    if (std::abs(q) <= 0.425) {
        r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                     6.7265770927008700853e+4) * r +
                    4.5921953931549871457e+4) * r +
                   1.3731693765509461125e+4) * r +
                  1.9715909503065514427e+3) * r +
                 1.3314166789178437745e+2) * r +
                3.3871328727963666080e+0) /
               (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                     3.9307895800092710610e+4) * r +
                    2.1213794301586595867e+4) * r +
                   5.3941960214247511077e+3) * r +
                  6.8718700749205790830e+2) * r +
                 4.2313330701600911252e+1) * r +
                1.0);
    }
    r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double x;
    if (r <= 5.0) {
        r -= 1.6;
        x = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r +
                 1.27045825245236838258e+0) * r +
                3.64784832476320460504e+0) * r +
               5.76949722146069140550e+0) * r +
              4.63033784615654529590e+0) * r +
             1.42343711074968357734e+0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r +
                 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r +
               1.67638483018380384940e+0) * r +
              2.05319162663775882187e+0) * r +
             1.0);
    } else {
        r -= 5.0;
        x = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r +
                 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r +
               1.78482653991729133580e+0) * r +
              5.46378491116411436990e+0) * r +
             6.65790464350110377720e+0) /
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r +
                 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r +
               1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r +
             1.0);
    }
    return (q < 0.0) ? -x : x;
}

std::uint64_t derive_seed(std::uint64_t master, const std::string& name) {
    // FNV-1a over the name, then splitmix64 finalization with the master seed.
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : name) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::uint64_t z = master + 0x9e3779b97f4a7c15ull + h;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double Rng::uniform() {
    // 53-bit mantissa, shifted away from 0 and 1.
    const std::uint64_t bits = engine_() >> 11;
    double u = (static_cast<double>(bits) + 0.5) * (1.0 / 9007199254740992.0);
    return u;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
}

double Rng::gamma(double shape, double scale) {
    if (shape <= 0.0 || scale <= 0.0) throw std::invalid_argument("Rng::gamma: nonpositive parameter");
    if (shape < 1.0) {
        // Boost to shape+1, then scale back (Marsaglia-Tsang section 6).
        const double u = uniform();
        return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return scale * d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return scale * d * v;
    }
}

double Rng::tail_normal(double a, double b) {
    // Robert (1995) exponential rejection for the right tail [a, b], a > 0.
    const double alpha = 0.5 * (a + std::sqrt(a * a + 4.0));
    for (;;) {
        const double z = a - std::log(uniform()) / alpha;
        if (z > b) continue;
        const double rho = std::exp(-0.5 * (z - alpha) * (z - alpha));
        if (uniform() <= rho) return z;
    }
}

double Rng::truncated_normal(double mean, double sd, double lo, double hi) {
    if (!(sd > 0.0)) throw std::invalid_argument("Rng::truncated_normal: sd <= 0");
    if (!(lo < hi)) throw std::invalid_argument("Rng::truncated_normal: empty interval");

    double a = (lo - mean) / sd;
    double b = (hi - mean) / sd;

    const bool a_inf = std::isinf(a) && a < 0.0;
    const bool b_inf = std::isinf(b) && b > 0.0;
    if (a_inf && b_inf) return mean + sd * normal();

    double z;
    const double tail_cut = 5.0;
    if (!a_inf && a >= tail_cut) {
        z = tail_normal(a, b);
    } else if (!b_inf && b <= -tail_cut) {
        z = -tail_normal(-b, -a);
    } else {
        const double fa = a_inf ? 0.0 : norm_cdf(a);
        const double fb = b_inf ? 1.0 : norm_cdf(b);
        const double width = fb - fa;
        if (width > 1e-12) {
            z = norm_quantile(fa + uniform() * width);
        } else {
            // Probability mass numerically exhausted; fall back to the midpoint
            // of the (finite) interval to keep the chain well defined.
            const double left = a_inf ? b - 1.0 : a;
            const double right = b_inf ? a + 1.0 : b;
            z = 0.5 * (left + right);
        }
        // Rank constraints are strict intervals; never land exactly on a bound.
        if (!a_inf && z <= a) z = std::nextafter(a, b);
        if (!b_inf && z >= b) z = std::nextafter(b, a);
    }
    return mean + sd * z;
}

}  // namespace cultnet
