#include "cultnet/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_set>

namespace cultnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCompletionTol = 1e-8;
constexpr int kCompletionMaxCycles = 100;

// Fraction of the log posterior ratio carried by the death rate; the birth
// rate carries the complement with opposite sign, so the death/birth ratio of
// a pair always equals the full posterior ratio. The even split keeps both
// rates near unity, which minimizes the discretization bias of the
// one-jump-per-iteration emulation of the continuous-time process.
constexpr double kRateSplit = 0.5;

double scalar_prior_scale(const Matrix& D) {
    const int p = static_cast<int>(D.rows());
    const double tau = D(0, 0);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) {
            const double want = (i == j) ? tau : 0.0;
            if (std::abs(D(i, j) - want) > 1e-12 * std::max(1.0, std::abs(tau)))
                throw NumericError("birth_death_rates: prior scale must be a multiple of the identity");
        }
    if (!(tau > 0.0)) throw NumericError("birth_death_rates: prior scale must be positive");
    return tau;
}

// log of I_{G+e}(b, tau*I) / I_G(b, tau*I), the one-edge-difference ratio of
// G-Wishart normalizing constants, with d the number of common neighbors of
// the endpoints. Exact for decomposable one-edge differences.
double log_norm_const_ratio(double b, double tau, int common_neighbors) {
    const double nu = 0.5 * (b + static_cast<double>(common_neighbors));
    return std::log(2.0) + 0.5 * std::log(M_PI) + std::lgamma(nu + 0.5) - std::lgamma(nu) -
           std::log(tau);
}

Matrix sample_wishart(double df, const Matrix& scale_chol_lower, Rng& rng) {
    const int p = static_cast<int>(scale_chol_lower.rows());
    Matrix a = Matrix::Zero(p, p);
    for (int i = 0; i < p; ++i) {
        a(i, i) = std::sqrt(rng.chi_squared(df - i));
        for (int j = 0; j < i; ++j) a(i, j) = rng.normal();
    }
    Matrix la = scale_chol_lower * a;
    return la * la.transpose();
}

}  // namespace

void McmcConfig::validate() const {
    if (iterations <= 0) throw DataError("McmcConfig: iterations must be positive");
    if (burnin < 0 || burnin >= iterations) throw DataError("McmcConfig: burnin must be in [0, iterations)");
    if (!(theta > 0.0 && theta < 1.0)) throw DataError("McmcConfig: theta must be in (0,1)");
    if (!(b0 > 2.0)) throw DataError("McmcConfig: b0 must exceed 2");
    if (!(d0_scale > 0.0)) throw DataError("McmcConfig: d0_scale must be positive");
}

std::pair<double, double> rank_bounds(const Eigen::Ref<const Eigen::VectorXi>& y_col,
                                      const Eigen::Ref<const Eigen::Matrix<bool, Eigen::Dynamic, 1>>& miss_col,
                                      const Eigen::Ref<const Vector>& z_col, int row) {
    const int n = static_cast<int>(y_col.size());
    if (miss_col(row)) return {-kInf, kInf};
    const int yr = y_col(row);
    double lower = -kInf, upper = kInf;
    for (int s = 0; s < n; ++s) {
        if (s == row || miss_col(s)) continue;
        if (y_col(s) < yr)
            lower = std::max(lower, z_col(s));
        else if (y_col(s) > yr)
            upper = std::min(upper, z_col(s));
    }
    return {lower, upper};
}

Matrix init_latent(const ResponseMatrix& y) {
    const int n = y.rows(), p = y.cols();
    Matrix z = Matrix::Zero(n, p);
    for (int j = 0; j < p; ++j) {
        std::map<int, long> counts;
        long n_obs = 0;
        for (int r = 0; r < n; ++r) {
            if (y.missing(r, j)) continue;
            ++counts[y.values(r, j)];
            ++n_obs;
        }
        if (n_obs == 0) continue;
        // mid-rank cumulative proportion per category
        std::map<int, double> quantile;
        long below = 0;
        for (const auto& [cat, cnt] : counts) {
            const double mid = (static_cast<double>(below) + 0.5 * static_cast<double>(cnt)) /
                               static_cast<double>(n_obs);
            quantile[cat] = norm_quantile(mid);
            below += cnt;
        }
        for (int r = 0; r < n; ++r)
            if (!y.missing(r, j)) z(r, j) = quantile[y.values(r, j)];
    }
    return z;
}

void gibbs_latent_sweep(Matrix& z, const ResponseMatrix& y, const Matrix& k, Rng& rng) {
    const int n = y.rows(), p = y.cols();
    if (z.rows() != n || z.cols() != p) throw NumericError("gibbs_latent_sweep: shape mismatch");

    for (int j = 0; j < p; ++j) {
        const double kjj = k(j, j);
        if (!(kjj > 0.0)) throw NumericError("NumericalFailure: nonpositive conditional precision");
        const double sd = 1.0 / std::sqrt(kjj);

        // Conditional means for the whole column; they depend only on the
        // other columns, which are fixed during this pass.
        Vector mu = Vector::Zero(n);
        for (int t = 0; t < p; ++t) {
            if (t == j) continue;
            mu.noalias() -= (k(j, t) / kjj) * z.col(t);
        }

        // Rows grouped by observed category. Same-category rows do not
        // constrain each other, so each block shares one rank interval.
        std::map<int, std::vector<int>> blocks;
        for (int r = 0; r < n; ++r) {
            if (y.missing(r, j)) {
                z(r, j) = mu(r) + sd * rng.normal();
            } else {
                blocks[y.values(r, j)].push_back(r);
            }
        }
        if (blocks.empty()) continue;

        // Suffix minima over the still-unvisited larger categories (current
        // state), prefix maxima over freshly updated smaller ones.
        std::vector<int> cats;
        cats.reserve(blocks.size());
        for (const auto& [cat, _] : blocks) cats.push_back(cat);
        const int ncat = static_cast<int>(cats.size());
        std::vector<double> suffix_min(ncat + 1, kInf);
        for (int c = ncat - 1; c >= 0; --c) {
            double m = kInf;
            for (int r : blocks[cats[c]]) m = std::min(m, z(r, j));
            suffix_min[c] = std::min(m, suffix_min[c + 1]);
        }
        double prefix_max = -kInf;
        for (int c = 0; c < ncat; ++c) {
            const double lower = prefix_max;
            const double upper = suffix_min[c + 1];
            double fresh_max = -kInf;
            for (int r : blocks[cats[c]]) {
                z(r, j) = rng.truncated_normal(mu(r), sd, lower, upper);
                fresh_max = std::max(fresh_max, z(r, j));
            }
            prefix_max = std::max(prefix_max, fresh_max);
        }
    }
}

Matrix sample_gwishart(const GWishartParams& params, const Graph& g, Rng& rng) {
    const int p = static_cast<int>(params.D.rows());
    if (g.node_count() != p) throw NumericError("sample_gwishart: dimension mismatch");
    if (!(params.b > 2.0)) throw NumericError("sample_gwishart: b must exceed 2");

    Eigen::LLT<Matrix> llt_d(params.D);
    if (llt_d.info() != Eigen::Success)
        throw NumericError("sample_gwishart: scale matrix not positive definite");
    // chol(D^{-1}) from chol(D): if D = L L^T then D^{-1} = L^{-T} L^{-1}.
    Matrix scale_chol = llt_d.matrixL().solve(Matrix::Identity(p, p)).transpose();

    const double df = params.b + p - 1;
    Matrix k_full = sample_wishart(df, scale_chol, rng);
    if (g.edge_count() == p * (p - 1) / 2) return k_full;

    Matrix sigma = k_full.llt().solve(Matrix::Identity(p, p));
    Matrix w = sigma;

    bool converged = false;
    for (int cycle = 0; cycle < kCompletionMaxCycles && !converged; ++cycle) {
        double max_change = 0.0;
        for (int j = 0; j < p; ++j) {
            const auto nbrs = g.neighbors(j);
            Vector new_col = Vector::Zero(p);  // holds w(-j, j), padded at j
            if (!nbrs.empty()) {
                const int m = static_cast<int>(nbrs.size());
                Matrix wnn(m, m);
                Vector snj(m);
                for (int a = 0; a < m; ++a) {
                    snj(a) = sigma(nbrs[a], j);
                    for (int b = 0; b < m; ++b) wnn(a, b) = w(nbrs[a], nbrs[b]);
                }
                Vector beta_star = wnn.llt().solve(snj);
                // new column = W_{-j,-j} * beta, beta zero off the neighborhood
                for (int r = 0; r < p; ++r) {
                    if (r == j) continue;
                    double acc = 0.0;
                    for (int a = 0; a < m; ++a) acc += w(r, nbrs[a]) * beta_star(a);
                    new_col(r) = acc;
                }
            }
            for (int r = 0; r < p; ++r) {
                if (r == j) continue;
                max_change = std::max(max_change, std::abs(w(r, j) - new_col(r)));
                w(r, j) = new_col(r);
                w(j, r) = new_col(r);
            }
        }
        converged = max_change < kCompletionTol;
    }
    if (!converged)
        throw NumericError("ConvergenceFailure: G-Wishart completion did not stabilize in " +
                           std::to_string(kCompletionMaxCycles) + " cycles");

    Eigen::LLT<Matrix> llt_w(w);
    if (llt_w.info() != Eigen::Success)
        throw NumericError("ConvergenceFailure: completed covariance not positive definite");
    Matrix k = llt_w.solve(Matrix::Identity(p, p));

    // The completed inverse carries the zero pattern up to the tolerance;
    // apply it exactly.
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j) {
            if (!g.edge(i, j)) {
                k(i, j) = 0.0;
                k(j, i) = 0.0;
            } else {
                const double v = 0.5 * (k(i, j) + k(j, i));
                k(i, j) = v;
                k(j, i) = v;
            }
        }
    if (Eigen::LLT<Matrix>(k).info() != Eigen::Success)
        throw NumericError("ConvergenceFailure: zero-pattern enforcement broke positive definiteness");
    return k;
}

BirthDeathRates birth_death_rates(const Graph& g, const Matrix& k, const GWishartParams& post,
                                  const GWishartParams& prior, double theta) {
    const int p = g.node_count();
    if (!(theta > 0.0 && theta < 1.0)) throw NumericError("birth_death_rates: theta out of range");
    const double tau = scalar_prior_scale(prior.D);
    const double log_prior_odds_remove = std::log1p(-theta) - std::log(theta);

    BirthDeathRates out;
    out.pairs.reserve(p * (p - 1) / 2);
    out.rate.reserve(p * (p - 1) / 2);

    for (int j = 1; j < p; ++j) {
        // A = K with row/column j removed; indices below j are unchanged.
        Matrix a(p - 1, p - 1);
        Vector u(p - 1);
        for (int r = 0, rr = 0; r < p; ++r) {
            if (r == j) continue;
            u(rr) = k(r, j);
            for (int c = 0, cc = 0; c < p; ++c) {
                if (c == j) continue;
                a(rr, cc) = k(r, c);
                ++cc;
            }
            ++rr;
        }
        Eigen::LLT<Matrix> llt_a(a);
        if (llt_a.info() != Eigen::Success)
            throw NumericError("NumericalFailure: principal submatrix not positive definite");
        const Matrix a_inv = llt_a.solve(Matrix::Identity(p - 1, p - 1));

        const double dsjj = post.D(j, j);
        for (int i = 0; i < j; ++i) {
            const double alpha = dsjj * a_inv(i, i);
            double bhat = 0.0;
            for (int l = 0; l < p - 1; ++l)
                if (l != i) bhat += a_inv(i, l) * u(l);
            const double beta = dsjj * bhat + post.D(i, j);

            // log pi(G-e, rest) / pi(G, rest) with the edge entry and touched
            // diagonal integrated out on both sides.
            const double log_ratio_remove =
                log_prior_odds_remove + log_norm_const_ratio(prior.b, tau, g.common_neighbors(i, j)) +
                0.5 * (std::log(alpha) - std::log(2.0 * M_PI)) - beta * beta / (2.0 * alpha);
            if (!std::isfinite(log_ratio_remove))
                throw NumericError("NumericalFailure: non-finite birth/death ratio");

            const double log_rate = g.edge(i, j) ? kRateSplit * log_ratio_remove
                                                 : -(1.0 - kRateSplit) * log_ratio_remove;
            const double rate = std::exp(std::clamp(log_rate, -500.0, 500.0));
            out.pairs.emplace_back(i, j);
            out.rate.push_back(rate);
            out.total += rate;
        }
    }
    if (!(out.total > 0.0) || !std::isfinite(out.total))
        throw NumericError("NumericalFailure: degenerate total jump rate");
    return out;
}

Matrix edge_inclusion(const std::vector<std::pair<Graph, double>>& weighted_visits) {
    if (weighted_visits.empty()) throw NumericError("EmptyChain: no weighted graph visits");
    const int p = weighted_visits.front().first.node_count();
    Matrix acc = Matrix::Zero(p, p);
    double total = 0.0;
    for (const auto& [g, w] : weighted_visits) {
        if (!(w >= 0.0)) throw NumericError("EmptyChain: negative visit weight");
        total += w;
        for (int i = 0; i < p; ++i)
            for (int j = i + 1; j < p; ++j)
                if (g.edge(i, j)) {
                    acc(i, j) += w;
                    acc(j, i) += w;
                }
    }
    if (!(total > 0.0)) throw NumericError("EmptyChain: total weight is zero");
    return acc / total;
}

Matrix partial_correlations(const Matrix& k) {
    const int p = static_cast<int>(k.rows());
    Matrix out = Matrix::Identity(p, p);
    for (int i = 0; i < p; ++i)
        if (!(k(i, i) > 0.0)) throw NumericError("InvalidPrecision: nonpositive diagonal");
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
            if (i != j) out(i, j) = -k(i, j) / std::sqrt(k(i, i) * k(j, j));
    return out;
}

Graph select_binary_graph(const Matrix& pp, double cutoff) {
    const int p = static_cast<int>(pp.rows());
    Graph g(p);
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j)
            if (pp(i, j) > cutoff) g.set_edge(i, j, true);
    return g;
}

PosteriorSummary run_bdmcmc(const ResponseMatrix& y, const McmcConfig& config) {
    config.validate();
    const int p = y.cols();
    const int n = y.rows();
    if (p < 2) throw DataError("run_bdmcmc: need at least two variables");

    Rng rng(config.seed);
    Matrix z = init_latent(y);
    Graph g(p);
    Matrix k = Matrix::Identity(p, p);

    const Matrix d0 = config.d0_scale * Matrix::Identity(p, p);
    const GWishartParams prior{config.b0, d0};
    const double bstar = config.b0 + n;

    Matrix edge_w = Matrix::Zero(p, p);
    Matrix k_sum = Matrix::Zero(p, p);
    double total_w = 0.0;
    std::unordered_set<std::uint64_t> visited;

    for (long it = 0; it < config.iterations; ++it) {
        if (n > 0) gibbs_latent_sweep(z, y, k, rng);
        Matrix dstar = d0;
        if (n > 0) dstar.noalias() += z.transpose() * z;
        const GWishartParams post{bstar, dstar};

        k = sample_gwishart(post, g, rng);
        const BirthDeathRates rates = birth_death_rates(g, k, post, prior, config.theta);
        const double w = 1.0 / rates.total;

        if (it >= config.burnin) {
            total_w += w;
            for (int i = 0; i < p; ++i)
                for (int j = i + 1; j < p; ++j)
                    if (g.edge(i, j)) {
                        edge_w(i, j) += w;
                        edge_w(j, i) += w;
                    }
            k_sum += w * k;
            visited.insert(g.triangle_key());
        }

        // One jump: pick the pair proportionally to its rate.
        double target = rng.uniform() * rates.total;
        std::size_t pick = rates.rate.size() - 1;
        for (std::size_t e = 0; e < rates.rate.size(); ++e) {
            target -= rates.rate[e];
            if (target <= 0.0) {
                pick = e;
                break;
            }
        }
        g.toggle_edge(rates.pairs[pick].first, rates.pairs[pick].second);
    }

    PosteriorSummary out;
    out.edge_probs = edge_w / total_w;
    out.k_bar = k_sum / total_w;
    out.parcorr = partial_correlations(out.k_bar);
    out.binary = select_binary_graph(out.edge_probs, 0.5);
    out.total_weight = total_w;
    out.n_graphs_visited = static_cast<long>(visited.size());
    return out;
}

}  // namespace cultnet
