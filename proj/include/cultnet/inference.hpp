#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cultnet/ingest.hpp"
#include "cultnet/rng.hpp"
#include "cultnet/types.hpp"

namespace cultnet {

/// G-Wishart W_G(b, D): density |K|^{(b-2)/2} exp(-tr(DK)/2) on positive
/// definite matrices with zeros on the non-edges of G. On the complete graph
/// this is an ordinary Wishart with df b+p-1 and scale D^{-1}.
struct GWishartParams {
    double b = 3.0;
    Matrix D;
};

struct McmcConfig {
    long iterations = 10000;
    long burnin = 5000;
    double theta = 0.5;       // prior edge probability
    std::uint64_t seed = 0;
    double b0 = 3.0;          // prior degrees of freedom
    double d0_scale = 1.0;    // prior scale D = d0_scale * I

    void validate() const;
};

struct PosteriorSummary {
    Matrix edge_probs;       // waiting-time weighted edge inclusion, zero diagonal
    Matrix k_bar;            // weighted average precision
    Matrix parcorr;          // partial correlations of k_bar, unit diagonal
    Graph binary;            // edge_probs > cutoff (0.5)
    double total_weight = 0.0;
    long n_graphs_visited = 0;
};

/// Latent interval for one cell under the rank constraints: lower bound is the
/// largest z among rows with a strictly smaller observed category, upper the
/// smallest z among strictly larger ones. Missing observations get (-inf, inf).
std::pair<double, double> rank_bounds(const Eigen::Ref<const Eigen::VectorXi>& y_col,
                                      const Eigen::Ref<const Eigen::Matrix<bool, Eigen::Dynamic, 1>>& miss_col,
                                      const Eigen::Ref<const Vector>& z_col, int row);

/// One Gibbs pass over all latent cells. Each z(r,j) is redrawn from its
/// conditional normal (mean -sum_t k_jt z_rt / k_jj, variance 1/k_jj)
/// truncated to the rank interval. Updates z in place.
void gibbs_latent_sweep(Matrix& z, const ResponseMatrix& y, const Matrix& k, Rng& rng);

/// Latent starting values: Gaussian quantile of each observation's mid-rank
/// within its column; missing cells start at 0.
Matrix init_latent(const ResponseMatrix& y);

/// Direct G-Wishart sampler: full Wishart draw, then iterative completion of
/// the covariance over the non-edges (Lenkoski-style), inverted back and with
/// the zero pattern applied exactly. Tolerance 1e-8, at most 100 cycles.
Matrix sample_gwishart(const GWishartParams& params, const Graph& g, Rng& rng);

/// Rates for one iteration of the birth-death scan. Entry k corresponds to
/// the pair (i,j) with j>i in row-major upper-triangle order.
struct BirthDeathRates {
    std::vector<double> rate;      // per pair; birth rate if absent, death if present
    double total = 0.0;
    std::vector<std::pair<int, int>> pairs;
};

/// Birth/death rates of the graph jump process. For each pair the rate carries
/// the posterior ratio between the states with and without the edge (holding
/// the remaining precision entries fixed and integrating the edge entry and
/// the touched diagonal), the prior odds theta/(1-theta), and the
/// one-edge-difference closed-form ratio of G-Wishart normalizing constants.
/// The ratio is split evenly in log scale between the birth and death side.
BirthDeathRates birth_death_rates(const Graph& g, const Matrix& k, const GWishartParams& post,
                                  const GWishartParams& prior, double theta);

/// Waiting-time weighted edge inclusion probabilities from visited graphs.
Matrix edge_inclusion(const std::vector<std::pair<Graph, double>>& weighted_visits);

/// Partial correlations from a precision matrix: off-diagonal
/// -k_ij/sqrt(k_ii k_jj), diagonal fixed at 1.
Matrix partial_correlations(const Matrix& k);

/// Binary graph by strict cutoff on edge inclusion probabilities.
Graph select_binary_graph(const Matrix& pp, double cutoff = 0.5);

/// Full per-country chain: latent sweeps, G-Wishart posterior draws, one
/// birth/death jump per iteration with expected waiting time 1/(total rate)
/// as the visit weight. Deterministic for a fixed (y, config).
PosteriorSummary run_bdmcmc(const ResponseMatrix& y, const McmcConfig& config);

}  // namespace cultnet
