#pragma once

#include <string>
#include <vector>

#include "cultnet/ingest.hpp"
#include "cultnet/types.hpp"

namespace cultnet {

enum class Measure { ParCorr, ProbEdge, MargDistr, Mean, CulturalMap, NetworkIndex };

const char* measure_name(Measure m);
Measure measure_from_name(const std::string& name);

/// Symmetric country-by-country distances for one measure, with the affine
/// standardization bookkeeping.
struct DistanceMatrix {
    Measure measure = Measure::ParCorr;
    std::vector<std::string> countries;
    Matrix values;
    bool standardized = false;
    double raw_min = 0.0;
    double raw_max = 0.0;

    int size() const { return static_cast<int>(countries.size()); }
};

/// Frobenius norm of the difference over the full matrix (symmetric entries
/// counted twice, diagonals cancel).
double parcorr_distance(const Matrix& pc_l, const Matrix& pc_m);
double probedge_distance(const Matrix& pp_l, const Matrix& pp_m);

/// Symmetrized Kullback-Leibler divergence between two empirical pmfs over
/// the categories with strictly positive frequency in both. Categories seen
/// in only one country are excluded (and can be reported via `excluded`).
double phi_divergence(const EmpiricalMarginal& f_l, const EmpiricalMarginal& f_m,
                      std::vector<int>* excluded = nullptr);

/// Euclidean combination of the per-variable phi divergences.
double margdistr_distance(const std::vector<EmpiricalMarginal>& marginals_l,
                          const std::vector<EmpiricalMarginal>& marginals_m);

double mean_distance(const Vector& means_l, const Vector& means_m);

double culturalmap_distance(const Eigen::Vector2d& coords_l, const Eigen::Vector2d& coords_m);

/// Affine rescale of the off-diagonal entries to [0,1]; the diagonal stays 0
/// and the original range is recorded. Idempotent.
DistanceMatrix standardize(const DistanceMatrix& d);

/// Entrywise sum of the standardized MargDistr and ParCorr distances,
/// re-standardized to [0,1].
DistanceMatrix network_index(const DistanceMatrix& margdistr_s, const DistanceMatrix& parcorr_s);

/// Pearson correlation between the off-diagonal upper triangles of two
/// distance matrices over the same country list.
double offdiag_correlation(const DistanceMatrix& a, const DistanceMatrix& b);

/// Off-diagonal upper triangle as a flat vector (pair order (0,1),(0,2),...).
std::vector<double> offdiag_values(const DistanceMatrix& d);

}  // namespace cultnet
