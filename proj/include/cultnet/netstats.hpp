#pragma once

#include <string>
#include <vector>

#include "cultnet/types.hpp"

namespace cultnet {

/// Adjacency with edge signs taken from partial correlations: +1/-1 on edges,
/// 0 elsewhere, zero diagonal.
struct SignedGraph {
    int p = 0;
    Eigen::MatrixXi sign;
    std::vector<std::pair<int, int>> zero_parcorr_edges;  // flagged, sign forced to +1

    Graph skeleton() const {
        Graph g(p);
        for (int i = 0; i < p; ++i)
            for (int j = i + 1; j < p; ++j)
                if (sign(i, j) != 0) g.set_edge(i, j, true);
        return g;
    }
};

struct NetworkStats {
    double pos_neg_ratio = 0.0;  // +inf when no negative edges; NaN when no edges
    double density = 0.0;
    double degree_centralization = 0.0;
    double betweenness_centralization = 0.0;
    double closeness_centralization = 0.0;
    std::vector<double> node_betweenness;  // standardized per node
};

SignedGraph signed_graph(const Graph& binary, const Matrix& parcorr);

/// (#positive edges)/(#negative edges); +inf with positives only, NaN when the
/// graph has no edges at all.
double pos_neg_ratio(const SignedGraph& g);

double density(const Graph& g);

/// Freeman degree centralization: sum of (max degree - degree) over the
/// star-graph maximum (p-1)(p-2). 1 on a star, 0 on regular graphs.
double degree_centralization(const Graph& g);

/// Shortest-path betweenness with fractional counting of ties, standardized
/// by (p-1)(p-2)/2 per node; Freeman centralization over the star maximum.
double betweenness_centralization(const Graph& g, std::vector<double>* node_values = nullptr);

/// Closeness (p-1)/sum-of-distances with unreachable pairs at distance p;
/// Freeman centralization with star denominator (p-1)(p-2)/(2p-3).
double closeness_centralization(const Graph& g);

NetworkStats network_stats(const SignedGraph& g);

}  // namespace cultnet
