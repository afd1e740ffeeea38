#include "cultnet/netstats.hpp"

#include <cmath>
#include <deque>
#include <limits>

namespace cultnet {

SignedGraph signed_graph(const Graph& binary, const Matrix& parcorr) {
    const int p = binary.node_count();
    if (static_cast<int>(parcorr.rows()) != p || static_cast<int>(parcorr.cols()) != p)
        throw DataError("signed_graph: dimension mismatch");
    SignedGraph out;
    out.p = p;
    out.sign = Eigen::MatrixXi::Zero(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j) {
            if (!binary.edge(i, j)) continue;
            int s;
            if (parcorr(i, j) > 0.0) {
                s = 1;
            } else if (parcorr(i, j) < 0.0) {
                s = -1;
            } else {
                // Measure-zero event under the continuous posterior; keep the
                // pipeline moving and report it.
                s = 1;
                out.zero_parcorr_edges.emplace_back(i, j);
            }
            out.sign(i, j) = s;
            out.sign(j, i) = s;
        }
    return out;
}

double pos_neg_ratio(const SignedGraph& g) {
    int pos = 0, neg = 0;
    for (int i = 0; i < g.p; ++i)
        for (int j = i + 1; j < g.p; ++j) {
            if (g.sign(i, j) > 0) ++pos;
            if (g.sign(i, j) < 0) ++neg;
        }
    if (pos == 0 && neg == 0) return std::numeric_limits<double>::quiet_NaN();
    if (neg == 0) return std::numeric_limits<double>::infinity();
    return static_cast<double>(pos) / static_cast<double>(neg);
}

double density(const Graph& g) {
    const int p = g.node_count();
    if (p < 2) throw DataError("density: need at least 2 nodes");
    return static_cast<double>(g.edge_count()) / (0.5 * p * (p - 1));
}

double degree_centralization(const Graph& g) {
    const int p = g.node_count();
    if (p < 3) throw DataError("degree_centralization: need at least 3 nodes");
    int dmax = 0;
    std::vector<int> deg(p);
    for (int i = 0; i < p; ++i) {
        deg[i] = g.degree(i);
        dmax = std::max(dmax, deg[i]);
    }
    double num = 0.0;
    for (int i = 0; i < p; ++i) num += dmax - deg[i];
    return num / (static_cast<double>(p - 1) * (p - 2));
}

namespace {

// Brandes' accumulation, fractional shortest-path counting.
std::vector<double> betweenness_raw(const Graph& g) {
    const int p = g.node_count();
    std::vector<double> bc(p, 0.0);
    for (int s = 0; s < p; ++s) {
        std::vector<int> dist(p, -1);
        std::vector<double> nsp(p, 0.0);
        std::vector<std::vector<int>> preds(p);
        std::vector<int> order;
        std::deque<int> queue;
        dist[s] = 0;
        nsp[s] = 1.0;
        queue.push_back(s);
        while (!queue.empty()) {
            const int v = queue.front();
            queue.pop_front();
            order.push_back(v);
            for (int w = 0; w < p; ++w) {
                if (w == v || !g.edge(v, w)) continue;
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if (dist[w] == dist[v] + 1) {
                    nsp[w] += nsp[v];
                    preds[w].push_back(v);
                }
            }
        }
        std::vector<double> delta(p, 0.0);
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const int w = *it;
            for (int v : preds[w]) delta[v] += nsp[v] / nsp[w] * (1.0 + delta[w]);
            if (w != s) bc[w] += delta[w];
        }
    }
    // Each unordered pair was counted from both endpoints.
    for (double& b : bc) b *= 0.5;
    return bc;
}

std::vector<int> bfs_distances(const Graph& g, int s) {
    const int p = g.node_count();
    std::vector<int> dist(p, -1);
    std::deque<int> queue;
    dist[s] = 0;
    queue.push_back(s);
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (int w = 0; w < p; ++w)
            if (w != v && g.edge(v, w) && dist[w] < 0) {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
    }
    return dist;
}

}  // namespace

double betweenness_centralization(const Graph& g, std::vector<double>* node_values) {
    const int p = g.node_count();
    if (p < 3) throw DataError("betweenness_centralization: need at least 3 nodes");
    std::vector<double> bc = betweenness_raw(g);
    const double norm = 0.5 * (p - 1) * (p - 2);
    for (double& b : bc) b /= norm;
    double bmax = 0.0;
    for (double b : bc) bmax = std::max(bmax, b);
    double num = 0.0;
    for (double b : bc) num += bmax - b;
    if (node_values) *node_values = bc;
    return num / (p - 1);
}

double closeness_centralization(const Graph& g) {
    const int p = g.node_count();
    if (p < 3) throw DataError("closeness_centralization: need at least 3 nodes");
    std::vector<double> cc(p);
    for (int i = 0; i < p; ++i) {
        const auto dist = bfs_distances(g, i);
        double total = 0.0;
        for (int j = 0; j < p; ++j) {
            if (j == i) continue;
            total += dist[j] < 0 ? p : dist[j];  // unreachable pairs at distance p
        }
        cc[i] = static_cast<double>(p - 1) / total;
    }
    double cmax = 0.0;
    for (double c : cc) cmax = std::max(cmax, c);
    double num = 0.0;
    for (double c : cc) num += cmax - c;
    const double denom = static_cast<double>(p - 1) * (p - 2) / (2.0 * p - 3.0);
    return num / denom;
}

NetworkStats network_stats(const SignedGraph& g) {
    NetworkStats s;
    const Graph skel = g.skeleton();
    s.pos_neg_ratio = pos_neg_ratio(g);
    s.density = density(skel);
    s.degree_centralization = degree_centralization(skel);
    s.betweenness_centralization = betweenness_centralization(skel, &s.node_betweenness);
    s.closeness_centralization = closeness_centralization(skel);
    return s;
}

}  // namespace cultnet
