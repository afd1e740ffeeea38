#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cultnet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntMatrix = Eigen::MatrixXi;
using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

// Input/data problems: bad files, out-of-support values, empty selections.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical problems: failed factorizations, non-finite rates, degenerate ranges.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Missing upstream artifact in the pipeline.
class ArtifactError : public std::runtime_error {
public:
    explicit ArtifactError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Undirected graph on p nodes, dense symmetric adjacency, no self-loops.
class Graph {
public:
    Graph() : p_(0) {}
    explicit Graph(int p) : p_(p), adj_(static_cast<std::size_t>(p) * p, 0) {}

    static Graph complete(int p) {
        Graph g(p);
        for (int i = 0; i < p; ++i)
            for (int j = i + 1; j < p; ++j) g.set_edge(i, j, true);
        return g;
    }

    int node_count() const { return p_; }

    bool edge(int i, int j) const { return adj_[idx(i, j)] != 0; }

    void set_edge(int i, int j, bool present) {
        if (i == j) throw std::invalid_argument("Graph: self-loops not allowed");
        adj_[idx(i, j)] = present ? 1 : 0;
        adj_[idx(j, i)] = present ? 1 : 0;
    }

    void toggle_edge(int i, int j) { set_edge(i, j, !edge(i, j)); }

    int edge_count() const {
        int m = 0;
        for (int i = 0; i < p_; ++i)
            for (int j = i + 1; j < p_; ++j) m += edge(i, j) ? 1 : 0;
        return m;
    }

    int degree(int i) const {
        int d = 0;
        for (int j = 0; j < p_; ++j)
            if (j != i && edge(i, j)) ++d;
        return d;
    }

    std::vector<int> neighbors(int i) const {
        std::vector<int> out;
        for (int j = 0; j < p_; ++j)
            if (j != i && edge(i, j)) out.push_back(j);
        return out;
    }

    /// Number of common neighbors of i and j.
    int common_neighbors(int i, int j) const {
        int d = 0;
        for (int k = 0; k < p_; ++k)
            if (k != i && k != j && edge(i, k) && edge(j, k)) ++d;
        return d;
    }

    bool operator==(const Graph& other) const { return p_ == other.p_ && adj_ == other.adj_; }

    /// Packed upper-triangle key, used to count distinct visited graphs.
    /// Exact for p <= 11 (45 pair bits), hashed beyond that.
    std::uint64_t triangle_key() const {
        const bool exact = p_ * (p_ - 1) / 2 <= 64;
        std::uint64_t key = exact ? 0ull : 1469598103934665603ull;
        for (int i = 0; i < p_; ++i)
            for (int j = i + 1; j < p_; ++j) {
                if (exact) {
                    key = (key << 1) | (edge(i, j) ? 1ull : 0ull);
                } else {
                    key ^= edge(i, j) ? 1ull : 2ull;
                    key *= 1099511628211ull;
                }
            }
        return key;
    }

private:
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * p_ + static_cast<std::size_t>(j);
    }

    int p_;
    std::vector<std::uint8_t> adj_;
};

}  // namespace cultnet
