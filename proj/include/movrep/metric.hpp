#pragma once

#include <string>
#include <vector>

#include "movrep/rational.hpp"

namespace movrep {

// Finite metric: symmetric n x n distance matrix of non-negative rationals.
struct MetricSpace {
    int n = 0;
    std::vector<Rat> d;  // row-major n*n

    MetricSpace() = default;
    explicit MetricSpace(int nodes) : n(nodes), d(static_cast<size_t>(nodes) * nodes, Rat(0)) {}

    const Rat& at(int u, int v) const { return d[static_cast<size_t>(u) * n + v]; }
    void set(int u, int v, const Rat& x) {
        d[static_cast<size_t>(u) * n + v] = x;
        d[static_cast<size_t>(v) * n + u] = x;
    }

    Rat diameter() const {
        Rat m(0);
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (at(u, v) > m) m = at(u, v);
        return m;
    }

    // Smallest positive pairwise distance; 0 when none exists.
    Rat min_positive() const {
        Rat m(0);
        bool found = false;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) {
                const Rat& x = at(u, v);
                if (x > 0 && (!found || x < m)) {
                    m = x;
                    found = true;
                }
            }
        return found ? m : Rat(0);
    }

    MetricSpace scaled(const Rat& factor) const {
        MetricSpace out(n);
        for (size_t i = 0; i < d.size(); ++i) out.d[i] = d[i] * factor;
        return out;
    }
};

struct MetricViolation {
    enum Kind { NegativeEntry, DiagonalNonzero, Asymmetry, Triangle } kind;
    int u = -1, v = -1, w = -1;

    std::string describe() const {
        switch (kind) {
            case NegativeEntry: return "negative entry at (" + std::to_string(u) + "," + std::to_string(v) + ")";
            case DiagonalNonzero: return "nonzero diagonal at (" + std::to_string(u) + ")";
            case Asymmetry: return "asymmetry at (" + std::to_string(u) + "," + std::to_string(v) + ")";
            case Triangle:
                return "triangle violation (" + std::to_string(u) + "," + std::to_string(v) + "," +
                       std::to_string(w) + ")";
        }
        return "?";
    }
};

// Returns every violated diagonal/symmetry/triangle condition; empty = valid.
inline std::vector<MetricViolation> validate_metric(const MetricSpace& m) {
    std::vector<MetricViolation> out;
    for (int u = 0; u < m.n; ++u) {
        if (m.at(u, u) != 0) out.push_back({MetricViolation::DiagonalNonzero, u, u, -1});
        for (int v = 0; v < m.n; ++v) {
            if (m.at(u, v) < 0) out.push_back({MetricViolation::NegativeEntry, u, v, -1});
            if (u < v && m.at(u, v) != m.at(v, u)) out.push_back({MetricViolation::Asymmetry, u, v, -1});
        }
    }
    for (int u = 0; u < m.n; ++u)
        for (int v = 0; v < m.n; ++v) {
            if (v == u) continue;
            for (int w = 0; w < m.n; ++w) {
                if (w == u || w == v) continue;
                if (m.at(u, w) > m.at(u, v) + m.at(v, w))
                    out.push_back({MetricViolation::Triangle, u, v, w});
            }
        }
    return out;
}

// Prim MST over the complete graph; deterministic tie-break by node index.
inline Rat mst_cost(const MetricSpace& m, const std::vector<int>& nodes) {
    if (nodes.size() <= 1) return Rat(0);
    std::vector<bool> in(nodes.size(), false);
    std::vector<Rat> best(nodes.size());
    in[0] = true;
    for (size_t i = 1; i < nodes.size(); ++i) best[i] = m.at(nodes[0], nodes[i]);
    Rat total(0);
    for (size_t step = 1; step < nodes.size(); ++step) {
        size_t pick = 0;
        bool have = false;
        for (size_t i = 1; i < nodes.size(); ++i) {
            if (in[i]) continue;
            if (!have || best[i] < best[pick]) {
                pick = i;
                have = true;
            }
        }
        total += best[pick];
        in[pick] = true;
        for (size_t i = 1; i < nodes.size(); ++i)
            if (!in[i] && m.at(nodes[pick], nodes[i]) < best[i]) best[i] = m.at(nodes[pick], nodes[i]);
    }
    return total;
}

inline Rat mst_cost(const MetricSpace& m) {
    std::vector<int> all(m.n);
    for (int i = 0; i < m.n; ++i) all[i] = i;
    return mst_cost(m, all);
}

// MST edge list over a node subset (indices into `nodes`), same tie-break.
inline std::vector<std::pair<int, int>> mst_edges(const MetricSpace& m, const std::vector<int>& nodes) {
    std::vector<std::pair<int, int>> edges;
    if (nodes.size() <= 1) return edges;
    std::vector<bool> in(nodes.size(), false);
    std::vector<Rat> best(nodes.size());
    std::vector<int> link(nodes.size(), 0);
    in[0] = true;
    for (size_t i = 1; i < nodes.size(); ++i) best[i] = m.at(nodes[0], nodes[i]);
    for (size_t step = 1; step < nodes.size(); ++step) {
        size_t pick = 0;
        bool have = false;
        for (size_t i = 1; i < nodes.size(); ++i) {
            if (in[i]) continue;
            if (!have || best[i] < best[pick]) {
                pick = i;
                have = true;
            }
        }
        edges.emplace_back(link[pick], static_cast<int>(pick));
        in[pick] = true;
        for (size_t i = 1; i < nodes.size(); ++i)
            if (!in[i] && m.at(nodes[pick], nodes[i]) < best[i]) {
                best[i] = m.at(nodes[pick], nodes[i]);
                link[i] = static_cast<int>(pick);
            }
    }
    return edges;
}

// All-pairs shortest-path closure of a symmetric non-negative matrix.
inline MetricSpace metric_closure(const MetricSpace& weights) {
    MetricSpace m = weights;
    for (int k = 0; k < m.n; ++k)
        for (int i = 0; i < m.n; ++i)
            for (int j = 0; j < m.n; ++j) {
                Rat via = m.at(i, k) + m.at(k, j);
                if (via < m.at(i, j)) m.set(i, j, via);
            }
    return m;
}

}  // namespace movrep
