#pragma once

#include <algorithm>
#include <vector>

#include "movrep/metric.hpp"
#include "movrep/rng.hpp"

namespace movrep {

// Dominating 2-HST sampled FRT-style: random center permutation, random
// radius scale beta in [1,2), hierarchical ball partitioning with radii
// beta*2^level. A cluster at level j lies within beta*2^j of its center and
// hangs from its parent by an edge of length beta*2^(j+1), which makes
// domination exact: a pair split below level j+1 sits at tree distance at
// least beta*2^(j+2), an upper bound on the parent cluster's diameter.
struct DominatingTree {
    struct Node {
        int parent = -1;
        Rat edge_up;       // length of the edge to the parent
        long level = 0;
        int center = 0;    // metric node defining the cluster
    };
    std::vector<Node> nodes;   // nodes[0] is the root
    std::vector<int> leaf_of;  // metric node -> tree node
    std::uint64_t seed = 0;
    Rat beta;

    Rat distance(int u, int v) const {
        int a = leaf_of.at(static_cast<size_t>(u));
        int b = leaf_of.at(static_cast<size_t>(v));
        Rat total(0);
        while (a != b) {
            if (nodes[static_cast<size_t>(a)].level < nodes[static_cast<size_t>(b)].level) {
                total += nodes[static_cast<size_t>(a)].edge_up;
                a = nodes[static_cast<size_t>(a)].parent;
            } else {
                total += nodes[static_cast<size_t>(b)].edge_up;
                b = nodes[static_cast<size_t>(b)].parent;
            }
            MOVREP_CHECK(a >= 0 && b >= 0, "tree_distance: nodes share no ancestor");
        }
        return total;
    }
};

inline Rat tree_distance(const DominatingTree& t, int u, int v) {
    MOVREP_CHECK(u >= 0 && v >= 0 && u < static_cast<int>(t.leaf_of.size()) &&
                     v < static_cast<int>(t.leaf_of.size()),
                 "tree_distance: unknown node id");
    return t.distance(u, v);
}

inline DominatingTree embed_once(const MetricSpace& m, std::uint64_t seed) {
    MOVREP_CHECK(m.n >= 1, "embed_once: empty metric");
    DominatingTree tree;
    tree.seed = seed;
    Rng rng(seed);
    std::vector<int> perm(static_cast<size_t>(m.n));
    for (int i = 0; i < m.n; ++i) perm[static_cast<size_t>(i)] = i;
    rng.shuffle(perm);
    tree.beta = 1 + make_rat(static_cast<long>(rng.below(1u << 20)), 1L << 20);

    tree.leaf_of.assign(static_cast<size_t>(m.n), -1);
    const Rat diam = m.diameter();
    if (diam == 0) {
        tree.nodes.push_back({-1, Rat(0), 0, perm[0]});
        for (int u = 0; u < m.n; ++u) tree.leaf_of[static_cast<size_t>(u)] = 0;
        return tree;
    }
    const long delta = ceil_log2(diam);

    struct Cluster {
        int tree_node;
        std::vector<int> members;
    };
    tree.nodes.push_back({-1, Rat(0), delta, perm[0]});
    std::vector<Cluster> frontier;
    {
        std::vector<int> all(static_cast<size_t>(m.n));
        for (int i = 0; i < m.n; ++i) all[static_cast<size_t>(i)] = i;
        frontier.push_back({0, std::move(all)});
    }
    long level = delta;
    while (!frontier.empty()) {
        --level;
        const Rat radius = tree.beta * pow2(level);
        std::vector<Cluster> next;
        for (const auto& cl : frontier) {
            // Assign each member to the first permutation center within radius.
            std::vector<std::pair<int, std::vector<int>>> groups;  // (perm pos, members)
            for (int u : cl.members) {
                int pos = -1;
                for (size_t p = 0; p < perm.size(); ++p)
                    if (m.at(u, perm[p]) <= radius) {
                        pos = static_cast<int>(p);
                        break;
                    }
                MOVREP_CHECK(pos >= 0, "cluster assignment failed");
                bool placed = false;
                for (auto& g : groups)
                    if (g.first == pos) {
                        g.second.push_back(u);
                        placed = true;
                    }
                if (!placed) groups.push_back({pos, {u}});
            }
            std::sort(groups.begin(), groups.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            for (auto& g : groups) {
                const int id = static_cast<int>(tree.nodes.size());
                tree.nodes.push_back(
                    {cl.tree_node, tree.beta * pow2(level + 1), level, perm[static_cast<size_t>(g.first)]});
                // Zero-diameter clusters become leaves.
                bool flat = true;
                for (size_t i = 1; i < g.second.size() && flat; ++i)
                    if (m.at(g.second[0], g.second[i]) != 0) flat = false;
                if (flat) {
                    for (int u : g.second) tree.leaf_of[static_cast<size_t>(u)] = id;
                } else {
                    next.push_back({id, std::move(g.second)});
                }
            }
        }
        frontier = std::move(next);
    }
    for (int u = 0; u < m.n; ++u)
        MOVREP_CHECK(tree.leaf_of[static_cast<size_t>(u)] >= 0, "node missing from the embedding");
    return tree;
}

struct TreeDistribution {
    std::vector<DominatingTree> trees;
    std::vector<Rat> weights;  // uniform, sums to 1
    Rat mean_distortion;       // mean over pairs of E[d_T]/d (positive pairs)
};

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline TreeDistribution sample_distribution(const MetricSpace& m, int count, std::uint64_t seed) {
    MOVREP_CHECK(count >= 1, "sample_distribution: count must be positive");
    TreeDistribution dist;
    for (int i = 0; i < count; ++i)
        dist.trees.push_back(embed_once(m, derive_seed(seed, static_cast<std::uint64_t>(i))));
    dist.weights.assign(static_cast<size_t>(count), make_rat(1, count));
    Rat sum(0);
    long pairs = 0;
    for (int u = 0; u < m.n; ++u)
        for (int v = u + 1; v < m.n; ++v) {
            if (m.at(u, v) == 0) continue;
            Rat expect(0);
            for (const auto& t : dist.trees) expect += t.distance(u, v);
            expect /= count;
            sum += expect / m.at(u, v);
            ++pairs;
        }
    dist.mean_distortion = pairs ? Rat(sum / pairs) : Rat(0);
    return dist;
}

// Default sample count 4*ceil(n*log2 n), mirroring the O(n log n) support
// size. ceil(n*log2 n) computes exactly as ceil(log2(n^n)).
inline int default_tree_count(int n) {
    if (n <= 1) return 1;
    Int power;
    mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(n));
    return static_cast<int>(4 * ceil_log2(Rat(power)));
}

}  // namespace movrep
