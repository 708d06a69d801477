#pragma once

#include <utility>
#include <vector>

#include "movrep/metric.hpp"

namespace movrep {

struct SteinerResult {
    Rat cost;
    std::vector<std::pair<int, int>> edges;  // metric-completion edges
    std::vector<int> nodes;                  // nodes touched by the tree
};

// Dreyfus-Wagner over groups: dp[S][v] = min cost of a tree containing v
// and at least one node from every group in S. Steiner nodes come from the
// whole metric. Sizes here are oracle-scale (|groups| <= ~10, n <= ~16).
class GroupSteiner {
public:
    GroupSteiner(const MetricSpace& m, std::vector<std::vector<int>> groups)
        : m_(m), groups_(std::move(groups)) {
        const int g = static_cast<int>(groups_.size());
        MOVREP_CHECK(g <= 20, "GroupSteiner: too many groups");
        dp_.assign(static_cast<size_t>(1) << g, std::vector<Rat>(static_cast<size_t>(m_.n)));
        choice_.assign(dp_.size(), std::vector<Choice>(static_cast<size_t>(m_.n)));
        for (int i = 0; i < g; ++i) {
            const size_t s = static_cast<size_t>(1) << i;
            for (int v = 0; v < m_.n; ++v) {
                int bestu = groups_[static_cast<size_t>(i)].at(0);
                for (int u : groups_[static_cast<size_t>(i)])
                    if (m_.at(v, u) < m_.at(v, bestu)) bestu = u;
                dp_[s][static_cast<size_t>(v)] = m_.at(v, bestu);
                choice_[s][static_cast<size_t>(v)] = {Choice::Seed, bestu, 0};
            }
        }
        for (size_t s = 1; s < dp_.size(); ++s) {
            if ((s & (s - 1)) == 0) continue;  // singletons already seeded
            auto& row = dp_[s];
            auto& ch = choice_[s];
            for (int v = 0; v < m_.n; ++v) {
                bool have = false;
                for (size_t sub = (s - 1) & s; sub; sub = (sub - 1) & s) {
                    if (sub > (s ^ sub)) continue;  // each split once
                    Rat cand = dp_[sub][static_cast<size_t>(v)] + dp_[s ^ sub][static_cast<size_t>(v)];
                    if (!have || cand < row[static_cast<size_t>(v)]) {
                        row[static_cast<size_t>(v)] = cand;
                        ch[static_cast<size_t>(v)] = {Choice::Merge, -1, sub};
                        have = true;
                    }
                }
            }
            // Bellman-Ford style extension pass; n rounds certainly suffice.
            for (int round = 0; round < m_.n; ++round) {
                bool changed = false;
                for (int v = 0; v < m_.n; ++v)
                    for (int u = 0; u < m_.n; ++u) {
                        if (u == v) continue;
                        Rat cand = row[static_cast<size_t>(u)] + m_.at(u, v);
                        if (cand < row[static_cast<size_t>(v)]) {
                            row[static_cast<size_t>(v)] = cand;
                            ch[static_cast<size_t>(v)] = {Choice::Extend, u, 0};
                            changed = true;
                        }
                    }
                if (!changed) break;
            }
        }
    }

    Rat cost(size_t group_mask, int v) const { return dp_[group_mask][static_cast<size_t>(v)]; }

    SteinerResult build(size_t group_mask, int v) const {
        SteinerResult res;
        res.cost = dp_[group_mask][static_cast<size_t>(v)];
        std::vector<bool> seen(static_cast<size_t>(m_.n), false);
        rebuild(group_mask, v, res, seen);
        seen[static_cast<size_t>(v)] = true;
        for (int u = 0; u < m_.n; ++u)
            if (seen[static_cast<size_t>(u)]) res.nodes.push_back(u);
        return res;
    }

private:
    struct Choice {
        enum Kind { Seed, Merge, Extend } kind = Seed;
        int node = -1;     // Seed: group node; Extend: predecessor
        size_t sub = 0;    // Merge: one side of the split
    };

    void rebuild(size_t s, int v, SteinerResult& res, std::vector<bool>& seen) const {
        if (s == 0) return;
        const Choice& c = choice_[s][static_cast<size_t>(v)];
        switch (c.kind) {
            case Choice::Seed:
                if (c.node != v) {
                    res.edges.emplace_back(v, c.node);
                    seen[static_cast<size_t>(c.node)] = true;
                }
                break;
            case Choice::Merge:
                rebuild(c.sub, v, res, seen);
                rebuild(s ^ c.sub, v, res, seen);
                break;
            case Choice::Extend:
                res.edges.emplace_back(c.node, v);
                seen[static_cast<size_t>(c.node)] = true;
                rebuild(s, c.node, res, seen);
                break;
        }
        seen[static_cast<size_t>(v)] = true;
    }

    const MetricSpace& m_;
    std::vector<std::vector<int>> groups_;
    std::vector<std::vector<Rat>> dp_;
    std::vector<std::vector<Choice>> choice_;
};

// Min-cost tree containing root and hitting every group.
inline SteinerResult steiner_tree(const MetricSpace& m, int root,
                                  const std::vector<std::vector<int>>& groups) {
    if (groups.empty()) return SteinerResult{Rat(0), {}, {root}};
    GroupSteiner gs(m, groups);
    return gs.build((static_cast<size_t>(1) << groups.size()) - 1, root);
}

}  // namespace movrep
