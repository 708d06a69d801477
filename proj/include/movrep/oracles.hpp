#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "movrep/instance.hpp"
#include "movrep/schedule.hpp"
#include "movrep/steiner.hpp"

namespace movrep {

// Caps enforced before any exhaustive search starts.
struct OracleBudget {
    int node_cap = 6;
    int repairman_cap = 2;
    int client_cap = 4;
    int visit_cap = 8;  // n + 2 on the default node cap
};

namespace detail {

// Latency of each client against a single fast-as-possible walk.
inline std::vector<std::optional<Rat>> walk_latencies(const Instance& in, const Repairman& r,
                                                      const std::vector<int>& seq) {
    std::vector<std::optional<Rat>> lat(static_cast<size_t>(in.m()));
    Rat t(0);
    int prev = r.depot;
    for (size_t i = 0; i < seq.size(); ++i) {
        t += in.metric.at(prev, seq[i]) / r.speed;
        prev = seq[i];
        for (int j = 0; j < in.m(); ++j) {
            const Client& c = in.clients[static_cast<size_t>(j)];
            const Rat dist = in.metric.at(c.start, seq[i]);
            Rat cand;
            if (c.speed == 0) {
                if (dist != 0) continue;
                cand = t;
            } else {
                const Rat travel = dist / c.speed;
                cand = travel > t ? travel : t;
            }
            auto& cur = lat[static_cast<size_t>(j)];
            if (!cur || cand < *cur) cur = cand;
        }
    }
    return lat;
}

inline bool dominates(const std::vector<std::optional<Rat>>& a,
                      const std::vector<std::optional<Rat>>& b) {
    // true when a is componentwise <= b
    for (size_t i = 0; i < a.size(); ++i) {
        if (!b[i]) continue;
        if (!a[i] || *a[i] > *b[i]) return false;
    }
    return true;
}

// All distinct first-visit latency vectors achievable by one repairman,
// Pareto-pruned. In a metric, revisits never improve first-visit times, so
// simple sequences over the depot-rooted node set are exhaustive.
inline std::vector<std::vector<std::optional<Rat>>> repairman_vectors(const Instance& in,
                                                                      const Repairman& r) {
    std::vector<std::vector<std::optional<Rat>>> all;
    std::vector<int> seq = {r.depot};
    std::vector<bool> used(static_cast<size_t>(in.n()), false);
    used[static_cast<size_t>(r.depot)] = true;
    auto emit = [&]() { all.push_back(walk_latencies(in, r, seq)); };
    std::function<void()> rec = [&]() {
        emit();
        for (int v = 0; v < in.n(); ++v) {
            if (used[static_cast<size_t>(v)]) continue;
            used[static_cast<size_t>(v)] = true;
            seq.push_back(v);
            rec();
            seq.pop_back();
            used[static_cast<size_t>(v)] = false;
        }
    };
    rec();
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        for (size_t i = 0; i < a.size(); ++i) {
            const bool ha = a[i].has_value(), hb = b[i].has_value();
            if (ha != hb) return hb;  // served sorts before unserved
            if (ha && *a[i] != *b[i]) return *a[i] < *b[i];
        }
        return false;
    });
    all.erase(std::unique(all.begin(), all.end()), all.end());
    std::vector<std::vector<std::optional<Rat>>> kept;
    for (size_t i = 0; i < all.size(); ++i) {
        bool dead = false;
        for (size_t j = 0; j < all.size() && !dead; ++j)
            if (j != i && dominates(all[j], all[i]) && !(dominates(all[i], all[j]) && j > i)) dead = true;
        if (!dead) kept.push_back(all[i]);
    }
    return kept;
}

}  // namespace detail

struct ExactMrResult {
    Rat objective;
    std::vector<Rat> per_client;
};

namespace detail {

inline ExactMrResult exact_mr(const Instance& in, const OracleBudget& budget, bool maximize_last) {
    MOVREP_CHECK(in.n() <= budget.node_cap, "oracle cap exceeded: nodes");
    MOVREP_CHECK(in.k() <= budget.repairman_cap, "oracle cap exceeded: repairmen");
    MOVREP_CHECK(in.m() <= budget.client_cap, "oracle cap exceeded: clients");
    std::vector<std::vector<std::vector<std::optional<Rat>>>> per_rep;
    for (const auto& r : in.repairmen) per_rep.push_back(repairman_vectors(in, r));

    std::vector<std::optional<Rat>> combined(static_cast<size_t>(in.m()));
    std::optional<Rat> best;
    std::vector<Rat> best_vec;
    std::function<void(size_t)> rec = [&](size_t idx) {
        if (idx == per_rep.size()) {
            Rat score(0);
            std::vector<Rat> vec;
            vec.reserve(combined.size());
            for (const auto& l : combined) {
                if (!l) return;  // some client unserved by this combo
                vec.push_back(*l);
                if (maximize_last) {
                    if (*l > score) score = *l;
                } else {
                    score += *l;
                }
            }
            if (!best || score < *best) {
                best = score;
                best_vec = vec;
            }
            return;
        }
        for (const auto& vecs : per_rep[idx]) {
            auto saved = combined;
            for (size_t j = 0; j < combined.size(); ++j)
                if (vecs[j] && (!combined[j] || *vecs[j] < *combined[j])) combined[j] = vecs[j];
            rec(idx + 1);
            combined = saved;
        }
    };
    rec(0);
    MOVREP_CHECK(best.has_value(), "exact oracle: no schedule serves every client");
    return {*best, best_vec};
}

}  // namespace detail

// Optimal total indirect latency (exhaustive).
inline ExactMrResult exact_sum_mr(const Instance& in, const OracleBudget& budget = {}) {
    return detail::exact_mr(in, budget, false);
}

// Optimal makespan (max client latency), same search space.
inline ExactMrResult exact_max_mr(const Instance& in, const OracleBudget& budget = {}) {
    return detail::exact_mr(in, budget, true);
}

struct NpcstOracleClient {
    int node = 0;
    Rat profit;
    Rat radius;
};

// Optimal no-violation NPCST profit via group-Steiner over client subsets.
inline Rat exact_npcst(const MetricSpace& m, int root, const std::vector<NpcstOracleClient>& clients,
                       const Rat& budget) {
    MOVREP_CHECK(m.n <= 16, "oracle cap exceeded: nodes");
    MOVREP_CHECK(clients.size() <= 12, "oracle cap exceeded: clients");
    if (clients.empty()) return Rat(0);
    std::vector<std::vector<int>> groups;
    for (const auto& c : clients) {
        std::vector<int> g;
        for (int u = 0; u < m.n; ++u)
            if (m.at(c.node, u) <= c.radius) g.push_back(u);
        MOVREP_CHECK(!g.empty(), "client ball is empty");
        groups.push_back(g);
    }
    GroupSteiner gs(m, groups);
    Rat best(0);
    const size_t full = static_cast<size_t>(1) << clients.size();
    for (size_t mask = 0; mask < full; ++mask) {
        if (gs.cost(mask, root) > budget) continue;
        Rat profit(0);
        for (size_t i = 0; i < clients.size(); ++i)
            if (mask & (static_cast<size_t>(1) << i)) profit += clients[i].profit;
        if (profit > best) best = profit;
    }
    return best;
}

struct ExactCover {
    Rat max_length;
    std::vector<SteinerResult> trees;  // one per root, in root order
};

// Optimal rooted min-max tree cover by subset DP over terminal partitions.
inline ExactCover exact_minmax_cover(const MetricSpace& m, const std::vector<int>& roots,
                                     const std::vector<int>& terminals) {
    MOVREP_CHECK(!roots.empty(), "cover needs at least one root");
    MOVREP_CHECK(terminals.size() <= 8, "oracle cap exceeded: terminals");
    const size_t full = static_cast<size_t>(1) << terminals.size();
    std::vector<std::vector<int>> groups;
    for (int t : terminals) groups.push_back({t});
    std::optional<GroupSteiner> gs;
    if (!terminals.empty()) gs.emplace(m, groups);

    auto tree_cost = [&](size_t mask, int root) -> Rat {
        if (mask == 0) return Rat(0);
        return gs->cost(mask, root);
    };

    // h[j][mask]: min over assignments of terminals `mask` to roots 0..j of
    // the max tree length. Track the chosen subset for reconstruction.
    const size_t k = roots.size();
    std::vector<std::vector<Rat>> h(k, std::vector<Rat>(full));
    std::vector<std::vector<size_t>> pick(k, std::vector<size_t>(full, 0));
    for (size_t mask = 0; mask < full; ++mask) h[0][mask] = tree_cost(mask, roots[0]);
    for (size_t j = 1; j < k; ++j)
        for (size_t mask = 0; mask < full; ++mask) {
            bool have = false;
            for (size_t sub = mask;; sub = (sub - 1) & mask) {
                const Rat own = tree_cost(sub, roots[j]);
                const Rat rest = h[j - 1][mask ^ sub];
                const Rat cand = own > rest ? own : rest;
                if (!have || cand < h[j][mask]) {
                    h[j][mask] = cand;
                    pick[j][mask] = sub;
                    have = true;
                }
                if (sub == 0) break;
            }
        }

    ExactCover out;
    out.max_length = h[k - 1][full - 1];
    std::vector<size_t> owned(k, 0);
    size_t rest = full - 1;
    for (size_t j = k; j-- > 1;) {
        owned[j] = pick[j][rest];
        rest ^= owned[j];
    }
    owned[0] = rest;
    for (size_t j = 0; j < k; ++j) {
        if (owned[j] == 0 || terminals.empty())
            out.trees.push_back(SteinerResult{Rat(0), {}, {roots[j]}});
        else
            out.trees.push_back(gs->build(owned[j], roots[j]));
    }
    return out;
}

// Optimal budgeted prize-collecting Steiner tree over explicit centers.
inline Rat exact_bpcst(const MetricSpace& m, const std::vector<Rat>& profits, int root,
                       const Rat& budget) {
    MOVREP_CHECK(m.n <= 14, "oracle cap exceeded: centers");
    MOVREP_CHECK(static_cast<int>(profits.size()) == m.n, "profit per center required");
    std::vector<int> others;
    for (int v = 0; v < m.n; ++v)
        if (v != root) others.push_back(v);
    Rat best(0);
    const size_t full = static_cast<size_t>(1) << others.size();
    for (size_t mask = 0; mask < full; ++mask) {
        std::vector<int> nodes = {root};
        Rat profit = profits[static_cast<size_t>(root)];
        for (size_t i = 0; i < others.size(); ++i)
            if (mask & (static_cast<size_t>(1) << i)) {
                nodes.push_back(others[i]);
                profit += profits[static_cast<size_t>(others[i])];
            }
        if (mst_cost(m, nodes) > budget) continue;
        if (profit > best) best = profit;
    }
    return best;
}

}  // namespace movrep
