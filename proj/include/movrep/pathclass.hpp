#pragma once

#include <algorithm>
#include <vector>

#include "movrep/instance.hpp"

namespace movrep {

// Equivalence class of depot-rooted walks by visited-node set. Constraint
// membership in the path LP depends only on the visited set, so one class
// per (repairman, subset) stands in for the whole walk family.
struct PathClass {
    int repairman = 0;
    std::vector<int> visited;   // sorted, always contains the depot
    Rat min_length;             // Held-Karp value when length_exact
    std::vector<int> rep_walk;  // a walk realizing min_length, starts at depot
    bool length_exact = true;

    bool hits(const Instance& in, int client, const Rat& radius_time) const {
        const Client& c = in.clients.at(static_cast<size_t>(client));
        const Rat reach = c.speed * radius_time;
        for (int u : visited)
            if (in.metric.at(c.start, u) <= reach) return true;
        return false;
    }
};

// Held-Karp over all depot-containing subsets with optimal walk length
// within `length_budget`. Classes come back sorted by (min_length, subset).
inline std::vector<PathClass> enumerate_path_classes(const Instance& in, int repairman,
                                                     const Rat& length_budget, int node_cap = 14) {
    MOVREP_CHECK(in.n() <= node_cap,
                 "enumerate_path_classes: instance too large for exact enumeration; use oracle mode");
    const Repairman& rep = in.repairmen.at(static_cast<size_t>(repairman));
    const int n = in.n();
    const int depot = rep.depot;

    // dp[mask][end]: min walk length from depot visiting mask, ending at end.
    // Masks are over non-depot nodes.
    std::vector<int> others;
    for (int v = 0; v < n; ++v)
        if (v != depot) others.push_back(v);
    const size_t full = static_cast<size_t>(1) << others.size();
    const Rat inf = length_budget + 1;
    std::vector<std::vector<Rat>> dp(full, std::vector<Rat>(others.size(), inf));
    std::vector<std::vector<int>> back(full, std::vector<int>(others.size(), -1));
    for (size_t i = 0; i < others.size(); ++i)
        dp[static_cast<size_t>(1) << i][i] = in.metric.at(depot, others[i]);
    for (size_t mask = 1; mask < full; ++mask)
        for (size_t last = 0; last < others.size(); ++last) {
            if (!(mask & (static_cast<size_t>(1) << last))) continue;
            const Rat& cur = dp[mask][last];
            if (cur >= inf) continue;
            for (size_t nxt = 0; nxt < others.size(); ++nxt) {
                if (mask & (static_cast<size_t>(1) << nxt)) continue;
                const size_t nmask = mask | (static_cast<size_t>(1) << nxt);
                Rat cand = cur + in.metric.at(others[last], others[nxt]);
                if (cand < dp[nmask][nxt]) {
                    dp[nmask][nxt] = cand;
                    back[nmask][nxt] = static_cast<int>(last);
                }
            }
        }

    std::vector<PathClass> classes;
    for (size_t mask = 0; mask < full; ++mask) {
        Rat best;
        int best_end = -1;
        if (mask == 0) {
            best = 0;
        } else {
            for (size_t last = 0; last < others.size(); ++last) {
                if (!(mask & (static_cast<size_t>(1) << last))) continue;
                if (best_end < 0 || dp[mask][last] < best) {
                    best = dp[mask][last];
                    best_end = static_cast<int>(last);
                }
            }
        }
        if (best > length_budget) continue;
        PathClass pc;
        pc.repairman = repairman;
        pc.min_length = best;
        pc.visited.push_back(depot);
        for (size_t i = 0; i < others.size(); ++i)
            if (mask & (static_cast<size_t>(1) << i)) pc.visited.push_back(others[i]);
        std::sort(pc.visited.begin(), pc.visited.end());
        std::vector<int> order;
        size_t m2 = mask;
        int e = best_end;
        while (e >= 0) {
            order.push_back(others[static_cast<size_t>(e)]);
            const int prev = back[m2][static_cast<size_t>(e)];
            m2 ^= static_cast<size_t>(1) << e;
            e = prev;
        }
        pc.rep_walk.push_back(depot);
        for (auto it = order.rbegin(); it != order.rend(); ++it) pc.rep_walk.push_back(*it);
        classes.push_back(std::move(pc));
    }
    std::sort(classes.begin(), classes.end(), [](const PathClass& a, const PathClass& b) {
        if (a.min_length != b.min_length) return a.min_length < b.min_length;
        return a.visited < b.visited;
    });
    return classes;
}

}  // namespace movrep
