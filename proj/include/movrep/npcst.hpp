#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include "movrep/frt.hpp"
#include "movrep/metric.hpp"
#include "movrep/treedp.hpp"

namespace movrep {

struct NpcstClient {
    int node = 0;
    Rat profit;  // theta_c >= 0
    Rat radius;  // t_c >= 0 (0 = must be hit exactly)
};

struct NpcstInstance {
    MetricSpace metric;
    int root = 0;
    std::vector<NpcstClient> clients;
    Rat budget;  // L
    // Clients whose ball sits further than L from the root can never be
    // served without violation; they are excluded from OPT accounting.
    std::vector<bool> reachable;

    void flag_reachability() {
        reachable.assign(clients.size(), false);
        for (size_t i = 0; i < clients.size(); ++i) {
            Rat best(-1);
            for (int u = 0; u < metric.n; ++u) {
                if (metric.at(clients[i].node, u) > clients[i].radius) continue;
                const Rat d = metric.at(root, u);
                if (best < 0 || d < best) best = d;
            }
            reachable[i] = best >= 0 && best <= budget;
        }
    }
};

struct TriCriteriaSolution {
    std::vector<int> tree_nodes;                  // metric nodes, includes the root
    std::vector<std::pair<int, int>> tree_edges;  // metric edges
    Rat cost;
    Rat profit;
    std::vector<int> hit;  // client indices within the declared stretch
    Rat sigma_declared, phi_declared;
    Rat sigma_measured, phi_measured;
    int chosen_tree = -1;
    long chosen_service_exp = -1;
};

// Smallest multiple of 1/1024 at or above log2(n).
inline Rat rational_log2_ceil(int n) {
    MOVREP_CHECK(n >= 1, "rational_log2_ceil: n must be positive");
    if (n == 1) return Rat(0);
    Int power;
    mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(n), 1024);
    return make_rat(ceil_log2(Rat(power)), 1024);
}

// Hit set and profit of a metric tree at stretch sigma.
inline std::pair<std::vector<int>, Rat> hit_profit(const std::vector<int>& tree_nodes,
                                                   const NpcstInstance& inst, const Rat& sigma) {
    MOVREP_CHECK(sigma >= 1, "hit_profit: sigma must be at least 1");
    std::vector<int> hit;
    Rat profit(0);
    for (size_t i = 0; i < inst.clients.size(); ++i) {
        const Rat reach = sigma * inst.clients[i].radius;
        for (int u : tree_nodes)
            if (inst.metric.at(inst.clients[i].node, u) <= reach) {
                hit.push_back(static_cast<int>(i));
                profit += inst.clients[i].profit;
                break;
            }
    }
    return {hit, profit};
}

namespace npcst_detail {

// The HST re-rooted at the root's leaf, pruned to client/root leaves, with
// unary chains contracted. Edge lengths stay exact rationals here; the DP
// stage quantizes them separately.
struct DpTree {
    RootedTree tree;                // rational edge lengths
    std::vector<int> metric_node;   // per node: metric node id, or -1
    std::vector<int> client_node;   // per client: hosting DP node
};

inline DpTree build_dp_tree(const DominatingTree& hst, const NpcstInstance& inst) {
    const size_t hn = hst.nodes.size();
    // adjacency of the HST
    std::vector<std::vector<std::pair<int, Rat>>> adj(hn);
    for (size_t v = 1; v < hn; ++v) {
        adj[v].push_back({hst.nodes[v].parent, hst.nodes[v].edge_up});
        adj[static_cast<size_t>(hst.nodes[v].parent)].push_back({static_cast<int>(v),
                                                                 hst.nodes[v].edge_up});
    }
    // metric node of each HST leaf node (smallest id when coincident)
    std::vector<int> leaf_metric(hn, -1);
    for (int u = inst.metric.n - 1; u >= 0; --u)
        leaf_metric[static_cast<size_t>(hst.leaf_of[static_cast<size_t>(u)])] = u;
    // the root's leaf is labeled with the root even when nodes coincide
    leaf_metric[static_cast<size_t>(hst.leaf_of[static_cast<size_t>(inst.root)])] = inst.root;
    // keep = hosts a client or the root
    std::vector<char> keep(hn, 0);
    keep[static_cast<size_t>(hst.leaf_of[static_cast<size_t>(inst.root)])] = 1;
    for (const auto& c : inst.clients) keep[static_cast<size_t>(hst.leaf_of[static_cast<size_t>(c.node)])] = 1;

    // Re-root at the root's leaf and build parent links by BFS.
    const int new_root = hst.leaf_of[static_cast<size_t>(inst.root)];
    std::vector<int> parent(hn, -2);
    std::vector<Rat> up(hn);
    std::vector<int> order;
    parent[static_cast<size_t>(new_root)] = -1;
    order.push_back(new_root);
    for (size_t head = 0; head < order.size(); ++head) {
        const int v = order[head];
        for (const auto& [w, len] : adj[static_cast<size_t>(v)]) {
            if (parent[static_cast<size_t>(w)] != -2) continue;
            parent[static_cast<size_t>(w)] = v;
            up[static_cast<size_t>(w)] = len;
            order.push_back(w);
        }
    }
    // Iteratively prune leaves that aren't kept (children counts over the
    // re-rooted orientation).
    std::vector<int> child_count(hn, 0);
    std::vector<char> alive(hn, 1);
    for (size_t v = 0; v < hn; ++v)
        if (parent[v] >= 0) ++child_count[static_cast<size_t>(parent[v])];
    std::vector<int> queue;
    for (size_t v = 0; v < hn; ++v)
        if (child_count[v] == 0 && !keep[v] && static_cast<int>(v) != new_root)
            queue.push_back(static_cast<int>(v));
    while (!queue.empty()) {
        const int v = queue.back();
        queue.pop_back();
        alive[static_cast<size_t>(v)] = 0;
        const int p = parent[static_cast<size_t>(v)];
        if (p >= 0 && --child_count[static_cast<size_t>(p)] == 0 && !keep[static_cast<size_t>(p)] &&
            p != new_root)
            queue.push_back(p);
    }
    // Contract unary chains of unkept internal nodes.
    DpTree out;
    std::vector<int> dp_id(hn, -1);
    std::function<int(int, int, Rat)> emit = [&](int v, int dp_parent, Rat acc) -> int {
        // descend through unary unkept nodes
        while (true) {
            std::vector<int> kids;
            for (const auto& [w, len] : adj[static_cast<size_t>(v)])
                if (parent[static_cast<size_t>(w)] == v && alive[static_cast<size_t>(w)]) kids.push_back(w);
            if (!keep[static_cast<size_t>(v)] && kids.size() == 1 && dp_parent >= 0) {
                acc += up[static_cast<size_t>(kids[0])];
                v = kids[0];
                continue;
            }
            const int id = out.tree.add_node(dp_parent, acc);
            out.metric_node.push_back(leaf_metric[static_cast<size_t>(v)]);
            dp_id[static_cast<size_t>(v)] = id;
            for (int w : kids) emit(w, id, up[static_cast<size_t>(w)]);
            return id;
        }
    };
    emit(new_root, -1, Rat(0));
    out.tree.root = 0;
    out.client_node.resize(inst.clients.size());
    for (size_t i = 0; i < inst.clients.size(); ++i) {
        const int leaf = hst.leaf_of[static_cast<size_t>(inst.clients[i].node)];
        MOVREP_CHECK(dp_id[static_cast<size_t>(leaf)] >= 0, "client leaf pruned away");
        out.client_node[i] = dp_id[static_cast<size_t>(leaf)];
    }
    return out;
}

}  // namespace npcst_detail

// Spec'd transplantation: connect the solution's metric nodes along the
// Euler tour of the HST subtree with direct metric edges; domination charges
// each HST edge at most twice, so the metric cost is at most 2x the HST cost.
struct TransplantResult {
    std::vector<int> nodes;
    std::vector<std::pair<int, int>> edges;
    Rat cost;
};

inline TransplantResult transplant_tree(const npcst_detail::DpTree& dp,
                                        const std::vector<int>& solution_nodes,
                                        const MetricSpace& metric, int root) {
    std::vector<char> chosen(dp.tree.nodes.size(), 0);
    for (int v : solution_nodes) chosen[static_cast<size_t>(v)] = 1;
    // DFS leaf order over the chosen subtree (root = dp node 0).
    std::vector<int> leaf_order;
    std::function<void(int)> dfs = [&](int v) {
        if (dp.metric_node[static_cast<size_t>(v)] >= 0)
            leaf_order.push_back(dp.metric_node[static_cast<size_t>(v)]);
        for (int c : dp.tree.nodes[static_cast<size_t>(v)].children)
            if (chosen[static_cast<size_t>(c)]) dfs(c);
    };
    dfs(0);
    TransplantResult out;
    out.cost = 0;
    out.nodes.push_back(root);
    MOVREP_CHECK(!leaf_order.empty() && leaf_order.front() == root,
                 "transplant: solution does not start at the root leaf");
    int prev = root;
    for (size_t i = 1; i < leaf_order.size(); ++i) {
        const int u = leaf_order[i];
        if (u == prev) continue;
        if (std::find(out.nodes.begin(), out.nodes.end(), u) == out.nodes.end()) {
            out.nodes.push_back(u);
            out.edges.emplace_back(prev, u);
            out.cost += metric.at(prev, u);
        }
        prev = u;
    }
    return out;
}

struct NpcstGeneralOptions {
    Rat A{16};            // constant in the distortion bound A*log2(n)
    Rat eps{1, 2};        // TSCST service-cost slack
    std::uint64_t seed = 1;
    int tree_count = 0;    // 0 = default_tree_count(n)
    long budget_resolution = 64;  // integer resolution of the DP length budget
};

// Tri-criteria NPCST in general metrics: sample FRT trees, solve TSCST per
// (tree, doubling service budget), transplant, and keep the best hit profit
// at the declared stretch.
inline TriCriteriaSolution solve_npcst_general(const NpcstInstance& instance,
                                               const NpcstGeneralOptions& opts = {}) {
    NpcstInstance inst = instance;
    if (inst.reachable.size() != inst.clients.size()) inst.flag_reachability();
    const int n = inst.metric.n;
    const Rat lg = rational_log2_ceil(n);
    TriCriteriaSolution best;
    best.sigma_declared = 16 * opts.A * lg;
    best.phi_declared = 8 * opts.A * lg;
    if (best.sigma_declared < 1) best.sigma_declared = 1;
    best.tree_nodes = {inst.root};
    best.cost = 0;
    {
        auto [hit, profit] = hit_profit(best.tree_nodes, inst, best.sigma_declared);
        best.hit = hit;
        best.profit = profit;
    }
    best.sigma_measured = 0;
    best.phi_measured = 0;
    if (n == 1) return best;

    // No tree can collect more than the profit reachable at the declared
    // stretch; once selection attains that value the scan can stop.
    Rat attainable;
    {
        std::vector<int> all(static_cast<size_t>(n));
        for (int v = 0; v < n; ++v) all[static_cast<size_t>(v)] = v;
        attainable = hit_profit(all, inst, best.sigma_declared).second;
    }
    if (best.profit >= attainable) return best;

    const int count = opts.tree_count > 0 ? opts.tree_count : default_tree_count(n);
    auto dist = sample_distribution(inst.metric, count, opts.seed);

    // Service-budget grid exponent: j up to ceil(log2(sum theta * M / min t))
    // where M is the largest tree diameter in the distribution.
    Rat theta_sum(0);
    Rat min_radius(-1);
    for (const auto& c : inst.clients) {
        theta_sum += c.profit;
        if (c.radius > 0 && (min_radius < 0 || c.radius < min_radius)) min_radius = c.radius;
    }
    long jmax = 0;
    if (theta_sum > 0 && min_radius > 0) {
        Rat m_diam(0);
        for (const auto& t : dist.trees) {
            Rat h = t.beta * pow2(t.nodes[0].level + 2);
            if (h > m_diam) m_diam = h;
        }
        const Rat top = theta_sum * m_diam / min_radius;
        if (top >= 1) jmax = ceil_log2(top);
    }

    const Rat length_budget = 4 * opts.A * lg * inst.budget;
    for (int ti = 0; ti < count; ++ti) {
        auto dp = npcst_detail::build_dp_tree(dist.trees[static_cast<size_t>(ti)], inst);
        // exact service distances client x dp-node
        std::vector<std::vector<Rat>> sdist(inst.clients.size(),
                                            std::vector<Rat>(dp.tree.nodes.size()));
        for (size_t i = 0; i < inst.clients.size(); ++i)
            for (size_t v = 0; v < dp.tree.nodes.size(); ++v)
                sdist[i][v] = dp.tree.distance(dp.client_node[i], static_cast<int>(v));
        // quantize lengths: ceil-rounded edges against a floor-rounded budget
        RootedTree qtree = dp.tree;
        long B = 0;
        if (length_budget > 0) {
            const Rat unit = length_budget / opts.budget_resolution;
            long total = 0;
            for (size_t v = 1; v < qtree.nodes.size(); ++v) {
                qtree.nodes[v].edge_up = Rat(ceil_rat(dp.tree.nodes[v].edge_up / unit));
                total += to_long(Int(qtree.nodes[v].edge_up.get_num()));
            }
            B = std::min(opts.budget_resolution, total);
        } else {
            for (size_t v = 1; v < qtree.nodes.size(); ++v)
                qtree.nodes[v].edge_up = dp.tree.nodes[v].edge_up == 0 ? Rat(0) : Rat(1);
            B = 0;
        }
        std::vector<StscstClient> dpc;
        for (size_t i = 0; i < inst.clients.size(); ++i)
            dpc.push_back({dp.client_node[i], inst.clients[i].profit, inst.clients[i].radius});

        for (long j = 0; j <= jmax; ++j) {
            const Rat service_budget = pow2(j);
            auto sol = solve_tscst(qtree, dpc, B, service_budget, opts.eps, sdist);
            if (!sol.inner.tree_nodes.empty()) {
                // true HST cost of the selected subtree
                Rat hst_cost(0);
                for (int v : sol.inner.tree_nodes)
                    if (v != 0) hst_cost += dp.tree.nodes[static_cast<size_t>(v)].edge_up;
                MOVREP_CHECK(hst_cost <= length_budget,
                             "quantized DP exceeded the true length budget");
                auto planted = transplant_tree(dp, sol.inner.tree_nodes, inst.metric, inst.root);
                MOVREP_CHECK(planted.cost <= 2 * hst_cost, "transplant exceeded twice the HST cost");
                auto [hit, profit] = hit_profit(planted.nodes, inst, best.sigma_declared);
                if (profit > best.profit) {
                    best.profit = profit;
                    best.hit = hit;
                    best.tree_nodes = planted.nodes;
                    best.tree_edges = planted.edges;
                    best.cost = planted.cost;
                    best.chosen_tree = ti;
                    best.chosen_service_exp = j;
                }
            }
            // saturation: once every client's full service cost rounds to
            // zero, larger budgets cannot change the instance
            if (inst.clients.empty()) break;
            const Rat unit_x = service_budget * opts.eps / static_cast<long>(inst.clients.size());
            bool saturated = true;
            for (size_t i = 0; i < inst.clients.size() && saturated; ++i) {
                if (inst.clients[i].radius == 0) continue;
                Rat worst(0);
                for (size_t v = 0; v < dp.tree.nodes.size(); ++v)
                    if (sdist[i][v] > worst) worst = sdist[i][v];
                if (inst.clients[i].profit * worst / inst.clients[i].radius >= unit_x) saturated = false;
            }
            if (saturated) break;
            if (best.profit >= attainable) break;
        }
        if (best.profit >= attainable) break;
    }
    // measured factors
    best.sigma_measured = 0;
    for (int i : best.hit) {
        Rat dmin(-1);
        for (int u : best.tree_nodes) {
            const Rat d = inst.metric.at(inst.clients[static_cast<size_t>(i)].node, u);
            if (dmin < 0 || d < dmin) dmin = d;
        }
        if (inst.clients[static_cast<size_t>(i)].radius == 0) {
            MOVREP_CHECK(dmin == 0, "zero-radius client hit at positive distance");
            continue;
        }
        const Rat stretch = dmin / inst.clients[static_cast<size_t>(i)].radius;
        if (stretch > best.sigma_measured) best.sigma_measured = stretch;
    }
    best.phi_measured = inst.budget > 0 ? Rat(best.cost / inst.budget) : Rat(0);
    MOVREP_CHECK(best.sigma_measured <= best.sigma_declared, "stretch above the declared sigma");
    MOVREP_CHECK(inst.budget == 0 ? best.cost == 0 : best.phi_measured <= best.phi_declared,
                 "cost above the declared phi");
    return best;
}

}  // namespace movrep
