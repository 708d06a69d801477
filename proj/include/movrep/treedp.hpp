#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include "movrep/rational.hpp"

namespace movrep {

// Rooted tree with per-node parent links and edge costs to the parent.
struct RootedTree {
    struct Node {
        int parent = -1;
        Rat edge_up;
        std::vector<int> children;
    };
    std::vector<Node> nodes;
    int root = 0;

    int add_node(int parent, const Rat& cost) {
        const int id = static_cast<int>(nodes.size());
        nodes.push_back({parent, cost, {}});
        if (parent >= 0) nodes[static_cast<size_t>(parent)].children.push_back(id);
        return id;
    }

    // All-pairs distances by walking up through lowest common ancestors.
    std::vector<int> depth_order() const {  // parents before children
        std::vector<int> order;
        std::vector<int> stack = {root};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            order.push_back(v);
            for (int c : nodes[static_cast<size_t>(v)].children) stack.push_back(c);
        }
        return order;
    }

    Rat distance(int a, int b) const {
        std::vector<char> seen(nodes.size(), 0);
        int x = a;
        std::vector<Rat> up_a;
        std::vector<int> chain;
        Rat acc(0);
        while (x >= 0) {
            seen[static_cast<size_t>(x)] = 1;
            chain.push_back(x);
            up_a.push_back(acc);
            if (nodes[static_cast<size_t>(x)].parent < 0) break;
            acc += nodes[static_cast<size_t>(x)].edge_up;
            x = nodes[static_cast<size_t>(x)].parent;
        }
        int y = b;
        Rat acc_b(0);
        while (!seen[static_cast<size_t>(y)]) {
            acc_b += nodes[static_cast<size_t>(y)].edge_up;
            y = nodes[static_cast<size_t>(y)].parent;
            MOVREP_CHECK(y >= 0, "distance: disconnected tree");
        }
        for (size_t i = 0; i < chain.size(); ++i)
            if (chain[i] == y) return up_a[i] + acc_b;
        throw Error("distance: ancestor walk failed");
    }
};

// Replaces every node with 3+ children by a balanced cascade of zero-cost
// binary splits; the original child edges keep their weight. Original node
// ids are preserved, auxiliary nodes are appended.
inline RootedTree binarize(const RootedTree& in) {
    RootedTree out;
    out.nodes.resize(in.nodes.size());
    out.root = in.root;
    for (size_t v = 0; v < in.nodes.size(); ++v) {
        out.nodes[v].parent = in.nodes[v].parent;
        out.nodes[v].edge_up = in.nodes[v].edge_up;
        out.nodes[v].children.clear();
    }
    // (re-)attach children, splitting large families
    std::function<void(int, const std::vector<int>&, size_t, size_t)> attach =
        [&](int parent, const std::vector<int>& kids, size_t lo, size_t hi) {
            if (hi - lo == 0) return;
            if (hi - lo <= 2) {
                for (size_t i = lo; i < hi; ++i) {
                    const int child = kids[i];
                    out.nodes[static_cast<size_t>(child)].parent = parent;
                    out.nodes[static_cast<size_t>(child)].edge_up =
                        in.nodes[static_cast<size_t>(child)].edge_up;
                    out.nodes[static_cast<size_t>(parent)].children.push_back(child);
                }
                return;
            }
            // split through a zero-cost auxiliary pair
            const size_t mid = lo + (hi - lo + 1) / 2;
            const int left = out.add_node(parent, Rat(0));
            attach(left, kids, lo, mid);
            const int right = out.add_node(parent, Rat(0));
            attach(right, kids, mid, hi);
        };
    for (size_t v = 0; v < in.nodes.size(); ++v) {
        const auto& kids = in.nodes[v].children;
        if (kids.size() <= 2) {
            for (int c : kids) out.nodes[v].children.push_back(c);
        } else {
            attach(static_cast<int>(v), kids, 0, kids.size());
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Knapsack
// ---------------------------------------------------------------------------

struct KnapsackItem {
    long weight = 0;  // non-negative
    Rat value;
};

struct KnapsackResult {
    Rat value;
    std::vector<int> chosen;  // item indices, ascending
};

// Exact 0/1 knapsack, O(W * items). Ties prefer the smaller chosen set.
inline KnapsackResult knapsack_max(const std::vector<KnapsackItem>& items, long W) {
    MOVREP_CHECK(W >= 0, "knapsack_max: negative capacity");
    for (const auto& it : items) MOVREP_CHECK(it.weight >= 0, "knapsack_max: negative weight");
    const size_t q = items.size();
    std::vector<std::vector<Rat>> dp(q + 1, std::vector<Rat>(static_cast<size_t>(W) + 1, Rat(0)));
    for (size_t i = 1; i <= q; ++i) {
        const auto& it = items[i - 1];
        for (long w = 0; w <= W; ++w) {
            dp[i][static_cast<size_t>(w)] = dp[i - 1][static_cast<size_t>(w)];
            if (it.weight <= w) {
                Rat take = dp[i - 1][static_cast<size_t>(w - it.weight)] + it.value;
                if (take > dp[i][static_cast<size_t>(w)]) dp[i][static_cast<size_t>(w)] = take;
            }
        }
    }
    KnapsackResult res;
    res.value = dp[q][static_cast<size_t>(W)];
    long w = W;
    std::vector<int> rev;
    for (size_t i = q; i >= 1; --i) {
        if (dp[i][static_cast<size_t>(w)] != dp[i - 1][static_cast<size_t>(w)]) {
            rev.push_back(static_cast<int>(i - 1));
            w -= items[i - 1].weight;
        }
    }
    res.chosen.assign(rev.rbegin(), rev.rend());
    return res;
}

// ---------------------------------------------------------------------------
// STSCST: scaled total service cost Steiner tree on a rooted tree
// ---------------------------------------------------------------------------

struct StscstClient {
    int node = 0;
    Rat profit;  // >= 0
    Rat radius;  // t_c > 0
};

struct StscstInstance {
    RootedTree tree;  // integer edge costs
    std::vector<StscstClient> clients;
    long length_bound = 0;   // B
    long service_bound = 0;  // B-hat'
    Rat scale_unit;          // X; 0 selects the exact zero-cost mode
    // Optional exact service distances, |clients| x |tree nodes|. When the
    // tree's integer edge costs are a quantization of an underlying metric,
    // this carries the unquantized client-to-node distances.
    std::vector<std::vector<Rat>> service_dist;
};

struct StscstSolution {
    std::vector<int> tree_nodes;  // rooted subtree, includes the root
    std::vector<int> served;      // client indices
    Rat profit;
};

namespace treedp_detail {

inline Rat profit_to_rat(long long v) { return Rat(static_cast<long>(v)); }
inline Rat profit_to_rat(const Int& v) { return Rat(v); }

template <typename P>
struct Cell {
    P profit{};        // scaled to a common denominator
    int size = 1;      // tree nodes, for tie-breaking toward smaller trees
    signed char kind = 0;  // 0 leaf-knap, 2 single-child, 3 keep-first, -3 keep-second, 4 both
    int s1 = 0, b1 = 0;
};

}  // namespace treedp_detail

// Exact optimum of the STSCST instance via the four-case recurrence. The
// returned subtree and served set are revalidated from scratch before
// returning.
template <typename P>
inline StscstSolution solve_stscst_impl(const StscstInstance& inst,
                                        const std::vector<P>& profit_num, const Int& den,
                                        long max_cells) {
    using Cell = treedp_detail::Cell<P>;
    const RootedTree tree = binarize(inst.tree);
    const long B = inst.length_bound, S = inst.service_bound;
    MOVREP_CHECK(B >= 0 && S >= 0, "negative budget");
    const long n_nodes = static_cast<long>(tree.nodes.size());
    MOVREP_CHECK(n_nodes * (B + 1) * (S + 1) <= max_cells, "STSCST table exceeds the memory cap");

    // integer edge costs
    std::vector<long> up(tree.nodes.size(), 0);
    for (size_t v = 0; v < tree.nodes.size(); ++v) {
        if (tree.nodes[v].parent < 0) continue;
        const Rat& c = tree.nodes[v].edge_up;
        MOVREP_CHECK(c.get_den() == 1 && c >= 0, "STSCST needs non-negative integer edge costs");
        up[v] = to_long(Int(c.get_num()));
    }

    // Auxiliary binarization nodes hang off their origin by zero-cost edges;
    // service distances anchor there.
    std::vector<int> anchor(tree.nodes.size());
    for (size_t v = 0; v < tree.nodes.size(); ++v) {
        int a = static_cast<int>(v);
        while (a >= static_cast<int>(inst.tree.nodes.size()))
            a = tree.nodes[static_cast<size_t>(a)].parent;
        anchor[v] = a;
    }
    // scaled service cost of serving client i from node z; -1 = impossible
    auto scaled_cost = [&](size_t i, int z) -> long {
        const Rat d = inst.service_dist.empty()
                          ? tree.distance(inst.clients[i].node, z)
                          : inst.service_dist[i][static_cast<size_t>(anchor[static_cast<size_t>(z)])];
        if (inst.clients[i].radius == 0) return d == 0 ? 0 : -1;
        if (inst.scale_unit == 0) return d == 0 ? 0 : -1;
        const Int w = floor_rat(inst.clients[i].profit * d / (inst.clients[i].radius * inst.scale_unit));
        if (w > S) return -1;
        return to_long(w);
    };

    // clients per subtree and per node
    std::vector<std::vector<int>> clients_in_subtree(tree.nodes.size());
    for (size_t i = 0; i < inst.clients.size(); ++i) {
        int v = inst.clients[i].node;
        while (v >= 0) {
            clients_in_subtree[static_cast<size_t>(v)].push_back(static_cast<int>(i));
            v = tree.nodes[static_cast<size_t>(v)].parent;
        }
    }

    // dp[v][b][s]
    auto idx = [&](int v, long b, long s) {
        return (static_cast<size_t>(v) * static_cast<size_t>(B + 1) + static_cast<size_t>(b)) *
                   static_cast<size_t>(S + 1) +
               static_cast<size_t>(s);
    };
    std::vector<Cell> dp(static_cast<size_t>(n_nodes) * static_cast<size_t>(B + 1) *
                         static_cast<size_t>(S + 1));

    // knapsack over a client list with weights w(., v), maximizing scaled
    // profit; kn[s] = best profit with service budget s
    auto knap_profile = [&](int v, const std::vector<int>& cl) {
        std::vector<P> kn(static_cast<size_t>(S) + 1, P{});
        for (int i : cl) {
            const long w = scaled_cost(static_cast<size_t>(i), v);
            if (w < 0) continue;
            for (long s = S; s >= w; --s) {
                P cand = kn[static_cast<size_t>(s - w)] + profit_num[static_cast<size_t>(i)];
                if (cand > kn[static_cast<size_t>(s)]) kn[static_cast<size_t>(s)] = cand;
            }
        }
        return kn;
    };

    auto order = tree.depth_order();
    std::vector<std::vector<P>> knap_all(tree.nodes.size());
    std::vector<std::vector<P>> knap_child(tree.nodes.size());
    std::vector<std::vector<P>> knap_child2(tree.nodes.size());
    std::vector<P> at_v_profit(tree.nodes.size(), P{});
    for (size_t v = 0; v < tree.nodes.size(); ++v) {
        knap_all[v] = knap_profile(static_cast<int>(v), clients_in_subtree[v]);
        const auto& ch = tree.nodes[v].children;
        if (ch.size() >= 1)
            knap_child[v] = knap_profile(static_cast<int>(v),
                                         clients_in_subtree[static_cast<size_t>(ch[0])]);
        if (ch.size() == 2)
            knap_child2[v] = knap_profile(static_cast<int>(v),
                                          clients_in_subtree[static_cast<size_t>(ch[1])]);
        for (size_t i = 0; i < inst.clients.size(); ++i)
            if (inst.clients[i].node == static_cast<int>(v)) at_v_profit[v] += profit_num[i];
    }

    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const int v = *it;
        const auto& ch = tree.nodes[static_cast<size_t>(v)].children;
        for (long b = 0; b <= B; ++b)
            for (long s = 0; s <= S; ++s) {
                Cell best;
                best.profit = knap_all[static_cast<size_t>(v)][static_cast<size_t>(s)];
                best.size = 1;
                best.kind = 0;
                auto consider = [&](const P& profit, int size, signed char kind, long s1, long b1) {
                    if (profit > best.profit || (profit == best.profit && size < best.size)) {
                        best.profit = profit;
                        best.size = size;
                        best.kind = kind;
                        best.s1 = static_cast<int>(s1);
                        best.b1 = static_cast<int>(b1);
                    }
                };
                if (ch.size() == 1 && up[static_cast<size_t>(ch[0])] <= b) {
                    const Cell& sub = dp[idx(ch[0], b - up[static_cast<size_t>(ch[0])], s)];
                    consider(sub.profit + at_v_profit[static_cast<size_t>(v)], sub.size + 1, 2, s, 0);
                }
                if (ch.size() == 2) {
                    const long l1 = up[static_cast<size_t>(ch[0])];
                    const long l2 = up[static_cast<size_t>(ch[1])];
                    if (l1 <= b)
                        for (long s1 = 0; s1 <= s; ++s1) {
                            const Cell& sub = dp[idx(ch[0], b - l1, s1)];
                            P p = sub.profit + at_v_profit[static_cast<size_t>(v)] +
                                  knap_child2[static_cast<size_t>(v)][static_cast<size_t>(s - s1)];
                            consider(p, sub.size + 1, 3, s1, 0);
                        }
                    if (l2 <= b)
                        for (long s1 = 0; s1 <= s; ++s1) {
                            const Cell& sub = dp[idx(ch[1], b - l2, s1)];
                            P p = sub.profit + at_v_profit[static_cast<size_t>(v)] +
                                  knap_child[static_cast<size_t>(v)][static_cast<size_t>(s - s1)];
                            consider(p, sub.size + 1, -3, s1, 0);
                        }
                    if (l1 + l2 <= b) {
                        const long bfree = b - l1 - l2;
                        for (long b1 = 0; b1 <= bfree; ++b1)
                            for (long s1 = 0; s1 <= s; ++s1) {
                                const Cell& a = dp[idx(ch[0], b1, s1)];
                                const Cell& c2 = dp[idx(ch[1], bfree - b1, s - s1)];
                                consider(a.profit + c2.profit + at_v_profit[static_cast<size_t>(v)],
                                         a.size + c2.size + 1, 4, s1, b1);
                            }
                    }
                }
                dp[idx(v, b, s)] = best;
            }
    }

    // Reconstruction
    StscstSolution sol;
    std::vector<char> in_tree(tree.nodes.size(), 0);
    std::vector<char> served(inst.clients.size(), 0);
    auto knap_pick = [&](int v, const std::vector<int>& cl, long s) {
        std::vector<KnapsackItem> items;
        std::vector<int> ids;
        for (int i : cl) {
            const long w = scaled_cost(static_cast<size_t>(i), v);
            if (w < 0) continue;
            items.push_back({w, treedp_detail::profit_to_rat(profit_num[static_cast<size_t>(i)])});
            ids.push_back(i);
        }
        auto res = knapsack_max(items, s);
        for (int j : res.chosen) served[static_cast<size_t>(ids[static_cast<size_t>(j)])] = 1;
    };
    std::function<void(int, long, long)> rebuild = [&](int v, long b, long s) {
        in_tree[static_cast<size_t>(v)] = 1;
        const Cell& cell = dp[idx(v, b, s)];
        const auto& ch = tree.nodes[static_cast<size_t>(v)].children;
        auto serve_at_v = [&]() {
            for (size_t i = 0; i < inst.clients.size(); ++i)
                if (inst.clients[i].node == v) served[i] = 1;
        };
        switch (cell.kind) {
            case 0:
                knap_pick(v, clients_in_subtree[static_cast<size_t>(v)], s);
                break;
            case 2:
                serve_at_v();
                rebuild(ch[0], b - up[static_cast<size_t>(ch[0])], s);
                break;
            case 3:
                serve_at_v();
                knap_pick(v, clients_in_subtree[static_cast<size_t>(ch[1])], s - cell.s1);
                rebuild(ch[0], b - up[static_cast<size_t>(ch[0])], cell.s1);
                break;
            case -3:
                serve_at_v();
                knap_pick(v, clients_in_subtree[static_cast<size_t>(ch[0])], s - cell.s1);
                rebuild(ch[1], b - up[static_cast<size_t>(ch[1])], cell.s1);
                break;
            case 4: {
                serve_at_v();
                const long bfree = b - up[static_cast<size_t>(ch[0])] - up[static_cast<size_t>(ch[1])];
                rebuild(ch[0], cell.b1, cell.s1);
                rebuild(ch[1], bfree - cell.b1, s - cell.s1);
                break;
            }
            default:
                throw Error("corrupt DP cell");
        }
    };
    rebuild(tree.root, B, S);

    // Map back to original nodes and revalidate from scratch.
    const size_t original_nodes = inst.tree.nodes.size();
    for (size_t v = 0; v < original_nodes; ++v)
        if (in_tree[v]) sol.tree_nodes.push_back(static_cast<int>(v));
    long cost = 0;
    for (int v : sol.tree_nodes)
        if (v != inst.tree.root) {
            MOVREP_CHECK(in_tree[static_cast<size_t>(inst.tree.nodes[static_cast<size_t>(v)].parent)],
                         "reconstructed subtree is not parent-closed");
            cost += to_long(Int(inst.tree.nodes[static_cast<size_t>(v)].edge_up.get_num()));
        }
    MOVREP_CHECK(cost <= B, "reconstructed subtree exceeds the length bound");
    Int scaled_total(0);
    P profit_total{};
    for (size_t i = 0; i < inst.clients.size(); ++i) {
        if (!served[i]) continue;
        sol.served.push_back(static_cast<int>(i));
        long wbest = -1;
        for (int z : sol.tree_nodes) {
            const long w = scaled_cost(i, z);
            if (w >= 0 && (wbest < 0 || w < wbest)) wbest = w;
        }
        MOVREP_CHECK(wbest >= 0, "served client has no affordable serving node");
        scaled_total += wbest;
        profit_total += profit_num[i];
    }
    MOVREP_CHECK(scaled_total <= S, "reconstructed service cost exceeds the bound");
    MOVREP_CHECK(profit_total == dp[idx(tree.root, B, S)].profit,
                 "reconstruction does not reproduce the DP profit");
    sol.profit = treedp_detail::profit_to_rat(profit_total) / Rat(den);
    return sol;
}

inline StscstSolution solve_stscst(const StscstInstance& inst,
                                   long max_cells = 64L * 1000 * 1000) {
    Int den(1);
    for (const auto& c : inst.clients) {
        MOVREP_CHECK(c.profit >= 0, "negative client profit");
        MOVREP_CHECK(c.radius >= 0, "negative client radius");
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.profit.get_den_mpz_t());
    }
    std::vector<Int> nums(inst.clients.size());
    Int total(0);
    for (size_t i = 0; i < inst.clients.size(); ++i) {
        nums[i] = Int(inst.clients[i].profit.get_num()) *
                  (den / Int(inst.clients[i].profit.get_den()));
        total += nums[i];
    }
    // int64 fast path when every partial sum fits comfortably
    if (total.fits_slong_p() && total.get_si() < (1L << 60)) {
        std::vector<long long> small(nums.size());
        for (size_t i = 0; i < nums.size(); ++i) small[i] = nums[i].get_si();
        return solve_stscst_impl<long long>(inst, small, den, max_cells);
    }
    return solve_stscst_impl<Int>(inst, nums, den, max_cells);
}

// TSCST wrapper: scales service costs by X = B' * eps / |C| and solves the
// integer instance; the service bound is violated by at most (1 + eps).
struct TscstSolution {
    StscstSolution inner;
    Rat service_cost;  // exact, unscaled
};

inline TscstSolution solve_tscst(const RootedTree& tree, const std::vector<StscstClient>& clients,
                                 long length_bound, const Rat& service_bound, const Rat& eps,
                                 std::vector<std::vector<Rat>> service_dist = {},
                                 long max_cells = 64L * 1000 * 1000) {
    MOVREP_CHECK(eps > 0, "solve_tscst: eps must be positive");
    StscstInstance inst;
    inst.tree = tree;
    inst.clients = clients;
    inst.length_bound = length_bound;
    inst.service_dist = std::move(service_dist);
    if (service_bound == 0 || clients.empty()) {
        inst.scale_unit = 0;
        inst.service_bound = 0;
    } else {
        inst.scale_unit = service_bound * eps / static_cast<long>(clients.size());
        inst.service_bound = to_long(floor_rat(service_bound / inst.scale_unit));
    }
    TscstSolution out;
    out.inner = solve_stscst(inst, max_cells);
    out.service_cost = 0;
    for (int i : out.inner.served) {
        Rat dbest(-1);
        for (int z : out.inner.tree_nodes) {
            const Rat d = inst.service_dist.empty()
                              ? tree.distance(clients[static_cast<size_t>(i)].node, z)
                              : inst.service_dist[static_cast<size_t>(i)][static_cast<size_t>(z)];
            if (dbest < 0 || d < dbest) dbest = d;
        }
        if (clients[static_cast<size_t>(i)].radius == 0) {
            MOVREP_CHECK(dbest == 0, "zero-radius client served at positive distance");
            continue;
        }
        out.service_cost += clients[static_cast<size_t>(i)].profit * dbest /
                            clients[static_cast<size_t>(i)].radius;
    }
    MOVREP_CHECK(out.service_cost <= service_bound * (1 + eps),
                 "TSCST service cost exceeds (1+eps) of the bound");
    return out;
}

}  // namespace movrep
