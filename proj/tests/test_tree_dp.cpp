#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "movrep/treedp.hpp"

using namespace movrep;

namespace {

RootedTree random_tree(Rng& rng, int n, long max_edge = 3) {
    RootedTree t;
    t.add_node(-1, Rat(0));
    for (int v = 1; v < n; ++v)
        t.add_node(static_cast<int>(rng.below(static_cast<std::uint64_t>(v))),
                   Rat(rng.range(0, max_edge)));
    return t;
}

// Exhaustive subtree x subset oracle for STSCST.
Rat brute_stscst(const StscstInstance& inst) {
    const int n = static_cast<int>(inst.tree.nodes.size());
    Rat best(0);
    for (size_t mask = 0; mask < (static_cast<size_t>(1) << n); ++mask) {
        if (!(mask & (static_cast<size_t>(1) << inst.tree.root))) continue;
        bool closed = true;
        long cost = 0;
        for (int v = 0; v < n && closed; ++v) {
            if (!(mask & (static_cast<size_t>(1) << v))) continue;
            const int p = inst.tree.nodes[static_cast<size_t>(v)].parent;
            if (p >= 0) {
                if (!(mask & (static_cast<size_t>(1) << p)))
                    closed = false;
                else
                    cost += to_long(Int(inst.tree.nodes[static_cast<size_t>(v)].edge_up.get_num()));
            }
        }
        if (!closed || cost > inst.length_bound) continue;
        // per-client scaled cost from the nearest subtree node
        std::vector<long> w(inst.clients.size(), -1);
        for (size_t i = 0; i < inst.clients.size(); ++i) {
            Rat dbest(-1);
            for (int v = 0; v < n; ++v) {
                if (!(mask & (static_cast<size_t>(1) << v))) continue;
                Rat d = inst.tree.distance(inst.clients[i].node, v);
                if (dbest < 0 || d < dbest) dbest = d;
            }
            if (inst.scale_unit == 0) {
                w[i] = (dbest == 0) ? 0 : -1;
            } else {
                Int s = floor_rat(inst.clients[i].profit * dbest /
                                  (inst.clients[i].radius * inst.scale_unit));
                if (s <= inst.service_bound) w[i] = to_long(s);
            }
        }
        for (size_t cmask = 0; cmask < (static_cast<size_t>(1) << inst.clients.size()); ++cmask) {
            long total = 0;
            Rat profit(0);
            bool ok = true;
            for (size_t i = 0; i < inst.clients.size() && ok; ++i) {
                if (!(cmask & (static_cast<size_t>(1) << i))) continue;
                if (w[i] < 0) {
                    ok = false;
                    break;
                }
                total += w[i];
                profit += inst.clients[i].profit;
            }
            if (ok && total <= inst.service_bound && profit > best) best = profit;
        }
    }
    return best;
}

StscstInstance random_stscst(Rng& rng, int n) {
    StscstInstance inst;
    inst.tree = random_tree(rng, n);
    const int nc = 1 + static_cast<int>(rng.below(5));
    for (int i = 0; i < nc; ++i) {
        StscstClient c;
        c.node = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        c.profit = Rat(rng.range(0, 8));
        c.radius = make_rat(rng.range(1, 4), 2);
        inst.clients.push_back(c);
    }
    inst.length_bound = rng.range(0, 12);
    inst.service_bound = rng.range(0, 10);
    const long xs[3] = {1, 2, 4};
    inst.scale_unit = make_rat(xs[rng.below(3)], 2);
    return inst;
}

}  // namespace

TEST_CASE("knapsack_max") {
    SECTION("no items") {
        auto res = knapsack_max({}, 5);
        CHECK(res.value == 0);
        CHECK(res.chosen.empty());
    }
    SECTION("exact fill") {
        auto res = knapsack_max({{2, Rat(3)}, {3, Rat(4)}}, 5);
        CHECK(res.value == 7);
        CHECK(res.chosen == std::vector<int>{0, 1});
    }
    SECTION("matches exhaustive scan") {
        Rng rng(101);
        for (int iter = 0; iter < 30; ++iter) {
            std::vector<KnapsackItem> items;
            const int q = 12;
            for (int i = 0; i < q; ++i)
                items.push_back({rng.range(0, 9), make_rat(rng.range(0, 12), 2)});
            const long W = rng.range(0, 20);
            auto res = knapsack_max(items, W);
            Rat best(0);
            for (size_t mask = 0; mask < (1u << q); ++mask) {
                long w = 0;
                Rat v(0);
                for (int i = 0; i < q; ++i)
                    if (mask & (1u << i)) {
                        w += items[static_cast<size_t>(i)].weight;
                        v += items[static_cast<size_t>(i)].value;
                    }
                if (w <= W && v > best) best = v;
            }
            CHECK(res.value == best);
            // chosen set re-evaluates to the claimed value
            Rat check(0);
            long wsum = 0;
            for (int i : res.chosen) {
                check += items[static_cast<size_t>(i)].value;
                wsum += items[static_cast<size_t>(i)].weight;
            }
            CHECK(check == res.value);
            CHECK(wsum <= W);
        }
    }
}

TEST_CASE("binarize") {
    SECTION("binary tree unchanged") {
        RootedTree t;
        t.add_node(-1, Rat(0));
        t.add_node(0, Rat(1));
        t.add_node(0, Rat(2));
        t.add_node(1, Rat(3));
        auto b = binarize(t);
        CHECK(b.nodes.size() == t.nodes.size());
        for (size_t v = 0; v < t.nodes.size(); ++v) {
            CHECK(b.nodes[v].parent == t.nodes[v].parent);
            CHECK(b.nodes[v].edge_up == t.nodes[v].edge_up);
        }
    }
    SECTION("4-leaf star becomes a zero-cost cascade") {
        RootedTree t;
        t.add_node(-1, Rat(0));
        for (int i = 0; i < 4; ++i) t.add_node(0, Rat(i + 1));
        auto b = binarize(t);
        CHECK(b.nodes.size() == 7);  // root + 4 leaves + 2 auxiliary splits
        for (const auto& node : b.nodes) CHECK(node.children.size() <= 2);
        // leaf edges keep their weight; distances are preserved
        for (int i = 1; i <= 4; ++i) CHECK(b.distance(0, i) == t.distance(0, i));
    }
    SECTION("optimal value invariant under binarization") {
        Rng rng(103);
        for (int iter = 0; iter < 25; ++iter) {
            StscstInstance inst = random_stscst(rng, 6 + static_cast<int>(rng.below(3)));
            StscstInstance pre = inst;
            pre.tree = binarize(inst.tree);
            CHECK(solve_stscst(inst).profit == solve_stscst(pre).profit);
        }
    }
}

TEST_CASE("solve_stscst basics") {
    SECTION("serve across a unit edge") {
        StscstInstance inst;
        inst.tree.add_node(-1, Rat(0));
        inst.tree.add_node(0, Rat(1));
        inst.clients.push_back({1, Rat(5), Rat(1)});
        inst.length_bound = 1;
        inst.service_bound = 0;
        inst.scale_unit = 1;
        auto sol = solve_stscst(inst);
        CHECK(sol.profit == 5);
        CHECK(sol.tree_nodes == std::vector<int>{0, 1});
    }
    SECTION("no budget, nonzero scaled cost from the root") {
        StscstInstance inst;
        inst.tree.add_node(-1, Rat(0));
        inst.tree.add_node(0, Rat(1));
        inst.clients.push_back({1, Rat(5), Rat(1)});
        inst.length_bound = 0;
        inst.service_bound = 0;
        inst.scale_unit = 1;
        auto sol = solve_stscst(inst);
        CHECK(sol.profit == 0);
    }
}

TEST_CASE("solve_stscst equals exhaustive enumeration") {
    Rng rng(107);
    for (int iter = 0; iter < 60; ++iter) {
        StscstInstance inst = random_stscst(rng, 4 + static_cast<int>(rng.below(7)));
        CAPTURE(iter);
        CHECK(solve_stscst(inst).profit == brute_stscst(inst));
    }
}

TEST_CASE("DP monotone in both budgets") {
    Rng rng(109);
    for (int iter = 0; iter < 10; ++iter) {
        StscstInstance inst = random_stscst(rng, 7);
        auto base = solve_stscst(inst).profit;
        StscstInstance more = inst;
        more.length_bound += 2;
        CHECK(solve_stscst(more).profit >= base);
        StscstInstance svc = inst;
        svc.service_bound += 2;
        CHECK(solve_stscst(svc).profit >= base);
    }
}

TEST_CASE("solve_tscst") {
    SECTION("client at the root is free") {
        RootedTree t;
        t.add_node(-1, Rat(0));
        t.add_node(0, Rat(2));
        std::vector<StscstClient> clients = {{0, Rat(7), Rat(1)}};
        auto sol = solve_tscst(t, clients, 0, Rat(3), Rat(1));
        CHECK(sol.inner.profit == 7);
        CHECK(sol.service_cost == 0);
    }
    SECTION("zero service budget falls back to the exact zero-cost mode") {
        RootedTree t;
        t.add_node(-1, Rat(0));
        t.add_node(0, Rat(1));
        std::vector<StscstClient> clients = {{1, Rat(4), Rat(1)}};
        auto sol = solve_tscst(t, clients, 0, Rat(0), Rat(1));
        CHECK(sol.inner.profit == 0);
        auto sol2 = solve_tscst(t, clients, 1, Rat(0), Rat(1));
        CHECK(sol2.inner.profit == 4);  // include the node, distance 0
    }
    SECTION("profit dominates the exact TSCST optimum; violation within 1+eps") {
        Rng rng(113);
        for (int iter = 0; iter < 50; ++iter) {
            const int n = 4 + static_cast<int>(rng.below(5));
            RootedTree t = random_tree(rng, n);
            std::vector<StscstClient> clients;
            const int nc = 1 + static_cast<int>(rng.below(4));
            for (int i = 0; i < nc; ++i)
                clients.push_back({static_cast<int>(rng.below(static_cast<std::uint64_t>(n))),
                                   Rat(rng.range(0, 6)), make_rat(rng.range(1, 4), 2)});
            const long B = rng.range(0, 10);
            const Rat Bp = make_rat(rng.range(0, 30), 2);
            const Rat eps = make_rat(rng.range(1, 4), 2);
            auto sol = solve_tscst(t, clients, B, Bp, eps);
            CHECK(sol.service_cost <= Bp * (1 + eps));

            // exact TSCST optimum by exhaustive enumeration
            Rat best(0);
            const int nn = static_cast<int>(t.nodes.size());
            for (size_t mask = 0; mask < (static_cast<size_t>(1) << nn); ++mask) {
                if (!(mask & 1)) continue;  // root = node 0
                bool closed = true;
                long cost = 0;
                for (int v = 1; v < nn && closed; ++v) {
                    if (!(mask & (static_cast<size_t>(1) << v))) continue;
                    const int p = t.nodes[static_cast<size_t>(v)].parent;
                    if (!(mask & (static_cast<size_t>(1) << p)))
                        closed = false;
                    else
                        cost += to_long(Int(t.nodes[static_cast<size_t>(v)].edge_up.get_num()));
                }
                if (!closed || cost > B) continue;
                for (size_t cmask = 0; cmask < (static_cast<size_t>(1) << clients.size()); ++cmask) {
                    Rat svc(0), profit(0);
                    for (size_t i = 0; i < clients.size(); ++i) {
                        if (!(cmask & (static_cast<size_t>(1) << i))) continue;
                        Rat dbest(-1);
                        for (int v = 0; v < nn; ++v) {
                            if (!(mask & (static_cast<size_t>(1) << v))) continue;
                            Rat d = t.distance(clients[i].node, v);
                            if (dbest < 0 || d < dbest) dbest = d;
                        }
                        svc += clients[i].profit * dbest / clients[i].radius;
                        profit += clients[i].profit;
                    }
                    if (svc <= Bp && profit > best) best = profit;
                }
            }
            CHECK(sol.inner.profit >= best);
        }
    }
}

TEST_CASE("reconstruction is deterministic") {
    Rng rng(127);
    StscstInstance inst = random_stscst(rng, 8);
    auto a = solve_stscst(inst);
    auto b = solve_stscst(inst);
    CHECK(a.tree_nodes == b.tree_nodes);
    CHECK(a.served == b.served);
}
