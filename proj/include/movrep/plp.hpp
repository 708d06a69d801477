#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "movrep/instance.hpp"
#include "movrep/pathclass.hpp"
#include "movrep/simplex.hpp"

namespace movrep {

struct PlpOptions {
    Rat mu{1};
    long omega = 1;
};

// Sparse primal values of PLP^(mu,omega). Keys refer to class indices of the
// owning model's per-repairman class lists.
struct FractionalSolution {
    std::map<std::tuple<int, int, int>, Rat> x;  // (repairman, class index, stamp index)
    std::map<std::pair<int, int>, Rat> y;        // (client, stamp index)
    Rat objective;

    Rat y_prefix(int client, int stamp_idx) const {
        Rat s(0);
        for (const auto& [key, v] : y)
            if (key.first == client && key.second <= stamp_idx) s += v;
        return s;
    }
};

struct DualValues {
    std::vector<Rat> lambda;                  // per client
    std::map<std::pair<int, int>, Rat> beta;  // (repairman, stamp index)
    std::map<std::pair<int, int>, Rat> theta; // (client, stamp index)
};

// Explicit LP over path classes. Columns with identical or dominated client
// hit patterns at a stamp are collapsed; membership of a class at stamp t
// requires min_length <= mu * v_r * t.
class PlpModel {
public:
    PlpModel(const Instance& in, const TimeGrid& grid, std::vector<std::vector<PathClass>> classes,
             const PlpOptions& opts)
        : in_(&in), grid_(&grid), classes_(std::move(classes)), opts_(opts) {
        MOVREP_CHECK(in.m() <= 64, "PLP model supports at most 64 clients");
        build();
    }

    const Instance& instance() const { return *in_; }
    const TimeGrid& grid() const { return *grid_; }
    const PlpOptions& options() const { return opts_; }
    const std::vector<std::vector<PathClass>>& classes() const { return classes_; }
    const LinearProgram& lp() const { return lp_; }

    // Client hit mask of a node set at a stamp under the mu-stretched balls.
    std::uint64_t hit_mask(const std::vector<int>& nodes, int stamp_idx) const {
        std::uint64_t mask = 0;
        const Rat t = opts_.mu * grid_->stamps[static_cast<size_t>(stamp_idx)];
        for (int c = 0; c < in_->m(); ++c)
            for (int u : nodes)
                if (in_->metric.at(in_->clients[static_cast<size_t>(c)].start, u) <=
                    in_->clients[static_cast<size_t>(c)].speed * t) {
                    mask |= std::uint64_t(1) << c;
                    break;
                }
        return mask;
    }

    bool class_in_budget(int r, int class_idx, int stamp_idx) const {
        const auto& pc = classes_[static_cast<size_t>(r)][static_cast<size_t>(class_idx)];
        return pc.min_length <= opts_.mu * in_->repairmen[static_cast<size_t>(r)].speed *
                                    grid_->stamps[static_cast<size_t>(stamp_idx)];
    }

    struct Solved {
        FractionalSolution frac;
        DualValues duals;
    };

    Solved solve() const {
        LpSolution sol = solve_lp(lp_);
        MOVREP_CHECK(sol.status == LpStatus::Optimal, "PLP solve did not reach optimality");
        Solved out;
        out.frac.objective = sol.objective;
        for (const auto& col : xcols_) {
            const Rat& v = sol.x[static_cast<size_t>(col.var)];
            if (v != 0) out.frac.x[{col.repairman, col.class_index, col.stamp_index}] = v;
        }
        for (int c = 0; c < in_->m(); ++c)
            for (size_t ti = 0; ti < grid_->stamps.size(); ++ti) {
                const Rat& v = sol.x[static_cast<size_t>(y_var_[static_cast<size_t>(c)][ti])];
                if (v != 0) out.frac.y[{c, static_cast<int>(ti)}] = v;
            }
        out.duals.lambda.resize(static_cast<size_t>(in_->m()));
        for (int c = 0; c < in_->m(); ++c) {
            const Rat& l = sol.dual[static_cast<size_t>(row7_[static_cast<size_t>(c)])];
            MOVREP_CHECK(l >= 0, "negative lambda dual");
            out.duals.lambda[static_cast<size_t>(c)] = l;
        }
        for (int r = 0; r < in_->k(); ++r)
            for (size_t ti = 0; ti < grid_->stamps.size(); ++ti) {
                const Rat b = -sol.dual[static_cast<size_t>(row5_[static_cast<size_t>(r)][ti])];
                MOVREP_CHECK(b >= 0, "negative beta dual");
                out.duals.beta[{r, static_cast<int>(ti)}] = b;
            }
        for (int c = 0; c < in_->m(); ++c)
            for (size_t ti = 0; ti < grid_->stamps.size(); ++ti) {
                const Rat& th = sol.dual[static_cast<size_t>(row6_[static_cast<size_t>(c)][ti])];
                MOVREP_CHECK(th >= 0, "negative theta dual");
                out.duals.theta[{c, static_cast<int>(ti)}] = th;
            }
        return out;
    }

private:
    struct XCol {
        int repairman, class_index, stamp_index, var;
        std::uint64_t mask;
    };

    void build() {
        const size_t stamps = grid_->stamps.size();
        // y variables, cost = stamp value
        y_var_.assign(static_cast<size_t>(in_->m()), std::vector<int>(stamps, -1));
        for (int c = 0; c < in_->m(); ++c)
            for (size_t ti = 0; ti < stamps; ++ti)
                y_var_[static_cast<size_t>(c)][ti] = lp_.add_var(grid_->stamps[ti]);
        // x variables, cost 0; dominated hit patterns dropped per (r, stamp)
        for (int r = 0; r < in_->k(); ++r)
            for (size_t ti = 0; ti < stamps; ++ti) {
                std::vector<XCol> cand;
                for (size_t ci = 0; ci < classes_[static_cast<size_t>(r)].size(); ++ci) {
                    if (!class_in_budget(r, static_cast<int>(ci), static_cast<int>(ti))) continue;
                    const std::uint64_t mask =
                        hit_mask(classes_[static_cast<size_t>(r)][ci].visited, static_cast<int>(ti));
                    if (mask == 0) continue;
                    bool dominated = false;
                    for (const auto& k : cand)
                        if ((k.mask | mask) == k.mask) {
                            dominated = true;
                            break;
                        }
                    if (dominated) continue;
                    // Drop previously kept columns this one strictly covers.
                    std::vector<XCol> kept;
                    for (auto& k : cand)
                        if ((k.mask | mask) != mask) kept.push_back(k);
                    kept.push_back({r, static_cast<int>(ci), static_cast<int>(ti), -1, mask});
                    cand = std::move(kept);
                }
                for (auto& k : cand) {
                    k.var = lp_.add_var(Rat(0));
                    xcols_.push_back(k);
                }
            }
        // Rows
        row5_.assign(static_cast<size_t>(in_->k()), std::vector<int>(stamps, -1));
        for (int r = 0; r < in_->k(); ++r)
            for (size_t ti = 0; ti < stamps; ++ti) {
                LpRow row;
                row.sense = RowSense::LE;
                row.rhs = Rat(opts_.omega);
                for (const auto& col : xcols_)
                    if (col.repairman == r && col.stamp_index == static_cast<int>(ti))
                        row.coeffs.emplace_back(col.var, Rat(1));
                row5_[static_cast<size_t>(r)][ti] = static_cast<int>(lp_.rows.size());
                lp_.add_row(std::move(row));
            }
        row6_.assign(static_cast<size_t>(in_->m()), std::vector<int>(stamps, -1));
        for (int c = 0; c < in_->m(); ++c)
            for (size_t ti = 0; ti < stamps; ++ti) {
                LpRow row;
                row.sense = RowSense::GE;
                row.rhs = Rat(0);
                for (const auto& col : xcols_)
                    if (col.stamp_index == static_cast<int>(ti) && (col.mask >> c) & 1)
                        row.coeffs.emplace_back(col.var, Rat(1));
                for (size_t tp = 0; tp <= ti; ++tp)
                    row.coeffs.emplace_back(y_var_[static_cast<size_t>(c)][tp], Rat(-1));
                row6_[static_cast<size_t>(c)][ti] = static_cast<int>(lp_.rows.size());
                lp_.add_row(std::move(row));
            }
        row7_.assign(static_cast<size_t>(in_->m()), -1);
        for (int c = 0; c < in_->m(); ++c) {
            LpRow row;
            row.sense = RowSense::GE;
            row.rhs = Rat(1);
            for (size_t ti = 0; ti < stamps; ++ti)
                row.coeffs.emplace_back(y_var_[static_cast<size_t>(c)][ti], Rat(1));
            row7_[static_cast<size_t>(c)] = static_cast<int>(lp_.rows.size());
            lp_.add_row(std::move(row));
        }
    }

    const Instance* in_;
    const TimeGrid* grid_;
    std::vector<std::vector<PathClass>> classes_;
    PlpOptions opts_;
    LinearProgram lp_;
    std::vector<XCol> xcols_;
    std::vector<std::vector<int>> y_var_;   // [client][stamp]
    std::vector<std::vector<int>> row5_;    // [repairman][stamp]
    std::vector<std::vector<int>> row6_;    // [client][stamp]
    std::vector<int> row7_;                 // [client]
};

// Recomputes all PLP^(mu,omega) constraints from scratch; throws on the first
// violated one.
inline void check_rplp_feasible(const Instance& in, const TimeGrid& grid,
                                const std::vector<std::vector<PathClass>>& classes,
                                const PlpOptions& opts, const FractionalSolution& f) {
    for (const auto& [key, v] : f.x) MOVREP_CHECK(v >= 0, "negative x value");
    for (const auto& [key, v] : f.y) MOVREP_CHECK(v >= 0, "negative y value");
    for (int r = 0; r < in.k(); ++r)
        for (size_t ti = 0; ti < grid.stamps.size(); ++ti) {
            Rat total(0);
            for (const auto& [key, v] : f.x)
                if (std::get<0>(key) == r && std::get<2>(key) == static_cast<int>(ti)) {
                    const auto& pc = classes[static_cast<size_t>(r)][static_cast<size_t>(std::get<1>(key))];
                    MOVREP_CHECK(pc.min_length <= opts.mu * in.repairmen[static_cast<size_t>(r)].speed *
                                                      grid.stamps[ti],
                                 "x mass on a class outside its stamp budget");
                    total += v;
                }
            MOVREP_CHECK(total <= opts.omega, "Eq.(5) violated");
        }
    for (int c = 0; c < in.m(); ++c)
        for (size_t ti = 0; ti < grid.stamps.size(); ++ti) {
            Rat cover(0);
            const Rat t = opts.mu * grid.stamps[ti];
            for (const auto& [key, v] : f.x) {
                if (std::get<2>(key) != static_cast<int>(ti)) continue;
                const auto& pc =
                    classes[static_cast<size_t>(std::get<0>(key))][static_cast<size_t>(std::get<1>(key))];
                if (pc.hits(in, c, t)) cover += v;
            }
            MOVREP_CHECK(cover >= f.y_prefix(c, static_cast<int>(ti)), "Eq.(6) violated");
        }
    for (int c = 0; c < in.m(); ++c) {
        Rat mass(0);
        for (const auto& [key, v] : f.y)
            if (key.first == c) mass += v;
        MOVREP_CHECK(mass >= 1, "Eq.(7) violated");
    }
    Rat obj(0);
    for (const auto& [key, v] : f.y) obj += grid.stamps[static_cast<size_t>(key.second)] * v;
    MOVREP_CHECK(obj == f.objective, "objective mismatch");
}

// ---------------------------------------------------------------------------
// Pricing (SOP realized by an NPCST call)
// ---------------------------------------------------------------------------

struct PricingClient {
    int node = 0;
    Rat profit;
    Rat radius;
};

struct PricingTree {
    std::vector<int> nodes;                  // includes the root
    std::vector<std::pair<int, int>> edges;  // metric edges
    Rat cost;
};

// Tri-criteria or exact NPCST solver used as the pricing oracle.
using NpcstSolver =
    std::function<PricingTree(const MetricSpace&, int root, const std::vector<PricingClient>&, const Rat& budget)>;

inline std::vector<int> euler_walk(const std::vector<std::pair<int, int>>& edges, int root) {
    std::map<int, std::vector<int>> adj;
    for (const auto& [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (auto& [node, nbrs] : adj) std::sort(nbrs.begin(), nbrs.end());
    std::vector<int> walk{root};
    std::map<int, bool> seen;
    seen[root] = true;
    std::function<void(int)> dfs = [&](int u) {
        for (int v : adj[u]) {
            if (seen[v]) continue;
            seen[v] = true;
            walk.push_back(v);
            dfs(v);
            walk.push_back(u);
        }
    };
    dfs(root);
    return walk;
}

inline void hk_for_subset(const Instance& in, int r, const std::vector<int>& subset, Rat& best,
                          std::vector<int>& walk);

// Separation step for one (repairman, stamp): profits theta_{c,t}, balls
// B(c, v'_c t), budget v_r t. Returns a class whose mu-stretched profit
// exceeds beta_{r,t}/omega, or nothing.
inline std::optional<PathClass> price(const DualValues& duals, const Instance& in, const TimeGrid& grid,
                                      int r, int stamp_idx, const PlpOptions& opts,
                                      const NpcstSolver& solver, int hk_node_cap = 14) {
    const Rat& stamp = grid.stamps[static_cast<size_t>(stamp_idx)];
    std::vector<PricingClient> pclients;
    bool any = false;
    for (int c = 0; c < in.m(); ++c) {
        const Rat th = duals.theta.at({c, stamp_idx});
        if (th > 0) any = true;
        pclients.push_back({in.clients[static_cast<size_t>(c)].start, th,
                            in.clients[static_cast<size_t>(c)].speed * stamp});
    }
    if (!any) return std::nullopt;  // degenerate duals: no violating path exists
    const Repairman& rep = in.repairmen[static_cast<size_t>(r)];
    PricingTree tree = solver(in.metric, rep.depot, pclients, rep.speed * stamp);

    // Collect the profit under the mu-stretched balls the relaxed LP uses.
    Rat profit(0);
    for (int c = 0; c < in.m(); ++c) {
        const Client& cl = in.clients[static_cast<size_t>(c)];
        const Rat reach = opts.mu * cl.speed * stamp;
        for (int u : tree.nodes)
            if (in.metric.at(cl.start, u) <= reach) {
                profit += duals.theta.at({c, stamp_idx});
                break;
            }
    }
    const Rat threshold = duals.beta.at({r, stamp_idx}) / opts.omega;
    if (profit <= threshold) return std::nullopt;

    PathClass pc;
    pc.repairman = r;
    pc.visited = tree.nodes;
    if (std::find(pc.visited.begin(), pc.visited.end(), rep.depot) == pc.visited.end())
        pc.visited.push_back(rep.depot);
    std::sort(pc.visited.begin(), pc.visited.end());
    pc.visited.erase(std::unique(pc.visited.begin(), pc.visited.end()), pc.visited.end());
    if (in.n() <= hk_node_cap) {
        // Recover the Held-Karp optimum for this subset.
        Rat best;
        std::vector<int> walk;
        hk_for_subset(in, r, pc.visited, best, walk);
        pc.min_length = best;
        pc.rep_walk = std::move(walk);
        pc.length_exact = true;
    } else {
        pc.rep_walk = euler_walk(tree.edges, rep.depot);
        Rat len(0);
        for (size_t i = 1; i < pc.rep_walk.size(); ++i)
            len += in.metric.at(pc.rep_walk[i - 1], pc.rep_walk[i]);
        pc.min_length = len;
        pc.length_exact = false;
    }
    MOVREP_CHECK(pc.min_length <= opts.mu * rep.speed * stamp,
                 "pricing returned a class outside the stretched budget");
    return pc;
}

// Held-Karp restricted to one subset (small |subset|).
inline void hk_for_subset(const Instance& in, int r, const std::vector<int>& subset, Rat& best,
                          std::vector<int>& walk) {
    const Repairman& rep = in.repairmen[static_cast<size_t>(r)];
    std::vector<int> others;
    for (int v : subset)
        if (v != rep.depot) others.push_back(v);
    if (others.empty()) {
        best = 0;
        walk = {rep.depot};
        return;
    }
    MOVREP_CHECK(others.size() <= 20, "subset too large for Held-Karp");
    const size_t full = static_cast<size_t>(1) << others.size();
    std::vector<std::vector<Rat>> dp(full, std::vector<Rat>(others.size()));
    std::vector<std::vector<char>> init(full, std::vector<char>(others.size(), 0));
    std::vector<std::vector<int>> back(full, std::vector<int>(others.size(), -1));
    for (size_t i = 0; i < others.size(); ++i) {
        dp[static_cast<size_t>(1) << i][i] = in.metric.at(rep.depot, others[i]);
        init[static_cast<size_t>(1) << i][i] = 1;
    }
    for (size_t mask = 1; mask < full; ++mask)
        for (size_t last = 0; last < others.size(); ++last) {
            if (!init[mask][last]) continue;
            for (size_t nxt = 0; nxt < others.size(); ++nxt) {
                if (mask & (static_cast<size_t>(1) << nxt)) continue;
                const size_t nm = mask | (static_cast<size_t>(1) << nxt);
                Rat cand = dp[mask][last] + in.metric.at(others[last], others[nxt]);
                if (!init[nm][nxt] || cand < dp[nm][nxt]) {
                    dp[nm][nxt] = cand;
                    init[nm][nxt] = 1;
                    back[nm][nxt] = static_cast<int>(last);
                }
            }
        }
    int end = -1;
    for (size_t last = 0; last < others.size(); ++last)
        if (end < 0 || dp[full - 1][last] < best) {
            best = dp[full - 1][last];
            end = static_cast<int>(last);
        }
    std::vector<int> order;
    size_t mask = full - 1;
    while (end >= 0) {
        order.push_back(others[static_cast<size_t>(end)]);
        const int prev = back[mask][static_cast<size_t>(end)];
        mask ^= static_cast<size_t>(1) << end;
        end = prev;
    }
    walk = {rep.depot};
    for (auto it = order.rbegin(); it != order.rend(); ++it) walk.push_back(*it);
}

// ---------------------------------------------------------------------------
// Whole LP stage
// ---------------------------------------------------------------------------

enum class LpMode { ExactEnumeration, ColumnGeneration };

struct SumMrLpOptions {
    LpMode mode = LpMode::ExactEnumeration;
    PlpOptions plp;
    Rat eps{1, 100};
    int node_cap = 14;
    int max_rounds = 200;
    NpcstSolver oracle;  // required in column-generation mode
};

struct SumMrLpResult {
    std::vector<std::vector<PathClass>> classes;  // per repairman
    FractionalSolution frac;
    DualValues duals;
    bool converged = true;
    int rounds = 0;
    std::vector<Rat> round_objectives;  // column generation master trace
};

inline SumMrLpResult solve_sum_mr_lp(const Instance& in, const TimeGrid& grid,
                                     const SumMrLpOptions& opts) {
    SumMrLpResult res;
    if (opts.mode == LpMode::ExactEnumeration) {
        for (int r = 0; r < in.k(); ++r) {
            const Rat budget =
                opts.plp.mu * in.repairmen[static_cast<size_t>(r)].speed * grid.last();
            res.classes.push_back(enumerate_path_classes(in, r, budget, opts.node_cap));
        }
        PlpModel model(in, grid, res.classes, opts.plp);
        auto solved = model.solve();
        res.frac = std::move(solved.frac);
        res.duals = std::move(solved.duals);
        check_rplp_feasible(in, grid, res.classes, opts.plp, res.frac);
        return res;
    }

    MOVREP_CHECK(opts.oracle, "column generation needs a pricing oracle");
    // Seed every repairman with the depot-only class plus an all-nodes tour
    // class; the latter keeps the initial master feasible (it is affordable
    // at the top stamps because the horizon covers a full MST tour).
    for (int r = 0; r < in.k(); ++r) {
        PathClass depot_only;
        depot_only.repairman = r;
        depot_only.visited = {in.repairmen[static_cast<size_t>(r)].depot};
        depot_only.min_length = 0;
        depot_only.rep_walk = depot_only.visited;

        PathClass all;
        all.repairman = r;
        for (int v = 0; v < in.n(); ++v) all.visited.push_back(v);
        if (in.n() <= opts.node_cap) {
            hk_for_subset(in, r, all.visited, all.min_length, all.rep_walk);
        } else {
            std::vector<int> nodes = all.visited;
            auto edges = mst_edges(in.metric, nodes);
            std::vector<std::pair<int, int>> metric_edges;
            for (const auto& [a, b] : edges)
                metric_edges.emplace_back(nodes[static_cast<size_t>(a)], nodes[static_cast<size_t>(b)]);
            all.rep_walk = euler_walk(metric_edges, in.repairmen[static_cast<size_t>(r)].depot);
            Rat len(0);
            for (size_t i = 1; i < all.rep_walk.size(); ++i)
                len += in.metric.at(all.rep_walk[i - 1], all.rep_walk[i]);
            all.min_length = len;
            all.length_exact = false;
        }
        if (in.n() > 1)
            res.classes.push_back({depot_only, all});
        else
            res.classes.push_back({depot_only});
    }
    std::optional<PlpModel::Solved> solved;
    for (int round = 0; round < opts.max_rounds; ++round) {
        res.rounds = round + 1;
        PlpModel model(in, grid, res.classes, opts.plp);
        solved = model.solve();
        res.round_objectives.push_back(solved->frac.objective);
        bool added = false;
        for (int r = 0; r < in.k(); ++r)
            for (size_t ti = 0; ti < grid.stamps.size(); ++ti) {
                auto cls = price(solved->duals, in, grid, r, static_cast<int>(ti), opts.plp,
                                 opts.oracle, opts.node_cap);
                if (!cls) continue;
                // Skip classes whose hit pattern is covered by one already
                // present within the same stamp budget (it cannot move the
                // master, and re-adding it would loop).
                const std::uint64_t mask = model.hit_mask(cls->visited, static_cast<int>(ti));
                const Rat budget = opts.plp.mu * in.repairmen[static_cast<size_t>(r)].speed *
                                   grid.stamps[ti];
                bool redundant = false;
                for (const auto& existing : res.classes[static_cast<size_t>(r)]) {
                    if (existing.visited == cls->visited) {
                        redundant = true;
                        break;
                    }
                    if (existing.min_length <= budget &&
                        (model.hit_mask(existing.visited, static_cast<int>(ti)) | mask) ==
                            model.hit_mask(existing.visited, static_cast<int>(ti))) {
                        redundant = true;
                        break;
                    }
                }
                if (redundant) continue;
                res.classes[static_cast<size_t>(r)].push_back(*cls);
                added = true;
            }
        if (!added) {
            res.frac = std::move(solved->frac);
            res.duals = std::move(solved->duals);
            res.converged = true;
            check_rplp_feasible(in, grid, res.classes, opts.plp, res.frac);
            return res;
        }
    }
    // Round limit: report the best feasible master found.
    PlpModel model(in, grid, res.classes, opts.plp);
    auto final_solved = model.solve();
    res.frac = std::move(final_solved.frac);
    res.duals = std::move(final_solved.duals);
    res.converged = false;
    check_rplp_feasible(in, grid, res.classes, opts.plp, res.frac);
    return res;
}

}  // namespace movrep
