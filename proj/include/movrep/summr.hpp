#pragma once

#include <algorithm>
#include <vector>

#include "movrep/plp.hpp"
#include "movrep/schedule.hpp"

namespace movrep {

struct StepRecord {
    int stamp_idx = 0;
    Rat stamp;                 // q
    int round = 0;             // f in [1 .. 4*omega]
    std::vector<int> selected; // per repairman: class index, -1 = stay home
    std::vector<int> newly_served;
    Rat residual_mass;         // F^{q,f} before this step
};

struct RoundingTrace {
    std::vector<StepRecord> steps;
    std::vector<Rat> h;           // per stamp: total fractional service
    std::vector<Rat> charge;      // per client: 16*mu*omega*q at its serving step
    std::vector<Rat> residual_after_stamp;  // F^{q, 4w+1} per stamp
    Rat lp_objective;
};

struct MraOptions {
    Rat mu{1};
    long omega = 1;
    bool pool_all_classes = true;   // greedy may use every in-budget class
    bool randomized = false;        // Figure-1 sampling instead of the greedy
    std::uint64_t seed = 1;
};

struct MraResult {
    Schedule schedule;   // indirect walks, slot-timed
    Evaluation indirect; // exact evaluation of the walks
    RoundingTrace trace;
};

namespace summr_detail {

// Trim y masses down to exactly 1 per client, dropping late mass first;
// prefix sums only shrink, so feasibility is preserved.
inline FractionalSolution normalize(const Instance& in, const TimeGrid& grid,
                                    const FractionalSolution& f) {
    FractionalSolution out = f;
    for (int c = 0; c < in.m(); ++c) {
        Rat mass(0);
        for (const auto& [key, v] : out.y)
            if (key.first == c) mass += v;
        MOVREP_CHECK(mass >= 1, "client not fully served by the fractional solution");
        Rat excess = mass - 1;
        for (int ti = static_cast<int>(grid.stamps.size()) - 1; ti >= 0 && excess > 0; --ti) {
            auto it = out.y.find({c, ti});
            if (it == out.y.end()) continue;
            const Rat cut = it->second < excess ? it->second : excess;
            it->second -= cut;
            excess -= cut;
            if (it->second == 0) out.y.erase(it);
        }
    }
    out.objective = 0;
    for (const auto& [key, v] : out.y) out.objective += grid.stamps[static_cast<size_t>(key.second)] * v;
    return out;
}

}  // namespace summr_detail

// One derandomized selection step: for each repairman in id order pick the
// candidate class covering the most unserved fractional mass (count, then
// class id break ties). Guarantees |A| >= ceil(F / (2*omega)).
struct GreedyStepResult {
    std::vector<int> selected;      // class index per repairman, -1 = none
    std::vector<int> newly_served;  // client ids
};

inline GreedyStepResult greedy_step(const Instance& in, const TimeGrid& grid,
                                    const std::vector<std::vector<PathClass>>& classes,
                                    const FractionalSolution& frac, int stamp_idx,
                                    const std::vector<bool>& unserved, const MraOptions& opts) {
    const Rat& stamp = grid.stamps[static_cast<size_t>(stamp_idx)];
    GreedyStepResult res;
    res.selected.assign(static_cast<size_t>(in.k()), -1);
    std::vector<bool> remaining = unserved;
    for (int r = 0; r < in.k(); ++r) {
        // candidate pool: positive-x classes at this stamp, plus (optionally)
        // every enumerated class within the stretched budget
        std::vector<int> pool;
        for (size_t ci = 0; ci < classes[static_cast<size_t>(r)].size(); ++ci) {
            const auto& pc = classes[static_cast<size_t>(r)][ci];
            const bool in_budget =
                pc.min_length <= opts.mu * in.repairmen[static_cast<size_t>(r)].speed * stamp;
            if (!in_budget) continue;
            bool has_mass = false;
            auto it = frac.x.find({r, static_cast<int>(ci), stamp_idx});
            if (it != frac.x.end() && it->second > 0) has_mass = true;
            if (has_mass || opts.pool_all_classes || pc.visited.size() == 1)
                pool.push_back(static_cast<int>(ci));
        }
        int best = -1;
        Rat best_mass(-1);
        size_t best_count = 0;
        for (int ci : pool) {
            const auto& pc = classes[static_cast<size_t>(r)][static_cast<size_t>(ci)];
            Rat mass(0);
            size_t count = 0;
            for (int c = 0; c < in.m(); ++c) {
                if (!remaining[static_cast<size_t>(c)]) continue;
                if (!pc.hits(in, c, opts.mu * stamp)) continue;
                mass += frac.y_prefix(c, stamp_idx);
                ++count;
            }
            if (mass > best_mass || (mass == best_mass && count > best_count)) {
                best = ci;
                best_mass = mass;
                best_count = count;
            }
        }
        res.selected[static_cast<size_t>(r)] = best;
        if (best >= 0) {
            const auto& pc = classes[static_cast<size_t>(r)][static_cast<size_t>(best)];
            for (int c = 0; c < in.m(); ++c)
                if (remaining[static_cast<size_t>(c)] && pc.hits(in, c, opts.mu * stamp)) {
                    remaining[static_cast<size_t>(c)] = false;
                    res.newly_served.push_back(c);
                }
        }
    }
    std::sort(res.newly_served.begin(), res.newly_served.end());
    return res;
}

// Executes the full rounding: stamps ascending, 4*omega rounds each; every
// repairman travels its selected tour and returns to its depot; the latency
// accounting charges the full 2*mu*q slot per round.
inline MraResult run_sum_mra(const Instance& in, const TimeGrid& grid,
                             const std::vector<std::vector<PathClass>>& classes,
                             const FractionalSolution& fractional, const MraOptions& opts) {
    PlpOptions plp_opts;
    plp_opts.mu = opts.mu;
    plp_opts.omega = opts.omega;
    check_rplp_feasible(in, grid, classes, plp_opts, fractional);
    const FractionalSolution frac = summr_detail::normalize(in, grid, fractional);

    MraResult res;
    res.trace.lp_objective = frac.objective;
    res.trace.h.assign(grid.stamps.size(), Rat(0));
    for (const auto& [key, v] : frac.y) res.trace.h[static_cast<size_t>(key.second)] += v;
    res.trace.charge.assign(static_cast<size_t>(in.m()), Rat(0));

    res.schedule.walks.resize(static_cast<size_t>(in.k()));
    std::vector<Rat> clock(static_cast<size_t>(in.k()), Rat(0));
    for (int r = 0; r < in.k(); ++r) {
        res.schedule.walks[static_cast<size_t>(r)].owner = r;
        res.schedule.walks[static_cast<size_t>(r)].visits.push_back(
            {in.repairmen[static_cast<size_t>(r)].depot, Rat(0)});
    }

    std::vector<bool> unserved(static_cast<size_t>(in.m()), true);
    Rng rng(opts.seed);
    Rat slot_start(0);
    for (size_t ti = 0; ti < grid.stamps.size(); ++ti) {
        const Rat& q = grid.stamps[ti];
        const Rat slot_len = 2 * opts.mu * q;
        for (long f = 1; f <= 4 * opts.omega; ++f) {
            Rat residual(0);
            for (int c = 0; c < in.m(); ++c)
                if (unserved[static_cast<size_t>(c)]) residual += frac.y_prefix(c, static_cast<int>(ti));

            GreedyStepResult step;
            if (!opts.randomized) {
                step = greedy_step(in, grid, classes, frac, static_cast<int>(ti), unserved, opts);
            } else {
                // Figure-1 selection: class with probability x/omega.
                step.selected.assign(static_cast<size_t>(in.k()), -1);
                for (int r = 0; r < in.k(); ++r) {
                    Rat roll = rng.unit() * opts.omega;
                    for (size_t ci = 0; ci < classes[static_cast<size_t>(r)].size(); ++ci) {
                        auto it = frac.x.find({r, static_cast<int>(ci), static_cast<int>(ti)});
                        if (it == frac.x.end()) continue;
                        if (roll < it->second) {
                            step.selected[static_cast<size_t>(r)] = static_cast<int>(ci);
                            break;
                        }
                        roll -= it->second;
                    }
                }
                for (int r = 0; r < in.k(); ++r) {
                    if (step.selected[static_cast<size_t>(r)] < 0) continue;
                    const auto& pc = classes[static_cast<size_t>(r)]
                                            [static_cast<size_t>(step.selected[static_cast<size_t>(r)])];
                    for (int c = 0; c < in.m(); ++c)
                        if (unserved[static_cast<size_t>(c)] && pc.hits(in, c, opts.mu * q))
                            step.newly_served.push_back(c);
                }
                std::sort(step.newly_served.begin(), step.newly_served.end());
                step.newly_served.erase(std::unique(step.newly_served.begin(), step.newly_served.end()),
                                        step.newly_served.end());
            }

            if (!opts.randomized)
                MOVREP_CHECK(Int(step.newly_served.size()) >= ceil_rat(residual / (2 * opts.omega)),
                             "greedy step served fewer than ceil(F / 2w) clients");

            // extend walks: travel the representative walk, return, idle
            for (int r = 0; r < in.k(); ++r) {
                const int ci = step.selected[static_cast<size_t>(r)];
                if (ci < 0) continue;
                const auto& pc = classes[static_cast<size_t>(r)][static_cast<size_t>(ci)];
                if (pc.rep_walk.size() <= 1) continue;
                auto& walk = res.schedule.walks[static_cast<size_t>(r)];
                const Repairman& rep = in.repairmen[static_cast<size_t>(r)];
                Rat t = slot_start;
                if (walk.visits.back().time < t) walk.visits.push_back({rep.depot, t});
                int prev = rep.depot;
                for (size_t i = 1; i < pc.rep_walk.size(); ++i) {
                    t += in.metric.at(prev, pc.rep_walk[i]) / rep.speed;
                    walk.visits.push_back({pc.rep_walk[i], t});
                    prev = pc.rep_walk[i];
                }
                t += in.metric.at(prev, rep.depot) / rep.speed;
                walk.visits.push_back({rep.depot, t});
                MOVREP_CHECK(t <= slot_start + slot_len, "tour does not fit its 2*mu*q slot");
            }

            StepRecord rec;
            rec.stamp_idx = static_cast<int>(ti);
            rec.stamp = q;
            rec.round = static_cast<int>(f);
            rec.selected = step.selected;
            rec.newly_served = step.newly_served;
            rec.residual_mass = residual;
            res.trace.steps.push_back(rec);
            for (int c : step.newly_served) {
                unserved[static_cast<size_t>(c)] = false;
                res.trace.charge[static_cast<size_t>(c)] = 16 * opts.mu * opts.omega * q;
            }
            slot_start += slot_len;
        }
        Rat residual_after(0);
        for (int c = 0; c < in.m(); ++c)
            if (unserved[static_cast<size_t>(c)]) residual_after += frac.y_prefix(c, static_cast<int>(ti));
        res.trace.residual_after_stamp.push_back(residual_after);
    }
    if (!opts.randomized) {
        for (int c = 0; c < in.m(); ++c)
            MOVREP_CHECK(!unserved[static_cast<size_t>(c)], "client unserved after the grid");
        // Claim-3 residual decay, exact
        for (size_t ti = 0; ti < grid.stamps.size(); ++ti) {
            Rat bound(0);
            for (size_t s = 0; s <= ti; ++s)
                bound += res.trace.h[s] / pow2(2 * static_cast<long>(ti - s) + 2);
            MOVREP_CHECK(res.trace.residual_after_stamp[ti] <= bound,
                         "residual mass exceeds the geometric decay bound");
        }
    }
    res.indirect = evaluate_indirect(in, res.schedule);
    if (!opts.randomized) {
        Rat total(0);
        for (int c = 0; c < in.m(); ++c) {
            MOVREP_CHECK(res.indirect.latency[static_cast<size_t>(c)].has_value(),
                         "evaluation lost a served client");
            const Rat& lat = *res.indirect.latency[static_cast<size_t>(c)];
            MOVREP_CHECK(lat <= res.trace.charge[static_cast<size_t>(c)],
                         "client latency exceeds its 16*mu*omega*q charge");
            total += lat;
        }
        MOVREP_CHECK(total <= 32 * opts.mu * opts.omega * res.trace.lp_objective,
                     "total latency exceeds 32*mu*omega times the LP objective");
    }
    return res;
}

// ---------------------------------------------------------------------------
// Indirect -> perfect transform
// ---------------------------------------------------------------------------

// Back-and-forth replay: each repairman retraces its walk (compressed to
// fast-as-possible) in rounds of alpha^x time units, alpha = 1 + 2/eps.
// Every client waits at its witness node; its perfect latency is at most
// (3 + eps) times its indirect latency.
inline Schedule to_perfect(const Instance& in, const Schedule& indirect, const Evaluation& eval,
                           const Rat& eps) {
    MOVREP_CHECK(eps > 0, "to_perfect: eps must be positive");
    const Rat alpha = 1 + 2 / eps;
    Schedule out;
    out.walks.resize(indirect.walks.size());
    out.assignments.resize(static_cast<size_t>(in.m()));

    // compressed node sequences with path-times
    std::vector<std::vector<int>> seq(indirect.walks.size());
    std::vector<std::vector<Rat>> at(indirect.walks.size());
    std::vector<Rat> total(indirect.walks.size(), Rat(0));
    for (size_t w = 0; w < indirect.walks.size(); ++w) {
        const auto& walk = indirect.walks[w];
        const Repairman& rep = in.repairmen[static_cast<size_t>(walk.owner)];
        Rat t(0);
        for (const auto& visit : walk.visits) {
            if (!seq[w].empty() && seq[w].back() == visit.node) continue;
            if (!seq[w].empty()) t += in.metric.at(seq[w].back(), visit.node) / rep.speed;
            seq[w].push_back(visit.node);
            at[w].push_back(t);
        }
        total[w] = t;
    }

    // Rounds continue until every waiting client's arrival is covered by a
    // full pass (slow clients can arrive long after the walk first ends).
    // The first round spans one time unit, shrunk to the smallest positive
    // latency when the input is not scaled to unit service times.
    std::vector<Rat> needed(indirect.walks.size(), Rat(0));
    std::vector<Rat> unit(indirect.walks.size(), Rat(1));
    for (int c = 0; c < in.m(); ++c) {
        if (!eval.latency[static_cast<size_t>(c)].has_value()) continue;
        const Rat& lat = *eval.latency[static_cast<size_t>(c)];
        const auto& wit = eval.witness[static_cast<size_t>(c)];
        for (size_t w = 0; w < indirect.walks.size(); ++w) {
            if (indirect.walks[w].owner != wit.repairman) continue;
            if (lat > needed[w]) needed[w] = lat;
            if (lat > 0 && lat < unit[w]) unit[w] = lat;
        }
    }

    // emit back-and-forth rounds
    for (size_t w = 0; w < indirect.walks.size(); ++w) {
        auto& walk = out.walks[w];
        walk.owner = indirect.walks[w].owner;
        const size_t nseq = seq[w].size();
        walk.visits.push_back({seq[w][0], Rat(0)});
        if (total[w] == 0) {
            // stationary repairman: dwell long enough for every waiter
            if (needed[w] > 0) walk.visits.push_back({seq[w][0], needed[w]});
            continue;
        }
        Rat start(0);
        Rat reach = unit[w];
        while (true) {
            const Rat round_start = start;
            const Rat span = reach < total[w] ? reach : total[w];
            // outbound
            size_t last = 0;
            for (size_t i = 1; i < nseq && at[w][i] <= span; ++i) {
                walk.visits.push_back({seq[w][i], start + at[w][i]});
                last = i;
            }
            // dwell at the far end until the round's time is spent
            if (span == total[w] && reach > total[w])
                walk.visits.push_back({seq[w][last], start + reach});
            // inbound
            for (size_t i = last + 1; i-- > 0;) {
                if (i == last && span == at[w][last]) continue;  // no repeat at the turn
                walk.visits.push_back({seq[w][i], start + 2 * reach - at[w][i]});
            }
            start += 2 * reach;
            // A full-span round starting after every waiting client's arrival
            // passes each node late enough to meet them all.
            if (reach >= total[w] && round_start >= needed[w]) break;
            reach *= alpha;
        }
    }

    // assignments: wait at the witness node for the first pass at/after the
    // client's own arrival
    for (int c = 0; c < in.m(); ++c) {
        MOVREP_CHECK(eval.latency[static_cast<size_t>(c)].has_value(),
                     "to_perfect needs a fully served indirect schedule");
        const auto& wit = eval.witness[static_cast<size_t>(c)];
        size_t w = 0;
        while (indirect.walks[w].owner != wit.repairman) ++w;
        const int node = indirect.walks[w].visits[static_cast<size_t>(wit.visit)].node;
        const Client& cl = in.clients[static_cast<size_t>(c)];
        const Rat dist = in.metric.at(cl.start, node);
        Rat arrival(0);
        if (cl.speed > 0)
            arrival = dist / cl.speed;
        else
            MOVREP_CHECK(dist == 0, "witness node unreachable for a zero-speed client");
        Rat meet(-1);
        const auto& visits = out.walks[w].visits;
        for (size_t i = 0; i < visits.size(); ++i) {
            if (visits[i].node != node) continue;
            if (visits[i].time >= arrival) {
                meet = visits[i].time;
                break;
            }
            if (i + 1 < visits.size() && visits[i + 1].node == node && visits[i + 1].time >= arrival) {
                meet = arrival;  // met inside a dwell interval
                break;
            }
        }
        MOVREP_CHECK(meet >= 0, "no meeting pass found");
        out.assignments[static_cast<size_t>(c)] = {node, meet, wit.repairman};
        // The worst case of the round construction is max(3+eps, 2+2/eps):
        // the (3+eps) analysis needs alpha <= 3, and for larger round ratios
        // the gap between consecutive depot passes grows to 1+alpha. The two
        // coincide at eps = 1, the default.
        Rat factor = 3 + eps;
        if (2 + 2 / eps > factor) factor = 2 + 2 / eps;
        MOVREP_CHECK(meet <= factor * (*eval.latency[static_cast<size_t>(c)]),
                     "perfect latency exceeds the transform's guarantee");
    }
    return out;
}

// ---------------------------------------------------------------------------
// End-to-end Sum-MR
// ---------------------------------------------------------------------------

struct SumMrConfig {
    SumMrLpOptions lp;
    Rat eps_perfect{1};
    bool randomized_rounding = false;
    std::uint64_t seed = 1;
};

struct SolutionReport {
    Schedule schedule;              // perfect schedule, original units
    std::vector<Rat> latency;       // per client, original units
    Rat total_latency;
    Rat scale_factor;
    Rat lp_objective_scaled;
    Rat indirect_total_scaled;
    RoundingTrace trace;            // scaled units
    bool lp_converged = true;
};

inline SolutionReport solve_sum_mr(const Instance& in, const SumMrConfig& config) {
    in.validate();
    MOVREP_CHECK(in.k() >= 1, "no repairmen");
    SolutionReport report;

    if (mst_cost(in.metric) == 0) {
        // All nodes coincide: everyone is served at time zero.
        report.scale_factor = 1;
        report.lp_objective_scaled = 0;
        report.indirect_total_scaled = 0;
        report.total_latency = 0;
        report.latency.assign(static_cast<size_t>(in.m()), Rat(0));
        for (int r = 0; r < in.k(); ++r) {
            TimedWalk w;
            w.owner = r;
            w.visits.push_back({in.repairmen[static_cast<size_t>(r)].depot, Rat(0)});
            report.schedule.walks.push_back(w);
        }
        for (int c = 0; c < in.m(); ++c)
            report.schedule.assignments.push_back(
                {in.repairmen[0].depot, Rat(0), 0});
        evaluate_perfect(in, report.schedule);
        return report;
    }

    auto scaled = scale_instance(in);
    const TimeGrid grid = build_time_grid(scaled.instance);
    report.scale_factor = scaled.factor;

    auto lp = solve_sum_mr_lp(scaled.instance, grid, config.lp);
    report.lp_objective_scaled = lp.frac.objective;
    report.lp_converged = lp.converged;

    MraOptions mra;
    mra.mu = config.lp.plp.mu;
    mra.omega = config.lp.plp.omega;
    mra.pool_all_classes = config.lp.mode == LpMode::ExactEnumeration;
    mra.randomized = config.randomized_rounding;
    mra.seed = config.seed;
    auto rounding = run_sum_mra(scaled.instance, grid, lp.classes, lp.frac, mra);
    report.trace = rounding.trace;
    report.indirect_total_scaled = rounding.indirect.require_total();

    Schedule perfect = to_perfect(scaled.instance, rounding.schedule, rounding.indirect,
                                  config.eps_perfect);
    auto eval = evaluate_perfect(scaled.instance, perfect);

    // back to original units
    report.schedule = perfect;
    for (auto& w : report.schedule.walks)
        for (auto& v : w.visits) v.time /= scaled.factor;
    for (auto& a : report.schedule.assignments) a.time /= scaled.factor;
    report.total_latency = 0;
    for (int c = 0; c < in.m(); ++c) {
        report.latency.push_back(*eval.latency[static_cast<size_t>(c)] / scaled.factor);
        report.total_latency += report.latency.back();
    }
    evaluate_perfect(in, report.schedule);  // sanity in original units
    return report;
}

}  // namespace movrep
