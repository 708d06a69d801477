#pragma once

#include <optional>
#include <string>
#include <vector>

#include "movrep/instance.hpp"

namespace movrep {

struct TimedVisit {
    int node = 0;
    Rat time;
};

// Non-simple walk plus per-visit times. Consecutive visits need not be
// adjacent (metric completion); waiting shows up as slack in the times.
struct TimedWalk {
    int owner = 0;  // repairman id
    std::vector<TimedVisit> visits;

    Rat length(const MetricSpace& m) const {
        Rat len(0);
        for (size_t i = 1; i < visits.size(); ++i) len += m.at(visits[i - 1].node, visits[i].node);
        return len;
    }
};

struct Assignment {
    int node = 0;   // u_j
    Rat time;       // t_j
    int repairman = -1;
};

struct Schedule {
    std::vector<TimedWalk> walks;          // one per repairman
    std::vector<Assignment> assignments;   // one per client (perfect semantics)
};

inline void validate_walk(const Instance& in, const TimedWalk& w) {
    const Repairman& r = in.repairmen.at(static_cast<size_t>(w.owner));
    MOVREP_CHECK(!w.visits.empty(), "walk has no visits");
    MOVREP_CHECK(w.visits[0].node == r.depot, "walk does not start at its depot");
    MOVREP_CHECK(w.visits[0].time >= 0, "walk starts before time 0");
    for (size_t i = 1; i < w.visits.size(); ++i) {
        const Rat gap = w.visits[i].time - w.visits[i - 1].time;
        const Rat need = in.metric.at(w.visits[i - 1].node, w.visits[i].node) / r.speed;
        MOVREP_CHECK(gap >= need, "walk visit times violate repairman speed");
    }
}

struct ServiceEvent {
    int repairman = -1;
    int visit = -1;  // index into that walk's visits
};

struct Evaluation {
    // Latency per client; empty optional = unserved.
    std::vector<std::optional<Rat>> latency;
    std::vector<ServiceEvent> witness;
    bool served_all = true;
    Rat total;  // sum over served clients

    Rat require_total() const {
        MOVREP_CHECK(served_all, "evaluation has unserved clients");
        return total;
    }
};

// Indirect service: client c is served at the earliest t' such that some
// visited node u satisfies d(s'_c, u) <= v'_c * t' and the visit happened
// no later than t'.
inline Evaluation evaluate_indirect(const Instance& in, const Schedule& sched) {
    for (const auto& w : sched.walks) validate_walk(in, w);
    Evaluation ev;
    ev.latency.resize(static_cast<size_t>(in.m()));
    ev.witness.resize(static_cast<size_t>(in.m()));
    ev.total = 0;
    for (int j = 0; j < in.m(); ++j) {
        const Client& c = in.clients[static_cast<size_t>(j)];
        std::optional<Rat> best;
        ServiceEvent ws;
        for (const auto& w : sched.walks) {
            for (size_t i = 0; i < w.visits.size(); ++i) {
                const TimedVisit& v = w.visits[i];
                const Rat dist = in.metric.at(c.start, v.node);
                Rat t;
                if (c.speed == 0) {
                    if (dist != 0) continue;
                    t = v.time;
                } else {
                    const Rat travel = dist / c.speed;
                    t = travel > v.time ? travel : v.time;
                }
                if (!best || t < *best) {
                    best = t;
                    ws = {w.owner, static_cast<int>(i)};
                }
            }
        }
        ev.latency[static_cast<size_t>(j)] = best;
        ev.witness[static_cast<size_t>(j)] = ws;
        if (best)
            ev.total += *best;
        else
            ev.served_all = false;
    }
    return ev;
}

// Perfect service: the schedule must place a repairman at the assigned node
// at exactly the assigned time (dwell intervals between equal-node visits
// count as presence).
inline Evaluation evaluate_perfect(const Instance& in, const Schedule& sched) {
    for (const auto& w : sched.walks) validate_walk(in, w);
    MOVREP_CHECK(sched.assignments.size() == static_cast<size_t>(in.m()),
                 "perfect evaluation needs one assignment per client");
    Evaluation ev;
    ev.latency.resize(static_cast<size_t>(in.m()));
    ev.witness.resize(static_cast<size_t>(in.m()));
    ev.total = 0;
    for (int j = 0; j < in.m(); ++j) {
        const Client& c = in.clients[static_cast<size_t>(j)];
        const Assignment& a = sched.assignments[static_cast<size_t>(j)];
        MOVREP_CHECK(in.metric.at(c.start, a.node) <= c.speed * a.time,
                     "client " + std::to_string(j) + " cannot reach its assigned node in time");
        bool met = false;
        ServiceEvent ws;
        for (const auto& w : sched.walks) {
            if (a.repairman >= 0 && w.owner != a.repairman) continue;
            for (size_t i = 0; i < w.visits.size() && !met; ++i) {
                if (w.visits[i].node != a.node) continue;
                if (w.visits[i].time == a.time) {
                    met = true;
                    ws = {w.owner, static_cast<int>(i)};
                } else if (i + 1 < w.visits.size() && w.visits[i + 1].node == a.node &&
                           w.visits[i].time <= a.time && a.time <= w.visits[i + 1].time) {
                    met = true;
                    ws = {w.owner, static_cast<int>(i)};
                }
            }
            if (met) break;
        }
        MOVREP_CHECK(met, "client " + std::to_string(j) + ": no repairman collocated at node " +
                              std::to_string(a.node) + " at the assigned time");
        ev.latency[static_cast<size_t>(j)] = a.time;
        ev.witness[static_cast<size_t>(j)] = ws;
        ev.total += a.time;
    }
    return ev;
}

}  // namespace movrep
