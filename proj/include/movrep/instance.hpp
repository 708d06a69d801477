#pragma once

#include <optional>
#include <vector>

#include "movrep/metric.hpp"
#include "movrep/rational.hpp"

namespace movrep {

struct Repairman {
    int id = 0;
    int depot = 0;
    Rat speed;  // > 0
};

struct Client {
    int id = 0;
    int start = 0;
    Rat speed;  // >= 0
};

struct Point {
    Rat x, y;
};

// A prize-collecting sub-instance attached to an instance file: root node,
// length budget, and per-client (profit, neighborhood radius).
struct NpcstBlock {
    int root = 0;
    Rat budget;
    std::vector<Rat> profit;  // per client
    std::vector<Rat> radius;  // per client, > 0
};

struct Instance {
    MetricSpace metric;
    std::vector<Repairman> repairmen;
    std::vector<Client> clients;
    std::optional<std::vector<Point>> coords;  // euclidean mode only
    std::optional<NpcstBlock> npcst;

    int n() const { return metric.n; }
    int k() const { return static_cast<int>(repairmen.size()); }
    int m() const { return static_cast<int>(clients.size()); }

    void validate() const {
        for (const auto& r : repairmen) {
            MOVREP_CHECK(r.depot >= 0 && r.depot < n(), "repairman depot out of range");
            MOVREP_CHECK(r.speed > 0, "repairman speed must be positive");
        }
        for (const auto& c : clients) {
            MOVREP_CHECK(c.start >= 0 && c.start < n(), "client start out of range");
            MOVREP_CHECK(c.speed >= 0, "client speed must be non-negative");
        }
        MOVREP_CHECK(validate_metric(metric).empty(), "distance matrix is not a metric");
    }

    Rat max_speed() const {
        Rat mv(0);
        for (const auto& r : repairmen)
            if (r.speed > mv) mv = r.speed;
        for (const auto& c : clients)
            if (c.speed > mv) mv = c.speed;
        return mv;
    }

    Rat min_repairman_speed() const {
        MOVREP_CHECK(!repairmen.empty(), "instance has no repairmen");
        Rat v = repairmen[0].speed;
        for (const auto& r : repairmen)
            if (r.speed < v) v = r.speed;
        return v;
    }
};

struct ScaledInstance {
    Instance instance;
    Rat factor;  // distances were multiplied by this
};

// Multiplies all distances by 2*mv (mv = max agent speed), with an extra
// 1/min_positive_distance guard so the minimum positive service time is >= 1
// even when the input has sub-unit distances.
inline ScaledInstance scale_instance(const Instance& in) {
    const Rat mv = in.max_speed();
    MOVREP_CHECK(mv > 0, "scale_instance: all agent speeds are zero");
    Rat factor = 2 * mv;
    const Rat dmin = in.metric.min_positive();
    if (dmin > 0 && dmin < 1) factor /= dmin;
    ScaledInstance out{in, factor};
    out.instance.metric = in.metric.scaled(factor);
    return out;
}

// Geometrically doubling time stamps {1, 2, 4, ..., 2^E}.
struct TimeGrid {
    std::vector<Rat> stamps;
    Rat horizon;  // T
    long exponent = 0;

    const Rat& last() const { return stamps.back(); }
};

// Grid for a (scaled) instance: T = 2*MST / min repairman speed and
// E = ceil(log2 T) + ceil(ceil(log2 m)/2) + 1.
inline TimeGrid build_time_grid(const Instance& in) {
    const Rat mst = mst_cost(in.metric);
    Rat horizon = 2 * mst / in.min_repairman_speed();
    const long m = std::max(1, in.m());
    const long log_t = ceil_log2(horizon >= 1 ? horizon : Rat(1));
    long log_m = 0;
    while ((1L << log_m) < m) ++log_m;        // ceil(log2 m)
    const long half = (log_m + 1) / 2;         // ceil(ceil(log2 m)/2)
    const long e = std::max(0L, log_t) + half + 1;
    TimeGrid grid;
    grid.horizon = horizon;
    grid.exponent = e;
    grid.stamps.reserve(static_cast<size_t>(e) + 1);
    for (long i = 0; i <= e; ++i) grid.stamps.push_back(pow2(i));
    return grid;
}

// Neighborhood B(c, speed*t): all nodes the client can reach by time t.
// Zero-speed clients can only occupy nodes at distance 0.
inline std::vector<int> ball(const Instance& in, int client, const Rat& t) {
    MOVREP_CHECK(t >= 0, "ball: negative time");
    const Client& c = in.clients.at(static_cast<size_t>(client));
    const Rat reach = c.speed * t;
    std::vector<int> nodes;
    for (int u = 0; u < in.n(); ++u)
        if (in.metric.at(c.start, u) <= reach) nodes.push_back(u);
    return nodes;
}

// Same predicate without materializing the set.
inline bool in_ball(const Instance& in, int client, const Rat& t, int node) {
    const Client& c = in.clients.at(static_cast<size_t>(client));
    return in.metric.at(c.start, node) <= c.speed * t;
}

}  // namespace movrep
