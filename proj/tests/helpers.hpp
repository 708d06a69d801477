#pragma once

#include <vector>

#include "movrep/instance.hpp"
#include "movrep/metric.hpp"
#include "movrep/rng.hpp"

namespace movrep::testing {

// Random metric from a random symmetric matrix with entries in
// {1/4, 2/4, ..., max_units/4} followed by shortest-path closure.
inline MetricSpace random_metric(Rng& rng, int n, long max_units = 40) {
    MetricSpace m(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) m.set(u, v, make_rat(rng.range(1, max_units), 4));
    return metric_closure(m);
}

inline Instance random_instance(Rng& rng, int n, int k, int m_clients, bool zero_speed_clients = true) {
    Instance in;
    in.metric = random_metric(rng, n);
    for (int i = 0; i < k; ++i)
        in.repairmen.push_back({i, static_cast<int>(rng.below(static_cast<std::uint64_t>(n))),
                                make_rat(rng.range(1, 4), rng.range(1, 2))});
    for (int j = 0; j < m_clients; ++j) {
        Rat speed(0);
        if (!zero_speed_clients || rng.below(2) == 0) speed = make_rat(rng.range(1, 3), rng.range(1, 3));
        in.clients.push_back({j, static_cast<int>(rng.below(static_cast<std::uint64_t>(n))), speed});
    }
    return in;
}

inline Instance line_instance(const std::vector<Rat>& gaps) {
    const int n = static_cast<int>(gaps.size()) + 1;
    MetricSpace m(n);
    for (int u = 0; u < n; ++u) {
        Rat acc(0);
        for (int v = u + 1; v < n; ++v) {
            acc += gaps[static_cast<size_t>(v - 1)];
            m.set(u, v, acc);
        }
    }
    Instance in;
    in.metric = m;
    return in;
}

}  // namespace movrep::testing
