#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "movrep/rational.hpp"

namespace movrep {

// Deterministic RNG. mt19937_64 output is specified by the standard; the
// std:: distributions are not, so we derive everything from raw draws.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    // Uniform in [0, n) by rejection.
    std::uint64_t below(std::uint64_t n) {
        MOVREP_CHECK(n > 0, "Rng::below(0)");
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
        std::uint64_t v = eng_();
        while (v >= limit) v = eng_();
        return v % n;
    }

    long range(long lo, long hi) {  // inclusive
        return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    // Dyadic rational uniform in [0,1) with 30 bits.
    Rat unit() {
        const long k = static_cast<long>(below(1u << 30));
        return make_rat(k, 1L << 30);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            const size_t j = static_cast<size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace movrep
