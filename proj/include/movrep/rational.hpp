#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace movrep {

// All quantities (distances, speeds, times, LP values) are exact rationals.
using Rat = mpq_class;
using Int = mpz_class;

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define MOVREP_CHECK(cond, msg)                          \
    do {                                                 \
        if (!(cond)) throw ::movrep::Error(msg);         \
    } while (0)

inline Rat make_rat(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat pow2(long e) {
    Rat r;
    if (e >= 0) {
        mpz_ui_pow_ui(r.get_num_mpz_t(), 2, static_cast<unsigned long>(e));
    } else {
        mpz_ui_pow_ui(r.get_den_mpz_t(), 2, static_cast<unsigned long>(-e));
    }
    return r;
}

// Smallest integer e with 2^e >= x.  Requires x > 0.
inline long ceil_log2(const Rat& x) {
    MOVREP_CHECK(x > 0, "ceil_log2: non-positive argument");
    long e = 0;
    if (x >= 1) {
        while (pow2(e) < x) ++e;
    } else {
        while (pow2(e - 1) >= x) --e;
    }
    return e;
}

inline Int floor_rat(const Rat& x) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
}

inline Int ceil_rat(const Rat& x) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
}

inline long to_long(const Int& x) {
    MOVREP_CHECK(x.fits_slong_p(), "integer out of long range");
    return x.get_si();
}

// Serialized form: canonical "num" or "num/den".
inline std::string rat_to_string(const Rat& x) { return x.get_str(); }

// Parses "12", "-3.25", "7/2".  Decimal strings convert exactly.
inline std::optional<Rat> try_parse_rat(const std::string& s) {
    if (s.empty()) return std::nullopt;
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        Rat r;
        if (mpq_set_str(r.get_mpq_t(), s.c_str(), 10) != 0) return std::nullopt;
        if (mpz_sgn(mpq_denref(r.get_mpq_t())) <= 0) return std::nullopt;
        r.canonicalize();
        return r;
    }
    const auto dot = s.find('.');
    std::string digits = s;
    long frac_digits = 0;
    if (dot != std::string::npos) {
        frac_digits = static_cast<long>(s.size() - dot - 1);
        if (frac_digits == 0) return std::nullopt;
        digits = s.substr(0, dot) + s.substr(dot + 1);
    }
    if (digits.empty() || digits == "-" || digits == "+") return std::nullopt;
    for (size_t i = 0; i < digits.size(); ++i) {
        const char c = digits[i];
        if ((c == '-' || c == '+') && i == 0) continue;
        if (c < '0' || c > '9') return std::nullopt;
    }
    Int num;
    if (mpz_set_str(num.get_mpz_t(), digits.c_str(), 10) != 0) return std::nullopt;
    Int den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(frac_digits));
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat parse_rat(const std::string& s) {
    auto r = try_parse_rat(s);
    MOVREP_CHECK(r.has_value(), "malformed number: '" + s + "'");
    return *r;
}

inline double to_double(const Rat& x) { return x.get_d(); }

}  // namespace movrep
