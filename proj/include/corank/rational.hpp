#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace corank {

/// q^e for signed integer e (exact).
inline mpq_class rat_pow(const mpq_class& q, long e) {
    if (e == 0) return mpq_class(1);
    mpq_class base = e > 0 ? q : mpq_class(1 / q);
    unsigned long n = e > 0 ? static_cast<unsigned long>(e)
                            : static_cast<unsigned long>(-(e + 1)) + 1;
    mpq_class acc(1);
    while (n) {
        if (n & 1) acc *= base;
        base *= base;
        n >>= 1;
    }
    return acc;
}

inline mpz_class int_pow(const mpz_class& b, unsigned long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

/// Parses "3", "5/2" or "2.5" into an exact rational.
inline mpq_class parse_rational(const std::string& s) {
    if (s.empty()) throw std::domain_error("empty rational literal");
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        size_t frac_len = s.size() - dot - 1;
        if (digits.empty() || digits == "-" || digits == "+")
            throw std::domain_error("bad rational literal: " + s);
        mpz_class num;
        if (mpz_set_str(num.get_mpz_t(), digits.c_str(), 10) != 0)
            throw std::domain_error("bad rational literal: " + s);
        mpz_class den = int_pow(10, frac_len);
        mpq_class r(num, den);
        r.canonicalize();
        return r;
    }
    mpq_class r;
    if (mpq_set_str(r.get_mpq_t(), s.c_str(), 10) != 0)
        throw std::domain_error("bad rational literal: " + s);
    r.canonicalize();
    return r;
}

inline std::string rat_str(const mpq_class& q) { return q.get_str(); }

inline bool is_integer(const mpq_class& q) { return q.get_den() == 1; }

inline long to_long(const mpq_class& q) {
    if (!is_integer(q) || !q.get_num().fits_slong_p())
        throw std::domain_error("rational is not a small integer: " + q.get_str());
    return q.get_num().get_si();
}

}  // namespace corank
