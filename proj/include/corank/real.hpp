#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "corank/rational.hpp"

namespace corank {

/// Binary working precision for real-valued evaluation.
struct Precision {
    unsigned bits;
    explicit Precision(unsigned b = 256) : bits(b) {
        if (b < 64) throw std::domain_error("precision must be >= 64 bits");
    }
};

/// Value-semantics wrapper over mpfr_t. The precision is fixed at
/// construction; binary operators compute at the larger operand precision.
class Real {
    mpfr_t v_;

  public:
    explicit Real(mpfr_prec_t prec = 64) {
        mpfr_init2(v_, prec);
        mpfr_set_zero(v_, 1);
    }
    Real(const Real& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    Real(Real&& o) noexcept {
        v_[0] = o.v_[0];
        mpfr_init2(o.v_, MPFR_PREC_MIN);
    }
    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    static Real of(const mpq_class& q, mpfr_prec_t prec) {
        Real r(prec);
        mpfr_set_q(r.v_, q.get_mpq_t(), MPFR_RNDN);
        return r;
    }
    static Real of(const mpz_class& z, mpfr_prec_t prec) {
        Real r(prec);
        mpfr_set_z(r.v_, z.get_mpz_t(), MPFR_RNDN);
        return r;
    }
    static Real of(double d, mpfr_prec_t prec) {
        Real r(prec);
        mpfr_set_d(r.v_, d, MPFR_RNDN);
        return r;
    }
    static Real of(long n, mpfr_prec_t prec) {
        Real r(prec);
        mpfr_set_si(r.v_, n, MPFR_RNDN);
        return r;
    }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }

    bool is_zero() const { return mpfr_zero_p(v_); }
    int sgn() const { return mpfr_sgn(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    /// log2 magnitude: smallest e with |x| < 2^e (zero maps to -inf).
    double log2_abs() const {
        if (mpfr_zero_p(v_)) return -std::numeric_limits<double>::infinity();
        return static_cast<double>(mpfr_get_exp(v_));
    }

    /// Decimal string with the given number of significant digits.
    std::string str(size_t digits = 30) const {
        char fmt[32];
        std::snprintf(fmt, sizeof fmt, "%%.%zuRg", digits);
        char* s = nullptr;
        mpfr_asprintf(&s, fmt, v_);
        std::string out(s);
        mpfr_free_str(s);
        return out;
    }

    friend int cmp(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_); }
    friend bool operator<(const Real& a, const Real& b) { return cmp(a, b) < 0; }
    friend bool operator>(const Real& a, const Real& b) { return cmp(a, b) > 0; }
    friend bool operator<=(const Real& a, const Real& b) { return cmp(a, b) <= 0; }
    friend bool operator>=(const Real& a, const Real& b) { return cmp(a, b) >= 0; }
    friend bool operator==(const Real& a, const Real& b) { return cmp(a, b) == 0; }

    friend bool operator<(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) < 0; }
    friend bool operator>(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) > 0; }
    friend bool operator<=(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) <= 0; }
    friend bool operator>=(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) >= 0; }

#define CORANK_REAL_BINOP(op, fn)                                        \
    friend Real operator op(const Real& a, const Real& b) {             \
        Real r(std::max(a.prec(), b.prec()));                           \
        fn(r.v_, a.v_, b.v_, MPFR_RNDN);                                \
        return r;                                                       \
    }
    CORANK_REAL_BINOP(+, mpfr_add)
    CORANK_REAL_BINOP(-, mpfr_sub)
    CORANK_REAL_BINOP(*, mpfr_mul)
    CORANK_REAL_BINOP(/, mpfr_div)
#undef CORANK_REAL_BINOP

    Real& operator+=(const Real& b) {
        mpfr_add(v_, v_, b.v_, MPFR_RNDN);
        return *this;
    }
    Real& operator-=(const Real& b) {
        mpfr_sub(v_, v_, b.v_, MPFR_RNDN);
        return *this;
    }
    Real& operator*=(const Real& b) {
        mpfr_mul(v_, v_, b.v_, MPFR_RNDN);
        return *this;
    }
    Real& operator/=(const Real& b) {
        mpfr_div(v_, v_, b.v_, MPFR_RNDN);
        return *this;
    }

    friend Real operator-(const Real& a) {
        Real r(a.prec());
        mpfr_neg(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend Real abs(const Real& a) {
        Real r(a.prec());
        mpfr_abs(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend Real sqrt(const Real& a) {
        Real r(a.prec());
        mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend Real log(const Real& a) {
        Real r(a.prec());
        mpfr_log(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend Real exp(const Real& a) {
        Real r(a.prec());
        mpfr_exp(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend Real pow(const Real& a, const Real& b) {
        Real r(std::max(a.prec(), b.prec()));
        mpfr_pow(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
};

inline Real mul_q(const Real& a, const mpq_class& q) {
    Real r(a.prec());
    mpfr_mul_q(r.get(), a.get(), q.get_mpq_t(), MPFR_RNDN);
    return r;
}

inline Real div_q(const Real& a, const mpq_class& q) {
    Real r(a.prec());
    mpfr_div_q(r.get(), a.get(), q.get_mpq_t(), MPFR_RNDN);
    return r;
}

// --- coarse but certified error-exponent bookkeeping ------------------------
//
// Real-valued results carry an error bound of the form 2^e with e a double
// (negative infinity marks exact values). Combining rules over-approximate,
// which costs a few bits of the bound, never its validity.

inline constexpr double kExact = -std::numeric_limits<double>::infinity();

inline double err_add(double e1, double e2) {
    if (e1 == kExact) return e2;
    if (e2 == kExact) return e1;
    return std::max(e1, e2) + 1.0;
}

inline double err_add(double e1, double e2, double e3) {
    return err_add(err_add(e1, e2), e3);
}

/// Error bound exponent for summing n values each bounded by 2^e.
inline double err_scale_count(double e, size_t n) {
    if (e == kExact || n == 0) return kExact;
    return e + std::ceil(std::log2(static_cast<double>(n) + 1.0));
}

/// 0.5 ulp rounding of r (used after an MPFR op with RNDN).
inline double round_err(const Real& r) {
    if (r.is_zero()) return kExact;
    return r.log2_abs() - static_cast<double>(r.prec());
}

/// High-precision value together with a certified absolute error bound 2^err.
struct Approx {
    Real value;
    double err = kExact;

    Approx() = default;
    Approx(Real v, double e) : value(std::move(v)), err(e) {}
    static Approx exact(Real v) { return Approx(std::move(v), kExact); }
    static Approx of(const mpq_class& q, mpfr_prec_t prec) {
        Real v = Real::of(q, prec);
        double e = round_err(v);
        return Approx(std::move(v), e);
    }

    double to_double() const { return value.to_double(); }

    /// Certified upper bound on the absolute error, as a Real.
    Real err_real() const {
        Real e(64);
        if (err == kExact)
            mpfr_set_zero(e.get(), 1);
        else
            mpfr_set_d(e.get(), 1.0, MPFR_RNDU), mpfr_mul_2si(e.get(), e.get(), static_cast<long>(std::ceil(err)), MPFR_RNDU);
        return e;
    }
};

inline Approx approx_add(const Approx& a, const Approx& b) {
    Real v = a.value + b.value;
    double e = err_add(a.err, b.err, round_err(v));
    return {std::move(v), e};
}

inline Approx approx_sub(const Approx& a, const Approx& b) {
    Real v = a.value - b.value;
    double e = err_add(a.err, b.err, round_err(v));
    return {std::move(v), e};
}

inline Approx approx_neg(const Approx& a) { return {-a.value, a.err}; }
inline Approx approx_abs(const Approx& a) { return {abs(a.value), a.err}; }

inline Approx approx_mul(const Approx& a, const Approx& b) {
    Real v = a.value * b.value;
    double la = a.value.log2_abs() + 1, lb = b.value.log2_abs() + 1;
    double e = err_add(err_add(la + b.err, lb + a.err),
                       err_add(a.err + b.err, round_err(v)));
    return {std::move(v), e};
}

/// Multiplication by an exact rational.
inline Approx approx_mul_q(const Approx& a, const mpq_class& q) {
    Real v = mul_q(a.value, q);
    double lq = q == 0 ? kExact
                       : std::log2(std::abs(q.get_d())) + 1;
    double e = err_add(a.err + lq, round_err(v));
    return {std::move(v), e};
}

inline Approx approx_div(const Approx& a, const Approx& b) {
    // require the error of b to be well below |b|
    double lb_low = b.value.log2_abs() - 2;
    if (!(b.err < lb_low - 1))
        throw std::domain_error("approx_div: divisor error bound too large");
    Real v = a.value / b.value;
    double lc = v.log2_abs() + 1;
    double e = err_add(err_add(a.err - lb_low + 1, lc + b.err - lb_low + 1),
                       round_err(v));
    return {std::move(v), e};
}

inline Approx approx_div_q(const Approx& a, const mpq_class& q) {
    if (q == 0) throw std::domain_error("division by zero");
    return approx_mul_q(a, mpq_class(1 / q));
}

inline Approx approx_sqrt(const Approx& a) {
    Real v = sqrt(a.value);
    // d sqrt = 1/(2 sqrt); valid when err stays below |a|/2
    double e = a.err == kExact ? kExact : a.err - v.log2_abs() + 1;
    return {std::move(v), err_add(e, round_err(v))};
}

/// True iff |a.value - c| <= tol is certain given a's error bound.
inline bool certified_within(const Approx& a, const Real& c, const Real& tol) {
    Real gap = abs(a.value - c) + a.err_real();
    return gap <= tol;
}

}  // namespace corank
