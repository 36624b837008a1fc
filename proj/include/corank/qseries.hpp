#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "corank/pgroup.hpp"
#include "corank/rational.hpp"
#include "corank/real.hpp"

namespace corank {
namespace qseries {

inline void require_q_gt_1(const mpq_class& q) {
    if (!(q > 1)) throw std::domain_error("q must be > 1");
}

/// eta_k(q) = prod_{j=1..k} (1 - q^{-j}), exact.
inline mpq_class eta_finite(unsigned k, const mpq_class& q) {
    require_q_gt_1(q);
    mpq_class acc(1), qinv = 1 / q, pw(1);
    for (unsigned j = 1; j <= k; ++j) {
        pw *= qinv;
        acc *= (1 - pw);
    }
    return acc;
}

namespace detail {

// Number of leading factors needed so the dropped tail of a product
// prod (1 -+ q^{-j}) over j in an arithmetic progression of step `stride`
// is below 2^{-target_bits}. The tail sum over j > J is at most
// q^{-(J+1)} / (1 - q^{-stride}).
inline unsigned product_cutoff(const mpq_class& q, unsigned target_bits, unsigned stride) {
    double lq = std::log2(q.get_d());
    double denom_bits = -std::log2(1.0 - std::pow(q.get_d(), -double(stride)));
    double J = (double(target_bits) + denom_bits) / lq + 2;
    if (!(J < 1e9)) throw std::domain_error("q too close to 1 for requested precision");
    return static_cast<unsigned>(J) + 8;
}

// Conservative exponent of the accumulated relative rounding error after
// `steps` multiplicative updates at working precision wp, in which factors
// (1 - q^{-j}) >= 1 - 1/q enter denominator-like positions.
inline double prod_round_err_exp(unsigned steps, const mpq_class& q, long wp) {
    double small_factor_penalty =
        std::max(0.0, std::log2(q.get_d() / (q.get_d() - 1.0)));
    return -double(wp) + 2.0 * std::ceil(std::log2(double(steps) + 2.0)) +
           small_factor_penalty + 4.0;
}

}  // namespace detail

/// eta_infinity(q) = prod_{j>=1} (1 - q^{-j}) with a certified error bound.
inline Approx eta_limit(const mpq_class& q, Precision prec) {
    require_q_gt_1(q);
    long wp = prec.bits + 64;
    unsigned J = detail::product_cutoff(q, prec.bits + 8, 1);
    Real acc = Real::of(1L, wp), pw = Real::of(1L, wp), one = Real::of(1L, wp);
    for (unsigned j = 1; j <= J; ++j) {
        pw = div_q(pw, q);
        acc *= (one - pw);
    }
    double tail = -double(prec.bits + 8);  // by choice of J
    double round = acc.log2_abs() + detail::prod_round_err_exp(J, q, wp);
    return {std::move(acc), err_add(tail, round)};
}

/// prod over odd j of (1 - q^{-j}).
inline Approx alpha(const mpq_class& q, Precision prec) {
    require_q_gt_1(q);
    long wp = prec.bits + 64;
    unsigned J = detail::product_cutoff(q, prec.bits + 8, 2);
    mpq_class q2 = q * q;
    Real acc = Real::of(1L, wp), one = Real::of(1L, wp);
    Real pw = Real::of(mpq_class(1 / q), wp);
    for (unsigned j = 1; j <= J; j += 2) {
        acc *= (one - pw);
        pw = div_q(pw, q2);
    }
    double tail = -double(prec.bits + 8);
    double round = acc.log2_abs() + detail::prod_round_err_exp(J, q, wp);
    return {std::move(acc), err_add(tail, round)};
}

/// prod over odd j of (1 + q^{-j})^{-1}.
inline Approx beta(const mpq_class& q, Precision prec) {
    require_q_gt_1(q);
    long wp = prec.bits + 64;
    unsigned J = detail::product_cutoff(q, prec.bits + 8, 2);
    mpq_class q2 = q * q;
    Real acc = Real::of(1L, wp), one = Real::of(1L, wp);
    Real pw = Real::of(mpq_class(1 / q), wp);
    for (unsigned j = 1; j <= J; j += 2) {
        acc *= (one + pw);
        pw = div_q(pw, q2);
    }
    Real inv = one / acc;
    // beta lies in [inv * exp(-S), inv] for tail sum S <= 2^{-(prec+8)}
    double tail = -double(prec.bits + 8);
    double round = inv.log2_abs() + detail::prod_round_err_exp(J + 1, q, wp);
    return {std::move(inv), err_add(tail, round)};
}

/// Normalizer theta_m(q) defined by
///   theta_m(q)^{-1} = sum_{i>=0} q^{-i(i+m)} / (eta_i(q) prod_{j<=i}(1-q^{-m-j})),
/// valid for rational q > 1 and m > -1.
inline Approx theta(const mpq_class& q, const mpq_class& m, Precision prec) {
    require_q_gt_1(q);
    if (!(m > -1)) throw std::domain_error("m must be > -1");
    long wp = prec.bits + 64;
    Real one = Real::of(1L, wp);
    Real qr = Real::of(q, wp);
    Real qm = pow(qr, Real::of(m, wp));          // q^m
    Real qmi = one / qm;                         // q^{-m}
    Real sum = Real::of(1L, wp);                 // i = 0 term
    Real term = Real::of(1L, wp);
    Real qpow = Real::of(1L, wp);                // q^{-i}
    double tail_exp;
    unsigned steps = 0;
    for (unsigned i = 0;; ++i) {
        // ratio t_{i+1}/t_i = q^{-(2i+1+m)} / ((1-q^{-i-1})(1-q^{-m-i-1}))
        qpow = div_q(qpow, q);                   // q^{-(i+1)}
        Real num = qpow * qpow;                  // q^{-2(i+1)}
        num = mul_q(num, q);                     // q^{-(2i+1)}
        num *= qmi;                              // q^{-(2i+1+m)}
        Real den = (one - qpow) * (one - qmi * qpow);
        Real ratio = num / den;
        term *= ratio;
        sum += term;
        ++steps;
        if (ratio < 0.5 && term.log2_abs() < sum.log2_abs() - double(prec.bits + 10)) {
            // remaining tail <= term * ratio / (1 - ratio) <= term
            tail_exp = term.log2_abs();
            break;
        }
        if (i > 1000000) throw std::runtime_error("theta series did not converge");
    }
    double sum_err = err_add(tail_exp, sum.log2_abs() +
                                           detail::prod_round_err_exp(4 * steps + 8, q, wp));
    Approx inv_theta{std::move(sum), sum_err};
    Approx one_a = Approx::exact(Real::of(1L, wp));
    return approx_div(one_a, inv_theta);
}

/// Taylor coefficients b_0..b_K of prod_{i>=1}(1 - q^{-i} t):
/// b_k = (-1)^k / prod_{j=1..k}(q^j - 1), exact.
inline std::vector<mpq_class> euler_coeffs(const mpq_class& q, unsigned K) {
    require_q_gt_1(q);
    std::vector<mpq_class> b(K + 1);
    b[0] = 1;
    mpq_class qp(1);
    for (unsigned k = 1; k <= K; ++k) {
        qp *= q;
        b[k] = -b[k - 1] / (qp - 1);
    }
    return b;
}

/// |Aut(G)| for a finite abelian p-group, by the closed formula on the
/// partition (Hillar–Rhea form). Exact.
inline mpz_class aut_order(const PGroupType& t) {
    const size_t n = t.lambda.size();
    if (n == 0) return 1;
    // ascending exponents e_1 <= ... <= e_n
    std::vector<unsigned> e(t.lambda.rbegin(), t.lambda.rend());
    std::vector<size_t> dmax(n), cmin(n);
    for (size_t k = 0; k < n; ++k) {
        size_t d = k, c = k;
        while (d + 1 < n && e[d + 1] == e[k]) ++d;
        while (c > 0 && e[c - 1] == e[k]) --c;
        dmax[k] = d + 1;  // 1-indexed
        cmin[k] = c + 1;
    }
    mpz_class p(t.p), res(1);
    for (size_t k = 1; k <= n; ++k) {
        res *= int_pow(p, dmax[k - 1]) - int_pow(p, k - 1);
        res *= int_pow(p, static_cast<unsigned long>(e[k - 1]) * (n - dmax[k - 1]));
        res *= int_pow(p, static_cast<unsigned long>(e[k - 1] - 1) * (n - cmin[k - 1] + 1));
    }
    return res;
}

/// Limiting mass of the group type under the (p, m) cokernel distribution:
/// w_m(G) = (eta_inf(p)/eta_m(p)) / (|G|^m |Aut(G)|).
inline Approx w_m(const PGroupType& t, unsigned m, Precision prec) {
    mpq_class p(t.p);
    mpq_class denom = eta_finite(m, p) * mpq_class(int_pow(t.order(), m)) *
                      mpq_class(aut_order(t));
    return approx_mul_q(eta_limit(p, prec), 1 / denom);
}

/// First-order coefficient lambda_m(G) = w_m(G) (1 + p^{-m} - p^{rk}) / (p-1).
inline Approx lambda_m(const PGroupType& t, unsigned m, Precision prec) {
    mpq_class p(t.p);
    mpq_class factor =
        (1 + rat_pow(p, -long(m)) - rat_pow(p, t.rank())) / (p - 1);
    return approx_mul_q(w_m(t, m, prec), factor);
}

}  // namespace qseries
}  // namespace corank
