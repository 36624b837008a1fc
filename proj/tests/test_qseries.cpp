#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <vector>

#include "corank/qseries.hpp"
#include "test_util.hpp"

using namespace corank;
using namespace corank::qseries;
using corank::testutil::close;

namespace {

// Independent oracle for eta_inf: the pentagonal-number series
// prod(1-x^n) = 1 + sum_{k>=1} (-1)^k (x^{k(3k-1)/2} + x^{k(3k+1)/2}),
// summed exactly until the exponent passes `bits`, with tail < 2^{1-bits}.
mpq_class eta_limit_pentagonal(const mpq_class& q, unsigned bits) {
    mpq_class x = 1 / q, acc = 1;
    double lx = std::log2(q.get_d());
    for (unsigned long k = 1;; ++k) {
        unsigned long e1 = k * (3 * k - 1) / 2, e2 = k * (3 * k + 1) / 2;
        if (double(e1) * lx > bits + 4) break;
        mpq_class t = rat_pow(x, e1) + rat_pow(x, e2);
        acc += (k % 2 ? -t : t);
    }
    return acc;
}

// Exhaustive |Aut(G)|: counts surjective (= bijective) endomorphisms by
// depth-first choice of generator images, tracking the generated subgroup.
long aut_order_bruteforce(const PGroupType& t) {
    const unsigned r = t.rank();
    if (r == 0) return 1;
    std::vector<long> mod(r);
    long N = 1;
    for (unsigned i = 0; i < r; ++i) {
        mod[i] = 1;
        for (unsigned e = 0; e < t.lambda[i]; ++e) mod[i] *= t.p;
        N *= mod[i];
    }
    auto decode = [&](long idx, std::vector<long>& coords) {
        for (unsigned i = 0; i < r; ++i) {
            coords[i] = idx % mod[i];
            idx /= mod[i];
        }
    };
    auto encode = [&](const std::vector<long>& coords) {
        long idx = 0;
        for (unsigned i = r; i-- > 0;) idx = idx * mod[i] + coords[i];
        return idx;
    };
    std::vector<long> add_by_p(N);
    std::vector<long> ca(r), cb(r);
    for (long x = 0; x < N; ++x) {
        decode(x, ca);
        for (unsigned i = 0; i < r; ++i) ca[i] = (ca[i] * t.p) % mod[i];
        add_by_p[x] = encode(ca);
    }
    auto add = [&](long x, long y) {
        decode(x, ca);
        decode(y, cb);
        for (unsigned i = 0; i < r; ++i) ca[i] = (ca[i] + cb[i]) % mod[i];
        return encode(ca);
    };
    // images of generator j must be killed by p^{lambda_j}
    std::vector<std::vector<long>> allowed(r);
    for (unsigned j = 0; j < r; ++j) {
        for (long y = 0; y < N; ++y) {
            long z = y;
            for (unsigned e = 0; e < t.lambda[j]; ++e) z = add_by_p[z];
            if (z == 0) allowed[j].push_back(y);
        }
    }
    std::vector<char> in_span(N, 0);
    in_span[0] = 1;
    long span_size = 1;
    long count = 0;
    auto rec = [&](auto&& self, unsigned j) -> void {
        // order of y in G/S is the least p^k with p^k y in S
        auto quotient_order = [&](long y) {
            long ord = 1, z = y;
            while (!in_span[z]) {
                z = add_by_p[z];
                ord *= t.p;
            }
            return ord;
        };
        if (j == r) {
            if (span_size == N) ++count;
            return;
        }
        long rest = 1;
        for (unsigned i = j; i < r; ++i) rest *= mod[i];
        if (span_size * rest < N) return;  // cannot reach G any more
        for (long y : allowed[j]) {
            long ord = quotient_order(y);
            if (j + 1 == r) {
                if (span_size * ord == N) ++count;
                continue;
            }
            if (ord == 1) {
                self(self, j + 1);
                continue;
            }
            // extend the span: S' = S + {k*y}, saving the old flags
            std::vector<long> added;
            long ky = y;
            for (long k = 1; k < ord; ++k) {
                for (long s = 0; s < N; ++s)
                    if (in_span[s]) {
                        long v = add(s, ky);
                        if (!in_span[v]) {
                            in_span[v] = 1;
                            added.push_back(v);
                        }
                    }
                ky = add(ky, y);
            }
            span_size += long(added.size());
            self(self, j + 1);
            span_size -= long(added.size());
            for (long v : added) in_span[v] = 0;
        }
    };
    rec(rec, 0);
    return count;
}

}  // namespace

TEST_CASE("eta finite products") {
    mpq_class two(2);
    CHECK(eta_finite(0, two) == 1);
    CHECK(eta_finite(1, two) == mpq_class(1, 2));
    CHECK(eta_finite(2, two) == mpq_class(3, 8));
    CHECK(eta_finite(2, mpq_class(5, 2)) == mpq_class(3, 5) * mpq_class(21, 25));
    CHECK_THROWS_AS(eta_finite(3, mpq_class(1)), std::domain_error);
    CHECK_THROWS_AS(eta_finite(3, mpq_class(1, 2)), std::domain_error);
}

TEST_CASE("eta recurrence eta_k * (1 - q^{-(k+1)}) = eta_{k+1}") {
    for (mpq_class q : {mpq_class(2), mpq_class(3), mpq_class(5, 2)}) {
        mpq_class acc = 1;
        for (unsigned k = 0; k <= 50; ++k) {
            CHECK(acc == eta_finite(k, q));
            acc *= 1 - rat_pow(q, -long(k) - 1);
        }
    }
}

TEST_CASE("eta limit against pentagonal series oracle") {
    Precision prec(256);
    for (mpq_class q : {mpq_class(2), mpq_class(3), mpq_class(9), mpq_class(5, 2)}) {
        Approx e = eta_limit(q, prec);
        Real oracle = Real::of(eta_limit_pentagonal(q, 300), 400);
        CHECK(close(e, oracle, 1e-70));
    }
    // reference decimal value
    Approx e2 = eta_limit(mpq_class(2), prec);
    CHECK(close(e2, Real::of(0.2887880951, 64), 1e-9));
    CHECK(e2.err < -250);
}

TEST_CASE("alpha factorization: alpha(q) * eta_inf(q^2) = eta_inf(q)") {
    Precision prec(256);
    for (mpq_class q : {mpq_class(2), mpq_class(3), mpq_class(5, 2)}) {
        Approx a = alpha(q, prec);
        Approx even_part = eta_limit(q * q, prec);
        Approx prod = approx_mul(a, even_part);
        CHECK(close(prod, eta_limit(q, prec), 1e-70));
    }
}

TEST_CASE("beta is the inverse of the odd (1+q^{-i}) product") {
    Precision prec(256);
    for (mpq_class q : {mpq_class(2), mpq_class(3)}) {
        Approx b = beta(q, prec);
        // direct partial product with certified tail
        long wp = 320;
        Real prod = Real::of(1L, wp), pw = Real::of(1 / q, wp), one = Real::of(1L, wp);
        for (unsigned j = 1; j <= 400; j += 2) {
            prod *= (one + pw);
            pw = div_q(pw, q * q);
        }
        Approx inv_prod{std::move(prod), -300};
        CHECK(close(approx_mul(b, inv_prod), Real::of(1L, 64), 1e-60));
    }
}

TEST_CASE("theta matches eta_inf/eta_m for integer m") {
    Precision prec(256);
    for (mpq_class q : {mpq_class(2), mpq_class(3), mpq_class(5, 2)}) {
        for (unsigned m : {0u, 1u, 2u}) {
            Approx th = theta(q, mpq_class(m), prec);
            Approx want = approx_mul_q(eta_limit(q, prec), 1 / eta_finite(m, q));
            CHECK(close(th, want, 1e-60));
        }
    }
}

TEST_CASE("theta_0(2) from the direct q^{i^2} eta_i^2 series") {
    // theta_0(q)^{-1} = sum_i 1/(q^{i^2} eta_i(q)^2), summed exactly
    mpq_class q(2), sum = 0;
    for (unsigned i = 0; i <= 40; ++i) {
        mpq_class eta_i = eta_finite(i, q);
        sum += 1 / (rat_pow(q, long(i) * long(i)) * eta_i * eta_i);
    }
    Real inv = Real::of(1L, 320) / Real::of(sum, 320);
    Approx th = theta(q, mpq_class(0), Precision(256));
    CHECK(close(th, inv, 1e-60));
    CHECK(close(th, eta_limit(q, Precision(256)), 1e-60));
}

TEST_CASE("theta accepts non-integer parameters") {
    Approx th = theta(mpq_class(5, 2), mpq_class(-1, 2), Precision(128));
    CHECK(th.value > 0.0);
    CHECK(th.value < 1.0);
    CHECK_THROWS_AS(theta(mpq_class(2), mpq_class(-1), Precision(128)), std::domain_error);
    CHECK_THROWS_AS(theta(mpq_class(2), mpq_class(-3, 2), Precision(128)), std::domain_error);
}

TEST_CASE("euler coefficients") {
    mpq_class two(2);
    auto b = euler_coeffs(two, 8);
    CHECK(b[0] == 1);
    CHECK(b[1] == mpq_class(-1));
    CHECK(b[2] == mpq_class(1, 3));
    auto b3 = euler_coeffs(mpq_class(3), 2);
    CHECK(b3[1] == mpq_class(-1, 2));
    CHECK(b3[2] == mpq_class(1, 16));
}

TEST_CASE("euler identity partial sums within alternating remainder") {
    // prod_{i>=1}(1 - q^{-i} t) vs sum b_k t^k at q=2, t=1/2
    mpq_class q(2), t(1, 2);
    mpq_class prod = 1;
    for (unsigned i = 1; i <= 260; ++i) prod *= 1 - rat_pow(q, -long(i)) * t;
    auto b = euler_coeffs(q, 30);
    mpq_class partial = 0;
    for (unsigned K = 5; K <= 25; ++K) {
        partial = 0;
        for (unsigned k = 0; k <= K; ++k) partial += b[k] * rat_pow(t, k);
        mpq_class remainder_bound = abs(b[K + 1] * rat_pow(t, K + 1));
        // the dropped product tail contributes < 2^{-250}
        mpq_class slack = mpq_class(1, int_pow(mpz_class(2), 240));
        CHECK(abs(prod - partial) <= remainder_bound + slack);
    }
}

TEST_CASE("aut_order closed formula: stated examples") {
    CHECK(aut_order(PGroupType(2, {})) == 1);
    CHECK(aut_order(PGroupType(5, {1})) == 4);
    CHECK(aut_order(PGroupType(2, {1, 1})) == 6);
    CHECK(aut_order(PGroupType(3, {1, 1})) == 48);
    CHECK(aut_order(PGroupType(2, {2})) == 2);
}

TEST_CASE("aut_order matches exhaustive count for |G| <= p^4, p in {2,3}") {
    for (long p : {2L, 3L}) {
        for (const auto& lam : partitions_up_to(4, 4)) {
            PGroupType t(p, lam);
            INFO("p=" << p << " lambda=" << t.str());
            CHECK(aut_order(t) == aut_order_bruteforce(t));
        }
    }
}

TEST_CASE("w_m and lambda_m examples") {
    Precision prec(256);
    PGroupType triv2(2, {});
    Approx w = w_m(triv2, 0, prec);
    CHECK(close(w, eta_limit(mpq_class(2), prec), 1e-70));
    CHECK(close(w, Real::of(0.28879, 64), 1e-5));

    // trivial G: lambda = w * p^{-m} / (p-1)
    for (long p : {2L, 3L}) {
        PGroupType triv(p, {});
        for (unsigned m : {0u, 1u, 2u}) {
            Approx lam = lambda_m(triv, m, prec);
            Approx want = approx_mul_q(w_m(triv, m, prec),
                                       rat_pow(mpq_class(p), -long(m)) / (p - 1));
            CHECK(close(lam, want, 1e-70));
        }
    }

    // G = Z/3, m = 0: w = eta_inf(3)/2 and lambda = -w/2
    PGroupType z3(3, {1});
    Approx w3 = w_m(z3, 0, prec);
    CHECK(close(w3, approx_mul_q(eta_limit(mpq_class(3), prec), mpq_class(1, 2)), 1e-70));
    Approx l3 = lambda_m(z3, 0, prec);
    CHECK(close(l3, approx_mul_q(w3, mpq_class(-1, 2)), 1e-70));
}

TEST_CASE("sum of w_m over group types approaches 1 from below") {
    Precision prec(128);
    for (long p : {2L, 3L}) {
        for (unsigned m : {0u, 1u}) {
            double prev = 0;
            for (unsigned B : {4u, 7u, 10u}) {
                mpq_class rational_part = 0;
                mpq_class pq(p);
                for (const auto& lam : partitions_up_to(B, 6)) {
                    PGroupType t(p, lam);
                    rational_part += 1 / (eta_finite(m, pq) *
                                          mpq_class(int_pow(t.order(), m)) *
                                          mpq_class(aut_order(t)));
                }
                Approx total = approx_mul_q(eta_limit(pq, prec), rational_part);
                double v = total.to_double();
                CHECK(v > prev);        // grows with the cutoff
                CHECK(v < 1.0 + 1e-20); // never exceeds full mass
                prev = v;
            }
            CHECK(prev > 0.99);
        }
    }
}
