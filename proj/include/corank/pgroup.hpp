#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "corank/rational.hpp"

namespace corank {

inline bool is_small_prime(long p) {
    if (p < 2) return false;
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

/// Finite abelian p-group as a weakly decreasing partition:
/// G = ⊕ Z/p^{lambda_i}. Empty partition = trivial group.
struct PGroupType {
    long p;
    std::vector<unsigned> lambda;

    PGroupType(long p_, std::vector<unsigned> lam = {}) : p(p_), lambda(std::move(lam)) {
        if (!is_small_prime(p)) throw std::domain_error("p must be prime");
        for (size_t i = 0; i < lambda.size(); ++i) {
            if (lambda[i] < 1) throw std::domain_error("partition entries must be >= 1");
            if (i > 0 && lambda[i] > lambda[i - 1])
                throw std::domain_error("partition must be weakly decreasing");
        }
    }

    /// p-rank: number of cyclic factors.
    unsigned rank() const { return static_cast<unsigned>(lambda.size()); }

    unsigned size_exp() const {
        unsigned s = 0;
        for (unsigned e : lambda) s += e;
        return s;
    }

    /// |G| = p^{sum lambda_i}.
    mpz_class order() const { return int_pow(mpz_class(p), size_exp()); }

    bool trivial() const { return lambda.empty(); }

    std::string str() const {
        std::string s = "[";
        for (size_t i = 0; i < lambda.size(); ++i)
            s += (i ? "," : "") + std::to_string(lambda[i]);
        return s + "]";
    }

    bool operator==(const PGroupType& o) const { return p == o.p && lambda == o.lambda; }
    bool operator<(const PGroupType& o) const {
        if (p != o.p) return p < o.p;
        return lambda < o.lambda;
    }
};

/// All partitions with sum <= max_sum and length <= max_len, the empty
/// partition included; ordered by (sum, lexicographic).
inline std::vector<std::vector<unsigned>> partitions_up_to(unsigned max_sum,
                                                           unsigned max_len) {
    std::vector<std::vector<unsigned>> out;
    std::vector<unsigned> cur;
    auto rec = [&](auto&& self, unsigned remaining, unsigned max_part) -> void {
        out.push_back(cur);
        if (cur.size() == max_len) return;
        for (unsigned part = std::min(remaining, max_part); part >= 1; --part) {
            cur.push_back(part);
            self(self, remaining - part, part);
            cur.pop_back();
        }
    };
    rec(rec, max_sum, max_sum);
    return out;
}

}  // namespace corank
