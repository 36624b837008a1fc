#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "corank/parallel.hpp"
#include "corank/pgroup.hpp"
#include "corank/rng.hpp"

namespace corank {

/// F_{p^k} described by p, k and a monic irreducible modulus of degree k.
/// When no modulus is given, the deterministic default is the irreducible
/// monic polynomial whose non-leading coefficient vector, read as the
/// integer sum c_i p^i, is smallest.
struct FieldSpec {
    long p;
    unsigned k;
    std::vector<unsigned> modulus;  // c_0..c_{k-1}; leading 1 implicit

    FieldSpec(long p_, unsigned k_, std::vector<unsigned> mod = {})
        : p(p_), k(k_), modulus(std::move(mod)) {
        if (!is_small_prime(p)) throw std::domain_error("field characteristic must be prime");
        if (k < 1) throw std::domain_error("extension degree must be >= 1");
        double size = std::pow(double(p), double(k));
        if (size > 512) throw std::domain_error("field size capped at 512");
    }

    std::uint32_t size() const {
        std::uint32_t s = 1;
        for (unsigned i = 0; i < k; ++i) s *= static_cast<std::uint32_t>(p);
        return s;
    }
    std::string str() const {
        return "F_" + std::to_string(p) + (k > 1 ? "^" + std::to_string(k) : "");
    }
};

namespace detail {

// polynomial remainder over F_p; coefficient vectors, low degree first
inline std::vector<unsigned> poly_rem(std::vector<unsigned> a,
                                      const std::vector<unsigned>& b, long p) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    size_t db = b.size() - 1;  // b monic
    while (a.size() > db) {
        unsigned lead = a.back();
        size_t shift = a.size() - 1 - db;
        for (size_t i = 0; i <= db; ++i) {
            long v = long(a[shift + i]) - long(lead) * long(b[i]);
            a[shift + i] = static_cast<unsigned>(((v % p) + p) % p);
        }
        while (!a.empty() && a.back() == 0) a.pop_back();
    }
    return a;
}

inline bool poly_irreducible(const std::vector<unsigned>& f, long p) {
    size_t k = f.size() - 1;
    // try all monic divisors of degree 1..k/2
    for (size_t d = 1; 2 * d <= k; ++d) {
        std::uint64_t count = 1;
        for (size_t i = 0; i < d; ++i) count *= static_cast<std::uint64_t>(p);
        for (std::uint64_t c = 0; c < count; ++c) {
            std::vector<unsigned> g(d + 1);
            std::uint64_t t = c;
            for (size_t i = 0; i < d; ++i) {
                g[i] = static_cast<unsigned>(t % p);
                t /= p;
            }
            g[d] = 1;
            if (poly_rem(f, g, p).empty()) return false;
        }
    }
    return true;
}

}  // namespace detail

/// Concrete field with dense operation tables. Elements are indices in
/// [0, p^k) encoding the coefficient vector in base p.
class Field {
    long p_;
    unsigned k_;
    std::uint32_t size_;
    std::vector<unsigned> mod_;  // full vector incl. leading 1
    std::vector<std::uint32_t> add_, mul_, neg_, inv_, conj_;
    std::vector<std::uint32_t> conj_fixed_;  // subfield, when k even

    std::vector<unsigned> decode(std::uint32_t x) const {
        std::vector<unsigned> c(k_);
        for (unsigned i = 0; i < k_; ++i) {
            c[i] = static_cast<unsigned>(x % p_);
            x /= static_cast<std::uint32_t>(p_);
        }
        return c;
    }
    std::uint32_t encode(const std::vector<unsigned>& c) const {
        std::uint32_t x = 0;
        for (unsigned i = k_; i-- > 0;)
            x = x * static_cast<std::uint32_t>(p_) + (i < c.size() ? c[i] : 0);
        return x;
    }

  public:
    explicit Field(const FieldSpec& spec) : p_(spec.p), k_(spec.k), size_(spec.size()) {
        if (spec.modulus.empty()) {
            for (std::uint32_t c = 0;; ++c) {
                if (c >= size_) throw std::logic_error("no irreducible polynomial found");
                std::vector<unsigned> f = decode(c);
                f.push_back(1);
                if (detail::poly_irreducible(f, p_)) {
                    mod_ = f;
                    break;
                }
            }
        } else {
            if (spec.modulus.size() != k_)
                throw std::domain_error("modulus must have degree k");
            mod_ = spec.modulus;
            mod_.push_back(1);
            if (!detail::poly_irreducible(mod_, p_))
                throw std::domain_error("modulus is reducible");
        }

        add_.resize(std::size_t(size_) * size_);
        mul_.resize(std::size_t(size_) * size_);
        neg_.resize(size_);
        inv_.resize(size_);
        for (std::uint32_t a = 0; a < size_; ++a) {
            auto ca = decode(a);
            std::vector<unsigned> cn(k_);
            for (unsigned i = 0; i < k_; ++i)
                cn[i] = static_cast<unsigned>((p_ - long(ca[i])) % p_);
            neg_[a] = encode(cn);
            for (std::uint32_t b = 0; b < size_; ++b) {
                auto cb = decode(b);
                std::vector<unsigned> cs(k_);
                for (unsigned i = 0; i < k_; ++i)
                    cs[i] = static_cast<unsigned>((ca[i] + cb[i]) % p_);
                add_[std::size_t(a) * size_ + b] = encode(cs);
                std::vector<unsigned> prod(2 * k_ - 1, 0);
                for (unsigned i = 0; i < k_; ++i)
                    for (unsigned j = 0; j < k_; ++j)
                        prod[i + j] = static_cast<unsigned>(
                            (prod[i + j] + ca[i] * cb[j]) % p_);
                mul_[std::size_t(a) * size_ + b] = encode(detail::poly_rem(prod, mod_, p_));
            }
        }
        for (std::uint32_t a = 1; a < size_; ++a)
            for (std::uint32_t b = 1; b < size_; ++b)
                if (mul(a, b) == 1) {
                    inv_[a] = b;
                    break;
                }

        if (k_ % 2 == 0) {
            conj_.resize(size_);
            for (std::uint32_t a = 0; a < size_; ++a) {
                std::uint32_t x = a;
                // x -> x^{p^{k/2}} by k/2 Frobenius steps
                for (unsigned s = 0; s < k_ / 2; ++s) {
                    std::uint32_t y = 1;
                    for (long e = 0; e < p_; ++e) y = mul(y, x);
                    x = y;
                }
                conj_[a] = x;
                if (x == a) conj_fixed_.push_back(a);
            }
        }
    }

    long p() const { return p_; }
    unsigned k() const { return k_; }
    std::uint32_t size() const { return size_; }
    const std::vector<unsigned>& modulus() const { return mod_; }

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
        return add_[std::size_t(a) * size_ + b];
    }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
        return mul_[std::size_t(a) * size_ + b];
    }
    std::uint32_t neg(std::uint32_t a) const { return neg_[a]; }
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }
    std::uint32_t inv(std::uint32_t a) const {
        if (a == 0) throw std::domain_error("inverse of zero");
        return inv_[a];
    }
    bool has_conj() const { return k_ % 2 == 0; }
    std::uint32_t conj(std::uint32_t a) const {
        if (!has_conj()) throw std::domain_error("conjugation needs even extension degree");
        return conj_[a];
    }
    const std::vector<std::uint32_t>& conj_fixed() const { return conj_fixed_; }
};

enum class EnsembleKind { Uniform, Symmetric, Alternating, Hermitian, SkewCentrosymmetric };

inline std::string ensemble_kind_name(EnsembleKind k) {
    switch (k) {
        case EnsembleKind::Uniform: return "uniform";
        case EnsembleKind::Symmetric: return "symmetric";
        case EnsembleKind::Alternating: return "alternating";
        case EnsembleKind::Hermitian: return "hermitian";
        case EnsembleKind::SkewCentrosymmetric: return "skew-centrosymmetric";
    }
    return "?";
}

struct EnsembleSpec {
    EnsembleKind kind;
    unsigned n;
    unsigned m;  // Uniform only: shape n x (n+m)
    FieldSpec field;

    EnsembleSpec(EnsembleKind kind_, unsigned n_, FieldSpec field_, unsigned m_ = 0)
        : kind(kind_), n(n_), m(m_), field(std::move(field_)) {
        if (n < 1) throw std::domain_error("matrix size must be >= 1");
        if (kind != EnsembleKind::Uniform && m != 0)
            throw std::domain_error("m is only meaningful for the uniform ensemble");
        if (kind == EnsembleKind::Hermitian && field.k % 2 != 0)
            throw std::domain_error("hermitian ensemble needs an even extension degree");
        if (kind == EnsembleKind::SkewCentrosymmetric && field.p == 2)
            throw std::domain_error("skew centrosymmetric ensemble needs odd characteristic");
    }

    unsigned rows() const { return n; }
    unsigned cols() const { return kind == EnsembleKind::Uniform ? n + m : n; }
    std::string str() const {
        std::string s = ensemble_kind_name(kind) + "(" + std::to_string(rows()) + "x" +
                        std::to_string(cols()) + ", " + field.str() + ")";
        return s;
    }
};

struct FMatrix {
    unsigned rows, cols;
    std::vector<std::uint32_t> e;  // row-major

    FMatrix(unsigned r, unsigned c) : rows(r), cols(c), e(std::size_t(r) * c, 0) {}
    std::uint32_t& at(unsigned i, unsigned j) { return e[std::size_t(i) * cols + j]; }
    std::uint32_t at(unsigned i, unsigned j) const { return e[std::size_t(i) * cols + j]; }

    FMatrix transposed() const {
        FMatrix t(cols, rows);
        for (unsigned i = 0; i < rows; ++i)
            for (unsigned j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
        return t;
    }
};

namespace detail {

// Signed orbit structure of the skew centrosymmetric constraints
//   M[j][i] = -M[i][j],  M[n+1-j][n+1-i] = M[i][j]  (1-based indices).
// Cells are grouped into orbits with signs relative to a representative; an
// orbit whose relations force v = -v is pinned to zero (odd characteristic).
struct ScsOrbits {
    struct Cell {
        std::uint32_t orbit;
        int sign;  // value = sign * representative
    };
    std::vector<Cell> cells;
    std::vector<char> forced_zero;
    unsigned free_count = 0;

    explicit ScsOrbits(unsigned n) {
        std::vector<std::uint32_t> parent(n * n);
        std::vector<int> sgn(n * n, 1);  // sign relative to parent
        for (std::uint32_t i = 0; i < n * n; ++i) parent[i] = i;
        std::vector<char> bad(n * n, 0);

        auto find = [&](std::uint32_t x) {
            int s = 1;
            while (parent[x] != x) {
                s *= sgn[x];
                x = parent[x];
            }
            return std::pair<std::uint32_t, int>(x, s);
        };
        auto relate = [&](std::uint32_t a, std::uint32_t b, int s) {
            // value(a) = s * value(b)
            auto [ra, sa] = find(a);
            auto [rb, sb] = find(b);
            if (ra == rb) {
                if (sa != s * sb) bad[ra] = 1;
                return;
            }
            parent[ra] = rb;
            sgn[ra] = sa * s * sb;
        };
        auto idx = [n](unsigned i, unsigned j) { return i * n + j; };
        for (unsigned i = 0; i < n; ++i)
            for (unsigned j = 0; j < n; ++j) {
                relate(idx(j, i), idx(i, j), -1);
                relate(idx(n - 1 - j, n - 1 - i), idx(i, j), +1);
            }
        // propagate contradictions to roots, then number free orbits
        std::map<std::uint32_t, std::uint32_t> root_id;
        cells.resize(n * n);
        for (std::uint32_t c = 0; c < n * n; ++c) {
            auto [r, s] = find(c);
            if (bad[c]) bad[r] = 1;
            (void)s;
        }
        for (std::uint32_t c = 0; c < n * n; ++c) {
            auto [r, s] = find(c);
            auto it = root_id.find(r);
            std::uint32_t id;
            if (it == root_id.end()) {
                id = static_cast<std::uint32_t>(root_id.size());
                root_id.emplace(r, id);
                forced_zero.push_back(bad[r]);
            } else {
                id = it->second;
            }
            cells[c] = {id, s};
        }
        for (char z : forced_zero)
            if (!z) ++free_count;
    }
};

}  // namespace detail

/// Draws one matrix uniformly from the ensemble: free coordinates are i.i.d.
/// uniform over the field, constrained ones derived.
inline FMatrix sample(const EnsembleSpec& spec, const Field& F, TrialRng& rng) {
    const unsigned n = spec.n;
    FMatrix M(spec.rows(), spec.cols());
    auto draw = [&] { return static_cast<std::uint32_t>(rng.below(F.size())); };
    switch (spec.kind) {
        case EnsembleKind::Uniform:
            for (auto& x : M.e) x = draw();
            break;
        case EnsembleKind::Symmetric:
            for (unsigned i = 0; i < n; ++i)
                for (unsigned j = i; j < n; ++j) M.at(i, j) = M.at(j, i) = draw();
            break;
        case EnsembleKind::Alternating:
            for (unsigned i = 0; i < n; ++i)
                for (unsigned j = i + 1; j < n; ++j) {
                    std::uint32_t x = draw();
                    M.at(i, j) = x;
                    M.at(j, i) = F.neg(x);
                }
            break;
        case EnsembleKind::Hermitian: {
            const auto& fixed = F.conj_fixed();
            for (unsigned i = 0; i < n; ++i)
                M.at(i, i) = fixed[rng.below(fixed.size())];
            for (unsigned i = 0; i < n; ++i)
                for (unsigned j = i + 1; j < n; ++j) {
                    std::uint32_t x = draw();
                    M.at(i, j) = x;
                    M.at(j, i) = F.conj(x);
                }
            break;
        }
        case EnsembleKind::SkewCentrosymmetric: {
            static thread_local std::map<unsigned, detail::ScsOrbits> cache;
            auto it = cache.find(n);
            if (it == cache.end()) it = cache.emplace(n, detail::ScsOrbits(n)).first;
            const auto& orbits = it->second;
            std::vector<std::uint32_t> rep(orbits.forced_zero.size(), 0);
            for (std::size_t o = 0; o < rep.size(); ++o)
                if (!orbits.forced_zero[o]) rep[o] = draw();
            for (unsigned i = 0; i < n; ++i)
                for (unsigned j = 0; j < n; ++j) {
                    auto cell = orbits.cells[i * n + j];
                    std::uint32_t v = rep[cell.orbit];
                    M.at(i, j) = cell.sign == 1 ? v : F.neg(v);
                }
            // guards against orbit-enumeration bugs
            for (unsigned i = 0; i < n; ++i)
                for (unsigned j = 0; j < n; ++j) {
                    if (M.at(j, i) != F.neg(M.at(i, j)) ||
                        M.at(n - 1 - j, n - 1 - i) != M.at(i, j))
                        throw std::logic_error("scs constraint violated");
                }
            break;
        }
    }
    return M;
}

/// Row-reduction rank over the field.
inline unsigned rank(FMatrix M, const Field& F) {
    unsigned r = 0;
    for (unsigned col = 0; col < M.cols && r < M.rows; ++col) {
        unsigned pivot = r;
        while (pivot < M.rows && M.at(pivot, col) == 0) ++pivot;
        if (pivot == M.rows) continue;
        if (pivot != r)
            for (unsigned j = col; j < M.cols; ++j)
                std::swap(M.at(pivot, j), M.at(r, j));
        std::uint32_t piv_inv = F.inv(M.at(r, col));
        for (unsigned i = r + 1; i < M.rows; ++i) {
            std::uint32_t f = F.mul(M.at(i, col), piv_inv);
            if (f == 0) continue;
            for (unsigned j = col; j < M.cols; ++j)
                M.at(i, j) = F.sub(M.at(i, j), F.mul(f, M.at(r, j)));
        }
        ++r;
    }
    return r;
}

inline unsigned corank(const FMatrix& M, const Field& F) { return M.rows - rank(M, F); }

struct CorankHist {
    std::map<unsigned, std::uint64_t> counts;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    EnsembleSpec ensemble;

    CorankHist(EnsembleSpec e) : ensemble(std::move(e)) {}
};

/// Monte Carlo corank histogram; reproducible given the seed, and identical
/// for any worker count (per-trial counter-based substreams).
inline CorankHist corank_hist(const EnsembleSpec& spec, std::uint64_t trials,
                              std::uint64_t seed, unsigned workers = 1) {
    if (trials < 1) throw std::domain_error("trials must be >= 1");
    Field F(spec.field);
    CorankHist hist(spec);
    hist.trials = trials;
    hist.seed = seed;
    std::vector<std::vector<std::uint64_t>> partial(
        std::max(1u, workers), std::vector<std::uint64_t>(spec.rows() + 1, 0));
    parallel_ranges(trials, workers, [&](unsigned w, std::uint64_t b, std::uint64_t e) {
        auto& local = partial[w];
        for (std::uint64_t t = b; t < e; ++t) {
            TrialRng rng(seed, t);
            FMatrix M = sample(spec, F, rng);
            local[corank(M, F)] += 1;
        }
    });
    for (const auto& local : partial)
        for (unsigned c = 0; c <= spec.rows(); ++c)
            if (local[c]) hist.counts[c] += local[c];
    return hist;
}

}  // namespace corank
