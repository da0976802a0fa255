#pragma once

// Rational orthogonal matrices: levels, exhaustive enumeration at a fixed
// level, the canonical block form diag(Q_s, I) and the counting bounds used
// to size the search space.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "exact_linalg.hpp"

namespace cospec {

/// Least positive l with l*M integral.
inline Integer level(const RationalMatrix& m) { return common_denominator(m); }

/// A rational matrix Q with Q^T Q = I, together with its level.
class RationalOrthogonalMatrix {
public:
    RationalOrthogonalMatrix() = default;

    /// Verifies orthogonality exactly.
    explicit RationalOrthogonalMatrix(RationalMatrix q) : q_(std::move(q)) {
        if (!q_.is_square()) throw DimensionError("orthogonal matrix must be square");
        if (q_.transpose() * q_ != RationalMatrix::identity(q_.rows()))
            throw PreconditionError("matrix is not orthogonal");
        level_ = cospec::level(q_);
    }

    /// Q = numerators / denom, trusted to be orthogonal (used by the enumerator).
    static RationalOrthogonalMatrix from_scaled_unchecked(std::size_t n, const std::vector<std::int64_t>& numerators,
                                                          std::int64_t denom) {
        std::vector<Rational> d;
        d.reserve(n * n);
        for (auto x : numerators) d.push_back(make_rational(Integer(static_cast<long>(x)), Integer(static_cast<long>(denom))));
        RationalOrthogonalMatrix r;
        r.q_ = RationalMatrix(n, n, std::move(d));
        r.level_ = cospec::level(r.q_);
        return r;
    }

    static RationalOrthogonalMatrix identity(std::size_t n) { return RationalOrthogonalMatrix(RationalMatrix::identity(n)); }

    const RationalMatrix& matrix() const noexcept { return q_; }
    std::size_t order() const noexcept { return q_.rows(); }
    const Integer& level() const noexcept { return level_; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return q_(r, c); }

    RationalOrthogonalMatrix transpose() const {
        RationalOrthogonalMatrix t;
        t.q_ = q_.transpose();
        t.level_ = level_;
        return t;
    }

    friend RationalOrthogonalMatrix operator*(const RationalOrthogonalMatrix& a, const RationalOrthogonalMatrix& b) {
        RationalOrthogonalMatrix r;
        r.q_ = a.q_ * b.q_;
        r.level_ = cospec::level(r.q_);
        return r;
    }

    friend bool operator==(const RationalOrthogonalMatrix& a, const RationalOrthogonalMatrix& b) { return a.q_ == b.q_; }

private:
    RationalMatrix q_;
    Integer level_ = 1;
};

inline bool is_regular(const RationalOrthogonalMatrix& q) {
    for (std::size_t r = 0; r < q.order(); ++r) {
        Rational sum = 0;
        for (std::size_t c = 0; c < q.order(); ++c) sum += q(r, c);
        if (sum != 1) return false;
    }
    return true;
}

inline bool is_signed_permutation(const RationalOrthogonalMatrix& q) { return q.level() == 1; }

/// Signed permutation matrix with entry signs[j] at (perm[j], j).
inline RationalOrthogonalMatrix signed_permutation(const std::vector<std::size_t>& perm, const std::vector<int>& signs) {
    const std::size_t n = perm.size();
    if (signs.size() != n) throw DimensionError("signed_permutation: perm and signs differ in length");
    RationalMatrix m(n, n);
    for (std::size_t j = 0; j < n; ++j) m(perm[j], j) = signs[j] < 0 ? -1 : 1;
    return RationalOrthogonalMatrix(std::move(m));
}

/// Block diagonal diag(a, b).
inline RationalOrthogonalMatrix direct_sum(const RationalOrthogonalMatrix& a, const RationalOrthogonalMatrix& b) {
    const std::size_t n = a.order() + b.order();
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < a.order(); ++i)
        for (std::size_t j = 0; j < a.order(); ++j) m(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.order(); ++i)
        for (std::size_t j = 0; j < b.order(); ++j) m(a.order() + i, a.order() + j) = b(i, j);
    return RationalOrthogonalMatrix(std::move(m));
}

// ---------------------------------------------------------------------------
// Enumeration

enum class LevelMode { exact, divides };

struct EnumerationOptions {
    /// Emit one representative per orbit of right multiplication by signed permutations.
    bool quotient_signed_perms = false;
    std::size_t max_order = 6;
    std::int64_t max_level = 5;
};

/// Q = numerators / denom with integer numerators; the enumerator's native form.
struct ScaledOrthogonal {
    std::size_t n = 0;
    std::int64_t denom = 1;
    std::int64_t level = 1;
    std::vector<std::int64_t> numerators; // row-major n x n

    std::int64_t at(std::size_t r, std::size_t c) const { return numerators[r * n + c]; }
    RationalOrthogonalMatrix to_rational() const {
        return RationalOrthogonalMatrix::from_scaled_unchecked(n, numerators, denom);
    }
};

/// Integer vectors of length n with squared norm l^2: absolute patterns in
/// colexicographic order, then sign patterns (bit k set = k-th nonzero negative).
inline std::vector<std::vector<std::int64_t>> norm_vectors(std::size_t n, std::int64_t l) {
    const std::int64_t target = l * l;
    std::vector<std::vector<std::int64_t>> patterns;
    std::vector<std::int64_t> cur(n, 0);
    // Colex order: the last coordinate is the most significant.
    std::function<void(std::size_t, std::int64_t)> fill = [&](std::size_t pos, std::int64_t remaining) {
        if (pos == 0) {
            if (remaining == 0) patterns.push_back(cur);
            return;
        }
        for (std::int64_t a = 0; a * a <= remaining; ++a) {
            cur[pos - 1] = a;
            fill(pos - 1, remaining - a * a);
        }
        cur[pos - 1] = 0;
    };
    fill(n, target);
    std::vector<std::vector<std::int64_t>> out;
    for (const auto& p : patterns) {
        std::vector<std::size_t> nz;
        for (std::size_t i = 0; i < n; ++i)
            if (p[i] != 0) nz.push_back(i);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << nz.size()); ++mask) {
            auto v = p;
            for (std::size_t k = 0; k < nz.size(); ++k)
                if (mask >> k & 1) v[nz[k]] = -v[nz[k]];
            out.push_back(std::move(v));
        }
    }
    return out;
}

inline void check_enumeration_guard(std::size_t n, std::int64_t l, const EnumerationOptions& opts) {
    if (l < 1) throw PreconditionError("level must be positive");
    if (n > opts.max_order || l > opts.max_level)
        throw GuardError("orthogonal enumeration guard exceeded (n=" + std::to_string(n) + ", level=" +
                         std::to_string(l) + "; limits n<=" + std::to_string(opts.max_order) +
                         ", level<=" + std::to_string(opts.max_level) + ")");
}

/// Visits every Q = C / l (C integral, pairwise orthogonal columns of squared
/// norm l^2) that passes the level filter, in deterministic order. The visitor
/// returns false to stop early.
inline void for_each_orthogonal(std::size_t n, std::int64_t l, LevelMode mode,
                                const std::function<bool(const ScaledOrthogonal&)>& visit,
                                const EnumerationOptions& opts = {}) {
    check_enumeration_guard(n, l, opts);
    ScaledOrthogonal out;
    out.n = n;
    out.denom = l;
    out.numerators.assign(n * n, 0);
    if (n == 0) {
        if (mode == LevelMode::divides || l == 1) visit(out);
        return;
    }

    const auto cands = norm_vectors(n, l);
    const std::size_t m = cands.size();
    const std::size_t words = (m + 63) / 64;
    // Orthogonality graph on candidates, as bitsets.
    std::vector<std::uint64_t> compat(m * words, 0);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b) {
            std::int64_t dot = 0;
            for (std::size_t i = 0; i < n; ++i) dot += cands[a][i] * cands[b][i];
            if (dot == 0) {
                compat[a * words + b / 64] |= std::uint64_t{1} << (b % 64);
                compat[b * words + a / 64] |= std::uint64_t{1} << (a % 64);
            }
        }
    std::vector<std::uint64_t> start(words, 0);
    for (std::size_t a = 0; a < m; ++a) {
        if (opts.quotient_signed_perms) {
            const auto& v = cands[a];
            auto first = std::find_if(v.begin(), v.end(), [](std::int64_t x) { return x != 0; });
            if (*first < 0) continue;
        }
        start[a / 64] |= std::uint64_t{1} << (a % 64);
    }

    const std::int64_t target = l * l;
    std::vector<std::size_t> chosen(n);
    std::vector<std::int64_t> row_norm(n, 0);
    std::vector<std::vector<std::uint64_t>> avail(n + 1, std::vector<std::uint64_t>(words));
    avail[0] = start;
    bool stop = false;

    std::function<void(std::size_t)> place = [&](std::size_t col) {
        if (stop) return;
        if (col == n) {
            std::int64_t g = l;
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t i = 0; i < n; ++i) g = std::gcd(g, cands[chosen[j]][i]);
            if (mode == LevelMode::exact && g != 1) return;
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t i = 0; i < n; ++i) out.numerators[i * n + j] = cands[chosen[j]][i];
            out.level = l / g;
            if (!visit(out)) stop = true;
            return;
        }
        const auto& cur = avail[col];
        for (std::size_t w = 0; w < words && !stop; ++w) {
            std::uint64_t bits = cur[w];
            while (bits && !stop) {
                const std::size_t a = w * 64 + static_cast<std::size_t>(__builtin_ctzll(bits));
                bits &= bits - 1;
                const auto& v = cands[a];
                bool ok = true;
                for (std::size_t i = 0; i < n && ok; ++i) ok = row_norm[i] + v[i] * v[i] <= target;
                if (!ok) continue;
                for (std::size_t i = 0; i < n; ++i) row_norm[i] += v[i] * v[i];
                chosen[col] = a;
                auto& next = avail[col + 1];
                for (std::size_t k = 0; k < words; ++k) next[k] = cur[k] & compat[a * words + k];
                if (opts.quotient_signed_perms) {
                    // Strictly increasing candidate index: clear everything up to a.
                    for (std::size_t k = 0; k < a / 64; ++k) next[k] = 0;
                    next[a / 64] &= (a % 64 == 63) ? 0 : ~((std::uint64_t{2} << (a % 64)) - 1);
                }
                place(col + 1);
                for (std::size_t i = 0; i < n; ++i) row_norm[i] -= v[i] * v[i];
            }
        }
    };
    place(0);
}

/// Stream of rational orthogonal matrices; see for_each_orthogonal.
inline void enumerate_level(std::size_t n, std::int64_t l, LevelMode mode,
                            const std::function<bool(const RationalOrthogonalMatrix&)>& visit,
                            const EnumerationOptions& opts = {}) {
    for_each_orthogonal(
        n, l, mode, [&](const ScaledOrthogonal& s) { return visit(s.to_rational()); }, opts);
}

inline std::vector<RationalOrthogonalMatrix> collect_level(std::size_t n, std::int64_t l, LevelMode mode,
                                                           const EnumerationOptions& opts = {}) {
    std::vector<RationalOrthogonalMatrix> out;
    enumerate_level(
        n, l, mode,
        [&](const RationalOrthogonalMatrix& q) {
            out.push_back(q);
            return true;
        },
        opts);
    return out;
}

inline std::uint64_t count_level(std::size_t n, std::int64_t l, LevelMode mode, const EnumerationOptions& opts = {}) {
    std::uint64_t count = 0;
    for_each_orthogonal(
        n, l, mode,
        [&](const ScaledOrthogonal&) {
            ++count;
            return true;
        },
        opts);
    return count;
}

// ---------------------------------------------------------------------------
// Counting bounds

/// (2n)^{l^2 n}: the number of orthogonal matrices with level dividing l is at most this.
inline Integer count_bound(std::size_t n, unsigned long l) {
    Integer out;
    mpz_ui_pow_ui(out.get_mpz_t(), 2 * static_cast<unsigned long>(n), l * l * static_cast<unsigned long>(n));
    return out;
}

struct PairCountBound {
    Integer falling_square; // (n (n-1) ... (n-s+1))^2
    Integer majorant;       // n^{2s}
};

/// Number of row/column permutation pairs that can move a fractional block into the leading corner.
inline PairCountBound pair_count_bound(std::size_t n, std::size_t s) {
    if (s > n) throw PreconditionError("pair_count_bound: s exceeds n");
    Integer falling = 1;
    for (std::size_t k = 0; k < s; ++k) falling *= static_cast<unsigned long>(n - k);
    PairCountBound b;
    b.falling_square = falling * falling;
    mpz_ui_pow_ui(b.majorant.get_mpz_t(), static_cast<unsigned long>(n), 2 * static_cast<unsigned long>(s));
    return b;
}

// ---------------------------------------------------------------------------
// Canonical form

/// A row or column is fractional when it holds an entry outside {0, 1, -1}.
struct FractionalIndexSets {
    std::vector<std::size_t> FRI, FCI, IRI, ICI; // 0-based, ascending
};

inline bool is_fractional_entry(const Rational& x) { return x.get_den() != 1; }

inline FractionalIndexSets fractional_index_sets(const RationalOrthogonalMatrix& q) {
    const std::size_t n = q.order();
    FractionalIndexSets sets;
    for (std::size_t i = 0; i < n; ++i) {
        bool row = false, col = false;
        for (std::size_t j = 0; j < n; ++j) {
            row = row || is_fractional_entry(q(i, j));
            col = col || is_fractional_entry(q(j, i));
        }
        (row ? sets.FRI : sets.IRI).push_back(i);
        (col ? sets.FCI : sets.ICI).push_back(i);
    }
    if (sets.FRI.size() != sets.FCI.size())
        throw ClaimViolation("fractional row and column counts differ (" + std::to_string(sets.FRI.size()) + " vs " +
                             std::to_string(sets.FCI.size()) + ")");
    return sets;
}

/// P_R^T Q P_C = diag(Q_s, I_{n-s}) with P_R a permutation and P_C a signed permutation.
struct CanonicalForm {
    IntegerMatrix P_R;
    IntegerMatrix P_C;
    std::size_t s = 0;
    RationalOrthogonalMatrix Q_s;
    std::vector<std::size_t> row_order; // row_order[a] = row of Q placed at position a
    std::vector<std::size_t> col_order; // col_order[b] = column of Q placed at position b
    std::vector<int> col_signs;         // sign applied to column b

    std::size_t order() const noexcept { return row_order.size(); }

    /// diag(Q_s, I_{n-s}), the member of CAN(n, l; s) this form exhibits.
    RationalOrthogonalMatrix block() const {
        return direct_sum(Q_s, RationalOrthogonalMatrix::identity(order() - s));
    }

    /// P_R diag(Q_s, I) P_C^T, which must equal the original matrix.
    RationalMatrix reconstruct() const { return to_rational(P_R) * block().matrix() * to_rational(P_C).transpose(); }
};

inline CanonicalForm canonical_form(const RationalOrthogonalMatrix& q) {
    const std::size_t n = q.order();
    const FractionalIndexSets sets = fractional_index_sets(q);
    CanonicalForm cf;
    cf.s = sets.FRI.size();
    cf.row_order = sets.FRI;
    cf.row_order.insert(cf.row_order.end(), sets.IRI.begin(), sets.IRI.end());
    cf.col_order = sets.FCI;
    cf.col_signs.assign(cf.s, 1);
    // Each integral row is a signed unit vector; pair it with its column so the tail becomes +I.
    for (std::size_t r : sets.IRI) {
        std::size_t hit = n;
        for (std::size_t j = 0; j < n; ++j)
            if (q(r, j) != 0) {
                if (hit != n) throw ClaimViolation("integral row with more than one nonzero entry");
                hit = j;
            }
        if (hit == n || (q(r, hit) != 1 && q(r, hit) != -1))
            throw ClaimViolation("integral row is not a signed unit vector");
        cf.col_order.push_back(hit);
        cf.col_signs.push_back(q(r, hit) < 0 ? -1 : 1);
    }
    cf.P_R = IntegerMatrix(n, n);
    cf.P_C = IntegerMatrix(n, n);
    for (std::size_t a = 0; a < n; ++a) {
        cf.P_R(cf.row_order[a], a) = 1;
        cf.P_C(cf.col_order[a], a) = cf.col_signs[a];
    }
    RationalMatrix qs(cf.s, cf.s);
    for (std::size_t a = 0; a < cf.s; ++a)
        for (std::size_t b = 0; b < cf.s; ++b) qs(a, b) = q(cf.row_order[a], cf.col_order[b]);
    cf.Q_s = RationalOrthogonalMatrix(std::move(qs));
    return cf;
}

/// True iff q = diag(Q_s, I_{n-s}) with Q_s free of +-1 entries.
inline bool is_in_can(const RationalOrthogonalMatrix& q, std::size_t s) {
    const std::size_t n = q.order();
    if (s > n || s == 1) return false;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const Rational& x = q(i, j);
            if (i < s && j < s) {
                if (x == 1 || x == -1) return false;
            } else if (x != (i == j ? 1 : 0)) {
                return false;
            }
        }
    return true;
}

/// True iff q = diag(Q_s, P) with Q_s free of +-1 entries and P a signed permutation.
inline bool is_in_scan(const RationalOrthogonalMatrix& q, std::size_t s) {
    const std::size_t n = q.order();
    if (s > n || s == 1) return false;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const Rational& x = q(i, j);
            const bool lead_row = i < s, lead_col = j < s;
            if (lead_row && lead_col) {
                if (x == 1 || x == -1) return false;
            } else if (lead_row != lead_col) {
                if (x != 0) return false;
            } else if (x.get_den() != 1) {
                return false;
            }
        }
    return true;
}

/// Q' = Q S for a signed permutation S such that P_R^T Q' P_C lies in CAN,
/// where P_R, P_C are the sign-free permutations ordering the fractional
/// rows and columns first. Returns {Q', S}.
inline std::pair<RationalOrthogonalMatrix, RationalOrthogonalMatrix> can_representative(const RationalOrthogonalMatrix& q) {
    const std::size_t n = q.order();
    const FractionalIndexSets sets = fractional_index_sets(q);
    // S maps the tail so that column ICI[k] is replaced by the signed unit column
    // matching integral row IRI[k]: Q' = Q S has Q'(IRI[k], ICI[k]) = 1.
    std::vector<std::size_t> perm(n);
    std::vector<int> signs(n, 1);
    for (std::size_t c : sets.FCI) perm[c] = c;
    for (std::size_t k = 0; k < sets.IRI.size(); ++k) {
        const std::size_t r = sets.IRI[k];
        std::size_t hit = 0;
        while (q(r, hit) == 0) ++hit;
        // column ICI[k] of Q' = sign * column hit of Q
        perm[sets.ICI[k]] = hit;
        signs[sets.ICI[k]] = q(r, hit) < 0 ? -1 : 1;
    }
    // S(perm[j], j) = signs[j] gives (Q S)(:, j) = signs[j] * Q(:, perm[j]).
    RationalOrthogonalMatrix s = signed_permutation(perm, signs);
    return {q * s, s};
}


/// Scaled form of q with denominator level(q); throws if an entry leaves int64.
inline ScaledOrthogonal to_scaled(const RationalOrthogonalMatrix& q) {
    auto [c, d] = clear_denominators(q.matrix());
    if (!d.fits_slong_p()) throw DimensionError("to_scaled: level does not fit in 64 bits");
    ScaledOrthogonal out;
    out.n = q.order();
    out.denom = d.get_si();
    out.level = out.denom;
    out.numerators.reserve(out.n * out.n);
    for (const auto& x : c.data()) {
        if (!x.fits_slong_p()) throw DimensionError("to_scaled: entry does not fit in 64 bits");
        out.numerators.push_back(x.get_si());
    }
    return out;
}

/// Integer-only counterpart of canonical_form: returns diag(Q_s, I_{n-s}) over
/// the same denominator, and s. Fractional means "not divisible by denom".
inline std::pair<ScaledOrthogonal, std::size_t> canonical_block(const ScaledOrthogonal& q) {
    const std::size_t n = q.n;
    const std::int64_t d = q.denom;
    std::vector<std::size_t> rows, cols, int_rows;
    for (std::size_t i = 0; i < n; ++i) {
        bool row = false, col = false;
        for (std::size_t j = 0; j < n; ++j) {
            row = row || q.at(i, j) % d != 0;
            col = col || q.at(j, i) % d != 0;
        }
        if (row) rows.push_back(i);
        else int_rows.push_back(i);
        if (col) cols.push_back(i);
    }
    if (rows.size() != cols.size()) throw ClaimViolation("fractional row and column counts differ");
    const std::size_t s = rows.size();
    ScaledOrthogonal out;
    out.n = n;
    out.denom = d;
    out.level = q.level;
    out.numerators.assign(n * n, 0);
    for (std::size_t a = 0; a < s; ++a)
        for (std::size_t b = 0; b < s; ++b) out.numerators[a * n + b] = q.at(rows[a], cols[b]);
    for (std::size_t k = s; k < n; ++k) out.numerators[k * n + k] = d;
    return {std::move(out), s};
}

} // namespace cospec
