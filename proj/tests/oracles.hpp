#pragma once

// Independent reference computations used only by the tests. None of these
// call into the algorithms they are used to check.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "cospec/exact_linalg.hpp"
#include "cospec/graph.hpp"

namespace oracle {

using cospec::Integer;
using cospec::IntegerMatrix;
using cospec::IntegerPolynomial;

/// det(xI - M) by Laplace expansion along the first row of a polynomial matrix.
inline IntegerPolynomial cofactor_char_poly(const IntegerMatrix& m) {
    const std::size_t n = m.rows();
    std::vector<std::vector<IntegerPolynomial>> p(n, std::vector<IntegerPolynomial>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<Integer> c{Integer(-m(i, j))};
            if (i == j) c.push_back(1);
            p[i][j] = IntegerPolynomial(c);
        }
    std::function<IntegerPolynomial(const std::vector<std::size_t>&, std::size_t)> det =
        [&](const std::vector<std::size_t>& cols, std::size_t row) -> IntegerPolynomial {
        if (cols.empty()) return IntegerPolynomial({1});
        IntegerPolynomial acc;
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (p[row][cols[k]].is_zero()) continue;
            std::vector<std::size_t> rest = cols;
            rest.erase(rest.begin() + static_cast<long>(k));
            IntegerPolynomial term = p[row][cols[k]] * det(rest, row + 1);
            acc = (k % 2 == 0) ? acc + term : acc - term;
        }
        return acc;
    };
    std::vector<std::size_t> cols(n);
    std::iota(cols.begin(), cols.end(), 0);
    return det(cols, 0);
}

/// Determinant by Laplace expansion.
inline Integer cofactor_det(const IntegerMatrix& m) {
    const std::size_t n = m.rows();
    std::function<Integer(const std::vector<std::size_t>&, const std::vector<std::size_t>&)> det =
        [&](const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) -> Integer {
        if (rows.empty()) return 1;
        Integer acc = 0;
        std::vector<std::size_t> sub_rows(rows.begin() + 1, rows.end());
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (m(rows[0], cols[k]) == 0) continue;
            std::vector<std::size_t> rest = cols;
            rest.erase(rest.begin() + static_cast<long>(k));
            Integer term = m(rows[0], cols[k]) * det(sub_rows, rest);
            if (k % 2) acc -= term;
            else acc += term;
        }
        return acc;
    };
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    return det(idx, idx);
}

inline void subsets(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
    std::vector<std::size_t> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (cur.size() == k) {
            f(cur);
            return;
        }
        for (std::size_t i = start; i < n; ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
}

/// Invariant factors from determinantal divisors: d_k = D_k / D_{k-1},
/// D_k = gcd of all k x k minors (0 past the rank).
inline std::vector<Integer> invariant_factors(const IntegerMatrix& m) {
    const std::size_t r = std::min(m.rows(), m.cols());
    std::vector<Integer> big_d{1};
    for (std::size_t k = 1; k <= r; ++k) {
        Integer g = 0;
        subsets(m.rows(), k, [&](const std::vector<std::size_t>& rs) {
            subsets(m.cols(), k, [&](const std::vector<std::size_t>& cs) {
                IntegerMatrix sub(k, k);
                for (std::size_t a = 0; a < k; ++a)
                    for (std::size_t b = 0; b < k; ++b) sub(a, b) = m(rs[a], cs[b]);
                mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), cofactor_det(sub).get_mpz_t());
            });
        });
        big_d.push_back(g);
    }
    std::vector<Integer> d;
    for (std::size_t k = 1; k <= r; ++k) d.push_back(big_d[k] == 0 ? Integer(0) : Integer(big_d[k] / big_d[k - 1]));
    return d;
}

/// Isomorphism by trying every permutation.
inline bool brute_isomorphic(const cospec::Graph& a, const cospec::Graph& b) {
    if (a.order() != b.order()) return false;
    std::vector<std::size_t> perm(a.order());
    std::iota(perm.begin(), perm.end(), 0);
    do {
        if (a.relabel(perm) == b) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

/// Lexicographically least relabelled adjacency, as a certificate of the isomorphism class.
inline std::vector<std::uint8_t> brute_canonical(const cospec::Graph& g) {
    std::vector<std::size_t> perm(g.order());
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::uint8_t> best;
    do {
        const cospec::Graph h = g.relabel(perm);
        std::vector<std::uint8_t> bits;
        for (std::size_t v = 1; v < g.order(); ++v)
            for (std::size_t u = 0; u < v; ++u) bits.push_back(h.has_edge(u, v) ? 1 : 0);
        if (best.empty() || bits < best) best = bits;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

inline IntegerMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int lo, int hi) {
    std::uniform_int_distribution<int> dist(lo, hi);
    IntegerMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = dist(rng);
    return m;
}

inline cospec::Graph random_graph(std::mt19937_64& rng, std::size_t n) {
    cospec::Graph g(n);
    std::bernoulli_distribution coin(0.5);
    for (std::size_t v = 1; v < n; ++v)
        for (std::size_t u = 0; u < v; ++u)
            if (coin(rng)) g.add_edge(u, v);
    return g;
}

/// Exact-level l orthogonal 2x2 matrices by scanning all integer entries in [-l, l].
inline std::size_t brute_count_2x2(std::int64_t l) {
    std::size_t count = 0;
    for (std::int64_t a = -l; a <= l; ++a)
        for (std::int64_t b = -l; b <= l; ++b)
            for (std::int64_t c = -l; c <= l; ++c)
                for (std::int64_t d = -l; d <= l; ++d) {
                    // columns (a, c) and (b, d)
                    if (a * a + c * c != l * l || b * b + d * d != l * l || a * b + c * d != 0) continue;
                    if (std::gcd(std::gcd(std::gcd(std::gcd(l, a), b), c), d) != 1) continue;
                    ++count;
                }
    return count;
}

/// Orthogonal Q = C / l with C integral: every integer vector in [-l, l]^n of
/// squared norm l^2 is tried in every column, with no pruning beyond pairwise
/// orthogonality. exact_level keeps only gcd(l, entries) = 1.
inline std::size_t brute_count_orthogonal(std::size_t n, std::int64_t l, bool exact_level) {
    std::vector<std::vector<std::int64_t>> vecs;
    std::vector<std::int64_t> cur(n, -l);
    for (;;) {
        std::int64_t norm = 0;
        for (auto x : cur) norm += x * x;
        if (norm == l * l) vecs.push_back(cur);
        std::size_t k = 0;
        while (k < n && cur[k] == l) cur[k++] = -l;
        if (k == n) break;
        ++cur[k];
    }
    std::size_t count = 0;
    std::vector<std::size_t> cols;
    std::function<void()> rec = [&] {
        if (cols.size() == n) {
            std::int64_t g = l;
            for (auto c : cols)
                for (auto x : vecs[c]) g = std::gcd(g, x);
            if (!exact_level || g == 1) ++count;
            return;
        }
        for (std::size_t c = 0; c < vecs.size(); ++c) {
            bool ok = true;
            for (auto d : cols) {
                std::int64_t dot = 0;
                for (std::size_t i = 0; i < n; ++i) dot += vecs[c][i] * vecs[d][i];
                if (dot != 0) ok = false;
            }
            if (!ok) continue;
            cols.push_back(c);
            rec();
            cols.pop_back();
        }
    };
    rec();
    return count;
}

} // namespace oracle
