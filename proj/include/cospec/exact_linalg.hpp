#pragma once

// Dense exact matrices over Z and Q backed by GMP, with the handful of
// algorithms the rest of the library needs: characteristic polynomials,
// Smith normal form, exact rank and rational conjugation.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace cospec {

using Integer = mpz_class;
using Rational = mpq_class;

/// Builds num/den in lowest terms with a positive denominator.
inline Rational make_rational(const Integer& num, const Integer& den = 1) {
    if (den == 0) throw PreconditionError("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/// Dense row-major matrix. Values are plain data; every operation returns a new matrix.
template <typename T>
class Matrix {
public:
    using value_type = T;

    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_) throw DimensionError("entry count does not match rows*cols");
    }
    Matrix(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = init.size();
        cols_ = rows_ == 0 ? 0 : init.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw DimensionError("ragged matrix initializer");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    const std::vector<T>& data() const noexcept { return data_; }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw DimensionError("matrix product: inner dimensions differ");
        Matrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
            }
        return out;
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionError("matrix sum: shapes differ");
        Matrix out = a;
        for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] += b.data_[i];
        return out;
    }

    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionError("matrix difference: shapes differ");
        Matrix out = a;
        for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] -= b.data_[i];
        return out;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    friend std::ostream& operator<<(std::ostream& os, const Matrix& m) {
        os << '[';
        for (std::size_t r = 0; r < m.rows_; ++r) {
            os << (r ? ",[" : "[");
            for (std::size_t c = 0; c < m.cols_; ++c) os << (c ? "," : "") << m(r, c);
            os << ']';
        }
        return os << ']';
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using IntegerMatrix = Matrix<Integer>;
using RationalMatrix = Matrix<Rational>;

inline RationalMatrix to_rational(const IntegerMatrix& m) {
    std::vector<Rational> d;
    d.reserve(m.data().size());
    for (const auto& x : m.data()) d.emplace_back(x);
    return RationalMatrix(m.rows(), m.cols(), std::move(d));
}

/// Least common multiple of all entry denominators.
inline Integer common_denominator(const RationalMatrix& m) {
    Integer l = 1;
    for (const auto& x : m.data()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    return l;
}

/// Returns (C, d) with m = C / d and d = common_denominator(m).
inline std::pair<IntegerMatrix, Integer> clear_denominators(const RationalMatrix& m) {
    Integer d = common_denominator(m);
    std::vector<Integer> c;
    c.reserve(m.data().size());
    for (const auto& x : m.data()) c.emplace_back(x.get_num() * (d / x.get_den()));
    return {IntegerMatrix(m.rows(), m.cols(), std::move(c)), d};
}

/// Exact polynomial with integer coefficients stored lowest degree first.
class IntegerPolynomial {
public:
    IntegerPolynomial() = default;
    explicit IntegerPolynomial(std::vector<Integer> coeffs) : coeffs_(std::move(coeffs)) { trim(); }
    IntegerPolynomial(std::initializer_list<long> coeffs) {
        for (long c : coeffs) coeffs_.emplace_back(c);
        trim();
    }

    bool is_zero() const noexcept { return coeffs_.empty(); }
    /// Degree of the zero polynomial is reported as 0.
    std::size_t degree() const noexcept { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
    const std::vector<Integer>& coefficients() const noexcept { return coeffs_; }
    Integer coefficient(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Integer(0); }
    bool is_monic() const { return !coeffs_.empty() && coeffs_.back() == 1; }

    friend bool operator==(const IntegerPolynomial&, const IntegerPolynomial&) = default;

    friend bool operator<(const IntegerPolynomial& a, const IntegerPolynomial& b) {
        if (a.coeffs_.size() != b.coeffs_.size()) return a.coeffs_.size() < b.coeffs_.size();
        return std::lexicographical_compare(a.coeffs_.begin(), a.coeffs_.end(), b.coeffs_.begin(),
                                            b.coeffs_.end());
    }

    friend IntegerPolynomial operator+(const IntegerPolynomial& a, const IntegerPolynomial& b) {
        std::vector<Integer> c(std::max(a.coeffs_.size(), b.coeffs_.size()), Integer(0));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
        for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
        return IntegerPolynomial(std::move(c));
    }

    friend IntegerPolynomial operator-(const IntegerPolynomial& a, const IntegerPolynomial& b) {
        std::vector<Integer> c(std::max(a.coeffs_.size(), b.coeffs_.size()), Integer(0));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
        for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] -= b.coeffs_[i];
        return IntegerPolynomial(std::move(c));
    }

    friend IntegerPolynomial operator*(const IntegerPolynomial& a, const IntegerPolynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Integer> c(a.coeffs_.size() + b.coeffs_.size() - 1, Integer(0));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return IntegerPolynomial(std::move(c));
    }

    /// Human-readable form, highest degree first, e.g. "x^4 - 4x^2".
    std::string to_string() const {
        if (coeffs_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (std::size_t k = coeffs_.size(); k-- > 0;) {
            const Integer& c = coeffs_[k];
            if (c == 0) continue;
            Integer mag = abs(c);
            if (first) {
                if (c < 0) os << '-';
            } else {
                os << (c < 0 ? " - " : " + ");
            }
            if (mag != 1 || k == 0) os << mag;
            if (k >= 1) os << 'x';
            if (k >= 2) os << '^' << k;
            first = false;
        }
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const IntegerPolynomial& p) { return os << p.to_string(); }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }

    std::vector<Integer> coeffs_;
};

/// det(xI - M) by the Faddeev-LeVerrier recurrence. Every division is exact over Z.
inline IntegerPolynomial char_poly(const IntegerMatrix& m) {
    if (!m.is_square()) throw DimensionError("char_poly: matrix is not square");
    const std::size_t n = m.rows();
    std::vector<Integer> c(n + 1, Integer(0));
    c[n] = 1;
    if (n == 0) return IntegerPolynomial(std::move(c));

    // aux holds M_k; the recurrence is M_1 = I, M_k = A M_{k-1} + c_{n-k+1} I,
    // c_{n-k} = -tr(A M_k) / k.
    IntegerMatrix aux = IntegerMatrix::identity(n);
    for (std::size_t k = 1; k <= n; ++k) {
        IntegerMatrix am = m * aux;
        Integer tr = 0;
        for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
        Integer coeff = -tr;
        mpz_divexact_ui(coeff.get_mpz_t(), coeff.get_mpz_t(), static_cast<unsigned long>(k));
        c[n - k] = coeff;
        if (k < n) {
            for (std::size_t i = 0; i < n; ++i) am(i, i) += coeff;
            aux = std::move(am);
        }
    }
    return IntegerPolynomial(std::move(c));
}

/// Fraction-free (Bareiss) determinant.
inline Integer determinant(const IntegerMatrix& m) {
    if (!m.is_square()) throw DimensionError("determinant: matrix is not square");
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    IntegerMatrix a = m;
    Integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t swap = k + 1;
            while (swap < n && a(swap, k) == 0) ++swap;
            if (swap == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(swap, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Integer v = a(i, j) * a(k, k) - a(i, k) * a(k, j);
                mpz_divexact(a(i, j).get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
            }
            a(i, k) = 0;
        }
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

/// Exact rank of an integer matrix by fraction-free elimination.
inline std::size_t integer_rank(const IntegerMatrix& m) {
    IntegerMatrix a = m;
    const std::size_t rows = a.rows(), cols = a.cols();
    Integer prev = 1;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t piv = rank;
        while (piv < rows && a(piv, col) == 0) ++piv;
        if (piv == rows) continue;
        if (piv != rank)
            for (std::size_t j = 0; j < cols; ++j) std::swap(a(rank, j), a(piv, j));
        for (std::size_t i = rank + 1; i < rows; ++i) {
            for (std::size_t j = col + 1; j < cols; ++j) {
                Integer v = a(i, j) * a(rank, col) - a(i, col) * a(rank, j);
                mpz_divexact(a(i, j).get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
            }
            a(i, col) = 0;
        }
        prev = a(rank, col);
        ++rank;
    }
    return rank;
}

/// 2^61 - 1, the default modulus for the full-rank fast path.
inline constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

/// Rank of m reduced modulo a prime below 2^63.
inline std::size_t rank_mod_prime(const IntegerMatrix& m, std::uint64_t prime) {
    using u128 = unsigned __int128;
    const std::size_t rows = m.rows(), cols = m.cols();
    std::vector<std::uint64_t> a(rows * cols);
    Integer tmp;
    for (std::size_t i = 0; i < rows * cols; ++i) {
        mpz_fdiv_r_ui(tmp.get_mpz_t(), m.data()[i].get_mpz_t(), prime);
        a[i] = tmp.get_ui();
    }
    auto at = [&](std::size_t r, std::size_t c) -> std::uint64_t& { return a[r * cols + c]; };
    auto powmod = [prime](std::uint64_t b, std::uint64_t e) {
        std::uint64_t r = 1;
        while (e) {
            if (e & 1) r = static_cast<std::uint64_t>(static_cast<u128>(r) * b % prime);
            b = static_cast<std::uint64_t>(static_cast<u128>(b) * b % prime);
            e >>= 1;
        }
        return r;
    };
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t piv = rank;
        while (piv < rows && at(piv, col) == 0) ++piv;
        if (piv == rows) continue;
        if (piv != rank)
            for (std::size_t j = 0; j < cols; ++j) std::swap(at(rank, j), at(piv, j));
        const std::uint64_t inv = powmod(at(rank, col), prime - 2);
        for (std::size_t i = rank + 1; i < rows; ++i) {
            if (at(i, col) == 0) continue;
            const std::uint64_t f = static_cast<std::uint64_t>(static_cast<u128>(at(i, col)) * inv % prime);
            for (std::size_t j = col; j < cols; ++j) {
                const std::uint64_t sub = static_cast<std::uint64_t>(static_cast<u128>(f) * at(rank, j) % prime);
                at(i, j) = at(i, j) >= sub ? at(i, j) - sub : at(i, j) + prime - sub;
            }
        }
        ++rank;
    }
    return rank;
}

/// Exact rank over Q. A modular rank that reaches min(rows, cols) certifies
/// full rank; anything lower is re-derived by exact elimination.
inline std::size_t rank_rational(const RationalMatrix& m) {
    IntegerMatrix scaled = clear_denominators(m).first;
    const std::size_t bound = std::min(m.rows(), m.cols());
    if (rank_mod_prime(scaled, kMersenne61) == bound) return bound;
    return integer_rank(scaled);
}

inline std::size_t rank_rational(const IntegerMatrix& m) {
    const std::size_t bound = std::min(m.rows(), m.cols());
    if (rank_mod_prime(m, kMersenne61) == bound) return bound;
    return integer_rank(m);
}

/// U * M * V = D with U, V unimodular and D diagonal, d_1 | d_2 | ... , d_i >= 0.
struct SmithForm {
    IntegerMatrix U;
    IntegerMatrix D;
    IntegerMatrix V;

    /// Diagonal entries d_1..d_min(rows, cols).
    std::vector<Integer> invariant_factors() const {
        std::vector<Integer> d;
        for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) d.push_back(D(i, i));
        return d;
    }
};

inline SmithForm smith_normal_form(const IntegerMatrix& m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    IntegerMatrix d = m;
    IntegerMatrix u = IntegerMatrix::identity(rows);
    IntegerMatrix v = IntegerMatrix::identity(cols);

    auto swap_rows = [&](std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols; ++j) std::swap(d(a, j), d(b, j));
        for (std::size_t j = 0; j < rows; ++j) std::swap(u(a, j), u(b, j));
    };
    auto swap_cols = [&](std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < rows; ++i) std::swap(d(i, a), d(i, b));
        for (std::size_t i = 0; i < cols; ++i) std::swap(v(i, a), v(i, b));
    };
    // row dst += f * row src
    auto add_row = [&](std::size_t dst, std::size_t src, const Integer& f) {
        for (std::size_t j = 0; j < cols; ++j) d(dst, j) += f * d(src, j);
        for (std::size_t j = 0; j < rows; ++j) u(dst, j) += f * u(src, j);
    };
    auto add_col = [&](std::size_t dst, std::size_t src, const Integer& f) {
        for (std::size_t i = 0; i < rows; ++i) d(i, dst) += f * d(i, src);
        for (std::size_t i = 0; i < cols; ++i) v(i, dst) += f * v(i, src);
    };

    const std::size_t diag = std::min(rows, cols);
    for (std::size_t t = 0; t < diag; ++t) {
        for (;;) {
            // Pivot: nonzero entry of least absolute value in the trailing block.
            bool found = false;
            std::size_t pr = t, pc = t;
            for (std::size_t i = t; i < rows; ++i)
                for (std::size_t j = t; j < cols; ++j) {
                    if (d(i, j) == 0) continue;
                    if (!found || mpz_cmpabs(d(i, j).get_mpz_t(), d(pr, pc).get_mpz_t()) < 0) {
                        pr = i;
                        pc = j;
                        found = true;
                    }
                }
            if (!found) goto done;
            swap_rows(t, pr);
            swap_cols(t, pc);

            bool dirty = false;
            Integer q;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (d(i, t) == 0) continue;
                mpz_tdiv_q(q.get_mpz_t(), d(i, t).get_mpz_t(), d(t, t).get_mpz_t());
                add_row(i, t, -q);
                if (d(i, t) != 0) dirty = true;
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (d(t, j) == 0) continue;
                mpz_tdiv_q(q.get_mpz_t(), d(t, j).get_mpz_t(), d(t, t).get_mpz_t());
                add_col(j, t, -q);
                if (d(t, j) != 0) dirty = true;
            }
            if (dirty) continue;

            // Row and column are clear; enforce divisibility of the trailing block.
            std::size_t bad_row = rows;
            for (std::size_t i = t + 1; i < rows && bad_row == rows; ++i)
                for (std::size_t j = t + 1; j < cols; ++j)
                    if (!mpz_divisible_p(d(i, j).get_mpz_t(), d(t, t).get_mpz_t())) {
                        bad_row = i;
                        break;
                    }
            if (bad_row == rows) break;
            add_row(t, bad_row, Integer(1));
        }
        if (d(t, t) < 0) {
            for (std::size_t j = 0; j < cols; ++j) d(t, j) = -d(t, j);
            for (std::size_t j = 0; j < rows; ++j) u(t, j) = -u(t, j);
        }
    }
done:
    return SmithForm{std::move(u), std::move(d), std::move(v)};
}

/// Q^T A Q, computed as (C^T A C) / d^2 for Q = C / d and reduced entrywise.
inline RationalMatrix conjugate(const RationalMatrix& q, const IntegerMatrix& a) {
    if (!q.is_square() || !a.is_square() || q.rows() != a.rows())
        throw DimensionError("conjugate: Q and A must be square of the same order");
    auto [c, d] = clear_denominators(q);
    IntegerMatrix num = c.transpose() * a * c;
    Integer d2 = d * d;
    std::vector<Rational> out;
    out.reserve(num.data().size());
    for (const auto& x : num.data()) out.push_back(make_rational(x, d2));
    return RationalMatrix(q.rows(), q.cols(), std::move(out));
}

inline bool is_integral(const RationalMatrix& m) {
    return std::all_of(m.data().begin(), m.data().end(), [](const Rational& x) { return x.get_den() == 1; });
}

/// Integer view of an integral rational matrix; throws if any entry is fractional.
inline IntegerMatrix to_integer(const RationalMatrix& m) {
    if (!is_integral(m)) throw PreconditionError("to_integer: matrix has fractional entries");
    std::vector<Integer> d;
    d.reserve(m.data().size());
    for (const auto& x : m.data()) d.push_back(x.get_num());
    return IntegerMatrix(m.rows(), m.cols(), std::move(d));
}

/// Inverse over Q by Gauss-Jordan; throws DimensionError for singular input.
inline RationalMatrix inverse(const RationalMatrix& m) {
    if (!m.is_square()) throw DimensionError("inverse: matrix is not square");
    const std::size_t n = m.rows();
    RationalMatrix a = m;
    RationalMatrix inv = RationalMatrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a(piv, col) == 0) ++piv;
        if (piv == n) throw DimensionError("inverse: matrix is singular");
        for (std::size_t j = 0; j < n; ++j) {
            std::swap(a(col, j), a(piv, j));
            std::swap(inv(col, j), inv(piv, j));
        }
        const Rational p = a(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            a(col, j) /= p;
            inv(col, j) /= p;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || a(i, col) == 0) continue;
            const Rational f = a(i, col);
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= f * a(col, j);
                inv(i, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

} // namespace cospec
