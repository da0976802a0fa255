#pragma once

// Mechanical checks of the counting argument behind the bound
//   Pr(Q^T A Q integral) <= phat^{(s/2l^4)(s/2l^4 + n - s - 1)}
// for Q = diag(Q_s, I_{n-s}): column supports K(j), their overlap sets N(i),
// the alternating greedy choice of index sets I and J, the dependency blocks
// of the entries b_{i,j}, the flip involution, and the numeric bounds.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "bigfloat.hpp"
#include "errors.hpp"
#include "exact_linalg.hpp"
#include "graph.hpp"
#include "ortho.hpp"
#include "random.hpp"

namespace cospec {

/// Subset of {0..63} as a bitmask.
class IndexSet {
public:
    constexpr IndexSet() = default;
    constexpr explicit IndexSet(std::uint64_t bits) : bits_(bits) {}

    static constexpr IndexSet range(std::size_t lo, std::size_t hi) {
        std::uint64_t b = 0;
        for (std::size_t i = lo; i < hi; ++i) b |= std::uint64_t{1} << i;
        return IndexSet(b);
    }

    constexpr bool contains(std::size_t i) const { return bits_ >> i & 1; }
    constexpr void insert(std::size_t i) { bits_ |= std::uint64_t{1} << i; }
    constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr std::size_t min() const { return static_cast<std::size_t>(std::countr_zero(bits_)); }
    constexpr std::uint64_t bits() const { return bits_; }
    constexpr bool intersects(IndexSet o) const { return (bits_ & o.bits_) != 0; }

    friend constexpr IndexSet operator|(IndexSet a, IndexSet b) { return IndexSet(a.bits_ | b.bits_); }
    friend constexpr IndexSet operator&(IndexSet a, IndexSet b) { return IndexSet(a.bits_ & b.bits_); }
    friend constexpr IndexSet operator-(IndexSet a, IndexSet b) { return IndexSet(a.bits_ & ~b.bits_); }
    friend constexpr bool operator==(IndexSet, IndexSet) = default;

    std::vector<std::size_t> to_vector() const {
        std::vector<std::size_t> v;
        for (std::uint64_t b = bits_; b; b &= b - 1) v.push_back(static_cast<std::size_t>(std::countr_zero(b)));
        return v;
    }

private:
    std::uint64_t bits_ = 0;
};

inline constexpr std::size_t kMaxVerifierOrder = 64;

/// A member of CAN(n, l; s): diag(Q_s, I_{n-s}) stored over a common denominator.
class CanMatrix {
public:
    /// Trusted constructor for output of canonical_block.
    static CanMatrix from_block(ScaledOrthogonal block, std::size_t s) {
        if (block.n > kMaxVerifierOrder) throw DimensionError("proof verifier supports n <= 64");
        CanMatrix m;
        m.q_ = std::move(block);
        m.s_ = s;
        return m;
    }

    static CanMatrix from_canonical_form(const CanonicalForm& cf) { return from_block(to_scaled(cf.block()), cf.s); }

    /// Validates membership in CAN(n, level(q); s).
    static CanMatrix from_matrix(const RationalOrthogonalMatrix& q, std::size_t s) {
        if (!is_in_can(q, s)) throw PreconditionError("matrix is not of the form diag(Q_s, I) with fractional Q_s");
        return from_block(to_scaled(q), s);
    }

    std::size_t order() const noexcept { return q_.n; }
    std::size_t block_size() const noexcept { return s_; }
    std::int64_t level() const noexcept { return q_.level; }
    std::int64_t denom() const noexcept { return q_.denom; }
    std::int64_t numerator(std::size_t r, std::size_t c) const { return q_.at(r, c); }
    Rational entry(std::size_t r, std::size_t c) const {
        return make_rational(Integer(static_cast<long>(q_.at(r, c))), Integer(static_cast<long>(q_.denom)));
    }
    const ScaledOrthogonal& scaled() const noexcept { return q_; }
    RationalOrthogonalMatrix to_rational() const { return q_.to_rational(); }

private:
    ScaledOrthogonal q_;
    std::size_t s_ = 0;
};

/// K(j), N(i) and L(k) for a CAN member; indices are 0-based.
struct SupportMaps {
    std::vector<IndexSet> K;         // all n columns
    std::vector<IndexSet> N;         // i < s
    std::vector<std::size_t> L;      // all n rows; columns j < s whose support holds the row
    std::int64_t level = 1;
};

/// Computes the maps and enforces |K(j)| <= l^2, L(k) <= l^2, |N(i)| <= l^4.
inline SupportMaps support_maps(const CanMatrix& q) {
    const std::size_t n = q.order(), s = q.block_size();
    const std::int64_t l = q.level();
    SupportMaps m;
    m.level = l;
    m.K.resize(n);
    m.L.assign(n, 0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t r = 0; r < n; ++r)
            if (q.numerator(r, j) != 0) m.K[j].insert(r);
    for (std::size_t j = 0; j < s; ++j)
        for (std::size_t r : m.K[j].to_vector()) ++m.L[r];
    m.N.resize(s);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j)
            if (m.K[i].intersects(m.K[j])) m.N[i].insert(j);

    const auto l2 = static_cast<std::size_t>(l * l);
    const std::size_t l4 = l2 * l2;
    for (std::size_t j = 0; j < n; ++j)
        if (m.K[j].size() > l2)
            throw ClaimViolation("|K(" + std::to_string(j + 1) + ")| = " + std::to_string(m.K[j].size()) +
                                 " exceeds l^2 = " + std::to_string(l2));
    for (std::size_t k = 0; k < n; ++k)
        if (m.L[k] > l2)
            throw ClaimViolation("L(" + std::to_string(k + 1) + ") = " + std::to_string(m.L[k]) + " exceeds l^2");
    for (std::size_t i = 0; i < s; ++i)
        if (m.N[i].size() > l4)
            throw ClaimViolation("|N(" + std::to_string(i + 1) + ")| = " + std::to_string(m.N[i].size()) +
                                 " exceeds l^4 = " + std::to_string(l4));
    return m;
}

struct TraceStep {
    IndexSet available; // S_k
    std::size_t chosen; // i_k
};

struct IndexSelection {
    IndexSet I, J;
    std::vector<TraceStep> trace;
    std::size_t s = 0, n = 0;
    std::int64_t level = 1;
};

/// Alternating greedy: take the least element of S_k, give it to I (odd k) or
/// J (even k), set S_{k+1} = S_k \ N(i_k); finally append {s+1..n} to J.
inline IndexSelection greedy_select(const CanMatrix& q, const SupportMaps& maps) {
    IndexSelection sel;
    sel.s = q.block_size();
    sel.n = q.order();
    sel.level = q.level();
    IndexSet avail = IndexSet::range(0, sel.s);
    bool to_I = true;
    while (!avail.empty()) {
        const std::size_t pick = avail.min();
        sel.trace.push_back({avail, pick});
        (to_I ? sel.I : sel.J).insert(pick);
        to_I = !to_I;
        avail = avail - maps.N[pick];
    }
    sel.J = sel.J | IndexSet::range(sel.s, sel.n);
    return sel;
}

inline IndexSelection greedy_select(const CanMatrix& q) { return greedy_select(q, support_maps(q)); }

/// ceil(ceil(s / l^4) / 2) and floor(ceil(s / l^4) / 2) + n - s.
inline std::pair<std::size_t, std::size_t> selection_size_bounds(std::size_t n, std::size_t s, std::int64_t l) {
    const auto l4 = static_cast<std::size_t>(l * l * l * l);
    const std::size_t t = (s + l4 - 1) / l4;
    return {(t + 1) / 2, t / 2 + n - s};
}

/// Names of the violated selection invariants; empty when all hold.
inline std::vector<std::string> audit_selection(const SupportMaps& maps, const IndexSelection& sel) {
    std::vector<std::string> bad;
    if (!(sel.I - IndexSet::range(0, sel.s)).empty()) bad.push_back("I-subset");
    if (!(sel.J - IndexSet::range(0, sel.n)).empty()) bad.push_back("J-subset");
    if (sel.I.intersects(sel.J)) bad.push_back("I-J-disjoint");

    const auto all = (sel.I | sel.J).to_vector();
    bool supports_ok = true;
    for (std::size_t a = 0; a < all.size() && supports_ok; ++a)
        for (std::size_t b = a + 1; b < all.size(); ++b)
            if (maps.K[all[a]].intersects(maps.K[all[b]])) {
                supports_ok = false;
                break;
            }
    if (!supports_ok) bad.push_back("support-disjoint");

    // K(i) x K(j) over i in I, j in J: pairwise disjoint as ordered cells and as unordered pairs.
    const auto is = sel.I.to_vector(), js = sel.J.to_vector();
    std::vector<std::pair<std::size_t, std::size_t>> blocks;
    for (auto i : is)
        for (auto j : js) blocks.emplace_back(i, j);
    bool product_ok = true, pairs_ok = true;
    for (std::size_t x = 0; x < blocks.size(); ++x)
        for (std::size_t y = x + 1; y < blocks.size(); ++y) {
            const auto [i1, j1] = blocks[x];
            const auto [i2, j2] = blocks[y];
            const bool same = maps.K[i1].intersects(maps.K[i2]) && maps.K[j1].intersects(maps.K[j2]);
            const bool swapped = maps.K[i1].intersects(maps.K[j2]) && maps.K[j1].intersects(maps.K[i2]);
            if (same) product_ok = false;
            if (same || swapped) pairs_ok = false;
        }
    for (auto i : is)
        for (auto j : js)
            if (maps.K[i].intersects(maps.K[j])) pairs_ok = false; // would put a diagonal a_{u,u} in b_{i,j}
    if (!product_ok) bad.push_back("product-disjoint");
    if (!pairs_ok) bad.push_back("pair-disjoint");

    const auto [min_i, min_j] = selection_size_bounds(sel.n, sel.s, sel.level);
    if (sel.I.size() < min_i) bad.push_back("I-size");
    if (sel.J.size() < min_j) bad.push_back("J-size");
    return bad;
}

/// Unordered vertex pairs {u, v}, u in K(i), v in K(j), on which b_{i,j} depends.
inline std::vector<std::pair<std::size_t, std::size_t>> entry_dependency(const SupportMaps& maps, std::size_t i,
                                                                         std::size_t j) {
    if (maps.K[i].intersects(maps.K[j]))
        throw PreconditionError("entry_dependency: K(i) and K(j) overlap (i = " + std::to_string(i + 1) +
                                ", j = " + std::to_string(j + 1) + ")");
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (auto u : maps.K[i].to_vector())
        for (auto v : maps.K[j].to_vector()) out.emplace_back(std::min(u, v), std::max(u, v));
    return out;
}

/// b_{i,j} as the restricted sum over K(i) x K(j).
inline Rational restricted_entry(const CanMatrix& q, const SupportMaps& maps, const IntegerMatrix& a, std::size_t i,
                                 std::size_t j) {
    Rational b = 0;
    for (auto u : maps.K[i].to_vector())
        for (auto v : maps.K[j].to_vector())
            if (a(u, v) != 0) b += q.entry(u, i) * Rational(a(u, v)) * q.entry(v, j);
    return b;
}

// ---------------------------------------------------------------------------
// Flip involution

struct InvolutionResult {
    bool holds = true;
    std::uint64_t assignments_checked = 0;
    std::uint64_t integral_assignments = 0;
    bool exhaustive = false;
};

inline constexpr std::size_t kExhaustiveBlockCells = 16;

/// Block with weights row_w[u] / row_den and col_w[v] / col_den. For every 0/1
/// array X over the block (or `samples` random ones when the block exceeds 16
/// cells) checks that sum X[u][v] w_u w_v integral implies the array with
/// cell (0, 0) flipped gives a non-integral sum. Requires 0 < |row_w[0]| < row_den
/// and col_w[0] != 0.
inline InvolutionResult involution_audit_block(const std::vector<std::int64_t>& row_w, std::int64_t row_den,
                                               const std::vector<std::int64_t>& col_w, std::int64_t col_den,
                                               std::uint64_t samples = 4096, std::uint64_t seed = 0) {
    if (row_w.empty() || col_w.empty()) throw PreconditionError("involution audit: empty block");
    const std::int64_t w0 = row_w[0];
    if (w0 == 0 || w0 % row_den == 0 || (w0 < 0 ? -w0 : w0) >= row_den)
        throw PreconditionError("involution audit: pivot weight must be a proper fraction");
    if (col_w[0] == 0) throw PreconditionError("involution audit: column pivot weight must be nonzero");

    const std::size_t r = row_w.size(), c = col_w.size(), cells = r * c;
    std::vector<Integer> prod(cells);
    for (std::size_t u = 0; u < r; ++u)
        for (std::size_t v = 0; v < c; ++v)
            prod[u * c + v] = Integer(static_cast<long>(row_w[u])) * Integer(static_cast<long>(col_w[v]));
    const Integer den = Integer(static_cast<long>(row_den)) * Integer(static_cast<long>(col_den));

    InvolutionResult res;
    res.exhaustive = cells <= kExhaustiveBlockCells;
    auto check = [&](std::uint64_t mask) {
        Integer sum = 0;
        for (std::size_t k = 0; k < cells; ++k)
            if (mask >> k & 1) sum += prod[k];
        ++res.assignments_checked;
        if (!mpz_divisible_p(sum.get_mpz_t(), den.get_mpz_t())) return;
        ++res.integral_assignments;
        const Integer flipped = (mask & 1) ? Integer(sum - prod[0]) : Integer(sum + prod[0]);
        if (mpz_divisible_p(flipped.get_mpz_t(), den.get_mpz_t())) res.holds = false;
    };
    if (res.exhaustive) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cells); ++mask) check(mask);
    } else {
        if (cells > 64) throw DimensionError("involution audit: sampled blocks are limited to 64 cells");
        for (std::uint64_t t = 0; t < samples; ++t) {
            KeyedStream stream(seed, t, 0);
            std::uint64_t mask = stream.next();
            if (cells < 64) mask &= (std::uint64_t{1} << cells) - 1;
            check(mask);
        }
    }
    return res;
}

/// Rational-weight convenience form.
inline InvolutionResult involution_audit_block(const std::vector<Rational>& row_w, const std::vector<Rational>& col_w,
                                               std::uint64_t samples = 4096, std::uint64_t seed = 0) {
    auto scale = [](const std::vector<Rational>& w) {
        Integer d = 1;
        for (const auto& x : w) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), x.get_den_mpz_t());
        std::vector<std::int64_t> out;
        for (const auto& x : w) {
            Integer v = x.get_num() * (d / x.get_den());
            if (!v.fits_slong_p()) throw DimensionError("involution audit: weight too large");
            out.push_back(v.get_si());
        }
        if (!d.fits_slong_p()) throw DimensionError("involution audit: denominator too large");
        return std::make_pair(out, static_cast<std::int64_t>(d.get_si()));
    };
    auto [rw, rd] = scale(row_w);
    auto [cw, cd] = scale(col_w);
    return involution_audit_block(rw, rd, cw, cd, samples, seed);
}

/// Flip audit for b_{i,j} of a CAN member; u0 = min K(i), v0 = min K(j).
inline InvolutionResult involution_audit(const CanMatrix& q, const SupportMaps& maps, std::size_t i, std::size_t j,
                                         std::uint64_t samples = 4096, std::uint64_t seed = 0) {
    if (i >= q.block_size()) throw PreconditionError("involution audit: column i has only integral weights");
    if (maps.K[i].intersects(maps.K[j])) throw PreconditionError("involution audit: K(i) and K(j) overlap");
    std::vector<std::int64_t> rw, cw;
    for (auto u : maps.K[i].to_vector()) rw.push_back(q.numerator(u, i));
    for (auto v : maps.K[j].to_vector()) cw.push_back(q.numerator(v, j));
    return involution_audit_block(rw, q.denom(), cw, q.denom(), samples, seed);
}

// ---------------------------------------------------------------------------
// Numeric bounds

/// Exact exponent (s / 2l^4) (s / 2l^4 + n - s - 1).
inline Rational lemma_exponent(std::size_t n, std::size_t s, std::int64_t l) {
    const Integer l4 = Integer(static_cast<long>(l * l * l * l));
    const Rational x = make_rational(Integer(static_cast<unsigned long>(s)), 2 * l4);
    return x * (x + Rational(static_cast<long>(n)) - Rational(static_cast<long>(s)) - 1);
}

inline Rational rational_pow(const Rational& base, unsigned long e) {
    Integer num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
    mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
    return make_rational(num, den);
}

struct BoundReport {
    Rational p_hat;
    std::size_t I_size = 0, J_size = 0;
    std::size_t selected_exponent = 0;    // |I| |J|
    Rational selected_bound;              // min(1, p_hat^{|I||J|})
    Rational closed_form_exponent;        // (s/2l^4)(s/2l^4 + n - s - 1)
    bool vacuous = false;                 // closed-form exponent <= 0: the bound says nothing
    IndexSelection selection;
};

/// Greedy selection bound for a fixed CAN member. Throws ClaimViolation if
/// |I||J| falls below the closed-form exponent.
inline BoundReport lemma_bound(const CanMatrix& q, const Probability& p) {
    BoundReport r;
    r.p_hat = p.hat();
    const SupportMaps maps = support_maps(q);
    r.selection = greedy_select(q, maps);
    r.I_size = r.selection.I.size();
    r.J_size = r.selection.J.size();
    r.selected_exponent = r.I_size * r.J_size;
    r.selected_bound = rational_pow(r.p_hat, static_cast<unsigned long>(r.selected_exponent));
    if (r.selected_bound > 1) r.selected_bound = 1;
    r.closed_form_exponent = lemma_exponent(q.order(), q.block_size(), q.level());
    r.vacuous = r.closed_form_exponent <= 0;
    if (Rational(static_cast<unsigned long>(r.selected_exponent)) < r.closed_form_exponent)
        throw ClaimViolation("|I||J| = " + std::to_string(r.selected_exponent) +
                             " is below the closed-form exponent " + r.closed_form_exponent.get_str());
    return r;
}

/// s / 2l^4 + n - s - 1 >= (n - 1) / 2l^4, the step that replaces the
/// s-dependent exponent by one linear in n.
inline bool exponent_chain_audit(std::size_t n, std::int64_t l, std::size_t s) {
    if (s < 2 || s > n) throw PreconditionError("exponent_chain_audit requires 2 <= s <= n");
    const Integer two_l4 = 2 * Integer(static_cast<long>(l * l * l * l));
    const Rational lhs = make_rational(Integer(static_cast<unsigned long>(s)), two_l4) +
                         Rational(static_cast<long>(n)) - Rational(static_cast<long>(s)) - 1;
    const Rational rhs = make_rational(Integer(static_cast<unsigned long>(n - 1)), two_l4);
    return lhs >= rhs;
}

/// Upper bound on eps_n = n^2 (2n)^{l^2} phat^{(n-1)/(4 l^8)}.
inline BigFloat epsilon_upper(std::size_t n, std::int64_t l, const Probability& p) {
    const auto nl = static_cast<unsigned long>(n);
    const auto l2 = static_cast<unsigned long>(l * l);
    Integer poly;
    mpz_ui_pow_ui(poly.get_mpz_t(), 2 * nl, l2);
    poly *= nl;
    poly *= nl;
    const BigFloat lead = BigFloat::from_integer(poly, MPFR_RNDU);
    const BigFloat base = BigFloat::from_rational(p.hat(), MPFR_RNDU);
    // phat <= 1, so shrinking the exponent can only enlarge the power.
    const Integer four_l8 = 4 * Integer(static_cast<long>(l2 * l2)) * Integer(static_cast<long>(l2 * l2));
    const BigFloat expo = BigFloat::from_rational(make_rational(Integer(nl - 1), four_l8), MPFR_RNDD);
    return BigFloat::mul(lead, BigFloat::pow(base, expo, MPFR_RNDU), MPFR_RNDU);
}

struct EpsilonReport {
    std::size_t n = 0;
    std::int64_t level = 1;
    Rational p_hat;
    BigFloat epsilon;                    // rounded up
    bool below_one = false;
    std::optional<BigFloat> series_bound; // eps^2 / (1 - eps), rounded up; only when eps < 1
};

inline EpsilonReport epsilon_series(std::size_t n, std::int64_t l, const Probability& p) {
    if (n < 1) throw PreconditionError("epsilon_series requires n >= 1");
    EpsilonReport r;
    r.n = n;
    r.level = l;
    r.p_hat = p.hat();
    r.epsilon = epsilon_upper(n, l, p);
    r.below_one = r.epsilon.compare(1) < 0;
    if (r.below_one) {
        const BigFloat sq = BigFloat::mul(r.epsilon, r.epsilon, MPFR_RNDU);
        const BigFloat gap = BigFloat::sub(BigFloat::from_double(1.0), r.epsilon, MPFR_RNDD);
        r.series_bound = BigFloat::div(sq, gap, MPFR_RNDU);
    }
    return r;
}

/// Least n >= 1 with eps_n < 1, or nullopt when phat = 1. log eps_n is concave
/// in n and positive at n = 1, so {n : eps_n < 1} is a ray; the search gallops
/// then bisects, and the boundary is rechecked explicitly.
inline std::optional<std::size_t> epsilon_threshold(std::int64_t l, const Probability& p) {
    if (p.hat() == 1) return std::nullopt;
    auto below = [&](std::size_t n) { return epsilon_upper(n, l, p).compare(1) < 0; };
    std::size_t hi = 2;
    while (!below(hi)) {
        if (hi > (std::size_t{1} << 50)) return std::nullopt;
        hi *= 2;
    }
    std::size_t lo = hi / 2; // not below (or 1)
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        (below(mid) ? hi : lo) = mid;
    }
    while (hi > 1 && below(hi - 1)) --hi;
    return hi;
}

} // namespace cospec
