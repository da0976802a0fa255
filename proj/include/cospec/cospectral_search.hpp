#pragma once

// Cospectral mates reachable through a rational orthogonal conjugator of
// bounded level, found by exhausting the enumerated conjugators, plus the
// exhaustive small-order census used as ground truth.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "exact_linalg.hpp"
#include "graph.hpp"
#include "graph6.hpp"
#include "matrix_io.hpp"
#include "ortho.hpp"

namespace cospec {

struct MateCertificate {
    Graph G, H;
    RationalOrthogonalMatrix Q;
    std::int64_t level = 1;
    bool generalized = false;
};

struct MateSearchOptions {
    bool require_generalized = false;
    EnumerationOptions enumeration{};
};

namespace detail {

inline std::vector<std::int64_t> small_matrix(const IntegerMatrix& a) {
    std::vector<std::int64_t> out;
    out.reserve(a.data().size());
    for (const auto& x : a.data()) {
        if (!x.fits_slong_p() || abs(x) > (std::int64_t{1} << 20))
            throw DimensionError("q_set: matrix entries too large for the enumeration fast path");
        out.push_back(x.get_si());
    }
    return out;
}

/// C^T A C for the scaled Q; entries are bounded by n^2 l^2 max|A|.
inline std::vector<std::int64_t> scaled_conjugate(const ScaledOrthogonal& q, const std::vector<std::int64_t>& a) {
    const std::size_t n = q.n;
    std::vector<std::int64_t> ac(n * n, 0), out(n * n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const std::int64_t x = a[i * n + k];
            if (x == 0) continue;
            for (std::size_t j = 0; j < n; ++j) ac[i * n + j] += x * q.numerators[k * n + j];
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const std::int64_t x = q.numerators[k * n + i];
            if (x == 0) continue;
            for (std::size_t j = 0; j < n; ++j) out[i * n + j] += x * ac[k * n + j];
        }
    return out;
}

} // namespace detail

/// Visits the scaled members of Q(A) with level dividing l, together with
/// the scaled conjugate C^T A C (so Q^T A Q = that / denom^2).
inline void for_each_q_member(const IntegerMatrix& a, std::int64_t l,
                              const std::function<bool(const ScaledOrthogonal&, const std::vector<std::int64_t>&)>& visit,
                              const EnumerationOptions& opts = {}) {
    if (!a.is_square()) throw DimensionError("q_set: matrix must be square");
    const auto small = detail::small_matrix(a);
    for_each_orthogonal(
        a.rows(), l, LevelMode::divides,
        [&](const ScaledOrthogonal& q) {
            auto b = detail::scaled_conjugate(q, small);
            const std::int64_t d2 = q.denom * q.denom;
            for (auto x : b)
                if (x % d2 != 0) return true;
            return visit(q, b);
        },
        opts);
}

/// Stream of Q with level dividing l and Q^T A Q integral.
inline void q_set(const IntegerMatrix& a, std::int64_t l, const std::function<bool(const RationalOrthogonalMatrix&)>& visit,
                  const EnumerationOptions& opts = {}) {
    for_each_q_member(
        a, l, [&](const ScaledOrthogonal& q, const std::vector<std::int64_t>&) { return visit(q.to_rational()); }, opts);
}

namespace detail {

// Certificates deduplicated by (level, isomorphism class of H); a regular
// conjugator replaces a non-regular one for the same class.
class CertificateSet {
public:
    explicit CertificateSet(const Graph& g) : g_(g) {}

    void offer(const Graph& h, std::int64_t level, bool generalized, const std::function<RationalOrthogonalMatrix()>& q) {
        auto key = std::make_pair(level, h);
        auto seen = labelled_.find(key);
        std::size_t idx;
        if (seen != labelled_.end()) {
            idx = seen->second;
        } else {
            idx = certs_.size();
            for (std::size_t k = 0; k < certs_.size(); ++k)
                if (certs_[k].level == level && are_isomorphic(certs_[k].H, h, kEnumerationLimit)) {
                    idx = k;
                    break;
                }
            labelled_.emplace(key, idx);
            if (idx == certs_.size()) {
                certs_.push_back(MateCertificate{g_, h, q(), level, generalized});
                return;
            }
        }
        if (generalized && !certs_[idx].generalized) {
            certs_[idx].H = h;
            certs_[idx].Q = q();
            certs_[idx].generalized = true;
        }
    }

    std::vector<MateCertificate> take() {
        std::sort(certs_.begin(), certs_.end(), [](const MateCertificate& x, const MateCertificate& y) {
            return std::make_pair(x.level, to_graph6(x.H)) < std::make_pair(y.level, to_graph6(y.H));
        });
        return std::move(certs_);
    }

private:
    Graph g_;
    std::vector<MateCertificate> certs_;
    std::map<std::pair<std::int64_t, Graph>, std::size_t> labelled_;
};

} // namespace detail

/// Mates H of G with Q^T A_G Q = A_H for a rational orthogonal Q of level
/// l' | l, l' >= 2, and H not isomorphic to G. With quotienting on, one
/// conjugator per signed-permutation orbit is enumerated and the orbit is
/// searched analytically for a diagonal sign change that makes the conjugate
/// a 0/1 matrix (and, if possible, Q regular).
inline std::vector<MateCertificate> find_mates(const Graph& g, std::int64_t l, const MateSearchOptions& opts = {}) {
    const std::size_t n = g.order();
    if (n > kEnumerationLimit) throw GuardError("find_mates: order exceeds " + std::to_string(kEnumerationLimit));
    detail::CertificateSet found(g);
    if (n < 2) return found.take();
    const IntegerMatrix a = adjacency(g);

    for_each_q_member(
        a, l,
        [&](const ScaledOrthogonal& q, const std::vector<std::int64_t>& b_scaled) {
            if (q.level < 2) return true;
            const std::int64_t d2 = q.denom * q.denom;
            std::vector<std::int64_t> b(n * n);
            for (std::size_t k = 0; k < n * n; ++k) b[k] = b_scaled[k] / d2;
            for (std::size_t i = 0; i < n; ++i)
                if (b[i * n + i] != 0) return true;
            for (auto x : b)
                if (x < -1 || x > 1) return true;

            // Column sums of C give Q^T e scaled by denom.
            std::vector<std::int64_t> colsum(n, 0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) colsum[j] += q.at(i, j);

            std::vector<int> sigma(n, 1);
            if (!opts.enumeration.quotient_signed_perms) {
                for (auto x : b)
                    if (x < 0) return true;
            } else {
                // Two-colour the nonzero pattern: sigma_u sigma_v = sign(b_uv).
                std::vector<int> colour(n, 0);
                for (std::size_t root = 0; root < n; ++root) {
                    if (colour[root]) continue;
                    colour[root] = 1;
                    std::vector<std::size_t> stack{root};
                    while (!stack.empty()) {
                        const std::size_t u = stack.back();
                        stack.pop_back();
                        for (std::size_t v = 0; v < n; ++v) {
                            const std::int64_t x = b[u * n + v];
                            if (x == 0) continue;
                            const int want = x > 0 ? colour[u] : -colour[u];
                            if (colour[v] == 0) {
                                colour[v] = want;
                                stack.push_back(v);
                            } else if (colour[v] != want) {
                                return true;
                            }
                        }
                    }
                }
                sigma = colour;
                // Prefer the sign vector making Q D regular, when it is consistent.
                bool regular_ok = true;
                for (std::size_t j = 0; j < n && regular_ok; ++j) regular_ok = colsum[j] == q.denom || colsum[j] == -q.denom;
                for (std::size_t u = 0; u < n && regular_ok; ++u)
                    for (std::size_t v = 0; v < n && regular_ok; ++v) {
                        const std::int64_t x = b[u * n + v];
                        if (x != 0) regular_ok = (colsum[u] > 0) == (colsum[v] > 0) ? x > 0 : x < 0;
                    }
                if (regular_ok)
                    for (std::size_t j = 0; j < n; ++j) sigma[j] = colsum[j] > 0 ? 1 : -1;
            }

            // Regular iff Q D e = e, i.e. row sums of C D all equal denom.
            bool regular = true;
            for (std::size_t i = 0; i < n && regular; ++i) {
                std::int64_t rs = 0;
                for (std::size_t j = 0; j < n; ++j) rs += q.at(i, j) * sigma[j];
                regular = rs == q.denom;
            }
            if (opts.require_generalized && !regular) return true;

            Graph h(n);
            for (std::size_t v = 1; v < n; ++v)
                for (std::size_t u = 0; u < v; ++u)
                    if (b[u * n + v] != 0) h.add_edge(u, v);
            if (h == g || are_isomorphic(g, h, kEnumerationLimit)) return true;

            found.offer(h, q.level, regular, [&] {
                ScaledOrthogonal signed_q = q;
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j) signed_q.numerators[i * n + j] *= sigma[j];
                return signed_q.to_rational();
            });
            return true;
        },
        opts.enumeration);
    return found.take();
}

/// l(Q) | d_n(W(G)) for a generalized certificate of a controllable graph.
inline bool verify_level_divisibility(const MateCertificate& cert) {
    if (!cert.generalized) throw PreconditionError("level divisibility audit needs a generalized certificate");
    const WalkMatrixReport w = walk_matrix(cert.G);
    if (!w.controllable) throw PreconditionError("level divisibility audit needs a controllable graph");
    return mpz_divisible_p(w.d_n.get_mpz_t(), cert.Q.level().get_mpz_t()) != 0;
}

/// Names of failed checks; empty when the certificate stands on its own.
inline std::vector<std::string> reverify_certificate(const MateCertificate& cert) {
    std::vector<std::string> bad;
    const RationalMatrix& q = cert.Q.matrix();
    if (!q.is_square() || q.rows() != cert.G.order() || cert.H.order() != cert.G.order()) {
        bad.push_back("dimensions");
        return bad;
    }
    if (q.transpose() * q != RationalMatrix::identity(q.rows())) bad.push_back("orthogonality");
    if (level(q) != cert.level) bad.push_back("level");
    if (cert.level < 2) bad.push_back("level>=2");
    if (conjugate(q, adjacency(cert.G)) != to_rational(adjacency(cert.H))) bad.push_back("conjugation");
    if (cert.G.order() <= kIsomorphismLimit && are_isomorphic(cert.G, cert.H)) bad.push_back("non-isomorphic");
    if (cert.generalized) {
        if (!is_regular(cert.Q)) bad.push_back("regular");
        const WalkMatrixReport w = walk_matrix(cert.G);
        if (w.controllable && !mpz_divisible_p(w.d_n.get_mpz_t(), cert.Q.level().get_mpz_t()))
            bad.push_back("level-divides-d_n");
    }
    return bad;
}

inline nlohmann::json certificate_to_json(const MateCertificate& cert) {
    return nlohmann::json{{"G", to_graph6(cert.G)},
                          {"H", to_graph6(cert.H)},
                          {"Q", matrix_rows_text(cert.Q.matrix())},
                          {"level", cert.level},
                          {"generalized", cert.generalized}};
}

/// Parses and rebuilds a certificate; orthogonality is rechecked on load.
inline MateCertificate certificate_from_json(const nlohmann::json& j) {
    try {
        MateCertificate c;
        c.G = from_graph6(j.at("G").get<std::string>());
        c.H = from_graph6(j.at("H").get<std::string>());
        c.Q = RationalOrthogonalMatrix(parse_matrix_rows(j.at("Q").get<std::vector<std::string>>()));
        c.level = j.at("level").get<std::int64_t>();
        c.generalized = j.at("generalized").get<bool>();
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("certificate JSON: ") + e.what());
    }
}

/// Q P stays in Q(A) for every signed permutation P.
inline bool closure_audit(const IntegerMatrix& a, const RationalOrthogonalMatrix& q, const RationalOrthogonalMatrix& p) {
    if (!is_integral(conjugate(q.matrix(), a))) throw PreconditionError("closure_audit: Q is not in Q(A)");
    if (!is_signed_permutation(p)) throw PreconditionError("closure_audit: P is not a signed permutation");
    return is_integral(conjugate((q * p).matrix(), a));
}

inline constexpr std::size_t kCensusLimit = 6;

/// Non-isomorphic cospectral pairs on n vertices, one pair per pair of
/// isomorphism classes sharing a characteristic polynomial.
inline std::vector<std::pair<Graph, Graph>> cospectral_census(std::size_t n) {
    if (n > kCensusLimit) throw GuardError("cospectral_census: order exceeds " + std::to_string(kCensusLimit));
    std::map<IntegerPolynomial, std::vector<Graph>> buckets;
    enumerate_graphs(n, [&](const Graph& g) {
        auto& reps = buckets[char_poly(adjacency(g))];
        for (const auto& r : reps)
            if (are_isomorphic(r, g)) return true;
        reps.push_back(g);
        return true;
    });
    std::vector<std::pair<Graph, Graph>> pairs;
    for (const auto& [poly, reps] : buckets)
        for (std::size_t a = 0; a < reps.size(); ++a)
            for (std::size_t b = a + 1; b < reps.size(); ++b) pairs.emplace_back(reps[a], reps[b]);
    return pairs;
}

} // namespace cospec
