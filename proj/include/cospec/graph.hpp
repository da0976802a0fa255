#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "exact_linalg.hpp"
#include "random.hpp"

namespace cospec {

/// Simple undirected graph on vertices 0..n-1 (printed 1-based).
class Graph {
public:
    Graph() = default;
    explicit Graph(std::size_t n) : n_(n), adj_(n * n, 0) {}

    Graph(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) : Graph(n) {
        for (auto [u, v] : edges) add_edge(u, v);
    }

    static Graph complete(std::size_t n) {
        Graph g(n);
        for (std::size_t v = 1; v < n; ++v)
            for (std::size_t u = 0; u < v; ++u) g.add_edge(u, v);
        return g;
    }

    static Graph path(std::size_t n) {
        Graph g(n);
        for (std::size_t v = 1; v < n; ++v) g.add_edge(v - 1, v);
        return g;
    }

    static Graph cycle(std::size_t n) {
        Graph g = path(n);
        if (n >= 3) g.add_edge(0, n - 1);
        return g;
    }

    /// Builds a graph from a symmetric 0/1 matrix with zero diagonal.
    static Graph from_adjacency(const IntegerMatrix& a) {
        if (!a.is_square()) throw DimensionError("adjacency matrix must be square");
        Graph g(a.rows());
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j) {
                const Integer& x = a(i, j);
                if (x != 0 && x != 1) throw PreconditionError("adjacency entries must be 0 or 1");
                if (x != a(j, i)) throw PreconditionError("adjacency matrix must be symmetric");
                if (i == j && x != 0) throw PreconditionError("adjacency diagonal must be zero");
                if (i < j && x == 1) g.add_edge(i, j);
            }
        return g;
    }

    std::size_t order() const noexcept { return n_; }

    bool has_edge(std::size_t u, std::size_t v) const { return adj_[u * n_ + v] != 0; }

    void add_edge(std::size_t u, std::size_t v) {
        if (u >= n_ || v >= n_) throw DimensionError("edge endpoint out of range");
        if (u == v) throw PreconditionError("self-loops are not allowed");
        adj_[u * n_ + v] = adj_[v * n_ + u] = 1;
    }

    void remove_edge(std::size_t u, std::size_t v) { adj_[u * n_ + v] = adj_[v * n_ + u] = 0; }

    std::size_t degree(std::size_t v) const {
        return static_cast<std::size_t>(std::count(adj_.begin() + v * n_, adj_.begin() + (v + 1) * n_, 1));
    }

    std::size_t edge_count() const { return static_cast<std::size_t>(std::count(adj_.begin(), adj_.end(), 1)) / 2; }

    /// Same graph with vertex v renamed perm[v].
    Graph relabel(const std::vector<std::size_t>& perm) const {
        Graph h(n_);
        for (std::size_t v = 1; v < n_; ++v)
            for (std::size_t u = 0; u < v; ++u)
                if (has_edge(u, v)) h.add_edge(perm[u], perm[v]);
        return h;
    }

    friend bool operator==(const Graph&, const Graph&) = default;
    friend bool operator<(const Graph& a, const Graph& b) {
        return std::tie(a.n_, a.adj_) < std::tie(b.n_, b.adj_);
    }

private:
    std::size_t n_ = 0;
    std::vector<std::uint8_t> adj_;
};

/// Index of edge {u, v}, u < v, in the column-wise upper-triangle order
/// (0,1), (0,2), (1,2), (0,3), ... shared by graph6 and the sampler.
inline constexpr std::size_t edge_index(std::size_t u, std::size_t v) noexcept {
    if (u > v) std::swap(u, v);
    return v * (v - 1) / 2 + u;
}

inline IntegerMatrix adjacency(const Graph& g) {
    const std::size_t n = g.order();
    IntegerMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (g.has_edge(i, j)) a(i, j) = 1;
    return a;
}

inline Graph complement(const Graph& g) {
    Graph h(g.order());
    for (std::size_t v = 1; v < g.order(); ++v)
        for (std::size_t u = 0; u < v; ++u)
            if (!g.has_edge(u, v)) h.add_edge(u, v);
    return h;
}

/// Disjoint union, vertices of b shifted past those of a.
inline Graph disjoint_union(const Graph& a, const Graph& b) {
    Graph g(a.order() + b.order());
    for (std::size_t v = 1; v < a.order(); ++v)
        for (std::size_t u = 0; u < v; ++u)
            if (a.has_edge(u, v)) g.add_edge(u, v);
    const std::size_t off = a.order();
    for (std::size_t v = 1; v < b.order(); ++v)
        for (std::size_t u = 0; u < v; ++u)
            if (b.has_edge(u, v)) g.add_edge(off + u, off + v);
    return g;
}

/// Walk matrix W = [e, Ae, ..., A^{n-1} e] with its rank status and last invariant factor.
struct WalkMatrixReport {
    IntegerMatrix W;
    bool controllable = false;
    Integer d_n = 0; // 0 exactly when W is singular
};

inline IntegerMatrix walk_matrix_of(const Graph& g) {
    const std::size_t n = g.order();
    IntegerMatrix w(n, n);
    std::vector<Integer> col(n, Integer(1));
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) w(i, k) = col[i];
        if (k + 1 == n) break;
        std::vector<Integer> next(n, Integer(0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (g.has_edge(i, j)) next[i] += col[j];
        col = std::move(next);
    }
    return w;
}

inline bool is_controllable(const Graph& g) {
    if (g.order() == 0) throw PreconditionError("walk matrix needs at least one vertex");
    return rank_rational(walk_matrix_of(g)) == g.order();
}

inline WalkMatrixReport walk_matrix(const Graph& g) {
    if (g.order() == 0) throw PreconditionError("walk matrix needs at least one vertex");
    WalkMatrixReport r;
    r.W = walk_matrix_of(g);
    r.controllable = rank_rational(r.W) == g.order();
    if (r.controllable) {
        SmithForm snf = smith_normal_form(r.W);
        r.d_n = snf.D(g.order() - 1, g.order() - 1);
    }
    return r;
}

/// Exact probability num/den, reduced, with 0 <= num <= den.
struct Probability {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    Probability() = default;
    Probability(std::uint64_t a, std::uint64_t b) : num(a), den(b) {
        if (b == 0) throw PreconditionError("probability denominator must be positive");
        if (a > b) throw PreconditionError("probability must lie in [0, 1]");
        const std::uint64_t g = std::gcd(a, b);
        num = a / g;
        den = b / g;
    }

    Rational value() const { return make_rational(Integer(static_cast<unsigned long>(num)), Integer(static_cast<unsigned long>(den))); }
    /// max(p, 1 - p)
    Rational hat() const {
        const Rational p = value();
        const Rational q = 1 - p;
        return p > q ? p : q;
    }
    Probability complement() const { return Probability(den - num, den); }
    std::string to_string() const { return std::to_string(num) + "/" + std::to_string(den); }

    friend bool operator==(const Probability&, const Probability&) = default;
};

/// Parses "a/b" or a bare integer 0 or 1.
inline Probability parse_probability(const std::string& text) {
    const auto slash = text.find('/');
    try {
        std::size_t used = 0;
        if (slash == std::string::npos) {
            const std::uint64_t a = std::stoull(text, &used);
            if (used != text.size()) throw ParseError("trailing characters");
            return Probability(a, 1);
        }
        const std::string a_txt = text.substr(0, slash), b_txt = text.substr(slash + 1);
        const std::uint64_t a = std::stoull(a_txt, &used);
        if (used != a_txt.size()) throw ParseError("trailing characters");
        const std::uint64_t b = std::stoull(b_txt, &used);
        if (used != b_txt.size()) throw ParseError("trailing characters");
        return Probability(a, b);
    } catch (const std::logic_error&) {
        throw ParseError("cannot parse probability '" + text + "' (expected NUM/DEN)");
    } catch (const PreconditionError& e) {
        throw ParseError("invalid probability '" + text + "': " + e.what());
    }
}

/// G(n, p) sampler. Edge {u, v} of trial t is present iff a uniform draw in
/// [0, den) from KeyedStream(seed, t, edge_index(u, v)) is below num.
class GnpSampler {
public:
    GnpSampler(std::size_t n, Probability p, std::uint64_t master_seed) : n_(n), p_(p), seed_(master_seed) {}

    std::size_t order() const noexcept { return n_; }
    const Probability& probability() const noexcept { return p_; }
    std::uint64_t seed() const noexcept { return seed_; }

    Graph sample(std::uint64_t trial_index) const {
        Graph g(n_);
        for (std::size_t v = 1; v < n_; ++v)
            for (std::size_t u = 0; u < v; ++u) {
                KeyedStream stream(seed_, trial_index, edge_index(u, v));
                if (stream.uniform_below(p_.den) < p_.num) g.add_edge(u, v);
            }
        return g;
    }

private:
    std::size_t n_;
    Probability p_;
    std::uint64_t seed_;
};

inline constexpr std::size_t kIsomorphismLimit = 10;
inline constexpr std::size_t kEnumerationLimit = 8;

namespace detail {

// Joint colour refinement of a and b; colours are comparable across the two graphs.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> refine_colours(const Graph& a, const Graph& b) {
    const std::size_t n = a.order();
    std::vector<std::size_t> ca(n), cb(n);
    for (std::size_t v = 0; v < n; ++v) {
        ca[v] = a.degree(v);
        cb[v] = b.degree(v);
    }
    std::size_t classes = 0;
    for (;;) {
        std::map<std::pair<std::size_t, std::vector<std::size_t>>, std::size_t> ids;
        auto signature = [](const Graph& g, const std::vector<std::size_t>& c, std::size_t v) {
            std::vector<std::size_t> nb;
            for (std::size_t u = 0; u < g.order(); ++u)
                if (g.has_edge(u, v)) nb.push_back(c[u]);
            std::sort(nb.begin(), nb.end());
            return std::make_pair(c[v], std::move(nb));
        };
        std::vector<std::pair<std::size_t, std::vector<std::size_t>>> sa(n), sb(n);
        for (std::size_t v = 0; v < n; ++v) {
            sa[v] = signature(a, ca, v);
            sb[v] = signature(b, cb, v);
            ids.emplace(sa[v], 0);
            ids.emplace(sb[v], 0);
        }
        std::size_t next = 0;
        for (auto& [key, id] : ids) id = next++;
        for (std::size_t v = 0; v < n; ++v) {
            ca[v] = ids[sa[v]];
            cb[v] = ids[sb[v]];
        }
        if (ids.size() == classes) break;
        classes = ids.size();
    }
    return {std::move(ca), std::move(cb)};
}

inline bool extend_mapping(const Graph& a, const Graph& b, const std::vector<std::size_t>& order,
                           const std::vector<std::size_t>& ca, const std::vector<std::size_t>& cb,
                           std::vector<std::size_t>& map, std::vector<bool>& used, std::size_t depth) {
    if (depth == order.size()) return true;
    const std::size_t v = order[depth];
    for (std::size_t w = 0; w < b.order(); ++w) {
        if (used[w] || cb[w] != ca[v]) continue;
        bool ok = true;
        for (std::size_t k = 0; k < depth && ok; ++k) {
            const std::size_t u = order[k];
            ok = a.has_edge(u, v) == b.has_edge(map[u], w);
        }
        if (!ok) continue;
        map[v] = w;
        used[w] = true;
        if (extend_mapping(a, b, order, ca, cb, map, used, depth + 1)) return true;
        used[w] = false;
    }
    return false;
}

} // namespace detail

/// Exhaustive isomorphism test with colour-refinement pruning.
inline bool are_isomorphic(const Graph& a, const Graph& b, std::size_t limit = kIsomorphismLimit) {
    if (a.order() > limit || b.order() > limit)
        throw GuardError("are_isomorphic: order exceeds limit " + std::to_string(limit));
    if (a.order() != b.order() || a.edge_count() != b.edge_count()) return false;
    const std::size_t n = a.order();
    auto [ca, cb] = detail::refine_colours(a, b);
    std::vector<std::size_t> ha = ca, hb = cb;
    std::sort(ha.begin(), ha.end());
    std::sort(hb.begin(), hb.end());
    if (ha != hb) return false;

    // Map the rarest colour classes first.
    std::map<std::size_t, std::size_t> freq;
    for (auto c : ca) ++freq[c];
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return std::make_pair(freq[ca[x]], ca[x]) < std::make_pair(freq[ca[y]], ca[y]);
    });
    std::vector<std::size_t> map(n, 0);
    std::vector<bool> used(n, false);
    return detail::extend_mapping(a, b, order, ca, cb, map, used, 0);
}

inline void require_same_order(const Graph& g, const Graph& h) {
    if (g.order() != h.order()) throw DimensionError("graphs must have the same order");
}

/// Non-isomorphic with equal characteristic polynomials.
inline bool is_cospectral(const Graph& g, const Graph& h) {
    require_same_order(g, h);
    if (char_poly(adjacency(g)) != char_poly(adjacency(h))) return false;
    return !are_isomorphic(g, h);
}

/// Cospectral, and the complements are cospectral too.
inline bool is_generalized_cospectral(const Graph& g, const Graph& h) {
    require_same_order(g, h);
    if (char_poly(adjacency(g)) != char_poly(adjacency(h))) return false;
    if (char_poly(adjacency(complement(g))) != char_poly(adjacency(complement(h)))) return false;
    return !are_isomorphic(g, h);
}

/// Visits all 2^{C(n,2)} labelled graphs on n vertices; bit k of the
/// visit index is the edge with edge_index k. Return false from the visitor to stop.
inline void enumerate_graphs(std::size_t n, const std::function<bool(const Graph&)>& visit,
                             std::size_t limit = kEnumerationLimit) {
    if (n > limit) throw GuardError("enumerate_graphs: order exceeds limit " + std::to_string(limit));
    const std::size_t m = n < 2 ? 0 : n * (n - 1) / 2;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t v = 1; v < n; ++v)
        for (std::size_t u = 0; u < v; ++u) pairs.emplace_back(u, v);
    const std::uint64_t total = std::uint64_t{1} << m;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        Graph g(n);
        for (std::size_t k = 0; k < m; ++k)
            if (mask >> k & 1) g.add_edge(pairs[k].first, pairs[k].second);
        if (!visit(g)) return;
    }
}

} // namespace cospec
