#include <gtest/gtest.h>

#include <random>

#include "cospec/exact_linalg.hpp"
#include "cospec/graph.hpp"
#include "cospec/ortho.hpp"
#include "oracles.hpp"

using namespace cospec;

namespace {

Rational frac(long a, long b) { return make_rational(a, b); }

bool is_diagonal(const IntegerMatrix& d) {
    for (std::size_t i = 0; i < d.rows(); ++i)
        for (std::size_t j = 0; j < d.cols(); ++j)
            if (i != j && d(i, j) != 0) return false;
    return true;
}

void expect_snf_contract(const IntegerMatrix& m) {
    const SmithForm f = smith_normal_form(m);
    EXPECT_EQ(f.U * m * f.V, f.D);
    EXPECT_TRUE(is_diagonal(f.D));
    EXPECT_EQ(abs(determinant(f.U)), 1);
    EXPECT_EQ(abs(determinant(f.V)), 1);
    const auto d = f.invariant_factors();
    for (std::size_t i = 0; i < d.size(); ++i) {
        EXPECT_GE(d[i], 0);
        if (i + 1 < d.size() && d[i] != 0) { EXPECT_TRUE(mpz_divisible_p(d[i + 1].get_mpz_t(), d[i].get_mpz_t())); }
        if (i + 1 < d.size() && d[i] == 0) { EXPECT_EQ(d[i + 1], 0); }
    }
}

} // namespace

TEST(Rational, AutoReduced) {
    const Rational x = make_rational(6, -4);
    EXPECT_EQ(x.get_num(), -3);
    EXPECT_EQ(x.get_den(), 2);
    EXPECT_THROW(make_rational(1, 0), PreconditionError);
}

TEST(Matrix, RaggedInitializerRejected) {
    EXPECT_THROW((IntegerMatrix{{1, 2}, {3}}), DimensionError);
    EXPECT_THROW(IntegerMatrix(2, 2, std::vector<Integer>(3)), DimensionError);
}

TEST(CharPoly, SwapMatrix) {
    EXPECT_EQ(char_poly(IntegerMatrix{{0, 1}, {1, 0}}), (IntegerPolynomial{-1, 0, 1}));
}

TEST(CharPoly, ZeroMatrix) {
    EXPECT_EQ(char_poly(IntegerMatrix(3, 3)), (IntegerPolynomial{0, 0, 0, 1}));
}

TEST(CharPoly, FourCycle) {
    const auto p = char_poly(adjacency(Graph::cycle(4)));
    EXPECT_EQ(p, (IntegerPolynomial{0, 0, -4, 0, 1}));
    EXPECT_EQ(p.to_string(), "x^4 - 4x^2");
    EXPECT_EQ(p, oracle::cofactor_char_poly(adjacency(Graph::cycle(4))));
}

TEST(CharPoly, NonSquareRejected) { EXPECT_THROW(char_poly(IntegerMatrix(2, 3)), DimensionError); }

TEST(CharPoly, MatchesCofactorOracleOnRandomMatrices) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 1 + t % 6;
        const auto m = oracle::random_matrix(rng, n, n, -9, 9);
        const auto p = char_poly(m);
        ASSERT_EQ(p, oracle::cofactor_char_poly(m)) << m;
        EXPECT_TRUE(p.is_monic());
        EXPECT_EQ(p.degree(), n);
    }
}

TEST(CharPoly, SignedPermutationConjugationPreservesIt) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 2 + t % 5;
        const auto a = adjacency(oracle::random_graph(rng, n));
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<int> signs(n);
        for (auto& s : signs) s = rng() & 1 ? 1 : -1;
        const auto p = signed_permutation(perm, signs);
        const auto b = conjugate(p.matrix(), a);
        ASSERT_TRUE(is_integral(b));
        EXPECT_EQ(char_poly(to_integer(b)), char_poly(a));
    }
}

TEST(Determinant, MatchesCofactorOracle) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + t % 6;
        const auto m = oracle::random_matrix(rng, n, n, -9, 9);
        EXPECT_EQ(determinant(m), oracle::cofactor_det(m));
    }
}

TEST(Smith, DiagTwoThree) {
    const IntegerMatrix m{{2, 0}, {0, 3}};
    const auto f = smith_normal_form(m);
    EXPECT_EQ(f.D, (IntegerMatrix{{1, 0}, {0, 6}}));
    EXPECT_EQ(f.invariant_factors(), oracle::invariant_factors(m));
    expect_snf_contract(m);
}

TEST(Smith, Identity) {
    const auto f = smith_normal_form(IntegerMatrix::identity(4));
    EXPECT_EQ(f.D, IntegerMatrix::identity(4));
}

TEST(Smith, RankDeficient) {
    const IntegerMatrix m{{2, 4}, {4, 8}};
    EXPECT_EQ(smith_normal_form(m).D, (IntegerMatrix{{2, 0}, {0, 0}}));
    expect_snf_contract(m);
}

TEST(Smith, RandomMatricesMatchDeterminantalDivisors) {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 300; ++t) {
        const std::size_t r = 1 + t % 5, c = 1 + (t / 5) % 5;
        const auto m = oracle::random_matrix(rng, r, c, -9, 9);
        expect_snf_contract(m);
        EXPECT_EQ(smith_normal_form(m).invariant_factors(), oracle::invariant_factors(m)) << m;
    }
}

TEST(Rank, Examples) {
    EXPECT_EQ(rank_rational(IntegerMatrix::identity(4)), 4u);
    EXPECT_EQ(rank_rational(IntegerMatrix{{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}), 1u);
    EXPECT_EQ(rank_rational(walk_matrix_of(Graph::path(3))), 2u);
    EXPECT_EQ(rank_rational(RationalMatrix{{frac(1, 2), frac(1, 3)}, {frac(3, 2), 1}}), 1u);
}

TEST(Rank, ModularAgreesWithExact) {
    std::mt19937_64 rng(23);
    std::vector<std::uint64_t> primes{kMersenne61, 2305843009213693921ULL, 2305843009213693907ULL};
    for (int t = 0; t < 300; ++t) {
        const std::size_t r = 1 + t % 6, c = 1 + (t / 6) % 6;
        // Low-rank products make the deficient branch common.
        const std::size_t k = 1 + t % 4;
        const auto m = oracle::random_matrix(rng, r, k, -3, 3) * oracle::random_matrix(rng, k, c, -3, 3);
        const std::size_t exact = integer_rank(m);
        const auto d = oracle::invariant_factors(m);
        EXPECT_EQ(exact, static_cast<std::size_t>(std::count_if(d.begin(), d.end(), [](const Integer& x) { return x != 0; })));
        for (auto p : primes) {
            const std::size_t mod = rank_mod_prime(m, p);
            EXPECT_LE(mod, exact);
            if (mod == std::min(r, c)) { EXPECT_EQ(mod, exact); }
        }
        EXPECT_EQ(rank_rational(m), exact);
    }
}

TEST(Conjugate, IdentityIsNoOp) {
    const auto a = adjacency(Graph::cycle(5));
    EXPECT_EQ(conjugate(RationalMatrix::identity(5), a), to_rational(a));
}

TEST(Conjugate, LevelFiveRotation) {
    const RationalMatrix q{{frac(3, 5), frac(-4, 5)}, {frac(4, 5), frac(3, 5)}};
    const IntegerMatrix a{{0, 1}, {1, 0}};
    const RationalMatrix want{{frac(24, 25), frac(-7, 25)}, {frac(-7, 25), frac(-24, 25)}};
    const auto got = conjugate(q, a);
    EXPECT_EQ(got, want);
    EXPECT_EQ(got, q.transpose() * to_rational(a) * q);
    EXPECT_FALSE(is_integral(got));
}

TEST(Conjugate, DimensionMismatch) {
    EXPECT_THROW(conjugate(RationalMatrix::identity(2), IntegerMatrix::identity(3)), DimensionError);
}

TEST(Integral, Examples) {
    EXPECT_TRUE(is_integral(RationalMatrix::identity(3)));
    EXPECT_FALSE(is_integral(RationalMatrix{{frac(1, 2)}}));
    EXPECT_THROW(to_integer(RationalMatrix{{frac(1, 2)}}), PreconditionError);
}

TEST(Inverse, RoundTrip) {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 50; ++t) {
        const auto m = oracle::random_matrix(rng, 4, 4, -5, 5);
        if (determinant(m) == 0) continue;
        EXPECT_EQ(inverse(to_rational(m)) * to_rational(m), RationalMatrix::identity(4));
    }
}
