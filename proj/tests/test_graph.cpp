#include <gtest/gtest.h>

#include <random>

#include "cospec/graph.hpp"
#include "cospec/graph6.hpp"
#include "oracles.hpp"

using namespace cospec;

namespace {

Graph star4() { return Graph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}); }
Graph c4_plus_k1() { return disjoint_union(Graph::cycle(4), Graph(1)); }

IntegerMatrix all_ones(std::size_t n) { return IntegerMatrix(n, n, std::vector<Integer>(n * n, Integer(1))); }

} // namespace

TEST(Adjacency, SmallGraphs) {
    EXPECT_EQ(adjacency(Graph(1)), IntegerMatrix{{0}});
    EXPECT_EQ(adjacency(Graph::complete(2)), (IntegerMatrix{{0, 1}, {1, 0}}));
    EXPECT_EQ(adjacency(Graph::path(3)), (IntegerMatrix{{0, 1, 0}, {1, 0, 1}, {0, 1, 0}}));
}

TEST(Graph, RejectsLoopsAndBadAdjacency) {
    Graph g(3);
    EXPECT_THROW(g.add_edge(1, 1), PreconditionError);
    EXPECT_THROW(g.add_edge(0, 3), DimensionError);
    EXPECT_THROW(Graph::from_adjacency(IntegerMatrix{{0, 1}, {0, 0}}), PreconditionError);
    EXPECT_THROW(Graph::from_adjacency(IntegerMatrix{{1}}), PreconditionError);
    EXPECT_EQ(Graph::from_adjacency(adjacency(Graph::cycle(5))), Graph::cycle(5));
}

TEST(Complement, Examples) {
    EXPECT_EQ(complement(Graph(3)), Graph::complete(3));
    EXPECT_EQ(complement(Graph::complete(4)), Graph(4));
    EXPECT_EQ(complement(Graph::path(3)), Graph(3, {{0, 2}}));
}

TEST(Complement, InvolutionAndMatrixIdentity) {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 1 + t % 9;
        const Graph g = oracle::random_graph(rng, n);
        EXPECT_EQ(complement(complement(g)), g);
        EXPECT_EQ(adjacency(complement(g)), all_ones(n) - IntegerMatrix::identity(n) - adjacency(g));
    }
}

TEST(WalkMatrix, Examples) {
    const auto k1 = walk_matrix(Graph(1));
    EXPECT_EQ(k1.W, IntegerMatrix{{1}});
    EXPECT_TRUE(k1.controllable);
    EXPECT_EQ(k1.d_n, 1);

    const auto p3 = walk_matrix(Graph::path(3));
    EXPECT_EQ(p3.W, (IntegerMatrix{{1, 1, 2}, {1, 2, 2}, {1, 1, 2}}));
    EXPECT_FALSE(p3.controllable);
    EXPECT_EQ(p3.d_n, 0);
}

TEST(WalkMatrix, ControllableIffNonzeroDeterminantUpToSix) {
    for (std::size_t n = 1; n <= 6; ++n)
        enumerate_graphs(n, [](const Graph& g) {
            const auto w = walk_matrix(g);
            const bool det_nonzero = determinant(w.W) != 0;
            EXPECT_EQ(w.controllable, det_nonzero);
            EXPECT_EQ(w.controllable, w.d_n != 0);
            EXPECT_EQ(is_controllable(g), w.controllable);
            if (w.controllable) { EXPECT_EQ(w.d_n, oracle::invariant_factors(w.W).back()); }
            return true;
        });
}

TEST(WalkMatrix, NoControllableGraphsOfOrderTwoToFive) {
    for (std::size_t n = 2; n <= 5; ++n) {
        std::size_t count = 0;
        enumerate_graphs(n, [&](const Graph& g) {
            count += determinant(walk_matrix_of(g)) != 0;
            return true;
        });
        EXPECT_EQ(count, 0u) << "n = " << n;
    }
}

TEST(Sampler, DegenerateProbabilities) {
    for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
        EXPECT_EQ(GnpSampler(7, Probability(0, 1), seed).sample(3), Graph(7));
        EXPECT_EQ(GnpSampler(7, Probability(1, 1), seed).sample(3), Graph::complete(7));
    }
}

TEST(Sampler, Deterministic) {
    const GnpSampler s(12, Probability(1, 2), 1234);
    EXPECT_EQ(s.sample(5), s.sample(5));
    EXPECT_EQ(s.sample(5), GnpSampler(12, Probability(2, 4), 1234).sample(5));
}

TEST(Sampler, FrozenStreamValues) {
    // Independent reimplementation of the keyed SplitMix64 scheme.
    KeyedStream s(0, 0, 0);
    EXPECT_EQ(s.next(), 0x2130748aaac80268ULL);
    EXPECT_EQ(s.next(), 0xfef20756abb059a6ULL);
    EXPECT_EQ(s.next(), 0x68a8caf5bbee94f6ULL);
    EXPECT_EQ(GnpSampler(6, Probability(1, 2), 42).sample(3),
              Graph(6, {{0, 1}, {0, 3}, {0, 4}, {2, 4}, {1, 5}, {2, 5}}));
    EXPECT_EQ(GnpSampler(7, Probability(1, 3), 7).sample(0),
              Graph(7, {{0, 2}, {1, 2}, {2, 4}, {3, 5}, {4, 5}, {5, 6}}));
}

TEST(Sampler, EdgeFrequencyNearP) {
    const GnpSampler s(30, Probability(1, 3), 8);
    std::size_t edges = 0;
    for (std::uint64_t t = 0; t < 200; ++t) edges += s.sample(t).edge_count();
    const double freq = static_cast<double>(edges) / (200.0 * 435.0);
    EXPECT_NEAR(freq, 1.0 / 3.0, 0.01);
}

TEST(Probability, ParseAndHat) {
    EXPECT_EQ(parse_probability("2/4"), Probability(1, 2));
    EXPECT_EQ(parse_probability("1"), Probability(1, 1));
    EXPECT_EQ(parse_probability("1/3").hat(), make_rational(2, 3));
    EXPECT_EQ(parse_probability("1/2").hat(), make_rational(1, 2));
    EXPECT_THROW(parse_probability("3/2"), ParseError);
    EXPECT_THROW(parse_probability("1/0"), ParseError);
    EXPECT_THROW(parse_probability("0.5"), ParseError);
    EXPECT_THROW(parse_probability("a/b"), ParseError);
}

TEST(Isomorphism, Examples) {
    EXPECT_FALSE(are_isomorphic(Graph::path(3), Graph::complete(3)));
    EXPECT_FALSE(are_isomorphic(star4(), c4_plus_k1()));
    EXPECT_TRUE(are_isomorphic(Graph::cycle(5), Graph(5, {{0, 2}, {2, 4}, {4, 1}, {1, 3}, {3, 0}})));
}

TEST(Isomorphism, RandomRelabelling) {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 1 + t % 10;
        const Graph g = oracle::random_graph(rng, n);
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        EXPECT_TRUE(are_isomorphic(g, g.relabel(perm)));
    }
}

TEST(Isomorphism, AgreesWithBruteForce) {
    std::mt19937_64 rng(10);
    for (int t = 0; t < 400; ++t) {
        const std::size_t n = 2 + t % 6;
        const Graph a = oracle::random_graph(rng, n), b = oracle::random_graph(rng, n);
        EXPECT_EQ(are_isomorphic(a, b), oracle::brute_isomorphic(a, b));
    }
}

TEST(Isomorphism, Guard) { EXPECT_THROW(are_isomorphic(Graph(11), Graph(11)), GuardError); }

TEST(Cospectral, Examples) {
    const Graph g = Graph::cycle(5);
    EXPECT_FALSE(is_cospectral(g, g));
    EXPECT_TRUE(is_cospectral(star4(), c4_plus_k1()));
    EXPECT_FALSE(is_cospectral(Graph::path(3), Graph::complete(3)));
    EXPECT_EQ(oracle::cofactor_char_poly(adjacency(star4())), oracle::cofactor_char_poly(adjacency(c4_plus_k1())));
}

TEST(Cospectral, Generalized) {
    EXPECT_FALSE(is_generalized_cospectral(Graph::cycle(4), Graph::cycle(4)));
    const bool complements_match = oracle::cofactor_char_poly(adjacency(complement(star4()))) ==
                                   oracle::cofactor_char_poly(adjacency(complement(c4_plus_k1())));
    EXPECT_EQ(is_generalized_cospectral(star4(), c4_plus_k1()), complements_match);
    EXPECT_FALSE(is_generalized_cospectral(Graph::path(4), Graph::cycle(4)));
    EXPECT_THROW(is_cospectral(Graph(3), Graph(4)), DimensionError);
}

TEST(Cospectral, SymmetryAndImplication) {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 300; ++t) {
        const Graph a = oracle::random_graph(rng, 5), b = oracle::random_graph(rng, 5);
        EXPECT_EQ(is_cospectral(a, b), is_cospectral(b, a));
        if (is_generalized_cospectral(a, b)) { EXPECT_TRUE(is_cospectral(a, b)); }
    }
}

TEST(Enumerate, Counts) {
    auto count = [](std::size_t n) {
        std::size_t c = 0;
        enumerate_graphs(n, [&](const Graph&) {
            ++c;
            return true;
        });
        return c;
    };
    EXPECT_EQ(count(1), 1u);
    EXPECT_EQ(count(3), 8u);
    EXPECT_EQ(count(5), 1024u);
    EXPECT_THROW(count(9), GuardError);
}

TEST(Graph6, FrozenStrings) {
    EXPECT_EQ(to_graph6(Graph(0)), "?");
    EXPECT_EQ(to_graph6(Graph(1)), "@");
    EXPECT_EQ(to_graph6(Graph::complete(2)), "A_");
    EXPECT_EQ(to_graph6(Graph::path(3)), "Bg");
    EXPECT_EQ(to_graph6(Graph::cycle(4)), "Cl");
    EXPECT_EQ(to_graph6(star4()), "Ds_");
    const Graph petersen(10, {{0, 1}, {0, 4}, {0, 5}, {1, 2}, {1, 6}, {2, 3}, {2, 7}, {3, 4},
                              {3, 8}, {4, 9}, {5, 7}, {5, 8}, {6, 8}, {6, 9}, {7, 9}});
    EXPECT_EQ(to_graph6(petersen), "IheA@GUAo");
    const Graph g12(12, {{0, 1}, {0, 2}, {0, 4}, {0, 6}, {0, 7}, {0, 9}, {0, 10}, {0, 11}, {1, 2},
                         {1, 3}, {1, 5}, {1, 6}, {1, 10}, {2, 3}, {2, 5}, {2, 6}, {2, 7}, {2, 8},
                         {2, 10}, {3, 5}, {3, 7}, {3, 8}, {3, 9}, {3, 11}, {4, 5}, {4, 7}, {4, 8},
                         {4, 11}, {5, 10}, {6, 7}, {6, 8}, {6, 10}, {6, 11}, {7, 8}, {8, 10}, {10, 11}});
    EXPECT_EQ(to_graph6(g12), "Kz`~DszcFLRP");
    const std::string long_path = to_graph6(Graph::path(70));
    EXPECT_EQ(long_path.size(), 407u);
    EXPECT_EQ(long_path.substr(0, 10), "~?@EhCGGC@");
}

TEST(Graph6, RoundTrip) {
    std::mt19937_64 rng(6);
    for (std::size_t n : {0u, 1u, 2u, 5u, 62u, 63u, 70u, 130u}) {
        const Graph g = oracle::random_graph(rng, n);
        EXPECT_EQ(from_graph6(to_graph6(g)), g) << n;
    }
    EXPECT_EQ(from_graph6(">>graph6<<Cl"), Graph::cycle(4));
    EXPECT_EQ(from_graph6("Cl\n"), Graph::cycle(4));
}

TEST(Graph6, Malformed) {
    EXPECT_THROW(from_graph6(""), ParseError);
    EXPECT_THROW(from_graph6("C"), ParseError);
    EXPECT_THROW(from_graph6("Clx"), ParseError);
    EXPECT_THROW(from_graph6("A\x7f"), ParseError);
    EXPECT_THROW(from_graph6("Am"), ParseError); // padding bits set
}
