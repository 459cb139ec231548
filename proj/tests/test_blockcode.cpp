#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace mclump;
using testutil::random_irreducible_chain;
using testutil::reference_chain;
using Catch::Matchers::WithinAbs;

namespace {

// Stochastic channel with a random support pattern, at least one positive
// entry per row.
Matrix random_channel(std::size_t n, std::size_t nz, std::mt19937_64& rng) {
    Matrix W(n, nz);
    for (std::size_t a = 0; a < n; ++a) {
        W(a, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(nz))) =
            0.2 + uniform01(rng);
        for (std::size_t z = 0; z < nz; ++z)
            if (W(a, z) == 0.0 && uniform01(rng) < 0.5) W(a, z) = 0.2 + uniform01(rng);
        double s = W.row_sum(a);
        for (std::size_t z = 0; z < nz; ++z) W(a, z) /= s;
    }
    return W;
}

}  // namespace

TEST_CASE("blocked characteristic graph") {
    TransitionMatrix P = reference_chain();

    SECTION("single-letter blocks reproduce the chain graph") {
        BlockedChain bc = block(P, 1);
        REQUIRE(blocked_characteristic_subgraph(bc) == chain_characteristic_graph(P));
    }
    SECTION("two-letter blocks join the first-symbol groups pairwise") {
        BlockedChain bc = block(P, 2);
        Graph g = blocked_characteristic_subgraph(bc);
        REQUIRE(g.size() == 8);
        REQUIRE(g.edge_count() == 8);
        // realizable sequences in lexicographic order group as two per
        // first symbol; merges happen exactly across {0,1} and {2,3}
        REQUIRE(testutil::edge_set(g) ==
                std::set<std::pair<int, int>>{{0, 2}, {0, 3}, {1, 2}, {1, 3},
                                              {4, 6}, {4, 7}, {5, 6}, {5, 7}});
    }
    SECTION("matches direct evaluation of one-step block access") {
        std::mt19937_64 rng(51);
        for (int trial = 0; trial < 12; ++trial) {
            std::size_t n = 2 + static_cast<std::size_t>(trial) % 2;
            TransitionMatrix Q = random_irreducible_chain(n, 0.5, rng);
            for (std::size_t K = 1; K <= 3; ++K) {
                BlockedChain bc = block(Q, K);
                Graph g = blocked_characteristic_subgraph(bc);
                const auto& real = bc.realizable();
                for (std::size_t i = 0; i < real.size(); ++i)
                    for (std::size_t j = i + 1; j < real.size(); ++j) {
                        bool accessible = false;
                        for (std::uint64_t w : real)
                            if (bc.access(w, real[i]) && bc.access(w, real[j])) {
                                accessible = true;
                                break;
                            }
                        REQUIRE(g.has_edge(i, j) == !accessible);
                    }
            }
        }
    }
    SECTION("full-alphabet version adds a universal clique of dead sequences") {
        BlockedChain bc = block(P, 2);
        Graph full = blocked_characteristic_graph(bc);
        REQUIRE(full.size() == 16);
        REQUIRE(full.edge_count() == 8 * 7 / 2 + 8 * 8 + 8);
        const auto& real = bc.realizable();
        std::vector<char> is_real(16, 0);
        for (std::uint64_t u : real) is_real[static_cast<std::size_t>(u)] = 1;
        for (std::size_t u = 0; u < 16; ++u)
            if (!is_real[u]) REQUIRE(full.neighbors(u).count() == 15);
        Graph sub = blocked_characteristic_subgraph(bc);
        for (std::size_t i = 0; i < real.size(); ++i)
            for (std::size_t j = i + 1; j < real.size(); ++j)
                REQUIRE(sub.has_edge(i, j) ==
                        full.has_edge(static_cast<std::size_t>(real[i]),
                                      static_cast<std::size_t>(real[j])));
    }
    SECTION("restriction preserves the minimum partition size") {
        std::mt19937_64 rng(52);
        for (int trial = 0; trial < 8; ++trial) {
            TransitionMatrix Q = random_irreducible_chain(3, 0.4, rng);
            BlockedChain bc = block(Q, 2);
            REQUIRE(clique_partition_exact(blocked_characteristic_graph(bc)).size() ==
                    clique_partition_exact(blocked_characteristic_subgraph(bc)).size());
        }
    }
    SECTION("vertex caps") {
        BlockedChain bc = block(P, 3);
        REQUIRE_THROWS_AS(blocked_characteristic_subgraph(bc, 10), ResourceError);
        REQUIRE_THROWS_AS(blocked_characteristic_graph(bc, 10), ResourceError);
    }
}

TEST_CASE("block analysis") {
    TransitionMatrix P = reference_chain();

    SECTION("reference chain meets its asymptotic rate at every length") {
        for (std::size_t K = 1; K <= 4; ++K) {
            BlockAnalysis a = block_analysis(P, K);
            REQUIRE(a.block_len == K);
            REQUIRE(a.realizable_count == 4u << (K - 1));
            REQUIRE(a.alphabet_size == 1u << K);
            REQUIRE(a.exact);
            REQUIRE_THAT(a.rate, WithinAbs(std::log(2.0), 1e-15));
            REQUIRE(a.log_spectral_radius == std::log(2.0));
        }
    }
    SECTION("alphabet never exceeds the realizable count") {
        std::mt19937_64 rng(53);
        for (int trial = 0; trial < 10; ++trial) {
            TransitionMatrix Q = random_irreducible_chain(3, 0.5, rng);
            for (std::size_t K = 1; K <= 3; ++K) {
                BlockAnalysis a = block_analysis(Q, K);
                REQUIRE(a.alphabet_size <= a.realizable_count);
                REQUIRE(a.alphabet_size >= 1);
                REQUIRE(is_valid_clique_partition(
                    blocked_characteristic_subgraph(block(Q, K)), a.partition));
            }
        }
    }
    SECTION("exact rate dominates the spectral-radius rate") {
        std::mt19937_64 rng(54);
        for (int trial = 0; trial < 10; ++trial) {
            TransitionMatrix Q = random_irreducible_chain(4, 0.3, rng);
            for (std::size_t K = 1; K <= 2; ++K) {
                BlockAnalysis a = block_analysis(Q, K);
                REQUIRE(a.exact);
                REQUIRE(a.rate >= a.log_spectral_radius - 1e-9);
            }
        }
    }
    SECTION("single-letter analysis agrees with the lossless lumper") {
        std::mt19937_64 rng(55);
        for (int trial = 0; trial < 10; ++trial) {
            TransitionMatrix Q = random_irreducible_chain(5, 0.4, rng);
            REQUIRE(block_analysis(Q, 1).alphabet_size == lossy_lump(Q, 0.0).g.range_size());
        }
    }
    SECTION("automatic solver budgets one extra vertex for dead sequences") {
        // 32 realizable four-letter sequences: within the exact budget with
        // the one conceptual dead-sequence vertex at 33, over it at 32
        BlockAnalysis wide = block_analysis(P, 4, Solver::automatic, kDefaultEnumCap,
                                            kDefaultGraphCap, 33);
        REQUIRE(wide.exact);
        BlockAnalysis tight = block_analysis(P, 4, Solver::automatic, kDefaultEnumCap,
                                             kDefaultGraphCap, 32);
        REQUIRE_FALSE(tight.exact);
        REQUIRE(tight.alphabet_size >= wide.alphabet_size);
    }
    SECTION("forced solver choice") {
        REQUIRE(block_analysis(P, 2, Solver::exact).exact);
        REQUIRE_FALSE(block_analysis(P, 2, Solver::greedy).exact);
    }
    SECTION("caps propagate") {
        REQUIRE_THROWS_AS(block_analysis(P, 4, Solver::automatic, 100), ResourceError);
        REQUIRE_THROWS_AS(
            block_analysis(P, 4, Solver::automatic, kDefaultEnumCap, 10), ResourceError);
    }
}

TEST_CASE("side-information characteristic graph") {
    TransitionMatrix P = reference_chain();

    SECTION("channel validation") {
        REQUIRE_THROWS_AS(require_channel(Matrix::from_rows({{1.0}, {1.0}}), 3),
                          ValidationError);
        REQUIRE_THROWS_AS(require_channel(Matrix(2, 0), 2), ValidationError);
        REQUIRE_THROWS_AS(require_channel(Matrix::from_rows({{0.7, 0.7}, {0.5, 0.5}}), 2),
                          ValidationError);
    }
    SECTION("noiseless side information distinguishes every realizable pair") {
        Matrix W(4, 4);
        for (std::size_t a = 0; a < 4; ++a) W(a, a) = 1.0;
        Graph g = sideinfo_characteristic_graph_direct(P, W, 1);
        REQUIRE(g.edge_count() == 6);
        REQUIRE(sideinfo_characteristic_graph_formula(P, W, 1) == g);
    }
    SECTION("uninformative side information distinguishes nothing realizable") {
        Matrix W(4, 1);
        for (std::size_t a = 0; a < 4; ++a) W(a, 0) = 1.0;
        REQUIRE(sideinfo_characteristic_graph_direct(P, W, 1) == Graph(4));
        REQUIRE(sideinfo_characteristic_graph_formula(P, W, 1) == Graph(4));
    }
    SECTION("dead sequences make the blocked graph more than the product") {
        TransitionMatrix Q = TransitionMatrix::from_rows({{0.5, 0.5}, {1.0, 0.0}});
        Matrix W = Matrix::from_rows({{0.5, 0.5}, {0.5, 0.5}});
        Graph direct = sideinfo_characteristic_graph_direct(Q, W, 2);
        REQUIRE(direct == sideinfo_characteristic_graph_formula(Q, W, 2));
        // the single-letter graph is empty, so the whole graph comes from
        // the dead sequence (1,1)
        StationaryDistribution sd = stationary(Q);
        Matrix joint(2, 2);
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t z = 0; z < 2; ++z) joint(a, z) = sd.mu[a] * W(a, z);
        REQUIRE(pair_characteristic_graph(joint) == Graph(2));
        REQUIRE(testutil::edge_set(direct) ==
                std::set<std::pair<int, int>>{{0, 3}, {1, 3}, {2, 3}});
    }
    SECTION("compositional construction matches direct enumeration") {
        std::mt19937_64 rng(56);
        for (int trial = 0; trial < 50; ++trial) {
            std::size_t n = 2 + static_cast<std::size_t>(trial) % 2;
            std::size_t nz = 1 + static_cast<std::size_t>(trial) % 3;
            TransitionMatrix Q = random_irreducible_chain(n, 0.5, rng);
            Matrix W = random_channel(n, nz, rng);
            for (std::size_t K = 1; K <= 3; ++K)
                REQUIRE(sideinfo_characteristic_graph_direct(Q, W, K) ==
                        sideinfo_characteristic_graph_formula(Q, W, K));
        }
    }
}
