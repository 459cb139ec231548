#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace mclump;
using testutil::random_irreducible_chain;
using testutil::reference_chain;
using Catch::Matchers::WithinAbs;

namespace {

// Coupled one-step pair of the chain: Z is the previous state, X the next.
JointDistribution one_step_joint(const TransitionMatrix& P) {
    StationaryDistribution sd = stationary(P);
    std::vector<double> mass(P.size() * P.size(), 0.0);
    for (std::size_t x = 0; x < P.size(); ++x)
        for (std::size_t z = 0; z < P.size(); ++z)
            mass[x * P.size() + z] = sd.mu[z] * P(z, x);
    return JointDistribution(P.size(), P.size(), std::move(mass));
}

LumpingFunction random_surjective_lumping(std::size_t n, std::mt19937_64& rng) {
    std::size_t m = 1 + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
    if (m > n) m = n;
    std::vector<int> map(n);
    for (std::size_t x = 0; x < n; ++x)
        map[x] = x < m ? static_cast<int>(x)
                       : static_cast<int>(uniform01(rng) * static_cast<double>(m));
    return LumpingFunction(n, m, std::move(map));
}

}  // namespace

TEST_CASE("joint distribution representation") {
    SECTION("validation") {
        REQUIRE_NOTHROW(JointDistribution::from_rows({{0.25, 0.25}, {0.25, 0.25}}));
        REQUIRE_THROWS_AS(JointDistribution(0, 2, {}), ValidationError);
        REQUIRE_THROWS_AS(JointDistribution(2, 2, {0.25, 0.25, 0.5}), ValidationError);
        REQUIRE_THROWS_AS(JointDistribution::from_rows({{0.5, -0.1}, {0.3, 0.3}}),
                          ValidationError);
        REQUIRE_THROWS_AS(JointDistribution::from_rows({{0.5, 0.2}, {0.2, 0.2}}),
                          ValidationError);
        REQUIRE_THROWS_AS(JointDistribution::from_rows({{1.5, 0.0}, {0.0, -0.5}}),
                          ValidationError);
    }
    SECTION("marginal over the side information") {
        JointDistribution Q = JointDistribution::from_rows({{0.1, 0.3}, {0.2, 0.4}});
        REQUIRE(Q.x_size() == 2);
        REQUIRE(Q.z_size() == 2);
        std::vector<double> mx = Q.marginal_x();
        REQUIRE_THAT(mx[0], WithinAbs(0.4, 1e-15));
        REQUIRE_THAT(mx[1], WithinAbs(0.6, 1e-15));
    }
}

TEST_CASE("deterministic channel of a lumping") {
    LumpingFunction g(4, 2, {0, 0, 1, 1});
    Matrix W = channel_from_lumping(g);
    REQUIRE(W.rows == 4);
    REQUIRE(W.cols == 2);
    for (std::size_t x = 0; x < 4; ++x)
        for (std::size_t y = 0; y < 2; ++y)
            REQUIRE(W(x, y) == (static_cast<int>(y) == g(x) ? 1.0 : 0.0));
}

TEST_CASE("conditional entropy of the source given output and side information") {
    SECTION("noiseless channel leaves nothing unknown") {
        JointDistribution Q = JointDistribution::from_rows({{0.2, 0.1}, {0.3, 0.4}});
        Matrix W = Matrix::from_rows({{1.0, 0.0}, {0.0, 1.0}});
        REQUIRE(conditional_entropy_xyz(Q, W) == 0.0);
    }
    SECTION("useless channel falls back to the side-information entropy") {
        JointDistribution Q = JointDistribution::from_rows(
            {{1.0 / 6, 1.0 / 6}, {1.0 / 6, 1.0 / 6}, {1.0 / 6, 1.0 / 6}});
        Matrix W = Matrix::from_rows({{1.0}, {1.0}, {1.0}});
        REQUIRE_THAT(conditional_entropy_xyz(Q, W), WithinAbs(std::log(3.0), 1e-12));
    }
    SECTION("channel output can only help") {
        std::mt19937_64 rng(61);
        for (int trial = 0; trial < 20; ++trial) {
            TransitionMatrix P = random_irreducible_chain(3, 0.6, rng);
            JointDistribution Q = one_step_joint(P);
            Matrix blind(3, 1);
            for (std::size_t x = 0; x < 3; ++x) blind(x, 0) = 1.0;
            double no_help = conditional_entropy_xyz(Q, blind);
            Matrix W(3, 2);
            for (std::size_t x = 0; x < 3; ++x) {
                W(x, 0) = uniform01(rng);
                W(x, 1) = 1.0 - W(x, 0);
            }
            double helped = conditional_entropy_xyz(Q, W);
            REQUIRE(helped >= 0.0);
            REQUIRE(helped <= no_help + 1e-12);
        }
    }
    SECTION("matches the chain-specific loss formula") {
        std::mt19937_64 rng(62);
        for (int trial = 0; trial < 20; ++trial) {
            std::size_t n = 2 + static_cast<std::size_t>(trial) % 3;
            TransitionMatrix P = random_irreducible_chain(n, 0.5, rng);
            LumpingFunction g = random_surjective_lumping(n, rng);
            REQUIRE_THAT(conditional_entropy_xyz(one_step_joint(P), g),
                         WithinAbs(conditional_entropy_given_lump_and_prev(P, g), 1e-12));
        }
    }
    SECTION("invariant under relabeling the source symbols") {
        JointDistribution Q = JointDistribution::from_rows({{0.3, 0.1}, {0.05, 0.25}, {0.2, 0.1}});
        Matrix W = Matrix::from_rows({{0.7, 0.3}, {0.5, 0.5}, {0.1, 0.9}});
        // swap source symbols 0 and 2 in both Q and W
        JointDistribution Qp = JointDistribution::from_rows({{0.2, 0.1}, {0.05, 0.25}, {0.3, 0.1}});
        Matrix Wp = Matrix::from_rows({{0.1, 0.9}, {0.5, 0.5}, {0.7, 0.3}});
        REQUIRE_THAT(conditional_entropy_xyz(Qp, Wp),
                     WithinAbs(conditional_entropy_xyz(Q, W), 1e-14));
    }
    SECTION("channel shape is validated") {
        JointDistribution Q = JointDistribution::from_rows({{0.5, 0.5}});
        REQUIRE_THROWS_AS(conditional_entropy_xyz(Q, Matrix::from_rows({{1.0}, {1.0}})),
                          ValidationError);
        REQUIRE_THROWS_AS(conditional_entropy_xyz(Q, Matrix::from_rows({{0.7, 0.7}})),
                          ValidationError);
    }
}

TEST_CASE("zero-error condition") {
    TransitionMatrix P = reference_chain();
    JointDistribution Q = one_step_joint(P);

    SECTION("the lossless lumping satisfies both sides") {
        ZeroErrorCheck c = check_zero_error(Q, LumpingFunction(4, 2, {0, 0, 1, 1}));
        REQUIRE(c.edges_subset);
        REQUIRE(c.conditional_entropy == 0.0);
        REQUIRE(c.entropy_zero);
        REQUIRE(c.consistent);
    }
    SECTION("the crossed lumping fails both sides") {
        ZeroErrorCheck c = check_zero_error(Q, LumpingFunction(4, 2, {0, 1, 0, 1}));
        REQUIRE_FALSE(c.edges_subset);
        REQUIRE(c.conditional_entropy > 1e-3);
        REQUIRE_FALSE(c.entropy_zero);
        REQUIRE(c.consistent);
    }
    SECTION("determining side information accepts any channel") {
        JointDistribution diag = JointDistribution::from_rows({{0.6, 0.0}, {0.0, 0.4}});
        Matrix noisy = Matrix::from_rows({{0.5, 0.5}, {0.5, 0.5}});
        ZeroErrorCheck c = check_zero_error(diag, noisy);
        REQUIRE(c.edges_subset);
        REQUIRE(c.entropy_zero);
        REQUIRE(c.consistent);
    }
    SECTION("independent side information accepts only noiseless channels") {
        JointDistribution prod = JointDistribution::from_rows({{0.3, 0.3}, {0.2, 0.2}});
        ZeroErrorCheck clean = check_zero_error(prod, Matrix::from_rows({{1.0, 0.0}, {0.0, 1.0}}));
        REQUIRE(clean.edges_subset);
        REQUIRE(clean.entropy_zero);
        REQUIRE(clean.consistent);
        ZeroErrorCheck dirty = check_zero_error(prod, Matrix::from_rows({{0.6, 0.4}, {0.3, 0.7}}));
        REQUIRE_FALSE(dirty.edges_subset);
        REQUIRE_FALSE(dirty.entropy_zero);
        REQUIRE(dirty.consistent);
    }
    SECTION("the two sides agree across support patterns and channels") {
        std::mt19937_64 rng(63);
        for (int pattern = 1; pattern < 16; ++pattern) {
            for (int draw = 0; draw < 3; ++draw) {
                std::vector<double> mass(4, 0.0);
                double total = 0.0;
                for (int bit = 0; bit < 4; ++bit)
                    if (pattern & (1 << bit)) {
                        mass[static_cast<std::size_t>(bit)] = 0.05 + uniform01(rng);
                        total += mass[static_cast<std::size_t>(bit)];
                    }
                for (double& m : mass) m /= total;
                JointDistribution Qr(2, 2, mass);
                for (int map = 0; map < 4; ++map) {
                    Matrix W(2, 2);
                    W(0, static_cast<std::size_t>(map & 1)) = 1.0;
                    W(1, static_cast<std::size_t>((map >> 1) & 1)) = 1.0;
                    REQUIRE(check_zero_error(Qr, W).consistent);
                }
                Matrix noisy = Matrix::from_rows({{0.5, 0.5}, {0.5, 0.5}});
                REQUIRE(check_zero_error(Qr, noisy).consistent);
            }
        }
    }
    SECTION("the entropy tolerance is a knob") {
        ZeroErrorCheck c = check_zero_error(Q, LumpingFunction(4, 2, {0, 1, 0, 1}), 10.0);
        REQUIRE_FALSE(c.edges_subset);
        REQUIRE(c.entropy_zero);
        REQUIRE_FALSE(c.consistent);
    }
}
