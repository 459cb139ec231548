#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include <mclump/mclump.hpp>

namespace testutil {

using mclump::Graph;
using mclump::Matrix;
using mclump::TransitionMatrix;

// Fixed 4-state reference chain: every state holds with probability 1/2
// or moves along the cycle 0->2->1->3->0.
inline TransitionMatrix reference_chain() {
    return TransitionMatrix::from_rows({
        {0.5, 0.0, 0.5, 0.0},
        {0.0, 0.5, 0.0, 0.5},
        {0.0, 0.5, 0.5, 0.0},
        {0.5, 0.0, 0.0, 0.5},
    });
}

inline TransitionMatrix two_state_chain(double eps) {
    return TransitionMatrix::from_rows({
        {1.0 - eps, eps},
        {eps, 1.0 - eps},
    });
}

inline std::set<std::pair<int, int>> edge_set(const Graph& g) {
    auto e = g.edges();
    return {e.begin(), e.end()};
}

// Random irreducible row-stochastic matrix: a directed Hamiltonian cycle
// guarantees irreducibility, extra edges added with the given density,
// positive weights normalized per row.
inline TransitionMatrix random_irreducible_chain(std::size_t n, double extra_density,
                                                 std::mt19937_64& rng) {
    std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
    for (std::size_t x = 0; x < n; ++x) {
        rows[x][(x + 1) % n] = 0.05 + mclump::uniform01(rng);
        for (std::size_t y = 0; y < n; ++y)
            if (y != (x + 1) % n && mclump::uniform01(rng) < extra_density)
                rows[x][y] = 0.05 + mclump::uniform01(rng);
        double s = 0.0;
        for (double v : rows[x]) s += v;
        for (double& v : rows[x]) v /= s;
    }
    return TransitionMatrix::from_rows(rows);
}

// Random irreducible chain whose every out-degree is at most d_cap.
inline TransitionMatrix random_sparse_chain(std::size_t n, std::size_t d_cap,
                                            std::mt19937_64& rng) {
    std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
    for (std::size_t x = 0; x < n; ++x) {
        std::set<std::size_t> targets{(x + 1) % n};
        std::size_t extra = static_cast<std::size_t>(mclump::uniform01(rng) * (d_cap - 0.001));
        while (targets.size() < 1 + extra)
            targets.insert(static_cast<std::size_t>(mclump::uniform01(rng) * n));
        for (std::size_t y : targets) rows[x][y] = 0.05 + mclump::uniform01(rng);
        double s = 0.0;
        for (double v : rows[x]) s += v;
        for (double& v : rows[x]) v /= s;
    }
    return TransitionMatrix::from_rows(rows);
}

inline Graph random_graph(std::size_t n, double density, std::mt19937_64& rng) {
    Graph g(n);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v)
            if (mclump::uniform01(rng) < density) g.add_edge(u, v);
    return g;
}

// Number of length-k state sequences with positive probability, counted
// by direct path extension over the positive-mass start states.
inline std::uint64_t count_realizable_paths(const mclump::TransitionMatrix& P, std::size_t k) {
    mclump::StationaryDistribution sd = mclump::stationary(P);
    mclump::AdjacencyMatrix A = mclump::adjacency(P);
    std::vector<std::uint64_t> paths(P.size(), 0);
    for (std::size_t x = 0; x < P.size(); ++x)
        if (sd.mu[x] > mclump::kPositiveTol) paths[x] = 1;
    for (std::size_t step = 1; step < k; ++step) {
        std::vector<std::uint64_t> next(P.size(), 0);
        for (std::size_t x = 0; x < P.size(); ++x) {
            if (paths[x] == 0) continue;
            A.row(x).for_each([&](std::size_t y) { next[y] += paths[x]; });
        }
        paths = std::move(next);
    }
    std::uint64_t total = 0;
    for (std::uint64_t c : paths) total += c;
    return total;
}

// Exact entropy of the length-n trajectory distribution, by enumeration.
inline double trajectory_entropy(const TransitionMatrix& P, std::size_t n) {
    mclump::StationaryDistribution sd = mclump::stationary(P);
    double h = 0.0;
    std::vector<int> seq(n, 0);
    auto rec = [&](auto&& self, std::size_t depth, double prob) -> void {
        if (prob <= 0.0) return;
        if (depth == n) {
            h -= prob * std::log(prob);
            return;
        }
        for (std::size_t s = 0; s < P.size(); ++s) {
            seq[depth] = static_cast<int>(s);
            double p = depth == 0 ? sd.mu[s] : P(static_cast<std::size_t>(seq[depth - 1]), s);
            self(self, depth + 1, prob * p);
        }
    };
    rec(rec, 0, 1.0);
    return h;
}

// Exact joint entropy of (X1, g(X2), ..., g(Xn)) by trajectory
// enumeration: groups trajectories by their observable image.
inline double lumped_given_start_entropy(const TransitionMatrix& P,
                                         const mclump::LumpingFunction& g, std::size_t n) {
    mclump::StationaryDistribution sd = mclump::stationary(P);
    // key = (x1, y2..yn); probability mass accumulated over trajectories
    std::map<std::vector<int>, double> mass;
    std::vector<int> seq(n, 0);
    auto rec = [&](auto&& self, std::size_t depth, double prob) -> void {
        if (prob <= 0.0) return;
        if (depth == n) {
            std::vector<int> key(n);
            key[0] = seq[0];
            for (std::size_t t = 1; t < n; ++t)
                key[t] = g(static_cast<std::size_t>(seq[t]));
            mass[key] += prob;
            return;
        }
        for (std::size_t s = 0; s < P.size(); ++s) {
            seq[depth] = static_cast<int>(s);
            double p = depth == 0 ? sd.mu[s] : P(static_cast<std::size_t>(seq[depth - 1]), s);
            self(self, depth + 1, prob * p);
        }
    };
    rec(rec, 0, 1.0);
    double h = 0.0;
    for (const auto& [key, p] : mass)
        if (p > 0.0) h -= p * std::log(p);
    return h;
}

// H(X2..Xn | X1, g(X2)..g(Xn)) = H(X1..Xn) - H(X1, g(X2)..g(Xn)), exact.
inline double residual_entropy_given_lumps(const TransitionMatrix& P,
                                           const mclump::LumpingFunction& g, std::size_t n) {
    return trajectory_entropy(P, n) - lumped_given_start_entropy(P, g, n);
}

// Entropy rate of the lumped process when the lumping is strongly lumpable
// (identical lumped row sums inside every block); returns false otherwise.
inline bool strongly_lumped_entropy_rate(const TransitionMatrix& P,
                                         const mclump::LumpingFunction& g, double& rate_out) {
    const std::size_t m = g.range_size();
    std::vector<std::vector<double>> lumped(m, std::vector<double>(m, -1.0));
    for (std::size_t x = 0; x < P.size(); ++x) {
        std::vector<double> row(m, 0.0);
        for (std::size_t y = 0; y < P.size(); ++y)
            row[static_cast<std::size_t>(g(y))] += P(x, y);
        auto& target = lumped[static_cast<std::size_t>(g(x))];
        if (target[0] < 0.0) {
            target = row;
        } else {
            for (std::size_t j = 0; j < m; ++j)
                if (std::abs(target[j] - row[j]) > 1e-12) return false;
        }
    }
    rate_out = mclump::entropy_rate(TransitionMatrix::from_rows(lumped));
    return true;
}

}  // namespace testutil
