#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mclump/chain.hpp"
#include "mclump/graph.hpp"
#include "mclump/partition.hpp"
#include "mclump/random.hpp"

namespace mclump {

// Conditional entropy at or below this many nats counts as lossless.
inline constexpr double kLosslessEntropyTol = 1e-12;

// State aggregation map {0..n_in-1} -> {0..n_out-1}, surjective with
// n_out <= n_in: every output symbol names a nonempty group of states.
class LumpingFunction {
public:
    LumpingFunction(std::size_t n_in, std::size_t n_out, std::vector<int> map)
        : n_in_(n_in), n_out_(n_out), map_(std::move(map)) {
        if (map_.size() != n_in_)
            throw ValidationError("lumping map has " + std::to_string(map_.size()) +
                                  " entries, expected " + std::to_string(n_in_));
        if (n_out_ == 0 || n_out_ > n_in_)
            throw ValidationError("lumped alphabet size " + std::to_string(n_out_) +
                                  " must lie in [1, " + std::to_string(n_in_) + "]");
        std::vector<char> hit(n_out_, 0);
        for (std::size_t x = 0; x < n_in_; ++x) {
            if (map_[x] < 0 || static_cast<std::size_t>(map_[x]) >= n_out_)
                throw ValidationError("lumping maps state " + std::to_string(x) +
                                      " to symbol " + std::to_string(map_[x]) +
                                      ", outside [0, " + std::to_string(n_out_) + ")");
            hit[static_cast<std::size_t>(map_[x])] = 1;
        }
        for (std::size_t y = 0; y < n_out_; ++y)
            if (!hit[y])
                throw ValidationError("lumping is not surjective: symbol " + std::to_string(y) +
                                      " has no preimage");
    }

    std::size_t domain_size() const { return n_in_; }
    std::size_t range_size() const { return n_out_; }
    int operator()(std::size_t x) const { return map_[x]; }
    const std::vector<int>& map() const { return map_; }

    // preimage class of each output symbol, as bitsets over the domain
    std::vector<Bitset> preimages() const {
        std::vector<Bitset> pre(n_out_, Bitset(n_in_));
        for (std::size_t x = 0; x < n_in_; ++x)
            pre[static_cast<std::size_t>(map_[x])].set(x);
        return pre;
    }

    bool operator==(const LumpingFunction&) const = default;

private:
    std::size_t n_in_;
    std::size_t n_out_;
    std::vector<int> map_;
};

// Block index becomes the output symbol; canonical partitions give the
// canonical lumping (symbols ordered by minimum member state).
inline LumpingFunction lumping_from_partition(const CliquePartition& p, std::size_t n) {
    std::vector<int> map = p.assignment(n);
    for (std::size_t x = 0; x < n; ++x)
        if (map[x] == -1)
            throw ValidationError("partition does not cover state " + std::to_string(x));
    return LumpingFunction(n, p.size(), std::move(map));
}

inline CliquePartition partition_from_lumping(const LumpingFunction& g) {
    return partition_from_assignment(g.map());
}

// Two states are confusable through the lumping iff it maps them to the
// same symbol: the disjoint union of complete graphs on the preimages.
inline Graph lumping_confusion_graph(const LumpingFunction& g) {
    Graph out(g.domain_size());
    for (std::size_t u = 0; u < g.domain_size(); ++u)
        for (std::size_t v = u + 1; v < g.domain_size(); ++v)
            if (g(u) == g(v)) out.add_edge(u, v);
    return out;
}

// Largest one-step out-degree of the access relation. Every lossless
// lumping needs at least this many output symbols.
inline std::size_t dmax_lower_bound(const AdjacencyMatrix& A) {
    std::size_t d = 0;
    for (std::size_t x = 0; x < A.size(); ++x) d = std::max(d, A.row(x).count());
    return d;
}

// Witness-carrying losslessness check. A lumping loses nothing iff every
// pair it merges is never accessible from a common predecessor, i.e. the
// lumping's confusion graph is a subgraph of the chain's characteristic
// graph. On failure: the lexicographically first merged pair {u, v} some
// state can reach both halves of, and the lowest such state.
struct LosslessCertificate {
    bool lossless = true;
    int u = -1;
    int v = -1;
    int accessor = -1;
};

inline LosslessCertificate certify_lossless(const AdjacencyMatrix& A, const LumpingFunction& g) {
    if (g.domain_size() != A.size())
        throw ValidationError("lumping domain " + std::to_string(g.domain_size()) +
                              " does not match chain size " + std::to_string(A.size()));
    std::vector<Bitset> cols = A.columns();
    for (std::size_t u = 0; u < A.size(); ++u)
        for (std::size_t v = u + 1; v < A.size(); ++v) {
            if (g(u) != g(v)) continue;
            Bitset shared = cols[u] & cols[v];
            if (shared.any())
                return LosslessCertificate{false, static_cast<int>(u), static_cast<int>(v),
                                           static_cast<int>(shared.next(0))};
        }
    return LosslessCertificate{};
}

// H(X2 | Y2, X1) in nats: the per-step uncertainty about the next state
// given its lumped value and the current state,
//   sum_x mu_x * ( -sum_x' P[x,x'] log(P[x,x'] / R[x, g(x')]) )
// where R[x, y] accumulates P[x, .] over the preimage of y.
inline double conditional_entropy_given_lump_and_prev(const TransitionMatrix& P,
                                                      const LumpingFunction& g,
                                                      std::span<const double> mu) {
    const std::size_t n = P.size();
    if (g.domain_size() != n)
        throw ValidationError("lumping domain does not match chain size");
    double total = 0.0;
    std::vector<double> r(g.range_size(), 0.0);
    for (std::size_t x = 0; x < n; ++x) {
        if (mu[x] <= 0.0) continue;
        std::fill(r.begin(), r.end(), 0.0);
        for (std::size_t y = 0; y < n; ++y) r[static_cast<std::size_t>(g(y))] += P(x, y);
        double hx = 0.0;
        for (std::size_t y = 0; y < n; ++y) {
            double p = P(x, y);
            if (p > 0.0) hx -= p * std::log(p / r[static_cast<std::size_t>(g(y))]);
        }
        total += mu[x] * hx;
    }
    return std::max(total, 0.0);
}

inline double conditional_entropy_given_lump_and_prev(const TransitionMatrix& P,
                                                      const LumpingFunction& g) {
    StationaryDistribution sd = stationary(P);
    return conditional_entropy_given_lump_and_prev(P, g, sd.mu);
}

// Graph inclusion test, cross-checked against the entropy criterion: a
// certified-lossless lumping must carry zero per-step uncertainty.
inline LosslessCertificate certify_lossless(const TransitionMatrix& P, const LumpingFunction& g) {
    LosslessCertificate cert = certify_lossless(adjacency(P), g);
    if (cert.lossless) {
        double ce = conditional_entropy_given_lump_and_prev(P, g);
        if (ce > kLosslessEntropyTol)
            throw std::logic_error("certified-lossless lumping has conditional entropy " +
                                   std::to_string(ce));
    }
    return cert;
}

enum class Solver { exact, greedy, automatic };

// Residual uncertainty of a lumping and the generic guarantees that hold
// for partitions of the thresholded characteristic graph. Bounds are
// absent when epsilon violates their precondition (first: epsilon < 1/e,
// second: epsilon < 1/N).
struct LossReport {
    double epsilon = 0.0;
    double conditional_entropy = 0.0;  // nats
    std::optional<double> bound_first;
    std::optional<double> bound_second;
    bool lossless = false;
};

struct LossyLumping {
    LumpingFunction g;
    CliquePartition partition;
    LossReport report;
    bool exact = false;  // partition came from the exact solver
};

namespace detail {

inline CliquePartition solve_partition(const Graph& g, Solver solver, std::size_t exact_cap,
                                       bool& used_exact) {
    switch (solver) {
        case Solver::exact:
            used_exact = true;
            return clique_partition_exact(g, exact_cap);
        case Solver::greedy:
            used_exact = false;
            return clique_partition_greedy(g);
        case Solver::automatic:
        default:
            if (g.size() <= exact_cap) {
                used_exact = true;
                return clique_partition_exact(g, exact_cap);
            }
            used_exact = false;
            return clique_partition_greedy(g);
    }
}

}  // namespace detail

inline LossReport make_loss_report(std::size_t n_states, std::size_t n_symbols, double epsilon,
                                   double conditional_entropy) {
    LossReport rep;
    rep.epsilon = epsilon;
    rep.conditional_entropy = conditional_entropy;
    const double N = static_cast<double>(n_states);
    const double M = static_cast<double>(n_symbols);
    if (epsilon < std::exp(-1.0))
        rep.bound_first = epsilon == 0.0 ? 0.0 : (N - M) * epsilon * (1.0 - std::log(epsilon));
    if (epsilon < 1.0 / N) rep.bound_second = N * binary_entropy(epsilon);
    rep.lossless = conditional_entropy <= kLosslessEntropyTol;
    return rep;
}

// Merge states that stay distinguishable when transition probabilities at
// or below epsilon are treated as impossible: partition the thresholded
// characteristic graph into cliques, lump by block, and report the actual
// per-step loss against the generic bounds.
inline LossyLumping lossy_lump(const TransitionMatrix& P, double epsilon,
                               Solver solver = Solver::automatic,
                               std::size_t exact_cap = kDefaultExactCap) {
    if (epsilon < 0.0 || epsilon >= 1.0)
        throw ValidationError("epsilon must lie in [0, 1), got " + std::to_string(epsilon));
    Graph characteristic = epsilon_characteristic_graph(P, epsilon);
    bool used_exact = false;
    CliquePartition partition =
        detail::solve_partition(characteristic, solver, exact_cap, used_exact);
    LumpingFunction g = lumping_from_partition(partition, P.size());
    double ce = conditional_entropy_given_lump_and_prev(P, g);
    LossReport rep = make_loss_report(P.size(), partition.size(), epsilon, ce);
    if (rep.bound_first && ce > *rep.bound_first + 1e-9)
        throw std::logic_error("loss exceeds its first bound: " + std::to_string(ce) + " > " +
                               std::to_string(*rep.bound_first));
    if (rep.bound_first && rep.bound_second && *rep.bound_first > *rep.bound_second + 1e-9)
        throw std::logic_error("bound ordering violated");
    return LossyLumping{std::move(g), std::move(partition), rep, used_exact};
}

// --- trajectory machinery ---

inline std::vector<int> simulate_chain_from(const TransitionMatrix& P, int x0,
                                            std::size_t length, std::mt19937_64& rng) {
    if (length == 0) throw ValidationError("trajectory length must be at least 1");
    if (x0 < 0 || static_cast<std::size_t>(x0) >= P.size())
        throw ValidationError("initial state " + std::to_string(x0) + " out of range");
    std::vector<int> traj(length);
    traj[0] = x0;
    const double* base = P.matrix().a.data();
    for (std::size_t t = 1; t < length; ++t) {
        std::span<const double> row(base + static_cast<std::size_t>(traj[t - 1]) * P.size(),
                                    P.size());
        traj[t] = sample_index(row, rng);
    }
    return traj;
}

// Seeded stationary trajectory: the first state is drawn from the
// invariant distribution, later ones by stepping the chain. Equal seeds
// give byte-identical sequences on every platform.
inline std::vector<int> simulate_chain(const TransitionMatrix& P, std::size_t length,
                                       std::uint64_t seed) {
    if (length == 0) throw ValidationError("trajectory length must be at least 1");
    StationaryDistribution sd = stationary(P);
    std::mt19937_64 rng(seed);
    int x0 = sample_index(sd.mu, rng);
    return simulate_chain_from(P, x0, length, rng);
}

inline std::vector<int> lump_sequence(const LumpingFunction& g, std::span<const int> states) {
    std::vector<int> out(states.size());
    for (std::size_t i = 0; i < states.size(); ++i)
        out[i] = g(static_cast<std::size_t>(states[i]));
    return out;
}

enum class DecodeStatus { ok, impossible, ambiguous };

// states holds the successfully decoded prefix; on failure failure_index
// is the offset into the observation sequence where decoding stopped, and
// an ambiguous step also reports the clashing candidate states.
struct DecodeResult {
    DecodeStatus status = DecodeStatus::ok;
    std::vector<int> states;
    std::size_t failure_index = static_cast<std::size_t>(-1);
    std::vector<int> candidates;
};

// Zero-error sequential decoder: given the true initial state and the
// lumped values of the following steps, each step's state is the unique
// successor of the previous decoded state inside the observed preimage.
inline DecodeResult reconstruct(const AdjacencyMatrix& A, const LumpingFunction& g, int x1,
                                std::span<const int> observations) {
    if (g.domain_size() != A.size())
        throw ValidationError("lumping domain does not match chain size");
    if (x1 < 0 || static_cast<std::size_t>(x1) >= A.size())
        throw ValidationError("initial state " + std::to_string(x1) + " out of range");
    std::vector<Bitset> pre = g.preimages();
    DecodeResult out;
    out.states.reserve(observations.size());
    std::size_t prev = static_cast<std::size_t>(x1);
    for (std::size_t t = 0; t < observations.size(); ++t) {
        int y = observations[t];
        if (y < 0 || static_cast<std::size_t>(y) >= g.range_size())
            throw ValidationError("observation " + std::to_string(y) + " at position " +
                                  std::to_string(t) + " is outside the lumped alphabet");
        Bitset candidates = pre[static_cast<std::size_t>(y)] & A.row(prev);
        std::size_t n = candidates.count();
        if (n == 0) {
            out.status = DecodeStatus::impossible;
            out.failure_index = t;
            return out;
        }
        if (n > 1) {
            out.status = DecodeStatus::ambiguous;
            out.failure_index = t;
            out.candidates = candidates.to_vector();
            return out;
        }
        prev = candidates.next(0);
        out.states.push_back(static_cast<int>(prev));
    }
    return out;
}

inline DecodeResult reconstruct(const TransitionMatrix& P, const LumpingFunction& g, int x1,
                                std::span<const int> observations) {
    return reconstruct(adjacency(P), g, x1, observations);
}

// Decoder that always commits: among candidates compatible with the
// previous decoded state (falling back to the full preimage when none
// are), picks the most probable successor, lowest state on ties.
inline std::vector<int> forced_decode(const TransitionMatrix& P, const AdjacencyMatrix& A,
                                      const LumpingFunction& g, int x1,
                                      std::span<const int> observations) {
    std::vector<Bitset> pre = g.preimages();
    std::vector<int> out;
    out.reserve(observations.size());
    std::size_t prev = static_cast<std::size_t>(x1);
    for (int y : observations) {
        if (y < 0 || static_cast<std::size_t>(y) >= g.range_size())
            throw ValidationError("observation " + std::to_string(y) +
                                  " is outside the lumped alphabet");
        Bitset candidates = pre[static_cast<std::size_t>(y)] & A.row(prev);
        if (candidates.none()) candidates = pre[static_cast<std::size_t>(y)];
        std::size_t best = Bitset::npos;
        double best_p = -1.0;
        candidates.for_each([&](std::size_t x) {
            double p = P(prev, x);
            if (p > best_p) {
                best_p = p;
                best = x;
            }
        });
        prev = best;
        out.push_back(static_cast<int>(best));
    }
    return out;
}

struct PropagationResult {
    std::size_t positions = 0;
    std::size_t errors = 0;
    double error_rate = 0.0;
};

// Symbol error rate of the committing decoder along a true trajectory:
// decode g(x2..xn) starting from the true x1, each step conditioned on
// the previous decoded (not true) state, and count mismatches.
inline PropagationResult error_propagation(const TransitionMatrix& P, const LumpingFunction& g,
                                           std::span<const int> trajectory) {
    if (trajectory.size() < 2) return PropagationResult{};
    AdjacencyMatrix A = adjacency(P);
    std::vector<int> obs(trajectory.begin() + 1, trajectory.end());
    for (int& y : obs) y = g(static_cast<std::size_t>(y));
    std::vector<int> decoded = forced_decode(P, A, g, trajectory[0], obs);
    PropagationResult res;
    res.positions = decoded.size();
    for (std::size_t i = 0; i < decoded.size(); ++i)
        if (decoded[i] != trajectory[i + 1]) ++res.errors;
    res.error_rate = static_cast<double>(res.errors) / static_cast<double>(res.positions);
    return res;
}

// Monte Carlo aggregate over independent seeded trials. Each trial draws
// its own stationary trajectory from a per-trial stream, so the result is
// reproducible and independent of evaluation order.
inline PropagationResult error_propagation(const TransitionMatrix& P, const LumpingFunction& g,
                                           std::size_t trials, std::size_t length,
                                           std::uint64_t seed) {
    if (trials == 0) throw ValidationError("error propagation needs at least one trial");
    StationaryDistribution sd = stationary(P);
    PropagationResult total;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        std::mt19937_64 rng(mix_seed(seed, trial));
        int x0 = sample_index(sd.mu, rng);
        std::vector<int> traj = simulate_chain_from(P, x0, length, rng);
        PropagationResult one = error_propagation(P, g, traj);
        total.positions += one.positions;
        total.errors += one.errors;
    }
    total.error_rate = total.positions == 0
                           ? 0.0
                           : static_cast<double>(total.errors) /
                                 static_cast<double>(total.positions);
    return total;
}

}  // namespace mclump
