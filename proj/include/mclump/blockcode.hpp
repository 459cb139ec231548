#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "mclump/chain.hpp"
#include "mclump/graph.hpp"
#include "mclump/lump.hpp"
#include "mclump/partition.hpp"

namespace mclump {

// Characteristic graph of the K-blocked chain, restricted to realizable
// sequences. Vertex i is the i-th realizable sequence in lexicographic
// order. Two sequences must stay distinguishable (edge absent) iff some
// realizable sequence accesses both; that factors entirely through first
// symbols, so the test is on accessor sets of the base chain.
inline Graph blocked_characteristic_subgraph(const BlockedChain& bc,
                                             std::uint64_t max_vertices = kDefaultGraphCap) {
    const auto& real = bc.realizable();
    if (real.size() > max_vertices)
        throw ResourceError("blocked graph on " + std::to_string(real.size()) +
                            " realizable sequences exceeds graph cap " +
                            std::to_string(max_vertices));
    std::vector<Bitset> acc = bc.base_adjacency().columns();
    for (auto& a : acc) a &= bc.last_symbols_present();
    Graph g(real.size());
    for (std::size_t i = 0; i < real.size(); ++i) {
        std::size_t fi = static_cast<std::size_t>(bc.first_symbol(real[i]));
        for (std::size_t j = i + 1; j < real.size(); ++j) {
            std::size_t fj = static_cast<std::size_t>(bc.first_symbol(real[j]));
            if (!acc[fi].intersects(acc[fj])) g.add_edge(i, j);
        }
    }
    return g;
}

// Same graph over the full tuple alphabet (vertex = encoded tuple).
// Unrealizable sequences have no accessors, so they are adjacent to every
// other vertex; minimum clique partitions of this graph and of the
// realizable restriction have equal size.
inline Graph blocked_characteristic_graph(const BlockedChain& bc,
                                          std::uint64_t max_vertices = kDefaultGraphCap) {
    const std::uint64_t count = bc.tuple_count();
    if (count > max_vertices)
        throw ResourceError("blocked graph on " + std::to_string(count) +
                            " sequences exceeds graph cap " + std::to_string(max_vertices));
    std::vector<Bitset> acc = bc.base_adjacency().columns();
    for (auto& a : acc) a &= bc.last_symbols_present();
    Graph g(static_cast<std::size_t>(count));
    for (std::uint64_t u = 0; u < count; ++u) {
        bool ru = bc.is_realizable(u);
        std::size_t fu = static_cast<std::size_t>(bc.first_symbol(u));
        for (std::uint64_t v = u + 1; v < count; ++v) {
            if (!ru || !bc.is_realizable(v)) {
                g.add_edge(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
                continue;
            }
            std::size_t fv = static_cast<std::size_t>(bc.first_symbol(v));
            if (!acc[fu].intersects(acc[fv]))
                g.add_edge(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
        }
    }
    return g;
}

// Zero-error compression at block length K: the smallest lumped alphabet
// that keeps length-K state sequences reconstructable, its per-symbol
// rate, and the spectral-radius rate it approaches as K grows.
struct BlockAnalysis {
    std::size_t block_len = 0;
    std::size_t alphabet_size = 0;     // minimum block alphabet
    std::size_t realizable_count = 0;  // sequences with positive probability
    double rate = 0.0;                 // log(alphabet_size) / block_len, nats
    double log_spectral_radius = 0.0;  // nats
    bool exact = false;                // partition came from the exact solver
    CliquePartition partition;         // over realizable-sequence indices
};

inline BlockAnalysis block_analysis(const TransitionMatrix& P, std::size_t K,
                                    Solver solver = Solver::automatic,
                                    std::uint64_t enum_cap = kDefaultEnumCap,
                                    std::uint64_t graph_cap = kDefaultGraphCap,
                                    std::size_t exact_cap = kDefaultExactCap) {
    BlockedChain bc = block(P, K, enum_cap);
    Graph g = blocked_characteristic_subgraph(bc, graph_cap);
    // One conceptual extra vertex when unrealizable sequences exist: their
    // universal clique merges into a single realizable block, so the
    // automatic solver budgets |S_K| + 1 effective vertices.
    std::size_t effective =
        g.size() + (bc.tuple_count() > bc.realizable().size() ? 1 : 0);
    bool used_exact = false;
    CliquePartition part;
    if (solver == Solver::exact || (solver == Solver::automatic && effective <= exact_cap)) {
        part = clique_partition_exact(g, exact_cap);
        used_exact = true;
    } else {
        part = clique_partition_greedy(g);
    }
    BlockAnalysis out;
    out.block_len = K;
    out.alphabet_size = part.size();
    out.realizable_count = bc.realizable().size();
    out.rate = std::log(static_cast<double>(part.size())) / static_cast<double>(K);
    out.log_spectral_radius = std::log(spectral_radius(bc.base_adjacency()));
    out.exact = used_exact;
    out.partition = std::move(part);
    return out;
}

inline void require_channel(const Matrix& W, std::size_t n_inputs) {
    if (W.rows != n_inputs)
        throw ValidationError("channel has " + std::to_string(W.rows) +
                              " input rows, expected " + std::to_string(n_inputs));
    if (W.cols == 0) throw ValidationError("channel needs at least one output");
    require_row_stochastic(W, kRowSumTol, "channel matrix");
}

// Characteristic graph of length-K source blocks when the decoder also
// sees the channel outputs z1..zK. Vertex = encoded tuple over the full
// alphabet. Reference construction: a pair is an edge iff no z sequence
// has positive joint probability with both, checked by enumerating z
// sequences outright.
inline Graph sideinfo_characteristic_graph_direct(const TransitionMatrix& P, const Matrix& W,
                                                  std::size_t K,
                                                  std::uint64_t max_vertices = kDefaultGraphCap,
                                                  std::uint64_t max_z_tuples = kDefaultEnumCap) {
    require_channel(W, P.size());
    const std::size_t nz = W.cols;
    const std::uint64_t count = detail::checked_tuple_count(
        P.size(), K, max_vertices, "side-information graph vertex count");
    const std::uint64_t zcount =
        detail::checked_tuple_count(nz, K, max_z_tuples, "side-information z sequence count");

    BlockedChain bc = block(P, K, count);
    std::vector<Bitset> wpos(P.size(), Bitset(nz));
    for (std::size_t a = 0; a < P.size(); ++a)
        for (std::size_t z = 0; z < nz; ++z)
            if (W(a, z) > kPositiveTol) wpos[a].set(z);

    std::vector<std::vector<int>> tuples(static_cast<std::size_t>(count));
    for (std::uint64_t u = 0; u < count; ++u)
        tuples[static_cast<std::size_t>(u)] = tuple_decode(u, P.size(), K);

    Graph g(static_cast<std::size_t>(count));
    for (std::uint64_t u = 0; u < count; ++u) {
        for (std::uint64_t v = u + 1; v < count; ++v) {
            bool shared = false;
            if (bc.is_realizable(u) && bc.is_realizable(v)) {
                const auto& tu = tuples[static_cast<std::size_t>(u)];
                const auto& tv = tuples[static_cast<std::size_t>(v)];
                for (std::uint64_t zi = 0; zi < zcount && !shared; ++zi) {
                    std::vector<int> tz = tuple_decode(zi, nz, K);
                    bool ok = true;
                    for (std::size_t t = 0; t < K && ok; ++t)
                        ok = wpos[static_cast<std::size_t>(tu[t])].test(
                                 static_cast<std::size_t>(tz[t])) &&
                             wpos[static_cast<std::size_t>(tv[t])].test(
                                 static_cast<std::size_t>(tz[t]));
                    shared = ok;
                }
            }
            if (!shared) g.add_edge(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
        }
    }
    return g;
}

// Same graph built compositionally: the co-normal power of the one-step
// pair characteristic graph, plus every pair involving an unrealizable
// sequence.
inline Graph sideinfo_characteristic_graph_formula(const TransitionMatrix& P, const Matrix& W,
                                                   std::size_t K,
                                                   std::uint64_t max_vertices = kDefaultGraphCap) {
    require_channel(W, P.size());
    StationaryDistribution sd = stationary(P);
    Matrix Q(P.size(), W.cols);
    for (std::size_t a = 0; a < P.size(); ++a)
        for (std::size_t z = 0; z < W.cols; ++z) Q(a, z) = sd.mu[a] * W(a, z);
    Graph single = pair_characteristic_graph(Q);
    Graph g = conormal_power(single, K, max_vertices);
    BlockedChain bc = block(P, K, max_vertices);
    for (std::uint64_t u = 0; u < bc.tuple_count(); ++u) {
        if (bc.is_realizable(u)) continue;
        for (std::uint64_t v = 0; v < bc.tuple_count(); ++v)
            if (v != u && !g.has_edge(static_cast<std::size_t>(u), static_cast<std::size_t>(v)))
                g.add_edge(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
    }
    return g;
}

}  // namespace mclump
