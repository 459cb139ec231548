#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mclump/bitset.hpp"
#include "mclump/chain.hpp"
#include "mclump/errors.hpp"
#include "mclump/matrix.hpp"

namespace mclump {

using VertexSet = Bitset;

// Materialized graphs store n adjacency bitsets, so memory grows with n^2;
// this cap is deliberately tighter than the tuple enumeration cap.
inline constexpr std::uint64_t kDefaultGraphCap = std::uint64_t(1) << 14;

// Simple undirected graph on vertices {0, ..., n-1}, adjacency bitset per
// vertex. No self-loops.
class Graph {
public:
    Graph() = default;
    explicit Graph(std::size_t n) : n_(n), rows_(n, Bitset(n)) {}

    std::size_t size() const { return n_; }

    bool has_edge(std::size_t u, std::size_t v) const { return rows_[u].test(v); }

    void add_edge(std::size_t u, std::size_t v) {
        if (u == v) throw ValidationError("self-loops are not allowed");
        rows_[u].set(v);
        rows_[v].set(u);
    }

    const Bitset& neighbors(std::size_t v) const { return rows_[v]; }

    std::size_t edge_count() const {
        std::size_t twice = 0;
        for (const auto& r : rows_) twice += r.count();
        return twice / 2;
    }

    // edges as (u, v) with u < v, lexicographic
    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> out;
        for (std::size_t u = 0; u < n_; ++u)
            for (std::size_t v = rows_[u].next(u + 1); v != Bitset::npos;
                 v = rows_[u].next(v + 1))
                out.emplace_back(static_cast<int>(u), static_cast<int>(v));
        return out;
    }

    Graph complement() const {
        Graph g(n_);
        for (std::size_t v = 0; v < n_; ++v) {
            g.rows_[v] = rows_[v];
            g.rows_[v].flip_all();
            g.rows_[v].reset(v);
        }
        return g;
    }

    bool is_clique(const VertexSet& s) const {
        bool ok = true;
        s.for_each([&](std::size_t u) {
            if (!ok) return;
            s.for_each([&](std::size_t v) {
                if (v > u && !rows_[u].test(v)) ok = false;
            });
        });
        return ok;
    }

    bool is_independent_set(const VertexSet& s) const {
        bool ok = true;
        s.for_each([&](std::size_t u) {
            if (!ok) return;
            if (rows_[u].intersects(s)) ok = false;
        });
        return ok;
    }

    Graph induced(const std::vector<int>& vertices) const {
        Graph g(vertices.size());
        for (std::size_t i = 0; i < vertices.size(); ++i)
            for (std::size_t j = i + 1; j < vertices.size(); ++j)
                if (rows_[static_cast<std::size_t>(vertices[i])].test(
                        static_cast<std::size_t>(vertices[j])))
                    g.add_edge(i, j);
        return g;
    }

    bool operator==(const Graph&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<Bitset> rows_;
};

// Confusion graph of a channel row-stochastic matrix W (inputs x outputs):
// two inputs are confusable iff some output has positive probability under
// both.
inline Graph confusion_graph(const Matrix& W, double positive_tol = kPositiveTol) {
    Graph g(W.rows);
    for (std::size_t u = 0; u < W.rows; ++u)
        for (std::size_t v = u + 1; v < W.rows; ++v) {
            for (std::size_t z = 0; z < W.cols; ++z)
                if (W(u, z) > positive_tol && W(v, z) > positive_tol) {
                    g.add_edge(u, v);
                    break;
                }
        }
    return g;
}

// Characteristic graph of a joint source Q (x rows, z columns): {x, x'} is
// an edge iff NO z has positive joint mass with both, i.e. the pair must
// be distinguished because side information can never separate them.
inline Graph pair_characteristic_graph(const Matrix& Q, double positive_tol = kPositiveTol) {
    Graph g(Q.rows);
    for (std::size_t u = 0; u < Q.rows; ++u)
        for (std::size_t v = u + 1; v < Q.rows; ++v) {
            bool shared = false;
            for (std::size_t z = 0; z < Q.cols; ++z)
                if (Q(u, z) > positive_tol && Q(v, z) > positive_tol) {
                    shared = true;
                    break;
                }
            if (!shared) g.add_edge(u, v);
        }
    return g;
}

// Characteristic graph of a chain's access relation: {x1, x2} is an edge
// iff no state accesses both x1 and x2 in one step. Includes pairs
// unreachable from anywhere.
inline Graph chain_characteristic_graph(const AdjacencyMatrix& A) {
    const std::size_t n = A.size();
    std::vector<Bitset> cols = A.columns();
    Graph g(n);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v)
            if (!cols[u].intersects(cols[v])) g.add_edge(u, v);
    return g;
}

inline Graph chain_characteristic_graph(const TransitionMatrix& P) {
    return chain_characteristic_graph(adjacency(P));
}

// Characteristic graph after discarding transitions with probability at
// most epsilon: the access relation keeps entries strictly above epsilon.
inline Graph epsilon_characteristic_graph(const TransitionMatrix& P, double epsilon) {
    return chain_characteristic_graph(adjacency(P, epsilon));
}

namespace detail {

inline std::uint64_t checked_tuple_count(std::size_t base, std::size_t K,
                                         std::uint64_t cap, const char* what) {
    if (K == 0) throw ValidationError("graph power exponent must be at least 1");
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < K; ++i) {
        if (base != 0 && count > cap / base)
            throw ResourceError(std::string(what) + " " + std::to_string(base) + "^" +
                                std::to_string(K) + " exceeds graph cap " + std::to_string(cap));
        count *= base;
    }
    if (count > cap)
        throw ResourceError(std::string(what) + " " + std::to_string(count) +
                            " exceeds graph cap " + std::to_string(cap));
    return count;
}

}  // namespace detail

// Most-significant-first mixed-radix encoding of length-K tuples over
// {0, ..., base-1}; index order equals lexicographic tuple order.
inline std::vector<int> tuple_decode(std::uint64_t idx, std::size_t base, std::size_t K) {
    std::vector<int> t(K);
    for (std::size_t i = K; i-- > 0;) {
        t[i] = static_cast<int>(idx % base);
        idx /= base;
    }
    return t;
}

inline std::uint64_t tuple_encode(const std::vector<int>& t, std::size_t base) {
    std::uint64_t idx = 0;
    for (int s : t) idx = idx * base + static_cast<std::uint64_t>(s);
    return idx;
}

// Normal (AND) power: distinct tuples adjacent iff every coordinate pair
// is equal or adjacent.
inline Graph normal_power(const Graph& g, std::size_t K,
                          std::uint64_t max_vertices = kDefaultGraphCap) {
    const std::size_t n = g.size();
    const std::uint64_t count =
        detail::checked_tuple_count(n, K, max_vertices, "normal power vertex count");
    Graph out(static_cast<std::size_t>(count));
    for (std::uint64_t ui = 0; ui < count; ++ui) {
        std::vector<int> u = tuple_decode(ui, n, K);
        for (std::uint64_t vi = ui + 1; vi < count; ++vi) {
            std::vector<int> v = tuple_decode(vi, n, K);
            bool all = true;
            for (std::size_t i = 0; i < K && all; ++i)
                if (u[i] != v[i] &&
                    !g.has_edge(static_cast<std::size_t>(u[i]), static_cast<std::size_t>(v[i])))
                    all = false;
            if (all) out.add_edge(static_cast<std::size_t>(ui), static_cast<std::size_t>(vi));
        }
    }
    return out;
}

// Co-normal (OR) power: tuples adjacent iff adjacent in some coordinate.
inline Graph conormal_power(const Graph& g, std::size_t K,
                            std::uint64_t max_vertices = kDefaultGraphCap) {
    const std::size_t n = g.size();
    const std::uint64_t count =
        detail::checked_tuple_count(n, K, max_vertices, "co-normal power vertex count");
    Graph out(static_cast<std::size_t>(count));
    for (std::uint64_t ui = 0; ui < count; ++ui) {
        std::vector<int> u = tuple_decode(ui, n, K);
        for (std::uint64_t vi = ui + 1; vi < count; ++vi) {
            std::vector<int> v = tuple_decode(vi, n, K);
            for (std::size_t i = 0; i < K; ++i)
                if (u[i] != v[i] &&
                    g.has_edge(static_cast<std::size_t>(u[i]), static_cast<std::size_t>(v[i]))) {
                    out.add_edge(static_cast<std::size_t>(ui), static_cast<std::size_t>(vi));
                    break;
                }
        }
    }
    return out;
}

}  // namespace mclump
