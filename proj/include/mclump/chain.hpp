#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "mclump/bitset.hpp"
#include "mclump/errors.hpp"
#include "mclump/matrix.hpp"

namespace mclump {

// Probabilities at or below this threshold count as zero when deriving
// support structure from floating-point input.
inline constexpr double kPositiveTol = 1e-12;
inline constexpr double kRowSumTol = 1e-9;
inline constexpr double kStationaryResidualTol = 1e-9;

// N^K states at most when enumerating blocked state spaces.
inline constexpr std::uint64_t kDefaultEnumCap = std::uint64_t(1) << 20;

// Largest dense linear system solved directly for the stationary vector;
// larger chains fall back to power iteration.
inline constexpr std::size_t kDirectSolveCap = 512;

// Binary entropy in nats, with the 0 log 0 := 0 convention at p in {0, 1}.
inline double binary_entropy(double p) {
    double h = 0.0;
    if (p > 0.0) h -= p * std::log(p);
    if (p < 1.0) h -= (1.0 - p) * std::log(1.0 - p);
    return h;
}

// Row-stochastic transition matrix over states {0, ..., N-1}.
class TransitionMatrix {
public:
    TransitionMatrix(std::size_t n, std::vector<double> entries)
        : n_(n), m_{n, n, std::move(entries)} {
        if (n_ == 0) throw ValidationError("transition matrix must have at least one state");
        if (m_.a.size() != n_ * n_)
            throw ValidationError("transition matrix data has " + std::to_string(m_.a.size()) +
                                  " entries, expected " + std::to_string(n_ * n_));
        require_row_stochastic(m_, kRowSumTol, "transition matrix");
    }

    static TransitionMatrix from_rows(const std::vector<std::vector<double>>& rows) {
        Matrix m = Matrix::from_rows(rows);
        if (m.rows != m.cols)
            throw ValidationError("transition matrix must be square, got " +
                                  std::to_string(m.rows) + "x" + std::to_string(m.cols));
        return TransitionMatrix(m.rows, std::move(m.a));
    }

    std::size_t size() const { return n_; }
    double operator()(std::size_t from, std::size_t to) const { return m_(from, to); }
    const Matrix& matrix() const { return m_; }

private:
    std::size_t n_;
    Matrix m_;
};

// 0/1 access relation of a chain: bit (x, x') set iff x can reach x' in one
// step with probability above the construction threshold.
class AdjacencyMatrix {
public:
    explicit AdjacencyMatrix(std::size_t n) : n_(n), rows_(n, Bitset(n)) {}

    std::size_t size() const { return n_; }
    bool at(std::size_t from, std::size_t to) const { return rows_[from].test(to); }
    void set(std::size_t from, std::size_t to) { rows_[from].set(to); }
    const Bitset& row(std::size_t from) const { return rows_[from]; }

    // accessor sets: column x as a bitset of states that reach x
    std::vector<Bitset> columns() const {
        std::vector<Bitset> cols(n_, Bitset(n_));
        for (std::size_t x = 0; x < n_; ++x)
            rows_[x].for_each([&](std::size_t y) { cols[y].set(x); });
        return cols;
    }

    std::size_t ones() const {
        std::size_t c = 0;
        for (const auto& r : rows_) c += r.count();
        return c;
    }

    bool operator==(const AdjacencyMatrix&) const = default;

private:
    std::size_t n_;
    std::vector<Bitset> rows_;
};

// A[x,x'] = 1 iff P[x,x'] > max(threshold, positive_tol). threshold 0 is
// the plain "has positive probability" relation.
inline AdjacencyMatrix adjacency(const TransitionMatrix& P, double threshold = 0.0,
                                 double positive_tol = kPositiveTol) {
    if (threshold < 0.0 || threshold >= 1.0)
        throw ValidationError("adjacency threshold must lie in [0, 1), got " +
                              std::to_string(threshold));
    const double cut = std::max(threshold, positive_tol);
    AdjacencyMatrix A(P.size());
    for (std::size_t x = 0; x < P.size(); ++x)
        for (std::size_t y = 0; y < P.size(); ++y)
            if (P(x, y) > cut) A.set(x, y);
    return A;
}

struct StructureReport {
    bool irreducible = false;
    bool aperiodic = false;
    int period = 0;  // gcd of cycle lengths; 0 if the graph has no cycle
};

namespace detail {

// Iterative Tarjan SCC. Returns component index per vertex.
inline std::vector<int> strongly_connected_components(const AdjacencyMatrix& A, int& n_comps) {
    const std::size_t n = A.size();
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<char> on_stack(n, 0);
    std::vector<std::size_t> stack;
    n_comps = 0;
    int next_index = 0;

    struct Frame {
        std::size_t v;
        std::size_t next_nb;
    };
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        std::vector<Frame> frames{{root, 0}};
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!frames.empty()) {
            Frame& f = frames.back();
            std::size_t w = A.row(f.v).next(f.next_nb);
            if (w != Bitset::npos) {
                f.next_nb = w + 1;
                if (index[w] == -1) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                std::size_t v = f.v;
                frames.pop_back();
                if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
                if (low[v] == index[v]) {
                    while (true) {
                        std::size_t u = stack.back();
                        stack.pop_back();
                        on_stack[u] = 0;
                        comp[u] = n_comps;
                        if (u == v) break;
                    }
                    ++n_comps;
                }
            }
        }
    }
    return comp;
}

}  // namespace detail

// Irreducibility, periodicity and the period of the access relation.
// The period is the gcd of all directed cycle lengths, computed per
// strongly connected component from BFS level differences.
inline StructureReport analyze_structure(const AdjacencyMatrix& A) {
    const std::size_t n = A.size();
    int n_comps = 0;
    std::vector<int> comp = detail::strongly_connected_components(A, n_comps);

    StructureReport rep;
    rep.irreducible = (n_comps == 1);

    long long period = 0;
    for (int c = 0; c < n_comps; ++c) {
        // BFS inside the component from its lowest vertex
        std::size_t root = Bitset::npos;
        for (std::size_t v = 0; v < n; ++v)
            if (comp[v] == c) {
                root = v;
                break;
            }
        std::vector<long long> level(n, -1);
        std::vector<std::size_t> queue{root};
        level[root] = 0;
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            std::size_t u = queue[qi];
            A.row(u).for_each([&](std::size_t w) {
                if (comp[w] != c) return;
                if (level[w] == -1) {
                    level[w] = level[u] + 1;
                    queue.push_back(w);
                }
            });
        }
        long long g = 0;
        for (std::size_t u : queue)
            A.row(u).for_each([&](std::size_t w) {
                if (comp[w] == c) g = std::gcd(g, level[u] + 1 - level[w]);
            });
        period = std::gcd(period, g);
    }
    rep.period = static_cast<int>(period);
    rep.aperiodic = (period == 1);
    return rep;
}

inline StructureReport validate_chain(const TransitionMatrix& P) {
    return analyze_structure(adjacency(P));
}

struct StationaryDistribution {
    std::vector<double> mu;

    double residual(const TransitionMatrix& P) const {
        double worst = 0.0;
        for (std::size_t y = 0; y < P.size(); ++y) {
            double s = 0.0;
            for (std::size_t x = 0; x < P.size(); ++x) s += mu[x] * P(x, y);
            worst = std::max(worst, std::abs(s - mu[y]));
        }
        return worst;
    }
};

namespace detail {

// Gaussian elimination with partial pivoting on (P^T - I) with the last
// equation replaced by the normalization row.
inline std::vector<double> stationary_direct(const TransitionMatrix& P) {
    const std::size_t n = P.size();
    Matrix sys(n, n + 1, 0.0);
    for (std::size_t r = 0; r + 1 < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) sys(r, c) = P(c, r);
        sys(r, r) -= 1.0;
    }
    for (std::size_t c = 0; c < n; ++c) sys(n - 1, c) = 1.0;
    sys(n - 1, n) = 1.0;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(sys(r, col)) > std::abs(sys(pivot, col))) pivot = r;
        if (pivot != col)
            for (std::size_t c = col; c <= n; ++c) std::swap(sys(col, c), sys(pivot, c));
        double d = sys(col, col);
        if (d == 0.0) throw ValidationError("stationary system is singular");
        for (std::size_t r = col + 1; r < n; ++r) {
            double f = sys(r, col) / d;
            if (f == 0.0) continue;
            for (std::size_t c = col; c <= n; ++c) sys(r, c) -= f * sys(col, c);
        }
    }
    std::vector<double> mu(n, 0.0);
    for (std::size_t ri = n; ri-- > 0;) {
        double s = sys(ri, n);
        for (std::size_t c = ri + 1; c < n; ++c) s -= sys(ri, c) * mu[c];
        mu[ri] = s / sys(ri, ri);
    }
    return mu;
}

inline std::vector<double> stationary_power(const TransitionMatrix& P) {
    const std::size_t n = P.size();
    std::vector<double> mu(n, 1.0 / static_cast<double>(n)), next(n, 0.0);
    for (int it = 0; it < 1000000; ++it) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t x = 0; x < n; ++x) {
            if (mu[x] == 0.0) continue;
            for (std::size_t y = 0; y < n; ++y) next[y] += mu[x] * P(x, y);
        }
        // damping keeps periodic chains converging to the Cesaro mean
        double delta = 0.0;
        for (std::size_t y = 0; y < n; ++y) {
            next[y] = 0.5 * next[y] + 0.5 * mu[y];
            delta = std::max(delta, std::abs(next[y] - mu[y]));
        }
        mu.swap(next);
        if (delta < 1e-15) break;
    }
    return mu;
}

}  // namespace detail

// Unique invariant distribution of an irreducible chain.
inline StationaryDistribution stationary(const TransitionMatrix& P) {
    StructureReport rep = validate_chain(P);
    if (!rep.irreducible)
        throw ValidationError("chain is not irreducible: stationary distribution is not unique");
    StationaryDistribution out;
    out.mu = P.size() <= kDirectSolveCap ? detail::stationary_direct(P)
                                         : detail::stationary_power(P);
    for (double& v : out.mu)
        if (v < 0.0 && v > -1e-12) v = 0.0;
    double res = out.residual(P);
    if (res > kStationaryResidualTol)
        throw ConvergenceError("stationary distribution residual " + std::to_string(res) +
                                   " exceeds tolerance",
                               0.0, res);
    return out;
}

// Entropy rate in nats per symbol: -sum_x mu_x sum_x' P log P, 0 log 0 := 0.
inline double entropy_rate(const TransitionMatrix& P) {
    StationaryDistribution sd = stationary(P);
    double h = 0.0;
    for (std::size_t x = 0; x < P.size(); ++x) {
        if (sd.mu[x] <= 0.0) continue;
        double hx = 0.0;
        for (std::size_t y = 0; y < P.size(); ++y) {
            double p = P(x, y);
            if (p > 0.0) hx -= p * std::log(p);
        }
        h += sd.mu[x] * hx;
    }
    return h;
}

namespace detail {

// Power iteration on A + I for an irreducible A; the shift makes the
// iteration matrix primitive, so the Rayleigh quotient converges
// geometrically. Accepts once the eigen-residual is below the relative
// tolerance.
inline double power_spectral_radius(const AdjacencyMatrix& A, double rel_tol,
                                    int max_iter) {
    const std::size_t n = A.size();
    std::vector<double> v(n, 1.0), w(n, 0.0);
    double lambda = 1.0;
    double resid = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        double norm = 0.0;
        for (std::size_t x = 0; x < n; ++x) {
            double s = v[x];  // the +I shift
            A.row(x).for_each([&](std::size_t y) { s += v[y]; });
            w[x] = s;
            norm = std::max(norm, std::abs(s));
        }
        double num = 0.0, den = 0.0;
        for (std::size_t x = 0; x < n; ++x) {
            num += v[x] * w[x];
            den += v[x] * v[x];
        }
        lambda = num / den;
        // ||v||_inf = 1 after the first normalization, so the residual is
        // already relative to the iterate's scale
        resid = 0.0;
        for (std::size_t x = 0; x < n; ++x)
            resid = std::max(resid, std::abs(w[x] - lambda * v[x]));
        if (resid <= std::max(rel_tol * lambda, 1e-14)) return lambda - 1.0;
        for (std::size_t x = 0; x < n; ++x) v[x] = w[x] / norm;
    }
    throw ConvergenceError("power iteration did not converge", lambda - 1.0, resid);
}

}  // namespace detail

// Perron root of the access relation. The relation is block-triangular
// over its strongly connected components, so the spectral radius is the
// maximum over components; each component is irreducible, which is the
// domain where the shifted power iteration is sound. Trivial components
// without a self-loop contribute 0.
inline double spectral_radius(const AdjacencyMatrix& A, double rel_tol = 1e-10,
                              int max_iter = 200000) {
    const std::size_t n = A.size();
    if (n == 0) return 0.0;
    int n_comps = 0;
    std::vector<int> comp = detail::strongly_connected_components(A, n_comps);
    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(n_comps));
    for (std::size_t x = 0; x < n; ++x)
        members[static_cast<std::size_t>(comp[x])].push_back(x);
    double best = 0.0;
    for (const auto& verts : members) {
        if (verts.size() == 1 && !A.at(verts[0], verts[0])) continue;
        AdjacencyMatrix sub(verts.size());
        for (std::size_t i = 0; i < verts.size(); ++i)
            for (std::size_t j = 0; j < verts.size(); ++j)
                if (A.at(verts[i], verts[j])) sub.set(i, j);
        best = std::max(best, detail::power_spectral_radius(sub, rel_tol, max_iter));
    }
    return best;
}

// K-fold blocking of a chain: the set of realizable length-K state
// sequences in lexicographic order, plus the access relation between them.
// A sequence is realizable iff its first symbol has positive stationary
// mass and every consecutive pair is an edge of the access relation.
class BlockedChain {
public:
    BlockedChain(const TransitionMatrix& P, std::size_t block_len, AdjacencyMatrix adj,
                 const std::vector<double>& mu, std::uint64_t max_states)
        : n_base_(P.size()), block_len_(block_len), adj_(std::move(adj)) {
        if (block_len_ == 0) throw ValidationError("block length must be at least 1");
        n_tuples_ = 1;
        for (std::size_t i = 0; i < block_len_; ++i) {
            if (n_tuples_ > max_states / n_base_)
                throw ResourceError("blocked state space " + std::to_string(n_base_) + "^" +
                                    std::to_string(block_len_) + " exceeds enumeration cap " +
                                    std::to_string(max_states));
            n_tuples_ *= n_base_;
        }
        if (n_tuples_ > max_states)
            throw ResourceError("blocked state space " + std::to_string(n_tuples_) +
                                " exceeds enumeration cap " + std::to_string(max_states));

        member_ = Bitset(static_cast<std::size_t>(n_tuples_));
        std::vector<int> seq(block_len_, 0);
        enumerate(seq, 0, 0, mu);
        last_symbols_present_ = Bitset(n_base_);
        for (std::uint64_t idx : realizable_) last_symbols_present_.set(last_symbol(idx));
    }

    std::size_t base_size() const { return n_base_; }
    std::size_t block_len() const { return block_len_; }
    std::uint64_t tuple_count() const { return n_tuples_; }
    const AdjacencyMatrix& base_adjacency() const { return adj_; }

    // encoded indices of realizable sequences, ascending (= lexicographic)
    const std::vector<std::uint64_t>& realizable() const { return realizable_; }
    bool is_realizable(std::uint64_t idx) const {
        return member_.test(static_cast<std::size_t>(idx));
    }

    int first_symbol(std::uint64_t idx) const {
        return static_cast<int>(idx / stride());
    }
    int last_symbol(std::uint64_t idx) const {
        return static_cast<int>(idx % n_base_);
    }
    // bitset over base states b such that some realizable sequence ends in b
    const Bitset& last_symbols_present() const { return last_symbols_present_; }

    std::vector<int> decode(std::uint64_t idx) const {
        std::vector<int> seq(block_len_);
        for (std::size_t i = block_len_; i-- > 0;) {
            seq[i] = static_cast<int>(idx % n_base_);
            idx /= n_base_;
        }
        return seq;
    }

    std::uint64_t encode(const std::vector<int>& seq) const {
        std::uint64_t idx = 0;
        for (int s : seq) idx = idx * n_base_ + static_cast<std::uint64_t>(s);
        return idx;
    }

    // blocked access relation: u can reach v iff both are realizable and
    // the last symbol of u accesses the first symbol of v
    bool access(std::uint64_t u, std::uint64_t v) const {
        return is_realizable(u) && is_realizable(v) &&
               adj_.at(static_cast<std::size_t>(last_symbol(u)),
                       static_cast<std::size_t>(first_symbol(v)));
    }

private:
    std::uint64_t stride() const {
        std::uint64_t s = 1;
        for (std::size_t i = 1; i < block_len_; ++i) s *= n_base_;
        return s;
    }

    void enumerate(std::vector<int>& seq, std::size_t depth, std::uint64_t prefix,
                   const std::vector<double>& mu) {
        if (depth == block_len_) {
            realizable_.push_back(prefix);
            member_.set(static_cast<std::size_t>(prefix));
            return;
        }
        for (std::size_t s = 0; s < n_base_; ++s) {
            if (depth == 0) {
                if (mu[s] <= kPositiveTol) continue;
            } else if (!adj_.at(static_cast<std::size_t>(seq[depth - 1]), s)) {
                continue;
            }
            seq[depth] = static_cast<int>(s);
            enumerate(seq, depth + 1, prefix * n_base_ + s, mu);
        }
    }

    std::size_t n_base_;
    std::size_t block_len_;
    AdjacencyMatrix adj_;
    std::uint64_t n_tuples_ = 0;
    std::vector<std::uint64_t> realizable_;
    Bitset member_;
    Bitset last_symbols_present_;
};

inline BlockedChain block(const TransitionMatrix& P, std::size_t K,
                          std::uint64_t max_states = kDefaultEnumCap) {
    StationaryDistribution sd = stationary(P);
    return BlockedChain(P, K, adjacency(P), sd.mu, max_states);
}

}  // namespace mclump
