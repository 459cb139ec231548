#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "mclump/bitset.hpp"
#include "mclump/errors.hpp"
#include "mclump/graph.hpp"

namespace mclump {

// Largest graph handed to the exact minimum clique partition solver.
inline constexpr std::size_t kDefaultExactCap = 64;

// Largest graph accepted by the exponential brute-force solver.
inline constexpr std::size_t kBruteForceCap = 12;

// Partition of the vertex set into cliques, canonical form: each block
// sorted ascending, blocks ordered by their minimum vertex.
struct CliquePartition {
    std::vector<std::vector<int>> blocks;

    std::size_t size() const { return blocks.size(); }

    // vertex -> block index; n is the vertex count of the host graph
    std::vector<int> assignment(std::size_t n) const {
        std::vector<int> map(n, -1);
        for (std::size_t b = 0; b < blocks.size(); ++b)
            for (int v : blocks[b]) map[static_cast<std::size_t>(v)] = static_cast<int>(b);
        return map;
    }

    bool operator==(const CliquePartition&) const = default;
};

// Rebuild canonical form from a vertex -> block assignment.
inline CliquePartition partition_from_assignment(const std::vector<int>& assign) {
    int n_blocks = 0;
    for (int b : assign) n_blocks = std::max(n_blocks, b + 1);
    std::vector<std::vector<int>> raw(static_cast<std::size_t>(n_blocks));
    for (std::size_t v = 0; v < assign.size(); ++v)
        raw[static_cast<std::size_t>(assign[v])].push_back(static_cast<int>(v));
    raw.erase(std::remove_if(raw.begin(), raw.end(),
                             [](const std::vector<int>& b) { return b.empty(); }),
              raw.end());
    std::sort(raw.begin(), raw.end(),
              [](const std::vector<int>& a, const std::vector<int>& b) {
                  return a.front() < b.front();
              });
    return CliquePartition{std::move(raw)};
}

// Every block a clique, blocks disjoint, every vertex covered.
inline bool is_valid_clique_partition(const Graph& g, const CliquePartition& p) {
    std::vector<char> seen(g.size(), 0);
    for (const auto& block : p.blocks) {
        for (std::size_t i = 0; i < block.size(); ++i) {
            std::size_t u = static_cast<std::size_t>(block[i]);
            if (u >= g.size() || seen[u]) return false;
            seen[u] = 1;
            for (std::size_t j = i + 1; j < block.size(); ++j)
                if (!g.has_edge(u, static_cast<std::size_t>(block[j]))) return false;
        }
    }
    for (char s : seen)
        if (!s) return false;
    return true;
}

// Collapse a clique cover (blocks may overlap) to a partition: each vertex
// stays in the first block that lists it.
inline CliquePartition cover_to_partition(std::size_t n,
                                          const std::vector<std::vector<int>>& cover) {
    std::vector<int> assign(n, -1);
    for (std::size_t b = 0; b < cover.size(); ++b)
        for (int v : cover[b])
            if (assign[static_cast<std::size_t>(v)] == -1)
                assign[static_cast<std::size_t>(v)] = static_cast<int>(b);
    for (std::size_t v = 0; v < n; ++v)
        if (assign[v] == -1)
            throw ValidationError("cover leaves vertex " + std::to_string(v) + " unassigned");
    return partition_from_assignment(assign);
}

struct Coloring {
    int n_colors = 0;
    std::vector<int> color;
};

namespace detail {

// Renumber colors by first occurrence so vertex 0 gets color 0.
inline void normalize_colors(Coloring& c) {
    std::vector<int> remap(c.color.size(), -1);
    int next = 0;
    for (int& col : c.color) {
        if (remap[static_cast<std::size_t>(col)] == -1)
            remap[static_cast<std::size_t>(col)] = next++;
        col = remap[static_cast<std::size_t>(col)];
    }
    c.n_colors = next;
}

// Exact maximum clique, branch and bound with a greedy coloring bound.
class MaxCliqueSolver {
public:
    explicit MaxCliqueSolver(const Graph& g) : g_(g), best_(g.size()) {}

    Bitset solve() {
        if (g_.size() == 0) return best_;
        Bitset all(g_.size());
        all.set_all();
        cur_.clear();
        expand(all);
        return best_;
    }

private:
    void expand(Bitset P) {
        if (P.none()) {
            if (cur_.size() > best_.count()) {
                best_.clear();
                for (std::size_t v : cur_) best_.set(v);
            }
            return;
        }
        // greedy coloring of P; color index bounds the clique extension
        std::vector<std::size_t> order;
        std::vector<std::size_t> bound;
        Bitset rest = P;
        std::size_t color = 0;
        while (rest.any()) {
            ++color;
            Bitset avail = rest;
            while (avail.any()) {
                std::size_t v = avail.next(0);
                avail.reset(v);
                rest.reset(v);
                avail -= g_.neighbors(v);
                order.push_back(v);
                bound.push_back(color);
            }
        }
        for (std::size_t i = order.size(); i-- > 0;) {
            if (cur_.size() + bound[i] <= best_.count()) return;
            std::size_t v = order[i];
            cur_.push_back(v);
            Bitset next = P;
            next &= g_.neighbors(v);
            expand(next);
            cur_.pop_back();
            P.reset(v);
        }
    }

    const Graph& g_;
    Bitset best_;
    std::vector<std::size_t> cur_;
};

// DSATUR greedy: repeatedly color the uncolored vertex with the most
// distinct neighbor colors (ties: lowest index) using the smallest
// feasible color.
inline Coloring dsatur_greedy(const Graph& g) {
    const std::size_t n = g.size();
    Coloring out;
    out.color.assign(n, -1);
    std::vector<Bitset> neighbor_colors(n, Bitset(n));
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t pick = Bitset::npos;
        std::size_t pick_sat = 0;
        for (std::size_t v = 0; v < n; ++v) {
            if (out.color[v] != -1) continue;
            std::size_t sat = neighbor_colors[v].count();
            if (pick == Bitset::npos || sat > pick_sat) {
                pick = v;
                pick_sat = sat;
            }
        }
        int c = 0;
        while (neighbor_colors[pick].test(static_cast<std::size_t>(c))) ++c;
        out.color[pick] = c;
        out.n_colors = std::max(out.n_colors, c + 1);
        g.neighbors(pick).for_each(
            [&](std::size_t w) { neighbor_colors[w].set(static_cast<std::size_t>(c)); });
    }
    normalize_colors(out);
    return out;
}

// Exact chromatic number: DSATUR-ordered branch and bound, seeded with the
// greedy solution as upper bound and a maximum clique as lower bound and
// pre-coloring.
class ExactColorSolver {
public:
    explicit ExactColorSolver(const Graph& g) : g_(g), n_(g.size()) {}

    Coloring solve() {
        if (n_ == 0) return Coloring{0, {}};
        best_ = dsatur_greedy(g_);

        Bitset clique = MaxCliqueSolver(g_).solve();
        lb_ = static_cast<int>(clique.count());
        if (best_.n_colors == lb_) return best_;

        color_.assign(n_, -1);
        neighbor_colors_.assign(n_, Bitset(n_));
        k_ = 0;
        n_colored_ = 0;
        clique.for_each([&](std::size_t v) { assign(v, k_++); });
        dfs();
        normalize_colors(best_);
        return best_;
    }

private:
    void assign(std::size_t v, int c) {
        color_[v] = c;
        ++n_colored_;
        g_.neighbors(v).for_each(
            [&](std::size_t w) { neighbor_colors_[w].set(static_cast<std::size_t>(c)); });
    }

    void unassign(std::size_t v, int c) {
        color_[v] = -1;
        --n_colored_;
        g_.neighbors(v).for_each([&](std::size_t w) {
            bool still = false;
            g_.neighbors(w).for_each([&](std::size_t u) {
                if (color_[u] == c) still = true;
            });
            if (!still) neighbor_colors_[w].reset(static_cast<std::size_t>(c));
        });
    }

    void dfs() {
        if (best_.n_colors == lb_) return;
        if (k_ >= best_.n_colors) return;
        if (n_colored_ == n_) {
            best_.n_colors = k_;
            best_.color = color_;
            return;
        }
        std::size_t v = Bitset::npos;
        std::size_t v_sat = 0;
        for (std::size_t u = 0; u < n_; ++u) {
            if (color_[u] != -1) continue;
            std::size_t sat = neighbor_colors_[u].count();
            if (v == Bitset::npos || sat > v_sat) {
                v = u;
                v_sat = sat;
            }
        }
        for (int c = 0; c < k_; ++c) {
            if (neighbor_colors_[v].test(static_cast<std::size_t>(c))) continue;
            assign(v, c);
            dfs();
            unassign(v, c);
            if (best_.n_colors == lb_) return;
        }
        if (k_ + 1 < best_.n_colors) {
            int c = k_++;
            assign(v, c);
            dfs();
            unassign(v, c);
            --k_;
        }
    }

    const Graph& g_;
    std::size_t n_;
    Coloring best_;
    int lb_ = 0;
    std::vector<int> color_;
    std::vector<Bitset> neighbor_colors_;
    int k_ = 0;
    std::size_t n_colored_ = 0;
};

}  // namespace detail

inline Coloring color_greedy(const Graph& g) { return detail::dsatur_greedy(g); }

inline Coloring color_exact(const Graph& g, std::size_t max_vertices = kDefaultExactCap) {
    if (g.size() > max_vertices)
        throw ResourceError("exact coloring limited to " + std::to_string(max_vertices) +
                            " vertices, got " + std::to_string(g.size()));
    return detail::ExactColorSolver(g).solve();
}

inline int chromatic_number(const Graph& g, std::size_t max_vertices = kDefaultExactCap) {
    return color_exact(g, max_vertices).n_colors;
}

inline std::vector<int> max_clique(const Graph& g, std::size_t max_vertices = kDefaultExactCap) {
    if (g.size() > max_vertices)
        throw ResourceError("exact clique search limited to " + std::to_string(max_vertices) +
                            " vertices, got " + std::to_string(g.size()));
    return detail::MaxCliqueSolver(g).solve().to_vector();
}

inline int clique_number(const Graph& g, std::size_t max_vertices = kDefaultExactCap) {
    return static_cast<int>(max_clique(g, max_vertices).size());
}

inline int independence_number(const Graph& g,
                               std::size_t max_vertices = kDefaultExactCap) {
    return clique_number(g.complement(), max_vertices);
}

namespace detail {

inline CliquePartition checked(const Graph& g, CliquePartition p) {
    if (!is_valid_clique_partition(g, p))
        throw std::logic_error("solver produced an invalid clique partition");
    return p;
}

}  // namespace detail

// Minimum clique partition = optimal coloring of the complement; the color
// classes of the complement coloring are the clique blocks.
inline CliquePartition clique_partition_exact(const Graph& g,
                                              std::size_t max_vertices = kDefaultExactCap) {
    Coloring c = color_exact(g.complement(), max_vertices);
    return detail::checked(g, partition_from_assignment(c.color));
}

inline CliquePartition clique_partition_greedy(const Graph& g) {
    Coloring c = color_greedy(g.complement());
    return detail::checked(g, partition_from_assignment(c.color));
}

// Independent oracle: enumerate set partitions as restricted growth
// strings, extending a block only when the new vertex is adjacent to all
// of its members, keeping the first minimum-size partition found.
inline CliquePartition clique_partition_bruteforce(const Graph& g,
                                                   std::size_t max_vertices = kBruteForceCap) {
    const std::size_t n = g.size();
    if (n > max_vertices)
        throw ResourceError("brute-force partition limited to " + std::to_string(max_vertices) +
                            " vertices, got " + std::to_string(n));
    if (n == 0) return CliquePartition{};

    std::vector<int> assign(n, -1), best_assign;
    std::size_t best = n + 1;
    std::vector<Bitset> blocks(n, Bitset(n));

    auto rec = [&](auto&& self, std::size_t v, std::size_t n_blocks) -> void {
        if (n_blocks >= best) return;
        if (v == n) {
            best = n_blocks;
            best_assign = assign;
            return;
        }
        for (std::size_t b = 0; b < n_blocks; ++b) {
            if (!blocks[b].is_subset_of(g.neighbors(v))) continue;
            assign[v] = static_cast<int>(b);
            blocks[b].set(v);
            self(self, v + 1, n_blocks);
            blocks[b].reset(v);
        }
        if (n_blocks + 1 < best) {
            assign[v] = static_cast<int>(n_blocks);
            blocks[n_blocks].set(v);
            self(self, v + 1, n_blocks + 1);
            blocks[n_blocks].reset(v);
        }
        assign[v] = -1;
    };
    rec(rec, 0, 0);
    return detail::checked(g, partition_from_assignment(best_assign));
}

}  // namespace mclump
