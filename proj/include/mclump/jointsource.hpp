#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "mclump/graph.hpp"
#include "mclump/lump.hpp"
#include "mclump/matrix.hpp"

namespace mclump {

// Joint probability mass of a source symbol X and side information Z,
// stored as a dense n_x by n_z matrix summing to 1.
class JointDistribution {
public:
    JointDistribution(std::size_t n_x, std::size_t n_z, std::vector<double> mass)
        : q_{n_x, n_z, std::move(mass)} {
        if (n_x == 0 || n_z == 0)
            throw ValidationError("joint distribution needs at least one symbol per axis");
        if (q_.a.size() != n_x * n_z)
            throw ValidationError("joint distribution has " + std::to_string(q_.a.size()) +
                                  " entries, expected " + std::to_string(n_x * n_z));
        double total = 0.0;
        for (std::size_t x = 0; x < n_x; ++x)
            for (std::size_t z = 0; z < n_z; ++z) {
                double p = q_(x, z);
                if (p < 0.0 || p > 1.0 + kRowSumTol)
                    throw ValidationError("joint mass (" + std::to_string(x) + "," +
                                          std::to_string(z) + ") = " + std::to_string(p) +
                                          " outside [0, 1]");
                total += p;
            }
        if (total < 1.0 - kRowSumTol || total > 1.0 + kRowSumTol)
            throw ValidationError("joint distribution sums to " + std::to_string(total) +
                                  ", expected 1");
    }

    static JointDistribution from_rows(const std::vector<std::vector<double>>& rows) {
        Matrix m = Matrix::from_rows(rows);
        return JointDistribution(m.rows, m.cols, std::move(m.a));
    }

    std::size_t x_size() const { return q_.rows; }
    std::size_t z_size() const { return q_.cols; }
    double operator()(std::size_t x, std::size_t z) const { return q_(x, z); }
    const Matrix& matrix() const { return q_; }

    std::vector<double> marginal_x() const {
        std::vector<double> m(q_.rows, 0.0);
        for (std::size_t x = 0; x < q_.rows; ++x) m[x] = q_.row_sum(x);
        return m;
    }

private:
    Matrix q_;
};

// Deterministic channel realizing a lumping: row x puts all mass on g(x).
inline Matrix channel_from_lumping(const LumpingFunction& g) {
    Matrix W(g.domain_size(), g.range_size());
    for (std::size_t x = 0; x < g.domain_size(); ++x)
        W(x, static_cast<std::size_t>(g(x))) = 1.0;
    return W;
}

// H(X | Y, Z) in nats for the triple p(x,y,z) = Q[x,z] * W[x,y]: what the
// channel output together with the side information still leaves unknown
// about X. Exact summation, 0 log 0 := 0.
inline double conditional_entropy_xyz(const JointDistribution& Q, const Matrix& W) {
    if (W.rows != Q.x_size())
        throw ValidationError("channel has " + std::to_string(W.rows) +
                              " input rows, expected " + std::to_string(Q.x_size()));
    require_row_stochastic(W, kRowSumTol, "channel matrix");
    Matrix yz(W.cols, Q.z_size());
    for (std::size_t x = 0; x < Q.x_size(); ++x)
        for (std::size_t z = 0; z < Q.z_size(); ++z) {
            double q = Q(x, z);
            if (q <= 0.0) continue;
            for (std::size_t y = 0; y < W.cols; ++y) yz(y, z) += q * W(x, y);
        }
    double h = 0.0;
    for (std::size_t x = 0; x < Q.x_size(); ++x)
        for (std::size_t z = 0; z < Q.z_size(); ++z) {
            double q = Q(x, z);
            if (q <= 0.0) continue;
            for (std::size_t y = 0; y < W.cols; ++y) {
                double p = q * W(x, y);
                if (p > 0.0) h -= p * std::log(p / yz(y, z));
            }
        }
    return std::max(h, 0.0);
}

inline double conditional_entropy_xyz(const JointDistribution& Q, const LumpingFunction& g) {
    return conditional_entropy_xyz(Q, channel_from_lumping(g));
}

// The combinatorial and the information-theoretic zero-error conditions:
// the channel's confusion graph sits inside the pair characteristic graph
// of (X, Z) iff H(X|Y,Z) vanishes. `consistent` records whether the two
// sides agreed for this instance.
struct ZeroErrorCheck {
    bool edges_subset = false;
    double conditional_entropy = 0.0;  // nats
    bool entropy_zero = false;
    bool consistent = false;
};

inline ZeroErrorCheck check_zero_error(const JointDistribution& Q, const Matrix& W,
                                       double entropy_tol = kLosslessEntropyTol) {
    Graph confusion = confusion_graph(W);
    Graph characteristic = pair_characteristic_graph(Q.matrix());
    bool subset = true;
    for (auto [u, v] : confusion.edges())
        if (!characteristic.has_edge(static_cast<std::size_t>(u), static_cast<std::size_t>(v))) {
            subset = false;
            break;
        }
    ZeroErrorCheck out;
    out.edges_subset = subset;
    out.conditional_entropy = conditional_entropy_xyz(Q, W);
    out.entropy_zero = out.conditional_entropy <= entropy_tol;
    out.consistent = (out.edges_subset == out.entropy_zero);
    return out;
}

inline ZeroErrorCheck check_zero_error(const JointDistribution& Q, const LumpingFunction& g,
                                       double entropy_tol = kLosslessEntropyTol) {
    return check_zero_error(Q, channel_from_lumping(g), entropy_tol);
}

}  // namespace mclump
