#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mclump/errors.hpp"

namespace mclump {

// Dense row-major matrix of doubles. Plain storage; the owning types
// (TransitionMatrix, JointDistribution) add validation on top.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), a(r * c, fill) {}
    Matrix(std::size_t r, std::size_t c, std::vector<double> data)
        : rows(r), cols(c), a(std::move(data)) {
        if (a.size() != rows * cols)
            throw ValidationError("matrix data has " + std::to_string(a.size()) +
                                  " entries, expected " + std::to_string(rows * cols));
    }

    double& operator()(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

    static Matrix from_rows(const std::vector<std::vector<double>>& rows_in) {
        Matrix m(rows_in.size(), rows_in.empty() ? 0 : rows_in.front().size());
        for (std::size_t r = 0; r < m.rows; ++r) {
            if (rows_in[r].size() != m.cols)
                throw ValidationError("matrix row " + std::to_string(r) + " has " +
                                      std::to_string(rows_in[r].size()) + " entries, expected " +
                                      std::to_string(m.cols));
            for (std::size_t c = 0; c < m.cols; ++c) m(r, c) = rows_in[r][c];
        }
        return m;
    }

    double row_sum(std::size_t r) const {
        double s = 0.0;
        for (std::size_t c = 0; c < cols; ++c) s += (*this)(r, c);
        return s;
    }

    bool operator==(const Matrix&) const = default;
};

// Every entry in [0, 1] and every row summing to 1 within tol. Throws a
// ValidationError naming the offending row.
inline void require_row_stochastic(const Matrix& m, double tol, const std::string& what) {
    for (std::size_t r = 0; r < m.rows; ++r) {
        for (std::size_t c = 0; c < m.cols; ++c) {
            double p = m(r, c);
            if (p < 0.0 || p > 1.0 + tol)
                throw ValidationError(what + ": entry (" + std::to_string(r) + "," +
                                      std::to_string(c) + ") = " + std::to_string(p) +
                                      " outside [0, 1]");
        }
        double s = m.row_sum(r);
        if (s < 1.0 - tol || s > 1.0 + tol)
            throw ValidationError(what + ": row " + std::to_string(r) + " sums to " +
                                  std::to_string(s) + ", expected 1");
    }
}

}  // namespace mclump
