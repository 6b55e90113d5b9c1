#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "qdsfm/error.hpp"

namespace qdsfm {

/// Positive diagonal matrix stored as its diagonal.
class WeightMatrix
{
public:
    WeightMatrix() = default;

    explicit WeightMatrix(std::vector<double> diagonal) : diag_(std::move(diagonal))
    {
        for (std::size_t i = 0; i < diag_.size(); ++i) {
            if (!(diag_[i] > 0.0) || !std::isfinite(diag_[i])) {
                throw InvalidArgument("weight matrix entry " + std::to_string(i) +
                                      " must be finite and strictly positive");
            }
        }
    }

    static WeightMatrix identity(std::size_t n) { return WeightMatrix(std::vector<double>(n, 1.0)); }
    static WeightMatrix constant(std::size_t n, double value)
    {
        return WeightMatrix(std::vector<double>(n, value));
    }

    std::size_t size() const { return diag_.size(); }
    double operator[](std::size_t i) const { return diag_[i]; }
    std::span<const double> diagonal() const { return diag_; }

    WeightMatrix inverse() const
    {
        std::vector<double> d(diag_.size());
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = 1.0 / diag_[i];
        return WeightMatrix(std::move(d));
    }

    WeightMatrix sqrt() const
    {
        std::vector<double> d(diag_.size());
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::sqrt(diag_[i]);
        return WeightMatrix(std::move(d));
    }

    WeightMatrix scaled(double factor) const
    {
        std::vector<double> d(diag_);
        for (double& v : d) v *= factor;
        return WeightMatrix(std::move(d));
    }

    /// Entrywise product with another positive diagonal.
    WeightMatrix times(const WeightMatrix& other) const
    {
        if (other.size() != size()) throw InvalidArgument("weight matrix size mismatch");
        std::vector<double> d(diag_);
        for (std::size_t i = 0; i < d.size(); ++i) d[i] *= other.diag_[i];
        return WeightMatrix(std::move(d));
    }

    /// Diagonal restricted to the given indices, in order.
    std::vector<double> gather(std::span<const std::size_t> indices) const
    {
        std::vector<double> d(indices.size());
        for (std::size_t k = 0; k < indices.size(); ++k) d[k] = diag_[indices[k]];
        return d;
    }

    double squared_norm(std::span<const double> x) const { return weighted_dot(diag_, x, x); }
    double norm(std::span<const double> x) const { return std::sqrt(squared_norm(x)); }
    double dot(std::span<const double> x, std::span<const double> y) const
    {
        return weighted_dot(diag_, x, y);
    }

    static double weighted_dot(std::span<const double> w, std::span<const double> x,
                               std::span<const double> y)
    {
        double s = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * x[i] * y[i];
        return s;
    }

private:
    std::vector<double> diag_;
};

}  // namespace qdsfm
