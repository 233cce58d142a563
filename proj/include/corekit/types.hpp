#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace corekit {

// Dense row-major matrix of doubles. Points, centers and coresets all live in
// one of these; dimensions are validated where rows meet.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), v_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0; }

    double& operator()(std::size_t i, std::size_t j) { return v_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return v_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {v_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {v_.data() + i * cols_, cols_}; }

    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }

    void reserve_rows(std::size_t n) { v_.reserve(n * cols_); }

    // Appends one row; fixes cols() on first use.
    void push_row(std::span<const double> r) {
        if (rows_ == 0 && cols_ == 0) cols_ = r.size();
        if (r.size() != cols_)
            throw std::invalid_argument("Matrix::push_row: expected " + std::to_string(cols_) +
                                        " columns, got " + std::to_string(r.size()));
        v_.insert(v_.end(), r.begin(), r.end());
        ++rows_;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> v_;
};

// The full data set X: n points in R^d.
struct Dataset {
    Matrix points;

    std::size_t n() const { return points.rows(); }
    std::size_t dim() const { return points.cols(); }
    std::span<const double> point(std::size_t i) const { return points.row(i); }
};

// Weighted summary (C, w). Weights are nonnegative; zero weights are legal
// and contribute nothing.
struct Coreset {
    Matrix points;
    std::vector<double> weights;

    std::size_t size() const { return points.rows(); }
    std::size_t dim() const { return points.cols(); }
    std::span<const double> point(std::size_t i) const { return points.row(i); }

    double total_weight() const {
        double s = 0.0;
        for (double w : weights) s += w;
        return s;
    }
};

// A candidate solution Q: up to k centers in R^d.
struct CenterSet {
    Matrix centers;

    std::size_t size() const { return centers.rows(); }
    std::size_t dim() const { return centers.cols(); }
    std::span<const double> center(std::size_t i) const { return centers.row(i); }
};

// Mean and cost-at-the-mean of a data set under the active companion
// distance; the constants every construction is normalized against.
struct DatasetStats {
    std::vector<double> mean;
    double central_cost = 0.0;
};

// Non-owning uniform view over a Dataset or a Coreset; weights == nullptr
// means implicit unit weights.
struct PointsView {
    const double* data = nullptr;
    const double* weights = nullptr;
    std::size_t n = 0, d = 0;

    PointsView() = default;
    PointsView(const double* data, const double* weights, std::size_t n, std::size_t d)
        : data(data), weights(weights), n(n), d(d) {}
    PointsView(const Dataset& x)
        : data(x.points.data()), weights(nullptr), n(x.n()), d(x.dim()) {}
    PointsView(const Coreset& c)
        : data(c.points.data()), weights(c.weights.data()), n(c.size()), d(c.dim()) {}
    PointsView(const Matrix& m)
        : data(m.data()), weights(nullptr), n(m.rows()), d(m.cols()) {}

    std::span<const double> point(std::size_t i) const { return {data + i * d, d}; }
    double weight(std::size_t i) const { return weights ? weights[i] : 1.0; }
};

// CSV / configuration failures carry the offending location (1-based).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t row, std::size_t column)
        : std::runtime_error(msg), row(row), column(column) {}
    std::size_t row, column;
};

// A coordinate fell outside a divergence's domain box.
class DomainError : public std::runtime_error {
public:
    DomainError(const std::string& msg, std::size_t coordinate, double value)
        : std::runtime_error(msg), coordinate(coordinate), value(value) {}
    std::size_t coordinate;
    double value;
};

// Invalid configuration (bad divergence setup, bad CLI grid, ...); the CLI
// maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace corekit
