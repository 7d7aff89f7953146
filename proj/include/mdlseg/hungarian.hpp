#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <vector>

namespace mdlseg {

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    /// Throws ValidationError when the rows are ragged.
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }
    [[nodiscard]] bool empty() const { return rows_ == 0 || cols_ == 0; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

enum class Objective { Minimize, Maximize };

struct Assignment {
    /// Column per row; nullopt for rows left over when rows > cols.
    std::vector<std::optional<std::size_t>> row_to_col;
    /// Sum of the original entries over assigned rows, in row order.
    double total = 0.0;
};

/// Kuhn-Munkres on the matrix padded square with zeros. Among optimal
/// assignments the lexicographically smallest row_to_col vector is
/// returned (an unassigned row sorts after every column). Throws
/// ValidationError on an empty matrix or a non-finite entry.
Assignment hungarian(const Matrix& cost, Objective objective = Objective::Minimize);

} // namespace mdlseg
