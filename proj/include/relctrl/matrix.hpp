#pragma once

#include "relctrl/scalar.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace relctrl {

/// Execution policy for the OpenMP kernels.
///   Auto:     parallelize when the estimated work clears a grain threshold.
///   Serial:   always run the reference path.
///   Parallel: always run the OpenMP path (tests use this on small inputs).
enum class ExecPolicy { Auto, Serial, Parallel };

ExecPolicy exec_policy();
void set_exec_policy(ExecPolicy policy);

/// True when the OpenMP path should run for an operation costing roughly
/// `scalar_ops` scalar multiply-adds under the active policy. Always false
/// without OpenMP support.
bool parallel_enabled(std::size_t scalar_ops);

/// Dense row-major matrix of Scalars. Immutable by convention once built:
/// the arithmetic below returns fresh values and never mutates operands.
class Matrix {
  public:
    Matrix(std::size_t rows, std::size_t cols); // zero-filled
    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Scalar& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Scalar& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool operator==(const Matrix& rhs) const;
    bool operator!=(const Matrix& rhs) const { return !(*this == rhs); }

    bool is_zero() const;
    bool is_square() const { return rows_ == cols_; }
    /// Largest absolute entry (used for relative pivot thresholds).
    Scalar max_abs() const;
    std::string to_string() const; // "[[1, 2], [0, 1]]"

  private:
    std::size_t rows_, cols_;
    std::vector<Scalar> data_;
};

Matrix mul(const Matrix& a, const Matrix& b);
Matrix add(const Matrix& a, const Matrix& b);
Matrix sub(const Matrix& a, const Matrix& b);
Matrix scale(const Scalar& s, const Matrix& a);
Matrix transpose(const Matrix& a);
Matrix pow(const Matrix& a, std::size_t exponent);

/// Rank by fraction-free (Bareiss) elimination in rational mode; scaled
/// partial pivoting with a 1e-9 relative threshold in float mode.
std::size_t rank(const Matrix& a);

/// Solves a * x = rhs for square a (rhs may have several columns).
/// Throws SingularMatrixError when no unique solution exists.
Matrix solve(const Matrix& a, const Matrix& rhs);

Scalar det(const Matrix& a);

/// One nonzero vector in the null space of a, or nullopt if a has full
/// column rank. Exact in rational mode.
std::optional<Matrix> nullspace_vector(const Matrix& a);

/// Horizontal concatenation; every block must share the row count.
Matrix hcat(const std::vector<Matrix>& blocks);
/// Vertical concatenation; every block must share the column count.
Matrix vcat(const std::vector<Matrix>& blocks);

Matrix column_vector(const std::vector<Scalar>& entries);

namespace reference {
/// Plain serial triple loop, kept as the oracle for the OpenMP multiply.
Matrix mul(const Matrix& a, const Matrix& b);
} // namespace reference

} // namespace relctrl
