#include "relctrl/matrix.hpp"

#include "relctrl/errors.hpp"

#include <atomic>
#include <cstddef>
#include <utility>

namespace relctrl {

namespace {

std::atomic<ExecPolicy> g_policy{ExecPolicy::Auto};

// Rational entries make each fused multiply-add expensive, so the grain is
// counted in scalar operations, not matrix cells.
constexpr std::size_t kParallelGrain = 8192;

void require(bool cond, const char* what) {
    if (!cond) throw DimensionError(what);
}

} // namespace

bool parallel_enabled(std::size_t scalar_ops) {
#ifdef _OPENMP
    switch (exec_policy()) {
        case ExecPolicy::Serial: return false;
        case ExecPolicy::Parallel: return true;
        case ExecPolicy::Auto: return scalar_ops >= kParallelGrain;
    }
#endif
    (void)scalar_ops;
    return false;
}

ExecPolicy exec_policy() { return g_policy.load(std::memory_order_relaxed); }
void set_exec_policy(ExecPolicy policy) { g_policy.store(policy, std::memory_order_relaxed); }

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
    require(rows >= 1 && cols >= 1, "matrix dimensions must be at least 1x1");
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Scalar(1);
    return m;
}

bool Matrix::operator==(const Matrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) return false;
    for (std::size_t i = 0; i < data_.size(); ++i) {
        if (data_[i] != rhs.data_[i]) return false;
    }
    return true;
}

bool Matrix::is_zero() const {
    for (const Scalar& s : data_) {
        if (!s.is_zero()) return false;
    }
    return true;
}

Scalar Matrix::max_abs() const {
    Scalar best = data_[0].abs();
    for (const Scalar& s : data_) {
        Scalar a = s.abs();
        if (best < a) best = a;
    }
    return best;
}

std::string Matrix::to_string() const {
    std::string out = "[";
    for (std::size_t i = 0; i < rows_; ++i) {
        out += (i == 0) ? "[" : ", [";
        for (std::size_t j = 0; j < cols_; ++j) {
            if (j) out += ", ";
            out += at(i, j).to_string();
        }
        out += "]";
    }
    out += "]";
    return out;
}

namespace reference {

Matrix mul(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.rows(), "mul: inner dimensions differ");
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            Scalar sum = a.at(i, 0) * b.at(0, j);
            for (std::size_t k = 1; k < a.cols(); ++k) sum += a.at(i, k) * b.at(k, j);
            out.at(i, j) = std::move(sum);
        }
    }
    return out;
}

} // namespace reference

Matrix mul(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.rows(), "mul: inner dimensions differ");
    if (!parallel_enabled(a.rows() * b.cols() * a.cols())) return reference::mul(a, b);
    Matrix out(a.rows(), b.cols());
    const long cells = static_cast<long>(a.rows() * b.cols());
    const std::size_t cols = b.cols();
    // Each cell is written by exactly one thread; the k-loop order inside a
    // cell is fixed, so float mode matches the serial path bit for bit.
#pragma omp parallel for schedule(dynamic, 8)
    for (long idx = 0; idx < cells; ++idx) {
        const std::size_t i = static_cast<std::size_t>(idx) / cols;
        const std::size_t j = static_cast<std::size_t>(idx) % cols;
        Scalar sum = a.at(i, 0) * b.at(0, j);
        for (std::size_t k = 1; k < a.cols(); ++k) sum += a.at(i, k) * b.at(k, j);
        out.at(i, j) = std::move(sum);
    }
    return out;
}

Matrix add(const Matrix& a, const Matrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "add: shapes differ");
    Matrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = a.at(i, j) + b.at(i, j);
    return out;
}

Matrix sub(const Matrix& a, const Matrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "sub: shapes differ");
    Matrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = a.at(i, j) - b.at(i, j);
    return out;
}

Matrix scale(const Scalar& s, const Matrix& a) {
    Matrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = s * a.at(i, j);
    return out;
}

Matrix transpose(const Matrix& a) {
    Matrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out.at(j, i) = a.at(i, j);
    return out;
}

Matrix pow(const Matrix& a, std::size_t exponent) {
    require(a.is_square(), "pow: matrix must be square");
    Matrix out = Matrix::identity(a.rows());
    for (std::size_t e = 0; e < exponent; ++e) out = mul(out, a);
    return out;
}

namespace {

// Row-scaled integer copy of a rational matrix: each row is multiplied by the
// (positive) lcm of its denominators, which preserves rank and minor signs.
std::vector<std::vector<mpz_class>> to_integer_rows(const Matrix& a) {
    std::vector<std::vector<mpz_class>> rows(a.rows(), std::vector<mpz_class>(a.cols()));
    for (std::size_t i = 0; i < a.rows(); ++i) {
        mpz_class l(1);
        for (std::size_t j = 0; j < a.cols(); ++j) {
            mpz_class den = a.at(i, j).rational_value().get_den();
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), den.get_mpz_t());
        }
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const mpq_class& q = a.at(i, j).rational_value();
            rows[i][j] = q.get_num() * (l / q.get_den());
        }
    }
    return rows;
}

std::size_t rank_bareiss(const Matrix& a) {
    auto m = to_integer_rows(a);
    const std::size_t R = a.rows(), C = a.cols();
    std::size_t r = 0;
    mpz_class prev(1);
    for (std::size_t c = 0; c < C && r < R; ++c) {
        std::size_t piv = r;
        while (piv < R && m[piv][c] == 0) ++piv;
        if (piv == R) continue;
        std::swap(m[r], m[piv]);
        for (std::size_t i = r + 1; i < R; ++i) {
            for (std::size_t j = c + 1; j < C; ++j) {
                m[i][j] = (m[i][j] * m[r][c] - m[i][c] * m[r][j]) / prev; // exact
            }
            m[i][c] = 0;
        }
        prev = m[r][c];
        ++r;
    }
    return r;
}

std::size_t rank_float(const Matrix& a) {
    const std::size_t R = a.rows(), C = a.cols();
    std::vector<std::vector<double>> m(R, std::vector<double>(C));
    double scale0 = 0.0;
    for (std::size_t i = 0; i < R; ++i)
        for (std::size_t j = 0; j < C; ++j) {
            m[i][j] = a.at(i, j).to_double();
            scale0 = std::max(scale0, std::abs(m[i][j]));
        }
    if (scale0 == 0.0) return 0;
    const double tol = 1e-9 * scale0;
    std::size_t r = 0;
    for (std::size_t c = 0; c < C && r < R; ++c) {
        // scaled partial pivoting: best |entry| / row-infinity-norm
        std::size_t piv = r;
        double best = -1.0;
        for (std::size_t i = r; i < R; ++i) {
            double rnorm = 0.0;
            for (std::size_t j = c; j < C; ++j) rnorm = std::max(rnorm, std::abs(m[i][j]));
            if (rnorm == 0.0) continue;
            double score = std::abs(m[i][c]) / rnorm;
            if (score > best) { best = score; piv = i; }
        }
        if (best < 0.0 || std::abs(m[piv][c]) <= tol) continue;
        std::swap(m[r], m[piv]);
        for (std::size_t i = r + 1; i < R; ++i) {
            if (m[i][c] == 0.0) continue;
            double f = m[i][c] / m[r][c];
            for (std::size_t j = c; j < C; ++j) m[i][j] -= f * m[r][j];
        }
        ++r;
    }
    return r;
}

bool matrix_is_rational(const Matrix& a) { return a.at(0, 0).is_rational(); }

// Gauss-Jordan on [a | rhs]; pivots chosen exactly in rational mode and by
// partial pivoting with the relative 1e-9 threshold in float mode.
Matrix solve_impl(const Matrix& a, const Matrix& rhs) {
    require(a.is_square(), "solve: matrix must be square");
    require(a.rows() == rhs.rows(), "solve: rhs row count differs");
    const std::size_t n = a.rows(), w = rhs.cols();
    std::vector<std::vector<Scalar>> m(n, std::vector<Scalar>(n + w));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m[i][j] = a.at(i, j);
        for (std::size_t j = 0; j < w; ++j) m[i][n + j] = rhs.at(i, j);
    }
    const bool exact = matrix_is_rational(a);
    Scalar tol = exact ? Scalar(0) : Scalar::from_double(1e-9 * a.max_abs().to_double());
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        Scalar best = m[c][c].abs();
        for (std::size_t i = c + 1; i < n; ++i) {
            Scalar cand = m[i][c].abs();
            if (best < cand) { best = cand; piv = i; }
        }
        if (exact ? m[piv][c].is_zero() : !(tol < best)) {
            throw SingularMatrixError("solve: singular matrix");
        }
        std::swap(m[c], m[piv]);
        Scalar inv = Scalar(1) / m[c][c];
        for (std::size_t j = c; j < n + w; ++j) m[c][j] = m[c][j] * inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || m[i][c].is_zero()) continue;
            Scalar f = m[i][c];
            for (std::size_t j = c; j < n + w; ++j) m[i][j] -= f * m[c][j];
        }
    }
    Matrix x(n, w);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < w; ++j) x.at(i, j) = std::move(m[i][n + j]);
    return x;
}

} // namespace

std::size_t rank(const Matrix& a) {
    return matrix_is_rational(a) ? rank_bareiss(a) : rank_float(a);
}

Matrix solve(const Matrix& a, const Matrix& rhs) { return solve_impl(a, rhs); }

Scalar det(const Matrix& a) {
    require(a.is_square(), "det: matrix must be square");
    const std::size_t n = a.rows();
    std::vector<std::vector<Scalar>> m(n, std::vector<Scalar>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = a.at(i, j);
    Scalar d(1);
    bool negate = false;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && m[piv][c].is_zero()) ++piv;
        if (piv == n) return Scalar(0);
        if (piv != c) { std::swap(m[c], m[piv]); negate = !negate; }
        d *= m[c][c];
        Scalar inv = Scalar(1) / m[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m[i][c].is_zero()) continue;
            Scalar f = m[i][c] * inv;
            for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
        }
    }
    return negate ? -d : d;
}

std::optional<Matrix> nullspace_vector(const Matrix& a) {
    const std::size_t R = a.rows(), C = a.cols();
    std::vector<std::vector<Scalar>> m(R, std::vector<Scalar>(C));
    for (std::size_t i = 0; i < R; ++i)
        for (std::size_t j = 0; j < C; ++j) m[i][j] = a.at(i, j);
    const bool exact = matrix_is_rational(a);
    Scalar tol = exact ? Scalar(0) : Scalar::from_double(1e-9 * a.max_abs().to_double());

    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < C && r < R; ++c) {
        std::size_t piv = r;
        Scalar best = m[r][c].abs();
        for (std::size_t i = r + 1; i < R; ++i) {
            Scalar cand = m[i][c].abs();
            if (best < cand) { best = cand; piv = i; }
        }
        if (exact ? m[piv][c].is_zero() : !(tol < best)) continue;
        std::swap(m[r], m[piv]);
        Scalar inv = Scalar(1) / m[r][c];
        for (std::size_t j = c; j < C; ++j) m[r][j] = m[r][j] * inv;
        for (std::size_t i = 0; i < R; ++i) {
            if (i == r || m[i][c].is_zero()) continue;
            Scalar f = m[i][c];
            for (std::size_t j = c; j < C; ++j) m[i][j] -= f * m[r][j];
        }
        pivot_col.push_back(c);
        ++r;
    }
    if (pivot_col.size() == C) return std::nullopt;

    // first free column: set it to 1, pivot variables to -coefficient
    std::size_t free_col = 0;
    {
        std::size_t k = 0;
        while (free_col < C && k < pivot_col.size() && pivot_col[k] == free_col) { ++k; ++free_col; }
    }
    Matrix v(C, 1);
    v.at(free_col, 0) = Scalar(1);
    for (std::size_t k = 0; k < pivot_col.size(); ++k) {
        if (pivot_col[k] < free_col) v.at(pivot_col[k], 0) = -m[k][free_col];
    }
    return v;
}

Matrix hcat(const std::vector<Matrix>& blocks) {
    require(!blocks.empty(), "hcat: no blocks");
    std::size_t cols = 0;
    for (const Matrix& b : blocks) {
        require(b.rows() == blocks[0].rows(), "hcat: row counts differ");
        cols += b.cols();
    }
    Matrix out(blocks[0].rows(), cols);
    std::size_t off = 0;
    for (const Matrix& b : blocks) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) out.at(i, off + j) = b.at(i, j);
        off += b.cols();
    }
    return out;
}

Matrix vcat(const std::vector<Matrix>& blocks) {
    require(!blocks.empty(), "vcat: no blocks");
    std::size_t rows = 0;
    for (const Matrix& b : blocks) {
        require(b.cols() == blocks[0].cols(), "vcat: column counts differ");
        rows += b.rows();
    }
    Matrix out(rows, blocks[0].cols());
    std::size_t off = 0;
    for (const Matrix& b : blocks) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) out.at(off + i, j) = b.at(i, j);
        off += b.rows();
    }
    return out;
}

Matrix column_vector(const std::vector<Scalar>& entries) {
    Matrix v(entries.size(), 1);
    for (std::size_t i = 0; i < entries.size(); ++i) v.at(i, 0) = entries[i];
    return v;
}

} // namespace relctrl
