#pragma once

#include "relctrl/kernel.hpp"
#include "relctrl/matrix.hpp"
#include "relctrl/system.hpp"

#include <initializer_list>
#include <random>
#include <vector>

namespace relctrl::testing {

inline Matrix mat(std::initializer_list<std::initializer_list<long>> rows) {
    Matrix m(rows.size(), rows.begin()->size());
    std::size_t i = 0;
    for (const auto& row : rows) {
        std::size_t j = 0;
        for (long v : row) m.at(i, j++) = Scalar(v);
        ++i;
    }
    return m;
}

inline Matrix mats(std::initializer_list<std::initializer_list<const char*>> rows) {
    Matrix m(rows.size(), rows.begin()->size());
    std::size_t i = 0;
    for (const auto& row : rows) {
        std::size_t j = 0;
        for (const char* v : row) m.at(i, j++) = Scalar::parse(v);
        ++i;
    }
    return m;
}

inline Matrix vec(std::initializer_list<long> entries) {
    Matrix m(entries.size(), 1);
    std::size_t i = 0;
    for (long v : entries) m.at(i++, 0) = Scalar(v);
    return m;
}

inline Matrix vecs(std::initializer_list<const char*> entries) {
    Matrix m(entries.size(), 1);
    std::size_t i = 0;
    for (const char* v : entries) m.at(i++, 0) = Scalar::parse(v);
    return m;
}

inline long rand_int(std::mt19937& gen, long lo, long hi) {
    return lo + static_cast<long>(gen() % static_cast<unsigned long>(hi - lo + 1));
}

inline Matrix random_matrix(std::mt19937& gen, std::size_t rows, std::size_t cols, long span,
                            long max_den = 1) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            m.at(i, j) = Scalar::rational(rand_int(gen, -span, span), rand_int(gen, 1, max_den));
        }
    return m;
}

/// d <= 4, k <= k_max, p <= p_max, entries in {-span..span}.
inline DelaySystem random_system(std::mt19937& gen, std::size_t k_max = 2, int p_max = 3,
                                 long span = 2, std::size_t d_max = 4) {
    const std::size_t d = static_cast<std::size_t>(rand_int(gen, 1, static_cast<long>(d_max)));
    const std::size_t k = static_cast<std::size_t>(rand_int(gen, 1, static_cast<long>(k_max)));
    const int p = static_cast<int>(rand_int(gen, 1, p_max));
    return DelaySystem(random_matrix(gen, d, d, span), random_matrix(gen, d, d, span),
                       random_matrix(gen, d, k, span), p);
}

inline InitialHistory random_history(std::mt19937& gen, const DelaySystem& sys, long span = 3,
                                     long max_den = 2) {
    std::vector<Matrix> values;
    for (int r = 0; r <= sys.delay(); ++r) {
        values.push_back(random_matrix(gen, sys.dim(), 1, span, max_den));
    }
    return InitialHistory(sys.delay(), std::move(values));
}

inline ControlSequence random_control(std::mt19937& gen, const DelaySystem& sys, long r1,
                                      long span = 3, long max_den = 2) {
    ControlSequence u;
    for (long r = 0; r < r1; ++r) u.push_back(random_matrix(gen, sys.inputs(), 1, span, max_den));
    return u;
}

/// The running two-dimensional delay-1 example: A=[[1,2],[0,1]],
/// B=[[0,1],[1,0]], C=(1,0)^T.
inline DelaySystem example_system() {
    return DelaySystem(mat({{1, 2}, {0, 1}}), mat({{0, 1}, {1, 0}}), mat({{1}, {0}}), 1);
}

inline InitialHistory example_history() {
    return InitialHistory(1, {vec({1, 0}), vec({2, 1})});
}

/// Commuting pair built as polynomials in one random matrix.
inline std::pair<Matrix, Matrix> random_commuting_pair(std::mt19937& gen, std::size_t d) {
    Matrix m = random_matrix(gen, d, d, 2);
    Matrix m2 = mul(m, m);
    auto poly = [&](long c0, long c1, long c2) {
        Matrix out = scale(Scalar(c0), Matrix::identity(d));
        out = add(out, scale(Scalar(c1), m));
        return add(out, scale(Scalar(c2), m2));
    };
    Matrix a = poly(rand_int(gen, -2, 2), rand_int(gen, -2, 2), rand_int(gen, -1, 1));
    Matrix b = poly(rand_int(gen, -2, 2), rand_int(gen, -2, 2), rand_int(gen, -1, 1));
    return {a, b};
}

/// Non-memoized evaluation straight from the definition; exponential in r,
/// usable for small arguments only. Independent of KernelTable.
inline Matrix q_direct(const Matrix& a, const Matrix& b, long r, long i) {
    const std::size_t d = a.rows();
    if (i < 0 || r < 0 || i > r) return Matrix(d, d);
    if (i == 0) return pow(a, static_cast<std::size_t>(r));
    Matrix sum(d, d);
    for (long m = i; m <= r; ++m) {
        sum = add(sum, mul(pow(a, static_cast<std::size_t>(r - m)), mul(b, q_direct(a, b, m - 1, i - 1))));
    }
    return sum;
}

} // namespace relctrl::testing
