#include "relctrl/controllability.hpp"

#include "relctrl/errors.hpp"

namespace relctrl {

Matrix kalman_matrix(const DelaySystem& sys, KernelTable& table) {
    const long d = static_cast<long>(sys.dim());
    std::vector<Matrix> blocks;
    blocks.reserve(static_cast<std::size_t>(d * d));
    for (long r = 0; r < d; ++r) {
        for (long i = 0; i < d; ++i) blocks.push_back(mul(table.q(r, i), sys.c()));
    }
    return hcat(blocks);
}

std::pair<std::size_t, bool> rank_condition(const DelaySystem& sys, KernelTable& table) {
    std::size_t r = rank(kalman_matrix(sys, table));
    return {r, r == sys.dim()};
}

long minimal_horizon(std::size_t d, std::size_t k, int p) {
    if (d < 1 || k < 1 || p < 1) throw DimensionError("minimal_horizon: d, k >= 1 and p >= 1");
    const long m = static_cast<long>((d + k - 1) / k) - 1; // ceil(d/k) - 1
    return m * (p + 1) + 1;
}

long guaranteed_steering_horizon(std::size_t d, int p) {
    if (d < 1 || p < 1) throw DimensionError("guaranteed_steering_horizon: d >= 1 and p >= 1");
    return static_cast<long>(d - 1) * (p + 1) + 1;
}

ControllabilityReport analyze(const DelaySystem& sys, KernelTable& table,
                              std::optional<long> queried_r1) {
    ControllabilityReport rep{.s = kalman_matrix(sys, table),
                              .rank_s = 0,
                              .d = sys.dim(),
                              .k = sys.inputs(),
                              .p = sys.delay(),
                              .r_star = 0,
                              .queried_r1 = {},
                              .rank_ok = false,
                              .horizon_ok = true,
                              .controllable = false,
                              .reason = {}};
    rep.rank_s = rank(rep.s);
    rep.rank_ok = rep.rank_s == rep.d;
    rep.r_star = minimal_horizon(rep.d, rep.k, rep.p);
    rep.queried_r1 = queried_r1;
    rep.horizon_ok = !queried_r1 || *queried_r1 >= rep.r_star;
    rep.controllable = rep.rank_ok && rep.horizon_ok;
    if (!rep.rank_ok) {
        rep.reason = "rank-deficient";
    } else if (!rep.horizon_ok) {
        rep.reason = "horizon";
    }
    return rep;
}

Matrix steering_vector(const DelaySystem& sys, KernelTable& table, const InitialHistory& hist,
                       const Matrix& target, long r1) {
    if (r1 < 1) throw DimensionError("steering_vector: horizon must be >= 1");
    if (target.rows() != sys.dim() || target.cols() != 1) {
        throw DimensionError("steering_vector: target must be a d x 1 vector");
    }
    if (hist.delay() != sys.delay() || hist.dim() != sys.dim()) {
        throw DimensionError("steering_vector: history does not match the system");
    }
    const int p = sys.delay();
    Matrix eta = sub(target, mul(table.y(r1 - p), hist.at(0)));
    for (long j = -p; j <= -1; ++j) {
        eta = sub(eta, mul(table.y(r1 - 1 - 2 * p - j), mul(sys.b(), hist.at(j))));
    }
    return eta;
}

namespace {

// Sylvester: all leading principal minors positive. Exact for rationals.
bool positive_definite_exact(const Matrix& g) {
    const std::size_t n = g.rows();
    for (std::size_t t = 1; t <= n; ++t) {
        Matrix lead(t, t);
        for (std::size_t i = 0; i < t; ++i)
            for (std::size_t j = 0; j < t; ++j) lead.at(i, j) = g.at(i, j);
        Scalar d = det(lead);
        if (d.is_zero() || d.is_negative()) return false;
    }
    return true;
}

// LDL^T without pivoting; PD iff every diagonal pivot clears the tolerance.
bool positive_definite_float(const Matrix& g) {
    const std::size_t n = g.rows();
    double scale0 = g.max_abs().to_double();
    if (scale0 == 0.0) return false;
    const double tol = 1e-9 * scale0;
    std::vector<std::vector<double>> a(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = g.at(i, j).to_double();
    std::vector<double> diag(n, 0.0);
    std::vector<std::vector<double>> l(n, std::vector<double>(n, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        double dj = a[j][j];
        for (std::size_t k = 0; k < j; ++k) dj -= l[j][k] * l[j][k] * diag[k];
        if (!(dj > tol)) return false;
        diag[j] = dj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double v = a[i][j];
            for (std::size_t k = 0; k < j; ++k) v -= l[i][k] * l[j][k] * diag[k];
            l[i][j] = v / dj;
        }
    }
    return true;
}

} // namespace

Gramian gramian(const DelaySystem& sys, KernelTable& table, long r1) {
    if (r1 < 1) throw DimensionError("gramian: horizon must be >= 1");
    const int p = sys.delay();
    const std::size_t d = sys.dim();

    // Fetch the kernel values serially, then form the rank-k outer products.
    std::vector<const Matrix*> ys(static_cast<std::size_t>(r1));
    for (long j = 1; j <= r1; ++j) ys[static_cast<std::size_t>(j - 1)] = &table.y(r1 - p - j);

    const long terms = r1;
    Matrix g(d, d);
    if (terms > 1 && parallel_enabled(static_cast<std::size_t>(terms) * d * d * sys.inputs() * 2)) {
        std::vector<Matrix> parts(static_cast<std::size_t>(terms), Matrix(d, d));
#pragma omp parallel for schedule(dynamic)
        for (long t = 0; t < terms; ++t) {
            Matrix yc = reference::mul(*ys[static_cast<std::size_t>(t)], sys.c());
            parts[static_cast<std::size_t>(t)] = reference::mul(yc, transpose(yc));
        }
        for (long t = 0; t < terms; ++t) g = add(g, parts[static_cast<std::size_t>(t)]);
    } else {
        for (long t = 0; t < terms; ++t) {
            Matrix yc = mul(*ys[static_cast<std::size_t>(t)], sys.c());
            g = add(g, mul(yc, transpose(yc)));
        }
    }

    Gramian result{.r1 = r1, .g = std::move(g)};
    result.positive_definite = result.g.at(0, 0).is_rational() ? positive_definite_exact(result.g)
                                                               : positive_definite_float(result.g);
    return result;
}

NullTestResult kernel_null_test(const DelaySystem& sys, KernelTable& table) {
    return kernel_null_test(sys, table,
                            minimal_horizon(sys.dim(), sys.inputs(), sys.delay()) - 1);
}

NullTestResult kernel_null_test(const DelaySystem& sys, KernelTable& table, long r_max) {
    const int p = sys.delay();
    if (r_max < -p) throw DimensionError("kernel_null_test: r_max must be >= -p");
    std::vector<Matrix> rows;
    rows.reserve(static_cast<std::size_t>(r_max + p + 1));
    for (long r = -p; r <= r_max; ++r) rows.push_back(transpose(mul(table.y(r), sys.c())));
    Matrix stacked = vcat(rows);
    NullTestResult result;
    result.full_rank = rank(stacked) == sys.dim();
    if (!result.full_rank) result.witness = nullspace_vector(stacked);
    return result;
}

} // namespace relctrl
