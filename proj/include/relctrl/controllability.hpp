#pragma once

#include "relctrl/kernel.hpp"
#include "relctrl/matrix.hpp"
#include "relctrl/system.hpp"

#include <optional>
#include <string>

namespace relctrl {

/// Outcome of the rank analysis for one system (and optionally one queried
/// horizon). r_star is the minimal admissible horizon; the verdict is
/// controllable exactly when rank_s = d and the queried horizon (if any)
/// is at least r_star.
struct ControllabilityReport {
    Matrix s;          // d x (d*d*k) block matrix [Q(r,i)C], r-major then i
    std::size_t rank_s = 0;
    std::size_t d = 0, k = 0;
    int p = 0;
    long r_star = 0;
    std::optional<long> queried_r1;
    bool rank_ok = false;
    bool horizon_ok = true; // vacuously true when no horizon was queried
    bool controllable = false;
    std::string reason; // "", "rank-deficient" or "horizon"
};

/// Horizontal concatenation of the blocks Q(r,i)C for r = 0..d-1 (outer)
/// and i = 0..d-1 (inner). Blocks with i > r are zero and kept, so the
/// shape is a pure function of (d, k).
Matrix kalman_matrix(const DelaySystem& sys, KernelTable& table);

/// rank of the Kalman-type matrix, and whether it equals d.
std::pair<std::size_t, bool> rank_condition(const DelaySystem& sys, KernelTable& table);

/// Minimal admissible horizon (ceil(d/k) - 1)(p+1) + 1. Necessary for
/// steering; see guaranteed_steering_horizon for the sufficient bound.
long minimal_horizon(std::size_t d, std::size_t k, int p);

/// Horizon (d-1)(p+1) + 1, from which the Gramian of any system passing the
/// rank test is positive definite, for every input count k. Equal to
/// minimal_horizon when k = 1, larger otherwise: between the two bounds a
/// full-rank system with k > 1 can still have a singular Gramian.
long guaranteed_steering_horizon(std::size_t d, int p);

ControllabilityReport analyze(const DelaySystem& sys, KernelTable& table,
                              std::optional<long> queried_r1);

/// eta = y* - Y(r1-p) psi(0) - sum_{j=-p}^{-1} Y(r1-1-2p-j) B psi(j):
/// the target minus the free response at the horizon.
Matrix steering_vector(const DelaySystem& sys, KernelTable& table, const InitialHistory& hist,
                       const Matrix& target, long r1);

struct Gramian {
    long r1 = 0;
    Matrix g;
    bool positive_definite = false;
};

/// G = sum_{j=1}^{r1} Y(r1-p-j) C C^T Y(r1-p-j)^T. Definiteness is decided
/// by exact leading-principal-minor signs in rational mode and by an LDL^T
/// factorization with a 1e-9 relative pivot tolerance in float mode.
Gramian gramian(const DelaySystem& sys, KernelTable& table, long r1);

struct NullTestResult {
    bool full_rank = false;
    std::optional<Matrix> witness; // nonzero eta with eta^T Y(r) C = 0 on the window
};

/// Stacks the blocks (Y(r) C)^T for r in [-p, r_max] and checks whether
/// their rank is d; when it is not, returns a left-null witness. The
/// overload without r_max uses the default window r_star - 1 (Y vanishes
/// below -p, so that window carries the whole support).
NullTestResult kernel_null_test(const DelaySystem& sys, KernelTable& table, long r_max);
NullTestResult kernel_null_test(const DelaySystem& sys, KernelTable& table);

} // namespace relctrl
