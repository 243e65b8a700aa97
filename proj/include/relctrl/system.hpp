#pragma once

#include "relctrl/kernel.hpp"
#include "relctrl/matrix.hpp"

#include <vector>

namespace relctrl {

/// Prescribed state values on the start window [-p, 0], stored densely.
class InitialHistory {
  public:
    /// values[j] is the state at r = -p + j; exactly p+1 column vectors.
    InitialHistory(int p, std::vector<Matrix> values);

    int delay() const { return p_; }
    std::size_t dim() const { return values_.front().rows(); }
    const Matrix& at(long r) const; // r in [-p, 0]

    bool operator==(const InitialHistory& rhs) const;

  private:
    int p_;
    std::vector<Matrix> values_;
};

/// Control inputs u(0), ..., u(r1-1), each a k x 1 column.
using ControlSequence = std::vector<Matrix>;

/// States y(-p), ..., y(r1); agrees with the initial history on [-p, 0] and
/// satisfies the recurrence exactly in rational mode by construction.
class Trajectory {
  public:
    Trajectory(int p, std::vector<Matrix> states);

    int delay() const { return p_; }
    long horizon() const { return static_cast<long>(states_.size()) - 1 - p_; }
    const Matrix& state(long r) const; // r in [-p, horizon()]

    /// Re-checks y(r+1) = A y(r) + B y(r-p) + C u(r) on every step
    /// (used to validate trajectories read back from files).
    bool satisfies_recurrence(const DelaySystem& sys, const ControlSequence& u) const;

  private:
    int p_;
    std::vector<Matrix> states_;
};

/// Runs the recurrence directly.
Trajectory simulate(const DelaySystem& sys, const InitialHistory& hist, const ControlSequence& u,
                    long r1);

/// Evaluates the representation formula
///   y(r) = Y(r-p) psi(0) + sum_{j=-p}^{-1} Y(r-1-2p-j) B psi(j)
///        + sum_{j=1}^{r} Y(r-p-j) C u(j-1)
/// at a single step r in [0, len(u)].
Matrix closed_form_state(const DelaySystem& sys, KernelTable& table, const InitialHistory& hist,
                         const ControlSequence& u, long r);

/// Max componentwise |simulate - closed_form_state| over r in [0, r1];
/// exactly zero in rational mode.
Scalar representation_residual(const DelaySystem& sys, KernelTable& table,
                               const InitialHistory& hist, const ControlSequence& u, long r1);

} // namespace relctrl
