#pragma once

#include "relctrl/controllability.hpp"
#include "relctrl/kernel.hpp"
#include "relctrl/system.hpp"

namespace relctrl {

/// The synthesized minimum-norm steering control together with its
/// verification data. In rational mode the residual is exactly zero.
struct SteeringPlan {
    long r1 = 0;
    Matrix eta;             // d x 1
    Gramian gram;           // at horizon r1
    ControlSequence control; // u*(0..r1-1), each k x 1
    Matrix achieved_state;  // simulated y(r1)
    Scalar residual;        // max |achieved - target| componentwise
};

/// Builds u*(r) = C^T Y(r1-p-r-1)^T G^{-1} eta and simulates it.
/// Preconditions (checked): the rank condition holds (else
/// NotControllableError) and r1 >= minimal_horizon (else
/// HorizonTooShortError). A singular Gramian raises SingularGramianError;
/// with k = 1 that cannot happen once the preconditions hold, with k > 1 it
/// can until r1 reaches guaranteed_steering_horizon.
SteeringPlan synthesize(const DelaySystem& sys, KernelTable& table, const InitialHistory& hist,
                        const Matrix& target, long r1);

/// True iff replaying plan.control reproduces the history on [-p, 0] and
/// hits the target at r1 (exact in rational mode, 1e-9 per component in
/// float mode).
bool verify_plan(const DelaySystem& sys, KernelTable& table, const InitialHistory& hist,
                 const SteeringPlan& plan, const Matrix& target);

} // namespace relctrl
