#include "relctrl/synthesis.hpp"

#include "relctrl/errors.hpp"

namespace relctrl {

SteeringPlan synthesize(const DelaySystem& sys, KernelTable& table, const InitialHistory& hist,
                        const Matrix& target, long r1) {
    auto [rank_s, rank_ok] = rank_condition(sys, table);
    if (!rank_ok) {
        throw NotControllableError("synthesize: Kalman-type matrix has rank " +
                                   std::to_string(rank_s) + " < " + std::to_string(sys.dim()));
    }
    const long r_star = minimal_horizon(sys.dim(), sys.inputs(), sys.delay());
    if (r1 < r_star) {
        throw HorizonTooShortError("synthesize: horizon " + std::to_string(r1) +
                                   " is below the minimal horizon " + std::to_string(r_star));
    }

    const int p = sys.delay();
    Matrix eta = steering_vector(sys, table, hist, target, r1);
    Gramian gram = gramian(sys, table, r1);
    if (!gram.positive_definite) {
        throw SingularGramianError("synthesize: Gramian is singular at horizon " +
                                   std::to_string(r1));
    }
    Matrix weights = solve(gram.g, eta); // never forms G^{-1}

    const Matrix ct = transpose(sys.c());
    ControlSequence control;
    control.reserve(static_cast<std::size_t>(r1));
    for (long r = 0; r < r1; ++r) {
        control.push_back(mul(ct, mul(transpose(table.y(r1 - p - r - 1)), weights)));
    }

    Trajectory traj = simulate(sys, hist, control, r1);
    Matrix achieved = traj.state(r1);
    Scalar residual(0);
    for (std::size_t i = 0; i < achieved.rows(); ++i) {
        Scalar a = (achieved.at(i, 0) - target.at(i, 0)).abs();
        if (residual < a) residual = a;
    }
    return SteeringPlan{.r1 = r1,
                        .eta = std::move(eta),
                        .gram = std::move(gram),
                        .control = std::move(control),
                        .achieved_state = std::move(achieved),
                        .residual = std::move(residual)};
}

namespace {

bool close_enough(const Matrix& a, const Matrix& b) {
    if (a.at(0, 0).is_rational() && b.at(0, 0).is_rational()) return a == b;
    Scalar tol = Scalar::from_double(1e-9);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (tol < (a.at(i, j) - b.at(i, j)).abs()) return false;
        }
    return true;
}

} // namespace

bool verify_plan(const DelaySystem& sys, KernelTable& table, const InitialHistory& hist,
                 const SteeringPlan& plan, const Matrix& target) {
    Trajectory traj = simulate(sys, hist, plan.control, plan.r1);
    for (long r = -sys.delay(); r <= 0; ++r) {
        if (traj.state(r) != hist.at(r)) return false;
    }
    if (!close_enough(traj.state(plan.r1), target)) return false;
    // same endpoint through the representation formula
    return close_enough(closed_form_state(sys, table, hist, plan.control, plan.r1), target);
}

} // namespace relctrl
