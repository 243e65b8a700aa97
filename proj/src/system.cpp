#include "relctrl/system.hpp"

#include "relctrl/errors.hpp"

namespace relctrl {

InitialHistory::InitialHistory(int p, std::vector<Matrix> values)
    : p_(p), values_(std::move(values)) {
    if (p_ < 1) throw DimensionError("InitialHistory: delay p must be >= 1");
    if (values_.size() != static_cast<std::size_t>(p_) + 1) {
        throw DimensionError("InitialHistory: needs exactly p+1 states covering [-p, 0]");
    }
    for (const Matrix& v : values_) {
        if (v.cols() != 1 || v.rows() != values_.front().rows()) {
            throw DimensionError("InitialHistory: states must be column vectors of equal dimension");
        }
    }
}

const Matrix& InitialHistory::at(long r) const {
    if (r < -p_ || r > 0) throw DimensionError("InitialHistory: index outside [-p, 0]");
    return values_[static_cast<std::size_t>(r + p_)];
}

bool InitialHistory::operator==(const InitialHistory& rhs) const {
    return p_ == rhs.p_ && values_ == rhs.values_;
}

Trajectory::Trajectory(int p, std::vector<Matrix> states) : p_(p), states_(std::move(states)) {
    if (states_.size() < static_cast<std::size_t>(p_) + 2) {
        throw DimensionError("Trajectory: must cover [-p, r1] with r1 >= 1");
    }
}

const Matrix& Trajectory::state(long r) const {
    if (r < -p_ || r > horizon()) throw DimensionError("Trajectory: index outside [-p, r1]");
    return states_[static_cast<std::size_t>(r + p_)];
}

bool Trajectory::satisfies_recurrence(const DelaySystem& sys, const ControlSequence& u) const {
    if (static_cast<long>(u.size()) < horizon()) return false;
    for (long r = 0; r < horizon(); ++r) {
        Matrix next = add(add(mul(sys.a(), state(r)), mul(sys.b(), state(r - p_))),
                          mul(sys.c(), u[static_cast<std::size_t>(r)]));
        if (next != state(r + 1)) return false;
    }
    return true;
}

Trajectory simulate(const DelaySystem& sys, const InitialHistory& hist, const ControlSequence& u,
                    long r1) {
    if (r1 < 1) throw DimensionError("simulate: horizon must be >= 1");
    if (hist.delay() != sys.delay() || hist.dim() != sys.dim()) {
        throw DimensionError("simulate: history does not match the system");
    }
    if (static_cast<long>(u.size()) != r1) {
        throw DimensionError("simulate: control must have exactly r1 entries");
    }
    for (const Matrix& uc : u) {
        if (uc.rows() != sys.inputs() || uc.cols() != 1) {
            throw DimensionError("simulate: control entries must be k x 1");
        }
    }
    const int p = sys.delay();
    std::vector<Matrix> states;
    states.reserve(static_cast<std::size_t>(p) + 1 + static_cast<std::size_t>(r1));
    for (long r = -p; r <= 0; ++r) states.push_back(hist.at(r));
    for (long r = 0; r < r1; ++r) {
        const Matrix& yr = states[static_cast<std::size_t>(r + p)];
        const Matrix& ydel = states[static_cast<std::size_t>(r)]; // y(r-p)
        states.push_back(
            add(add(mul(sys.a(), yr), mul(sys.b(), ydel)), mul(sys.c(), u[static_cast<std::size_t>(r)])));
    }
    return Trajectory(p, std::move(states));
}

Matrix closed_form_state(const DelaySystem& sys, KernelTable& table, const InitialHistory& hist,
                         const ControlSequence& u, long r) {
    if (r < 0 || r > static_cast<long>(u.size())) {
        throw DimensionError("closed_form_state: r outside [0, len(u)]");
    }
    const int p = sys.delay();
    Matrix value = mul(table.y(r - p), hist.at(0));
    // History terms fall into the zero region of Y for small r; the kernel
    // table handles that, no clipping here.
    for (long j = -p; j <= -1; ++j) {
        value = add(value, mul(table.y(r - 1 - 2 * p - j), mul(sys.b(), hist.at(j))));
    }
    for (long j = 1; j <= r; ++j) {
        value = add(value, mul(table.y(r - p - j), mul(sys.c(), u[static_cast<std::size_t>(j - 1)])));
    }
    return value;
}

Scalar representation_residual(const DelaySystem& sys, KernelTable& table,
                               const InitialHistory& hist, const ControlSequence& u, long r1) {
    Trajectory traj = simulate(sys, hist, u, r1);
    Scalar worst(0);
    for (long r = 0; r <= r1; ++r) {
        Matrix diff = sub(traj.state(r), closed_form_state(sys, table, hist, u, r));
        for (std::size_t i = 0; i < diff.rows(); ++i) {
            Scalar a = diff.at(i, 0).abs();
            if (worst < a) worst = a;
        }
    }
    return worst;
}

} // namespace relctrl
