#include "relctrl/kernel.hpp"

#include "relctrl/errors.hpp"

namespace relctrl {

DelaySystem::DelaySystem(Matrix a, Matrix b, Matrix c, int delay)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), delay_(delay) {
    if (!a_.is_square()) throw DimensionError("DelaySystem: A must be square");
    if (b_.rows() != a_.rows() || !b_.is_square()) {
        throw DimensionError("DelaySystem: B must be square with the dimension of A");
    }
    if (c_.rows() != a_.rows()) throw DimensionError("DelaySystem: C must have d rows");
    if (delay_ < 1) throw DimensionError("DelaySystem: delay p must be >= 1");
}

long band_index(long r, int p) {
    const long q = p + 1;
    long n = r + p;
    // floor division (n may be negative for r < -p)
    long f = n / q;
    if (n % q != 0 && (n < 0) != (q < 0)) --f;
    return f;
}

KernelTable::KernelTable(DelaySystem system)
    : sys_(std::move(system)), zero_(sys_.dim(), sys_.dim()) {
    a_pow_.push_back(Matrix::identity(sys_.dim()));
    ab_pow_.push_back(sys_.b());
}

const Matrix& KernelTable::power_of_a(std::size_t e) {
    while (a_pow_.size() <= e) a_pow_.push_back(mul(a_pow_.back(), sys_.a()));
    return a_pow_[e];
}

const Matrix& KernelTable::power_of_a_times_b(std::size_t e) {
    while (ab_pow_.size() <= e) {
        const std::size_t next = ab_pow_.size();
        ab_pow_.push_back(mul(power_of_a(next), sys_.b()));
    }
    return ab_pow_[e];
}

void KernelTable::materialize_q_inputs(long r, long i) {
    for (long m = i; m <= r; ++m) q(m - 1, i - 1);
    power_of_a_times_b(static_cast<std::size_t>(r - i));
}

// Term sum for one cell; every input must already be materialized so this
// only reads the table (safe to run for several cells concurrently). The
// fixed term order keeps float mode bit-identical to the serial path.
Matrix KernelTable::q_sum_from_inputs(long r, long i) const {
    Matrix sum = zero_;
    for (long m = i; m <= r; ++m) {
        const Matrix& dep = (i == 1) ? a_pow_[static_cast<std::size_t>(m - 1)]
                                     : q_memo_.at(std::make_pair(m - 1, i - 1));
        sum = add(sum, reference::mul(ab_pow_[static_cast<std::size_t>(r - m)], dep));
    }
    return sum;
}

const Matrix& KernelTable::q(long r, long i) {
    if (i < 0 || r < 0 || i > r) return zero_;
    if (i == 0) return power_of_a(static_cast<std::size_t>(r));
    auto key = std::make_pair(r, i);
    auto it = q_memo_.find(key);
    if (it != q_memo_.end()) return it->second;
    materialize_q_inputs(r, i);
    return q_memo_.emplace(key, q_sum_from_inputs(r, i)).first->second;
}

const Matrix& KernelTable::y(long r) {
    const int p = sys_.delay();
    if (r <= -p - 1) return zero_;
    auto it = y_memo_.find(r);
    if (it != y_memo_.end()) return it->second;
    Matrix value = zero_;
    if (r <= 0) {
        value = power_of_a(static_cast<std::size_t>(p + r));
    } else {
        const long m = band_index(r, p);
        // The band's cells live in distinct columns, so once their inputs
        // are materialized they are independent: compute the missing ones
        // in one parallel pass, then accumulate in fixed order.
        std::vector<std::pair<long, long>> missing;
        std::size_t cell_ops = 0;
        for (long i = 1; i <= m; ++i) {
            const long rr = r + p - static_cast<long>(p) * i;
            if (i > rr || q_memo_.count(std::make_pair(rr, i))) continue;
            materialize_q_inputs(rr, i);
            missing.emplace_back(rr, i);
            cell_ops += static_cast<std::size_t>(rr - i + 1) * sys_.dim() * sys_.dim() * sys_.dim();
        }
        power_of_a(static_cast<std::size_t>(r + p));
        if (missing.size() > 1 && parallel_enabled(cell_ops)) {
            std::vector<Matrix> results(missing.size(), zero_);
#pragma omp parallel for schedule(dynamic)
            for (long t = 0; t < static_cast<long>(missing.size()); ++t) {
                results[static_cast<std::size_t>(t)] =
                    q_sum_from_inputs(missing[static_cast<std::size_t>(t)].first,
                                      missing[static_cast<std::size_t>(t)].second);
            }
            for (std::size_t t = 0; t < missing.size(); ++t) {
                q_memo_.emplace(missing[t], std::move(results[t]));
            }
        }
        for (long i = 0; i <= m; ++i) value = add(value, q(r + p - static_cast<long>(p) * i, i));
    }
    return y_memo_.emplace(r, std::move(value)).first->second;
}

Matrix KernelTable::recurrence_residual(long r) {
    const int p = sys_.delay();
    return sub(sub(y(r + 1), mul(sys_.a(), y(r))), mul(sys_.b(), y(r - p)));
}

Matrix commutative_q(const DelaySystem& system, long r, long i) {
    if (mul(system.a(), system.b()) != mul(system.b(), system.a())) {
        throw NonCommutingError("commutative_q: A and B do not commute");
    }
    const std::size_t d = system.dim();
    if (i < 0 || r < 0 || i > r) return Matrix(d, d);
    mpz_class binom;
    mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(r), static_cast<unsigned long>(i));
    Matrix value = mul(pow(system.a(), static_cast<std::size_t>(r - i)),
                       pow(system.b(), static_cast<std::size_t>(i)));
    return scale(Scalar::from_mpz(binom), value);
}

} // namespace relctrl
