#pragma once

#include "relctrl/matrix.hpp"

#include <map>
#include <utility>
#include <vector>

namespace relctrl {

/// y(r+1) = A y(r) + B y(r-p) + C u(r): one constant pure delay p >= 1,
/// state dimension d, input dimension k.
class DelaySystem {
  public:
    DelaySystem(Matrix a, Matrix b, Matrix c, int delay);

    const Matrix& a() const { return a_; }
    const Matrix& b() const { return b_; }
    const Matrix& c() const { return c_; }
    int delay() const { return delay_; }
    std::size_t dim() const { return a_.rows(); }    // d
    std::size_t inputs() const { return c_.cols(); } // k

  private:
    Matrix a_, b_, c_;
    int delay_;
};

/// Band index m = floor((r+p)/(p+1)); for r in [(m-1)(p+1)+1, m(p+1)] it
/// also equals floor((r-1)/(p+1)) + 1.
long band_index(long r, int p);

/// Memoized table of the kernel blocks Q(r,i) and the delayed discrete
/// matrix exponential Y(r). Q and Y are total over the integers:
///   Q(r,i) = 0            for i < 0, r < 0 or i > r
///   Q(r,0) = A^r
///   Q(r,i) = sum_{m=i}^{r} A^(r-m) B Q(m-1, i-1)
///   Y(r)   = 0            for r <= -p-1
///   Y(r)   = A^(p+r)      for -p <= r <= 0
///   Y(r)   = sum_{i=0}^{band_index(r,p)} Q(r+p-p*i, i)   for r >= 1
/// Lookups mutate the memo, so a table needs exclusive access while
/// evaluating; returned matrices are immutable.
class KernelTable {
  public:
    explicit KernelTable(DelaySystem system);

    const DelaySystem& system() const { return sys_; }

    const Matrix& q(long r, long i);
    const Matrix& y(long r);

    /// Y(r+1) - A Y(r) - B Y(r-p). Zero everywhere except r = -p-1, where
    /// it equals the identity: the unit impulse that launches the
    /// fundamental solution out of the zero region.
    Matrix recurrence_residual(long r);

    /// Memoized A^e, e >= 0.
    const Matrix& power_of_a(std::size_t e);

  private:
    const Matrix& power_of_a_times_b(std::size_t e);
    void materialize_q_inputs(long r, long i);
    Matrix q_sum_from_inputs(long r, long i) const;

    DelaySystem sys_;
    Matrix zero_;
    std::map<std::pair<long, long>, Matrix> q_memo_;
    std::map<long, Matrix> y_memo_;
    std::vector<Matrix> a_pow_;
    std::vector<Matrix> ab_pow_; // A^e * B
};

/// Binomial closed form C(r,i) A^(r-i) B^i, valid only when A B = B A
/// (checked; throws NonCommutingError). Zero outside 0 <= i <= r.
/// Kept separate from KernelTable as an independent cross-check route.
Matrix commutative_q(const DelaySystem& system, long r, long i);

} // namespace relctrl
