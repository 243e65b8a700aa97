// Wall-clock comparison of the serial reference path against the OpenMP
// kernels on the hot spots: rational dense multiply, kernel-table
// construction and Gramian accumulation. "auto" is the shipping policy:
// it engages the parallel path only above a work threshold, so tiny
// desk-scale problems stay on the serial path.

#include "relctrl/controllability.hpp"
#include "relctrl/kernel.hpp"
#include "relctrl/matrix.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace relctrl;

namespace {

double now() {
#ifdef _OPENMP
    return omp_get_wtime();
#else
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
#endif
}

Matrix random_matrix(std::mt19937& gen, std::size_t rows, std::size_t cols, int span) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            long num = static_cast<long>(gen() % (2 * span + 1)) - span;
            long den = 1 + static_cast<long>(gen() % 3);
            m.at(i, j) = Scalar::rational(num, den);
        }
    return m;
}

template <typename F>
double time_policy(ExecPolicy policy, int reps, F&& f) {
    double best = 1e300;
    set_exec_policy(policy);
    for (int r = 0; r < reps; ++r) {
        double t0 = now();
        f();
        best = std::min(best, now() - t0);
    }
    return best;
}

void report(const char* name, double serial_s, double auto_s, double parallel_s) {
    std::printf("%-32s serial %8.1f ms   auto %8.1f ms (%4.2fx)   forced %8.1f ms (%4.2fx)\n",
                name, serial_s * 1e3, auto_s * 1e3, serial_s / auto_s, parallel_s * 1e3,
                serial_s / parallel_s);
}

template <typename F>
void bench(const char* name, int reps, F&& f) {
    double ts = time_policy(ExecPolicy::Serial, reps, f);
    double ta = time_policy(ExecPolicy::Auto, reps, f);
    double tp = time_policy(ExecPolicy::Parallel, reps, f);
    report(name, ts, ta, tp);
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without openmp: all columns run the serial path\n");
#endif
    std::mt19937 gen(12345);

    // dense rational multiply; squaring first grows the integer operands the
    // way repeated kernel applications do
    for (std::size_t n : {24u, 48u}) {
        Matrix a = random_matrix(gen, n, n, 9);
        Matrix grown = reference::mul(a, a);
        Matrix b = reference::mul(grown, grown);
        volatile std::size_t sink = 0;
        char label[64];
        std::snprintf(label, sizeof(label), "rational mul %zux%zu (grown)", n, n);
        bench(label, 5, [&] { sink = sink + mul(b, b).rows(); });
    }

    // kernel tables: a desk-scale system (the parallel path is not worth it
    // and auto stays serial) and a wider one where it pays
    {
        DelaySystem sys(random_matrix(gen, 3, 3, 2), random_matrix(gen, 3, 3, 2),
                        random_matrix(gen, 3, 1, 2), 2);
        bench("kernel table Y(0..45), d=3", 3, [&] {
            KernelTable table(sys);
            for (long r = 0; r <= 45; ++r) table.y(r);
        });
    }
    {
        DelaySystem sys(random_matrix(gen, 8, 8, 2), random_matrix(gen, 8, 8, 2),
                        random_matrix(gen, 8, 2, 2), 2);
        bench("kernel table Y(0..40), d=8", 3, [&] {
            KernelTable table(sys);
            for (long r = 0; r <= 40; ++r) table.y(r);
        });
    }

    // Gramian accumulation over a long horizon (kernel values pre-memoized)
    {
        DelaySystem sys(random_matrix(gen, 8, 8, 2), random_matrix(gen, 8, 8, 2),
                        random_matrix(gen, 8, 2, 2), 2);
        set_exec_policy(ExecPolicy::Serial);
        KernelTable table(sys);
        for (long j = 1; j <= 60; ++j) table.y(60 - sys.delay() - j);
        bench("gramian r1=60, d=8", 5, [&] { gramian(sys, table, 60); });
    }

    set_exec_policy(ExecPolicy::Auto);
    return 0;
}
