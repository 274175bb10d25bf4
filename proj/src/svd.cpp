#include "eirnri/svd.hpp"

#include <lapacke.h>

#include <cassert>
#include <mutex>

extern "C" void openblas_set_num_threads(int);

namespace eirnri {

namespace {

// Threaded BLAS is slower at these sizes and makes results depend on the
// scheduler; pin to one thread before the first factorization.
void pin_blas_threads() {
    static std::once_flag once;
    std::call_once(once, [] { openblas_set_num_threads(1); });
}

}  // namespace

ThinSvd svd_ordered(const Matrix& a) {
    pin_blas_threads();

    const lapack_int m = static_cast<lapack_int>(a.rows());
    const lapack_int n = static_cast<lapack_int>(a.cols());
    const lapack_int k = std::min(m, n);

    ThinSvd out;
    out.u.resize(m, k);
    out.s.resize(k);
    out.v.resize(n, k);

    Matrix work = a;           // dgesdd destroys its input
    Matrix vt(k, n);
    const lapack_int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'S', m, n, work.data(), m,
                                           out.s.data(), out.u.data(), m, vt.data(), k);
    if (info != 0) {
        throw NumericalError("svd_ordered: dgesdd failed (info=" + std::to_string(info) +
                             ", size " + std::to_string(m) + "x" + std::to_string(n) +
                             ", |a|_F=" + std::to_string(a.norm()) + ")");
    }
    out.v = vt.transpose();

#ifndef NDEBUG
    for (int i = 0; i + 1 < k; ++i) assert(out.s(i) >= out.s(i + 1));
    assert(out.s(k - 1) >= 0.0);
#endif
    return out;
}

int rank_of(const Vector& s, RankMode mode) {
    if (s.size() == 0) return 0;
    const double cutoff = mode == RankMode::exact_zero ? 0.0 : 1e-12 * s(0);
    int r = 0;
    while (r < s.size() && s(r) > cutoff) ++r;
    return r;
}

}  // namespace eirnri
