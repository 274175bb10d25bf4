#include "eirnri/subproblem.hpp"

#include <algorithm>
#include <cmath>

namespace eirnri {

namespace {

void check_weights(const Vector& w) {
    for (int i = 0; i < w.size(); ++i) {
        if (!(w(i) > 0.0)) throw std::invalid_argument("weights must be positive");
        if (i > 0 && w(i) < w(i - 1))
            throw std::invalid_argument("weights must be ascending; the closed form is only a global "
                                        "minimizer under ascending weights");
    }
}

double per_value_threshold(double scale, double w) {
    return scale == 0.0 ? 0.0 : scale * w;  // avoids 0 * inf
}

}  // namespace

WeightedSvtResult solve_weighted_svt(const SubproblemInput& input) {
    if (!input.step_matrix.allFinite())
        throw NumericalError("solve_weighted_svt: step matrix has non-finite entries");
    const int k = static_cast<int>(std::min(input.step_matrix.rows(), input.step_matrix.cols()));
    if (input.weights.size() != k)
        throw std::invalid_argument("solve_weighted_svt: weights length must be min(m,n)");
    check_weights(input.weights);

    WeightedSvtResult out;
    out.svd = svd_ordered(input.step_matrix);
    out.step_svals = out.svd.s;

    for (int i = 0; i < k; ++i) {
        const double t = per_value_threshold(input.threshold_scale, input.weights(i));
        out.svd.s(i) = std::max(out.step_svals(i) - t, 0.0);
    }
    out.support_size = rank_of(out.svd.s, RankMode::exact_zero);
    out.x = out.svd.reconstruct();
    return out;
}

Vector certificate_products(const WeightedSvtResult& result, const Vector& weights, double beta,
                            double lambda) {
    const int k = static_cast<int>(result.svd.s.size());
    Vector t(k);
    for (int i = 0; i < k; ++i) {
        if (i < result.support_size) {
            t(i) = lambda * weights(i);  // xi_i = 1
        } else {
            // xi_i = clamp(2 beta Sigma_i / (lambda w_i), 0, 1); the product
            // lambda w_i xi_i collapses to min(2 beta Sigma_i, lambda w_i),
            // finite even when w_i is +inf.
            const double lw = lambda * weights(i);
            t(i) = std::min(std::max(2.0 * beta * result.step_svals(i), 0.0), lw);
        }
    }
    return t;
}

double subproblem_kkt_residual(const WeightedSvtResult& result, const SubproblemInput& input,
                               double beta, double lambda) {
    const double scale = lambda / (2.0 * beta);
    if (std::abs(scale - input.threshold_scale) > 1e-12 * std::max(1.0, input.threshold_scale))
        throw std::invalid_argument("subproblem_kkt_residual: lambda/(2 beta) != threshold_scale");

    // In the shared basis the residual matrix is
    //   U diag(2 beta (s_out - Sigma) + lambda w o xi) V^T,
    // so its Frobenius norm is the 2-norm of the diagonal vector.
    const Vector prod = certificate_products(result, input.weights, beta, lambda);
    double acc = 0.0;
    for (int i = 0; i < prod.size(); ++i) {
        const double r = 2.0 * beta * (result.svd.s(i) - result.step_svals(i)) + prod(i);
        acc += r * r;
    }
    return std::sqrt(acc);
}

}  // namespace eirnri
