#pragma once

#include "eirnri/svd.hpp"
#include "eirnri/types.hpp"

namespace eirnri {

/// Data of one weighted singular value thresholding subproblem
///   min_X  beta ||X - step_matrix||_F^2 + lambda * sum w_i sigma_i(X),
/// written with threshold_scale = lambda / (2 beta) so the per-value
/// threshold is threshold_scale * w_i.
struct SubproblemInput {
    Matrix step_matrix;     // (X^k + Y^k)/2 - grad f(Y^k)/(2 beta)
    Vector weights;         // ascending, positive (may end in +inf)
    double threshold_scale; // lambda / (2 beta)
};

struct WeightedSvtResult {
    Matrix x;           // U diag(s_out) V^T, the global minimizer
    ThinSvd svd;        // factors shared with the input's SVD; s = s_out
    Vector step_svals;  // singular values of step_matrix, descending
    int support_size;   // |{i : s_out_i > 0}| (prefix; s_out has exact zeros)
};

/// Closed-form global solution s_out_i = [Sigma_i - threshold_scale*w_i]_+
/// reconstructed with the step matrix's own singular vectors, so input
/// and output have a simultaneous ordered SVD. Requires ascending weights.
WeightedSvtResult solve_weighted_svt(const SubproblemInput& input);

/// Frobenius norm of the first-order residual
///   grad f(Y) + beta(X+ - Y) + beta(X+ - X) + lambda U diag(w o xi) V^T
/// evaluated in the shared singular basis, with xi_i = 1 on the output
/// support and xi_i = clamp(2 beta Sigma_i / (lambda w_i), 0, 1) on the
/// zero set. Zero (to rounding) exactly when x was produced by
/// solve_weighted_svt. beta and lambda must satisfy
/// lambda / (2 beta) == input.threshold_scale.
double subproblem_kkt_residual(const WeightedSvtResult& result, const SubproblemInput& input,
                               double beta, double lambda);

/// Per-index values lambda * w_i * xi_i of the certificate above, computed
/// in clamped-product form (finite even for w_i = +inf). Used by the
/// optimality-error diagnostic.
Vector certificate_products(const WeightedSvtResult& result, const Vector& weights, double beta,
                            double lambda);

}  // namespace eirnri
