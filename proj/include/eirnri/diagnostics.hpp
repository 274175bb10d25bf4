#pragma once

#include "eirnri/model.hpp"
#include "eirnri/subproblem.hpp"
#include "eirnri/svd.hpp"
#include "eirnri/types.hpp"

#include <iosfwd>
#include <vector>

namespace eirnri {

/// Per-iteration metrics. rel_err is NaN when no ground truth is known.
/// kkt_residual, opt_error and h_margin back the certificate checks and
/// are not part of the CSV schema.
struct IterationRecord {
    int k = 0;
    double f_val = 0.0;
    double penalty_val = 0.0;
    double objective = 0.0;
    double merit_h = 0.0;
    double rel_err = 0.0;
    double rel_dist = 0.0;
    int rank = 0;
    double step_fro = 0.0;
    double step_inf = 0.0;
    double eps_max_support = 0.0;
    double eps_max_zeroset = 0.0;
    double alpha_used = 0.0;
    double kkt_residual = 0.0;
    double opt_error = 0.0;
    double h_margin = 0.0;  // H^k - H^{k+1} - C ||X^k - X^{k-1}||_F^2
};

/// ||x - x_star||_F / ||x_star||_F.
double rel_err(const Matrix& x, const Matrix& x_star);

/// Normalized first-order distance
///   ||U_r^T grad f(x) V_r + lambda p diag(sigma_r^{p-1})||_F / ||M||_F
/// with r the exact rank of x. Rank 0 returns 0 and raises the
/// degenerate flag when given.
double rel_dist(const ProblemInstance& instance, const Matrix& x, const ThinSvd& svd_x,
                double lambda, double p, bool* degenerate_rank = nullptr);

/// ||E^{k+1}||_F with
///   E^{k+1} = grad f(X^{k+1}) + lambda U diag(wbar o xi) V^T,
/// wbar_i = p sigma_i^{p-1} on the new support and the previous weight
/// w_i^k on the zero set; xi from the subproblem certificate.
double optimality_error(const ProblemInstance& instance, const WeightedSvtResult& svt,
                        const Vector& weights_prev, double beta, double lambda, double p);

/// rel_dist + optimality_error of a fresh subproblem output in one pass
/// (shares the gradient and the G*V product).
struct IterateCertificates {
    double rel_dist = 0.0;
    bool degenerate_rank = false;
    double opt_error = 0.0;
};
IterateCertificates evaluate_certificates(const ProblemInstance& instance,
                                          const WeightedSvtResult& svt, const Vector& weights_prev,
                                          double beta, double lambda, double p);

/// Peak signal-to-noise ratio between two images given as per-channel
/// matrices in [0, 255]; +inf for identical images (flag set if given).
double psnr(const std::vector<Matrix>& restored, const std::vector<Matrix>& reference,
            bool* identical = nullptr);

/// Writes the trace CSV: header
///   k,f,penalty,objective,H,rel_err,rel_dist,rank,step_fro,step_inf,eps_sup_max,eps_zero_max,alpha
/// one row per record, %.17g fields, rel_err empty when NaN.
void write_trace_csv(std::ostream& os, const std::vector<IterationRecord>& trace);
void write_trace_csv(const std::string& path, const std::vector<IterationRecord>& trace);

}  // namespace eirnri
