#pragma once

#include "eirnri/model.hpp"
#include "eirnri/types.hpp"

namespace eirnri {

/// lambda * sum_i (sigma_i + eps_i)^p.
/// eps entries must be nonnegative; exact zeros are accepted as the
/// underflow limit of the geometric decay (sigma + eps stays >= 0).
double smoothed_penalty(const Vector& sigma, const Vector& eps, double lambda, double p);

/// w_i = p * (sigma_i + eps_i)^{p-1}. Non-decreasing whenever sigma + eps
/// is non-increasing. An index with sigma_i + eps_i == 0 gets w_i = +inf,
/// the limiting weight that keeps a dead direction thresholded out; a
/// finite base producing w_i > 1e300 means the configuration ran the
/// perturbation into the ground and aborts.
Vector compute_weights(const Vector& sigma, const Vector& eps, double p);

/// Auxiliary merit H(x, x_prev, eps) = f(x) + beta/2 ||x - x_prev||_F^2
/// + lambda * sum (sigma_i + eps_i)^p; non-increasing along iterates.
double merit_h(const ProblemInstance& instance, const Matrix& x, const Matrix& x_prev,
               const Vector& sigma, const Vector& eps, double beta);

}  // namespace eirnri
