#pragma once

#include "eirnri/types.hpp"

#include <cstdint>

namespace eirnri {

/// Matrix-completion problem data: observed entries P_Omega(X*) with the
/// sampling set, Schatten exponent p in (0,1) and regularization weight
/// lambda. The convention m <= n is normalized at construction by
/// transposing; use normalize()/denormalize() to move user matrices in
/// and out of the internal orientation.
///
/// The smooth loss is f(X) = 1/2 * sum_Omega (M_ij - X_ij)^2, whose
/// gradient is 1-Lipschitz; the solver reads only loss_value,
/// loss_gradient and lipschitz(), so another smooth loss could be
/// swapped in behind the same three entry points.
class ProblemInstance {
  public:
    ProblemInstance(Matrix observed, Mask mask, double lambda, double p);

    int rows() const { return static_cast<int>(observed_.rows()); }  // m (<= n)
    int cols() const { return static_cast<int>(observed_.cols()); }  // n
    double lambda() const { return lambda_; }
    double p() const { return p_; }
    double lipschitz() const { return 1.0; }
    bool transposed() const { return transposed_; }

    const Matrix& observed() const { return observed_; }
    const Mask& mask() const { return mask_; }
    double observed_norm() const { return observed_norm_; }  // ||M||_F

    /// Map a matrix given in the caller's orientation to the internal one.
    Matrix normalize(const Matrix& a) const;
    /// Map an internal-orientation matrix back to the caller's.
    Matrix denormalize(const Matrix& x) const;

  private:
    Matrix observed_;
    Mask mask_;
    double lambda_;
    double p_;
    double observed_norm_;
    bool transposed_ = false;
};

/// 1/2 * sum_{(i,j) in Omega} (M_ij - X_ij)^2.
double loss_value(const ProblemInstance& instance, const Matrix& x);

/// Gradient of loss_value: (X - M) on Omega, zero elsewhere.
Matrix loss_gradient(const ProblemInstance& instance, const Matrix& x);

/// F(X) = loss + lambda * sum sigma_i^p. The caller supplies sigma(x) to
/// avoid a second factorization.
double objective_value(const ProblemInstance& instance, const Matrix& x, const Vector& sigma);

struct SolverConfig {
    double beta = 1.1;           // proximal coefficient, must exceed lipschitz
    double mu = 0.1;             // perturbation shrink factor in (0,1)
    double alpha = 0.7;          // constant extrapolation parameter
    double eps0 = 1.0;           // initial perturbation, all indices
    double eps_fixed = 1e-3;     // fixed perturbation for the pirnn variant
    double opttol = 1e-5;        // stopping tolerance on RelErr / RelDist
    double klopt = 1e-7;         // stopping tolerance on ||X^{k+1}-X^k||_inf
    int itmax = 1000;
    Variant variant = Variant::eirnri;
    std::uint64_t rng_seed = 0;  // seeds the random initial point
    bool convex_loss = true;     // matrix completion: convex quadratic
    int trace_stride = 1;        // record every Nth iteration (plus the last)
};

/// Checks config invariants against the loss's Lipschitz constant; throws
/// std::invalid_argument naming the violated condition.
void validate_config(const SolverConfig& config, double lipschitz);
void validate_config(const SolverConfig& config, const ProblemInstance& instance);

}  // namespace eirnri
