#include "eirnri/regularizer.hpp"

#include <cmath>

namespace eirnri {

double smoothed_penalty(const Vector& sigma, const Vector& eps, double lambda, double p) {
    if (sigma.size() != eps.size())
        throw std::invalid_argument("smoothed_penalty: sigma and eps length mismatch");
    double acc = 0.0;
    for (int i = 0; i < sigma.size(); ++i) {
        const double base = sigma(i) + eps(i);
        if (base < 0.0) throw InvariantViolation("smoothed_penalty: negative sigma + eps entry");
        acc += std::pow(base, p);
    }
    return lambda * acc;
}

Vector compute_weights(const Vector& sigma, const Vector& eps, double p) {
    if (sigma.size() != eps.size())
        throw std::invalid_argument("compute_weights: sigma and eps length mismatch");
    Vector w(sigma.size());
    for (int i = 0; i < sigma.size(); ++i) {
        const double base = sigma(i) + eps(i);
        if (base < 0.0) throw InvariantViolation("compute_weights: negative sigma + eps entry");
        w(i) = p * std::pow(base, p - 1.0);
        if (base > 0.0 && !(w(i) <= 1e300))
            throw NumericalError("compute_weights: weight overflow at index " + std::to_string(i) +
                                 " (sigma+eps=" + std::to_string(base) + ", p=" + std::to_string(p) + ")");
    }
    return w;
}

double merit_h(const ProblemInstance& instance, const Matrix& x, const Matrix& x_prev,
               const Vector& sigma, const Vector& eps, double beta) {
    if (x.rows() != x_prev.rows() || x.cols() != x_prev.cols())
        throw std::invalid_argument("merit_h: x and x_prev shape mismatch");
    const double prox = 0.5 * beta * (x - x_prev).squaredNorm();
    return loss_value(instance, x) + prox + smoothed_penalty(sigma, eps, instance.lambda(), instance.p());
}

}  // namespace eirnri
