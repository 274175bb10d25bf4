#include "eirnri/model.hpp"

#include <cmath>
#include <vector>

namespace eirnri {

ProblemInstance::ProblemInstance(Matrix observed, Mask mask, double lambda, double p)
    : observed_(std::move(observed)), mask_(std::move(mask)), lambda_(lambda), p_(p) {
    if (!(p_ > 0.0 && p_ < 1.0)) throw std::invalid_argument("ProblemInstance: p must lie in (0,1)");
    if (!(lambda_ > 0.0)) throw std::invalid_argument("ProblemInstance: lambda must be positive");
    if (observed_.size() == 0) throw std::invalid_argument("ProblemInstance: empty observed matrix");

    if (observed_.rows() > observed_.cols()) {
        observed_ = observed_.transpose().eval();
        for (auto& e : mask_) std::swap(e.row, e.col);
        transposed_ = true;
    }

    std::vector<char> on_mask(static_cast<std::size_t>(observed_.size()), 0);
    for (const auto& e : mask_) {
        if (e.row < 0 || e.row >= rows() || e.col < 0 || e.col >= cols())
            throw std::invalid_argument("ProblemInstance: mask entry out of bounds");
        on_mask[static_cast<std::size_t>(e.col) * rows() + e.row] = 1;
    }
    for (int j = 0; j < cols(); ++j)
        for (int i = 0; i < rows(); ++i)
            if (observed_(i, j) != 0.0 && !on_mask[static_cast<std::size_t>(j) * rows() + i])
                throw std::invalid_argument("ProblemInstance: observed has a nonzero off the mask");

    observed_norm_ = observed_.norm();
}

Matrix ProblemInstance::normalize(const Matrix& a) const {
    if (!transposed_) {
        if (a.rows() != rows() || a.cols() != cols())
            throw std::invalid_argument("normalize: dimension mismatch");
        return a;
    }
    if (a.rows() != cols() || a.cols() != rows())
        throw std::invalid_argument("normalize: dimension mismatch");
    return a.transpose();
}

Matrix ProblemInstance::denormalize(const Matrix& x) const {
    if (x.rows() != rows() || x.cols() != cols())
        throw std::invalid_argument("denormalize: dimension mismatch");
    return transposed_ ? x.transpose() : x;
}

namespace {

void check_dims(const ProblemInstance& instance, const Matrix& x, const char* who) {
    if (x.rows() != instance.rows() || x.cols() != instance.cols())
        throw std::invalid_argument(std::string(who) + ": x has wrong dimensions");
}

}  // namespace

double loss_value(const ProblemInstance& instance, const Matrix& x) {
    check_dims(instance, x, "loss_value");
    const Matrix& m = instance.observed();
    double acc = 0.0;
    for (const auto& e : instance.mask()) {
        const double d = m(e.row, e.col) - x(e.row, e.col);
        acc += d * d;
    }
    return 0.5 * acc;
}

Matrix loss_gradient(const ProblemInstance& instance, const Matrix& x) {
    check_dims(instance, x, "loss_gradient");
    const Matrix& m = instance.observed();
    Matrix g = Matrix::Zero(x.rows(), x.cols());
    for (const auto& e : instance.mask()) g(e.row, e.col) = x(e.row, e.col) - m(e.row, e.col);
    return g;
}

double objective_value(const ProblemInstance& instance, const Matrix& x, const Vector& sigma) {
    double penalty = 0.0;
    for (int i = 0; i < sigma.size(); ++i) penalty += std::pow(sigma(i), instance.p());
    return loss_value(instance, x) + instance.lambda() * penalty;
}

void validate_config(const SolverConfig& config, const ProblemInstance& instance) {
    validate_config(config, instance.lipschitz());
}

void validate_config(const SolverConfig& config, double lipschitz) {
    if (!(config.beta > lipschitz))
        throw std::invalid_argument("SolverConfig: beta must exceed the Lipschitz constant " +
                                    std::to_string(lipschitz));
    if (!(config.mu > 0.0 && config.mu < 1.0))
        throw std::invalid_argument("SolverConfig: mu must lie in (0,1)");
    if (!(config.alpha >= 0.0)) throw std::invalid_argument("SolverConfig: alpha must be nonnegative");
    if (!(config.eps0 > 0.0)) throw std::invalid_argument("SolverConfig: eps0 must be positive");
    if (config.variant == Variant::pirnn && !(config.eps_fixed > 0.0))
        throw std::invalid_argument("SolverConfig: eps_fixed must be positive for PIRNN");
    if (!(config.opttol > 0.0)) throw std::invalid_argument("SolverConfig: opttol must be positive");
    if (!(config.klopt > 0.0)) throw std::invalid_argument("SolverConfig: klopt must be positive");
    if (config.itmax < 1) throw std::invalid_argument("SolverConfig: itmax must be at least 1");
    if (config.trace_stride < 1)
        throw std::invalid_argument("SolverConfig: trace_stride must be at least 1");
}

std::string to_string(Variant v) {
    switch (v) {
        case Variant::eirnri: return "EIRNRI";
        case Variant::irnri: return "IRNRI";
        case Variant::pirnn: return "PIRNN";
    }
    return "?";
}

std::string to_string(StopReason r) {
    switch (r) {
        case StopReason::opttol_relerr: return "opttol_relerr";
        case StopReason::opttol_reldist: return "opttol_reldist";
        case StopReason::klopt_step: return "klopt_step";
        case StopReason::itmax: return "itmax";
    }
    return "?";
}

Variant variant_from_string(const std::string& name) {
    if (name == "EIRNRI" || name == "eirnri") return Variant::eirnri;
    if (name == "IRNRI" || name == "irnri") return Variant::irnri;
    if (name == "PIRNN" || name == "pirnn") return Variant::pirnn;
    throw std::invalid_argument("unknown variant '" + name + "' (expected EIRNRI, IRNRI or PIRNN)");
}

}  // namespace eirnri
