#include "eirnri/solver.hpp"

#include "eirnri/eps_update.hpp"
#include "eirnri/regularizer.hpp"
#include "eirnri/rng.hpp"
#include "eirnri/subproblem.hpp"
#include "eirnri/svd.hpp"

#include <cassert>
#include <cmath>
#include <limits>

namespace eirnri {

double validate_alpha(double alpha, double beta, double lipschitz, bool convex_loss) {
    if (!(beta > lipschitz)) throw std::invalid_argument("validate_alpha: beta must exceed lipschitz");
    const double cap = convex_loss ? 1.0 : std::sqrt(beta / (beta + 3.0 * lipschitz));
    if (!(alpha < cap)) {
        throw std::invalid_argument(
            "alpha = " + std::to_string(alpha) + " is not below the cap " + std::to_string(cap) +
            (convex_loss ? " (convex smooth-loss branch)" : " (general smooth-loss branch)"));
    }
    return cap;
}

namespace {

double max_prefix(const Vector& v, int from, int to) {
    double m = 0.0;
    for (int i = from; i < to; ++i) m = std::max(m, v(i));
    return m;
}

}  // namespace

SolveOutcome solve(const ProblemInstance& instance, const SolverConfig& config, const Matrix& x0,
                   const SolveOptions& options) {
    validate_config(config, instance);
    const int m = instance.rows();
    const int n = instance.cols();
    if (x0.rows() != m || x0.cols() != n)
        throw std::invalid_argument("solve: x0 has wrong dimensions (expected internal orientation)");
    if (options.x_star && (options.x_star->rows() != m || options.x_star->cols() != n))
        throw std::invalid_argument("solve: x_star has wrong dimensions");

    const double beta = config.beta;
    const double lambda = instance.lambda();
    const double p = instance.p();
    const double lf = instance.lipschitz();
    const double alpha = config.variant == Variant::eirnri ? config.alpha : 0.0;
    const double alpha_cap = validate_alpha(alpha, beta, lf, config.convex_loss);

    // Sufficient-decrease constant of the merit inequality; the convex
    // branch admits alpha beyond the general cap, where only plain
    // non-increase is certified.
    const double decrease_c =
        std::max(0.0, 0.5 * beta * (1.0 - alpha * alpha * (3.0 * lf + beta) / beta));

    SolveOutcome out;
    out.alpha_cap = alpha_cap;

    Matrix x_cur = x0;
    Matrix x_prev = x0;  // X^{-1} = X^0
    Vector sigma = svd_ordered(x_cur).s;
    int support = rank_of(sigma, RankMode::exact_zero);
    Vector eps =
        Vector::Constant(m, config.variant == Variant::pirnn ? config.eps_fixed : config.eps0);

    double h_prev = loss_value(instance, x_cur) + smoothed_penalty(sigma, eps, lambda, p);
    const double h_slack = 1e-9 * std::max(1.0, h_prev);
    double prev_step_sq = 0.0;

    const double nan = std::numeric_limits<double>::quiet_NaN();
    const Vector zero_eps = Vector::Zero(m);
    out.trace.reserve(static_cast<std::size_t>(config.itmax / config.trace_stride + 1));
    int performed = 0;

    for (int k = 0; k < config.itmax; ++k) {
        performed = k + 1;
        const Vector weights = compute_weights(sigma, eps, p);
        for (int i = 0; i + 1 < m; ++i) {
            if (weights(i + 1) < weights(i))
                throw CertifiedFailure("weight order violated at iteration " + std::to_string(k) +
                                           ", index " + std::to_string(i),
                                       std::move(out.trace));
        }

        const Matrix y = x_cur + alpha * (x_cur - x_prev);
        SubproblemInput input{0.5 * (x_cur + y) - loss_gradient(instance, y) / (2.0 * beta),
                              weights, lambda / (2.0 * beta)};
        const WeightedSvtResult svt = solve_weighted_svt(input);
        if (!svt.x.allFinite())
            throw NumericalError("solve: non-finite iterate at iteration " + std::to_string(k));

#ifndef NDEBUG
        {
            // The new iterate globally minimizes the surrogate, so it cannot
            // exceed the previous iterate's value. sigma = 0 entries carry
            // weight +inf; they contribute nothing.
            auto surrogate = [&](const Matrix& x, const Vector& s) {
                double pen = 0.0;
                for (int i = 0; i < m; ++i)
                    if (s(i) > 0.0) pen += weights(i) * s(i);
                return beta * (x - input.step_matrix).squaredNorm() + lambda * pen;
            };
            assert(surrogate(svt.x, svt.svd.s) <=
                   surrogate(x_cur, sigma) + 1e-9 * std::max(1.0, surrogate(x_cur, sigma)));
        }
#endif

        EpsUpdateResult eps_new{eps, false};
        if (config.variant != Variant::pirnn) {
            eps_new = update_eps({svt.svd.s, svt.support_size, support, eps, config.mu});
            if (eps_new.degenerate) out.eps_degenerate_event = true;
        }

        IterationRecord rec;
        rec.k = k + 1;
        rec.alpha_used = alpha;
        rec.rank = svt.support_size;
        rec.f_val = loss_value(instance, svt.x);
        rec.penalty_val = smoothed_penalty(svt.svd.s, zero_eps, lambda, p);
        rec.objective = rec.f_val + rec.penalty_val;
        const Matrix diff = svt.x - x_cur;
        rec.step_fro = diff.norm();
        rec.step_inf = diff.cwiseAbs().maxCoeff();
        rec.merit_h = rec.f_val + 0.5 * beta * rec.step_fro * rec.step_fro +
                      smoothed_penalty(svt.svd.s, eps_new.eps, lambda, p);
        rec.h_margin = h_prev - rec.merit_h - decrease_c * prev_step_sq;
        rec.rel_err = options.x_star ? rel_err(svt.x, *options.x_star) : nan;
        const IterateCertificates certs =
            evaluate_certificates(instance, svt, weights, beta, lambda, p);
        rec.rel_dist = certs.rel_dist;
        rec.opt_error = certs.opt_error;
        rec.kkt_residual = subproblem_kkt_residual(svt, input, beta, lambda);
        rec.eps_max_support = max_prefix(eps_new.eps, 0, svt.support_size);
        rec.eps_max_zeroset = max_prefix(eps_new.eps, svt.support_size, m);

        if (rec.h_margin < -h_slack) {
            out.trace.push_back(rec);
            throw CertifiedFailure("merit decrease violated at iteration " + std::to_string(k) +
                                       " (margin " + std::to_string(rec.h_margin) + ")",
                                   std::move(out.trace));
        }

        bool stop = true;
        if (options.x_star && rec.rel_err <= config.opttol)
            out.stop_reason = StopReason::opttol_relerr;
        else if (!certs.degenerate_rank && rec.rel_dist <= config.opttol)
            out.stop_reason = StopReason::opttol_reldist;
        else if (rec.step_inf <= config.klopt)
            out.stop_reason = StopReason::klopt_step;
        else
            stop = false;

        const bool last = stop || k + 1 == config.itmax;
        if (last || (k + 1) % config.trace_stride == 0) out.trace.push_back(rec);

        x_prev = std::move(x_cur);
        x_cur = svt.x;
        sigma = svt.svd.s;
        support = svt.support_size;
        eps = std::move(eps_new.eps);
        h_prev = rec.merit_h;
        prev_step_sq = rec.step_fro * rec.step_fro;

        if (options.observer) {
            options.observer(IterateState{x_cur, x_prev, y, sigma, eps, weights, support, k + 1});
        }
        if (stop) break;
        out.stop_reason = StopReason::itmax;
    }

    out.x_final = std::move(x_cur);
    out.sigma_final = std::move(sigma);
    out.eps_final = std::move(eps);
    out.rank_final = support;
    out.iterations = performed;
    return out;
}

SolveOutcome solve(const ProblemInstance& instance, const SolverConfig& config,
                   const SolveOptions& options) {
    Rng rng(config.rng_seed);
    Matrix x0(instance.rows(), instance.cols());
    for (int j = 0; j < x0.cols(); ++j)
        for (int i = 0; i < x0.rows(); ++i) x0(i, j) = rng.normal();
    return solve(instance, config, x0, options);
}

}  // namespace eirnri
