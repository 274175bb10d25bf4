#pragma once

#include "eirnri/diagnostics.hpp"
#include "eirnri/model.hpp"
#include "eirnri/types.hpp"

#include <functional>
#include <vector>

namespace eirnri {

/// Live view of the solver state handed to an observer after each
/// iteration; references are only valid during the callback.
struct IterateState {
    const Matrix& x_cur;
    const Matrix& x_prev;
    const Matrix& y;
    const Vector& sigma;    // sigma(x_cur), exact zeros off support
    const Vector& eps;      // eps^{k} matching x_cur
    const Vector& weights;  // weights used to produce x_cur
    int support_size;
    int k;
};

using IterationObserver = std::function<void(const IterateState&)>;

struct SolveOutcome {
    Matrix x_final;        // internal orientation (instance.denormalize to undo)
    Vector sigma_final;
    Vector eps_final;
    int rank_final = 0;
    int iterations = 0;
    StopReason stop_reason = StopReason::itmax;
    double alpha_cap = 0.0;
    bool eps_degenerate_event = false;  // a zero iterate skipped the eps update
    std::vector<IterationRecord> trace;
};

/// Raised when a run breaks a certified invariant (ascending weights,
/// merit non-increase beyond slack); carries everything recorded so far.
class CertifiedFailure : public std::runtime_error {
  public:
    CertifiedFailure(const std::string& what, std::vector<IterationRecord> trace_so_far)
        : std::runtime_error(what), trace(std::move(trace_so_far)) {}
    std::vector<IterationRecord> trace;
};

/// Extrapolation cap from the step-size rule: any value below 1 when the
/// loss is convex and smooth, otherwise sqrt(beta / (beta + 3 L_f)).
/// Throws std::invalid_argument when alpha >= cap, naming the branch.
double validate_alpha(double alpha, double beta, double lipschitz, bool convex_loss);

struct SolveOptions {
    const Matrix* x_star = nullptr;  // enables the RelErr metric and stop
    IterationObserver observer;
};

/// Runs the reweighted nuclear-norm iteration from x0 (internal
/// orientation) until a tolerance trips or itmax is reached.
SolveOutcome solve(const ProblemInstance& instance, const SolverConfig& config, const Matrix& x0,
                   const SolveOptions& options = {});

/// Same, starting from a seeded random Gaussian matrix (config.rng_seed).
SolveOutcome solve(const ProblemInstance& instance, const SolverConfig& config,
                   const SolveOptions& options = {});

}  // namespace eirnri
