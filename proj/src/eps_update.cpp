#include "eirnri/eps_update.hpp"

#include <algorithm>
#include <limits>

namespace eirnri {

namespace {

// Keep-or-trim rule shared by all three cases: indices in [from, to) keep
// eps when tau1 >= tau2, otherwise take min(eps, mu * tau1).
void trim_tail(Vector& eps, const Vector& eps_old, int from, int to, double tau1, double tau2,
               double mu) {
    if (tau1 >= tau2) return;
    const double cap = mu * tau1;
    for (int i = from; i < to; ++i) eps(i) = std::min(eps_old(i), cap);
}

}  // namespace

EpsUpdateResult update_eps(const EpsUpdateInput& input) {
    const int m = static_cast<int>(input.eps_old.size());
    const int r_new = input.support_new;
    const int r_old = input.support_old;
    if (input.sigma_new.size() != m)
        throw std::invalid_argument("update_eps: sigma_new and eps_old length mismatch");
    if (r_new < 0 || r_new > m || r_old < 0 || r_old > m)
        throw InvariantViolation("update_eps: support size out of range");
    if (!(input.mu > 0.0 && input.mu < 1.0)) throw std::invalid_argument("update_eps: mu not in (0,1)");

    EpsUpdateResult out{input.eps_old, false};
    Vector& eps = out.eps;
    const Vector& old = input.eps_old;
    const double mu = input.mu;

    if (r_new == 0) {
        // X^{k+1} = 0: no positive singular value anchors tau1, so nothing
        // shrinks. Every index is now zero-set and must be non-increasing
        // for the next weights to ascend, so trim by the running minimum.
        // Callers log this as a degenerate event.
        for (int i = 1; i < m; ++i) eps(i) = std::min(eps(i), eps(i - 1));
        out.degenerate = true;
        return out;
    }

    for (int i = 0; i < std::min(r_new, r_old); ++i) eps(i) = mu * old(i);

    if (r_new < r_old) {
        // Support shrank. Thresholds: tau1 closes the new support block,
        // tau2 heads the dropped block, tau3 closes the old support.
        const double tau1 = input.sigma_new(r_new - 1) + eps(r_new - 1);
        const double tau2 = old(r_new);
        trim_tail(eps, old, r_new, r_old, tau1, tau2, mu);
        const double tau3 = eps(r_old - 1);
        for (int i = r_old; i < m; ++i) eps(i) = std::min(old(i), tau3);
    } else if (r_old < r_new) {
        // Support grew. New support entries continue the descent from the
        // old support's last value; r_old = 0 leaves them unconstrained.
        const double tau3 = r_old > 0 ? old(r_old - 1) : std::numeric_limits<double>::infinity();
        for (int i = r_old; i < r_new; ++i) eps(i) = mu * std::min(old(i), tau3);
        if (r_new < m) {
            const double tau1 = input.sigma_new(r_new - 1) + eps(r_new - 1);
            const double tau2 = old(r_new);
            trim_tail(eps, old, r_new, m, tau1, tau2, mu);
        }
    } else if (r_new < m) {
        // Support unchanged; the zero set keeps its values unless the
        // shrunken support edge dips below them.
        const double tau1 = input.sigma_new(r_new - 1) + eps(r_new - 1);
        const double tau2 = old(r_new);
        trim_tail(eps, old, r_new, m, tau1, tau2, mu);
    }
    return out;
}

}  // namespace eirnri
