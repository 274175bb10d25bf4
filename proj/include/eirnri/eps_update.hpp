#pragma once

#include "eirnri/types.hpp"

namespace eirnri {

/// Inputs for one adaptive perturbation update. Supports are prefixes of
/// the sorted singular-value vector, passed as their sizes.
struct EpsUpdateInput {
    Vector sigma_new;  // sigma(X^{k+1}), non-increasing, exact zeros off support
    int support_new;   // |I(X^{k+1})|
    int support_old;   // |I(X^k)|
    Vector eps_old;    // eps^k
    double mu;         // shrink factor in (0,1)
};

struct EpsUpdateResult {
    Vector eps;
    bool degenerate;  // X^{k+1} = 0: no support to anchor the thresholds;
                      // eps is only trimmed to its running minimum
};

/// Three-case perturbation update. Shrinks eps by mu on the new support,
/// trims the old-support remainder and the zero set so that
/// sigma_new + eps stays non-increasing (hence the next weights ascend),
/// and leaves zero-set entries untouched once the support settles.
/// Every output entry is <= its input and >= 0; entries may underflow to
/// exact 0 after ~1e3 shrinks, which downstream code treats as the limit.
EpsUpdateResult update_eps(const EpsUpdateInput& input);

}  // namespace eirnri
