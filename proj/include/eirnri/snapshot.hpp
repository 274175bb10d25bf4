#pragma once

#include "eirnri/model.hpp"
#include "eirnri/types.hpp"

#include <optional>
#include <string>

namespace eirnri {

/// Self-describing JSON container for a problem instance; doubles are
/// serialized with shortest round-trip representation, so save/load is
/// value-exact.
struct InstanceSnapshot {
    int m = 0;
    int n = 0;
    double lambda = 0.0;
    double p = 0.5;
    Mask mask;
    std::vector<double> observed_values;  // aligned with mask
    std::optional<Matrix> x_star;         // dense, row-major

    static InstanceSnapshot from_instance(const ProblemInstance& instance,
                                          const Matrix* x_star = nullptr);
    ProblemInstance to_instance() const;
};

void save_snapshot(const std::string& path, const InstanceSnapshot& snap);
InstanceSnapshot load_snapshot(const std::string& path);

}  // namespace eirnri
