#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace eirnri {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// One observed entry of the sampling set Omega.
struct MaskEntry {
    std::int32_t row;
    std::int32_t col;
};

using Mask = std::vector<MaskEntry>;

enum class Variant { eirnri, irnri, pirnn };

enum class StopReason { opttol_relerr, opttol_reldist, klopt_step, itmax };

std::string to_string(Variant v);
std::string to_string(StopReason r);
Variant variant_from_string(const std::string& name);

/// Thrown when an iterate breaks a certified invariant (weight order,
/// merit decrease). Carries the message; the solver attaches the trace
/// collected so far to its own failure type.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class InvariantViolation : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace eirnri
