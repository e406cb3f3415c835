#pragma once

#include <string>
#include <vector>

#include "tllcd/protocol.hpp"

namespace tllcd {

struct ValidationCheck {
    std::string name;
    double error = 0.0;      // measured deviation
    double tolerance = 0.0;  // pass iff error <= tolerance
    bool pass = false;
};

/// Cross-checks the Gaussian route against the Fock oracle on the slowest mode
/// of `protocol`: state overlaps along the ramp with CD on and off, final
/// occupation, pair correlator and energy, the controlled spectrum at
/// mid-ramp, and the exact transitionless end state.
std::vector<ValidationCheck> oracle_validation(const DriveProtocol& protocol, int n_max = 120,
                                               int record_points = 51);

}  // namespace tllcd
