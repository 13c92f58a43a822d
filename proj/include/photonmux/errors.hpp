#pragma once

#include <stdexcept>
#include <string>

namespace photonmux {

// A caller-supplied argument violates an operation's precondition.
struct InvalidParameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A conditional quantity is undefined because the conditioning event has
// probability zero (e.g. asking for a posterior when the detector cannot fire).
struct DegenerateCondition : std::domain_error {
    using std::domain_error::domain_error;
};

inline void require_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw InvalidParameter(std::string(name) + " must lie in [0, 1]");
    }
}

}  // namespace photonmux
