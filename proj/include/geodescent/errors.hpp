#pragma once

#include <stdexcept>

namespace geodescent {

/// A computation left its valid numeric range by more than the clamping
/// guard, or an iterative kernel failed to converge.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace geodescent
