#pragma once

#include <limits>

namespace budgetpath {

/// Sentinel for unreachable states. IEEE infinity is totally ordered against
/// finite values and absorbs addition, so min/+ never overflow into it.
inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool is_finite(double v) { return v < kInf; }

}  // namespace budgetpath
