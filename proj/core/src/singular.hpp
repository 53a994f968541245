#pragma once

namespace ptdoublet::detail {

// |sinh r| (or a comparable quantity) below this is treated as a zero.
inline constexpr double kSingularTolerance = 1e-12;

}  // namespace ptdoublet::detail
