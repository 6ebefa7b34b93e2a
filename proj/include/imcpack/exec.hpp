#pragma once

namespace imcpack {

// Selects between the serial reference kernels and their OpenMP versions.
// Both produce identical results; the parallel path reduces in enumeration
// order.
enum class ExecPolicy { serial, parallel };

}  // namespace imcpack
