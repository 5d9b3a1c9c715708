#pragma once

#include "fdte/kernels.hpp"

namespace fdte::kernels {

extern const Ops scalar_ops;
extern const Ops simd_ops;

}  // namespace fdte::kernels
