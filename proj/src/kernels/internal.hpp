/*
 * Copyright 2026 The ckksid Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CKKSID_SRC_KERNELS_INTERNAL_HPP_
#define CKKSID_SRC_KERNELS_INTERNAL_HPP_

#include "ckksid/kernels/ntt_kernels.hpp"

namespace ckksid::kernels {

// Defined in ntt_avx2.cpp, which is compiled with -mavx2. Callers must check
// CPU support first.
const KernelSet& avx2_kernel_set();

}  // namespace ckksid::kernels

#endif  // CKKSID_SRC_KERNELS_INTERNAL_HPP_
