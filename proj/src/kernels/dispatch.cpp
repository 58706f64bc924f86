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

#include <atomic>
#include <cstdlib>
#include <string_view>

#include "ckksid/kernels/ntt_kernels.hpp"
#include "kernels/internal.hpp"

namespace ckksid::kernels {

namespace {

std::atomic<const KernelSet*> g_override{nullptr};

bool ForceScalar() {
  const char* env = std::getenv("CKKSID_FORCE_SCALAR");
  return env != nullptr && std::string_view(env) != "" &&
         std::string_view(env) != "0";
}

}  // namespace

const KernelSet* avx2_kernels() {
#if defined(CKKSID_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &avx2_kernel_set() : nullptr;
#else
  return nullptr;
#endif
}

const KernelSet& active_kernels() {
  if (const KernelSet* ks = g_override.load(std::memory_order_acquire)) return *ks;
  static const KernelSet* detected = [] {
    const KernelSet* avx2 = avx2_kernels();
    return (avx2 != nullptr && !ForceScalar()) ? avx2 : &scalar_kernels();
  }();
  return *detected;
}

void set_active_kernels(const KernelSet* ks) {
  g_override.store(ks, std::memory_order_release);
}

}  // namespace ckksid::kernels
