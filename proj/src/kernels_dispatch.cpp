// Copyright 2026 The airmhe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "airmhe/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>

namespace airmhe::kernels {
namespace {

std::atomic<const KernelTable*> g_active{nullptr};

const KernelTable* resolve() {
  const char* force = std::getenv("AIRMHE_FORCE_SCALAR");
  if (force != nullptr && force[0] != '\0' && force[0] != '0')
    return &scalar_table();
  if (const KernelTable* t = avx2_table()) return t;
  return &scalar_table();
}

}  // namespace

const KernelTable& active() {
  const KernelTable* t = g_active.load(std::memory_order_acquire);
  if (t == nullptr) {
    t = resolve();
    g_active.store(t, std::memory_order_release);
  }
  return *t;
}

Backend backend() {
  return &active() == &scalar_table() ? Backend::kScalar : Backend::kAvx2;
}

void set_backend(Backend b) {
  if (b == Backend::kScalar) {
    g_active.store(&scalar_table(), std::memory_order_release);
    return;
  }
  const KernelTable* t = avx2_table();
  if (t == nullptr)
    throw std::runtime_error("avx2 kernel backend unavailable on this cpu");
  g_active.store(t, std::memory_order_release);
}

}  // namespace airmhe::kernels
