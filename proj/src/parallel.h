// src/parallel.h

// Copyright 2026  The sotkit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SOTKIT_SRC_PARALLEL_H_
#define SOTKIT_SRC_PARALLEL_H_

#include <exception>
#include <mutex>

#include <omp.h>

namespace sotkit::internal {

inline int ResolveJobs(int jobs) {
  return jobs > 0 ? jobs : omp_get_max_threads();
}

// Exceptions must not escape an OpenMP region.  The first one thrown is kept
// and rethrown after the loop.
class ExceptionSlot {
 public:
  template <typename F>
  void Run(F &&f) {
    try {
      f();
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu_);
      if (!ptr_) ptr_ = std::current_exception();
    }
  }
  void Rethrow() const {
    if (ptr_) std::rethrow_exception(ptr_);
  }

 private:
  std::mutex mu_;
  std::exception_ptr ptr_;
};

}  // namespace sotkit::internal

#endif  // SOTKIT_SRC_PARALLEL_H_
