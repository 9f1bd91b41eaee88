#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace odmts {

/// Caps worker parallelism for every OpenMP kernel. 0 restores the runtime default.
void set_thread_count(int threads);
int thread_count();

namespace detail {

/// Collects per-item exceptions inside a parallel loop and rethrows the one
/// with the lowest index afterwards, so failures do not depend on scheduling.
class ErrorSlot {
 public:
  explicit ErrorSlot(std::size_t n) : errors_(n) {}
  void capture(std::size_t i) { errors_[i] = std::current_exception(); }
  void rethrow_first() const {
    for (const auto& e : errors_) {
      if (e) std::rethrow_exception(e);
    }
  }

 private:
  std::vector<std::exception_ptr> errors_;
};

}  // namespace detail

}  // namespace odmts
