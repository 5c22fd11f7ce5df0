#pragma once

#include <cstddef>

// Heap allocation audit for the memory-contract tests and the bench storage
// column. While a scope is active, every malloc on the calling thread is
// counted (operator new and Eigen buffers both route through malloc).
// Link the symtuck_audit library into any binary that uses this.
namespace symtuck::audit {

struct Stats {
  std::size_t count = 0;        // allocations observed
  std::size_t max_bytes = 0;    // largest single allocation
  std::size_t total_bytes = 0;  // sum over all allocations
};

void begin();
Stats end();
bool active();

class Scope {
 public:
  Scope() { begin(); }
  ~Scope() {
    if (!stopped_) end();
  }
  Stats stop() {
    stopped_ = true;
    return end();
  }
  Scope(const Scope&) = delete;
  Scope& operator=(const Scope&) = delete;

 private:
  bool stopped_ = false;
};

}  // namespace symtuck::audit
