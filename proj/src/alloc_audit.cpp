#include "symtuck/alloc_audit.hpp"

#include <dlfcn.h>

#include <cstdlib>
#include <cstring>

// malloc-level interposition. Defining malloc/free here makes the dynamic
// linker resolve every allocation in the process through these wrappers,
// including Eigen's aligned buffers which bypass operator new. The real
// functions are looked up lazily with dlsym(RTLD_NEXT); dlsym itself may
// call calloc during the lookup, which is served from a small static
// bootstrap arena.

namespace {

using malloc_fn = void* (*)(std::size_t);
using calloc_fn = void* (*)(std::size_t, std::size_t);
using realloc_fn = void* (*)(void*, std::size_t);
using free_fn = void (*)(void*);
using memalign_fn = int (*)(void**, std::size_t, std::size_t);

malloc_fn g_real_malloc = nullptr;
calloc_fn g_real_calloc = nullptr;
realloc_fn g_real_realloc = nullptr;
free_fn g_real_free = nullptr;
memalign_fn g_real_posix_memalign = nullptr;

char g_bootstrap[16384];
std::size_t g_bootstrap_used = 0;
bool g_resolving = false;

thread_local bool t_active = false;
thread_local symtuck::audit::Stats t_stats;

void* bootstrap_alloc(std::size_t size) {
  std::size_t aligned = (size + 15) & ~static_cast<std::size_t>(15);
  if (g_bootstrap_used + aligned > sizeof(g_bootstrap)) std::abort();
  void* p = g_bootstrap + g_bootstrap_used;
  g_bootstrap_used += aligned;
  return p;
}

bool from_bootstrap(void* p) {
  return p >= static_cast<void*>(g_bootstrap) && p < static_cast<void*>(g_bootstrap + sizeof(g_bootstrap));
}

void resolve() {
  g_resolving = true;
  g_real_malloc = reinterpret_cast<malloc_fn>(dlsym(RTLD_NEXT, "malloc"));
  g_real_calloc = reinterpret_cast<calloc_fn>(dlsym(RTLD_NEXT, "calloc"));
  g_real_realloc = reinterpret_cast<realloc_fn>(dlsym(RTLD_NEXT, "realloc"));
  g_real_free = reinterpret_cast<free_fn>(dlsym(RTLD_NEXT, "free"));
  g_real_posix_memalign = reinterpret_cast<memalign_fn>(dlsym(RTLD_NEXT, "posix_memalign"));
  g_resolving = false;
}

inline void record(std::size_t size) {
  if (!t_active) return;
  ++t_stats.count;
  t_stats.total_bytes += size;
  if (size > t_stats.max_bytes) t_stats.max_bytes = size;
}

}  // namespace

extern "C" {

void* malloc(std::size_t size) {
  if (g_real_malloc == nullptr) {
    if (g_resolving) return bootstrap_alloc(size);
    resolve();
  }
  record(size);
  return g_real_malloc(size);
}

void* calloc(std::size_t n, std::size_t size) {
  if (g_real_calloc == nullptr) {
    if (g_resolving) {
      void* p = bootstrap_alloc(n * size);
      std::memset(p, 0, n * size);
      return p;
    }
    resolve();
  }
  record(n * size);
  return g_real_calloc(n, size);
}

void* realloc(void* ptr, std::size_t size) {
  if (g_real_realloc == nullptr) {
    if (g_resolving) return bootstrap_alloc(size);
    resolve();
  }
  record(size);
  if (from_bootstrap(ptr)) {
    void* p = g_real_malloc(size);
    return p;
  }
  return g_real_realloc(ptr, size);
}

void free(void* ptr) {
  if (ptr == nullptr || from_bootstrap(ptr)) return;
  if (g_real_free == nullptr) {
    if (g_resolving) return;
    resolve();
  }
  g_real_free(ptr);
}

int posix_memalign(void** out, std::size_t alignment, std::size_t size) {
  if (g_real_posix_memalign == nullptr) {
    if (g_resolving) {
      *out = bootstrap_alloc(size + alignment);
      return 0;
    }
    resolve();
  }
  record(size);
  return g_real_posix_memalign(out, alignment, size);
}

}  // extern "C"

namespace symtuck::audit {

void begin() {
  t_stats = Stats{};
  t_active = true;
}

Stats end() {
  t_active = false;
  return t_stats;
}

bool active() { return t_active; }

}  // namespace symtuck::audit
