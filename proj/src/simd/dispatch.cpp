#include "fbm/simd/kernels.h"

#include <atomic>
#include <cstdlib>
#include <string>

#include "fbm/errors.h"

namespace fbm::simd {

namespace {

struct Table {
  Backend backend;
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
};

constexpr Table kScalar{Backend::Scalar, &scalar::dot, &scalar::axpy};
#if defined(__x86_64__) || defined(_M_X64)
constexpr Table kAvx2{Backend::Avx2, &avx2::dot, &avx2::axpy};
#endif
#if defined(__aarch64__)
constexpr Table kNeon{Backend::Neon, &neon::dot, &neon::axpy};
#endif

const Table* table_for(Backend backend) {
  switch (backend) {
  case Backend::Scalar:
    return &kScalar;
  case Backend::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
    return &kAvx2;
#else
    return nullptr;
#endif
  case Backend::Neon:
#if defined(__aarch64__)
    return &kNeon;
#else
    return nullptr;
#endif
  }
  return nullptr;
}

const Table* detect() {
  if (const char* forced = std::getenv("FBM_SIMD")) {
    const std::string name(forced);
    for (Backend b : {Backend::Scalar, Backend::Avx2, Backend::Neon}) {
      if (name == to_string(b) && backend_supported(b)) {
        return table_for(b);
      }
    }
  }
  if (backend_supported(Backend::Avx2)) return table_for(Backend::Avx2);
  if (backend_supported(Backend::Neon)) return table_for(Backend::Neon);
  return &kScalar;
}

std::atomic<const Table*>& current() {
  static std::atomic<const Table*> table{detect()};
  return table;
}

const Table& active() { return *current().load(std::memory_order_acquire); }

} // namespace

std::string_view to_string(Backend backend) {
  switch (backend) {
  case Backend::Scalar:
    return "scalar";
  case Backend::Avx2:
    return "avx2";
  case Backend::Neon:
    return "neon";
  }
  return "unknown";
}

bool backend_supported(Backend backend) {
  switch (backend) {
  case Backend::Scalar:
    return true;
  case Backend::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
  case Backend::Neon:
#if defined(__aarch64__)
    return true;
#else
    return false;
#endif
  }
  return false;
}

Backend active_backend() { return active().backend; }

void set_backend(Backend backend) {
  if (!backend_supported(backend)) {
    throw DomainError("SIMD backend '" + std::string(to_string(backend)) + "' is not available");
  }
  current().store(table_for(backend), std::memory_order_release);
}

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw DomainError("simd::dot: length mismatch");
  }
  return active().dot(x.data(), y.data(), x.size());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) {
    throw DomainError("simd::axpy: length mismatch");
  }
  active().axpy(a, x.data(), y.data(), x.size());
}

} // namespace fbm::simd
