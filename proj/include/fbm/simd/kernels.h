#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Inner loops of the dense linear algebra (Cholesky, triangular solves,
// Gaussian sampling). Each kernel has a scalar reference implementation and
// vector variants; the widest one the CPU supports is picked on first use.
// FBM_SIMD=scalar|avx2|neon in the environment overrides the choice.

namespace fbm::simd {

enum class Backend { Scalar, Avx2, Neon };

std::string_view to_string(Backend backend);
bool backend_supported(Backend backend);
Backend active_backend();
/// Throws DomainError if the backend is not supported on this CPU/build.
void set_backend(Backend backend);

double dot(std::span<const double> x, std::span<const double> y);
/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);

namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
} // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
} // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
} // namespace neon
#endif

} // namespace fbm::simd
