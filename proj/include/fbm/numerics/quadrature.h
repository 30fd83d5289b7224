#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string_view>

namespace fbm::numerics {

enum class Rule {
  JacobiWeighted,      // single Gauss-Jacobi rule, node count doubled until converged
  DoubleExponential,   // tanh-sinh with level halving
  AdaptiveSubdivision, // bisection; Gauss-Jacobi on panels touching a singular end
};

std::string_view to_string(Rule rule);
Rule rule_from_string(std::string_view name);

/// Default tolerances: smooth integrands and integrands singular at both ends.
inline constexpr double kSmoothRelTol = 1e-10;
inline constexpr double kSingularRelTol = 1e-8;

/// Describes ∫ₐᵇ f(x) (x-a)^alpha (b-x)^beta dx.
struct QuadratureSpec {
  Rule rule = Rule::AdaptiveSubdivision;
  int nodes = 16;
  double alpha = 0.0;
  double beta = 0.0;
  double rel_tol = kSmoothRelTol;

  /// Throws DomainError if any invariant is violated.
  void validate() const;

  QuadratureSpec with_exponents(double left, double right) const {
    QuadratureSpec s = *this;
    s.alpha = left;
    s.beta = right;
    return s;
  }
};

/// A quadrature node with both endpoint distances computed without
/// cancellation, so integrands can evaluate (x-a)^p and (b-x)^q accurately even
/// on panels far smaller than |a| or |b|.
struct Abscissa {
  double x;
  double from_left;  // x - a
  double from_right; // b - x
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
};

using WeightedIntegrand = std::function<double(const Abscissa&)>;
using ScalarIntegrand = std::function<double(double)>;

/// Reusable integrator for one QuadratureSpec. Gauss-Jacobi rules for the
/// spec's exponents are computed once at construction; instances are immutable
/// and may be shared between threads.
class WeightedQuadrature {
public:
  explicit WeightedQuadrature(const QuadratureSpec& spec);
  ~WeightedQuadrature();
  WeightedQuadrature(const WeightedQuadrature&);
  WeightedQuadrature& operator=(const WeightedQuadrature&);
  WeightedQuadrature(WeightedQuadrature&&) noexcept;
  WeightedQuadrature& operator=(WeightedQuadrature&&) noexcept;

  const QuadratureSpec& spec() const noexcept { return spec_; }

  /// f is the factor that multiplies the weight (x-a)^alpha (b-x)^beta.
  /// Throws QuadratureError when the tolerance cannot be met.
  QuadratureResult integrate(const WeightedIntegrand& f, double a, double b) const;

private:
  struct Rules;
  QuadratureSpec spec_;
  std::shared_ptr<const Rules> rules_;
};

QuadratureResult integrate_weighted(const WeightedIntegrand& f, double a, double b,
                                    const QuadratureSpec& spec);
QuadratureResult integrate_weighted(const ScalarIntegrand& f, double a, double b,
                                    const QuadratureSpec& spec);

} // namespace fbm::numerics
