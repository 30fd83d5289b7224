#include "fbm/numerics/quadrature.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "fbm/errors.h"
#include "fbm/numerics/gauss_rules.h"

namespace fbm::numerics {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr std::size_t kMaxPanels = 4000;
constexpr int kMaxJacobiNodes = 256;
constexpr int kMaxTanhSinhLevel = 12;

// QUADPACK qk21 abscissae and weights on [-1,1]; xgk[1], xgk[3], ... are the
// 10-point Gauss nodes.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980245777, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

void check_finite_result(double v, const char* where) {
  if (!std::isfinite(v)) {
    throw QuadratureError(std::string(where) + ": integrand produced a non-finite value",
                          v, std::numeric_limits<double>::infinity());
  }
}

// Geometry of [a,b] with distances measured from whichever end anchors a panel.
struct Interval {
  double a;
  double b;
  double length;

  Abscissa at_left_offset(double d) const { return {a + d, d, length - d}; }
  Abscissa at_right_offset(double d) const { return {b - d, length - d, d}; }
};

struct Panel {
  double lo = 0.0; // offsets from the anchoring endpoint, lo < hi
  double hi = 0.0;
  bool right_anchored = false;
  double value = 0.0;
  double error = 0.0;
  double resabs = 0.0;

  bool operator<(const Panel& other) const { return error < other.error; }
};

} // namespace

std::string_view to_string(Rule rule) {
  switch (rule) {
  case Rule::JacobiWeighted:
    return "jacobi-weighted";
  case Rule::DoubleExponential:
    return "double-exponential";
  case Rule::AdaptiveSubdivision:
    return "adaptive-subdivision";
  }
  return "unknown";
}

Rule rule_from_string(std::string_view name) {
  if (name == "jacobi-weighted") return Rule::JacobiWeighted;
  if (name == "double-exponential") return Rule::DoubleExponential;
  if (name == "adaptive-subdivision") return Rule::AdaptiveSubdivision;
  throw DomainError("unknown quadrature rule '" + std::string(name) + "'");
}

void QuadratureSpec::validate() const {
  if (nodes < 2) throw DomainError("QuadratureSpec: nodes must be >= 2");
  if (!(alpha > -1.0)) throw DomainError("QuadratureSpec: alpha must exceed -1");
  if (!(beta > -1.0)) throw DomainError("QuadratureSpec: beta must exceed -1");
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw DomainError("QuadratureSpec: rel_tol must lie in (0,1)");
}

struct WeightedQuadrature::Rules {
  GaussRule left_hi, left_lo;   // weight y^alpha
  GaussRule right_hi, right_lo; // weight y^beta, y measured from b
  GaussRule both;               // y^alpha (1-y)^beta at spec.nodes
};

WeightedQuadrature::WeightedQuadrature(const QuadratureSpec& spec) : spec_(spec) {
  spec_.validate();
  auto rules = std::make_shared<Rules>();
  const int lo = std::max(1, spec_.nodes / 2);
  if (spec_.rule == Rule::AdaptiveSubdivision) {
    if (spec_.alpha != 0.0) {
      rules->left_hi = gauss_jacobi_unit(spec_.nodes, spec_.alpha, 0.0);
      rules->left_lo = gauss_jacobi_unit(lo, spec_.alpha, 0.0);
    }
    if (spec_.beta != 0.0) {
      rules->right_hi = gauss_jacobi_unit(spec_.nodes, spec_.beta, 0.0);
      rules->right_lo = gauss_jacobi_unit(lo, spec_.beta, 0.0);
    }
  } else if (spec_.rule == Rule::JacobiWeighted) {
    rules->both = gauss_jacobi_unit(spec_.nodes, spec_.alpha, spec_.beta);
  }
  rules_ = std::move(rules);
}

WeightedQuadrature::~WeightedQuadrature() = default;
WeightedQuadrature::WeightedQuadrature(const WeightedQuadrature&) = default;
WeightedQuadrature& WeightedQuadrature::operator=(const WeightedQuadrature&) = default;
WeightedQuadrature::WeightedQuadrature(WeightedQuadrature&&) noexcept = default;
WeightedQuadrature& WeightedQuadrature::operator=(WeightedQuadrature&&) noexcept = default;

namespace {

double pow_or_one(double base, double exponent) {
  return exponent == 0.0 ? 1.0 : std::pow(base, exponent);
}

class Adaptive {
public:
  Adaptive(const WeightedIntegrand& f, const Interval& iv, const QuadratureSpec& spec,
           const GaussRule* left_hi, const GaussRule* left_lo, const GaussRule* right_hi,
           const GaussRule* right_lo)
      : f_(f), iv_(iv), spec_(spec), left_hi_(left_hi), left_lo_(left_lo), right_hi_(right_hi),
        right_lo_(right_lo) {}

  QuadratureResult run() {
    const double half = 0.5 * iv_.length;
    push(evaluate(0.0, half, false));
    push(evaluate(0.0, iv_.length - half, true));

    std::size_t iterations = 0;
    while (true) {
      if (++iterations % 64 == 0) {
        resum();
      }
      const double target = std::max(spec_.rel_tol * std::abs(total_), 50.0 * kEps * resabs_);
      if (error_ <= target) {
        resum();
        if (error_ <= std::max(spec_.rel_tol * std::abs(total_), 50.0 * kEps * resabs_)) {
          return {total_, error_, evaluations_};
        }
      }
      if (heap_.empty()) {
        throw QuadratureError("adaptive quadrature: roundoff limit reached", total_, error_);
      }
      if (heap_.size() >= kMaxPanels) {
        throw QuadratureError("adaptive quadrature: panel limit reached", total_, error_);
      }

      std::pop_heap(heap_.begin(), heap_.end());
      const Panel worst = heap_.back();
      heap_.pop_back();
      const double mid = 0.5 * (worst.lo + worst.hi);
      if (!(mid > worst.lo && mid < worst.hi) ||
          (worst.hi - worst.lo) <= 8.0 * kEps * worst.hi) {
        // Too narrow to split further: freeze it.
        frozen_.push_back(worst);
        continue;
      }
      total_ -= worst.value;
      error_ -= worst.error;
      resabs_ -= worst.resabs;
      push(evaluate(worst.lo, mid, worst.right_anchored));
      push(evaluate(mid, worst.hi, worst.right_anchored));
    }
  }

private:
  void push(const Panel& p) {
    heap_.push_back(p);
    std::push_heap(heap_.begin(), heap_.end());
    total_ += p.value;
    error_ += p.error;
    resabs_ += p.resabs;
  }

  void resum() {
    total_ = error_ = resabs_ = 0.0;
    for (const auto* set : {&heap_, &frozen_}) {
      for (const Panel& p : *set) {
        total_ += p.value;
        error_ += p.error;
        resabs_ += p.resabs;
      }
    }
  }

  Panel evaluate(double lo, double hi, bool right_anchored) {
    const double exponent = right_anchored ? spec_.beta : spec_.alpha;
    Panel p = (lo == 0.0 && exponent != 0.0) ? jacobi_panel(hi, right_anchored)
                                              : kronrod_panel(lo, hi, right_anchored);
    p.lo = lo;
    p.hi = hi;
    p.right_anchored = right_anchored;
    return p;
  }

  Abscissa point(double offset, bool right_anchored) const {
    return right_anchored ? iv_.at_right_offset(offset) : iv_.at_left_offset(offset);
  }

  // Full integrand including both endpoint weights.
  double full(const Abscissa& x) {
    ++evaluations_;
    const double v = f_(x) * pow_or_one(x.from_left, spec_.alpha) * pow_or_one(x.from_right, spec_.beta);
    check_finite_result(v, "adaptive quadrature");
    return v;
  }

  // Panel [0,h] at an endpoint with a singular exponent: the anchoring weight
  // is absorbed by the Gauss-Jacobi rule, the opposite one is evaluated.
  Panel jacobi_panel(double h, bool right_anchored) {
    const GaussRule& hi_rule = right_anchored ? *right_hi_ : *left_hi_;
    const GaussRule& lo_rule = right_anchored ? *right_lo_ : *left_lo_;
    const double exponent = right_anchored ? spec_.beta : spec_.alpha;
    const double other = right_anchored ? spec_.alpha : spec_.beta;
    const double scale = std::pow(h, 1.0 + exponent);

    auto sum = [&](const GaussRule& rule, double& abs_sum) {
      double s = 0.0;
      for (std::size_t i = 0; i < rule.size(); ++i) {
        const Abscissa x = point(h * rule.nodes[i], right_anchored);
        const double opposite = right_anchored ? x.from_left : x.from_right;
        ++evaluations_;
        const double v = f_(x) * pow_or_one(opposite, other);
        check_finite_result(v, "adaptive quadrature");
        s += rule.weights[i] * v;
        abs_sum += rule.weights[i] * std::abs(v);
      }
      return s * scale;
    };
    double abs_hi = 0.0;
    double abs_lo = 0.0;
    const double q_hi = sum(hi_rule, abs_hi);
    const double q_lo = sum(lo_rule, abs_lo);
    Panel p;
    p.value = q_hi;
    p.resabs = abs_hi * scale;
    p.error = std::max(std::abs(q_hi - q_lo), 50.0 * kEps * p.resabs);
    return p;
  }

  Panel kronrod_panel(double lo, double hi, bool right_anchored) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    std::array<double, 21> fv{};
    fv[20] = full(point(center, right_anchored));
    for (int j = 0; j < 10; ++j) {
      const double dx = half * kXgk[j];
      fv[2 * j] = full(point(center - dx, right_anchored));
      fv[2 * j + 1] = full(point(center + dx, right_anchored));
    }
    double resk = kWgk[10] * fv[20];
    double resg = 0.0;
    double resabs = kWgk[10] * std::abs(fv[20]);
    for (int j = 0; j < 10; ++j) {
      const double pair = fv[2 * j] + fv[2 * j + 1];
      resk += kWgk[j] * pair;
      resabs += kWgk[j] * (std::abs(fv[2 * j]) + std::abs(fv[2 * j + 1]));
      if (j % 2 == 1) {
        resg += kWg[j / 2] * pair;
      }
    }
    const double reskh = 0.5 * resk;
    double resasc = kWgk[10] * std::abs(fv[20] - reskh);
    for (int j = 0; j < 10; ++j) {
      resasc += kWgk[j] * (std::abs(fv[2 * j] - reskh) + std::abs(fv[2 * j + 1] - reskh));
    }
    resk *= half;
    resg *= half;
    resabs *= half;
    resasc *= half;

    double err = std::abs(resk - resg);
    if (resasc != 0.0 && err != 0.0) {
      err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    err = std::max(err, 50.0 * kEps * resabs);

    Panel p;
    p.value = resk;
    p.error = err;
    p.resabs = resabs;
    return p;
  }

  const WeightedIntegrand& f_;
  Interval iv_;
  const QuadratureSpec& spec_;
  const GaussRule* left_hi_;
  const GaussRule* left_lo_;
  const GaussRule* right_hi_;
  const GaussRule* right_lo_;
  std::vector<Panel> heap_;
  std::vector<Panel> frozen_;
  double total_ = 0.0;
  double error_ = 0.0;
  double resabs_ = 0.0;
  std::size_t evaluations_ = 0;
};

QuadratureResult jacobi_integrate(const WeightedIntegrand& f, const Interval& iv,
                                  const QuadratureSpec& spec, const GaussRule& first) {
  const double scale = std::pow(iv.length, 1.0 + spec.alpha + spec.beta);
  std::size_t evaluations = 0;
  auto apply = [&](const GaussRule& rule, double& abs_sum) {
    double s = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const Abscissa x{iv.a + iv.length * rule.nodes[i], iv.length * rule.nodes[i],
                       iv.length * rule.complements[i]};
      const double v = f(x);
      ++evaluations;
      check_finite_result(v, "Gauss-Jacobi quadrature");
      s += rule.weights[i] * v;
      abs_sum += rule.weights[i] * std::abs(v);
    }
    return s * scale;
  };

  int n = spec.nodes;
  double abs_sum = 0.0;
  double q = apply(first, abs_sum);
  double err = std::numeric_limits<double>::infinity();
  while (true) {
    double abs_half = 0.0;
    const double q_half = apply(gauss_jacobi_unit(std::max(1, n / 2), spec.alpha, spec.beta), abs_half);
    err = std::max(std::abs(q - q_half), 50.0 * kEps * abs_sum * scale);
    if (err <= spec.rel_tol * std::abs(q) || err <= 50.0 * kEps * abs_sum * scale) {
      return {q, err, evaluations};
    }
    if (2 * n > kMaxJacobiNodes) {
      throw QuadratureError("Gauss-Jacobi quadrature: node limit reached", q, err);
    }
    n *= 2;
    abs_sum = 0.0;
    q = apply(gauss_jacobi_unit(n, spec.alpha, spec.beta), abs_sum);
  }
}

// tanh-sinh on [a,b]; distances to the endpoints come straight from the
// transformation so endpoint singularities are evaluated accurately.
QuadratureResult tanh_sinh_integrate(const WeightedIntegrand& f, const Interval& iv,
                                     const QuadratureSpec& spec) {
  const double half = 0.5 * iv.length;
  const double pi_2 = 0.5 * std::numbers::pi;
  std::size_t evaluations = 0;

  auto contribution = [&](double t, double& abs_sum) {
    const double s = pi_2 * std::sinh(t);
    const double c = std::cosh(s);
    const double w = pi_2 * std::cosh(t) / (c * c);
    // 1 - tanh(|s|) = 2 / (1 + e^{2|s|})
    const double gap = 2.0 / (1.0 + std::exp(2.0 * std::abs(s)));
    const double near = half * gap;
    if (!(near > 0.0) || w == 0.0) {
      return 0.0;
    }
    const double far = iv.length - near;
    const Abscissa x = s >= 0.0 ? Abscissa{iv.b - near, far, near} : Abscissa{iv.a + near, near, far};
    ++evaluations;
    const double v = f(x) * pow_or_one(x.from_left, spec.alpha) * pow_or_one(x.from_right, spec.beta);
    check_finite_result(v, "tanh-sinh quadrature");
    abs_sum += w * std::abs(v);
    return w * v;
  };

  // Truncate where the node distance to the endpoint underflows.
  const double t_max = std::asinh(std::log(1e300) / std::numbers::pi);
  double step = 1.0;
  double abs_sum = 0.0;
  double sum = contribution(0.0, abs_sum);
  for (double t = step; t <= t_max; t += step) {
    sum += contribution(t, abs_sum) + contribution(-t, abs_sum);
  }
  double estimate = sum * step * half;
  double err = std::numeric_limits<double>::infinity();
  for (int level = 1; level <= kMaxTanhSinhLevel; ++level) {
    step *= 0.5;
    double added = 0.0;
    for (double t = step; t <= t_max; t += 2.0 * step) {
      added += contribution(t, abs_sum) + contribution(-t, abs_sum);
    }
    sum += added;
    const double next = sum * step * half;
    err = std::abs(next - estimate);
    estimate = next;
    const double floor = 50.0 * kEps * abs_sum * step * half;
    if (level >= 3 && (err <= spec.rel_tol * std::abs(estimate) || err <= floor)) {
      return {estimate, std::max(err, floor), evaluations};
    }
  }
  throw QuadratureError("tanh-sinh quadrature: level limit reached", estimate, err);
}

} // namespace

QuadratureResult WeightedQuadrature::integrate(const WeightedIntegrand& f, double a, double b) const {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    throw DomainError("integrate_weighted: need finite a < b");
  }
  const Interval iv{a, b, b - a};
  switch (spec_.rule) {
  case Rule::JacobiWeighted:
    return jacobi_integrate(f, iv, spec_, rules_->both);
  case Rule::DoubleExponential:
    return tanh_sinh_integrate(f, iv, spec_);
  case Rule::AdaptiveSubdivision: {
    Adaptive engine(f, iv, spec_, &rules_->left_hi, &rules_->left_lo, &rules_->right_hi,
                    &rules_->right_lo);
    return engine.run();
  }
  }
  throw DomainError("integrate_weighted: unknown rule");
}

QuadratureResult integrate_weighted(const WeightedIntegrand& f, double a, double b,
                                    const QuadratureSpec& spec) {
  return WeightedQuadrature(spec).integrate(f, a, b);
}

QuadratureResult integrate_weighted(const ScalarIntegrand& f, double a, double b,
                                    const QuadratureSpec& spec) {
  return integrate_weighted(WeightedIntegrand([&f](const Abscissa& p) { return f(p.x); }), a, b, spec);
}

} // namespace fbm::numerics
