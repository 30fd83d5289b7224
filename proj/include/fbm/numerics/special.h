#pragma once

namespace fbm::numerics {

/// ln Γ(x) for x > 0. Throws DomainError otherwise.
double ln_gamma(double x);

/// Euler Beta function Β(a,b) = Γ(a)Γ(b)/Γ(a+b), a, b > 0.
double beta_fn(double a, double b);

/// Gauss hypergeometric function F(a,b;c;x) evaluated through the Euler
/// integral
///
///   F(a,b;c;x) = 1/Β(b,c-b) ∫₀¹ t^{b-1} (1-t)^{c-b-1} (1-xt)^{-a} dt.
///
/// Only the Euler domain c > b > 0, x < 1 is supported; anything else throws
/// UnsupportedDomainError rather than extrapolating.
double gauss_2f1(double a, double b, double c, double x);

} // namespace fbm::numerics
