#pragma once

#include "hfbm/quadrature.hpp"

namespace hfbm::specfun {

// Γ(x) for 0 < x ≤ 170.
double gamma(double x);

// γ(a, x) = ∫_0^x z^{a-1} e^{-z} dz; x may be +inf.
double lower_incomplete_gamma(double a, double x);

// Γ(a, x) = ∫_x^∞ z^{a-1} e^{-z} dz.
double upper_incomplete_gamma(double a, double x);

// Tricomi's confluent hypergeometric function of the second kind from its integral
// representation (1/Γ(a)) ∫_0^∞ e^{-sz} s^{a-1} (1+s)^{b-a-1} ds.
double tricomi_psi(double a, double b, double z, const QuadratureConfig& cfg = {});

}  // namespace hfbm::specfun
