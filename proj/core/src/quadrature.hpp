#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace wva::detail {

// Adaptive Gauss-Kronrod over [a, b], evaluated on the unit interval. Boost's error estimate
// does not resolve on sub-micron intervals and recurses to full depth there.
template <typename F>
double integrate(const F& f, double a, double b) {
    const double w = b - a;
    auto g = [&](double t) { return w * f(a + w * t); };
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, 0.0, 1.0, 15, 1e-13);
}

}  // namespace wva::detail
