#ifndef PTSPEC_WKB_HPP
#define PTSPEC_WKB_HPP

#include <cmath>

#include "ptspec/errors.hpp"
#include "ptspec/specfun.hpp"

namespace ptspec::wkb {

/// Leading-order quasi-classical energy for the potential -(ix)^N with
/// N = eps + 2, valid for eps > 0:
///   E = [ Gamma(3/2 + 1/N) sqrt(pi) (n + 1/2)
///         / ( sin(pi/N) Gamma(1 + 1/N) ) ]^{2N/(N+2)}
inline double wkb_energy(int n, double eps) {
    if (n < 0) throw DomainError("wkb_energy: negative level");
    if (!(eps > 0.0)) throw DomainError("wkb_energy: requires eps > 0");
    const double N = eps + 2.0;
    const double num = specfun::gamma_real(1.5 + 1.0 / N) *
                       std::sqrt(specfun::pi) * (n + 0.5);
    const double den =
        std::sin(specfun::pi / N) * specfun::gamma_real(1.0 + 1.0 / N);
    return std::pow(num / den, 2.0 * N / (N + 2.0));
}

} // namespace ptspec::wkb

#endif
