#ifndef PTSPEC_SPECFUN_HPP
#define PTSPEC_SPECFUN_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>

#include "ptspec/errors.hpp"
#include "ptspec/quadrature.hpp"

namespace ptspec::specfun {

using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

// (i x)^nu on the principal branch: exp(nu (ln|x| + i pi/2 sign x)).
// At nu = 2 this gives (ix)^2 = -x^2, so the harmonic oscillator is
// recovered at eps = 0.
inline Complex branch_power(double x, double nu) {
    if (x == 0.0) {
        if (nu > 0.0) return {0.0, 0.0};
        if (nu == 0.0) return {1.0, 0.0};
        throw DomainError("branch_power: |x|^nu diverges at x = 0 for nu < 0");
    }
    const double mag = std::pow(std::abs(x), nu);
    const double phase = nu * pi / 2.0 * (x > 0.0 ? 1.0 : -1.0);
    return std::polar(mag, phase);
}

/// Gamma(x) for real x away from the poles at 0, -1, -2, ...
inline double gamma_real(double x) {
    if (x <= 0.0 && x == std::floor(x))
        throw DomainError("gamma_real: pole at nonpositive integer");
    return std::tgamma(x);
}

// 1/Gamma(x), finite everywhere: zero at the poles of Gamma.
inline double inv_gamma(double x) {
    if (x <= 0.0 && x == std::floor(x)) return 0.0;
    return 1.0 / std::tgamma(x);
}

/// Confluent hypergeometric M(a, b, z) by its power series, with
/// term-ratio stopping at relative 1e-16.
inline double kummer_m(double a, double b, double z,
                       int max_terms = 10000, double z_range = 60.0) {
    if (b <= 0.0 && b == std::floor(b))
        throw DomainError("kummer_m: b is a nonpositive integer");
    if (std::abs(z) > z_range)
        throw DomainError("kummer_m: |z| outside configured series range");
    double sum = 1.0;
    double term = 1.0;
    for (int k = 0; k < max_terms; ++k) {
        term *= (a + k) / (b + k) * z / (k + 1);
        sum += term;
        if (std::abs(term) <= 1e-16 * std::abs(sum)) return sum;
        if (term == 0.0) return sum; // terminating polynomial case
    }
    throw NonConvergenceError("kummer_m: series did not converge");
}

struct PcfResult {
    double value;
    bool cancellation_warning; // estimated relative error above 1e-8
    double error_estimate;
};

namespace detail {

inline double pcf_floor_delta = 1e-6;

inline PcfResult pcf_d_series(double nu, double z) {
    // D_nu(z) = 2^{nu/2} sqrt(pi) e^{-z^2/4}
    //           [ M(-nu/2, 1/2, z^2/2)/Gamma((1-nu)/2)
    //             - sqrt(2) z M((1-nu)/2, 3/2, z^2/2)/Gamma(-nu/2) ]
    // |z| <= 12 puts the series argument at z^2/2 <= 72; widen the
    // range guard accordingly
    const double zz = z * z / 2.0;
    const double t1 =
        kummer_m(-nu / 2.0, 0.5, zz, 10000, 80.0) * inv_gamma((1.0 - nu) / 2.0);
    const double t2 = std::sqrt(2.0) * z *
                      kummer_m((1.0 - nu) / 2.0, 1.5, zz, 10000, 80.0) *
                      inv_gamma(-nu / 2.0);
    const double diff = t1 - t2;
    const double front = std::pow(2.0, nu / 2.0) * std::sqrt(pi) * std::exp(-z * z / 4.0);
    double rel_err = std::numeric_limits<double>::infinity();
    if (diff != 0.0)
        rel_err = std::numeric_limits<double>::epsilon() *
                  (std::abs(t1) + std::abs(t2)) / std::abs(diff);
    return {front * diff, rel_err > 1e-8, rel_err};
}

} // namespace detail

/// Parabolic cylinder D_nu(z) for real nu >= -1 + delta and |z| <= 12.
/// Sets the warning flag when the two-term Kummer representation loses
/// more than 1e-8 relative accuracy to cancellation.
inline PcfResult pcf_d(double nu, double z) {
    if (nu < -1.0 + detail::pcf_floor_delta)
        throw DomainError("pcf_d: nu below -1 + delta");
    if (std::abs(z) > 12.0)
        throw DomainError("pcf_d: |z| outside configured range");
    return detail::pcf_d_series(nu, z);
}

/// Closed form of the shifted-Gaussian branch integral
///   int (ix)^nu exp(-beta^2 x^2 - i q x) dx
///     = 2^{-nu/2} sqrt(pi) beta^{-nu-1} exp(-q^2/(8 beta^2))
///       D_nu(q/(beta sqrt 2)).
inline Complex eq13_closed(double nu, double beta, double q);

namespace detail {

// peak of |x|^nu e^{-beta^2 x^2}: sets the roundoff floor of any
// double-precision quadrature of the branch integrand
inline double branch_integrand_peak(double nu, double beta) {
    if (nu <= 0.0) return 1.0;
    return std::pow(nu / (2.0 * std::numbers::e * beta * beta), nu / 2.0);
}

} // namespace detail

/// The same integral by direct adaptive quadrature, split at x = 0 with
/// the branch phase applied on each half. Truncated at |x| = 12/beta
/// (Gaussian tail < 1e-30). Absolute tolerance 1e-12, relaxed by the
/// integrand peak when that magnitude puts 1e-12 below the
/// double-precision roundoff floor.
inline Complex eq13_quadrature(double nu, double beta, double q,
                               double abs_tol = 1e-12) {
    if (beta <= 0.0) throw DomainError("eq13_quadrature: beta must be positive");
    if (nu <= -1.0) throw DomainError("eq13_quadrature: nu must exceed -1");
    abs_tol *= std::max(1.0, detail::branch_integrand_peak(nu, beta));
    const double X = 12.0 / beta;
    // Substitute x = t^s on each half so the |x|^nu endpoint factor
    // becomes t^{s(1+nu)-1} with exponent >= ~2; the adaptive rule then
    // converges at the origin even for nu close to -1.
    int s = 1;
    if (nu < 2.0) s = std::max(1, static_cast<int>(std::ceil(3.0 / (1.0 + nu))));
    const Complex phase_pos = std::polar(1.0, nu * pi / 2.0);
    const Complex phase_neg = std::conj(phase_pos);
    auto half = [&](double sign, Complex phase) {
        auto f = [&, sign, phase](double t) -> Complex {
            const double x = std::pow(t, s);
            const double jac = s * std::pow(t, s - 1);
            const double mag = std::pow(x, nu);
            const Complex osc = std::polar(1.0, -q * sign * x);
            return jac * mag * phase * std::exp(-beta * beta * x * x) * osc;
        };
        return quadrature::integrate(f, 0.0, std::pow(X, 1.0 / s), abs_tol / 2.0);
    };
    // x > 0 half (phase e^{i nu pi/2}) plus x < 0 half mapped to t > 0.
    return half(1.0, phase_pos) + half(-1.0, phase_neg);
}

namespace detail {

// Large-argument expansion
//   D_nu(z) ~ e^{-z^2/4} z^nu sum_k (-1)^k (nu)_{2k down} / (k! 2^k z^{2k}),
// valid on the recessive side z >> sqrt(nu). Returns the sum only when
// the terms decay below 1e-12 relative before the asymptotic divergence
// sets in; otherwise reports failure so a caller can fall back further.
inline std::optional<double> pcf_d_asymptotic(double nu, double z) {
    if (z < 4.0) return std::nullopt;
    double sum = 1.0;
    double term = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 80; ++k) {
        term *= -(nu - 2.0 * k + 2.0) * (nu - 2.0 * k + 1.0) /
                (2.0 * k * z * z);
        if (std::abs(term) > prev) return std::nullopt;
        prev = std::abs(term);
        sum += term;
        if (std::abs(term) <= 1e-12 * std::abs(sum))
            return std::exp(-z * z / 4.0) * std::pow(z, nu) * sum;
    }
    return std::nullopt;
}

// Quadrature-backed D_nu used when the series representation cancels.
// Truncation widened with nu so the |x|^nu e^{-x^2} integrand tail is
// negligible at large order.
inline double pcf_d_quadrature(double nu, double z) {
    const double X = std::max(12.0, std::sqrt(2.0 * std::max(nu, 0.0)) + 8.0);
    const double q = std::sqrt(2.0) * z;
    int s = 1;
    if (nu < 2.0) s = std::max(1, static_cast<int>(std::ceil(3.0 / (1.0 + nu))));
    const Complex phase_pos = std::polar(1.0, nu * pi / 2.0);
    auto half = [&](double sign, Complex phase) {
        auto f = [&, sign, phase](double t) -> Complex {
            const double x = std::pow(t, s);
            const double jac = s * std::pow(t, s - 1);
            return jac * std::pow(x, nu) * phase *
                   std::exp(-x * x) * std::polar(1.0, -q * sign * x);
        };
        const double tol = 1e-13 * std::max(1.0, branch_integrand_peak(nu, 1.0));
        return quadrature::integrate(f, 0.0, std::pow(X, 1.0 / s), tol);
    };
    const Complex integral = half(1.0, phase_pos) + half(-1.0, std::conj(phase_pos));
    // invert the closed form at beta = 1
    const double front = std::pow(2.0, nu / 2.0) / std::sqrt(pi) * std::exp(z * z / 4.0);
    return front * integral.real();
}

} // namespace detail

/// D_nu(z) with automatic fallback when the series representation flags
/// cancellation. Valid for any nu > -1. The series cancels exactly on
/// the recessive side z >> sqrt(nu), where the oscillatory-quadrature
/// route hits an e^{z^2/4}-amplified roundoff floor; the large-argument
/// expansion covers that regime, with quadrature as the last resort.
inline double d_nu(double nu, double z) {
    if (nu <= -1.0) throw DomainError("d_nu: nu must exceed -1");
    if (std::abs(z) <= 12.0) {
        const PcfResult r = detail::pcf_d_series(nu, z);
        if (!r.cancellation_warning) return r.value;
    }
    if (const auto a = detail::pcf_d_asymptotic(nu, z)) return *a;
    return detail::pcf_d_quadrature(nu, z);
}

inline Complex eq13_closed(double nu, double beta, double q) {
    if (beta <= 0.0) throw DomainError("eq13_closed: beta must be positive");
    if (nu <= -1.0) throw DomainError("eq13_closed: nu must exceed -1");
    const double arg = q / (beta * std::sqrt(2.0));
    const double d = d_nu(nu, arg);
    return std::pow(2.0, -nu / 2.0) * std::sqrt(pi) * std::pow(beta, -nu - 1.0) *
           std::exp(-q * q / (8.0 * beta * beta)) * d;
}

} // namespace ptspec::specfun

#endif
