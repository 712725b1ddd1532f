#ifndef PTSPEC_MELEM_HPP
#define PTSPEC_MELEM_HPP

#include <cmath>
#include <complex>

#include "ptspec/errors.hpp"
#include "ptspec/polyalg.hpp"
#include "ptspec/quadrature.hpp"
#include "ptspec/specfun.hpp"

namespace ptspec::melem {

using Complex = std::complex<double>;

// Per-level basis parameters: variational frequency and the dimensionless
// complex-shift parameter u~ = sqrt(omega) * u_physical. All formulas in
// this module are written in terms of u~; the physical shift is
// u~ / sqrt(omega).
struct BasisParams {
    double omega = 1.0;
    double ushift = 0.0;

    BasisParams() = default;
    BasisParams(double omega_, double ushift_) : omega(omega_), ushift(ushift_) {
        if (!(omega > 0.0)) throw DomainError("BasisParams: omega must be positive");
        if (!std::isfinite(ushift)) throw DomainError("BasisParams: ushift must be finite");
    }
};

// Deformation parameter of the Hamiltonian family. The main method needs
// eps > -1; the window [-1.05, -1) is reachable only in outlook mode.
struct Epsilon {
    double value = 0.0;

    explicit Epsilon(double v, bool outlook = false) : value(v) {
        if (outlook) {
            if (v < -1.05) throw DomainError("Epsilon: below outlook floor -1.05");
        } else if (v <= -1.0) {
            throw DomainError("Epsilon: eps must exceed -1 outside outlook mode");
        }
    }
};

namespace detail {

inline double log_norm(int n, int k) {
    // ln sqrt(2^n n! 2^k k!)
    return 0.5 * ((n + k) * std::numbers::ln2 + std::lgamma(n + 1.0) +
                  std::lgamma(k + 1.0));
}

} // namespace detail

/// The normalized PT matrix-element integral
///   J(n,k) = [pi^{1/2} (2^n n! 2^k k!)^{1/2}]^{-1}
///            int e^{-(x+iu)^2} H_n(x+iu) H_k(x+iu) (ix)^{eps+2} dx,
/// reduced to a ladder of parabolic cylinder values: the shifted Hermite
/// product is expanded in monomials c_m x^m and each x^m maps to one
/// branch integral with nu = m + eps + 2.
inline Complex pt_integral(int n, int k, double utilde, const Epsilon& eps) {
    if (n < 0 || k < 0) throw DomainError("pt_integral: negative level index");
    const double ln = detail::log_norm(n, k);
    if (ln > 700.0) throw Error("pt_integral: factorial normalization overflow");
    const polyalg::ComplexPoly prod =
        polyalg::mul(polyalg::hermite(n), polyalg::hermite(k));
    const polyalg::ComplexPoly shifted =
        polyalg::shift(prod, Complex{0.0, utilde});
    const double z = std::sqrt(2.0) * utilde;
    Complex sum{0.0, 0.0};
    // powers of -i cycle with period 4
    static const Complex mi[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    for (int m = 0; m <= shifted.degree(); ++m) {
        const Complex cm = shifted[static_cast<std::size_t>(m)];
        if (cm == Complex{0.0, 0.0}) continue;
        const double nu = m + eps.value + 2.0;
        sum += cm * mi[m % 4] * std::pow(2.0, -nu / 2.0) * specfun::d_nu(nu, z);
    }
    return std::exp(utilde * utilde / 2.0 - ln) * sum;
}

/// Direct adaptive quadrature of the same integrand, split at x = 0.
/// Independent oracle for pt_integral.
inline Complex pt_integral_quadrature(int n, int k, double utilde,
                                      const Epsilon& eps,
                                      double abs_tol = 1e-10) {
    if (n < 0 || k < 0) throw DomainError("pt_integral_quadrature: negative index");
    const double ln = detail::log_norm(n, k);
    const double norm = std::exp(-ln) / std::sqrt(specfun::pi);
    const polyalg::ComplexPoly hn = polyalg::hermite(n);
    const polyalg::ComplexPoly hk = polyalg::hermite(k);
    const double nu = eps.value + 2.0;
    const double X = 12.0 + std::sqrt(2.0 * (n + k + 1.0)) + std::abs(utilde);
    auto integrand = [&](double x) -> Complex {
        const Complex zz{x, utilde};
        return std::exp(-zz * zz) * hn.eval(zz) * hk.eval(zz) *
               specfun::branch_power(x, nu);
    };
    // the Hermite product can peak many orders above the integral value;
    // keep the absolute tolerance above the roundoff floor set by that peak
    double peak = 0.0;
    for (int i = 1; i < 512; ++i) {
        const double x = -X + 2.0 * X * i / 512.0;
        if (x != 0.0) peak = std::max(peak, std::abs(integrand(x)));
    }
    const double tol = std::max(abs_tol, 1e-13 * peak);
    const Complex left = quadrature::integrate(integrand, -X, 0.0, tol / 2.0);
    const Complex right = quadrature::integrate(integrand, 0.0, X, tol / 2.0);
    return norm * (left + right);
}

/// Diagonal element H_nn = omega (2n+1)/2 - omega^{-(eps+2)/2} J(n,n).
/// The PT normalization (y_n, y_n) = (-1)^n has already cancelled.
inline Complex h_diag(int n, const BasisParams& p, const Epsilon& eps) {
    return p.omega * (2.0 * n + 1.0) / 2.0 -
           std::pow(p.omega, -(eps.value + 2.0) / 2.0) *
               pt_integral(n, n, p.ushift, eps);
}

namespace detail {

// The symmetric bracket of the off-diagonal element: kinetic deltas at
// |n-k| = 2 plus the potential integral. Equal to the plain expansion
// matrix A_nk of the PT eigenproblem; h_offdiag multiplies it by (-1)^n.
inline Complex sym_bracket(int n, int k, const BasisParams& p,
                           const Epsilon& eps) {
    Complex v = -std::pow(p.omega, -(eps.value + 2.0) / 2.0) *
                pt_integral(n, k, p.ushift, eps);
    if (k == n - 2)
        v += -p.omega / 2.0 * std::sqrt(static_cast<double>(n) * (n - 1.0));
    if (k == n + 2)
        v += -p.omega / 2.0 * std::sqrt((n + 1.0) * (n + 2.0));
    return v;
}

} // namespace detail

/// Off-diagonal element H_nk, k != n, including the (-1)^n factor of the
/// PT scalar product. The integral part is symmetric in (n, k); the
/// kinetic deltas act at |n - k| = 2.
inline Complex h_offdiag(int n, int k, const BasisParams& p,
                         const Epsilon& eps) {
    if (n == k) throw DomainError("h_offdiag: use h_diag for n == k");
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return sign * detail::sym_bracket(n, k, p, eps);
}

/// Matrix entry of the equivalent standard (complex symmetric)
/// eigenproblem: the (-1)^n metric stripped. This is what a fixed-basis
/// diagonalization must use; eigenvalues of the (-1)^n-signed variant are
/// not those of the Hamiltonian.
inline Complex sym_element(int n, int k, const BasisParams& p,
                           const Epsilon& eps) {
    if (n == k) return h_diag(n, p, eps);
    return detail::sym_bracket(n, k, p, eps);
}

struct MatrixElement {
    int n = 0;
    int k = 0;
    Complex value{0.0, 0.0};
};

} // namespace ptspec::melem

#endif
