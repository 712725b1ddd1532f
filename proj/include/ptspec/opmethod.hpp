#ifndef PTSPEC_OPMETHOD_HPP
#define PTSPEC_OPMETHOD_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ptspec/errors.hpp"
#include "ptspec/melem.hpp"

namespace ptspec::opmethod {

using Complex = std::complex<double>;
using melem::BasisParams;
using melem::Epsilon;

enum class Method { solo, mixed, reference, wkb, anharmonic };

inline std::string method_name(Method m) {
    switch (m) {
        case Method::solo: return "solo";
        case Method::mixed: return "mixed";
        case Method::reference: return "reference";
        case Method::wkb: return "wkb";
        case Method::anharmonic: return "anharmonic";
    }
    return "?";
}

// One eigenvalue record: level, deformation, value, how it was obtained,
// the basis parameters used, and the magnitude of the leading neglected
// off-diagonal couplings.
struct EnergyEstimate {
    int n = 0;
    double eps = 0.0;
    Complex value{0.0, 0.0};
    Method method = Method::solo;
    BasisParams params{};
    double residual = 0.0;
};

// The 2x2 degenerate block and its two roots. Note h12 enters the
// discriminant as the algebraic square h12^2, not |h12|^2: with h12
// purely imaginary the discriminant can go negative and the pair turns
// complex conjugate.
struct MixingPair {
    int n_lo = 0;
    int n_hi = 0;
    Complex h11{}, h22{}, h12{};
    Complex e_plus{}, e_minus{};
    BasisParams params{};
    Complex discriminant{};
};

// Which levels share a 2x2 block. StandardMix pairs (1,2),(3,4),... with
// a solo ground state; OutlookMix pairs (0,1),(2,3),...
enum class PairingScheme { Solo, StandardMix, OutlookMix };

struct ScanRange {
    double lo = -6.0;
    double hi = 6.0;
    double step = 0.05;
};

namespace detail {

// Brent's method on [a, b] with f(a) f(b) <= 0.
template <typename F>
double brent(const F& f, double a, double b, double fa, double fb,
             double xtol = 1e-15, int max_iter = 200) {
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw NoRootError("brent: endpoints do not bracket");
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < max_iter; ++it) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol = 2.0 * std::numeric_limits<double>::epsilon() *
                               std::abs(b) + 0.5 * xtol;
        const double m = 0.5 * (c - b);
        if (std::abs(m) <= tol || fb == 0.0) return b;
        if (std::abs(e) < tol || std::abs(fa) <= std::abs(fb)) {
            d = m; e = m;
        } else {
            double p, q, r = 0.0;
            double s = fb / fa;
            if (a == c) { // secant
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else { // inverse quadratic
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q; else p = -p;
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q),
                                   std::abs(e * q))) {
                e = d; d = p / q;
            } else {
                d = m; e = m;
            }
        }
        a = b; fa = fb;
        b += (std::abs(d) > tol) ? d : (m > 0.0 ? tol : -tol);
        fb = f(b);
        if ((fb > 0.0) == (fc > 0.0)) { c = a; fc = fa; e = d = b - a; }
    }
    throw NonConvergenceError("brent: iteration cap reached");
}

} // namespace detail

/// The real scalar whose roots fix the shift: the nearest-neighbour
/// integral J(n, n+1) is i times a real function of utilde; return that
/// factor. A residual real part beyond 1e-8 of scale means the branch
/// structure broke down and is reported, not guessed away.
inline double g_function(double utilde, int n, const Epsilon& eps) {
    const Complex j = melem::pt_integral(n, n + 1, utilde, eps);
    const double scale = std::max(1.0, std::abs(j));
    if (std::abs(j.real()) > 1e-8 * scale)
        throw BranchInconsistencyError(
            "g_function: J(n,n+1) is not purely imaginary");
    return j.imag();
}

/// All roots of g_function on the scan interval, each sign-change
/// bracket refined by Brent's method. Sorted ascending.
inline std::vector<double> solve_u(int n, const Epsilon& eps,
                                   const ScanRange& scan = {}) {
    if (!(scan.step > 0.0) || !(scan.hi > scan.lo))
        throw DomainError("solve_u: bad scan range");
    std::vector<double> roots;
    auto g = [&](double u) { return g_function(u, n, eps); };
    double u_prev = scan.lo;
    double g_prev = g(u_prev);
    for (double u = scan.lo + scan.step; u <= scan.hi + 0.5 * scan.step;
         u += scan.step) {
        const double uc = std::min(u, scan.hi);
        const double gc = g(uc);
        if (g_prev == 0.0) {
            roots.push_back(u_prev);
        } else if (g_prev * gc < 0.0) {
            roots.push_back(detail::brent(g, u_prev, uc, g_prev, gc));
        }
        u_prev = uc;
        g_prev = gc;
    }
    if (g_prev == 0.0) roots.push_back(u_prev);
    std::sort(roots.begin(), roots.end());
    if (roots.empty()) throw NoRootError("solve_u: no sign change in scan range");
    return roots;
}

/// The frequency from the second vanishing condition H_{n,n+2} = 0:
/// omega^{(eps+4)/2} = B with B = -2 J(n,n+2) / sqrt((n+1)(n+2)).
/// J(n,n+2) is real by parity; Re B must be positive or the chosen shift
/// root is wrong.
inline double solve_omega(int n, const Epsilon& eps, double utilde) {
    const Complex j = melem::pt_integral(n, n + 2, utilde, eps);
    const Complex b = -2.0 * j / std::sqrt((n + 1.0) * (n + 2.0));
    const double scale = std::max(1e-300, std::abs(b));
    if (std::abs(b.imag()) > 1e-8 * scale)
        throw BranchInconsistencyError("solve_omega: bracket is not real");
    if (!(b.real() > 0.0))
        throw NegativeBracketError("solve_omega: nonpositive bracket (wrong shift root?)");
    return std::pow(b.real(), 2.0 / (eps.value + 4.0));
}

namespace detail {

inline double neglected_residual(int n, const BasisParams& p,
                                 const Epsilon& eps) {
    return std::abs(melem::h_offdiag(n, n + 3, p, eps)) +
           std::abs(melem::h_offdiag(n, n + 4, p, eps));
}

// Solve the two parameter conditions of row n and pick the root per the
// policy: admissible roots are those with a positive omega-bracket; among
// them minimize the leading neglected couplings, break ties toward the
// smaller |utilde|.
inline std::pair<BasisParams, double> solve_row(int n, const Epsilon& eps,
                                                const ScanRange& scan) {
    const std::vector<double> uroots = solve_u(n, eps, scan);
    std::optional<BasisParams> best;
    double best_res = 0.0;
    for (double u : uroots) {
        double omega;
        try {
            omega = solve_omega(n, eps, u);
        } catch (const NegativeBracketError&) {
            continue;
        }
        const BasisParams p{omega, u};
        const double res = neglected_residual(n, p, eps);
        const bool better =
            !best || res < best_res * (1.0 - 1e-12) ||
            (res <= best_res * (1.0 + 1e-12) &&
             std::abs(u) < std::abs(best->ushift));
        if (better) {
            best = p;
            best_res = res;
        }
    }
    if (!best)
        throw NegativeBracketError(
            "solve_row: every shift root gives a nonpositive omega bracket");
    return {*best, best_res};
}

} // namespace detail

/// Zeroth-order energy of level n: solve the two parameter conditions of
/// row n, then E_n = H_nn at those parameters.
inline EnergyEstimate zeroth_energy(int n, const Epsilon& eps,
                                    const ScanRange& scan = {}) {
    if (n < 0) throw DomainError("zeroth_energy: negative level");
    auto [params, res] = detail::solve_row(n, eps, scan);
    EnergyEstimate e;
    e.n = n;
    e.eps = eps.value;
    e.value = melem::h_diag(n, params, eps);
    e.method = Method::solo;
    e.params = params;
    e.residual = res;
    return e;
}

/// The 2x2 degenerate block for pair m of the given scheme. Both levels
/// share one parameter set, fixed by the upper member's vanishing
/// conditions; the roots use the algebraic square of h12.
inline MixingPair mixed_pair(int pair_index, const Epsilon& eps,
                             PairingScheme scheme,
                             const ScanRange& scan = {}) {
    if (pair_index < 0) throw DomainError("mixed_pair: negative pair index");
    int lo, hi;
    switch (scheme) {
        case PairingScheme::StandardMix:
            lo = 2 * pair_index + 1;
            hi = 2 * pair_index + 2;
            break;
        case PairingScheme::OutlookMix:
            lo = 2 * pair_index;
            hi = 2 * pair_index + 1;
            break;
        default:
            throw DomainError("mixed_pair: scheme must be a mixing scheme");
    }
    auto [params, res] = detail::solve_row(hi, eps, scan);
    (void)res;
    MixingPair mp;
    mp.n_lo = lo;
    mp.n_hi = hi;
    mp.params = params;
    mp.h11 = melem::h_diag(lo, params, eps);
    mp.h22 = melem::h_diag(hi, params, eps);
    mp.h12 = melem::h_offdiag(lo, hi, params, eps);
    const Complex d = mp.h11 - mp.h22;
    mp.discriminant = d * d + 4.0 * mp.h12 * mp.h12;
    const Complex root = std::sqrt(mp.discriminant);
    const Complex mean = 0.5 * (mp.h11 + mp.h22);
    mp.e_plus = mean + 0.5 * root;
    mp.e_minus = mean - 0.5 * root;
    return mp;
}

/// Bisection on the (real) mixing discriminant: the eps* where the pair
/// coalesces and turns complex conjugate. |delta eps| resolved to 1e-6.
inline double find_branch_point(int pair_index, PairingScheme scheme,
                                double eps_lo, double eps_hi,
                                const ScanRange& scan = {}) {
    const bool outlook = true; // permit the window below -1 during search
    auto disc = [&](double e) {
        return mixed_pair(pair_index, Epsilon(e, outlook), scheme, scan)
            .discriminant.real();
    };
    double a = eps_lo, b = eps_hi;
    double fa = disc(a), fb = disc(b);
    if (fa * fb > 0.0)
        throw NoRootError("find_branch_point: discriminant does not change sign");
    while (b - a > 1e-6) {
        const double m = 0.5 * (a + b);
        const double fm = disc(m);
        if (fm == 0.0) return m;
        if (fa * fm < 0.0) {
            b = m; fb = fm;
        } else {
            a = m; fa = fm;
        }
    }
    return 0.5 * (a + b);
}

struct FirstOrderCorrection {
    Complex delta{0.0, 0.0};
    bool small_denominator_warning = false;
};

/// Leading perturbative correction about the solved level: the couplings
/// enter through the plain (metric-stripped) symmetric elements, whose
/// algebraic squares feed the standard second-order sum. Diagnostic only;
/// not added to reported energies.
inline FirstOrderCorrection first_order_correction(int n, const Epsilon& eps,
                                                   int k_max = -1,
                                                   const ScanRange& scan = {}) {
    if (k_max < 0) k_max = n + 12;
    const EnergyEstimate e0 = zeroth_energy(n, eps, scan);
    FirstOrderCorrection out;
    for (int k = 0; k <= k_max; ++k) {
        if (k == n) continue;
        const Complex a_nk = melem::sym_element(n, k, e0.params, eps);
        const Complex denom = e0.value - melem::h_diag(k, e0.params, eps);
        if (std::abs(denom) < 1e-6 * std::abs(e0.value)) {
            out.small_denominator_warning = true;
            continue;
        }
        out.delta += a_nk * a_nk / denom;
    }
    return out;
}

struct LevelFailure {
    int n = 0;
    std::string message;
};

struct SpectrumResult {
    std::vector<EnergyEstimate> levels;
    std::vector<LevelFailure> failures;
};

inline PairingScheme auto_scheme(double eps) {
    if (eps >= 0.0) return PairingScheme::Solo;
    if (eps > -1.0) return PairingScheme::StandardMix;
    return PairingScheme::OutlookMix;
}

namespace detail {

inline EnergyEstimate from_pair(const MixingPair& mp, bool upper,
                                double eps) {
    EnergyEstimate e;
    e.n = upper ? mp.n_hi : mp.n_lo;
    e.eps = eps;
    // assign the root closer to the matching diagonal when the pair is
    // still real; past the coalescence the roots form a conjugate pair
    // equidistant from either diagonal, so the order is conventional:
    // negative imaginary part first
    const double scale = std::abs(mp.e_plus) + std::abs(mp.e_minus);
    if (std::abs(mp.e_plus - std::conj(mp.e_minus)) <= 1e-10 * scale &&
        std::abs(mp.e_plus.imag()) > 1e-12 * scale) {
        const bool plus_lower = mp.e_plus.imag() < mp.e_minus.imag();
        e.value = (plus_lower != upper) ? mp.e_plus : mp.e_minus;
    } else {
        const Complex target = upper ? mp.h22 : mp.h11;
        const bool plus_closer =
            std::abs(mp.e_plus - target) <= std::abs(mp.e_minus - target);
        e.value = plus_closer ? mp.e_plus : mp.e_minus;
    }
    e.method = Method::mixed;
    e.params = mp.params;
    e.residual = std::abs(mp.discriminant.imag());
    return e;
}

} // namespace detail

/// Energies of the lowest n_levels levels under the given (or automatic)
/// pairing scheme, sorted by real part. Per-level failures are collected,
/// not fatal.
inline SpectrumResult spectrum(const Epsilon& eps, int n_levels,
                               PairingScheme scheme, bool use_auto = false,
                               const ScanRange& scan = {}) {
    if (n_levels < 1 || n_levels > 20)
        throw DomainError("spectrum: n_levels outside [1, 20]");
    if (use_auto) scheme = auto_scheme(eps.value);
    SpectrumResult out;
    auto try_solo = [&](int n) {
        try {
            out.levels.push_back(zeroth_energy(n, eps, scan));
        } catch (const Error& err) {
            out.failures.push_back({n, err.what()});
        }
    };
    auto try_pair = [&](int m, PairingScheme s) {
        const int lo = (s == PairingScheme::StandardMix) ? 2 * m + 1 : 2 * m;
        try {
            const MixingPair mp = mixed_pair(m, eps, s, scan);
            if (mp.n_lo < n_levels)
                out.levels.push_back(detail::from_pair(mp, false, eps.value));
            if (mp.n_hi < n_levels)
                out.levels.push_back(detail::from_pair(mp, true, eps.value));
        } catch (const Error& err) {
            out.failures.push_back({lo, err.what()});
        }
    };
    switch (scheme) {
        case PairingScheme::Solo:
            for (int n = 0; n < n_levels; ++n) try_solo(n);
            break;
        case PairingScheme::StandardMix:
            try_solo(0);
            for (int m = 0; 2 * m + 1 < n_levels; ++m)
                try_pair(m, PairingScheme::StandardMix);
            break;
        case PairingScheme::OutlookMix:
            for (int m = 0; 2 * m < n_levels; ++m)
                try_pair(m, PairingScheme::OutlookMix);
            break;
    }
    std::sort(out.levels.begin(), out.levels.end(),
              [](const EnergyEstimate& a, const EnergyEstimate& b) {
                  if (a.value.real() != b.value.real())
                      return a.value.real() < b.value.real();
                  return a.value.imag() < b.value.imag();
              });
    return out;
}

} // namespace ptspec::opmethod

#endif
