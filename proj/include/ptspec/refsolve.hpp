#ifndef PTSPEC_REFSOLVE_HPP
#define PTSPEC_REFSOLVE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ptspec/errors.hpp"
#include "ptspec/melem.hpp"
#include "ptspec/opmethod.hpp"
#include "ptspec/quadrature.hpp"
#include "ptspec/specfun.hpp"

namespace ptspec::refsolve {

using Complex = std::complex<double>;
using melem::BasisParams;
using melem::Epsilon;

// Spectrum of one dense diagonalization: eigenvalues sorted by real
// part, with backward-error estimates for the lowest eigenpairs.
struct DenseSpectrum {
    int basis_size = 0;
    BasisParams params{};
    std::vector<Complex> eigenvalues;
    std::vector<double> residual_norms;
    double matrix_norm = 0.0;
};

namespace detail {

using CL = std::complex<long double>;
using MatL = Eigen::Matrix<CL, Eigen::Dynamic, Eigen::Dynamic>;

// (i x)^nu on the principal branch in extended precision
inline CL branch_power_l(long double x, long double nu) {
    if (x == 0.0L) return nu > 0.0L ? CL{0.0L, 0.0L} : CL{1.0L, 0.0L};
    const long double mag = std::pow(std::abs(x), nu);
    const long double phase = nu * std::numbers::pi_v<long double> / 2.0L *
                              (x > 0.0L ? 1.0L : -1.0L);
    return std::polar(mag, phase);
}

// Extended-precision assembly of the basis matrix. The entries grow
// exponentially with ushift * sqrt(N); assembling in double would seed
// the (highly non-normal) eigenproblem with perturbations that swamp
// the low physical levels at large N.
inline MatL build_matrix_l(const Epsilon& eps, const BasisParams& p, int N) {
    if (N < 1 || N > 600) throw DomainError("build_matrix: N outside [1, 600]");
    const double X = std::sqrt(2.0 * N + 1.0) + 10.0;
    const quadrature::Grid grid = quadrature::symmetric_graded_grid(X);
    const int M = static_cast<int>(grid.x.size());

    // phi_n(t) = pi^{-1/4} e^{-z^2/2} H_n(z)/sqrt(2^n n!) at z = t + i u~
    MatL phi(N, M);
    const long double pref =
        std::pow(std::numbers::pi_v<long double>, -0.25L);
    const long double u = p.ushift;
    for (int m = 0; m < M; ++m) {
        const CL z{static_cast<long double>(grid.x[m]), u};
        CL h0 = pref * std::exp(-z * z / 2.0L);
        phi(0, m) = h0;
        if (N > 1) {
            CL h1 = z * std::sqrt(2.0L) * h0;
            phi(1, m) = h1;
            for (int n = 1; n + 1 < N; ++n) {
                const CL h2 =
                    z * std::sqrt(2.0L / (n + 1.0L)) * h1 -
                    std::sqrt(static_cast<long double>(n) / (n + 1.0L)) * h0;
                phi(n + 1, m) = h2;
                h0 = h1;
                h1 = h2;
            }
        }
    }
    Eigen::Vector<CL, Eigen::Dynamic> fw(M);
    const long double nu = static_cast<long double>(eps.value) + 2.0L;
    for (int m = 0; m < M; ++m)
        fw(m) = static_cast<long double>(grid.w[m]) *
                branch_power_l(grid.x[m], nu);

    const long double om = p.omega;
    const CL wfac{std::pow(om, -nu / 2.0L), 0.0L};
    MatL a = -wfac * (phi * fw.asDiagonal() * phi.transpose());
    for (int n = 0; n < N; ++n) {
        a(n, n) += om * (2.0L * n + 1.0L) / 2.0L;
        if (n + 2 < N) {
            const long double t =
                -om / 2.0L * std::sqrt((n + 1.0L) * (n + 2.0L));
            a(n, n + 2) += t;
            a(n + 2, n) += t;
        }
    }
    return a;
}

// One extended-precision eigensolve with a stable sorted view; keeps
// the eigenvectors so residuals of arbitrary sorted positions can be
// queried (the physical levels need not be the lowest by real part).
class DenseSolveL {
public:
    explicit DenseSolveL(MatL m) : m_(std::move(m)), es_(m_, true) {
        if (es_.info() != Eigen::Success)
            throw NonConvergenceError("eigen_dense: QR iteration failed");
        const int n = static_cast<int>(m_.rows());
        order_.resize(n);
        for (int i = 0; i < n; ++i) order_[i] = i;
        std::sort(order_.begin(), order_.end(), [&](int a, int b) {
            const CL ea = es_.eigenvalues()(a), eb = es_.eigenvalues()(b);
            // conjugate pairs have real parts equal only to roundoff;
            // fuzzy comparison lets the imaginary tie-break order them
            const long double tol =
                1e-9L * (1.0L + std::abs(ea.real()) + std::abs(eb.real()));
            if (std::abs(ea.real() - eb.real()) > tol)
                return ea.real() < eb.real();
            return ea.imag() < eb.imag();
        });
    }

    int size() const { return static_cast<int>(order_.size()); }
    Complex value(int i) const {
        const CL e = es_.eigenvalues()(order_[i]);
        return {static_cast<double>(e.real()), static_cast<double>(e.imag())};
    }
    double residual(int i) const {
        const int idx = order_[i];
        const auto v = es_.eigenvectors().col(idx);
        return static_cast<double>(
            (m_ * v - es_.eigenvalues()(idx) * v).norm() / v.norm());
    }
    double norm() const { return static_cast<double>(m_.norm()); }

private:
    MatL m_;
    Eigen::ComplexEigenSolver<MatL> es_;
    std::vector<int> order_;
};

} // namespace detail

/// Fixed-basis matrix of the eigenproblem at shared (omega, ushift): the
/// complex symmetric matrix whose (j,k) entry carries the kinetic
/// tridiagonal (stride 2) plus the potential bilinear form. The
/// alternating PT metric is already absorbed: eigenvalues of this plain
/// matrix are the spectrum. The potential block is evaluated on one
/// shared graded quadrature grid via the stable normalized-oscillator
/// recurrence, not per-entry polynomial reduction, so N up to several
/// hundred stays tractable.
inline Eigen::MatrixXcd build_matrix(const Epsilon& eps,
                                     const BasisParams& p, int N) {
    return detail::build_matrix_l(eps, p, N).cast<Complex>();
}

/// All eigenvalues of a dense complex matrix, sorted by real part, with
/// residual norms ||Mv - lambda v||/||v|| for the lowest eigenpairs.
/// The solve runs in extended precision: the basis matrix entries grow
/// exponentially with N and double-precision QR loses the low spectrum.
inline DenseSpectrum eigen_dense(const Eigen::MatrixXcd& m,
                                 int residual_count = 12) {
    if (m.rows() != m.cols()) throw DomainError("eigen_dense: matrix not square");
    if (!m.allFinite()) throw DomainError("eigen_dense: non-finite entries");
    const detail::DenseSolveL s(m.cast<detail::CL>());
    DenseSpectrum out;
    out.basis_size = s.size();
    out.matrix_norm = m.norm();
    out.eigenvalues.reserve(s.size());
    for (int i = 0; i < s.size(); ++i) out.eigenvalues.push_back(s.value(i));
    const int rc = std::min(residual_count, s.size());
    for (int i = 0; i < rc; ++i) out.residual_norms.push_back(s.residual(i));
    return out;
}

namespace detail {

inline BasisParams default_params(const Epsilon& eps) {
    // moderate variational parameters keep the basis matrix conditioned;
    // the spectrum itself does not depend on the choice
    try {
        return opmethod::zeroth_energy(0, eps).params;
    } catch (const Error&) {
        auto [p, res] = opmethod::detail::solve_row(1, eps, {});
        (void)res;
        return p;
    }
}

} // namespace detail

/// Eigenvalues stable under doubling the basis: run at N and 2N, keep
/// levels whose nearest match moves less than tol and whose residual is
/// small. Sorted by real part; conjugate pairs appear as two entries.
inline std::vector<Complex> converged_levels(
    const Epsilon& eps, int n_levels, double tol = 1e-4, int N = 150,
    const BasisParams* params = nullptr) {
    if (n_levels < 1) throw DomainError("converged_levels: n_levels < 1");
    const BasisParams p = params ? *params : detail::default_params(eps);
    const detail::DenseSolveL s1(detail::build_matrix_l(eps, p, N));
    const detail::DenseSolveL s2(detail::build_matrix_l(eps, p, 2 * N));
    const double norm2 = s2.norm();

    // The truncated matrix is not bounded below in real part: besides
    // the physical levels it carries a cloud of spurious eigenvalues
    // that moves wildly with N. Identify physical levels by stability
    // under the doubling (nearest-match within tol), guarded by a local
    // spacing threshold so cloud members cannot pair up by accident.
    std::vector<Complex> out;
    for (int i = 0; i < s2.size() && static_cast<int>(out.size()) < n_levels;
         ++i) {
        const Complex e2 = s2.value(i);
        double best = std::numeric_limits<double>::infinity();
        int jbest = 0;
        for (int j = 0; j < s1.size(); ++j) {
            const double d = std::abs(s1.value(j) - e2);
            if (d < best) {
                best = d;
                jbest = j;
            }
        }
        if (best >= tol) continue;
        // distance to the nearest other eigenvalue, not counting the
        // conjugate partner (which legitimately comes arbitrarily close
        // at a coalescence)
        double spacing = std::numeric_limits<double>::infinity();
        const Complex cj = std::conj(e2);
        for (int j = 0; j < s2.size(); ++j) {
            if (j == i) continue;
            const Complex ej = s2.value(j);
            if (std::abs(ej - cj) < 1e-6 * (1.0 + std::abs(e2))) continue;
            spacing = std::min(spacing, std::abs(ej - e2));
        }
        if (best >= 0.3 * spacing) continue;
        if (s2.residual(i) > 1e-8 * std::max(1.0, norm2)) continue;
        // report the smaller-basis value: the doubled run certifies it
        // to tol, and carries the larger roundoff amplification of the
        // two (the basis matrix norm grows exponentially with N)
        out.push_back(s1.value(jbest));
    }
    if (static_cast<int>(out.size()) < n_levels)
        throw NonConvergenceError(
            "converged_levels: only " + std::to_string(out.size()) + " of " +
            std::to_string(n_levels) + " levels stable under basis doubling");
    return out;
}

namespace detail {

// Solve (T - sigma) x = b for complex tridiagonal T given by (dl, d, du),
// with partial pivoting (fill widens the upper band to 2).
class ShiftedTridiagSolver {
public:
    ShiftedTridiagSolver(const std::vector<Complex>& dl,
                         const std::vector<Complex>& d,
                         const std::vector<Complex>& du, Complex sigma) {
        const int n = static_cast<int>(d.size());
        n_ = n;
        a_.assign(n, Complex{0, 0});
        b_.assign(n, Complex{0, 0});
        c_.assign(n, Complex{0, 0});
        low_.assign(n, Complex{0, 0});
        swapped_.assign(n, 0);
        for (int i = 0; i < n; ++i) b_[i] = d[i] - sigma;
        for (int i = 0; i + 1 < n; ++i) {
            c_[i] = du[i];
            a_[i + 1] = dl[i];
        }
        // LU with partial pivoting on the tridiagonal
        for (int i = 0; i + 1 < n; ++i) {
            if (std::abs(a_[i + 1]) > std::abs(b_[i])) {
                std::swap(b_[i], a_[i + 1]);
                std::swap(c_[i], b_[i + 1]);
                // second superdiagonal fill from the swapped row
                std::swap(fill2(i), c_[i + 1]);
                swapped_[i] = 1;
            }
            if (b_[i] == Complex{0, 0})
                throw NonConvergenceError("tridiag solve: zero pivot");
            const Complex l = a_[i + 1] / b_[i];
            low_[i + 1] = l;
            b_[i + 1] -= l * c_[i];
            c_[i + 1] -= l * fill2(i);
        }
    }

    std::vector<Complex> solve(std::vector<Complex> x) const {
        const int n = n_;
        for (int i = 0; i + 1 < n; ++i) {
            if (swapped_[i]) std::swap(x[i], x[i + 1]);
            x[i + 1] -= low_[i + 1] * x[i];
        }
        for (int i = n - 1; i >= 0; --i) {
            Complex s = x[i];
            if (i + 1 < n) s -= c_[i] * x[i + 1];
            if (i + 2 < n) s -= fill2_c(i) * x[i + 2];
            x[i] = s / b_[i];
        }
        return x;
    }

private:
    Complex& fill2(int i) {
        if (f2_.size() != static_cast<std::size_t>(n_))
            f2_.assign(n_, Complex{0, 0});
        return f2_[i];
    }
    Complex fill2_c(int i) const {
        return f2_.empty() ? Complex{0, 0} : f2_[i];
    }
    int n_ = 0;
    std::vector<Complex> a_, b_, c_, low_;
    std::vector<Complex> f2_;
    std::vector<char> swapped_;
};

// One finite-difference eigenvalue near the seed, by fixed-shift inverse
// iteration on the complex tridiagonal discretization.
inline Complex fd_eigen_near(const Epsilon& eps, double L, int N,
                             Complex seed) {
    const double h = 2.0 * L / (N + 1);
    std::vector<Complex> d(N), off(N - 1, Complex{-1.0 / (h * h), 0.0});
    for (int j = 0; j < N; ++j) {
        const double x = -L + (j + 1) * h;
        d[j] = 2.0 / (h * h) -
               specfun::branch_power(x, eps.value + 2.0);
    }
    const ShiftedTridiagSolver lu(off, d, off, seed);
    std::vector<Complex> v(N);
    for (int j = 0; j < N; ++j) v[j] = Complex{1.0, 0.3} / (1.0 + j % 7);
    Complex lambda = seed;
    for (int it = 0; it < 60; ++it) {
        v = lu.solve(std::move(v));
        long double nrm = 0.0;
        for (const Complex& z : v) nrm += std::norm(z);
        const double inv = 1.0 / std::sqrt(static_cast<double>(nrm));
        for (Complex& z : v) z *= inv;
        // Rayleigh quotient of the tridiagonal at the normalized vector
        Complex num{0, 0};
        for (int j = 0; j < N; ++j) {
            Complex tv = d[j] * v[j];
            if (j > 0) tv += off[j - 1] * v[j - 1];
            if (j + 1 < N) tv += off[j] * v[j + 1];
            num += std::conj(v[j]) * tv;
        }
        if (std::abs(num - lambda) < 1e-13 * (1.0 + std::abs(num)))
            return num;
        lambda = num;
    }
    return lambda;
}

} // namespace detail

/// Independent real-line cross-check for -1 < eps < 2: central
/// differences with Dirichlet ends, seeds from a coarse dense solve,
/// then inverse iteration at N and 2N with Richardson extrapolation of
/// the O(h^2) error.
inline std::vector<Complex> fd_check(const Epsilon& eps, double L = 14.0,
                                     int N = 2000, int n_levels = 9) {
    if (!(eps.value > -1.0 && eps.value < 2.0))
        throw DomainError("fd_check: valid only for -1 < eps < 2");
    if (n_levels < 1) throw DomainError("fd_check: n_levels < 1");
    // coarse dense solve for seed values
    const int Nc = 300;
    const double hc = 2.0 * L / (Nc + 1);
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(Nc, Nc);
    for (int j = 0; j < Nc; ++j) {
        const double x = -L + (j + 1) * hc;
        t(j, j) = 2.0 / (hc * hc) -
                  specfun::branch_power(x, eps.value + 2.0);
        if (j + 1 < Nc) {
            t(j, j + 1) = -1.0 / (hc * hc);
            t(j + 1, j) = -1.0 / (hc * hc);
        }
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(t, false);
    if (es.info() != Eigen::Success)
        throw NonConvergenceError("fd_check: coarse eigensolve failed");
    std::vector<Complex> seeds;
    for (int i = 0; i < Nc; ++i) seeds.push_back(es.eigenvalues()(i));
    std::sort(seeds.begin(), seeds.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    seeds.resize(std::min<std::size_t>(seeds.size(), n_levels));

    std::vector<Complex> out;
    for (const Complex& s : seeds) {
        const Complex e1 = detail::fd_eigen_near(eps, L, N, s);
        const Complex e2 = detail::fd_eigen_near(eps, L, 2 * N, e1);
        out.push_back((4.0 * e2 - e1) / 3.0);
    }
    std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return out;
}

} // namespace ptspec::refsolve

#endif
