#ifndef PTSPEC_ANHARM_HPP
#define PTSPEC_ANHARM_HPP

#include <cmath>

#include <Eigen/Dense>

#include "ptspec/errors.hpp"

namespace ptspec::anharm {

/// Variational frequency for level n of the quartic oscillator
/// H = p^2/2 + x^2/2 + lambda x^4: the unique positive root of
/// omega^3 - omega - 2 lambda (2n+3) = 0, by safeguarded Newton.
inline double aho_omega(int n, double lambda) {
    if (n < 0) throw DomainError("aho_omega: negative level");
    if (lambda < 0.0) throw DomainError("aho_omega: negative coupling");
    const double c = 2.0 * lambda * (2.0 * n + 3.0);
    if (c == 0.0) return 1.0;
    double w = std::max(1.0, std::cbrt(c));
    for (int it = 0; it < 100; ++it) {
        const double f = w * w * w - w - c;
        const double df = 3.0 * w * w - 1.0;
        const double step = f / df;
        w -= step;
        if (w < 1.0) w = 1.0; // root is always >= 1 for lambda >= 0
        if (std::abs(step) < 1e-15 * w) break;
    }
    return w;
}

/// Diagonal element at the given frequency:
/// H_nn = (omega^2+1)(1+2n)/(4 omega) + 3 lambda (1+2n+2n^2)/(4 omega^2).
inline double aho_diag(int n, double omega, double lambda) {
    return (omega * omega + 1.0) * (1.0 + 2.0 * n) / (4.0 * omega) +
           3.0 * lambda * (1.0 + 2.0 * n + 2.0 * n * n) /
               (4.0 * omega * omega);
}

/// Zeroth-order energy: the diagonal element at the variational frequency.
inline double aho_energy(int n, double lambda) {
    return aho_diag(n, aho_omega(n, lambda), lambda);
}

/// Off-diagonal band elements (symmetric, nonzero only at |k-n| in {2,4}):
/// H_{n,n+2} = sqrt((n+1)(n+2))/4 [ (1-omega^2)/omega + 2 lambda (2n+3)/omega^2 ]
/// H_{n,n+4} = lambda/(4 omega^2) sqrt((n+4)!/n!)
inline double aho_offdiag(int n, int k, double omega, double lambda) {
    if (n > k) std::swap(n, k);
    if (n < 0) throw DomainError("aho_offdiag: negative level");
    if (k == n + 2) {
        return 0.25 * std::sqrt((n + 1.0) * (n + 2.0)) *
               ((1.0 - omega * omega) / omega +
                2.0 * lambda * (2.0 * n + 3.0) / (omega * omega));
    }
    if (k == n + 4) {
        const double ratio =
            (n + 1.0) * (n + 2.0) * (n + 3.0) * (n + 4.0);
        return lambda / (4.0 * omega * omega) * std::sqrt(ratio);
    }
    return 0.0;
}

/// Numerically exact level: eigenvalue n of the real symmetric band
/// matrix at a fixed basis frequency, with the basis doubled until the
/// level moves by less than 1e-6.
inline double aho_reference(int n, double lambda, int basis_size = 0) {
    if (n < 0) throw DomainError("aho_reference: negative level");
    if (basis_size <= 0) basis_size = 4 * n + 40;
    const double omega = aho_omega(0, lambda);
    auto level = [&](int N) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(N, N);
        for (int i = 0; i < N; ++i) {
            m(i, i) = aho_diag(i, omega, lambda);
            for (int d : {2, 4}) {
                if (i + d < N) {
                    const double v = aho_offdiag(i, i + d, omega, lambda);
                    m(i, i + d) = v;
                    m(i + d, i) = v;
                }
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m,
                                                          Eigen::EigenvaluesOnly);
        return es.eigenvalues()(n);
    };
    double prev = level(basis_size);
    for (int N = 2 * basis_size; N <= 16 * basis_size; N *= 2) {
        const double cur = level(N);
        if (std::abs(cur - prev) < 1e-6) return cur;
        prev = cur;
    }
    throw NonConvergenceError("aho_reference: basis doubling did not settle");
}

} // namespace ptspec::anharm

#endif
