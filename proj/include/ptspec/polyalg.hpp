#ifndef PTSPEC_POLYALG_HPP
#define PTSPEC_POLYALG_HPP

#include <complex>
#include <vector>

#include "ptspec/errors.hpp"

namespace ptspec::polyalg {

using Complex = std::complex<double>;

// Polynomial with complex coefficients, coeffs[k] = coefficient of x^k.
// The leading coefficient is nonzero unless the polynomial is zero.
class ComplexPoly {
public:
    ComplexPoly() = default;
    explicit ComplexPoly(std::vector<Complex> coeffs) : c_(std::move(coeffs)) {
        trim();
    }

    const std::vector<Complex>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }

    Complex operator[](std::size_t k) const {
        return k < c_.size() ? c_[k] : Complex{0.0, 0.0};
    }

    Complex eval(Complex z) const {
        Complex acc{0.0, 0.0};
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * z + c_[i];
        return acc;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == Complex{0.0, 0.0}) c_.pop_back();
    }
    std::vector<Complex> c_;
};

inline constexpr int hermite_degree_cap = 200;

/// Physicists' Hermite polynomial H_n via H_{n+1} = 2x H_n - 2n H_{n-1}.
inline ComplexPoly hermite(int n) {
    if (n < 0) throw DomainError("hermite: negative index");
    if (n > hermite_degree_cap) throw DomainError("hermite: index above degree cap");
    std::vector<Complex> prev{Complex{1.0, 0.0}};
    if (n == 0) return ComplexPoly(prev);
    std::vector<Complex> cur{Complex{0.0, 0.0}, Complex{2.0, 0.0}};
    for (int m = 1; m < n; ++m) {
        std::vector<Complex> next(m + 2, Complex{0.0, 0.0});
        for (int j = 0; j <= m; ++j) next[j + 1] += 2.0 * cur[j];
        for (int j = 0; j <= m - 1; ++j) next[j] -= 2.0 * static_cast<double>(m) * prev[j];
        prev = std::move(cur);
        cur = std::move(next);
    }
    return ComplexPoly(cur);
}

inline ComplexPoly mul(const ComplexPoly& a, const ComplexPoly& b) {
    if (a.is_zero() || b.is_zero()) return ComplexPoly{};
    std::vector<Complex> r(a.degree() + b.degree() + 1, Complex{0.0, 0.0});
    for (int i = 0; i <= a.degree(); ++i)
        for (int j = 0; j <= b.degree(); ++j) r[i + j] += a[i] * b[j];
    return ComplexPoly(std::move(r));
}

/// Coefficients of q(x) = p(x + a), by Horner-style synthetic shifting.
inline ComplexPoly shift(const ComplexPoly& p, Complex a) {
    if (p.is_zero()) return ComplexPoly{};
    const int n = p.degree();
    std::vector<Complex> q(n + 1, Complex{0.0, 0.0});
    for (int i = n; i >= 0; --i) {
        // q <- q*(x + a) + p[i]
        for (int j = n; j >= 1; --j) q[j] = q[j - 1] + a * q[j];
        q[0] = a * q[0] + p[static_cast<std::size_t>(i)];
    }
    return ComplexPoly(std::move(q));
}

} // namespace ptspec::polyalg

#endif
