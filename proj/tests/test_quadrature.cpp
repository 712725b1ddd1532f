#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "ptspec/quadrature.hpp"

using namespace ptspec;
using Complex = std::complex<double>;

TEST_CASE("gaussian integral") {
    auto f = [](double x) { return Complex{std::exp(-x * x), 0.0}; };
    const Complex v = quadrature::integrate(f, -12.0, 12.0, 1e-12);
    CHECK(v.real() == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));
    CHECK(std::abs(v.imag()) < 1e-14);
}

TEST_CASE("oscillatory complex integrand") {
    // int_0^1 e^{i a x} dx = (e^{ia} - 1)/(ia)
    const double a = 37.0;
    auto f = [&](double x) { return std::polar(1.0, a * x); };
    const Complex v = quadrature::integrate(f, 0.0, 1.0, 1e-12);
    const Complex exact =
        (std::polar(1.0, a) - Complex{1.0, 0.0}) / Complex{0.0, a};
    CHECK(std::abs(v - exact) < 1e-11);
}

TEST_CASE("tolerance failure carries achieved error") {
    // |x|^{-1/2} kink is integrable but slow; starve the panel budget
    auto f = [](double x) {
        return Complex{1.0 / std::sqrt(std::abs(x) + 1e-300), 0.0};
    };
    try {
        quadrature::integrate(f, -1.0, 1.0, 1e-14, 8);
        FAIL("expected ToleranceError");
    } catch (const ToleranceError& e) {
        CHECK(e.achieved_error > 1e-14);
    }
}

TEST_CASE("graded grid integrates a kinked power") {
    // int_{-X}^{X} |x|^{0.1} e^{-x^2} dx = Gamma(0.55)
    const quadrature::Grid g = quadrature::symmetric_graded_grid(12.0);
    double s = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i)
        s += g.w[i] * std::pow(std::abs(g.x[i]), 0.1) *
             std::exp(-g.x[i] * g.x[i]);
    CHECK(s == doctest::Approx(std::tgamma(0.55)).epsilon(1e-8));
}

TEST_CASE("graded grid weights sum to interval length") {
    const quadrature::Grid g = quadrature::symmetric_graded_grid(5.0);
    double s = 0.0;
    for (double w : g.w) s += w;
    CHECK(s == doctest::Approx(10.0).epsilon(1e-13));
}
