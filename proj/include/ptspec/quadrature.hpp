#ifndef PTSPEC_QUADRATURE_HPP
#define PTSPEC_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "ptspec/errors.hpp"

namespace ptspec::quadrature {

using Complex = std::complex<double>;

namespace detail {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1].
inline constexpr std::array<double, 15> kronrod_x = {
    -0.991455371120812639206854697526329,
    -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926,
    -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730,
    -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245,
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};

inline constexpr std::array<double, 15> kronrod_w = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};

// Embedded 7-point Gauss weights (on the odd Kronrod nodes).
inline constexpr std::array<double, 7> gauss_w = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082};

struct PanelResult {
    Complex integral;
    double error;
};

template <typename F>
PanelResult gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    Complex k{0.0, 0.0}, g{0.0, 0.0};
    for (int i = 0; i < 15; ++i) {
        const Complex v = f(c + h * kronrod_x[i]);
        k += kronrod_w[i] * v;
        if (i % 2 == 1) g += gauss_w[i / 2] * v;
    }
    k *= h;
    g *= h;
    return {k, std::abs(k - g)};
}

} // namespace detail

// Adaptive Gauss-Kronrod integration of a complex-valued function over
// [a, b] to the given absolute tolerance. Throws ToleranceError with the
// achieved error when the panel budget is exhausted.
template <typename F>
Complex integrate(const F& f, double a, double b, double abs_tol,
                  int max_panels = 4000) {
    struct Panel {
        double a, b;
        Complex val;
        double err;
    };
    auto first = detail::gk15(f, a, b);
    std::vector<Panel> panels{{a, b, first.integral, first.error}};
    int evals = 1;
    while (evals < max_panels) {
        double total_err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            total_err += panels[i].err;
            if (panels[i].err > panels[worst].err) worst = i;
        }
        if (total_err <= abs_tol) break;
        Panel p = panels[worst];
        const double mid = 0.5 * (p.a + p.b);
        if (mid <= p.a || mid >= p.b) break; // interval exhausted
        auto left = detail::gk15(f, p.a, mid);
        auto right = detail::gk15(f, mid, p.b);
        panels[worst] = {p.a, mid, left.integral, left.error};
        panels.push_back({mid, p.b, right.integral, right.error});
        evals += 2;
    }
    Complex sum{0.0, 0.0};
    double err = 0.0;
    for (const auto& p : panels) {
        sum += p.val;
        err += p.err;
    }
    if (err > abs_tol)
        throw ToleranceError("adaptive quadrature: tolerance not met", err);
    return sum;
}

// Fixed composite 16-point Gauss-Legendre grid on [-X, X], graded
// geometrically near the origin to absorb |x|^nu kinks. Used for the
// vectorized basis-matrix builder where one shared grid serves all entries.
struct Grid {
    std::vector<double> x;
    std::vector<double> w;
};

namespace detail {

inline const std::array<double, 16>& gl16_x() {
    static const std::array<double, 16> x = {
        -0.989400934991649932596154173450,
        -0.944575023073232576077988415535,
        -0.865631202387831743880467897712,
        -0.755404408355003033895101194847,
        -0.617876244402643748446671764049,
        -0.458016777657227386342419442984,
        -0.281603550779258913230460501460,
        -0.095012509837637440185319335425,
        0.095012509837637440185319335425,
        0.281603550779258913230460501460,
        0.458016777657227386342419442984,
        0.617876244402643748446671764049,
        0.755404408355003033895101194847,
        0.865631202387831743880467897712,
        0.944575023073232576077988415535,
        0.989400934991649932596154173450};
    return x;
}

inline const std::array<double, 16>& gl16_w() {
    static const std::array<double, 16> w = {
        0.027152459411754094851780572456,
        0.062253523938647892862843836994,
        0.095158511682492784809925107602,
        0.124628971255533872052476282192,
        0.149595988816576732081501730547,
        0.169156519395002538189312079030,
        0.182603415044923588866763667969,
        0.189450610455068496285396723208,
        0.189450610455068496285396723208,
        0.182603415044923588866763667969,
        0.169156519395002538189312079030,
        0.149595988816576732081501730547,
        0.124628971255533872052476282192,
        0.095158511682492784809925107602,
        0.062253523938647892862843836994,
        0.027152459411754094851780572456};
    return w;
}

} // namespace detail

inline Grid symmetric_graded_grid(double X, double panel_width = 0.2) {
    std::vector<double> edges{0.0};
    for (double e = 1e-4; e < panel_width; e *= 2.0) edges.push_back(e);
    for (double e = edges.back(); e < X;) {
        e = std::min(X, e + panel_width);
        edges.push_back(e);
    }
    Grid g;
    const auto& gx = detail::gl16_x();
    const auto& gw = detail::gl16_w();
    // positive half first, then mirror
    std::vector<double> px, pw;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double c = 0.5 * (edges[i] + edges[i + 1]);
        const double h = 0.5 * (edges[i + 1] - edges[i]);
        for (int j = 0; j < 16; ++j) {
            px.push_back(c + h * gx[j]);
            pw.push_back(h * gw[j]);
        }
    }
    g.x.reserve(2 * px.size());
    g.w.reserve(2 * px.size());
    for (std::size_t i = px.size(); i-- > 0;) {
        g.x.push_back(-px[i]);
        g.w.push_back(pw[i]);
    }
    g.x.insert(g.x.end(), px.begin(), px.end());
    g.w.insert(g.w.end(), pw.begin(), pw.end());
    return g;
}

} // namespace ptspec::quadrature

#endif
