#pragma once

#include "lpkit/grid.hpp"
#include "lpkit/quadrature.hpp"

namespace lpkit {

struct SquareFnParams {
    double s = 0.0;
    double q = 2.0;
    double p = 2.0;
    double lambda = 2.0;
    QuadratureConfig quad{};
    double y_truncation = 1.0;  // spatial integrals cover this many periods; only one is supported

    void validate() const;
};

/// Size of the analytically added t-integral pieces, per operator call.
struct SquareFnDiagnostics {
    double head_max = 0.0;  // max over x of the (0, t_min) contribution to the q-th power
    double tail_max = 0.0;  // max over x of the (t_max, inf) contribution to the q-th power
    double body_max = 0.0;  // max over x of the quadrature body
};

/// (sum_{y != 0} |f(x+y) - f(x)|^q |y|^{-n-sq} h^n)^{1/q} over one periodic cell.
GridFunction d_sq(const GridFunction& f, double s, double q);

/// (int_0^inf t^{q-sq-1} |grad P(f; x, t)|^q dt)^{1/q}.
GridFunction g_sq(const GridFunction& f, double s, double q, const QuadratureConfig& quad,
                  SquareFnDiagnostics* diag = nullptr);

/// (int int (t / (t + |x-y|))^{lambda n} t^{q-n-1} |grad P(f; y, t)|^q dy dt)^{1/q}.
GridFunction big_g(const GridFunction& f, double lambda, double q, const QuadratureConfig& quad,
                   SquareFnDiagnostics* diag = nullptr);

/// (sum_{y != x} |x-y|^{-n-sq} (int_0^{2|x-y|} |d_t P(f; y, t)| t^s dt)^q h^n)^{1/q}.
GridFunction big_r(const GridFunction& f, double s, double q, const QuadratureConfig& quad,
                   SquareFnDiagnostics* diag = nullptr);

}  // namespace lpkit
