#pragma once

#include <span>
#include <vector>

#include "decdyn/model.hpp"

namespace decdyn {

// Result of an ordinary least-squares polynomial fit of p against x.
// Coefficients are ordered highest power first (degree 1: slope then
// intercept, the P1/P2 of the reference tables). r_squared_percent is
// 100 * (1 - ss_res/ss_tot); it can be negative for fits worse than the
// constant mean and is never clamped.
struct PolynomialFit {
    int degree = 1;
    std::vector<double> coefficients;
    double r_squared_percent = 0.0;
    double ss_res = 0.0;
    double ss_tot = 0.0;
    int n_points = 0;
};

// Fits a polynomial of the given degree by least squares.
//
// The solve runs on a Householder QR factorization of the Vandermonde system
// with x shifted by its mean and scaled by its max absolute deviation, which
// keeps the system well conditioned at currency-scale x; the coefficients are
// mapped back to the raw-x basis for reporting.
//
// Requires degree >= 1, at least degree+1 points and degree+1 distinct x
// values. Throws FitError: "DegreeTooHigh" (too few points), "RankDeficient"
// (too few distinct x), "DegenerateVariance" (constant p that the solution
// somehow fails to reproduce; impossible for valid plot sets), and
// "InvalidDegree" for degree < 1.
PolynomialFit fit(std::span<const PlotPoint> points, int degree);

// Horner evaluation of the fitted polynomial at x.
double evaluate(const PolynomialFit& fit, double x);
double evaluate(std::span<const double> coefficients_high_first, double x);

// Coefficient of determination, in percent, of `fit` against `points`:
// 100 * (1 - sum((p - poly(x))^2) / sum((p - mean(p))^2)). Returns 100 when
// both sums vanish; throws FitError "DegenerateVariance" when ss_tot == 0
// but ss_res > 0.
double r_squared(std::span<const PlotPoint> points, const PolynomialFit& fit);

}  // namespace decdyn
