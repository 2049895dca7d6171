#include "decdyn/polyfit.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace decdyn {

namespace {

std::size_t distinct_x_count(std::span<const PlotPoint> points) {
    std::vector<double> xs;
    xs.reserve(points.size());
    for (const auto& pt : points) xs.push_back(pt.x);
    std::sort(xs.begin(), xs.end());
    return static_cast<std::size_t>(std::unique(xs.begin(), xs.end()) - xs.begin());
}

// Least-squares solve of V c = y, V[i][j] = z[i]^j, via in-place Householder
// QR. Column-major storage; reflector vectors overwrite the lower triangle,
// R's diagonal lives in `diag`. Returns coefficients lowest power first.
std::vector<double> solve_vandermonde_ls(const std::vector<double>& z, std::vector<double> y,
                                         std::size_t m) {
    const std::size_t n = z.size();
    std::vector<double> a(n * m);
    for (std::size_t i = 0; i < n; ++i) a[i] = 1.0;
    for (std::size_t j = 1; j < m; ++j) {
        for (std::size_t i = 0; i < n; ++i) a[j * n + i] = a[(j - 1) * n + i] * z[i];
    }

    std::vector<double> diag(m);
    for (std::size_t k = 0; k < m; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < n; ++i) norm += a[k * n + i] * a[k * n + i];
        norm = std::sqrt(norm);
        if (norm == 0.0) {
            throw FitError("RankDeficient", "design matrix column " + std::to_string(k) +
                                                " is numerically zero");
        }
        const double alpha = a[k * n + k] > 0.0 ? -norm : norm;
        diag[k] = alpha;
        a[k * n + k] -= alpha;

        double vtv = 0.0;
        for (std::size_t i = k; i < n; ++i) vtv += a[k * n + i] * a[k * n + i];
        if (vtv == 0.0) continue;  // x was already +/- norm * e1

        for (std::size_t j = k + 1; j < m; ++j) {
            double dot = 0.0;
            for (std::size_t i = k; i < n; ++i) dot += a[k * n + i] * a[j * n + i];
            const double f = 2.0 * dot / vtv;
            for (std::size_t i = k; i < n; ++i) a[j * n + i] -= f * a[k * n + i];
        }
        double dot = 0.0;
        for (std::size_t i = k; i < n; ++i) dot += a[k * n + i] * y[i];
        const double f = 2.0 * dot / vtv;
        for (std::size_t i = k; i < n; ++i) y[i] -= f * a[k * n + i];
    }

    std::vector<double> coef(m);
    for (std::size_t k = m; k-- > 0;) {
        double acc = y[k];
        for (std::size_t j = k + 1; j < m; ++j) acc -= a[j * n + k] * coef[j];
        coef[k] = acc / diag[k];
    }
    return coef;
}

// Rewrites c(z) with z = (x - shift) / scale as a polynomial in raw x, by
// Horner composition with the affine map. Lowest power first in and out.
std::vector<double> compose_affine(const std::vector<double>& c, double shift, double scale) {
    const double t = 1.0 / scale;
    const double u = -shift / scale;
    std::vector<double> acc{c.back()};
    for (std::size_t k = c.size() - 1; k-- > 0;) {
        std::vector<double> next(acc.size() + 1, 0.0);
        for (std::size_t i = 0; i < acc.size(); ++i) {
            next[i] += u * acc[i];
            next[i + 1] += t * acc[i];
        }
        next[0] += c[k];
        acc = std::move(next);
    }
    return acc;
}

bool all_p_equal(std::span<const PlotPoint> points) {
    return std::all_of(points.begin(), points.end(),
                       [&](const PlotPoint& pt) { return pt.p == points.front().p; });
}

double residual_tolerance(std::size_t n, double p0) {
    return 1e-12 * static_cast<double>(n) * (1.0 + p0 * p0);
}

}  // namespace

PolynomialFit fit(std::span<const PlotPoint> points, int degree) {
    if (degree < 1) {
        throw FitError("InvalidDegree", "degree must be >= 1, got " + std::to_string(degree));
    }
    const std::size_t n = points.size();
    const std::size_t m = static_cast<std::size_t>(degree) + 1;
    if (n < m) {
        throw FitError("DegreeTooHigh", "degree " + std::to_string(degree) + " needs at least " +
                                            std::to_string(m) + " points, got " +
                                            std::to_string(n));
    }
    if (distinct_x_count(points) < m) {
        throw FitError("RankDeficient", "degree " + std::to_string(degree) + " needs at least " +
                                            std::to_string(m) + " distinct x values");
    }

    double mean_x = 0.0;
    for (const auto& pt : points) mean_x += pt.x;
    mean_x /= static_cast<double>(n);
    double scale = 0.0;
    for (const auto& pt : points) scale = std::max(scale, std::abs(pt.x - mean_x));
    // scale > 0: at least two distinct x values exist.

    std::vector<double> z(n), p(n);
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = (points[i].x - mean_x) / scale;
        p[i] = points[i].p;
    }

    const std::vector<double> c = solve_vandermonde_ls(z, p, m);

    // Residuals evaluated in the scaled basis, where the system is
    // well conditioned.
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double yhat = c[m - 1];
        for (std::size_t k = m - 1; k-- > 0;) yhat = yhat * z[i] + c[k];
        const double r = p[i] - yhat;
        ss_res += r * r;
    }

    double p_mean = 0.0;
    for (double v : p) p_mean += v;
    p_mean /= static_cast<double>(n);

    PolynomialFit out;
    out.degree = degree;
    out.n_points = static_cast<int>(n);
    out.ss_res = ss_res;

    if (all_p_equal(points)) {
        out.ss_tot = 0.0;
        if (ss_res > residual_tolerance(n, p[0])) {
            throw FitError("DegenerateVariance",
                           "constant p with nonzero residual sum " + std::to_string(ss_res));
        }
        out.r_squared_percent = 100.0;
    } else {
        double ss_tot = 0.0;
        for (double v : p) ss_tot += (v - p_mean) * (v - p_mean);
        out.ss_tot = ss_tot;
        out.r_squared_percent = 100.0 * (1.0 - ss_res / ss_tot);
    }

    out.coefficients = compose_affine(c, mean_x, scale);
    std::reverse(out.coefficients.begin(), out.coefficients.end());
    return out;
}

double evaluate(std::span<const double> coefficients_high_first, double x) {
    double acc = 0.0;
    for (double c : coefficients_high_first) acc = acc * x + c;
    return acc;
}

double evaluate(const PolynomialFit& fit, double x) {
    return evaluate(std::span<const double>(fit.coefficients), x);
}

double r_squared(std::span<const PlotPoint> points, const PolynomialFit& fit) {
    if (points.empty()) {
        throw FitError("DegenerateVariance", "cannot compute R^2 of an empty point set");
    }
    double ss_res = 0.0;
    for (const auto& pt : points) {
        const double r = pt.p - evaluate(fit, pt.x);
        ss_res += r * r;
    }
    if (all_p_equal(points)) {
        if (ss_res > residual_tolerance(points.size(), points.front().p)) {
            throw FitError("DegenerateVariance",
                           "constant p with nonzero residual sum " + std::to_string(ss_res));
        }
        return 100.0;
    }
    double p_mean = 0.0;
    for (const auto& pt : points) p_mean += pt.p;
    p_mean /= static_cast<double>(points.size());
    double ss_tot = 0.0;
    for (const auto& pt : points) ss_tot += (pt.p - p_mean) * (pt.p - p_mean);
    return 100.0 * (1.0 - ss_res / ss_tot);
}

}  // namespace decdyn
