#include "unb/math.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace unb {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2Pi = 0.3989422804014327;
constexpr double kTwoPi = 6.283185307179586;
}  // namespace

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

// Acklam's rational approximation followed by one Halley refinement step,
// accurate to ~1e-15 relative over (0,1).
double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p must be in (0,1)");

    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        double q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double e = normal_cdf(x) - p;
    double u = e / normal_pdf(x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

double normal_upper_quantile(double alpha) { return normal_quantile(1.0 - alpha); }

Quadrature gauss_legendre(int n, double lo, double hi) {
    if (n < 2) throw std::invalid_argument("gauss_legendre: need at least 2 nodes");
    Quadrature q;
    q.nodes.resize(n);
    q.weights.resize(n);
    const int m = (n + 1) / 2;
    const double xm = 0.5 * (hi + lo);
    const double xl = 0.5 * (hi - lo);
    for (int i = 0; i < m; ++i) {
        // Newton iteration from the Chebyshev-like initial guess.
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double z1 = z;
            z = z1 - p0 / pp;
            if (std::fabs(z - z1) < 1e-15) break;
        }
        q.nodes[i] = xm - xl * z;
        q.nodes[n - 1 - i] = xm + xl * z;
        q.weights[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
        q.weights[n - 1 - i] = q.weights[i];
    }
    return q;
}

// Integrates d(Phi2)/d(rho) from 0 to rho (Plackett's identity), so that
// Phi2(a,b;rho) = Phi(a)Phi(b) + integral. Accurate for |rho| <= 0.999.
double bivariate_normal_cdf(double a, double b, double rho) {
    if (rho < -1.0 || rho > 1.0) throw std::domain_error("bivariate_normal_cdf: |rho| > 1");
    if (rho == 0.0) return normal_cdf(a) * normal_cdf(b);
    if (rho >= 1.0) return normal_cdf(std::min(a, b));
    if (rho <= -1.0) return std::max(0.0, normal_cdf(a) + normal_cdf(b) - 1.0);

    double total = 0.0;
    const int segments = 4;
    static const Quadrature base = gauss_legendre(32, 0.0, 1.0);
    for (int s = 0; s < segments; ++s) {
        double t0 = rho * s / segments;
        double t1 = rho * (s + 1) / segments;
        for (std::size_t i = 0; i < base.nodes.size(); ++i) {
            double t = t0 + (t1 - t0) * base.nodes[i];
            double w = (t1 - t0) * base.weights[i];
            double om = 1.0 - t * t;
            total += w * std::exp(-(a * a - 2.0 * t * a * b + b * b) / (2.0 * om)) /
                     (kTwoPi * std::sqrt(om));
        }
    }
    double value = normal_cdf(a) * normal_cdf(b) + total;
    return std::clamp(value, 0.0, 1.0);
}

double bivariate_normal_survival(double a, double b, double rho) {
    double v = 1.0 - normal_cdf(a) - normal_cdf(b) + bivariate_normal_cdf(a, b, rho);
    return std::clamp(v, 0.0, 1.0);
}

double regression_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("regression_slope: need matching vectors of size >= 2");
    double mx = mean_of(x), my = mean_of(y);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw std::invalid_argument("regression_slope: degenerate x");
    return sxy / sxx;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double variance_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median_of: empty");
    std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    std::nth_element(v.begin(), v.begin() + mid - 1, v.end());
    return 0.5 * (hi + v[mid - 1]);
}

double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("pearson_correlation: need matching vectors of size >= 2");
    double mx = mean_of(x), my = mean_of(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace unb
