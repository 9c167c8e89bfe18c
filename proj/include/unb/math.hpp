#pragma once

#include <cstddef>
#include <vector>

namespace unb {

double normal_pdf(double x);
double normal_cdf(double x);

/// Upper-alpha quantile helper: upper_quantile(a) = normal_quantile(1 - a).
double normal_quantile(double p);
double normal_upper_quantile(double alpha);

/// P(Z1 <= a, Z2 <= b) for standard bivariate normal with correlation rho.
double bivariate_normal_cdf(double a, double b, double rho);

/// P(Z1 > a, Z2 > b) under the same law.
double bivariate_normal_survival(double a, double b, double rho);

/// Nodes and weights for n-point Gauss-Legendre quadrature on [lo, hi].
struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
};
Quadrature gauss_legendre(int n, double lo, double hi);

/// Dense symmetric matrix, row-major, fixed square size.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), a_(n * n, fill) {}
    double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    std::size_t size() const { return n_; }

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

/// Least-squares slope of y against x.
double regression_slope(const std::vector<double>& x, const std::vector<double>& y);

double mean_of(const std::vector<double>& v);
double variance_of(const std::vector<double>& v);  // population (divide by n)
double median_of(std::vector<double> v);
double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace unb
