#include "unb/rewards.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "unb/errors.hpp"

namespace unb {

std::string family_name(Family f) {
    switch (f) {
        case Family::bernoulli: return "bernoulli";
        case Family::poisson: return "poisson";
        case Family::exponential: return "exponential";
    }
    return "unknown";
}

Family family_from_name(const std::string& name) {
    if (name == "bernoulli") return Family::bernoulli;
    if (name == "poisson") return Family::poisson;
    if (name == "exponential") return Family::exponential;
    throw std::invalid_argument("unknown reward family: " + name);
}

double family_variance(const ArmSpec& arm) {
    switch (arm.family) {
        case Family::bernoulli: return arm.mean * (1.0 - arm.mean);
        case Family::poisson: return arm.mean;
        case Family::exponential: return arm.mean * arm.mean;
    }
    return 0.0;
}

double family_quantile(const ArmSpec& arm, double u) {
    // Guard the closed endpoints: latent normals mapped through the cdf can
    // round to exactly 0 or 1.
    u = std::min(std::max(u, 1e-300), 1.0 - 1e-16);
    switch (arm.family) {
        case Family::bernoulli: return u > 1.0 - arm.mean ? 1.0 : 0.0;
        case Family::poisson: return static_cast<double>(poisson_quantile(arm.mean, u));
        case Family::exponential: return -arm.mean * std::log1p(-u);
    }
    return 0.0;
}

double RewardSpec::mean_at(std::size_t arm, long round) const {
    if (drift) return drift(arm, round);
    return arms[arm].mean;
}

void RewardSpec::validate() const {
    if (arms.size() < 2) throw std::invalid_argument("reward spec needs at least two arms");
    for (const auto& a : arms) {
        if (a.mean <= 0.0) throw std::invalid_argument("arm means must be strictly positive");
        if (a.family == Family::bernoulli && a.mean >= 1.0)
            throw std::invalid_argument("bernoulli mean must be in (0,1)");
    }
    if (rho < 0.0 || rho >= 1.0) throw std::invalid_argument("rho must be in [0,1)");
    if (rho > 0.0) {
        for (std::size_t i = 0; i < arms.size(); ++i)
            for (std::size_t j = i + 1; j < arms.size(); ++j) {
                double bound = max_attainable_correlation(arms[i], arms[j]);
                if (rho >= bound)
                    throw CalibrationError("rho " + std::to_string(rho) +
                                           " exceeds attainable bound " + std::to_string(bound) +
                                           " for arm pair " + std::to_string(i + 1) + "," +
                                           std::to_string(j + 1));
            }
    }
}

double BudgetSpec::mean() const {
    double s = 0.0;
    for (long v : support) s += static_cast<double>(v);
    return s / static_cast<double>(support.size());
}

double BudgetSpec::mean_sq() const {
    double s = 0.0;
    for (long v : support) s += static_cast<double>(v) * static_cast<double>(v);
    return s / static_cast<double>(support.size());
}

long BudgetSpec::max_value() const {
    long m = 0;
    for (long v : support) m = std::max(m, v);
    return m;
}

void BudgetSpec::validate() const {
    if (support.empty()) throw std::invalid_argument("budget support must be nonempty");
    for (long v : support)
        if (v < 1) throw std::invalid_argument("budget support must contain positive integers");
}

namespace {

bool is_discrete(Family f) { return f != Family::exponential; }

// P(X >= k) boundaries on the latent scale: z_k = Phi^-1(F(k-1)), so that
// X >= k  <=>  Phi(Z) > F(k-1)  <=>  Z > z_k.
std::vector<double> lattice_thresholds(const ArmSpec& arm) {
    std::vector<double> z;
    if (arm.family == Family::bernoulli) {
        z.push_back(normal_quantile(1.0 - arm.mean));
        return z;
    }
    // Poisson: accumulate the cdf until the tail is negligible.
    double lambda = arm.mean;
    double p = std::exp(-lambda);
    double cdf = p;
    z.push_back(normal_quantile(std::min(cdf, 1.0 - 1e-15)));  // P(X >= 1) boundary is F(0)
    long k = 1;
    while (1.0 - cdf > 1e-13 && k < 4000) {
        p *= lambda / static_cast<double>(k);
        cdf += p;
        ++k;
        z.push_back(normal_quantile(std::min(cdf, 1.0 - 1e-15)));
    }
    // z[i] is Phi^-1(F(i)) = threshold for X >= i+1.
    z.pop_back();  // the last pushed value corresponds to a negligible tail
    return z;
}

double cross_moment_lattice(const ArmSpec& a, const ArmSpec& b, double rho_z) {
    std::vector<double> za = lattice_thresholds(a);
    std::vector<double> zb = lattice_thresholds(b);
    double s = 0.0;
    for (double x : za)
        for (double y : zb) s += bivariate_normal_survival(x, y, rho_z);
    return s;  // E[XY] = sum_{k,l>=1} P(X>=k, Y>=l)
}

double cross_moment_quadrature(const ArmSpec& a, const ArmSpec& b, double rho_z) {
    static const Quadrature q = gauss_legendre(96, -8.0, 8.0);
    const double root = std::sqrt(1.0 - rho_z * rho_z);
    double s = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        double z = q.nodes[i];
        double xa = family_quantile(a, normal_cdf(z));
        double inner = 0.0;
        for (std::size_t j = 0; j < q.nodes.size(); ++j) {
            double w = q.nodes[j];
            double xb = family_quantile(b, normal_cdf(rho_z * z + root * w));
            inner += q.weights[j] * normal_pdf(w) * xb;
        }
        s += q.weights[i] * normal_pdf(z) * xa * inner;
    }
    return s;
}

}  // namespace

double induced_correlation(const ArmSpec& a, const ArmSpec& b, double rho_z) {
    if (rho_z == 0.0) return 0.0;
    double exy = (is_discrete(a.family) && is_discrete(b.family))
                     ? cross_moment_lattice(a, b, rho_z)
                     : cross_moment_quadrature(a, b, rho_z);
    return (exy - a.mean * b.mean) / std::sqrt(family_variance(a) * family_variance(b));
}

double max_attainable_correlation(const ArmSpec& a, const ArmSpec& b) {
    return induced_correlation(a, b, 0.9995);
}

double calibrate_copula(const ArmSpec& a, const ArmSpec& b, double rho_target) {
    if (rho_target < 0.0) throw CalibrationError("rho target must be nonnegative");
    if (rho_target == 0.0) return 0.0;
    double bound = max_attainable_correlation(a, b);
    if (rho_target >= bound - 0.005)
        throw CalibrationError("rho target " + std::to_string(rho_target) +
                               " is not attainable; bound is " + std::to_string(bound));
    double lo = 0.0, hi = 0.9995;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double induced = induced_correlation(a, b, mid);
        if (std::fabs(induced - rho_target) < 2e-4) return mid;
        (induced < rho_target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

Environment::Environment(RewardSpec rewards, BudgetSpec budget)
    : rewards_(std::move(rewards)), budget_(std::move(budget)) {
    rewards_.validate();
    budget_.validate();
    const std::size_t d = rewards_.size();
    correlated_ = rewards_.rho > 0.0;
    if (!correlated_) return;

    latent_corr_ = Matrix(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) latent_corr_(i, i) = 1.0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) {
            double rz = calibrate_copula(rewards_.arms[i], rewards_.arms[j], rewards_.rho);
            latent_corr_(i, j) = rz;
            latent_corr_(j, i) = rz;
        }
    // Cholesky of the latent correlation matrix.
    latent_chol_ = Matrix(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = latent_corr_(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= latent_chol_(i, k) * latent_chol_(j, k);
            if (i == j) {
                if (s <= 1e-12)
                    throw CalibrationError("latent correlation matrix is not positive definite");
                latent_chol_(i, i) = std::sqrt(s);
            } else {
                latent_chol_(i, j) = s / latent_chol_(j, j);
            }
        }
    }
}

std::vector<double> Environment::draw_rewards(long round, RngStream& rng) const {
    const std::size_t d = rewards_.size();
    std::vector<double> out(d);
    if (!correlated_) {
        for (std::size_t k = 0; k < d; ++k) {
            ArmSpec arm = rewards_.arms[k];
            arm.mean = rewards_.mean_at(k, round);
            out[k] = family_quantile(arm, rng.uniform());
        }
        return out;
    }
    std::vector<double> g(d);
    for (std::size_t k = 0; k < d; ++k) g[k] = rng.normal();
    for (std::size_t k = 0; k < d; ++k) {
        double z = 0.0;
        for (std::size_t j = 0; j <= k; ++j) z += latent_chol_(k, j) * g[j];
        ArmSpec arm = rewards_.arms[k];
        arm.mean = rewards_.mean_at(k, round);
        out[k] = family_quantile(arm, normal_cdf(z));
    }
    return out;
}

long Environment::draw_budget(RngStream& rng) const {
    if (budget_.support.size() == 1) return budget_.support[0];
    std::size_t idx = static_cast<std::size_t>(rng.uniform() * budget_.support.size());
    if (idx >= budget_.support.size()) idx = budget_.support.size() - 1;
    return budget_.support[idx];
}

}  // namespace unb
