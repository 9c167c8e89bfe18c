#include "unb/inference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "unb/errors.hpp"

namespace unb {

Hypothesis Hypothesis::difference(std::size_t i, std::size_t j) {
    Hypothesis h;
    h.kind = Kind::difference;
    h.i = i;
    h.j = j;
    h.depends = {i, j};
    return h;
}

Hypothesis Hypothesis::threshold(std::size_t k, double bound) {
    Hypothesis h;
    h.kind = Kind::threshold;
    h.i = k;
    h.bound = bound;
    h.depends = {k};
    return h;
}

Hypothesis Hypothesis::control_average() {
    Hypothesis h;
    h.kind = Kind::control_average;
    h.depends = {0, 1, 2};
    return h;
}

Hypothesis Hypothesis::ratio(std::size_t i, std::size_t j, double bound) {
    Hypothesis h;
    h.kind = Kind::ratio;
    h.i = i;
    h.j = j;
    h.bound = bound;
    h.depends = {i, j};
    return h;
}

Hypothesis Hypothesis::custom(std::function<double(std::span<const double>)> fn,
                              std::vector<std::size_t> depends, double bound) {
    Hypothesis h;
    h.kind = Kind::custom;
    h.fn = std::move(fn);
    h.depends = std::move(depends);
    h.bound = bound;
    return h;
}

double Hypothesis::value(std::span<const double> means) const {
    switch (kind) {
        case Kind::difference: return means[i] - means[j];
        case Kind::threshold: return means[i] - bound;
        case Kind::control_average: return means[0] - 0.5 * (means[1] + means[2]);
        case Kind::ratio:
            if (means[j] <= 0.0) throw std::domain_error("ratio hypothesis: denominator mean <= 0");
            return means[i] / means[j] - bound;
        case Kind::custom: return fn(means) - bound;
    }
    return 0.0;
}

std::vector<double> Hypothesis::gradient(std::span<const double> means) const {
    std::vector<double> g(means.size(), 0.0);
    switch (kind) {
        case Kind::difference:
            g[i] = 1.0;
            g[j] = -1.0;
            return g;
        case Kind::threshold:
            g[i] = 1.0;
            return g;
        case Kind::control_average:
            g[0] = 1.0;
            g[1] = -0.5;
            g[2] = -0.5;
            return g;
        case Kind::ratio:
            if (means[j] <= 0.0) throw std::domain_error("ratio hypothesis: denominator mean <= 0");
            g[i] = 1.0 / means[j];
            g[j] = -means[i] / (means[j] * means[j]);
            return g;
        case Kind::custom: break;
    }
    if (grad_fn) return grad_fn(means);
    // Central differences over the arms the functional depends on.
    std::vector<double> point(means.begin(), means.end());
    for (std::size_t k : depends) {
        double step = 1e-6 * std::max(1.0, std::fabs(means[k]));
        double saved = point[k];
        point[k] = saved + step;
        double up = fn(point);
        point[k] = saved - step;
        double down = fn(point);
        point[k] = saved;
        g[k] = (up - down) / (2.0 * step);
    }
    return g;
}

std::string Hypothesis::name() const {
    switch (kind) {
        case Kind::difference: return "difference";
        case Kind::threshold: return "threshold";
        case Kind::control_average: return "control_average";
        case Kind::ratio: return "ratio";
        case Kind::custom: return "custom";
    }
    return "unknown";
}

void Hypothesis::validate(std::size_t arms) const {
    switch (kind) {
        case Kind::difference:
        case Kind::ratio:
            if (i >= arms || j >= arms || i == j)
                throw std::invalid_argument("hypothesis arms out of range");
            break;
        case Kind::threshold:
            if (i >= arms) throw std::invalid_argument("hypothesis arm out of range");
            break;
        case Kind::control_average:
            if (arms < 3)
                throw std::invalid_argument("control_average hypothesis needs at least 3 arms");
            break;
        case Kind::custom:
            if (!fn) throw std::invalid_argument("custom hypothesis needs a functional");
            for (std::size_t k : depends)
                if (k >= arms) throw std::invalid_argument("hypothesis arm out of range");
            break;
    }
}

double delta_variance(std::span<const double> grad, std::span<const double> weight,
                      const Matrix& sigma) {
    const std::size_t d = grad.size();
    bool any = false;
    for (std::size_t k = 0; k < d; ++k) {
        if (grad[k] == 0.0) continue;
        any = true;
        if (weight[k] <= 0.0)
            throw ArmUnestimableError(k, "arm " + std::to_string(k + 1) +
                                             " has zero weight in the variance form");
    }
    if (!any) throw std::invalid_argument("delta_variance: gradient vanishes on the dependence set");
    double v = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
        if (grad[a] == 0.0) continue;
        for (std::size_t b = 0; b < d; ++b) {
            if (grad[b] == 0.0) continue;
            v += grad[a] * grad[b] * sigma(a, b) / std::sqrt(weight[a] * weight[b]);
        }
    }
    return v;
}

double test_statistic(double h_value, double sigma_h) {
    if (!(sigma_h > 0.0)) throw std::invalid_argument("test_statistic: sigma_h must be positive");
    return h_value / sigma_h;
}

CorrectionFactors correction_factors(const MomentEstimates& est, const Hypothesis& hyp) {
    const std::size_t d = est.mean.size();
    if (est.budget_mean <= 0.0)
        throw std::invalid_argument("correction_factors: mean budget denominator is zero");
    CorrectionFactors out;
    const double inflation = est.budget_sq_mean / est.budget_mean - 1.0;
    out.inflation.resize(d);
    for (std::size_t k = 0; k < d; ++k) out.inflation[k] = est.share[k] * inflation + 1.0;

    std::vector<double> grad = hyp.gradient(est.mean);
    double quad = delta_variance(grad, est.weight, sigma_hat_matrix(est));
    double denom_w = 0.0, denom_s = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        if (grad[k] == 0.0) continue;
        if (est.selections[k] == 0)
            throw ArmUnestimableError(k, "arm " + std::to_string(k + 1) +
                                             " has zero selections in the classical form");
        denom_w += grad[k] * grad[k] * est.variance[k] / est.weight[k];
        denom_s += grad[k] * grad[k] * est.variance[k] / static_cast<double>(est.selections[k]);
    }
    if (denom_w <= 0.0 || denom_s <= 0.0)
        throw std::invalid_argument("correction_factors: vanishing variance denominator");
    out.gamma = quad / denom_w;
    out.lambda = denom_w / denom_s;

    auto arm_term = [&](std::size_t k, double scale) {
        return scale * out.inflation[k] * est.variance[k] / est.weight[k];
    };
    auto classical_term = [&](std::size_t k, double scale) {
        return scale * est.variance[k] / static_cast<double>(est.selections[k]);
    };
    switch (hyp.kind) {
        case Hypothesis::Kind::difference:
            out.gamma_closed = (arm_term(hyp.i, 1.0) + arm_term(hyp.j, 1.0)) /
                               (classical_term(hyp.i, 1.0) + classical_term(hyp.j, 1.0));
            out.has_closed = true;
            break;
        case Hypothesis::Kind::threshold:
            out.gamma_closed = out.inflation[hyp.i] *
                               static_cast<double>(est.selections[hyp.i]) / est.weight[hyp.i];
            out.has_closed = true;
            break;
        case Hypothesis::Kind::control_average:
            out.gamma_closed =
                (arm_term(0, 1.0) + arm_term(1, 0.25) + arm_term(2, 0.25)) /
                (classical_term(0, 1.0) + classical_term(1, 0.25) + classical_term(2, 0.25));
            out.has_closed = true;
            break;
        default:
            out.has_closed = false;
    }
    return out;
}

double ncp_unb(double delta, double gamma1, double var1, double var2, long s1, long s2) {
    if (s1 <= 0 || s2 <= 0) throw std::invalid_argument("ncp_unb: zero counts");
    return delta / (std::sqrt(gamma1) *
                    std::sqrt(var1 / static_cast<double>(s1) + var2 / static_cast<double>(s2)));
}

double ncp_ucb(double delta, double var1, double var2, long t1, long t2) {
    if (t1 <= 0 || t2 <= 0) throw std::invalid_argument("ncp_ucb: zero counts");
    return delta / std::sqrt(var1 / static_cast<double>(t1) + var2 / static_cast<double>(t2));
}

TestStat evaluate_corrected(const MomentEstimates& est, const Hypothesis& hyp, bool naive) {
    std::vector<double> grad = hyp.gradient(est.mean);
    double var;
    if (naive) {
        Matrix plain(est.mean.size(), 0.0);
        for (std::size_t k = 0; k < est.mean.size(); ++k) plain(k, k) = est.variance[k];
        var = delta_variance(grad, est.weight, plain);
    } else {
        var = delta_variance(grad, est.weight, sigma_hat_matrix(est));
    }
    TestStat ts;
    ts.variance = std::max(var, kVarianceFloor);  // d >= 3 quadratic forms lack a PSD guarantee
    ts.h_value = hyp.value(est.mean);
    ts.value = test_statistic(ts.h_value, std::sqrt(ts.variance));
    ts.information = 1.0 / ts.variance;
    return ts;
}

TestStat evaluate_classical(const MomentEstimates& est, const Hypothesis& hyp) {
    std::vector<double> grad = hyp.gradient(est.mean);
    double var = 0.0;
    for (std::size_t k = 0; k < est.mean.size(); ++k) {
        if (grad[k] == 0.0) continue;
        if (est.selections[k] == 0)
            throw ArmUnestimableError(k, "arm " + std::to_string(k + 1) + " never observed");
        var += grad[k] * grad[k] * est.variance[k] / static_cast<double>(est.selections[k]);
    }
    if (!(var > 0.0)) throw std::invalid_argument("evaluate_classical: vanishing variance");
    TestStat ts;
    ts.variance = var;
    ts.h_value = hyp.value(est.mean);
    ts.value = test_statistic(ts.h_value, std::sqrt(var));
    ts.information = 1.0 / var;
    return ts;
}

}  // namespace unb
