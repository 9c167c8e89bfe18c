#include "unb/sequential.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace unb {

namespace {
constexpr double kSpendTol = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

double SpendingFunction::value(double t) const {
    if (t < 0.0 || t > 1.0) throw std::domain_error("spending function: t must be in [0,1]");
    if (t == 0.0) return 0.0;
    switch (family) {
        case Family::pocock: return alpha * std::log(1.0 + (M_E - 1.0) * t);
        case Family::obf: return 1.0 - normal_cdf(normal_upper_quantile(alpha) / std::sqrt(t));
        case Family::power: return alpha * std::pow(t, param);
        case Family::hsd: return alpha * (1.0 - std::exp(-param * t)) / (1.0 - std::exp(-param));
    }
    return 0.0;
}

void SpendingFunction::validate() const {
    if (alpha <= 0.0 || alpha >= 1.0) throw std::invalid_argument("spending alpha must be in (0,1)");
    if (family == Family::power && param <= 0.0)
        throw std::invalid_argument("power spending needs q > 0");
    if (family == Family::hsd && param == 0.0)
        throw std::invalid_argument("hsd spending needs gamma != 0");
}

std::string SpendingFunction::name() const {
    switch (family) {
        case Family::pocock: return "pocock";
        case Family::obf: return "obf";
        case Family::power: return "power";
        case Family::hsd: return "hsd";
    }
    return "unknown";
}

SpendingFunction::Family SpendingFunction::family_from_name(const std::string& name) {
    if (name == "pocock") return Family::pocock;
    if (name == "obf") return Family::obf;
    if (name == "power") return Family::power;
    if (name == "hsd") return Family::hsd;
    throw std::invalid_argument("unknown spending family: " + name);
}

double information_target(double alpha, double eta, double delta) {
    if (delta <= 0.0) throw std::invalid_argument("information_target: delta must be positive");
    if (alpha <= 0.0 || alpha >= 0.5 || eta <= 0.0 || eta >= 0.5)
        throw std::invalid_argument("information_target: alpha and eta must be in (0, 0.5)");
    double z = normal_upper_quantile(alpha) + normal_upper_quantile(eta);
    return (z / delta) * (z / delta);
}

namespace {

// Continuation sub-density of the score process on a uniform grid.
struct GridDensity {
    std::vector<double> node;
    std::vector<double> value;
    double step = 0.0;
};

// Simpson weights; grid size is odd.
double grid_integral(const GridDensity& g, const std::vector<double>& integrand) {
    double s = 0.0;
    const std::size_t n = g.node.size();
    for (std::size_t i = 0; i < n; ++i) {
        double w = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        s += w * integrand[i];
    }
    return s * g.step / 3.0;
}

GridDensity make_grid(double lo, double hi, int nodes) {
    GridDensity g;
    if (nodes % 2 == 0) ++nodes;
    g.node.resize(nodes);
    g.value.assign(nodes, 0.0);
    g.step = (hi - lo) / (nodes - 1);
    for (int i = 0; i < nodes; ++i) g.node[i] = lo + g.step * i;
    return g;
}

void validate_fractions(const std::vector<double>& fractions) {
    if (fractions.empty()) throw std::invalid_argument("need at least one information fraction");
    double prev = 0.0;
    for (double t : fractions) {
        if (t <= prev || t > 1.0)
            throw std::invalid_argument("information fractions must be strictly increasing in (0,1]");
        prev = t;
    }
}

// Shared recursion: given z-scale boundaries (possibly +inf), propagates the
// continuation density under score drift theta*t and reports per-look exit
// probabilities. When `solve` is true the boundaries are computed instead,
// matching the spending increments.
struct RecursionResult {
    std::vector<double> boundaries;
    std::vector<double> exits;
    std::vector<bool> skipped;
};

RecursionResult run_recursion(const std::vector<double>& fractions, double theta,
                              const SpendingFunction* spending,
                              const std::vector<double>* fixed_bounds, int grid_nodes) {
    const std::size_t looks = fractions.size();
    RecursionResult out;
    out.boundaries.assign(looks, kInf);
    out.exits.assign(looks, 0.0);
    out.skipped.assign(looks, false);

    GridDensity density;  // sub-density over the continuation region
    double prev_t = 0.0;
    double prev_spend = 0.0;

    for (std::size_t k = 0; k < looks; ++k) {
        const double t = fractions[k];
        const double dt = t - prev_t;
        const double sd = std::sqrt(dt);
        const double drift = theta * dt;
        const double center = theta * t;

        // Target exit probability at this look.
        double want = 0.0;
        bool solve_this = false;
        if (spending) {
            double spend = spending->value(t);
            want = spend - prev_spend;
            prev_spend = spend;
            solve_this = want > kSpendTol;
            if (!solve_this) out.skipped[k] = true;
        } else {
            out.boundaries[k] = (*fixed_bounds)[k];
            out.skipped[k] = !std::isfinite((*fixed_bounds)[k]);
        }

        // Exit probability for a candidate score boundary b.
        auto exit_prob = [&](double b) {
            if (k == 0) return 1.0 - normal_cdf((b - drift) / sd);
            std::vector<double> integrand(density.node.size());
            for (std::size_t i = 0; i < density.node.size(); ++i)
                integrand[i] =
                    density.value[i] * (1.0 - normal_cdf((b - density.node[i] - drift) / sd));
            return grid_integral(density, integrand);
        };

        double b = kInf;
        if (spending) {
            if (solve_this && k == 0) {
                // First look: the exit region is a normal tail, solved exactly.
                b = std::sqrt(t) * normal_upper_quantile(want);
                out.boundaries[k] = b / std::sqrt(t);
            } else if (solve_this) {
                double lo = center - 10.0 * std::sqrt(t);
                double hi = center + 10.0 * std::sqrt(t);
                for (int it = 0; it < 200; ++it) {
                    double mid = 0.5 * (lo + hi);
                    double p = exit_prob(mid);
                    if (std::fabs(p - want) < 1e-10 && it > 20) {
                        lo = hi = mid;
                        break;
                    }
                    (p > want ? lo : hi) = mid;
                    if (hi - lo < 1e-13) break;
                }
                b = 0.5 * (lo + hi);
                out.boundaries[k] = b / std::sqrt(t);
            }
        } else {
            b = std::isfinite((*fixed_bounds)[k]) ? (*fixed_bounds)[k] * std::sqrt(t) : kInf;
        }
        out.exits[k] = std::isfinite(b) ? exit_prob(b) : 0.0;

        if (k + 1 == looks) break;

        // Propagate the density over the continuation region.
        double lo = center - 8.0 * std::sqrt(t);
        double hi = std::isfinite(b) ? b : center + 8.0 * std::sqrt(t);
        GridDensity next = make_grid(lo, hi, grid_nodes);
        if (k == 0) {
            double sq = std::sqrt(t);
            for (std::size_t i = 0; i < next.node.size(); ++i)
                next.value[i] = normal_pdf((next.node[i] - drift) / sq) / sq;
        } else {
            for (std::size_t i = 0; i < next.node.size(); ++i) {
                std::vector<double> integrand(density.node.size());
                for (std::size_t j = 0; j < density.node.size(); ++j)
                    integrand[j] = density.value[j] *
                                   normal_pdf((next.node[i] - density.node[j] - drift) / sd) / sd;
                next.value[i] = grid_integral(density, integrand);
            }
        }
        density = std::move(next);
        prev_t = t;
    }
    return out;
}

}  // namespace

BoundaryResult compute_boundaries(const std::vector<double>& fractions,
                                  const SpendingFunction& spending, int grid_nodes) {
    validate_fractions(fractions);
    spending.validate();
    if (grid_nodes < 256) throw std::invalid_argument("compute_boundaries: need >= 256 grid nodes");
    RecursionResult rec = run_recursion(fractions, 0.0, &spending, nullptr, grid_nodes);
    return BoundaryResult{rec.boundaries, rec.exits, rec.skipped};
}

double crossing_probability(const std::vector<double>& fractions,
                            const std::vector<double>& boundaries, double theta, int grid_nodes) {
    validate_fractions(fractions);
    if (boundaries.size() != fractions.size())
        throw std::invalid_argument("crossing_probability: size mismatch");
    RecursionResult rec = run_recursion(fractions, theta, nullptr, &boundaries, grid_nodes);
    double total = 0.0;
    for (double e : rec.exits) total += e;
    return total;
}

double inflation_factor(const std::vector<double>& fractions, const SpendingFunction& spending,
                        double eta, int grid_nodes) {
    if (eta <= 0.0 || eta >= 0.5) throw std::invalid_argument("inflation_factor: eta in (0,0.5)");
    BoundaryResult bounds = compute_boundaries(fractions, spending, grid_nodes);
    if (fractions.size() == 1) return 1.0;
    const double target = 1.0 - eta;
    const double base_drift = normal_upper_quantile(spending.alpha) + normal_upper_quantile(eta);
    auto power_at = [&](double L) {
        return crossing_probability(fractions, bounds.boundaries, base_drift * std::sqrt(L),
                                    grid_nodes);
    };
    if (power_at(1.0) >= target) return 1.0;
    double lo = 1.0, hi = 2.0;
    while (power_at(hi) < target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 64.0) throw std::runtime_error("inflation_factor: failed to bracket");
    }
    for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        double p = power_at(mid);
        if (std::fabs(p - target) < 1e-4) return mid;
        (p < target ? lo : hi) = mid;
        if (hi - lo < 1e-10) break;
    }
    return hi;
}

SequentialDesign SequentialDesign::plan(double alpha, double eta, double delta, int looks,
                                        const SpendingFunction& spending, long t_min) {
    if (looks < 1) throw std::invalid_argument("plan: need at least one look");
    SequentialDesign d;
    d.alpha = alpha;
    d.eta = eta;
    d.delta = delta;
    d.spending = spending;
    d.spending.alpha = alpha;
    d.t_min = t_min;
    d.fractions.resize(looks);
    for (int k = 0; k < looks; ++k) d.fractions[k] = static_cast<double>(k + 1) / looks;
    BoundaryResult b = compute_boundaries(d.fractions, d.spending);
    d.boundaries = b.boundaries;
    d.exit_probs = b.exit_probs;
    d.info_target = information_target(alpha, eta, delta);
    d.inflation = inflation_factor(d.fractions, d.spending, eta);
    d.info_inflated = d.inflation * d.info_target;
    return d;
}

Decision monitor_step(MonitorState& state, long round, double info, double psi,
                      const SequentialDesign& design) {
    if (state.finished) throw std::logic_error("monitor_step: trial already decided");
    const std::size_t looks = design.fractions.size();
    double fraction = info / design.info_inflated;
    while (state.next_look < looks && fraction >= design.fractions[state.next_look]) {
        LookRecord rec;
        rec.look = static_cast<int>(state.next_look) + 1;
        rec.round = round;
        rec.info = info;
        rec.fraction = fraction;
        rec.psi = psi;
        rec.boundary = design.boundaries[state.next_look];
        if (psi > rec.boundary) {
            rec.decision = Decision::kReject;
            state.records.push_back(rec);
            state.finished = true;
            return Decision::kReject;
        }
        rec.decision = Decision::kContinue;
        state.records.push_back(rec);
        ++state.next_look;
    }
    if (info >= design.info_inflated) {
        state.finished = true;
        return Decision::kAcceptAtMax;
    }
    return Decision::kContinue;
}

double info_fraction_gamma(const RewardSpec& rewards, const Hypothesis& hyp) {
    double mu_star = 0.0;
    for (const auto& a : rewards.arms) mu_star = std::max(mu_star, a.mean);
    double mu_min = kInf;
    for (std::size_t k : hyp.depends) mu_min = std::min(mu_min, rewards.arms[k].mean);
    return mu_min / mu_star;
}

double inverse_info_fraction(double t, double gamma) {
    if (t < 0.0 || t > 1.0) throw std::domain_error("inverse_info_fraction: t in [0,1]");
    return std::pow(t, 1.0 / gamma);
}

InfoFractionCurve info_fraction_curve(const std::vector<double>& info_at_r,
                                      const std::vector<double>& r_grid, double gamma) {
    if (info_at_r.size() != r_grid.size() || info_at_r.empty())
        throw std::invalid_argument("info_fraction_curve: size mismatch");
    InfoFractionCurve c;
    c.gamma = gamma;
    c.r = r_grid;
    double terminal = info_at_r.back();
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        c.empirical.push_back(info_at_r[i] / terminal);
        c.theory.push_back(std::pow(r_grid[i], gamma));
    }
    return c;
}

}  // namespace unb
