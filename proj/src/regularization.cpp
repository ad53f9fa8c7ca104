#include "heatmann/regularization.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace heatmann {

const char* to_string(NoiseProfile profile) noexcept {
    switch (profile) {
        case NoiseProfile::single_mode_worst: return "single_mode_worst";
        case NoiseProfile::white: return "white";
        case NoiseProfile::high_mode: return "high_mode";
    }
    return "unknown";
}

NoiseProfile parse_noise_profile(const std::string& name) {
    if (name == "single_mode_worst") return NoiseProfile::single_mode_worst;
    if (name == "white") return NoiseProfile::white;
    if (name == "high_mode") return NoiseProfile::high_mode;
    throw ConfigError("unknown noise profile '" + name + "' (single_mode_worst, white, high_mode)");
}

namespace {

std::vector<double> draw_perturbation(std::size_t n, std::uint64_t seed, NoiseProfile profile) {
    std::mt19937_64 rng(seed);
    std::vector<double> p(n, 0.0);
    if (profile == NoiseProfile::single_mode_worst) {
        p.back() = (rng() & 1u) ? 1.0 : -1.0;
        return p;
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t first = profile == NoiseProfile::high_mode ? n / 2 : 0;
    for (;;) {
        double sq = 0.0;
        for (std::size_t j = first; j < n; ++j) {
            p[j] = normal(rng);
            sq += p[j] * p[j];
        }
        if (sq > 0.0) return p;
    }
}

}  // namespace

NoisyData add_noise(const CoefVec& f, double eps, std::uint64_t seed, NoiseProfile profile) {
    if (!(eps >= 0.0) || !std::isfinite(eps)) {
        throw ConfigError("noise level eps must be nonnegative and finite");
    }
    if (eps == 0.0) {
        return NoisyData{f, f, 0.0};
    }
    const CoefVec direction(f.grid(), draw_perturbation(f.size(), seed, profile));
    CoefVec f_eps = f + (eps / norm(direction)) * direction;
    // one rescaling pass absorbs the rounding of f + p so ||f_eps - f|| hits eps
    const CoefVec actual = f_eps - f;
    f_eps = f + (eps / norm(actual)) * actual;
    return NoisyData{f, std::move(f_eps), eps};
}

CoefVec residual(const HeatProblem& problem, const CoefVec& data, const CoefVec& x) {
    require_same_grid(data, x);
    if (!same_grid(problem.grid(), x.grid())) {
        throw GridMismatchError("residual: vectors are not on the problem's grid");
    }
    const double gamma = problem.gamma();
    const CoefVec sx = forward_solve(problem, x);
    std::vector<double> out(x.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = gamma * data[j] - gamma * sx[j];
    }
    return CoefVec(x.grid(), std::move(out));
}

void StoppingRule::validate() const {
    if (!(mu > 1.0) || !std::isfinite(mu)) {
        throw ConfigError("discrepancy factor mu must exceed 1");
    }
    if (max_iter == 0) {
        throw ConfigError("max_iter must be at least 1");
    }
}

void StoppingRule::require_source_rate_context() const {
    validate();
    if (!(mu > 2.0)) {
        throw ConfigError("source-condition rates require mu > 2");
    }
}

StopPolicy discrepancy_stop(const StoppingRule& rule, double eps) {
    rule.validate();
    if (eps == 0.0) {
        throw ConfigError("discrepancy stop needs eps > 0; use a residual tolerance for exact data");
    }
    if (!(eps > 0.0) || !std::isfinite(eps)) {
        throw ConfigError("noise level eps must be positive and finite");
    }
    const double threshold = rule.mu * eps;
    std::ostringstream name;
    name << "discrepancy(mu=" << rule.mu << ",eps=" << eps << ")";
    return StopPolicy{name.str(), [threshold](const TraceEntry& e) { return e.residual_norm <= threshold; }};
}

double discrepancy_iteration_bound(double mu, double initial_error_norm, double eps) {
    const double c = initial_error_norm / ((mu - 1.0) * eps);
    return std::ceil(c * c) + 1.0;
}

double energy_identity_check(const HeatProblem& problem, const CoefVec& f, const CoefVec& xbar,
                             const CoefVec& x_j, const CoefVec& x_j1) {
    const CoefVec e = xbar - x_j;
    const CoefVec tl_e = tl_apply(problem, e);
    const CoefVec p_e = e - tl_e;
    const double r = norm(residual(problem, f, x_j));
    const double lhs = std::pow(norm(xbar - x_j1), 2);
    const double rhs = std::pow(norm(e), 2) - r * r - 2.0 * inner(p_e, tl_e);
    return std::abs(lhs - rhs);
}

double logarithmic_source_function(double lambda, double p) {
    if (lambda == 0.0) return 0.0;
    if (!(lambda > 0.0) || !(lambda < std::numbers::e)) {
        std::ostringstream msg;
        msg << "logarithmic source function undefined at lambda = " << lambda << " (needs 0 <= lambda < e)";
        throw DomainError(0, msg.str());
    }
    return std::pow(std::log(std::numbers::e / lambda), -p);
}

SourceConditionedProblem source_condition_build(const HeatProblem& problem, const SourceCondition& sc,
                                                const CoefVec& x1) {
    if (!(sc.p > 0.0) || !std::isfinite(sc.p)) {
        throw ConfigError("source condition exponent p must be positive");
    }
    require_same_grid(sc.y, x1);
    if (!same_grid(problem.grid(), x1.grid())) {
        throw GridMismatchError("source condition: vectors are not on the problem's grid");
    }
    std::vector<double> xbar(x1.size());
    for (std::size_t j = 0; j < xbar.size(); ++j) {
        // ln(e / (gamma e^{-lambda^2 T})) = 1 - (ln gamma - lambda^2 T)
        const double log_ratio = 1.0 - problem.log_damping(j + 1);
        if (!(log_ratio > 0.0)) {
            std::ostringstream msg;
            msg << "source condition undefined at mode " << j + 1
                << ": spectral value of I - T_l is >= e (gamma too large)";
            throw DomainError(j + 1, msg.str());
        }
        xbar[j] = x1[j] + std::pow(log_ratio, -sc.p) * sc.y[j];
    }
    CoefVec xb(x1.grid(), std::move(xbar));
    CoefVec f = forward_solve(problem, xb);
    return SourceConditionedProblem{std::move(xb), std::move(f)};
}

RateFit rate_fit(std::span<const std::pair<double, double>> points, RateModel model) {
    if (points.size() < 4) {
        throw ConfigError("rate_fit needs at least 4 points");
    }
    std::vector<std::pair<double, double>> used;  // (regressor, log value)
    std::vector<std::pair<double, double>> raw;
    for (const auto& [x, v] : points) {
        if (!(x > 0.0) || !(v > 0.0) || !std::isfinite(x) || !std::isfinite(v)) {
            throw ConfigError("rate_fit needs positive finite abscissae and values");
        }
        if (model == RateModel::power) {
            used.emplace_back(std::log(x), std::log(v));
        } else {
            if (std::log(x) < 1.0) continue;  // pre-asymptotic, log-log singular
            used.emplace_back(std::log(std::log(x)), std::log(v));
        }
        raw.emplace_back(x, v);
    }
    if (used.size() < 3) {
        throw ConfigError("rate_fit: fewer than 3 points left after dropping ln(abscissa) < 1");
    }
    const double n = static_cast<double>(used.size());
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : used) {
        mx += x;
        my += y;
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : used) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if (!(sxx > 1e-300)) {
        throw ConfigError("rate_fit: degenerate data (all abscissae equal)");
    }
    const double slope = sxy / sxx;
    const double log_c = my - slope * mx;
    RateFit fit{model == RateModel::power ? slope : -slope, std::exp(log_c), 0.0, used.size()};
    for (std::size_t i = 0; i < used.size(); ++i) {
        const double fitted = std::exp(log_c + slope * used[i].first);
        fit.max_relative_residual =
            std::max(fit.max_relative_residual, std::abs(fitted - raw[i].second) / raw[i].second);
    }
    return fit;
}

}  // namespace heatmann
