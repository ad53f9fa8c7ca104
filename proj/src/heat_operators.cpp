#include "heatmann/heat_operators.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace heatmann {

GammaBounds gamma_bounds(const SpectralGrid& grid, double horizon) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw ConfigError("time horizon must be positive and finite");
    }
    const double lmin = grid.min_eigenvalue();
    GammaBounds b{2.0 * std::exp(lmin * lmin * horizon), std::nullopt, std::nullopt};
    // lambda_tilde as written in the injectivity remark; algebraically strict = exp(lmin^2 T).
    const double lt_sq = lmin * lmin - std::numbers::ln2 / horizon;
    if (lt_sq >= 0.0) {
        const double lt = std::sqrt(lt_sq);
        b.lambda_tilde = lt;
        b.strict_upper = 2.0 * std::exp(lt * lt * horizon);
    }
    return b;
}

HeatProblem::HeatProblem(GridPtr grid, double horizon, double gamma)
    : grid_(std::move(grid)), horizon_(horizon), gamma_(gamma) {
    if (!grid_) {
        throw ConfigError("heat problem needs a spectral grid");
    }
    const GammaBounds b = gamma_bounds(*grid_, horizon_);
    if (!(gamma_ > 0.0) || !(gamma_ < b.loose_upper)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "gamma = " << gamma_ << " violates the admissible interval (0, 2 exp(lambda_min^2 T)) = (0, "
            << b.loose_upper << ")";
        throw ConfigError(msg.str());
    }
}

bool HeatProblem::injectivity_bound_exceeded() const {
    const GammaBounds b = bounds();
    return !b.strict_upper || gamma_ >= *b.strict_upper;
}

double HeatProblem::semigroup_factor(std::size_t mode) const {
    const double l = grid_->eigenvalue(mode);
    return std::exp(-l * l * horizon_);
}

double HeatProblem::contraction_factor(std::size_t mode) const {
    return 1.0 - gamma_ * semigroup_factor(mode);
}

double HeatProblem::log_damping(std::size_t mode) const {
    const double l = grid_->eigenvalue(mode);
    return std::log(gamma_) - l * l * horizon_;
}

namespace {

void require_on_grid(const HeatProblem& problem, const CoefVec& v) {
    if (!same_grid(problem.grid(), v.grid())) {
        throw GridMismatchError("coefficient vector is not on the problem's spectral grid");
    }
}

}  // namespace

CoefVec forward_solve(const HeatProblem& problem, const CoefVec& phi) {
    require_on_grid(problem, phi);
    const double t = problem.horizon();
    return apply_spectral_function(phi, [t](double l) { return std::exp(-l * l * t); });
}

CoefVec backward_exact_oracle(const HeatProblem& problem, const CoefVec& f) {
    require_on_grid(problem, f);
    const auto lambda = problem.grid()->eigenvalues();
    const double t = problem.horizon();
    const double log_max = std::log(std::numeric_limits<double>::max());
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t j = 0; j < f.size(); ++j) {
        if (f[j] == 0.0) continue;
        const double exponent = lambda[j] * lambda[j] * t;
        const double amplification = std::exp(exponent);
        double value = amplification * f[j];
        if (!std::isfinite(value)) {
            // amplification alone may overflow while the product is still representable
            const double log_value = exponent + std::log(std::abs(f[j]));
            if (log_value >= log_max) {
                std::ostringstream msg;
                msg << "backward oracle overflows at mode " << j + 1 << ": amplification e^" << exponent
                    << " applied to coefficient " << f[j];
                throw OverflowError(j + 1, msg.str());
            }
            value = std::copysign(std::exp(log_value), f[j]);
        }
        out[j] = value;
    }
    return CoefVec(f.grid(), std::move(out));
}

CoefVec tl_apply(const HeatProblem& problem, const CoefVec& phi) {
    require_on_grid(problem, phi);
    const double t = problem.horizon();
    const double gamma = problem.gamma();
    return apply_spectral_function(phi, [t, gamma](double l) { return 1.0 - gamma * std::exp(-l * l * t); });
}

AffineFixedPointOp::AffineFixedPointOp(HeatProblem problem, CoefVec data)
    : problem_(std::move(problem)), data_(std::move(data)) {
    require_on_grid(problem_, data_);
}

CoefVec AffineFixedPointOp::apply(const CoefVec& phi) const {
    require_on_grid(problem_, phi);
    const CoefVec w = forward_solve(problem_, phi);
    const double sign = fault_ == OperatorFault::flip_semigroup_sign ? -1.0 : 1.0;
    const double gamma = problem_.gamma();
    std::vector<double> out(phi.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = std::fma(-gamma, sign * w[j] - data_[j], phi[j]);
    }
    return CoefVec(phi.grid(), std::move(out));
}

CoefVec AffineFixedPointOp::apply_diagonal(const CoefVec& phi) const {
    require_on_grid(problem_, phi);
    const auto lambda = problem_.grid()->eigenvalues();
    const double t = problem_.horizon();
    const double gamma = problem_.gamma();
    std::vector<double> out(phi.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = std::fma(1.0 - gamma * std::exp(-lambda[j] * lambda[j] * t), phi[j], gamma * data_[j]);
    }
    return CoefVec(phi.grid(), std::move(out));
}

AffineFixedPointOp AffineFixedPointOp::with_fault(OperatorFault fault) const {
    AffineFixedPointOp copy = *this;
    copy.fault_ = fault;
    return copy;
}

CoefVec fixed_point_apply(const AffineFixedPointOp& op, const CoefVec& phi) { return op.apply(phi); }

}  // namespace heatmann
