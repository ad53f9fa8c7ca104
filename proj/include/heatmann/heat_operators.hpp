#pragma once

#include "heatmann/spectral.hpp"

#include <optional>

namespace heatmann {

/// Admissible relaxation interval for gamma.
///
/// loose_upper = 2 exp(lambda_min^2 T) guarantees nonexpansivity of
/// T_l = I - gamma exp(-Lambda^2 T). strict_upper = 2 exp(lambda_tilde^2 T)
/// with lambda_tilde = (lambda_min^2 - ln 2 / T)^{1/2} is the injectivity bound;
/// it is absent when lambda_min^2 T < ln 2.
struct GammaBounds {
    double loose_upper;
    std::optional<double> lambda_tilde;
    std::optional<double> strict_upper;
};

GammaBounds gamma_bounds(const SpectralGrid& grid, double horizon);

/// Backward heat problem on a spectral grid: recover u(0) from u(T).
class HeatProblem {
public:
    /// Throws ConfigError unless horizon > 0 and 0 < gamma < loose_upper (open interval).
    HeatProblem(GridPtr grid, double horizon, double gamma);

    const GridPtr& grid() const noexcept { return grid_; }
    double horizon() const noexcept { return horizon_; }
    double gamma() const noexcept { return gamma_; }
    GammaBounds bounds() const { return gamma_bounds(*grid_, horizon_); }
    /// True when gamma is at or above the injectivity bound (or that bound is undefined).
    bool injectivity_bound_exceeded() const;

    /// exp(-lambda_j^2 T), 1-based mode.
    double semigroup_factor(std::size_t mode) const;
    /// Eigenvalue tau_j = 1 - gamma exp(-lambda_j^2 T) of the linear part.
    double contraction_factor(std::size_t mode) const;
    /// ln(gamma exp(-lambda_j^2 T)) = ln gamma - lambda_j^2 T, exact even when the factor underflows.
    double log_damping(std::size_t mode) const;

private:
    GridPtr grid_;
    double horizon_;
    double gamma_;
};

/// Problem (Q) solved exactly: w(T) = exp(-Lambda^2 T) phi.
CoefVec forward_solve(const HeatProblem& problem, const CoefVec& phi);

/// exp(Lambda^2 T) f, the unstable inversion. Throws OverflowError naming the
/// first mode whose amplified coefficient is not representable.
CoefVec backward_exact_oracle(const HeatProblem& problem, const CoefVec& f);

/// Linear part T_l phi = (I - gamma exp(-Lambda^2 T)) phi.
CoefVec tl_apply(const HeatProblem& problem, const CoefVec& phi);

/// Test hook for mutation checks: perturbs the fixed-point map on purpose.
enum class OperatorFault { none, flip_semigroup_sign };

/// Affine map T phi = phi - gamma (w(T) - f) = T_l phi + gamma f.
class AffineFixedPointOp {
public:
    AffineFixedPointOp(HeatProblem problem, CoefVec data);

    const HeatProblem& problem() const noexcept { return problem_; }
    const CoefVec& data() const noexcept { return data_; }

    /// Evaluated through forward_solve: phi - gamma (w(T) - f).
    CoefVec apply(const CoefVec& phi) const;
    /// Diagonal form (1 - gamma e^{-lambda_j^2 T}) phi_j + gamma f_j.
    CoefVec apply_diagonal(const CoefVec& phi) const;

    /// Copy of this operator with an injected fault; only for mutation testing.
    AffineFixedPointOp with_fault(OperatorFault fault) const;
    OperatorFault fault() const noexcept { return fault_; }

private:
    HeatProblem problem_;
    CoefVec data_;
    OperatorFault fault_ = OperatorFault::none;
};

CoefVec fixed_point_apply(const AffineFixedPointOp& op, const CoefVec& phi);

}  // namespace heatmann
