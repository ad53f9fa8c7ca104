#pragma once

#include "heatmann/heat_operators.hpp"
#include "heatmann/mann.hpp"
#include "heatmann/spectral.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <utility>

namespace heatmann {

enum class NoiseProfile {
    /// all of the perturbation on the last (most amplified) mode, sign from the seed
    single_mode_worst,
    /// i.i.d. Gaussian over all modes
    white,
    /// i.i.d. Gaussian over the upper half of the modes
    high_mode,
};

const char* to_string(NoiseProfile profile) noexcept;
NoiseProfile parse_noise_profile(const std::string& name);

struct NoisyData {
    CoefVec f;
    CoefVec f_eps;
    double eps;
};

/// f_eps = f + perturbation with ||f - f_eps|| = eps (not merely <= eps).
/// Deterministic in (seed, profile).
NoisyData add_noise(const CoefVec& f, double eps, std::uint64_t seed, NoiseProfile profile);

/// gamma * data - (I - T_l) x, i.e. gamma data_j - gamma e^{-lambda_j^2 T} x_j.
CoefVec residual(const HeatProblem& problem, const CoefVec& data, const CoefVec& x);

/// Discrepancy principle parameters.
struct StoppingRule {
    double mu = 1.5;
    std::size_t max_iter = 100000;

    /// Throws unless mu > 1.
    void validate() const;
    /// Source-condition rates need mu > 2; throws otherwise.
    void require_source_rate_context() const;
};

/// Fires at the first k with ||r_k^eps|| <= mu eps. eps must be positive.
StopPolicy discrepancy_stop(const StoppingRule& rule, double eps);

/// Explicit iteration bound ceil((mu-1)^{-2} ||xbar - x1||^2 eps^{-2}) + 1 for the discrepancy stop.
double discrepancy_iteration_bound(double mu, double initial_error_norm, double eps);

/// |LHS - RHS| of
///   ||xbar - x_{j+1}||^2 = ||xbar - x_j||^2 - ||gamma f - (I-T_l) x_j||^2
///                          - 2 <(I-T_l)(xbar - x_j), T_l (xbar - x_j)>
/// for one successive-approximation step with exact data f.
double energy_identity_check(const HeatProblem& problem, const CoefVec& f, const CoefVec& xbar,
                             const CoefVec& x_j, const CoefVec& x_j1);

/// Logarithmic source function F(lambda) = (ln(e / lambda))^{-p}, F(0) = 0.
/// Throws DomainError (mode 0) for lambda >= e or lambda < 0.
double logarithmic_source_function(double lambda, double p);

struct SourceCondition {
    double p;
    CoefVec y;
};

struct SourceConditionedProblem {
    CoefVec xbar;
    CoefVec f;
};

/// xbar = x1 + F(I - T_l) y and the consistent data f = exp(-Lambda^2 T) xbar.
///
/// The spectral values gamma e^{-lambda_j^2 T} of I - T_l underflow for high
/// modes, so ln(e / value) is evaluated as 1 - ln(gamma) + lambda_j^2 T.
SourceConditionedProblem source_condition_build(const HeatProblem& problem, const SourceCondition& sc,
                                                const CoefVec& x1);

enum class RateModel {
    /// value = C * abscissa^alpha
    power,
    /// value = C * (ln abscissa)^{-p}
    log_power,
};

struct RateFit {
    /// alpha for the power model, p for the log-power model
    double exponent;
    double coefficient;
    /// max_i |fitted_i - value_i| / value_i over the points used
    double max_relative_residual;
    std::size_t points_used;
};

/// Least-squares fit in log-transformed coordinates. Needs at least 4 points
/// with positive coordinates; the log-power model drops points with
/// ln(abscissa) < 1.
RateFit rate_fit(std::span<const std::pair<double, double>> points, RateModel model);

}  // namespace heatmann
