#pragma once

#include "heatmann/heat_operators.hpp"
#include "heatmann/spectral.hpp"

#include <concepts>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace heatmann {

/// Diagonal sequence d_k = a_{k+1,k+1} (k >= 1) of a segmenting Mann matrix.
///
/// `divergent` records whether sum_k d_k (1 - d_k) is known to diverge. The
/// property itself is not machine-checkable; runs report the partial sums and
/// warn when a schedule tagged divergent stays below a threshold.
class SegmentingSchedule {
public:
    using Generator = std::function<double(std::size_t k)>;

    SegmentingSchedule(std::string name, Generator d, bool divergent);

    /// d_k = d for all k; divergent iff 0 < d < 1.
    static SegmentingSchedule constant(double d);
    /// d_k = 1: plain successive approximation (A = I).
    static SegmentingSchedule picard();
    /// d_k = 1/(k+1).
    static SegmentingSchedule harmonic();
    /// d_k = 2^{-k}; the sum converges, a negative control for the divergence hypothesis.
    static SegmentingSchedule geometric();

    /// d_k for k >= 1. Throws ConfigError when the generated value leaves [0, 1].
    double d(std::size_t k) const;
    const std::string& name() const noexcept { return name_; }
    bool divergent() const noexcept { return divergent_; }

private:
    std::string name_;
    Generator d_;
    bool divergent_;
};

/// Lower-triangular row-stochastic Mann matrix, rows materialized on demand.
class MannMatrix {
public:
    /// Explicit rows; row i (1-based) must have exactly i entries. Validated
    /// against nonnegativity and unit row sums (1e-12).
    static MannMatrix from_rows(std::vector<std::vector<double>> rows, std::string name = "matrix");
    /// Rows generated lazily from a segmenting schedule.
    static MannMatrix segmenting(SegmentingSchedule schedule);

    /// Row i (1-based), materializing it if the matrix has a generator.
    const std::vector<double>& row(std::size_t i);
    std::size_t materialized_rows() const noexcept { return rows_.size(); }
    const std::string& name() const noexcept { return name_; }

private:
    MannMatrix() = default;
    std::vector<std::vector<double>> rows_;
    std::optional<SegmentingSchedule> generator_;
    std::string name_;
};

/// Rows 1..n_rows of the segmenting matrix with diagonal d.
MannMatrix segmenting_to_matrix(const SegmentingSchedule& schedule, std::size_t n_rows);

/// Throws ConfigError unless `row` is a valid row i of a Mann matrix.
void validate_mann_row(const std::vector<double>& row, std::size_t i);

template <typename Op>
concept FixedPointMap = requires(const Op& op, const CoefVec& v) {
    { op.apply(v) } -> std::convertible_to<CoefVec>;
};

/// Iteration index k (1-based), x_k and v_k. `history` holds x_1..x_k and is
/// only kept for the general-matrix path.
struct IterationState {
    std::size_t k = 1;
    CoefVec x;
    CoefVec v;
    std::vector<CoefVec> history;

    static IterationState start(const CoefVec& x1, bool keep_history);
};

/// Given x_{k+1} = T(v_k), forms v_{k+1} = sum_j a_{k+1,j} x_j.
IterationState advance_general(IterationState state, MannMatrix& matrix, CoefVec x_next);
/// Given x_{k+1} = T(v_k), forms v_{k+1} = (1 - d_k) v_k + d_k x_{k+1}.
IterationState advance_segmenting(IterationState state, double d_k, CoefVec x_next);

template <FixedPointMap Op>
IterationState mann_step_general(IterationState state, MannMatrix& matrix, const Op& op) {
    CoefVec x_next = op.apply(state.v);
    return advance_general(std::move(state), matrix, std::move(x_next));
}

template <FixedPointMap Op>
IterationState mann_step_segmenting(IterationState state, const SegmentingSchedule& schedule, const Op& op) {
    CoefVec x_next = op.apply(state.v);
    const double d_k = schedule.d(state.k);
    return advance_segmenting(std::move(state), d_k, std::move(x_next));
}

struct TraceEntry {
    std::size_t k;
    /// ||gamma f - (I - T_l) v_k||
    double residual_norm;
    /// ||(I - T) v_k||, computed from x_{k+1} = T(v_k)
    double fixed_point_defect;
    /// ||v_{k+1} - v_k||; absent on the final entry
    std::optional<double> v_diff_norm;
    /// ||xbar - v_k|| when a reference solution was supplied
    std::optional<double> error_norm;
    /// sum_{i<k} d_i (1 - d_i)
    double sum_dk_1mdk;
};

struct StopPolicy {
    std::string name;
    std::function<bool(const TraceEntry&)> fires;
};

/// Stops once the residual norm is at or below `tolerance` (exact-data runs).
StopPolicy residual_tolerance_stop(double tolerance);

enum class StopReason { predicate, cap };
const char* to_string(StopReason reason) noexcept;

struct RunRecord {
    std::string scheme_name;
    std::vector<TraceEntry> entries;
    StopReason stop_reason = StopReason::cap;
    std::string stop_name;
    CoefVec final_x;
    CoefVec final_v;
    /// x_k and v_k for every recorded k, only when requested.
    std::vector<CoefVec> xs;
    std::vector<CoefVec> vs;
    std::vector<std::string> warnings;

    std::size_t stop_index() const { return entries.back().k; }
    const TraceEntry& last() const { return entries.back(); }
};

using IterationScheme = std::variant<SegmentingSchedule, MannMatrix>;

struct RunOptions {
    std::size_t max_iter = 1000;
    std::optional<StopPolicy> stop;
    std::optional<CoefVec> reference;
    bool keep_iterates = false;
    /// Partial-sum level a divergent-tagged schedule should reach by the end of the run.
    double divergence_threshold = 1.0;
};

/// Runs M(x1, A, T) until the stop predicate fires or max_iter iterates are recorded.
RunRecord run_iteration(const AffineFixedPointOp& op, const CoefVec& x1, IterationScheme scheme,
                        const RunOptions& options);

struct RegularityCheck {
    std::size_t burn_in = 3;
    double tolerance = 1e-6;
};

struct RegularityTrace {
    std::vector<double> values;
    bool nonincreasing_after_burn_in = true;
    bool final_below_tolerance = true;
    bool conforming() const noexcept { return nonincreasing_after_burn_in && final_below_tolerance; }
};

/// ||(I - T) v_k|| along a run, with a conformance verdict.
RegularityTrace asymptotic_regularity_trace(const RunRecord& record, const RegularityCheck& check = {});

}  // namespace heatmann
