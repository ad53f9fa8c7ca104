#include "heatmann/mann.hpp"

#include "heatmann/regularization.hpp"

#include <cmath>
#include <sstream>

namespace heatmann {

namespace {

std::string format_param(double d) {
    std::ostringstream s;
    s << d;
    return s.str();
}

}  // namespace

SegmentingSchedule::SegmentingSchedule(std::string name, Generator d, bool divergent)
    : name_(std::move(name)), d_(std::move(d)), divergent_(divergent) {
    if (!d_) {
        throw ConfigError("segmenting schedule needs a generator");
    }
}

SegmentingSchedule SegmentingSchedule::constant(double d) {
    if (!(d >= 0.0 && d <= 1.0)) {
        throw ConfigError("constant schedule value " + format_param(d) + " lies outside [0, 1]");
    }
    return SegmentingSchedule("constant(" + format_param(d) + ")", [d](std::size_t) { return d; },
                              d > 0.0 && d < 1.0);
}

SegmentingSchedule SegmentingSchedule::picard() {
    return SegmentingSchedule("picard", [](std::size_t) { return 1.0; }, false);
}

SegmentingSchedule SegmentingSchedule::harmonic() {
    return SegmentingSchedule("harmonic", [](std::size_t k) { return 1.0 / static_cast<double>(k + 1); }, true);
}

SegmentingSchedule SegmentingSchedule::geometric() {
    return SegmentingSchedule("geometric", [](std::size_t k) { return std::ldexp(1.0, -static_cast<int>(k)); },
                              false);
}

double SegmentingSchedule::d(std::size_t k) const {
    if (k == 0) {
        throw ConfigError("schedule index k starts at 1");
    }
    const double value = d_(k);
    if (!(value >= 0.0 && value <= 1.0)) {
        std::ostringstream msg;
        msg << "schedule '" << name_ << "' produced d_" << k << " = " << value << " outside [0, 1]";
        throw ConfigError(msg.str());
    }
    return value;
}

void validate_mann_row(const std::vector<double>& row, std::size_t i) {
    if (row.size() != i) {
        std::ostringstream msg;
        msg << "Mann matrix row " << i << " must have " << i << " entries, has " << row.size();
        throw ConfigError(msg.str());
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
        if (!(row[j] >= 0.0) || !std::isfinite(row[j])) {
            std::ostringstream msg;
            msg << "Mann matrix entry a(" << i << "," << j + 1 << ") = " << row[j] << " is not nonnegative";
            throw ConfigError(msg.str());
        }
        sum += row[j];
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "Mann matrix row " << i << " sums to " << sum << ", not 1";
        throw ConfigError(msg.str());
    }
}

MannMatrix MannMatrix::from_rows(std::vector<std::vector<double>> rows, std::string name) {
    if (rows.empty()) {
        throw ConfigError("Mann matrix needs at least one row");
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        validate_mann_row(rows[i], i + 1);
    }
    MannMatrix m;
    m.rows_ = std::move(rows);
    m.name_ = std::move(name);
    return m;
}

MannMatrix MannMatrix::segmenting(SegmentingSchedule schedule) {
    MannMatrix m;
    m.name_ = schedule.name();
    m.generator_ = std::move(schedule);
    m.rows_.push_back({1.0});
    return m;
}

const std::vector<double>& MannMatrix::row(std::size_t i) {
    if (i == 0) {
        throw ConfigError("Mann matrix rows are 1-based");
    }
    while (rows_.size() < i) {
        if (!generator_) {
            std::ostringstream msg;
            msg << "Mann matrix '" << name_ << "' has " << rows_.size() << " rows; row " << i << " requested";
            throw ConfigError(msg.str());
        }
        // a_{k+1,j} = (1 - d_k) a_{k,j} for j <= k, a_{k+1,k+1} = d_k
        const std::size_t k = rows_.size();
        const double d = generator_->d(k);
        std::vector<double> next;
        next.reserve(k + 1);
        for (const double a : rows_.back()) next.push_back((1.0 - d) * a);
        next.push_back(d);
        rows_.push_back(std::move(next));
    }
    return rows_[i - 1];
}

MannMatrix segmenting_to_matrix(const SegmentingSchedule& schedule, std::size_t n_rows) {
    if (n_rows == 0) {
        throw ConfigError("segmenting_to_matrix needs n_rows >= 1");
    }
    MannMatrix m = MannMatrix::segmenting(schedule);
    m.row(n_rows);
    return m;
}

IterationState IterationState::start(const CoefVec& x1, bool keep_history) {
    IterationState s{1, x1, x1, {}};
    if (keep_history) s.history.push_back(x1);
    return s;
}

IterationState advance_general(IterationState state, MannMatrix& matrix, CoefVec x_next) {
    if (state.history.size() != state.k) {
        std::ostringstream msg;
        msg << "general Mann step at k = " << state.k << " needs x_1..x_k, history holds " << state.history.size();
        throw ConfigError(msg.str());
    }
    require_same_grid(state.v, x_next);
    state.history.push_back(std::move(x_next));
    const std::size_t k1 = state.k + 1;
    const std::vector<double>& a = matrix.row(k1);
    std::vector<double> v(state.v.size(), 0.0);
    for (std::size_t j = 0; j < k1; ++j) {
        if (a[j] == 0.0) continue;
        const CoefVec& xj = state.history[j];
        for (std::size_t m = 0; m < v.size(); ++m) v[m] += a[j] * xj[m];
    }
    state.v = CoefVec(state.v.grid(), std::move(v));
    state.x = state.history.back();
    state.k = k1;
    return state;
}

IterationState advance_segmenting(IterationState state, double d_k, CoefVec x_next) {
    state.v = lincomb(1.0 - d_k, state.v, d_k, x_next);
    state.x = std::move(x_next);
    state.k += 1;
    return state;
}

StopPolicy residual_tolerance_stop(double tolerance) {
    if (!(tolerance >= 0.0)) {
        throw ConfigError("residual tolerance must be nonnegative");
    }
    std::ostringstream name;
    name << "residual<=" << tolerance;
    return StopPolicy{name.str(), [tolerance](const TraceEntry& e) { return e.residual_norm <= tolerance; }};
}

const char* to_string(StopReason reason) noexcept {
    switch (reason) {
        case StopReason::predicate: return "predicate";
        case StopReason::cap: return "cap";
    }
    return "unknown";
}

RunRecord run_iteration(const AffineFixedPointOp& op, const CoefVec& x1, IterationScheme scheme,
                        const RunOptions& options) {
    if (options.max_iter == 0) {
        throw ConfigError("max_iter must be at least 1");
    }
    if (options.reference) require_same_grid(x1, *options.reference);

    const bool general = std::holds_alternative<MannMatrix>(scheme);
    IterationState state = IterationState::start(x1, general);
    const std::string scheme_name =
        general ? std::get<MannMatrix>(scheme).name() : std::get<SegmentingSchedule>(scheme).name();

    std::vector<TraceEntry> entries;
    std::vector<CoefVec> xs, vs;
    double sum_d = 0.0;
    StopReason reason = StopReason::cap;

    for (;;) {
        CoefVec x_next = op.apply(state.v);
        TraceEntry entry{state.k,
                         norm(residual(op.problem(), op.data(), state.v)),
                         norm(state.v - x_next),
                         std::nullopt,
                         options.reference ? std::optional<double>(norm(*options.reference - state.v)) : std::nullopt,
                         sum_d};
        entries.push_back(entry);
        if (options.keep_iterates) {
            xs.push_back(state.x);
            vs.push_back(state.v);
        }
        if (options.stop && options.stop->fires(entries.back())) {
            reason = StopReason::predicate;
            break;
        }
        if (state.k >= options.max_iter) break;

        double d_k;
        CoefVec v_prev = state.v;
        if (general) {
            auto& matrix = std::get<MannMatrix>(scheme);
            state = advance_general(std::move(state), matrix, std::move(x_next));
            d_k = matrix.row(state.k).back();
        } else {
            d_k = std::get<SegmentingSchedule>(scheme).d(state.k);
            state = advance_segmenting(std::move(state), d_k, std::move(x_next));
        }
        sum_d += d_k * (1.0 - d_k);
        entries.back().v_diff_norm = norm(state.v - v_prev);
    }

    std::vector<std::string> warnings;
    const bool tagged_divergent = !general && std::get<SegmentingSchedule>(scheme).divergent();
    if (tagged_divergent && sum_d <= options.divergence_threshold && entries.size() > 1) {
        std::ostringstream msg;
        msg << "schedule '" << scheme_name << "' is tagged divergent but sum d_k(1-d_k) = " << sum_d
            << " after " << entries.size() << " iterations (threshold " << options.divergence_threshold << ")";
        warnings.push_back(msg.str());
    }

    return RunRecord{scheme_name,
                     std::move(entries),
                     reason,
                     options.stop ? options.stop->name : std::string("none"),
                     state.x,
                     state.v,
                     std::move(xs),
                     std::move(vs),
                     std::move(warnings)};
}

RegularityTrace asymptotic_regularity_trace(const RunRecord& record, const RegularityCheck& check) {
    RegularityTrace out;
    out.values.reserve(record.entries.size());
    for (const auto& e : record.entries) out.values.push_back(e.fixed_point_defect);
    if (out.values.empty()) return out;
    const double slack = 1e-12 * out.values.front();
    for (std::size_t i = check.burn_in + 1; i < out.values.size(); ++i) {
        if (out.values[i] > out.values[i - 1] + slack) {
            out.nonincreasing_after_burn_in = false;
            break;
        }
    }
    out.final_below_tolerance = out.values.back() <= check.tolerance;
    return out;
}

}  // namespace heatmann
