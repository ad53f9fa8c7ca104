// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include "heatmann/experiment.hpp"

#include "heatmann/coef_io.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

using namespace heatmann;
namespace ex = heatmann::experiment;
using heatmann::testing::rel_diff;
using heatmann::testing::uniform;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. fixed point and converged Picard iterate against the oracle
Verdict fixed_point_consistency() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(2024);
    double worst_fp = 0.0, worst_conv = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        auto grid = SpectralGrid::laplacian(1 + rng() % 8);
        // short horizon keeps every mode's contraction factor away from 1
        const double t = uniform(rng, 0.02, 0.05);
        const HeatProblem p(grid, t, uniform(rng, 0.8, 0.95) * gamma_bounds(*grid, t).loose_upper);
        const CoefVec f = forward_solve(p, heatmann::testing::random_vec(grid, rng));
        const CoefVec xbar = backward_exact_oracle(p, f);
        const AffineFixedPointOp op(p, f);
        worst_fp = std::max(worst_fp, rel_diff(fixed_point_apply(op, xbar), xbar));

        RunOptions opts;
        opts.max_iter = 5000;
        const RunRecord r = run_iteration(op, CoefVec::zeros(grid), SegmentingSchedule::picard(), opts);
        worst_conv = std::max(worst_conv, rel_diff(r.final_v, xbar));
    }
    const double secs = seconds_since(t0);
    return {worst_fp <= 1e-12 && worst_conv <= 1e-10 && secs < 1.0,
            "max |Tx-x|/|x| " + fmt(worst_fp) + ", max iterate vs oracle " + fmt(worst_conv) + ", " + fmt(secs) +
                " s"};
}

// 2. single-mode closed form (1 - e^{-1})^{k-1}
Verdict closed_form_convergence() {
    const HeatProblem p(SpectralGrid::laplacian(64), 1.0, 1.0);
    const auto grid = p.grid();
    const CoefVec xbar = CoefVec::single_mode(grid, 1, 1.0);
    const double ratio = 1.0 - std::exp(-1.0);
    RunOptions opts;
    opts.max_iter = 100;

    // direct run: the error is a difference of O(1) numbers and bottoms out near 1e-16
    opts.reference = xbar;
    const RunRecord direct = run_iteration(AffineFixedPointOp(p, forward_solve(p, xbar)), CoefVec::zeros(grid),
                                           SegmentingSchedule::picard(), opts);
    double worst_direct = 0.0;
    std::size_t resolved = 0;
    for (const auto& e : direct.entries) {
        const double expect = std::pow(ratio, static_cast<double>(e.k) - 1.0);
        if (expect < 1e-3) break;
        worst_direct = std::max(worst_direct, rel_diff(*e.error_norm, expect));
        ++resolved;
    }

    // translated run: iterate e = x - xbar under T_l (zero data), the same affine orbit without cancellation
    opts.reference.reset();
    opts.keep_iterates = true;
    const RunRecord shifted = run_iteration(AffineFixedPointOp(p, CoefVec::zeros(grid)), CoefVec::zeros(grid) - xbar,
                                            SegmentingSchedule::picard(), opts);
    const auto scalar = oracle::scalar_picard(1.0, 1.0, 1.0, 0.0, -1.0, 100);
    double worst = 0.0;
    for (std::size_t i = 0; i < shifted.vs.size(); ++i) {
        const double expect = std::pow(ratio, static_cast<double>(i));
        worst = std::max(worst, rel_diff(norm(shifted.vs[i]), expect));
        worst = std::max(worst, rel_diff(std::abs(scalar[i]), expect));
    }
    const bool ok = shifted.vs.size() == 100 && worst <= 1e-12 && worst_direct <= 1e-12;
    return {ok, "k<=100 max rel err " + fmt(worst) + " (translated), direct run " + fmt(worst_direct) + " over k<=" +
                    std::to_string(resolved)};
}

// 3. energy identity along exact-data Picard runs
Verdict energy_identity() {
    std::mt19937_64 rng(303);
    double worst = 0.0;
    for (int run = 0; run < 50; ++run) {
        auto grid = SpectralGrid::laplacian(8);
        const double t = uniform(rng, 0.05, 1.0);
        const HeatProblem p(grid, t, uniform(rng, 0.05, 0.95) * gamma_bounds(*grid, t).loose_upper);
        const CoefVec xbar = heatmann::testing::random_vec(grid, rng);
        const CoefVec f = forward_solve(p, xbar);
        RunOptions opts;
        opts.max_iter = 40;
        opts.keep_iterates = true;
        const RunRecord r =
            run_iteration(AffineFixedPointOp(p, f), heatmann::testing::random_vec(grid, rng), SegmentingSchedule::picard(), opts);
        for (std::size_t j = 0; j + 1 < r.xs.size(); ++j) {
            const double scale = std::pow(norm(xbar - r.xs[j]), 2);
            worst = std::max(worst, energy_identity_check(p, f, xbar, r.xs[j], r.xs[j + 1]) / scale);
        }
    }
    return {worst <= 1e-12, "max relative defect " + fmt(worst)};
}

ex::ExperimentConfig base_config() {
    ex::ExperimentConfig c;
    c.n_modes = 64;
    c.horizon = 1.0;
    c.gamma = 1.0;
    c.schedule = "picard";
    return c;
}

// 4. explicit iteration bound for the discrepancy stop
Verdict discrepancy_bound() {
    const auto t0 = std::chrono::steady_clock::now();
    ex::ExperimentConfig c = base_config();
    c.generator = "rough";
    c.mu = 1.5;
    const auto inst = ex::build_instance(c, false);
    std::size_t trials = 0, violations = 0, capped = 0;
    double tightest = 0.0;
    for (const char* profile : {"white", "single_mode_worst"}) {
        c.profile = profile;
        for (double eps : {1e-1, 3e-2, 1e-2, 3e-3, 1e-3}) {
            for (std::uint64_t seed = 0; seed < 5; ++seed) {
                const auto t = ex::run_trial(c, inst, eps, seed);
                ++trials;
                if (t.stopped_by != StopReason::predicate) ++capped;
                if (static_cast<double>(t.k_stop) > *t.bound_rhs) ++violations;
                tightest = std::max(tightest, static_cast<double>(t.k_stop) / *t.bound_rhs);
            }
        }
    }
    const double secs = seconds_since(t0);
    return {violations == 0 && capped == 0 && secs < 60.0,
            std::to_string(trials) + " trials, " + std::to_string(violations) + " over the bound, max k/bound " +
                fmt(tightest) + ", " + fmt(secs) + " s"};
}

// 5. error trace along a run follows C (ln k)^{-p}
Verdict source_trace_rate() {
    bool ok = true;
    std::string detail;
    for (double p : {1.0, 2.0}) {
        for (double eps : {1e-4, 1e-5}) {
            ex::ExperimentConfig c = base_config();
            c.generator = "source-condition";
            c.source = "rough";
            c.p = p;
            c.mu = 2.5;
            const auto inst = ex::build_instance(c, false);
            const auto t = ex::run_trial(c, inst, eps, 0);
            std::vector<std::pair<double, double>> pts;
            for (const auto& e : t.record.entries) {
                if (e.k >= 3) pts.emplace_back(static_cast<double>(e.k), *e.error_norm);
            }
            const RateFit fit = rate_fit(pts, RateModel::log_power);
            const bool within = std::abs(fit.exponent - p) <= 0.3 * p && t.stopped_by == StopReason::predicate;
            ok = ok && within;
            detail += (detail.empty() ? "" : "; ") + std::string("p=") + fmt(p) + " eps=" + fmt(eps) + ": fit " +
                      fmt(fit.exponent) + " (k<=" + std::to_string(t.k_stop) + ", residual " +
                      fmt(fit.max_relative_residual) + ")";
        }
    }
    return {ok, detail};
}

// 6. final error vs (ln eps^{-1/2})^{-p}
Verdict source_final_rate() {
    const double p = 1.0;
    ex::ExperimentConfig c = base_config();
    c.generator = "source-condition";
    c.source = "flat";
    c.p = p;
    c.mu = 2.5;
    const auto inst = ex::build_instance(c, false);
    const std::vector<double> grid_eps{1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
    std::vector<std::pair<double, double>> pts;
    bool all_stopped = true;
    for (double eps : grid_eps) {
        const auto t = ex::run_trial(c, inst, eps, 0);
        all_stopped = all_stopped && t.stopped_by == StopReason::predicate;
        pts.emplace_back(1.0 / std::sqrt(eps), *t.final_error);
    }
    bool monotone = true;
    for (std::size_t i = 1; i < pts.size(); ++i) monotone = monotone && pts[i].second <= pts[i - 1].second;
    const RateFit fit = rate_fit(pts, RateModel::log_power);

    // constant fitted on even grid points with p fixed, checked on all points
    double log_c = 0.0;
    std::size_t n_fit = 0;
    for (std::size_t i = 0; i < pts.size(); i += 2) {
        log_c += std::log(pts[i].second) + p * std::log(std::log(pts[i].first));
        ++n_fit;
    }
    const double cfit = std::exp(log_c / static_cast<double>(n_fit));
    double worst_ratio = 0.0;
    for (const auto& [x, err] : pts) {
        worst_ratio = std::max(worst_ratio, err / (cfit * std::pow(std::log(x), -p)));
    }
    const bool ok = all_stopped && monotone && std::abs(fit.exponent - p) <= 0.3 * p && worst_ratio <= 1.5;
    return {ok, "fit " + fmt(fit.exponent) + " for p=1, monotone " + (monotone ? "yes" : "no") +
                    ", max err/(C (ln x)^-p) " + fmt(worst_ratio)};
}

// 7. noisy residual is nonincreasing for Picard
Verdict residual_monotone() {
    std::mt19937_64 rng(707);
    std::size_t increases = 0;
    for (int trial = 0; trial < 100; ++trial) {
        auto grid = SpectralGrid::laplacian(1 + rng() % 64);
        const double t = uniform(rng, 0.05, 2.0);
        const HeatProblem p(grid, t, uniform(rng, 0.05, 0.99) * gamma_bounds(*grid, t).loose_upper);
        const CoefVec f = forward_solve(p, heatmann::testing::random_vec(grid, rng));
        const auto profile = static_cast<NoiseProfile>(rng() % 3);
        const NoisyData nd = add_noise(f, uniform(rng, 1e-4, 1e-1), rng(), profile);
        RunOptions opts;
        opts.max_iter = 200;
        const RunRecord r =
            run_iteration(AffineFixedPointOp(p, nd.f_eps), heatmann::testing::random_vec(grid, rng), SegmentingSchedule::picard(), opts);
        for (std::size_t i = 1; i < r.entries.size(); ++i) {
            if (r.entries[i].residual_norm > r.entries[i - 1].residual_norm * (1.0 + 1e-12)) ++increases;
        }
    }
    return {increases == 0, std::to_string(increases) + " increases over 100 trials x 200 steps"};
}

// 8. segmenting and general-matrix paths agree
Verdict segmenting_general() {
    std::mt19937_64 rng(808);
    double worst = 0.0;
    std::vector<SegmentingSchedule> schedules{SegmentingSchedule::constant(0.1), SegmentingSchedule::constant(0.5),
                                              SegmentingSchedule::constant(0.9), SegmentingSchedule::harmonic()};
    for (const auto& sched : schedules) {
        for (int trial = 0; trial < 5; ++trial) {
            auto grid = SpectralGrid::laplacian(1 + rng() % 16);
            const double t = uniform(rng, 0.05, 1.0);
            const HeatProblem p(grid, t, uniform(rng, 0.05, 0.95) * gamma_bounds(*grid, t).loose_upper);
            const AffineFixedPointOp op(p, heatmann::testing::random_vec(grid, rng));
            const CoefVec x1 = heatmann::testing::random_vec(grid, rng);
            RunOptions opts;
            opts.max_iter = 200;
            opts.keep_iterates = true;
            const RunRecord a = run_iteration(op, x1, sched, opts);
            const RunRecord b = run_iteration(op, x1, MannMatrix::segmenting(sched), opts);
            for (std::size_t k = 0; k < a.vs.size(); ++k) worst = std::max(worst, rel_diff(a.vs[k], b.vs[k]));
        }
    }
    return {worst <= 1e-12, "max relative difference over 200 steps " + fmt(worst)};
}

// 9. asymptotic regularity for d = 1/2, stall for d_k = 2^{-k}
Verdict asymptotic_regularity() {
    ex::ExperimentConfig c = base_config();
    auto inst = ex::build_instance(c, false);
    std::mt19937_64 rng(909);
    double worst_half = 0.0, least_geo = INFINITY;
    for (int trial = 0; trial < 10; ++trial) {
        const CoefVec x1 = heatmann::testing::uniform_vec(inst.problem.grid(), rng, 0.5);
        const AffineFixedPointOp op(inst.problem, inst.f);
        RunOptions opts;
        opts.max_iter = 500;
        const auto half = asymptotic_regularity_trace(run_iteration(op, x1, SegmentingSchedule::constant(0.5), opts));
        const auto geo = asymptotic_regularity_trace(run_iteration(op, x1, SegmentingSchedule::geometric(), opts));
        worst_half = std::max(worst_half, half.values.back() / half.values.front());
        least_geo = std::min(least_geo, geo.values.back() / geo.values.front());
    }
    return {worst_half <= 1e-3 && least_geo > 0.1,
            "final/initial defect: d=1/2 at most " + fmt(worst_half) + ", d=2^-k at least " + fmt(least_geo)};
}

// 10. ||xbar - x1||_{2p} = ||y||_0
Verdict sobolev_isometry() {
    const HeatProblem p(SpectralGrid::laplacian(64), 1.0, 1.0);
    std::mt19937_64 rng(1010);
    double worst = 0.0;
    for (double pp : {0.5, 1.0, 2.0}) {
        for (int trial = 0; trial < 5; ++trial) {
            const CoefVec y = heatmann::testing::random_vec(p.grid(), rng);
            const CoefVec x1 = CoefVec::zeros(p.grid());
            const auto built = source_condition_build(p, SourceCondition{pp, y}, x1);
            worst = std::max(worst, rel_diff(hs_norm(built.xbar - x1, 2.0 * pp), norm(y)));
        }
    }
    return {worst <= 1e-12, "max relative difference " + fmt(worst)};
}

// 11. gamma bounds of the worked example
Verdict gamma_bounds_example() {
    const auto grid = SpectralGrid::laplacian(64);
    const GammaBounds b = gamma_bounds(*grid, 1.0);
    const double e = std::numbers::e;
    double worst = rel_diff(grid->min_eigenvalue(), 1.0);
    worst = std::max(worst, rel_diff(b.loose_upper, 2.0 * e));
    if (!b.strict_upper || !b.lambda_tilde) return {false, "strict bound missing"};
    worst = std::max(worst, rel_diff(*b.strict_upper, e));
    worst = std::max(worst, rel_diff(*b.lambda_tilde, std::sqrt(1.0 - std::numbers::ln2)));
    bool admissible = true;
    try {
        const HeatProblem p(grid, 1.0, 1.0);
        admissible = !p.injectivity_bound_exceeded();
    } catch (const ConfigError&) {
        admissible = false;
    }
    return {worst <= 1e-14 && admissible, "max relative error " + fmt(worst) + ", gamma=1 admissible"};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
        {"fixed-point consistency", fixed_point_consistency},
        {"closed-form single-mode convergence", closed_form_convergence},
        {"energy identity", energy_identity},
        {"discrepancy stop iteration bound", discrepancy_bound},
        {"error trace rate under source condition", source_trace_rate},
        {"final error rate under source condition", source_final_rate},
        {"residual monotonicity", residual_monotone},
        {"segmenting/general equivalence", segmenting_general},
        {"asymptotic regularity and negative control", asymptotic_regularity},
        {"Sobolev isometry", sobolev_isometry},
        {"gamma bounds worked example", gamma_bounds_example},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s %2zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str());
        std::fflush(stdout);
        if (!v.pass) ++failed;
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
