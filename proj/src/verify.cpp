#include "heatmann/experiment.hpp"

#include "heatmann/coef_io.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <random>

namespace heatmann::experiment {

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

struct NamedCheck {
    const char* name;
    std::function<Outcome()> run;
};

CoefVec gaussian_vec(const GridPtr& grid, std::mt19937_64& rng) {
    std::normal_distribution<double> dist;
    std::vector<double> c(grid->n_modes());
    for (double& x : c) x = dist(rng);
    return CoefVec(grid, std::move(c));
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Small random problems where every mode stays representable.
HeatProblem random_small_problem(std::mt19937_64& rng) {
    auto grid = SpectralGrid::laplacian(1 + rng() % 8);
    const double t = uniform(rng, 0.05, 1.0);
    return HeatProblem(grid, t, uniform(rng, 0.05, 0.95) * gamma_bounds(*grid, t).loose_upper);
}

std::string fmt(double x) { return io::format_double(x); }

std::vector<NamedCheck> build_checks(OperatorFault fault) {
    std::vector<NamedCheck> checks;

    checks.push_back({"gamma_bounds", [] {
        const GammaBounds b = gamma_bounds(*SpectralGrid::laplacian(64), 1.0);
        const double e1 = std::abs(b.loose_upper / (2.0 * std::numbers::e) - 1.0);
        const double e2 = b.strict_upper ? std::abs(*b.strict_upper / std::numbers::e - 1.0) : 1.0;
        return Outcome{e1 <= 1e-15 && e2 <= 1e-14, "rel err loose " + fmt(e1) + ", strict " + fmt(e2)};
    }});

    checks.push_back({"energy_identity", [fault] {
        std::mt19937_64 rng(101);
        double worst = 0.0;
        for (int trial = 0; trial < 50; ++trial) {
            const HeatProblem p = random_small_problem(rng);
            const CoefVec xbar = gaussian_vec(p.grid(), rng);
            const CoefVec f = forward_solve(p, xbar);
            const AffineFixedPointOp op = AffineFixedPointOp(p, f).with_fault(fault);
            const CoefVec xj = gaussian_vec(p.grid(), rng);
            const CoefVec xj1 = op.apply(xj);
            const double scale = std::max(1.0, std::pow(norm(xbar - xj), 2));
            worst = std::max(worst, energy_identity_check(p, f, xbar, xj, xj1) / scale);
        }
        return Outcome{worst <= 1e-10, "max scaled defect " + fmt(worst)};
    }});

    checks.push_back({"nonexpansive_map", [fault] {
        std::mt19937_64 rng(102);
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            auto grid = SpectralGrid::laplacian(1 + rng() % 64);
            const double t = uniform(rng, 0.01, 2.0);
            const HeatProblem p(grid, t, uniform(rng, 0.01, 0.999) * gamma_bounds(*grid, t).loose_upper);
            const AffineFixedPointOp op = AffineFixedPointOp(p, gaussian_vec(grid, rng)).with_fault(fault);
            const CoefVec a = gaussian_vec(grid, rng);
            const CoefVec b = gaussian_vec(grid, rng);
            worst = std::max(worst, norm(op.apply(a) - op.apply(b)) / norm(a - b));
        }
        return Outcome{worst <= 1.0 + 1e-12, "max Lipschitz ratio " + fmt(worst)};
    }});

    checks.push_back({"no_unit_eigenvalue", [] {
        const HeatProblem p(SpectralGrid::laplacian(64), 1.0, 1.0);
        double largest = -INFINITY;
        for (std::size_t j = 1; j <= 64; ++j) largest = std::max(largest, p.log_damping(j));
        // 1 - tau_j = exp(log_damping) > 0 for every mode
        return Outcome{std::isfinite(largest) && std::isfinite(p.log_damping(64)),
                       "largest log(1 - tau_j) " + fmt(largest)};
    }});

    checks.push_back({"path_equivalence", [fault] {
        std::mt19937_64 rng(103);
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const HeatProblem p = random_small_problem(rng);
            const AffineFixedPointOp op = AffineFixedPointOp(p, gaussian_vec(p.grid(), rng)).with_fault(fault);
            const CoefVec phi = gaussian_vec(p.grid(), rng);
            const CoefVec a = op.apply(phi);
            const double scale = std::max({norm(a), norm(phi), p.gamma() * norm(op.data())});
            worst = std::max(worst, norm(a - op.apply_diagonal(phi)) / scale);
        }
        return Outcome{worst <= 1e-15, "max relative difference " + fmt(worst)};
    }});

    checks.push_back({"fixed_point_identity", [fault] {
        std::mt19937_64 rng(104);
        double worst = 0.0;
        for (int trial = 0; trial < 50; ++trial) {
            const HeatProblem p = random_small_problem(rng);
            const CoefVec f = gaussian_vec(p.grid(), rng);
            const CoefVec xbar = backward_exact_oracle(p, f);
            const AffineFixedPointOp op = AffineFixedPointOp(p, f).with_fault(fault);
            worst = std::max(worst, norm(op.apply(xbar) - xbar) / norm(xbar));
        }
        return Outcome{worst <= 1e-12, "max relative defect " + fmt(worst)};
    }});

    checks.push_back({"segmenting_general_equivalence", [fault] {
        std::mt19937_64 rng(105);
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            const HeatProblem p = random_small_problem(rng);
            const AffineFixedPointOp op = AffineFixedPointOp(p, gaussian_vec(p.grid(), rng)).with_fault(fault);
            const CoefVec x1 = gaussian_vec(p.grid(), rng);
            const auto sched = SegmentingSchedule::constant(uniform(rng, 0.1, 0.9));
            RunOptions opts;
            opts.max_iter = 30;
            const RunRecord a = run_iteration(op, x1, sched, opts);
            const RunRecord b = run_iteration(op, x1, segmenting_to_matrix(sched, 31), opts);
            worst = std::max(worst, norm(a.final_v - b.final_v) / std::max(norm(a.final_v), 1e-300));
        }
        return Outcome{worst <= 1e-12, "max relative difference " + fmt(worst)};
    }});

    checks.push_back({"source_condition_map", [] {
        const HeatProblem p(SpectralGrid::laplacian(64), 1.0, 1.0);
        std::vector<double> y(64);
        for (std::size_t j = 0; j < 64; ++j) y[j] = 1.0 / static_cast<double>(j + 1);
        const CoefVec x1 = CoefVec::zeros(p.grid());
        const auto built = source_condition_build(p, SourceCondition{2.0, CoefVec(p.grid(), y)}, x1);
        double worst = 0.0;
        for (std::size_t j = 1; j <= 64; ++j) {
            const double l = static_cast<double>(j);
            const double expect = y[j - 1] / std::pow(1.0 + l * l, 2.0);  // gamma = T = 1
            worst = std::max(worst, std::abs(built.xbar.mode(j) / expect - 1.0));
        }
        return Outcome{worst <= 1e-13, "max relative error " + fmt(worst)};
    }});

    checks.push_back({"residual_monotone", [fault] {
        const HeatProblem p(SpectralGrid::laplacian(64), 1.0, 1.0);
        std::vector<double> c(64);
        for (std::size_t j = 0; j < 64; ++j) c[j] = 1.0 / static_cast<double>(j + 1);
        const CoefVec f = forward_solve(p, CoefVec(p.grid(), c));
        const AffineFixedPointOp op = AffineFixedPointOp(p, f).with_fault(fault);
        RunOptions opts;
        opts.max_iter = 200;
        const RunRecord r = run_iteration(op, CoefVec::zeros(p.grid()), SegmentingSchedule::picard(), opts);
        std::size_t bad = 0;
        for (std::size_t i = 1; i < r.entries.size(); ++i) {
            if (r.entries[i].residual_norm > r.entries[i - 1].residual_norm * (1.0 + 1e-12)) ++bad;
        }
        return Outcome{bad == 0, std::to_string(bad) + " increases over " + std::to_string(r.entries.size()) +
                                     " steps"};
    }});

    checks.push_back({"discrepancy_iteration_bound", [fault] {
        const HeatProblem p(SpectralGrid::laplacian(64), 1.0, 1.0);
        std::vector<double> c(64);
        for (std::size_t j = 0; j < 64; ++j) c[j] = 1.0 / static_cast<double>(j + 1);
        const CoefVec xbar(p.grid(), c);
        const CoefVec f = forward_solve(p, xbar);
        const CoefVec x1 = CoefVec::zeros(p.grid());
        const double mu = 1.5;
        std::size_t violations = 0;
        std::size_t runs = 0;
        for (double eps : {1e-1, 1e-2, 1e-3}) {
            for (std::uint64_t seed = 0; seed < 3; ++seed) {
                const NoisyData nd = add_noise(f, eps, seed, NoiseProfile::white);
                const AffineFixedPointOp op = AffineFixedPointOp(p, nd.f_eps).with_fault(fault);
                RunOptions opts;
                opts.max_iter = 100000;
                opts.stop = discrepancy_stop(StoppingRule{mu, opts.max_iter}, eps);
                const RunRecord r = run_iteration(op, x1, SegmentingSchedule::picard(), opts);
                const double bound = discrepancy_iteration_bound(mu, norm(xbar - x1), eps);
                ++runs;
                if (r.stop_reason != StopReason::predicate || static_cast<double>(r.stop_index()) > bound) {
                    ++violations;
                }
            }
        }
        return Outcome{violations == 0, std::to_string(violations) + " of " + std::to_string(runs) +
                                            " runs over the bound"};
    }});

    return checks;
}

}  // namespace

int cmd_verify(const CommandOptions& options, std::ostream& out, std::ostream& err) {
    const char* first_failure = nullptr;
    std::size_t passed = 0;
    const auto checks = build_checks(options.fault);
    for (const auto& c : checks) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = Outcome{false, std::string("exception: ") + e.what()};
        }
        out << (o.pass ? "PASS " : "FAIL ") << c.name << "  " << o.detail << "\n";
        if (o.pass) {
            ++passed;
        } else if (!first_failure) {
            first_failure = c.name;
        }
    }
    out << passed << "/" << checks.size() << " checks passed\n";
    if (first_failure) {
        err << "verify failed: first failing check is " << first_failure << "\n";
        return kCheckFailed;
    }
    return kSuccess;
}

}  // namespace heatmann::experiment
