#include "eirnri/solver.hpp"

#include "eirnri/datagen.hpp"
#include "eirnri/regularizer.hpp"
#include "eirnri/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace eirnri;

namespace {

struct Synthetic {
    Matrix x_star;
    ProblemInstance instance;
};

Synthetic make_synthetic(int m, int n, int r, double sr, std::uint64_t seed, double lambda_rel = 0.1) {
    Matrix xs = gen_lowrank(m, n, r, seed);
    const Mask mask = gen_mask(m, n, {MaskSpec::Kind::random_uniform, sr, {}, seed + 1});
    const double lambda = lambda_rel * xs.cwiseAbs().maxCoeff();
    return {xs, make_completion_instance(xs, mask, lambda, 0.5)};
}

}  // namespace

TEST_CASE("validate_alpha branches") {
    CHECK(validate_alpha(0.7, 1.1, 1.0, true) == doctest::Approx(1.0));
    CHECK(validate_alpha(0.0, 1.1, 1.0, false) ==
          doctest::Approx(std::sqrt(1.1 / 4.1)));  // cap ~ 0.518
    CHECK_THROWS_AS(validate_alpha(0.9, 1.1, 1.0, false), std::invalid_argument);
    CHECK_THROWS_AS(validate_alpha(1.0, 1.1, 1.0, true), std::invalid_argument);
    CHECK_THROWS_AS(validate_alpha(0.5, 1.0, 1.0, true), std::invalid_argument);  // beta <= L
}

TEST_CASE("misconfigured beta fails before any iteration") {
    const auto prob = make_synthetic(10, 10, 2, 0.8, 5);
    SolverConfig config;
    config.beta = 0.9;  // below the Lipschitz constant
    CHECK_THROWS_AS(solve(prob.instance, config), std::invalid_argument);
}

TEST_CASE("zero data with a large lambda collapses to the zero matrix") {
    const int m = 10;
    Mask mask;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) mask.push_back({i, j});
    ProblemInstance inst(Matrix::Zero(m, m), mask, 100.0, 0.5);
    SolverConfig config;
    const SolveOutcome out = solve(inst, config);
    CHECK(out.rank_final == 0);
    CHECK(out.iterations <= 2);
    CHECK(out.x_final.norm() == 0.0);
    CHECK(out.eps_degenerate_event);
}

TEST_CASE("recovers a small synthetic instance with rank identification") {
    const auto prob = make_synthetic(60, 60, 3, 0.6, 11);
    SolverConfig config;
    config.rng_seed = 12;

    std::vector<Vector> eps_hist;
    std::vector<int> rank_hist;
    SolveOptions options;
    options.x_star = &prob.x_star;
    options.observer = [&](const IterateState& st) {
        eps_hist.push_back(st.eps);
        rank_hist.push_back(st.support_size);
        // sigma + eps non-increasing at every iterate (ascending weights).
        for (int i = 0; i + 1 < st.sigma.size(); ++i)
            CHECK(st.sigma(i) + st.eps(i) >= st.sigma(i + 1) + st.eps(i + 1));
    };

    const SolveOutcome out = solve(prob.instance, config, options);
    REQUIRE(out.iterations > 0);
    CHECK(out.rank_final == 3);
    const IterationRecord& last = out.trace.back();
    CHECK(std::min(last.rel_err, last.rel_dist) <= config.opttol);

    // Merit is non-increasing within slack along the whole trace.
    double slack = 1e-9 * std::max(1.0, out.trace.front().merit_h);
    for (std::size_t i = 1; i < out.trace.size(); ++i)
        CHECK(out.trace[i].merit_h <= out.trace[i - 1].merit_h + slack);

    // Once the rank trace settles, the support perturbation decays by
    // exactly mu per step and the zero-set perturbation freezes.
    std::size_t k_stable = rank_hist.size() - 1;
    while (k_stable > 0 && rank_hist[k_stable - 1] == rank_hist.back()) --k_stable;
    REQUIRE(k_stable + 1 < eps_hist.size());
    for (std::size_t k = k_stable; k + 1 < eps_hist.size(); ++k) {
        for (int i = 0; i < 3; ++i) CHECK(eps_hist[k + 1](i) == config.mu * eps_hist[k](i));
        for (int i = 3; i < eps_hist[k].size(); ++i) CHECK(eps_hist[k + 1](i) <= eps_hist[k](i));
    }

    // Final optimality error is small relative to the data.
    CHECK(last.opt_error <= 1e-4 * prob.instance.observed_norm());
    // Subproblem certificate holds throughout.
    for (const auto& rec : out.trace) CHECK(rec.kkt_residual <= 1e-8 * 100.0);
}

TEST_CASE("pirnn variant with fixed perturbation converges too") {
    const auto prob = make_synthetic(60, 60, 3, 0.6, 21);
    SolverConfig config;
    config.variant = Variant::pirnn;
    config.eps_fixed = 1e-3;
    config.rng_seed = 22;
    SolveOptions options;
    options.x_star = &prob.x_star;
    const SolveOutcome out = solve(prob.instance, config, options);
    CHECK(out.rank_final == 3);
    const IterationRecord& last = out.trace.back();
    CHECK(std::min(last.rel_err, last.rel_dist) <= config.opttol);
    // Fixed perturbation never moves.
    CHECK(out.eps_final.minCoeff() == 1e-3);
    CHECK(out.eps_final.maxCoeff() == 1e-3);
}

TEST_CASE("irnri ignores the alpha field") {
    const auto prob = make_synthetic(30, 30, 2, 0.7, 31);
    SolverConfig config;
    config.variant = Variant::irnri;
    config.alpha = 0.7;  // unused: irnri runs without extrapolation
    config.itmax = 5;
    const SolveOutcome out = solve(prob.instance, config);
    for (const auto& rec : out.trace) CHECK(rec.alpha_used == 0.0);
}

TEST_CASE("identical seeds give bitwise-identical runs") {
    const auto prob = make_synthetic(40, 40, 2, 0.6, 41);
    SolverConfig config;
    config.rng_seed = 42;
    config.itmax = 60;
    const SolveOutcome a = solve(prob.instance, config);
    const SolveOutcome b = solve(prob.instance, config);
    REQUIRE(a.iterations == b.iterations);
    CHECK((a.x_final - b.x_final).norm() == 0.0);
    std::ostringstream csv_a, csv_b;
    write_trace_csv(csv_a, a.trace);
    write_trace_csv(csv_b, b.trace);
    CHECK(csv_a.str() == csv_b.str());
}

TEST_CASE("solve rejects mismatched shapes") {
    const auto prob = make_synthetic(10, 12, 2, 0.8, 51);
    SolverConfig config;
    CHECK_THROWS_AS(solve(prob.instance, config, Matrix::Zero(12, 10)), std::invalid_argument);
    Matrix wrong = Matrix::Zero(12, 10);
    SolveOptions options;
    options.x_star = &wrong;
    CHECK_THROWS_AS(solve(prob.instance, config, Matrix::Zero(10, 12), options),
                    std::invalid_argument);
}

TEST_CASE("trace thinning keeps every Nth record plus the last") {
    const auto prob = make_synthetic(30, 30, 2, 0.7, 61);
    SolverConfig config;
    config.rng_seed = 62;
    config.itmax = 50;
    config.opttol = 1e-12;
    config.klopt = 1e-14;  // force a full 50-iteration run
    config.trace_stride = 7;
    const SolveOutcome out = solve(prob.instance, config);
    REQUIRE(out.iterations == 50);
    REQUIRE(!out.trace.empty());
    for (std::size_t i = 0; i + 1 < out.trace.size(); ++i) CHECK(out.trace[i].k % 7 == 0);
    CHECK(out.trace.back().k == 50);
    CHECK_THROWS_AS([&] {
        SolverConfig bad = config;
        bad.trace_stride = 0;
        return solve(prob.instance, bad);
    }(), std::invalid_argument);
}
