// Acceptance gate: one line per criterion, pinned tolerances, exit code is the
// number of failed criteria.
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "hsl/experiments.hpp"
#include "hsl/json_io.hpp"
#include "hsl/learners.hpp"

using namespace hsl;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("criterion %2d: %s — %s\n", criterion, pass ? "PASS" : "FAIL",
                detail.c_str());
    if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

// Independent oracle for criterion 1: iterate the closed-form f-tilde of
// f(r) = r^2/4 from 1 down to 2*eps.  f-tilde(r) = f(u) with u + f(u) = r/2,
// i.e. u = 2*(r/2) / (1 + sqrt(1 + r/2)) for this f.
std::size_t stop_tilde_quarter_square(double eps) {
    double cur = 1.0;
    std::size_t n = 0;
    while (cur > 2.0 * eps) {
        double d = 0.5 * cur;
        double u = 2.0 * d / (1.0 + std::sqrt(1.0 + d));
        cur = 0.25 * u * u;
        ++n;
    }
    return n;
}

struct AdversaryRun {
    std::size_t interactions;
    double error;
};

AdversaryRun run_adversary(const NoiseFunction& f, double eps, std::uint64_t seed) {
    auto oracle = ContrastiveOracle::threshold_adversary(f, seed);
    LearnerOutput out = active_threshold_det(oracle, f, eps);
    double theta = oracle.target().threshold().theta;
    return {out.interactions, std::abs(out.hypothesis.threshold().theta - theta)};
}

Point random_unit(int k, Rng& rng) {
    Point v(static_cast<std::size_t>(k));
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (auto& c : v) {
            c = rng.gaussian();
            n2 += c * c;
        }
    } while (n2 == 0.0);
    for (auto& c : v) c /= std::sqrt(n2);
    return v;
}

void criterion_1_and_2() {
    const NoiseFunction f = NoiseFunction::polynomial(1.0, 0.25);
    bool pass = true;
    std::string detail = "interactions";
    for (double eps : {1e-2, 1e-4, 1e-6, 1e-8}) {
        AdversaryRun run = run_adversary(f, eps, 0xACC1);
        std::size_t expected = stop_tilde_quarter_square(eps);
        pass = pass && run.interactions == expected && run.error <= eps;
        detail += fmt(" %zu/%zu", run.interactions, expected);
    }
    report(1, pass, detail + " (learner/STOP), err <= eps on every run");

    std::vector<std::pair<double, double>> pts;
    for (int j = 2; j <= 6; ++j) {
        double eps = std::pow(2.0, -std::pow(2.0, j));
        AdversaryRun run = run_adversary(f, eps, 0xACC2 + j);
        pts.push_back({eps, static_cast<double>(run.interactions)});
    }
    FitReport fit = scaling_fit(pts, ScalingModel::LogLog);
    report(2, fit.pass,
           fmt("loglog fit slope=%.3f max_residual=%.3f (<= 1.5)", fit.a, fit.max_residual));
}

void criterion_3() {
    const NoiseFunction f = NoiseFunction::exponential(0.25);
    std::vector<std::pair<double, double>> pts;
    bool bounded = true;
    std::string counts = "counts";
    for (double eps : {1e-1, 1e-3, 1e-6, 1e-10, 1e-15}) {
        AdversaryRun run = run_adversary(f, eps, 0xACC3);
        bounded = bounded && run.interactions <= 7 && run.error <= eps;
        pts.push_back({eps, static_cast<double>(run.interactions)});
        counts += fmt(" %zu", run.interactions);
    }
    FitReport fit = scaling_fit(pts, ScalingModel::LogStar);
    report(3, bounded && fit.pass,
           counts + fmt(" (<= 7); logstar slope=%.3f max_residual=%.3f", fit.a,
                        fit.max_residual));
}

void criterion_4() {
    ExperimentConfig cfg;
    cfg.learner = "hhs-one-shot";
    cfg.gen = ConceptGen::RandomHomogeneous;
    cfg.mechanism = Mechanism{ProbAMDM{NoiseFunction::polynomial(1.0, 1.0),
                                       ProbStrategy::ScaledUniform}};
    cfg.epsilon = 0.05;
    cfg.delta = 0.2;
    cfg.c = 1.0;
    cfg.k = 3;
    cfg.trials = 1000;
    cfg.master_seed = 0xACC4;
    auto results = run_trials(cfg);
    std::size_t fails = 0;
    for (const auto& r : results)
        if (r.final_error > cfg.epsilon) ++fails;
    double rate = static_cast<double>(fails) / 1000.0;
    report(4, rate <= 0.24, fmt("one-shot failure rate %.3f (<= 0.240), 1000 trials", rate));
}

void criterion_5() {
    const NoiseFunction f = NoiseFunction::polynomial(1.0, 0.25);
    Mechanism mech{DetAMDM{f, DetStrategy::FarthestValid}};
    Rng rng(0xACC5);
    bool pass = true;
    std::size_t max_inter = 0;
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        Concept target(make_halfspace(random_unit(2, rng), rng.uniform(-0.2, 0.2), false));
        ContrastiveOracle oracle(target, mech, mix_seed(0xACC5, t));
        LearnerOutput out = active_halfspace_chain(oracle, f, 0.1, 1.0, 2);
        McEstimate mc = monte_carlo_error(out.hypothesis, target, 100'000, mix_seed(0x5ACC, t));
        max_inter = std::max(max_inter, out.interactions);
        worst = std::max(worst, mc.estimate - 4.0 * mc.std_error);
        pass = pass && out.interactions <= 2 && mc.estimate <= 0.1 + 4.0 * mc.std_error;
    }
    report(5, pass,
           fmt("chain: max interactions %zu (<= 2), worst err-4se %.4f (<= 0.1), 100 targets",
               max_inter, worst));
}

void criterion_6() {
    SuiteReport r = verify_errdist({2, 3, 5}, 3334, 100'000, 200, 0xACC6);
    report(6, r.ok(),
           fmt("err-dist suite: %zu checks, %zu violations, max slack %.2e", r.checked,
               r.violations, r.max_slack));
}

void criterion_7() {
    const NoiseFunction f = NoiseFunction::polynomial(1.0, 0.25);
    // 4f(r) = r^2 has fixed point 1: STOP(4f, 1, 2e-4) diverges, so the
    // interaction bound is vacuous (printed as INF); the error certificate is
    // the substantive check.
    std::size_t bound = stop_count([](double r) { return r * r; }, 1.0, 2e-4);
    Mechanism mech{ProbAMDM{f, ProbStrategy::ScaledUniform}};
    Rng rng(0xACC7);
    std::size_t ok = 0;
    double mean_inter = 0.0;
    const int trials = 500;
    for (int t = 0; t < trials; ++t) {
        Concept target(Threshold{rng.uniform()});
        ContrastiveOracle oracle(target, mech, mix_seed(0xACC7, t));
        LearnerOutput out = prob_threshold_verified(oracle, f, 1e-4);
        mean_inter += static_cast<double>(out.interactions);
        if (std::abs(out.hypothesis.threshold().theta - target.threshold().theta) <= 1e-4)
            ++ok;
    }
    mean_inter /= trials;
    bool vacuous = bound == kStopInfinity;
    report(7, vacuous && ok == trials,
           fmt("verified learner: mean interactions %.1f (bound 4*STOP = %s), err <= eps in "
               "%zu/500 trials (need 500)",
               mean_inter, vacuous ? "INF" : "finite?", ok));
}

void criterion_8() {
    ExperimentConfig cfg;
    cfg.learner = "prob-hs-subphase";
    cfg.gen = ConceptGen::RandomHalfspace;
    cfg.mechanism = Mechanism{ProbAMDM{NoiseFunction::polynomial(1.0, 1.0 / 16.0),
                                       ProbStrategy::ScaledUniform}};
    cfg.epsilon = 0.1;
    cfg.c = 1.0;
    cfg.k = 2;
    cfg.trials = 200;
    cfg.mc_samples = 50'000;
    cfg.master_seed = 0xACC8;
    RequirementEstimate req = estimate_expected_requirement(cfg, cfg.epsilon);
    // censored trials (no hit within the budget) count at the full budget 24
    double mean = (req.mean * static_cast<double>(req.total - req.censored) +
                   24.0 * static_cast<double>(req.censored)) /
                  static_cast<double>(req.total);
    bool pass = mean <= 24.0 + 3.0 * req.std_error;
    report(8, pass,
           fmt("sub-phase first-hit mean %.2f (<= 24 + 3se = %.2f), censored %zu/200", mean,
               24.0 + 3.0 * req.std_error, req.censored));
}

void criterion_9() {
    ExperimentConfig cfg;
    cfg.learner = "passive-thresh";
    cfg.gen = ConceptGen::RandomThreshold;
    cfg.mechanism = Mechanism{DetAMDM{NoiseFunction::polynomial(1.0, 0.25),
                                      DetStrategy::FarthestValid}};
    cfg.epsilon = 0.01;
    cfg.delta = 0.1;
    cfg.trials = 1000;
    cfg.budget = 231;  // log(1/delta)/min(f^-1(eps), eps) = 230.3, rounded up
    cfg.master_seed = 0xACC9;
    auto results = run_trials(cfg);
    std::size_t fails = 0;
    for (const auto& r : results)
        if (r.final_error > cfg.epsilon) ++fails;
    double rate = static_cast<double>(fails) / 1000.0;
    report(9, rate <= 0.14,
           fmt("passive threshold m=231 failure rate %.3f (<= 0.140)", rate));
}

void criterion_10() {
    bool pass = true;
    std::string detail = "passive homogeneous m=37 failure rates";
    for (int k : {2, 3}) {
        ExperimentConfig cfg;
        cfg.learner = "passive-hhs";
        cfg.gen = ConceptGen::RandomHomogeneous;
        cfg.mechanism = Mechanism{DetAMDM{NoiseFunction::polynomial(1.0, 1.0),
                                          DetStrategy::RandomInBall}};
        cfg.epsilon = 0.02;
        cfg.delta = 0.1;
        cfg.k = k;
        cfg.trials = 1000;
        cfg.budget = 37;  // log(1/delta)/g^-1(pi*eps) = 36.7, rounded up
        cfg.master_seed = 0xACC10 + static_cast<std::uint64_t>(k);
        auto results = run_trials(cfg);
        std::size_t fails = 0;
        for (const auto& r : results)
            if (r.final_error > cfg.epsilon) ++fails;
        double rate = static_cast<double>(fails) / 1000.0;
        detail += fmt(" k=%d: %.3f", k, rate);
        pass = pass && rate <= 0.14;
    }
    report(10, pass, detail + " (<= 0.140)");
}

void criterion_11() {
    const NoiseFunction f = NoiseFunction::polynomial(1.0, 0.25);  // g(r) = r/4
    bool pass = true;
    std::string detail = "expected-error bisection";
    for (int n : {3, 5}) {
        double bound = std::pow(2.0, -n - 1);
        for (int i = 1; i <= n; ++i) bound *= f.ratio_g(std::pow(2.0, -i));
        ExperimentConfig cfg;
        cfg.learner = "prob-thresh-exp";
        cfg.gen = ConceptGen::RandomThreshold;
        cfg.mechanism = Mechanism{ProbAMDM{f, ProbStrategy::ScaledUniform}};
        cfg.trials = 2000;
        cfg.budget = static_cast<std::size_t>(n);  // sub-phases
        cfg.master_seed = 0xACC11 + static_cast<std::uint64_t>(n);
        MeanEstimate err = estimate_expected_error(cfg, cfg.budget);
        pass = pass && err.mean <= bound + 3.0 * err.std_error;
        detail += fmt(" n=%d: %.2e (<= %.2e + 3se)", n, err.mean, bound);
    }
    report(11, pass, detail);
}

void criterion_12() {
    std::vector<SuiteReport> suites = {
        verify_noise_properties(0xACC12),
        verify_oracle_validity(0xACC12 + 1),
        verify_two_atom_frequency(0xACC12 + 2),
        verify_convexity_lemma(1000, 0xACC12 + 3),
        verify_errdist({2, 3, 5}, 2000, 20'000, 60, 0xACC12 + 4),
    };
    bool pass = true;
    std::string detail = "suites";
    for (const auto& s : suites) {
        pass = pass && s.ok();
        detail += fmt(" %s:%zu/%zu", s.name.c_str(), s.violations, s.checked);
    }
    report(12, pass, detail + " (violations/checks)");
}

void criterion_13() {
    ExperimentConfig cfg;
    cfg.learner = "active-thresh-det";
    cfg.gen = ConceptGen::RandomThreshold;
    cfg.mechanism = Mechanism{DetAMDM{NoiseFunction::polynomial(1.0, 0.25),
                                      DetStrategy::FarthestValid}};
    cfg.epsilon = 1e-4;
    cfg.trials = 64;
    cfg.master_seed = 0xACC13;
    std::string a = results_to_csv(run_trials(cfg));
    std::string b = results_to_csv(run_trials(cfg));
    report(13, a == b && !a.empty(),
           fmt("same-seed results.csv byte-identical (%zu bytes)", a.size()));
}

}  // namespace

int main() {
    criterion_1_and_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12();
    criterion_13();
    std::printf("%d of 13 criteria failed\n", g_failures);
    return g_failures;
}
