#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hsl/geometry.hpp"
#include "hsl/learners.hpp"
#include "hsl/noise.hpp"
#include "hsl/oracle.hpp"

namespace hsl {

enum class ConceptGen {
    Fixed,
    RandomThreshold,
    RandomHomogeneous,
    RandomHalfspace,
    Adversarial
};

struct ExperimentConfig {
    std::string learner;  // string id, see learners module
    ConceptGen gen = ConceptGen::RandomThreshold;
    std::optional<Concept> fixed;  // required when gen == Fixed
    Mechanism mechanism = MinDistance{};
    double epsilon = 0.1;
    double delta = 0.1;
    double c = 1.0;  // polynomial exponent assumed by the chain/one-shot learners
    int k = 2;
    std::size_t trials = 100;
    std::size_t budget = 0;  // passive sample size / sub-phases / interaction budget
    std::size_t mc_samples = 100'000;
    std::uint64_t master_seed = 1;
    std::vector<double> sweep;  // epsilon or m grid, strictly monotone
};

struct TrialResult {
    std::size_t interactions = 0;
    double final_error = 0.0;
    std::optional<std::size_t> first_hit;  // first interaction with err <= epsilon
    std::uint64_t seed = 0;
};

// One trial, fully determined by (config, trial_index); exposed for tests.
TrialResult run_trial(const ExperimentConfig& config, std::size_t trial_index,
                      bool track_first_hit);

// R independent trials, parallel across a worker pool, ordered by index.
std::vector<TrialResult> run_trials(const ExperimentConfig& config,
                                    bool track_first_hit = false);

// Smallest sweep-grid m whose empirical failure fraction clears the
// conservative margin delta - 2 sqrt(delta (1 - delta) / R).
std::size_t estimate_sample_complexity(const ExperimentConfig& config, double epsilon,
                                       double delta);

struct MeanEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t count = 0;
};

MeanEstimate estimate_expected_error(const ExperimentConfig& config, std::size_t m);

struct RequirementEstimate {
    double mean = 0.0;  // over uncensored trials
    double std_error = 0.0;
    std::size_t censored = 0;
    std::size_t total = 0;
};

RequirementEstimate estimate_expected_requirement(const ExperimentConfig& config,
                                                  double epsilon);

struct SuiteReport {
    std::string name;
    std::size_t checked = 0;
    std::size_t violations = 0;
    double max_slack = 0.0;  // most negative margin observed (how close to failing)
    bool ok() const { return violations == 0; }
};

// Random opposite-label configurations; asserts all three error-distance
// bounds (angle exactly; the two error bounds with MC tolerance on a
// subsample of mc_subsample configurations).
SuiteReport verify_errdist(const std::vector<int>& k_list, std::size_t n_configs,
                           std::size_t mc_samples, std::size_t mc_subsample,
                           std::uint64_t seed);

// Random discrete random variables vs random convex mixtures; asserts the
// endpoint-interpolation bound E[f(Z)] <= lambda f(b) + (1-lambda) f(a).
SuiteReport verify_convexity_lemma(std::size_t n_cases, std::uint64_t seed);

// Noise-calculus properties: inverse round trips, the f-tilde envelope,
// monotonicity, polynomial superadditivity, stop_count monotonicity.
SuiteReport verify_noise_properties(std::uint64_t seed);

// Transcript validity audits across mechanisms and strategies, plus the
// per-x Monte Carlo expectation audit for the probabilistic strategies.
SuiteReport verify_oracle_validity(std::uint64_t seed);

// Empirical endpoint frequency of the TwoAtom strategy vs g(r_vs / 4).
SuiteReport verify_two_atom_frequency(std::uint64_t seed);

enum class ScalingModel { LogLog, LogStar, SqrtLog, Linear };

struct FitReport {
    double a = 0.0;  // slope
    double b = 0.0;  // intercept
    double max_residual = 0.0;
    bool pass = false;  // max_residual <= 1.5 and a > 0
};

double scaling_predictor(ScalingModel model, double epsilon);
FitReport scaling_fit(const std::vector<std::pair<double, double>>& measurements,
                      ScalingModel model);

struct HighProbToExpect {
    double mean_error = 0.0;
    double failure_rate = 0.0;  // fraction with err > epsilon
    double gamma = 0.0;         // max observed error
    double bound = 0.0;         // gamma*rate + epsilon*(1 - rate) + 3 se
    bool ok = false;
};

// Arithmetic consistency of a result set with the high-probability ->
// expectation conversion bound.
HighProbToExpect highprob_to_expect_check(const std::vector<TrialResult>& results,
                                          double epsilon);

}  // namespace hsl
