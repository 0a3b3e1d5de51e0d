#pragma once

#include <cstddef>
#include <vector>

#include "hsl/geometry.hpp"
#include "hsl/noise.hpp"
#include "hsl/oracle.hpp"

namespace hsl {

struct VersionInterval {
    double lo = 0.0;
    double hi = 1.0;
    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
};

struct LearnerOutput {
    Concept hypothesis;
    std::size_t interactions = 0;
    // Running hypothesis after each interaction (snapshots[i] is the guess a
    // learner forced to stop after i+1 interactions would emit). Passive
    // learners leave this empty.
    std::vector<Concept> snapshots;
};

// Bisection with the f-contraction interval update; exact against the
// version-space adversary.
LearnerOutput active_threshold_det(ContrastiveOracle& oracle, const NoiseFunction& f,
                                   double epsilon);

// Single query at r = min((pi*eps*delta)^(1/c), 1/2) along e0; hypothesis is
// the induced homogeneous half-space of the returned pair.
LearnerOutput active_homogeneous_one_shot(ContrastiveOracle& oracle, double epsilon,
                                          double delta, double c);

// Chain x_{t+1} = x'_t for m = STOP(f, 1/2, (eps/2^k)^(1/c)) steps; hypothesis
// induced from the final pair.
LearnerOutput active_halfspace_chain(ContrastiveOracle& oracle, const NoiseFunction& f,
                                     double epsilon, double c, int k);

// Max positive primary; its contrastive when f(eps) <= eps, else the point
// itself. Mirrored on the min negative primary when no positive exists.
LearnerOutput passive_threshold(const std::vector<ExamplePair>& sample,
                                const NoiseFunction& f, double epsilon);

// Induced homogeneous half-space of the pair minimizing ||x - x'||.
LearnerOutput passive_homogeneous(const std::vector<ExamplePair>& sample);

// Label-only bisection: midpoint plus same-side far endpoint per sub-phase.
LearnerOutput prob_threshold_expected(ContrastiveOracle& oracle, std::size_t n_subphases);

// Self-verifying endpoint learner: repeat until x'_a - x'_b <= 4 f(b - a),
// then contract to [x'_b, x'_a]; certified err <= epsilon on return.
LearnerOutput prob_threshold_verified(ContrastiveOracle& oracle, const NoiseFunction& f,
                                      double epsilon, std::size_t interaction_cap = 1'000'000);

// Sub-phase half-space learner driven by the segment-point helper; runs until
// the interaction budget (0 selects the default 8*STOP(3f(2.),...) + 8).
LearnerOutput prob_halfspace_subphase(ContrastiveOracle& oracle, const NoiseFunction& f,
                                      double epsilon, double c, int k,
                                      std::size_t budget = 0);

}  // namespace hsl
