#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "hsl/geometry.hpp"
#include "hsl/noise.hpp"
#include "hsl/rng.hpp"

namespace hsl {

// Offset used when the opposite-label region is open (or the budget is zero)
// and the exact minimizer carries the wrong label.
inline constexpr double kEta = 0x1p-40;

struct ExamplePair {
    Point x;
    int lx = 0;
    Point xp;
    int lxp = 0;
};

enum class DetStrategy {
    FarthestValid,
    NearestValid,
    RandomInBall,
    ThresholdVersionSpaceAdversary,
    PassiveThresholdAdversary,   // batch-only, see adversary_passive_threshold
    ThresholdEmbeddingAdversary  // k-dim wrapper over the version-space adversary
};

enum class ProbStrategy { ScaledUniform, TwoAtom, PointMass };

struct MinDistance {};

struct DetAMDM {
    NoiseFunction f;
    DetStrategy strategy = DetStrategy::FarthestValid;
};

struct ProbAMDM {
    NoiseFunction f;
    ProbStrategy strategy = ProbStrategy::ScaledUniform;
};

using Mechanism = std::variant<MinDistance, DetAMDM, ProbAMDM>;

const NoiseFunction& mechanism_noise(const Mechanism& m);

// The minimum-distance contrastive anchor x^d_min: theta for thresholds, the
// boundary projection for half-spaces (pulled to the boundary cap rim when
// the projection leaves the ball).
Point min_distance_point(const Concept& c, const Point& x);

// Mutable per-oracle strategy state (two-atom version interval).
struct ProbState {
    double vs_lo = 0.0;
    double vs_hi = 1.0;
};

// One contrastive step for a fixed target concept.
std::pair<Point, int> contrastive_step(const Concept& c, const Mechanism& mech,
                                       const Point& x, int label_x, Rng& rng,
                                       ProbState* state = nullptr);

class ContrastiveOracle {
public:
    ContrastiveOracle(Concept target, Mechanism mech, std::uint64_t seed);

    // Adversary without a committed target: answers queries so as to keep the
    // consistent set as large as possible; a concrete concept is committed
    // only when target() is first called.
    static ContrastiveOracle threshold_adversary(NoiseFunction f, std::uint64_t seed);
    static ContrastiveOracle embedded_halfspace_adversary(int k, NoiseFunction f,
                                                          std::uint64_t seed);

    ExamplePair query_active(const Point& x);
    ExamplePair query_active(double x);  // threshold-domain convenience
    ExamplePair sample_passive();

    std::size_t query_count() const { return transcript_.size(); }
    const std::vector<ExamplePair>& transcript() const { return transcript_; }

    bool is_threshold_domain() const;
    int dim() const;
    bool adversarial() const { return adversarial_; }

    // Committed target. For adversaries the first call commits: the midpoint
    // of the consistent interval, or the consistent concept farthest from
    // `hypothesis` when one is supplied.
    const Concept& target(const Concept* hypothesis = nullptr);

    // consistent interval of the threshold / embedded adversary
    std::pair<double, double> adversary_interval() const { return {adv_lo_, adv_hi_}; }

    const Mechanism& mechanism() const { return mech_; }

private:
    ContrastiveOracle(Mechanism mech, std::uint64_t seed, int adv_dim, double lo, double hi);
    void check_domain(const Point& x) const;
    ExamplePair adversary_respond(const Point& x);

    std::optional<Concept> target_;
    Mechanism mech_;
    Rng rng_;
    std::vector<ExamplePair> transcript_;
    ProbState prob_state_;

    bool adversarial_ = false;
    int adv_dim_ = 1;  // 1: threshold adversary; >= 2: embedded half-space
    double adv_lo_ = 0.0;
    double adv_hi_ = 1.0;
};

// Adversarial contrastive assignment for a full passive threshold sample
// (lower-bound construction). Primaries are labeled by `provisional`; the
// consistent threshold interval is returned so the caller can commit a worst
// case inside it.
struct PassiveThresholdAssignment {
    std::vector<ExamplePair> pairs;
    double lo = 0.0;  // consistent thresholds [lo, hi)
    double hi = 1.0;
};
PassiveThresholdAssignment adversary_passive_threshold(const std::vector<double>& xs,
                                                       const Threshold& provisional,
                                                       const NoiseFunction& f);

// Transcript validity audit against a committed target.
struct TranscriptAudit {
    bool ok = true;
    double max_slack = 0.0;  // worst d(x', xmin) - f(d(x, xmin)) observed
    std::size_t violations = 0;
};
TranscriptAudit audit_transcript(const Concept& target, const Mechanism& mech,
                                 const std::vector<ExamplePair>& transcript);

// Per-x Monte Carlo audit of the probabilistic AMDM expectation constraint:
// empirical mean of d(x', xmin) over `draws` samples, to compare against f(r).
double audit_prob_expectation(const Concept& target, const ProbAMDM& mech, const Point& x,
                              std::size_t draws, std::uint64_t seed);

}  // namespace hsl
