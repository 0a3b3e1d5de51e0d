#include "hsl/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hsl {

namespace {

const NoiseFunction kZeroNoise = NoiseFunction::zero();

// ---- threshold-side placement ------------------------------------------

// Point at distance t from theta on the side carrying label `opposite`,
// clipped to [0, 1]. The label-0 side is open, hence the eta nudge.
double place_threshold(double theta, int opposite, double t) {
    if (opposite == 1) return std::max(0.0, theta - t);
    double p = std::min(1.0, theta + t);
    if (p <= theta) p = theta + kEta;
    if (p > 1.0)
        throw std::runtime_error("no opposite-label point exists: theta at the domain edge");
    return p;
}

std::pair<Point, int> threshold_pair(const Threshold& th, int opposite, double t) {
    double p = place_threshold(th.theta, opposite, t);
    return {Point{p}, label(th, p)};
}

// ---- half-space-side placement -----------------------------------------

// Largest step along unit `dir` from `from` staying inside B(0, 1/2);
// 0 when the ray immediately exits.
double ball_reach(const Point& from, const Point& dir) {
    double fd = dot(from, dir);
    double disc = fd * fd + 0.25 - dot(from, from);
    if (disc <= 0.0) return 0.0;
    return std::max(0.0, -fd + std::sqrt(disc));
}

// Boundary anchor inside the ball: the projection when it stays inside,
// otherwise the nearest point on the boundary-cap rim.
Point boundary_anchor(const Halfspace& h, const Point& x) {
    Point proj = project_onto_boundary(x, h);
    if (norm(proj) <= 0.5) return proj;
    double rim2 = 0.25 - h.b * h.b;
    if (rim2 <= 0.0)
        throw std::runtime_error("half-space boundary does not intersect the domain");
    Point center = scale(h.omega, h.b);
    Point w = sub(proj, center);
    double nw = norm(w);
    if (nw == 0.0) return center;  // proj == center, impossible with norm(proj) > 1/2
    return add(center, scale(w, std::sqrt(rim2) / nw));
}

// Point at distance <= t from `anchor` along the concept normal on the side
// carrying label `opposite`, clipped to the ball.
std::pair<Point, int> halfspace_normal_pair(const Halfspace& h, const Point& anchor,
                                            int opposite, double t) {
    Point dir = opposite == 1 ? h.omega : scale(h.omega, -1.0);
    double reach = ball_reach(anchor, dir);
    double tt = std::min(t, reach);
    if (opposite == 0 && tt == 0.0) tt = kEta;  // open side, nudge off the boundary
    Point p = add(anchor, scale(dir, tt));
    return {p, label(h, p)};
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
    return scale(v, 1.0 / std::sqrt(n2));
}

std::pair<Point, int> halfspace_det_step(const Halfspace& h, const DetAMDM& mech,
                                         const Point& x, int label_x, Rng& rng) {
    Point anchor = boundary_anchor(h, x);
    double r = distance_to_boundary(x, h);
    double budget = mech.f.eval(r);
    int opposite = 1 - label_x;
    switch (mech.strategy) {
        case DetStrategy::FarthestValid:
            return halfspace_normal_pair(h, anchor, opposite, budget);
        case DetStrategy::NearestValid:
            return halfspace_normal_pair(h, anchor, opposite, 0.0);
        case DetStrategy::RandomInBall: {
            for (int attempt = 0; attempt < 64 && budget > 0.0; ++attempt) {
                Point off = sample_uniform_ball(static_cast<int>(x.size()), rng);
                Point p = add(anchor, scale(off, 2.0 * budget));  // ball radius budget
                if (norm(p) <= 0.5 && label(h, p) == opposite) return {p, opposite};
            }
            // degenerate budget or unlucky rejection: fall back to the normal ray
            return halfspace_normal_pair(h, anchor, opposite, budget * rng.uniform());
        }
        default:
            throw std::invalid_argument("strategy/concept mismatch for half-space target");
    }
}

std::pair<Point, int> halfspace_prob_step(const Halfspace& h, const ProbAMDM& mech,
                                          const Point& x, int label_x, Rng& rng) {
    Point anchor = boundary_anchor(h, x);
    double r = distance_to_boundary(x, h);
    int opposite = 1 - label_x;
    switch (mech.strategy) {
        case ProbStrategy::PointMass:
            return halfspace_normal_pair(h, anchor, opposite, 0.0);
        case ProbStrategy::ScaledUniform: {
            double d = rng.uniform(0.0, 2.0 * mech.f.eval(r));
            Point v = random_unit(static_cast<int>(x.size()), rng);
            double side = dot(h.omega, v);
            if ((opposite == 1 && side < 0.0) || (opposite == 0 && side > 0.0))
                v = scale(v, -1.0);
            double tt = std::min(d, ball_reach(anchor, v));
            Point p = add(anchor, scale(v, tt));
            if (label(h, p) != opposite) {
                // landed on the boundary of an open side; nudge along the normal
                p = add(p, scale(h.omega, opposite == 1 ? kEta : -kEta));
            }
            return {p, label(h, p)};
        }
        default:
            throw std::invalid_argument("strategy/concept mismatch for half-space target");
    }
}

std::pair<Point, int> threshold_det_step(const Threshold& th, const DetAMDM& mech, double x,
                                         int label_x, Rng& rng) {
    double r = std::abs(x - th.theta);
    double budget = mech.f.eval(r);
    int opposite = 1 - label_x;
    switch (mech.strategy) {
        case DetStrategy::FarthestValid:
            return threshold_pair(th, opposite, budget);
        case DetStrategy::NearestValid:
            return threshold_pair(th, opposite, 0.0);
        case DetStrategy::RandomInBall:
            return threshold_pair(th, opposite, budget * rng.uniform());
        default:
            throw std::invalid_argument("strategy/concept mismatch for threshold target");
    }
}

std::pair<Point, int> threshold_prob_step(const Threshold& th, const ProbAMDM& mech, double x,
                                          int label_x, Rng& rng, ProbState* state) {
    double r = std::abs(x - th.theta);
    int opposite = 1 - label_x;
    switch (mech.strategy) {
        case ProbStrategy::PointMass:
            return threshold_pair(th, opposite, 0.0);
        case ProbStrategy::ScaledUniform:
            return threshold_pair(th, opposite, rng.uniform(0.0, 2.0 * mech.f.eval(r)));
        case ProbStrategy::TwoAtom: {
            if (state == nullptr)
                throw std::invalid_argument("TwoAtom strategy needs oracle state");
            if (label_x == 1)
                state->vs_lo = std::max(state->vs_lo, x);
            else
                state->vs_hi = std::min(state->vs_hi, x);
            double r_vs = std::max(0.0, state->vs_hi - state->vs_lo);
            double endpoint = label_x == 1 ? state->vs_hi : state->vs_lo;
            double p = std::min(1.0, mech.f.ratio_g(r_vs / 4.0));
            double de = std::abs(endpoint - th.theta);
            double budget = mech.f.eval(r);
            if (p * de > budget) p = de > 0.0 ? budget / de : 0.0;  // keep E[d] <= f(r)
            bool endpoint_valid = label(th, endpoint) == opposite;
            if (endpoint_valid && rng.uniform() < p) return {Point{endpoint}, opposite};
            return threshold_pair(th, opposite, 0.0);
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace

const NoiseFunction& mechanism_noise(const Mechanism& m) {
    if (const auto* d = std::get_if<DetAMDM>(&m)) return d->f;
    if (const auto* p = std::get_if<ProbAMDM>(&m)) return p->f;
    return kZeroNoise;
}

Point min_distance_point(const Concept& c, const Point& x) {
    if (c.is_threshold()) return Point{c.threshold().theta};
    return boundary_anchor(c.halfspace(), x);
}

std::pair<Point, int> contrastive_step(const Concept& c, const Mechanism& mech,
                                       const Point& x, int label_x, Rng& rng,
                                       ProbState* state) {
    if (std::holds_alternative<MinDistance>(mech)) {
        Point p = min_distance_point(c, x);
        return {p, label(c, p)};
    }
    if (const auto* det = std::get_if<DetAMDM>(&mech)) {
        if (c.is_threshold()) return threshold_det_step(c.threshold(), *det, x[0], label_x, rng);
        return halfspace_det_step(c.halfspace(), *det, x, label_x, rng);
    }
    const auto& prob = std::get<ProbAMDM>(mech);
    if (c.is_threshold()) return threshold_prob_step(c.threshold(), prob, x[0], label_x, rng, state);
    return halfspace_prob_step(c.halfspace(), prob, x, label_x, rng);
}

ContrastiveOracle::ContrastiveOracle(Concept target, Mechanism mech, std::uint64_t seed)
    : target_(std::move(target)), mech_(std::move(mech)), rng_(seed) {
    if (const auto* det = std::get_if<DetAMDM>(&mech_)) {
        if (det->strategy == DetStrategy::PassiveThresholdAdversary)
            throw std::invalid_argument(
                "PassiveThresholdAdversary is batch-only; use adversary_passive_threshold");
        if (det->strategy == DetStrategy::ThresholdVersionSpaceAdversary ||
            det->strategy == DetStrategy::ThresholdEmbeddingAdversary)
            throw std::invalid_argument("adversary oracles are built without a fixed target");
    }
    if (const auto* prob = std::get_if<ProbAMDM>(&mech_)) {
        if (prob->strategy == ProbStrategy::TwoAtom && !target_->is_threshold())
            throw std::invalid_argument("TwoAtom strategy applies to thresholds only");
    }
}

ContrastiveOracle::ContrastiveOracle(Mechanism mech, std::uint64_t seed, int adv_dim,
                                     double lo, double hi)
    : mech_(std::move(mech)),
      rng_(seed),
      adversarial_(true),
      adv_dim_(adv_dim),
      adv_lo_(lo),
      adv_hi_(hi) {}

ContrastiveOracle ContrastiveOracle::threshold_adversary(NoiseFunction f, std::uint64_t seed) {
    return ContrastiveOracle(
        Mechanism{DetAMDM{std::move(f), DetStrategy::ThresholdVersionSpaceAdversary}}, seed, 1,
        0.0, 1.0);
}

ContrastiveOracle ContrastiveOracle::embedded_halfspace_adversary(int k, NoiseFunction f,
                                                                  std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("embedded adversary needs k >= 2");
    return ContrastiveOracle(
        Mechanism{DetAMDM{std::move(f), DetStrategy::ThresholdEmbeddingAdversary}}, seed, k,
        -0.25, 0.25);
}

bool ContrastiveOracle::is_threshold_domain() const {
    if (adversarial_) return adv_dim_ == 1;
    return target_->is_threshold();
}

int ContrastiveOracle::dim() const { return adversarial_ ? adv_dim_ : target_->dim(); }

void ContrastiveOracle::check_domain(const Point& x) const {
    if (static_cast<int>(x.size()) != dim())
        throw std::invalid_argument("query dimension mismatch");
    if (is_threshold_domain()) {
        if (x[0] < 0.0 || x[0] > 1.0)
            throw std::invalid_argument("threshold queries live in [0, 1]");
    } else if (norm(x) > 0.5 + 1e-12) {
        throw std::invalid_argument("ball queries must satisfy ||x|| <= 1/2");
    }
}

ExamplePair ContrastiveOracle::adversary_respond(const Point& x) {
    if (target_.has_value())
        throw std::logic_error("adversary already committed; no further queries");
    const NoiseFunction& f = mechanism_noise(mech_);
    double q = x[0];  // embedded adversary projects queries to coordinate 0
    double mid = 0.5 * (adv_lo_ + adv_hi_);
    int lx;
    double xp0;
    if (q <= mid) {
        lx = 1;
        xp0 = adv_hi_;
        adv_lo_ = std::max(adv_lo_, adv_hi_ - contraction_from_gap(f, adv_hi_ - q));
    } else {
        lx = 0;
        xp0 = adv_lo_;
        adv_hi_ = std::min(adv_hi_, adv_lo_ + contraction_from_gap(f, q - adv_lo_));
    }
    ExamplePair pair;
    pair.x = x;
    pair.lx = lx;
    pair.xp = x;
    pair.xp[0] = xp0;
    pair.lxp = 1 - lx;
    transcript_.push_back(pair);
    return pair;
}

ExamplePair ContrastiveOracle::query_active(const Point& x) {
    check_domain(x);
    if (adversarial_) return adversary_respond(x);
    ExamplePair pair;
    pair.x = x;
    pair.lx = label(*target_, x);
    auto [xp, lxp] = contrastive_step(*target_, mech_, x, pair.lx, rng_, &prob_state_);
    pair.xp = std::move(xp);
    pair.lxp = lxp;
    transcript_.push_back(pair);
    return pair;
}

ExamplePair ContrastiveOracle::query_active(double x) { return query_active(Point{x}); }

ExamplePair ContrastiveOracle::sample_passive() {
    Point x = is_threshold_domain() ? Point{rng_.uniform()} : sample_uniform_ball(dim(), rng_);
    if (adversarial_) return adversary_respond(x);
    ExamplePair pair;
    pair.x = std::move(x);
    pair.lx = label(*target_, pair.x);
    auto [xp, lxp] = contrastive_step(*target_, mech_, pair.x, pair.lx, rng_, &prob_state_);
    pair.xp = std::move(xp);
    pair.lxp = lxp;
    transcript_.push_back(pair);
    return pair;
}

const Concept& ContrastiveOracle::target(const Concept* hypothesis) {
    if (!target_.has_value()) {
        double theta = 0.5 * (adv_lo_ + adv_hi_);
        if (hypothesis != nullptr) {
            // commit the consistent concept farthest from the learner's output
            double ref = adv_dim_ == 1 ? hypothesis->threshold().theta
                                       : -hypothesis->halfspace().b;  // p of 1{x0 <= p}
            theta = std::abs(adv_lo_ - ref) >= std::abs(adv_hi_ - ref) ? adv_lo_ : adv_hi_;
        }
        if (adv_dim_ == 1) {
            target_ = Concept(Threshold{theta});
        } else {
            // C_p(x) = 1{x[0] <= p}  ==  1{<-e0, x> >= -p}
            Point omega(static_cast<std::size_t>(adv_dim_), 0.0);
            omega[0] = -1.0;
            target_ = Concept(make_halfspace(omega, -theta, false));
        }
    }
    return *target_;
}

PassiveThresholdAssignment adversary_passive_threshold(const std::vector<double>& xs,
                                                       const Threshold& provisional,
                                                       const NoiseFunction& f) {
    PassiveThresholdAssignment out;
    bool has_pos = false, has_neg = false;
    double x_pos = 0.0, x_neg = 1.0;
    for (double x : xs) {
        if (label(provisional, x) == 1) {
            has_pos = true;
            x_pos = std::max(x_pos, x);
        } else {
            has_neg = true;
            x_neg = std::min(x_neg, x);
        }
    }
    if (!has_pos || !has_neg) {
        // one label class missing: degenerate to MDM at the provisional threshold
        for (double x : xs) {
            int lx = label(provisional, x);
            auto [xp, lxp] = threshold_pair(provisional, 1 - lx, 0.0);
            out.pairs.push_back({Point{x}, lx, xp, lxp});
        }
        out.lo = out.hi = provisional.theta;
        return out;
    }
    double r = 0.5 * (x_neg - x_pos);
    double fr = f.eval(r);
    double tilde_neg = 0.5 * (x_neg + x_pos - fr);
    double tilde_pos = 0.5 * (x_neg + x_pos + fr);
    // Exact consistent interval: theta must satisfy |tilde_pos - theta| <=
    // f(theta - x_pos) and symmetrically for tilde_neg.  Solving u + f(u) =
    // tilde_pos - x_pos gives the binding endpoint; the proof's interval
    // [max(x_pos, tilde_neg), min(x_neg, tilde_pos)] is its (slightly loose
    // for strictly convex f) envelope.
    double gap = tilde_pos - x_pos;  // == x_neg - tilde_neg
    double u = gap - contraction_from_gap(f, gap);
    out.lo = std::max({x_pos, tilde_neg, x_pos + u});
    out.hi = std::min({x_neg, tilde_pos, x_neg - u});
    for (double x : xs) {
        int lx = label(provisional, x);
        double xp = lx == 1 ? tilde_pos : tilde_neg;
        out.pairs.push_back({Point{x}, lx, Point{std::clamp(xp, 0.0, 1.0)}, 1 - lx});
    }
    return out;
}

TranscriptAudit audit_transcript(const Concept& target, const Mechanism& mech,
                                 const std::vector<ExamplePair>& transcript) {
    TranscriptAudit audit;
    const bool mdm = std::holds_alternative<MinDistance>(mech);
    const bool det = std::holds_alternative<DetAMDM>(mech);
    const NoiseFunction& f = mechanism_noise(mech);
    for (const auto& pair : transcript) {
        Point xmin = min_distance_point(target, pair.x);
        double r = norm(sub(pair.x, xmin));
        double d = norm(sub(pair.xp, xmin));
        if (mdm) {
            // contrastive must sit on the boundary
            if (d > 1e-12) {
                audit.ok = false;
                ++audit.violations;
            }
            audit.max_slack = std::max(audit.max_slack, d);
            continue;
        }
        if (det) {
            // per-realization budget; probabilistic AMDM is only bounded in
            // expectation (audited separately)
            double slack = d - f.eval(r);
            audit.max_slack = std::max(audit.max_slack, slack);
            if (slack > kEta + 1e-12) {
                audit.ok = false;
                ++audit.violations;
            }
        }
        bool opposite = pair.lxp != pair.lx;
        // limit-point tolerance: a contrastive pinned to the boundary may tie
        if (!opposite && d > kEta + 1e-12) {
            audit.ok = false;
            ++audit.violations;
        }
    }
    return audit;
}

double audit_prob_expectation(const Concept& target, const ProbAMDM& mech, const Point& x,
                              std::size_t draws, std::uint64_t seed) {
    Rng rng(seed);
    ProbState state;
    int lx = label(target, x);
    Point xmin = min_distance_point(target, x);
    double sum = 0.0;
    Mechanism m{mech};
    for (std::size_t i = 0; i < draws; ++i) {
        auto [xp, lxp] = contrastive_step(target, m, x, lx, rng, &state);
        sum += norm(sub(xp, xmin));
    }
    return sum / static_cast<double>(draws);
}

}  // namespace hsl
