#include "hsl/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hsl {

namespace {

constexpr std::size_t kIterationCap = 1'000'000;

// u solving u + 2 f(u) = d (strictly increasing from 0), bisected on [0, d].
double inverse_i_plus_2f(const NoiseFunction& f, double d) {
    if (d <= 0.0) return 0.0;
    double lo = 0.0, hi = d;
    for (int i = 0; i < 200 && lo < hi; ++i) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (mid + 2.0 * f.eval(mid) >= d)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

Point e0_scaled(int k, double r) {
    Point x(static_cast<std::size_t>(k), 0.0);
    x[0] = r;
    return x;
}

}  // namespace

LearnerOutput active_threshold_det(ContrastiveOracle& oracle, const NoiseFunction& f,
                                   double epsilon) {
    if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
    VersionInterval I;
    LearnerOutput out{Concept(Threshold{I.mid()})};
    std::size_t steps = 0;
    while (I.width() > 2.0 * epsilon) {
        if (++steps > kIterationCap)
            throw std::runtime_error(
                "active_threshold_det: interval not contracting (STOP is infinite?)");
        ExamplePair pair = oracle.query_active(I.mid());
        ++out.interactions;
        double x = pair.x[0];
        double xp = pair.xp[0];
        if (xp > x) {
            I.lo = std::max(I.lo, xp - contraction_from_gap(f, xp - x));
            I.hi = std::min(I.hi, xp);
        } else if (xp < x) {
            I.lo = std::max(I.lo, xp);
            I.hi = std::min(I.hi, xp + contraction_from_gap(f, x - xp));
        } else {
            I.lo = I.hi = xp;
        }
        if (I.hi < I.lo) I.hi = I.lo;  // numeric safety; a valid oracle never crosses
        out.snapshots.emplace_back(Threshold{I.mid()});
    }
    out.hypothesis = Concept(Threshold{I.mid()});
    return out;
}

LearnerOutput active_homogeneous_one_shot(ContrastiveOracle& oracle, double epsilon,
                                          double delta, double c) {
    int k = oracle.dim();
    double r = std::min(std::pow(M_PI * epsilon * delta, 1.0 / c), 0.5);
    ExamplePair pair = oracle.query_active(e0_scaled(k, r));
    auto h = induced_homogeneous(pair.x, pair.xp, pair.lx);
    LearnerOutput out{Concept(make_halfspace(e0_scaled(k, 1.0), 0.0, true))};
    out.interactions = 1;
    if (!h.has_value()) {
        if (k < 2) throw std::runtime_error("one_shot: degenerate contrastive direction");
        Point perp(static_cast<std::size_t>(k), 0.0);
        perp[1] = r;
        pair = oracle.query_active(perp);
        h = induced_homogeneous(pair.x, pair.xp, pair.lx);
        ++out.interactions;
        if (!h.has_value())
            throw std::runtime_error("one_shot: degenerate contrastive direction twice");
    }
    out.hypothesis = Concept(*h);
    out.snapshots.assign(out.interactions, out.hypothesis);
    return out;
}

LearnerOutput active_halfspace_chain(ContrastiveOracle& oracle, const NoiseFunction& f,
                                     double epsilon, double c, int k) {
    double target = std::pow(epsilon / std::pow(2.0, k), 1.0 / c);
    std::size_t m = stop_count(f, 0.5, target);
    if (m == kStopInfinity)
        throw std::runtime_error("active_halfspace_chain: STOP(f, 1/2, eps') is infinite");
    m = std::max<std::size_t>(m, 1);
    Point x(static_cast<std::size_t>(k), 0.0);
    LearnerOutput out{Concept(make_halfspace(e0_scaled(k, 1.0), 0.0, false))};
    for (std::size_t t = 0; t < m; ++t) {
        ExamplePair pair = oracle.query_active(x);
        ++out.interactions;
        if (norm(sub(pair.xp, pair.x)) > 0.0)
            out.hypothesis = Concept(induced_halfspace(pair.x, pair.xp, pair.lx));
        out.snapshots.push_back(out.hypothesis);
        x = pair.xp;
    }
    return out;
}

LearnerOutput passive_threshold(const std::vector<ExamplePair>& sample,
                                const NoiseFunction& f, double epsilon) {
    if (sample.empty()) throw std::invalid_argument("passive_threshold: empty sample");
    bool use_contrastive = f.eval(epsilon) <= epsilon;
    const ExamplePair* star = nullptr;
    for (const auto& p : sample)  // max positive primary
        if (p.lx == 1 && (star == nullptr || p.x[0] > star->x[0])) star = &p;
    if (star == nullptr)
        for (const auto& p : sample)  // mirrored rule: min negative primary
            if (star == nullptr || p.x[0] < star->x[0]) star = &p;
    double theta = use_contrastive ? star->xp[0] : star->x[0];
    LearnerOutput out{Concept(Threshold{std::clamp(theta, 0.0, 1.0)})};
    out.interactions = sample.size();
    return out;
}

LearnerOutput passive_homogeneous(const std::vector<ExamplePair>& sample) {
    if (sample.empty()) throw std::invalid_argument("passive_homogeneous: empty sample");
    std::optional<Halfspace> best;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& p : sample) {
        double d = norm(sub(p.x, p.xp));
        if (d >= best_d) continue;  // strict: lowest index wins ties
        auto h = induced_homogeneous(p.x, p.xp, p.lx);
        if (!h.has_value()) continue;
        best = h;
        best_d = d;
    }
    if (!best.has_value())
        throw std::runtime_error("passive_homogeneous: all pairs degenerate");
    LearnerOutput out{Concept(*best)};
    out.interactions = sample.size();
    return out;
}

LearnerOutput prob_threshold_expected(ContrastiveOracle& oracle, std::size_t n_subphases) {
    VersionInterval I;
    LearnerOutput out{Concept(Threshold{I.mid()})};
    auto absorb = [&I](double pt, int lab) {
        if (lab == 1)
            I.lo = std::max(I.lo, pt);
        else
            I.hi = std::min(I.hi, pt);
    };
    for (std::size_t t = 0; t < n_subphases; ++t) {
        if (I.width() <= std::numeric_limits<double>::epsilon()) break;
        ExamplePair mid_pair = oracle.query_active(I.mid());
        ++out.interactions;
        absorb(mid_pair.x[0], mid_pair.lx);
        absorb(mid_pair.xp[0], mid_pair.lxp);
        out.snapshots.emplace_back(Threshold{I.mid()});
        // far endpoint on the midpoint's own label side
        double endpoint = mid_pair.lx == 1 ? I.hi : I.lo;
        ExamplePair end_pair = oracle.query_active(endpoint);
        ++out.interactions;
        absorb(end_pair.x[0], end_pair.lx);
        absorb(end_pair.xp[0], end_pair.lxp);
        out.snapshots.emplace_back(Threshold{I.mid()});
    }
    out.hypothesis = Concept(Threshold{I.mid()});
    return out;
}

LearnerOutput prob_threshold_verified(ContrastiveOracle& oracle, const NoiseFunction& f,
                                      double epsilon, std::size_t interaction_cap) {
    if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
    double a = 0.0, b = 1.0;
    LearnerOutput out{Concept(Threshold{0.5})};
    auto snap = [&] { out.snapshots.emplace_back(Threshold{0.5 * (a + b)}); };
    while (b - a > 2.0 * epsilon) {
        if (out.interactions >= interaction_cap)
            throw std::runtime_error("prob_threshold_verified: interaction cap exceeded");
        ExamplePair pa = oracle.query_active(a);
        ++out.interactions;
        snap();
        if (pa.lx == 0) {  // theta pinned at a (possible only if theta == a exactly)
            b = a;
            out.snapshots.back() = Concept(Threshold{a});
            break;
        }
        ExamplePair pb = oracle.query_active(b);
        ++out.interactions;
        if (pb.lx == 1) {  // theta == b exactly
            a = b;
            snap();
            break;
        }
        double xa = pa.xp[0];  // opposite label of a: lies above theta
        double xb = pb.xp[0];  // opposite label of b: lies at or below theta
        if (xa - xb <= 4.0 * f.eval(b - a)) {
            a = std::max(a, xb);
            b = std::min(b, xa);
            if (b < a) b = a;
        }
        snap();
    }
    out.hypothesis = Concept(Threshold{0.5 * (a + b)});
    return out;
}

LearnerOutput prob_halfspace_subphase(ContrastiveOracle& oracle, const NoiseFunction& f,
                                      double epsilon, double c, int k, std::size_t budget) {
    if (budget == 0) {
        double target = std::pow(epsilon / std::pow(2.0, k - 1), 1.0 / c);
        std::size_t s = stop_count([&f](double r) { return 3.0 * f.eval(2.0 * r); }, 0.5,
                                   target);
        if (s == kStopInfinity)
            throw std::invalid_argument(
                "prob_halfspace_subphase: default budget is infinite, pass one explicitly");
        budget = 8 * s + 8;
    }
    Point z(static_cast<std::size_t>(k), 0.0);
    LearnerOutput out{Concept(make_halfspace(e0_scaled(k, 1.0), 0.0, false))};
    while (out.interactions < budget) {
        ExamplePair px = oracle.query_active(z);  // fresh pair for the anchor
        ++out.interactions;
        out.snapshots.push_back(out.hypothesis);
        if (out.interactions >= budget) break;
        double d = norm(sub(px.xp, px.x));
        double u = inverse_i_plus_2f(f, d);
        Point zc = d > 0.0 ? add(px.x, scale(sub(px.xp, px.x), u / d)) : px.x;
        ExamplePair pz = oracle.query_active(zc);
        ++out.interactions;
        if (pz.lx == px.lx) {  // helper success: advance and refresh the hypothesis
            if (norm(sub(pz.xp, pz.x)) > 0.0)
                out.hypothesis = Concept(induced_halfspace(pz.x, pz.xp, pz.lx));
            z = zc;
        }
        out.snapshots.push_back(out.hypothesis);
    }
    return out;
}

}  // namespace hsl
