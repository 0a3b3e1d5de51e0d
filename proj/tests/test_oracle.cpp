#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hsl/oracle.hpp"

using namespace hsl;

namespace {
const NoiseFunction kPoly = NoiseFunction::polynomial(1.0, 0.25);
}

TEST_CASE("MDM contrastive is the boundary minimizer") {
    ContrastiveOracle oracle(Concept(Threshold{0.5}), MinDistance{}, 1);
    ExamplePair p = oracle.query_active(0.2);
    CHECK(p.lx == 1);
    CHECK(p.xp[0] == doctest::Approx(0.5));
    CHECK(p.lxp == 1);  // footnote: equal labels permitted under MDM

    Concept hom(make_halfspace({0.0, 1.0}, 0.0, true));
    ContrastiveOracle ho(hom, MinDistance{}, 2);
    ExamplePair q = ho.query_active(Point{0.1, 0.3});
    CHECK(q.xp[0] == doctest::Approx(0.1));
    CHECK(q.xp[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(q.lxp == 1);
}

TEST_CASE("deterministic AMDM strategies on thresholds") {
    Mechanism far{DetAMDM{kPoly, DetStrategy::FarthestValid}};
    ContrastiveOracle oracle(Concept(Threshold{0.5}), far, 3);
    ExamplePair p = oracle.query_active(0.3);  // budget f(0.2) = 0.01
    CHECK(p.xp[0] == doctest::Approx(0.51));
    CHECK(p.lxp == 0);
    ExamplePair q = oracle.query_active(0.9);  // opposite side: 0.5 - f(0.4)
    CHECK(q.xp[0] == doctest::Approx(0.46));
    CHECK(q.lxp == 1);

    Mechanism near{DetAMDM{NoiseFunction::zero(), DetStrategy::NearestValid}};
    ContrastiveOracle zo(Concept(Threshold{0.5}), near, 4);
    ExamplePair z = zo.query_active(0.2);
    CHECK(z.xp[0] == doctest::Approx(0.5 + kEta));
    CHECK(z.lxp == 0);

    Mechanism rnd{DetAMDM{kPoly, DetStrategy::RandomInBall}};
    ContrastiveOracle ro(Concept(Threshold{0.5}), rnd, 5);
    for (int i = 0; i < 200; ++i) {
        ExamplePair r = ro.query_active(0.3);
        CHECK(r.lxp == 0);
        CHECK(r.xp[0] >= 0.5);
        CHECK(r.xp[0] <= 0.51 + kEta);
    }
}

TEST_CASE("scaled uniform expectation on thresholds") {
    Mechanism mech{ProbAMDM{kPoly, ProbStrategy::ScaledUniform}};
    ContrastiveOracle oracle(Concept(Threshold{0.5}), mech, 6);
    double mean = 0.0;
    const int n = 10'000;
    for (int i = 0; i < n; ++i) {
        ExamplePair p = oracle.query_active(0.3);
        REQUIRE(p.xp[0] > 0.5);
        mean += std::abs(p.xp[0] - 0.5);
    }
    mean /= n;
    CHECK(std::abs(mean - 0.01) < 0.0005);  // E[D] = f(0.2) = 0.01
}

TEST_CASE("passive sampling") {
    ContrastiveOracle oracle(Concept(Threshold{0.5}), MinDistance{}, 7);
    int positives = 0;
    const int n = 10'000;
    for (int i = 0; i < n; ++i) {
        ExamplePair p = oracle.sample_passive();
        REQUIRE(p.x[0] >= 0.0);
        REQUIRE(p.x[0] <= 1.0);
        positives += p.lx;
    }
    CHECK(std::abs(double(positives) / n - 0.5) < 0.02);

    Concept hs(make_halfspace({1.0, 1.0}, 0.1, false));
    ContrastiveOracle bo(hs, MinDistance{}, 8);
    for (int i = 0; i < 1000; ++i) CHECK(norm(bo.sample_passive().x) <= 0.5 + 1e-12);
}

TEST_CASE("transcripts replay bit-for-bit") {
    Mechanism mech{ProbAMDM{kPoly, ProbStrategy::ScaledUniform}};
    Concept hs(make_halfspace({0.3, -0.8}, 0.05, false));
    ContrastiveOracle a(hs, mech, 99);
    ContrastiveOracle b(hs, mech, 99);
    for (int i = 0; i < 50; ++i) {
        ExamplePair pa = a.sample_passive();
        ExamplePair pb = b.sample_passive();
        CHECK(pa.x == pb.x);
        CHECK(pa.xp == pb.xp);
        CHECK(pa.lx == pb.lx);
        CHECK(pa.lxp == pb.lxp);
    }
    CHECK(a.query_count() == 50);
}

TEST_CASE("version-space adversary follows the proof") {
    auto oracle = ContrastiveOracle::threshold_adversary(NoiseFunction::linear(0.5), 11);
    ExamplePair p = oracle.query_active(0.5);
    CHECK(p.lx == 1);
    CHECK(p.xp[0] == doctest::Approx(1.0));
    auto [lo, hi] = oracle.adversary_interval();
    CHECK(hi == doctest::Approx(1.0));
    CHECK(lo == doctest::Approx(1.0 - 1.0 / 6.0));  // u + u/2 = 0.5, f(u) = 1/6

    // interval never grows
    Rng rng(12);
    double width = hi - lo;
    for (int i = 0; i < 100; ++i) {
        oracle.query_active(rng.uniform());
        auto [l2, h2] = oracle.adversary_interval();
        CHECK(h2 - l2 <= width + 1e-15);
        width = h2 - l2;
    }

    // committed concept is consistent with the whole transcript
    auto o2 = ContrastiveOracle::threshold_adversary(kPoly, 13);
    Rng r2(14);
    for (int i = 0; i < 30; ++i) o2.query_active(r2.uniform());
    const Concept& target = o2.target();
    Mechanism mech{DetAMDM{kPoly, DetStrategy::FarthestValid}};
    for (const auto& pair : o2.transcript()) {
        CHECK(label(target, pair.x) == pair.lx);
        double d = std::abs(pair.xp[0] - target.threshold().theta);
        double r = std::abs(pair.x[0] - target.threshold().theta);
        CHECK(d <= kPoly.eval(r) + 1e-12);
    }
}

TEST_CASE("zero-noise adversary pins the threshold in one query") {
    auto oracle = ContrastiveOracle::threshold_adversary(NoiseFunction::zero(), 15);
    ExamplePair p = oracle.query_active(0.5);
    auto [lo, hi] = oracle.adversary_interval();
    CHECK(lo == hi);
    CHECK(lo == doctest::Approx(p.xp[0]));
}

TEST_CASE("embedded half-space adversary") {
    auto oracle = ContrastiveOracle::embedded_halfspace_adversary(2, NoiseFunction::zero(), 16);
    ExamplePair p = oracle.query_active(Point{0.1, 0.2});
    CHECK(p.xp[1] == doctest::Approx(0.2));  // other coordinates preserved
    auto [lo, hi] = oracle.adversary_interval();
    CHECK(lo == hi);  // f = 0: one query pins p
    const Concept& c = oracle.target();
    CHECK(!c.is_threshold());
    // C_p(x) = 1{x[0] <= p}
    CHECK(label(c, Point{lo - 0.01, 0.0}) == 1);
    CHECK(label(c, Point{lo + 0.01, 0.0}) == 0);
    CHECK_THROWS_AS(ContrastiveOracle::embedded_halfspace_adversary(1, kPoly, 1),
                    std::invalid_argument);
}

TEST_CASE("passive threshold adversary assignments") {
    PassiveThresholdAssignment out =
        adversary_passive_threshold({0.4, 0.6}, Threshold{0.5}, kPoly);
    // r = 0.1, f(r) = 0.0025
    REQUIRE(out.pairs.size() == 2);
    CHECK(out.pairs[0].xp[0] == doctest::Approx(0.50125));  // positive -> tilde_plus
    CHECK(out.pairs[1].xp[0] == doctest::Approx(0.49875));  // negative -> tilde_minus
    CHECK(out.lo >= 0.4);
    CHECK(out.hi <= 0.6);

    // every theta in [lo, hi) labels the sample consistently and admits the
    // assigned contrastives within budget
    for (double theta = out.lo; theta < out.hi - 1e-9; theta += (out.hi - out.lo) / 50.0) {
        Threshold t{theta};
        for (const auto& pair : out.pairs) {
            CHECK(label(t, pair.x[0]) == pair.lx);
            double r = std::abs(pair.x[0] - theta);
            CHECK(std::abs(pair.xp[0] - theta) <= kPoly.eval(r) + 1e-12);
        }
    }

    PassiveThresholdAssignment z =
        adversary_passive_threshold({0.4, 0.6}, Threshold{0.5}, NoiseFunction::zero());
    CHECK(z.pairs[0].xp[0] == doctest::Approx(0.5));
    CHECK(z.pairs[1].xp[0] == doctest::Approx(0.5));

    // one label class missing: degenerates to MDM at the provisional threshold
    PassiveThresholdAssignment d =
        adversary_passive_threshold({0.1, 0.2}, Threshold{0.5}, kPoly);
    CHECK(d.lo == doctest::Approx(0.5));
    CHECK(d.pairs[0].xp[0] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("transcript audits") {
    Concept hs(make_halfspace({0.6, 0.8}, 0.1, false));
    for (DetStrategy strat :
         {DetStrategy::FarthestValid, DetStrategy::NearestValid, DetStrategy::RandomInBall}) {
        Mechanism mech{DetAMDM{kPoly, strat}};
        ContrastiveOracle oracle(hs, mech, 17 + int(strat));
        for (int i = 0; i < 200; ++i) oracle.sample_passive();
        TranscriptAudit audit = audit_transcript(hs, mech, oracle.transcript());
        CHECK(audit.ok);
        CHECK(audit.violations == 0);
    }
    Mechanism mdm{MinDistance{}};
    ContrastiveOracle oracle(hs, mdm, 23);
    for (int i = 0; i < 100; ++i) oracle.sample_passive();
    CHECK(audit_transcript(hs, mdm, oracle.transcript()).ok);
}

TEST_CASE("probabilistic expectation audit") {
    ProbAMDM mech{kPoly, ProbStrategy::ScaledUniform};
    Concept th(Threshold{0.6});
    double mean = audit_prob_expectation(th, mech, Point{0.2}, 20'000, 31);
    double budget = kPoly.eval(0.4);
    CHECK(mean <= budget * (1.0 + 4.0 / std::sqrt(20'000.0)));
    CHECK(mean >= budget * 0.8);  // not trivially zero

    ProbAMDM pm{kPoly, ProbStrategy::PointMass};
    CHECK(audit_prob_expectation(th, pm, Point{0.2}, 100, 32) <= kEta + 1e-15);
}

TEST_CASE("TwoAtom validity and guards") {
    Mechanism mech{ProbAMDM{kPoly, ProbStrategy::TwoAtom}};
    Concept th(Threshold{0.7});
    ContrastiveOracle oracle(th, mech, 33);
    Rng rng(34);
    for (int i = 0; i < 500; ++i) {
        ExamplePair p = oracle.query_active(rng.uniform());
        CHECK(p.lxp == 1 - p.lx);  // AMDM labels always differ
    }
    CHECK_THROWS_AS(ContrastiveOracle(Concept(make_halfspace({1.0, 0.0}, 0.0, true)), mech, 1),
                    std::invalid_argument);
}

TEST_CASE("domain validation") {
    ContrastiveOracle oracle(Concept(Threshold{0.5}), MinDistance{}, 35);
    CHECK_THROWS_AS(oracle.query_active(1.5), std::invalid_argument);
    Concept hs(make_halfspace({1.0, 0.0}, 0.0, false));
    ContrastiveOracle bo(hs, MinDistance{}, 36);
    CHECK_THROWS_AS(bo.query_active(Point{0.6, 0.6}), std::invalid_argument);
    CHECK_THROWS_AS(bo.query_active(Point{0.1}), std::invalid_argument);
}
