#include "hsl/json_io.hpp"

#include <cstdio>
#include <stdexcept>

namespace hsl {

namespace {

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
    throw std::invalid_argument(field + " " + why);
}

double require_number(const json& j, const std::string& field) {
    if (!j.contains(field) || !j[field].is_number()) bad_field(field, "must be a number");
    return j[field].get<double>();
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json concept_to_json(const Concept& c) {
    json j;
    if (c.is_threshold()) {
        j["kind"] = "threshold";
        j["theta"] = c.threshold().theta;
        j["dim"] = 1;
    } else {
        const Halfspace& h = c.halfspace();
        j["kind"] = "halfspace";
        j["omega"] = h.omega;
        j["b"] = h.b;
        j["homogeneous"] = h.homogeneous;
        j["dim"] = static_cast<int>(h.omega.size());
    }
    return j;
}

Concept concept_from_json(const json& j) {
    std::string kind = j.value("kind", "");
    if (kind == "threshold") {
        double theta = require_number(j, "theta");
        if (theta < 0.0 || theta > 1.0) bad_field("theta", "must be in [0, 1]");
        return Concept(Threshold{theta});
    }
    if (kind == "halfspace") {
        if (!j.contains("omega") || !j["omega"].is_array())
            bad_field("omega", "must be an array of numbers");
        Point omega = j["omega"].get<Point>();
        bool homogeneous = j.value("homogeneous", false);
        double b = homogeneous ? 0.0 : require_number(j, "b");
        return Concept(make_halfspace(std::move(omega), b, homogeneous));
    }
    bad_field("kind", "must be \"threshold\" or \"halfspace\"");
}

json noise_to_json(const NoiseFunction& f) {
    json j;
    std::visit(
        [&j](const auto& fam) {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, ZeroNoise>) {
                j["family"] = "zero";
            } else if constexpr (std::is_same_v<T, PolynomialNoise>) {
                j["family"] = "poly";
                j["c"] = fam.c;
                j["scale"] = fam.scale;
            } else if constexpr (std::is_same_v<T, ExponentialNoise>) {
                j["family"] = "exp";
                j["scale"] = fam.scale;
            } else if constexpr (std::is_same_v<T, LinearNoise>) {
                j["family"] = "linear";
                j["slope"] = fam.slope;
            } else {
                j["family"] = "table";
                j["table"] = fam.table;
            }
        },
        f.family());
    return j;
}

NoiseFunction noise_from_json(const json& j) {
    std::string family = j.value("family", "");
    if (family == "zero") return NoiseFunction::zero();
    if (family == "poly")
        return NoiseFunction::polynomial(require_number(j, "c"), require_number(j, "scale"));
    if (family == "exp") return NoiseFunction::exponential(require_number(j, "scale"));
    if (family == "linear") return NoiseFunction::linear(require_number(j, "slope"));
    if (family == "table") {
        if (!j.contains("table") || !j["table"].is_array())
            bad_field("table", "must be an array of [r, f(r)] pairs");
        return NoiseFunction::tabulated(j["table"].get<std::vector<std::pair<double, double>>>());
    }
    bad_field("family", "must be one of zero|poly|exp|linear|table");
}

namespace {

const char* det_strategy_name(DetStrategy s) {
    switch (s) {
        case DetStrategy::FarthestValid: return "farthest";
        case DetStrategy::NearestValid: return "nearest";
        case DetStrategy::RandomInBall: return "random";
        case DetStrategy::ThresholdVersionSpaceAdversary: return "vs-adversary";
        case DetStrategy::PassiveThresholdAdversary: return "passive-adversary";
        case DetStrategy::ThresholdEmbeddingAdversary: return "embedding-adversary";
    }
    return "?";
}

DetStrategy det_strategy_from(const std::string& s) {
    if (s == "farthest") return DetStrategy::FarthestValid;
    if (s == "nearest") return DetStrategy::NearestValid;
    if (s == "random") return DetStrategy::RandomInBall;
    if (s == "vs-adversary") return DetStrategy::ThresholdVersionSpaceAdversary;
    if (s == "passive-adversary") return DetStrategy::PassiveThresholdAdversary;
    if (s == "embedding-adversary") return DetStrategy::ThresholdEmbeddingAdversary;
    bad_field("strategy", "unknown deterministic strategy \"" + s + "\"");
}

const char* prob_strategy_name(ProbStrategy s) {
    switch (s) {
        case ProbStrategy::ScaledUniform: return "scaled-uniform";
        case ProbStrategy::TwoAtom: return "two-atom";
        case ProbStrategy::PointMass: return "point-mass";
    }
    return "?";
}

ProbStrategy prob_strategy_from(const std::string& s) {
    if (s == "scaled-uniform") return ProbStrategy::ScaledUniform;
    if (s == "two-atom") return ProbStrategy::TwoAtom;
    if (s == "point-mass") return ProbStrategy::PointMass;
    bad_field("strategy", "unknown probabilistic strategy \"" + s + "\"");
}

}  // namespace

json mechanism_to_json(const Mechanism& m) {
    json j;
    if (std::holds_alternative<MinDistance>(m)) {
        j["type"] = "mdm";
    } else if (const auto* det = std::get_if<DetAMDM>(&m)) {
        j["type"] = "det";
        j["strategy"] = det_strategy_name(det->strategy);
        j["noise"] = noise_to_json(det->f);
    } else {
        const auto& prob = std::get<ProbAMDM>(m);
        j["type"] = "prob";
        j["strategy"] = prob_strategy_name(prob.strategy);
        j["noise"] = noise_to_json(prob.f);
    }
    return j;
}

Mechanism mechanism_from_json(const json& j) {
    std::string type = j.value("type", "");
    if (type == "mdm") return MinDistance{};
    if (type == "det")
        return DetAMDM{noise_from_json(j.value("noise", json::object())),
                       det_strategy_from(j.value("strategy", "farthest"))};
    if (type == "prob")
        return ProbAMDM{noise_from_json(j.value("noise", json::object())),
                        prob_strategy_from(j.value("strategy", "scaled-uniform"))};
    bad_field("type", "must be one of mdm|det|prob");
}

RunSpec run_spec_from_json(const json& j) {
    RunSpec spec;
    ExperimentConfig& cfg = spec.config;
    if (!j.contains("learner") || !j["learner"].is_string())
        bad_field("learner", "must be a learner id string");
    cfg.learner = j["learner"].get<std::string>();

    if (!j.contains("concept")) bad_field("concept", "is required");
    const json& cj = j["concept"];
    if (cj.contains("generator")) {
        std::string g = cj["generator"].get<std::string>();
        if (g == "random-threshold")
            cfg.gen = ConceptGen::RandomThreshold;
        else if (g == "random-homogeneous")
            cfg.gen = ConceptGen::RandomHomogeneous;
        else if (g == "random-halfspace")
            cfg.gen = ConceptGen::RandomHalfspace;
        else if (g == "adversarial")
            cfg.gen = ConceptGen::Adversarial;
        else
            bad_field("concept.generator", "unknown generator \"" + g + "\"");
    } else {
        cfg.gen = ConceptGen::Fixed;
        cfg.fixed = concept_from_json(cj);
    }

    cfg.mechanism = mechanism_from_json(j.value("mechanism", json{{"type", "mdm"}}));

    cfg.epsilon = j.value("epsilon", 0.1);
    if (cfg.epsilon <= 0.0 || cfg.epsilon > 1.0) bad_field("epsilon", "must be in (0, 1]");
    cfg.delta = j.value("delta", 0.1);
    if (cfg.delta <= 0.0 || cfg.delta > 1.0) bad_field("delta", "must be in (0, 1]");
    cfg.c = j.value("c", 1.0);
    if (cfg.c <= 0.0) bad_field("c", "must be positive");
    cfg.k = j.value("k", 2);
    if (cfg.k < 1) bad_field("k", "must be >= 1");
    cfg.trials = j.value("trials", std::size_t{100});
    if (cfg.trials < 1) bad_field("trials", "must be >= 1");
    cfg.budget = j.value("budget", std::size_t{0});
    cfg.mc_samples = j.value("mc_samples", std::size_t{100'000});
    if (cfg.mc_samples < 1) bad_field("mc_samples", "must be >= 1");
    cfg.master_seed = j.value("seed", std::uint64_t{1});
    if (j.contains("sweep")) {
        cfg.sweep = j["sweep"].get<std::vector<double>>();
        for (std::size_t i = 1; i < cfg.sweep.size(); ++i)
            if (cfg.sweep[i] <= cfg.sweep[i - 1])
                bad_field("sweep", "must be strictly monotone increasing");
    }
    if (j.contains("assert")) {
        const json& a = j["assert"];
        if (a.contains("mean_error_le")) spec.asserts.mean_error_le = a["mean_error_le"];
        if (a.contains("failure_rate_le")) spec.asserts.failure_rate_le = a["failure_rate_le"];
        if (a.contains("mean_interactions_le"))
            spec.asserts.mean_interactions_le = a["mean_interactions_le"];
    }
    return spec;
}

json run_spec_to_json(const RunSpec& spec) {
    const ExperimentConfig& cfg = spec.config;
    json j;
    j["learner"] = cfg.learner;
    switch (cfg.gen) {
        case ConceptGen::Fixed: j["concept"] = concept_to_json(*cfg.fixed); break;
        case ConceptGen::RandomThreshold:
            j["concept"] = {{"generator", "random-threshold"}};
            break;
        case ConceptGen::RandomHomogeneous:
            j["concept"] = {{"generator", "random-homogeneous"}};
            break;
        case ConceptGen::RandomHalfspace:
            j["concept"] = {{"generator", "random-halfspace"}};
            break;
        case ConceptGen::Adversarial: j["concept"] = {{"generator", "adversarial"}}; break;
    }
    j["mechanism"] = mechanism_to_json(cfg.mechanism);
    j["epsilon"] = cfg.epsilon;
    j["delta"] = cfg.delta;
    j["c"] = cfg.c;
    j["k"] = cfg.k;
    j["trials"] = cfg.trials;
    j["budget"] = cfg.budget;
    j["mc_samples"] = cfg.mc_samples;
    j["seed"] = cfg.master_seed;
    if (!cfg.sweep.empty()) j["sweep"] = cfg.sweep;
    json a = json::object();
    if (spec.asserts.mean_error_le) a["mean_error_le"] = *spec.asserts.mean_error_le;
    if (spec.asserts.failure_rate_le) a["failure_rate_le"] = *spec.asserts.failure_rate_le;
    if (spec.asserts.mean_interactions_le)
        a["mean_interactions_le"] = *spec.asserts.mean_interactions_le;
    if (!a.empty()) j["assert"] = a;
    return j;
}

std::string results_to_csv(const std::vector<TrialResult>& results) {
    std::string out = "trial,seed,interactions,final_error,first_hit\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
        const TrialResult& r = results[i];
        out += std::to_string(i);
        out += ',';
        out += std::to_string(r.seed);
        out += ',';
        out += std::to_string(r.interactions);
        out += ',';
        out += format_double(r.final_error);
        out += ',';
        if (r.first_hit.has_value()) out += std::to_string(*r.first_hit);
        out += '\n';
    }
    return out;
}

std::string transcript_to_jsonl(const std::vector<ExamplePair>& transcript) {
    std::string out;
    for (const auto& p : transcript) {
        json j;
        j["x"] = p.x;
        j["lx"] = p.lx;
        j["xp"] = p.xp;
        j["lxp"] = p.lxp;
        out += j.dump();
        out += '\n';
    }
    return out;
}

}  // namespace hsl
