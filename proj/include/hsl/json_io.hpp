#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hsl/experiments.hpp"
#include "hsl/geometry.hpp"
#include "hsl/noise.hpp"
#include "hsl/oracle.hpp"

namespace hsl {

using json = nlohmann::json;

json concept_to_json(const Concept& c);
Concept concept_from_json(const json& j);

json noise_to_json(const NoiseFunction& f);
NoiseFunction noise_from_json(const json& j);

json mechanism_to_json(const Mechanism& m);
Mechanism mechanism_from_json(const json& j);

// Post-run assertions a config may request; violations exit the CLI with
// status 2.
struct RunAssertions {
    std::optional<double> mean_error_le;
    std::optional<double> failure_rate_le;
    std::optional<double> mean_interactions_le;
};

struct RunSpec {
    ExperimentConfig config;
    RunAssertions asserts;
};

// Throws std::invalid_argument naming the offending field on malformed input.
RunSpec run_spec_from_json(const json& j);
json run_spec_to_json(const RunSpec& spec);

// trial,seed,interactions,final_error,first_hit (empty when censored);
// doubles printed with %.17g so output is byte-stable.
std::string results_to_csv(const std::vector<TrialResult>& results);

// One ExamplePair per line: {"x": [...], "lx": 0|1, "xp": [...], "lxp": 0|1}
std::string transcript_to_jsonl(const std::vector<ExamplePair>& transcript);

std::string format_double(double v);

}  // namespace hsl
