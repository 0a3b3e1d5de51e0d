#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hsl/experiments.hpp"
#include "hsl/json_io.hpp"
#include "hsl/learners.hpp"

namespace fs = std::filesystem;
using hsl::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitAssert = 2;

std::optional<std::uint64_t> env_seed() {
    const char* v = std::getenv("HALFSPACE_LAB_SEED");
    if (v == nullptr || *v == '\0') return std::nullopt;
    return std::strtoull(v, nullptr, 10);
}

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

// ---- run ------------------------------------------------------------------

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed_flag) {
    hsl::RunSpec spec;
    try {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "cannot open config: " << config_path << "\n";
            return kExitUsage;
        }
        json j = json::parse(in);
        spec = hsl::run_spec_from_json(j);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    }
    if (seed_flag) spec.config.master_seed = *seed_flag;
    if (auto es = env_seed()) spec.config.master_seed = *es;

    std::vector<hsl::TrialResult> results;
    try {
        results = hsl::run_trials(spec.config, /*track_first_hit=*/true);
    } catch (const std::exception& e) {
        std::cerr << "run error: " << e.what() << "\n";
        return kExitUsage;
    }

    double mean_err = 0.0, mean_inter = 0.0;
    std::size_t fails = 0, censored = 0;
    for (const auto& r : results) {
        mean_err += r.final_error;
        mean_inter += static_cast<double>(r.interactions);
        if (r.final_error > spec.config.epsilon) ++fails;
        if (!r.first_hit.has_value()) ++censored;
    }
    double n = static_cast<double>(results.size());
    mean_err /= n;
    mean_inter /= n;
    double failure_rate = static_cast<double>(fails) / n;
    hsl::HighProbToExpect hp = hsl::highprob_to_expect_check(results, spec.config.epsilon);

    json report;
    report["config"] = hsl::run_spec_to_json(spec);
    report["aggregates"] = {{"trials", results.size()},
                            {"mean_error", mean_err},
                            {"mean_interactions", mean_inter},
                            {"failure_rate", failure_rate},
                            {"censored_first_hit", censored}};
    report["highprob_to_expect"] = {{"mean_error", hp.mean_error},
                                    {"bound", hp.bound},
                                    {"gamma", hp.gamma},
                                    {"failure_rate", hp.failure_rate},
                                    {"pass", hp.ok}};
    bool ok = hp.ok;
    json asserts = json::array();
    auto check = [&](const char* name, std::optional<double> bound, double value) {
        if (!bound) return;
        bool pass = value <= *bound;
        asserts.push_back({{"name", name}, {"bound", *bound}, {"value", value}, {"pass", pass}});
        ok = ok && pass;
    };
    check("mean_error_le", spec.asserts.mean_error_le, mean_err);
    check("failure_rate_le", spec.asserts.failure_rate_le, failure_rate);
    check("mean_interactions_le", spec.asserts.mean_interactions_le, mean_inter);
    report["assertions"] = asserts;
    report["pass"] = ok;

    write_file(fs::path(out_dir) / "results.csv", hsl::results_to_csv(results));
    write_file(fs::path(out_dir) / "report.json", report.dump(2) + "\n");
    std::cout << (ok ? "PASS" : "FAIL") << " mean_error=" << mean_err
              << " failure_rate=" << failure_rate << " mean_interactions=" << mean_inter
              << "\n";
    return ok ? kExitOk : kExitAssert;
}

// ---- table ----------------------------------------------------------------

std::size_t adversary_count(const hsl::NoiseFunction& f, double epsilon, std::uint64_t seed) {
    auto oracle = hsl::ContrastiveOracle::threshold_adversary(f, seed);
    return hsl::active_threshold_det(oracle, f, epsilon).interactions;
}

const char* fit_verdict(const hsl::FitReport& fit) { return fit.pass ? "pass" : "fail"; }

int cmd_table(const std::string& which, const std::string& out_dir, std::uint64_t seed) {
    std::ostringstream txt;
    std::string csv = "row,epsilon,count\n";
    auto add_csv = [&csv](const std::string& row, double eps, double count) {
        csv += row + "," + hsl::format_double(eps) + "," + hsl::format_double(count) + "\n";
    };

    if (which == "1a") {
        txt << "interaction counts, active learners (high-probability regime)\n\n";
        hsl::NoiseFunction poly = hsl::NoiseFunction::polynomial(1.0, 0.25);
        hsl::NoiseFunction expf = hsl::NoiseFunction::exponential(0.25);
        hsl::NoiseFunction zero = hsl::NoiseFunction::zero();

        txt << "thresholds, f(r) = r^2/4 (expected: log log 1/eps)\n";
        std::vector<std::pair<double, double>> meas;
        for (int j = 2; j <= 6; ++j) {
            double eps = std::pow(2.0, -std::pow(2.0, j));
            double cnt = static_cast<double>(adversary_count(poly, eps, seed + j));
            meas.emplace_back(eps, cnt);
            txt << "  eps=2^-" << (1 << j) << "  count=" << cnt << "\n";
            add_csv("thresh-poly", eps, cnt);
        }
        auto fit = hsl::scaling_fit(meas, hsl::ScalingModel::LogLog);
        txt << "  loglog fit: a=" << fit.a << " b=" << fit.b
            << " max_residual=" << fit.max_residual << " -> " << fit_verdict(fit) << "\n\n";

        txt << "thresholds, f(r) = e^{-1/r}/4 (expected: log* 1/eps)\n";
        meas.clear();
        for (double eps : {1e-1, 1e-3, 1e-6, 1e-10, 1e-15}) {
            double cnt = static_cast<double>(adversary_count(expf, eps, seed + 17));
            meas.emplace_back(eps, cnt);
            txt << "  eps=" << eps << "  count=" << cnt << "\n";
            add_csv("thresh-exp", eps, cnt);
        }
        fit = hsl::scaling_fit(meas, hsl::ScalingModel::LogStar);
        txt << "  logstar fit: a=" << fit.a << " b=" << fit.b
            << " max_residual=" << fit.max_residual << " -> " << fit_verdict(fit) << "\n\n";

        txt << "thresholds, f = 0 (expected: constant 1)\n";
        for (double eps : {1e-2, 1e-6, 1e-12}) {
            double cnt = static_cast<double>(adversary_count(zero, eps, seed + 29));
            txt << "  eps=" << eps << "  count=" << cnt << "\n";
            add_csv("thresh-zero", eps, cnt);
        }
        txt << "\nhomogeneous half-spaces, one-shot learner (expected: constant 1)\n";
        {
            hsl::ExperimentConfig cfg;
            cfg.learner = "hhs-one-shot";
            cfg.gen = hsl::ConceptGen::RandomHomogeneous;
            cfg.mechanism = hsl::ProbAMDM{hsl::NoiseFunction::polynomial(1.0, 1.0),
                                          hsl::ProbStrategy::ScaledUniform};
            cfg.epsilon = 0.05;
            cfg.delta = 0.2;
            cfg.k = 3;
            cfg.trials = 50;
            cfg.master_seed = seed + 41;
            auto results = hsl::run_trials(cfg);
            double maxi = 0;
            for (const auto& r : results) maxi = std::max(maxi, double(r.interactions));
            txt << "  k=3, eps=0.05, delta=0.2: max interactions over 50 trials = " << maxi
                << "\n";
            add_csv("hhs-one-shot", 0.05, maxi);
        }
        txt << "\ngeneral half-spaces, chain learner, f(r) = r^2/4, k = 2\n";
        meas.clear();
        for (double eps : {0.2, 0.05, 0.01, 1e-3, 1e-5}) {
            hsl::ExperimentConfig cfg;
            cfg.learner = "hs-chain";
            cfg.gen = hsl::ConceptGen::RandomHalfspace;
            cfg.mechanism = hsl::DetAMDM{poly, hsl::DetStrategy::FarthestValid};
            cfg.epsilon = eps;
            cfg.k = 2;
            cfg.trials = 20;
            cfg.mc_samples = 20'000;
            cfg.master_seed = seed + 53;
            auto results = hsl::run_trials(cfg);
            double cnt = double(results.front().interactions);
            meas.emplace_back(eps, cnt);
            txt << "  eps=" << eps << "  count=" << cnt << "\n";
            add_csv("hs-chain", eps, cnt);
        }
        fit = hsl::scaling_fit(meas, hsl::ScalingModel::LogLog);
        txt << "  loglog fit: a=" << fit.a << " b=" << fit.b
            << " max_residual=" << fit.max_residual << " -> " << fit_verdict(fit) << "\n";
    } else if (which == "1b") {
        txt << "expected-error and expected-requirement regime\n\n";
        hsl::NoiseFunction poly = hsl::NoiseFunction::polynomial(1.0, 0.25);
        txt << "probabilistic bisection, f(r) = r^2/4, mean error after n sub-phases\n";
        for (std::size_t nphases : {1, 2, 3, 4, 5}) {
            hsl::ExperimentConfig cfg;
            cfg.learner = "prob-thresh-exp";
            cfg.gen = hsl::ConceptGen::RandomThreshold;
            cfg.mechanism = hsl::ProbAMDM{poly, hsl::ProbStrategy::ScaledUniform};
            cfg.trials = 400;
            cfg.master_seed = seed + nphases;
            auto est = hsl::estimate_expected_error(cfg, nphases);
            double bound = std::pow(2.0, -double(nphases) - 1.0);
            for (std::size_t i = 1; i <= nphases; ++i)
                bound *= poly.ratio_g(std::pow(2.0, -double(i)));
            txt << "  n=" << nphases << "  mean_err=" << est.mean << " (se " << est.std_error
                << ")  theorem bound=" << bound << "\n";
            add_csv("prob-thresh-exp", double(nphases), est.mean);
        }
        txt << "\nverified threshold learner, f(r) = r^2/4, mean interactions\n";
        for (double eps : {1e-2, 1e-3, 1e-4}) {
            hsl::ExperimentConfig cfg;
            cfg.learner = "prob-thresh-verified";
            cfg.gen = hsl::ConceptGen::RandomThreshold;
            cfg.mechanism = hsl::ProbAMDM{poly, hsl::ProbStrategy::ScaledUniform};
            cfg.epsilon = eps;
            cfg.trials = 200;
            cfg.master_seed = seed + 97;
            auto est = hsl::estimate_expected_error(cfg, 0);
            hsl::ExperimentConfig cfg2 = cfg;
            auto results = hsl::run_trials(cfg2);
            double mi = 0;
            for (const auto& r : results) mi += double(r.interactions);
            mi /= double(results.size());
            txt << "  eps=" << eps << "  mean_interactions=" << mi
                << "  mean_err=" << est.mean << "\n";
            add_csv("prob-thresh-verified", eps, mi);
        }
        txt << "\nsub-phase half-space learner, f(r) = r^2/16, k = 2, eps = 0.1\n";
        {
            hsl::ExperimentConfig cfg;
            cfg.learner = "prob-hs-subphase";
            cfg.gen = hsl::ConceptGen::RandomHalfspace;
            cfg.mechanism = hsl::ProbAMDM{hsl::NoiseFunction::polynomial(1.0, 1.0 / 16.0),
                                          hsl::ProbStrategy::ScaledUniform};
            cfg.epsilon = 0.1;
            cfg.k = 2;
            cfg.trials = 100;
            cfg.mc_samples = 20'000;
            cfg.master_seed = seed + 131;
            auto req = hsl::estimate_expected_requirement(cfg, 0.1);
            txt << "  mean first-hit requirement = " << req.mean << " (se " << req.std_error
                << "), censored " << req.censored << "/" << req.total
                << ", theorem budget = 24\n";
            add_csv("prob-hs-subphase", 0.1, req.mean);
        }
    } else if (which == "2") {
        txt << "passive sample-complexity estimates\n\n";
        {
            hsl::ExperimentConfig cfg;
            cfg.learner = "passive-thresh";
            cfg.gen = hsl::ConceptGen::RandomThreshold;
            cfg.mechanism = hsl::DetAMDM{hsl::NoiseFunction::polynomial(1.0, 0.25),
                                         hsl::DetStrategy::FarthestValid};
            cfg.trials = 300;
            cfg.master_seed = seed + 1;
            cfg.sweep = {10, 20, 33};
            std::size_t m = hsl::estimate_sample_complexity(cfg, 0.05, 0.2);
            txt << "thresholds, f(r) = r^2/4, eps=0.05, delta=0.2: measured m* = " << m
                << " (theorem: ceil(ln(1/delta)/min(f^-1(eps), eps)) = 33)\n";
            add_csv("passive-thresh", 0.05, double(m));
        }
        {
            hsl::ExperimentConfig cfg;
            cfg.learner = "passive-hhs";
            cfg.gen = hsl::ConceptGen::RandomHomogeneous;
            cfg.mechanism = hsl::DetAMDM{hsl::NoiseFunction::polynomial(1.0, 1.0),
                                         hsl::DetStrategy::RandomInBall};
            cfg.k = 2;
            cfg.trials = 300;
            cfg.master_seed = seed + 2;
            cfg.sweep = {4, 7, 11};
            std::size_t m = hsl::estimate_sample_complexity(cfg, 0.05, 0.2);
            txt << "homogeneous half-spaces, f(r) = r^2, eps=0.05, delta=0.2, k=2: measured "
                   "m* = "
                << m << " (theorem: ceil(ln(1/delta)/(2 eps')) = 11)\n";
            add_csv("passive-hhs", 0.05, double(m));
        }
    } else {
        std::cerr << "unknown table: " << which << "\n";
        return kExitUsage;
    }

    write_file(fs::path(out_dir) / ("table_" + which + ".txt"), txt.str());
    write_file(fs::path(out_dir) / ("table_" + which + ".csv"), csv);
    std::cout << txt.str();
    return kExitOk;
}

// ---- verify ---------------------------------------------------------------

int cmd_verify(const std::string& out_dir, std::uint64_t seed) {
    std::vector<hsl::SuiteReport> suites;
    suites.push_back(hsl::verify_noise_properties(seed));
    suites.push_back(hsl::verify_oracle_validity(seed + 1));
    suites.push_back(hsl::verify_two_atom_frequency(seed + 2));
    suites.push_back(hsl::verify_convexity_lemma(1000, seed + 3));
    suites.push_back(hsl::verify_errdist({2, 3, 5}, 2000, 20'000, 60, seed + 4));

    json report = json::array();
    bool ok = true;
    for (const auto& s : suites) {
        report.push_back({{"suite", s.name},
                          {"checked", s.checked},
                          {"violations", s.violations},
                          {"max_slack", s.max_slack}});
        std::cout << (s.ok() ? "PASS " : "FAIL ") << s.name << ": checked=" << s.checked
                  << " violations=" << s.violations << " max_slack=" << s.max_slack << "\n";
        ok = ok && s.ok();
    }
    write_file(fs::path(out_dir) / "report.json", report.dump(2) + "\n");
    return ok ? kExitOk : kExitAssert;
}

// ---- plot -----------------------------------------------------------------

int cmd_plot(const std::string& in_csv, const std::string& x_col, const std::string& y_col,
             const std::string& out_svg, bool logx) {
    std::ifstream in(in_csv);
    if (!in) {
        std::cerr << "cannot open " << in_csv << "\n";
        return kExitUsage;
    }
    std::string line;
    if (!std::getline(in, line)) {
        std::cerr << "empty CSV\n";
        return kExitUsage;
    }
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(tok);
        if (!s.empty() && s.back() == ',') out.push_back("");
        return out;
    };
    auto header = split(line);
    long xi = -1, yi = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == x_col) xi = static_cast<long>(i);
        if (header[i] == y_col) yi = static_cast<long>(i);
    }
    if (xi < 0 || yi < 0) {
        std::cerr << "missing column: " << (xi < 0 ? x_col : y_col) << "\n";
        return kExitUsage;
    }
    std::vector<std::pair<double, double>> pts;
    while (std::getline(in, line)) {
        auto cells = split(line);
        if (cells.size() <= std::size_t(std::max(xi, yi))) continue;
        if (cells[xi].empty() || cells[yi].empty()) continue;
        try {
            double x = std::stod(cells[xi]);
            double y = std::stod(cells[yi]);
            if (logx) {
                if (x <= 0.0) continue;
                x = std::log10(x);
            }
            pts.emplace_back(x, y);
        } catch (...) {
            continue;
        }
    }
    if (pts.empty()) {
        std::cerr << "no plottable rows\n";
        return kExitUsage;
    }
    std::sort(pts.begin(), pts.end());
    double xmin = pts.front().first, xmax = pts.back().first;
    double ymin = pts.front().second, ymax = pts.front().second;
    for (auto& [x, y] : pts) {
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;
    const double W = 640, H = 480, M = 60;
    auto sx = [&](double x) { return M + (x - xmin) / (xmax - xmin) * (W - 2 * M); };
    auto sy = [&](double y) { return H - M - (y - ymin) / (ymax - ymin) * (H - 2 * M); };
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
           "viewBox=\"0 0 640 480\">\n";
    svg += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
    svg += "<line x1=\"60\" y1=\"420\" x2=\"580\" y2=\"420\" stroke=\"black\"/>\n";
    svg += "<line x1=\"60\" y1=\"60\" x2=\"60\" y2=\"420\" stroke=\"black\"/>\n";
    svg += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
    for (auto& [x, y] : pts)
        svg += hsl::format_double(sx(x)) + "," + hsl::format_double(sy(y)) + " ";
    svg += "\"/>\n";
    for (auto& [x, y] : pts)
        svg += "<circle cx=\"" + hsl::format_double(sx(x)) + "\" cy=\"" +
               hsl::format_double(sy(y)) + "\" r=\"3\" fill=\"crimson\"/>\n";
    auto text = [](double x, double y, const std::string& s, const char* anchor) {
        return "<text x=\"" + hsl::format_double(x) + "\" y=\"" + hsl::format_double(y) +
               "\" font-size=\"12\" text-anchor=\"" + anchor + "\">" + s + "</text>\n";
    };
    svg += text(60, 436, hsl::format_double(xmin), "middle");
    svg += text(580, 436, hsl::format_double(xmax), "middle");
    svg += text(54, 424, hsl::format_double(ymin), "end");
    svg += text(54, 64, hsl::format_double(ymax), "end");
    svg += text(320, 456, (logx ? "log10(" + x_col + ")" : x_col), "middle");
    svg += text(14, 240, y_col, "middle");
    svg += "</svg>\n";
    write_file(out_svg, svg);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"halfspace lab: contrastive-example learning experiments"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", which, in_csv, x_col, y_col, out_svg;
    std::optional<std::uint64_t> seed_flag;
    bool logx = false;

    auto* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("--config", config_path, "experiment config JSON")->required();
    run->add_option("--out", out_dir, "output directory")->required();
    std::uint64_t seed_value = 0;
    auto* seed_opt = run->add_option("--seed", seed_value, "master seed override");

    auto* table = app.add_subcommand("table", "reproduce a results table at desk scale");
    table->add_option("--which", which, "1a | 1b | 2")->required();
    table->add_option("--out", out_dir, "output directory")->required();

    auto* verify = app.add_subcommand("verify", "run all property suites");
    verify->add_option("--out", out_dir, "output directory")->required();

    auto* plot = app.add_subcommand("plot", "render a CSV as an SVG plot");
    plot->add_option("--in", in_csv, "input CSV")->required();
    plot->add_option("--x", x_col, "x column name")->required();
    plot->add_option("--y", y_col, "y column name")->required();
    plot->add_option("--out", out_svg, "output SVG path")->required();
    plot->add_flag("--logx", logx, "log-scale the x axis");

    CLI11_PARSE(app, argc, argv);
    if (seed_opt->count() > 0) seed_flag = seed_value;

    std::uint64_t base_seed = env_seed().value_or(1);
    try {
        if (run->parsed()) return cmd_run(config_path, out_dir, seed_flag);
        if (table->parsed()) return cmd_table(which, out_dir, base_seed);
        if (verify->parsed()) return cmd_verify(out_dir, base_seed);
        if (plot->parsed()) return cmd_plot(in_csv, x_col, y_col, out_svg, logx);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitAssert;
    }
    return kExitUsage;
}
