#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mixfront/classify.hpp"
#include "mixfront/solver.hpp"

namespace mixfront {

struct Numerics {
    std::size_t N = 256;  // reference grid intervals
    std::size_t M = 400;  // eigen grid nodes
    double horizon = 200.0;
    std::size_t record_stride = 50;
    double safety = 0.5;
    double max_dt = 0.0;  // 0: period / 20
    double bisection_tol = 1e-4;
};

struct ClassifierConfig {
    std::optional<double> spread_length;  // default max(40 h0, 4 h*)
    double eps_field = 1e-6;
    double eps_speed = 1e-8;
    std::optional<double> settle_window;  // default one period
};

struct SweepConfig {
    std::vector<double> factors;  // default 9 log-spaced over [0.01, 100]
};

struct EigenCurveConfig {
    std::vector<double> lengths;  // default 40 log-spaced over [0.05, 100]
};

struct VerifyConfig {
    std::size_t ordering_pairs = 50;
    double ordering_horizon = 10.0;
    std::size_t max_principle_trials = 50;
};

struct OutputConfig {
    std::string dir = "out";
    bool field_dumps = true;
    bool plots = true;
};

/// Everything one CLI invocation needs.
struct RunConfig {
    ProblemSpec spec;
    Numerics numerics;
    ClassifierConfig classifier;
    SweepConfig sweep;
    EigenCurveConfig eigen;
    VerifyConfig verify;
    OutputConfig output;
    std::uint64_t seed = 1;

    RunOptions run_options() const;
    ClassifyOptions classify_options(const Thresholds& thresholds) const;
};

/// Parses and validates; throws ConfigError with a dotted field path.
/// Relative kernel CSV paths resolve against `base_dir`.
RunConfig parse_config(const nlohmann::json& j, const std::string& base_dir = "");
RunConfig load_config(const std::string& path);
nlohmann::json to_json(const RunConfig& config);

nlohmann::json to_json(const Kernel& kernel);
nlohmann::json to_json(const PeriodicCoefficient& coefficient);
nlohmann::json to_json(const InitialProfile& profile);
Kernel kernel_from_json(const nlohmann::json& j, const std::string& path = "kernel",
                        const std::string& base_dir = "");
PeriodicCoefficient coefficient_from_json(const nlohmann::json& j, double period,
                                          const std::string& path);
InitialProfile profile_from_json(const nlohmann::json& j, const std::string& path);

}  // namespace mixfront
