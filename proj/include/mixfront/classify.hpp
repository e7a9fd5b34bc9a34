#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mixfront/eigen.hpp"
#include "mixfront/solver.hpp"

namespace mixfront {

enum class Verdict { spreading, vanishing, undetermined };

std::string to_string(Verdict v);

struct Outcome {
    Verdict verdict = Verdict::undetermined;
    double length = 0.0;  // terminal h - g
    double field = 0.0;   // terminal max u + max v
    double speed = 0.0;   // terminal |h'| + |g'|
    double final_time = 0.0;
    bool horizon_reached = false;
};

struct ClassifyOptions {
    double spread_length = 0.0;
    double eps_field = 1e-6;
    double eps_speed = 1e-8;
    double settle_window = 1.0;
};

/// max(40 h0, 4 h*).
double default_spread_length(const ProblemSpec& spec, const Thresholds& thresholds);

/// Spreading once h - g reaches `spread_length`; Vanishing when fields and
/// h' - g' stay below the thresholds over the final settle window.
Outcome classify(const Trajectory& trajectory, const ClassifyOptions& options);

/// Sets the early-stop fields of `run` to match `classify`.
RunOptions with_early_stop(RunOptions run, const ClassifyOptions& options);

struct CriterionRecord {
    std::string id;
    std::string hypothesis;
    bool holds = false;
    std::optional<Verdict> verdict;  // only when `holds`
    std::string note;
};

struct CriteriaPrediction {
    std::vector<CriterionRecord> records;

    /// Verdict of the first criterion that predicts one.
    std::optional<Verdict> verdict() const;
    /// The small-response-vanishes, large-response-spreads regime applies.
    bool bistable() const;
};

CriteriaPrediction predict(const ProblemSpec& spec, const Thresholds& thresholds);

/// Whether the supersolution argument covers the spec (tau = 1, or a
/// plateau kernel flat beyond 2 h0).
bool in_proven_vanishing_regime(const ProblemSpec& spec);

/// Runs the spec; if the verdict is not Spreading, retries once with the
/// horizon doubled.
Outcome confirm_spreading(const ProblemSpec& spec, RunOptions run, const ClassifyOptions& options);

struct SweepRow {
    double scale = 0.0;
    Outcome outcome;
    std::string error;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::optional<double> last_vanishing;
    std::optional<double> first_spreading;
    bool monotone = true;  // no Vanishing after a Spreading
    std::size_t transitions = 0;  // Vanishing -> Spreading changes, Undetermined skipped
    bool proven_regime = false;

    bool bracket_nonempty() const;
};

/// Runs and classifies the spec with (mu, rho1, rho2) scaled by each factor,
/// using up to `jobs` threads. Rows come back in input order.
SweepResult sweep_response(const ProblemSpec& spec, const std::vector<double>& factors,
                           const RunOptions& run, const ClassifyOptions& options,
                           std::size_t jobs = 1);

/// n factors spaced logarithmically over [lo, hi].
std::vector<double> log_factors(double lo, double hi, std::size_t n);

}  // namespace mixfront
