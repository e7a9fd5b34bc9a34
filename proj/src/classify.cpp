#include "mixfront/classify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "mixfront/errors.hpp"

namespace mixfront {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::spreading:
            return "Spreading";
        case Verdict::vanishing:
            return "Vanishing";
        case Verdict::undetermined:
            return "Undetermined";
    }
    return "Undetermined";
}

double default_spread_length(const ProblemSpec& spec, const Thresholds& thresholds) {
    return std::max(40.0 * spec.h0, 4.0 * thresholds.h_star);
}

Outcome classify(const Trajectory& trajectory, const ClassifyOptions& options) {
    const Series& s = trajectory.series;
    if (s.size() == 0) throw ConfigError("trajectory", "must not be empty");
    if (!(options.spread_length > 0.0)) throw ConfigError("spread_length", "must be positive");
    const std::size_t last = s.size() - 1;
    Outcome out;
    out.length = s.h[last] - s.g[last];
    out.field = s.max_u[last] + s.max_v[last];
    out.speed = std::abs(s.hprime[last]) + std::abs(s.gprime[last]);
    out.final_time = s.t[last];
    out.horizon_reached = trajectory.stop_reason == "horizon";

    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.h[i] - s.g[i] >= options.spread_length) {
            out.verdict = Verdict::spreading;
            return out;
        }
    }
    const double t_end = s.t[last];
    if (t_end < options.settle_window) return out;
    bool quiet = true;
    for (std::size_t i = s.size(); i-- > 0 && s.t[i] >= t_end - options.settle_window;) {
        if (!(s.max_u[i] + s.max_v[i] < options.eps_field) ||
            !(s.hprime[i] - s.gprime[i] < options.eps_speed)) {
            quiet = false;
            break;
        }
    }
    if (quiet) out.verdict = Verdict::vanishing;
    return out;
}

RunOptions with_early_stop(RunOptions run, const ClassifyOptions& options) {
    run.stop_length = options.spread_length;
    run.stop_field = options.eps_field;
    run.stop_speed = options.eps_speed;
    run.vanish_window = options.settle_window;
    return run;
}

std::optional<Verdict> CriteriaPrediction::verdict() const {
    for (const auto& r : records)
        if (r.holds && r.verdict) return r.verdict;
    return std::nullopt;
}

bool CriteriaPrediction::bistable() const {
    for (const auto& r : records)
        if (r.id == "ii" && r.holds) return true;
    return false;
}

bool in_proven_vanishing_regime(const ProblemSpec& spec) {
    return spec.tau == 1.0 || spec.kernel.flat_radius() > 2.0 * spec.h0;
}

CriteriaPrediction predict(const ProblemSpec& spec, const Thresholds& th) {
    CriteriaPrediction p;
    const bool strong = th.a_T >= spec.d1;
    {
        CriterionRecord r{"i.1", "a_T >= d1", strong, {}, ""};
        if (r.holds) r.verdict = Verdict::spreading;
        p.records.push_back(r);
    }
    {
        CriterionRecord r{"i.2", "h0 >= h*/2", spec.h0 >= 0.5 * th.h_star, {}, ""};
        if (r.holds) r.verdict = Verdict::spreading;
        p.records.push_back(r);
    }
    {
        const bool holds = !strong && th.l_star && spec.h0 >= 0.5 * *th.l_star;
        CriterionRecord r{"i.3", "a_T < d1 and h0 >= l*/2", holds, {}, ""};
        if (r.holds) r.verdict = Verdict::spreading;
        p.records.push_back(r);
    }
    {
        const bool small = !strong && th.l_star &&
                           spec.h0 < 0.5 * std::min(th.h_star, *th.l_star);
        const bool regime = in_proven_vanishing_regime(spec);
        CriterionRecord r{"ii",
                          "a_T < d1 and h0 < min(h*, l*)/2 and (tau = 1 or plateau kernel flat "
                          "beyond 2 h0)",
                          small && regime, {}, ""};
        if (r.holds)
            r.note = "small mu + rho1 + rho2 vanishes, large spreads";
        else if (small)
            r.note = "outside proven regime";
        p.records.push_back(r);
    }
    return p;
}

Outcome confirm_spreading(const ProblemSpec& spec, RunOptions run, const ClassifyOptions& options) {
    Outcome out = classify(mixfront::run(spec, with_early_stop(run, options)), options);
    if (out.verdict == Verdict::spreading) return out;
    run.horizon *= 2.0;
    return classify(mixfront::run(spec, with_early_stop(run, options)), options);
}

bool SweepResult::bracket_nonempty() const {
    return last_vanishing && first_spreading && *last_vanishing < *first_spreading;
}

SweepResult sweep_response(const ProblemSpec& spec, const std::vector<double>& factors,
                           const RunOptions& run, const ClassifyOptions& options,
                           std::size_t jobs) {
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (!(factors[i] > 0.0)) throw ConfigError("scale", "factors must be positive");
        if (i > 0 && !(factors[i] > factors[i - 1]))
            throw ConfigError("scale", "factors must be strictly increasing");
    }
    SweepResult res;
    res.proven_regime = in_proven_vanishing_regime(spec);
    res.rows.resize(factors.size());
    const RunOptions opts = with_early_stop(run, options);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < factors.size(); i = next++) {
            SweepRow& row = res.rows[i];
            row.scale = factors[i];
            try {
                row.outcome = classify(mixfront::run(spec.scaled_responses(factors[i]), opts), options);
            } catch (const std::exception& e) {
                row.error = e.what();
            }
        }
    };
    const std::size_t n = std::max<std::size_t>(1, std::min(jobs, factors.size()));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    bool seen_spread = false;
    std::optional<Verdict> prev;
    for (const auto& row : res.rows) {
        const Verdict v = row.outcome.verdict;
        if (v == Verdict::vanishing) {
            res.last_vanishing = row.scale;
            if (seen_spread) res.monotone = false;
        } else if (v == Verdict::spreading) {
            seen_spread = true;
            if (!res.first_spreading) res.first_spreading = row.scale;
        }
        if (v != Verdict::undetermined) {
            if (prev && *prev != v) ++res.transitions;
            prev = v;
        }
    }
    return res;
}

std::vector<double> log_factors(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi > lo)) throw ConfigError("scale", "need 0 < lo < hi");
    if (n < 2) throw ConfigError("scale", "need at least two factors");
    std::vector<double> f(n);
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i)
        f[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    f.front() = lo;
    f.back() = hi;
    return f;
}

}  // namespace mixfront
