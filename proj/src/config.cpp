#include "mixfront/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include "mixfront/errors.hpp"

namespace mixfront {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Object reader that tracks the dotted path and rejects unknown keys.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_, "expected an object");
    }

    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

    const json& raw(const std::string& key) {
        seen_.insert(key);
        if (!j_.contains(key)) throw ConfigError(at(key), "missing");
        return j_.at(key);
    }

    double number(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number()) throw ConfigError(at(key), "expected a number");
        return v.get<double>();
    }
    double number(const std::string& key, double fallback) {
        seen_.insert(key);
        return has(key) ? number(key) : fallback;
    }
    std::optional<double> optional_number(const std::string& key) {
        seen_.insert(key);
        if (!has(key)) return std::nullopt;
        return number(key);
    }
    std::size_t count(const std::string& key, std::size_t fallback) {
        seen_.insert(key);
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_number_integer() || v.get<long long>() < 0)
            throw ConfigError(at(key), "expected a nonnegative integer");
        return v.get<std::size_t>();
    }
    bool flag(const std::string& key, bool fallback) {
        seen_.insert(key);
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_boolean()) throw ConfigError(at(key), "expected true or false");
        return v.get<bool>();
    }
    std::string text(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_string()) throw ConfigError(at(key), "expected a string");
        return v.get<std::string>();
    }
    std::string text(const std::string& key, const std::string& fallback) {
        seen_.insert(key);
        return has(key) ? text(key) : fallback;
    }
    std::vector<double> numbers(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_array()) throw ConfigError(at(key), "expected an array of numbers");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) throw ConfigError(at(key), "expected an array of numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }
    void finish() const {
        for (const auto& [k, v] : j_.items())
            if (!seen_.count(k)) throw ConfigError(at(k), "unknown key");
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

// Re-throws field errors from library constructors under `path`.
template <class F>
auto scoped(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const ConfigError& e) {
        throw ConfigError(path + "." + e.field(), std::string(e.what()).substr(e.field().size() + 2));
    }
}

}  // namespace

json to_json(const Kernel& kernel) {
    return std::visit(
        overloaded{
            [](const Kernel::Tent& k) { return json{{"kind", "tent"}, {"radius", k.radius}}; },
            [](const Kernel::TruncatedGaussian& k) {
                return json{{"kind", "truncated_gaussian"}, {"sigma", k.sigma}, {"cutoff", k.cutoff}};
            },
            [](const Kernel::Plateau& k) {
                return json{{"kind", "plateau"}, {"flat_radius", k.flat_radius}, {"taper", k.taper}};
            },
            [](const Kernel::Sampled& k) {
                return json{{"kind", "table"}, {"x", k.x}, {"density", k.density},
                            {"symmetrize", k.symmetrized}};
            },
        },
        kernel.shape());
}

Kernel kernel_from_json(const json& j, const std::string& path, const std::string& base_dir) {
    Reader r(j, path);
    const std::string kind = r.text("kind");
    Kernel k = scoped(path, [&]() -> Kernel {
        if (kind == "tent") return Kernel::tent(r.number("radius"));
        if (kind == "truncated_gaussian")
            return Kernel::truncated_gaussian(r.number("sigma"), r.number("cutoff"));
        if (kind == "plateau") return Kernel::plateau(r.number("flat_radius"), r.number("taper"));
        if (kind == "table")
            return Kernel::sampled(r.numbers("x"), r.numbers("density"), r.flag("symmetrize", true));
        if (kind == "csv") {
            std::filesystem::path p = r.text("path");
            if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
            return Kernel::from_csv(p.string(), r.flag("symmetrize", true));
        }
        throw ConfigError("kind", "unknown kernel kind '" + kind + "'");
    });
    r.finish();
    return k;
}

json to_json(const PeriodicCoefficient& c) {
    return std::visit(
        overloaded{
            [](const PeriodicCoefficient::Constant& f) {
                return json{{"kind", "constant"}, {"value", f.value}};
            },
            [](const PeriodicCoefficient::Sinusoidal& f) {
                return json{{"kind", "sinusoidal"}, {"mean", f.mean}, {"amp", f.amplitude},
                            {"phase", f.phase}};
            },
            [](const PeriodicCoefficient::Table& f) {
                return json{{"kind", "table"}, {"times", f.times}, {"values", f.values}};
            },
        },
        c.form());
}

PeriodicCoefficient coefficient_from_json(const json& j, double period, const std::string& path) {
    if (j.is_number())
        return scoped(path, [&] { return PeriodicCoefficient::constant(j.get<double>(), period); });
    Reader r(j, path);
    const std::string kind = r.text("kind");
    if (r.has("period") && r.number("period") != period)
        throw ConfigError(r.at("period"), "all four coefficients must share one period");
    auto c = scoped(path, [&]() -> PeriodicCoefficient {
        if (kind == "constant") return PeriodicCoefficient::constant(r.number("value"), period);
        if (kind == "sinusoidal")
            return PeriodicCoefficient::sinusoidal(r.number("mean"), r.number("amp"),
                                                   r.number("phase", 0.0), period);
        if (kind == "table")
            return PeriodicCoefficient::table(r.numbers("times"), r.numbers("values"), period);
        throw ConfigError("kind", "unknown coefficient kind '" + kind + "'");
    });
    r.finish();
    return c;
}

json to_json(const InitialProfile& p) {
    switch (p.kind()) {
        case InitialProfile::Kind::cosine:
            return {{"kind", "cosine"}, {"amplitude", p.amplitude()}};
        case InitialProfile::Kind::parabola:
            return {{"kind", "parabola"}, {"amplitude", p.amplitude()}};
        case InitialProfile::Kind::table:
            return {{"kind", "table"}, {"s", p.nodes()}, {"values", p.values()}};
    }
    return {};
}

InitialProfile profile_from_json(const json& j, const std::string& path) {
    Reader r(j, path);
    const std::string kind = r.text("kind");
    auto p = scoped(path, [&]() -> InitialProfile {
        if (kind == "cosine") return InitialProfile::cosine(r.number("amplitude", 1.0));
        if (kind == "parabola") return InitialProfile::parabola(r.number("amplitude", 1.0));
        if (kind == "table") return InitialProfile::table(r.numbers("s"), r.numbers("values"));
        throw ConfigError("kind", "unknown profile kind '" + kind + "'");
    });
    r.finish();
    return p;
}

RunConfig parse_config(const json& j, const std::string& base_dir) {
    RunConfig cfg;
    Reader top(j, "");
    {
        Reader m(top.raw("model"), "model");
        ProblemSpec& s = cfg.spec;
        s.d1 = m.number("d1");
        s.d2 = m.number("d2");
        s.tau = m.number("tau");
        s.mu = m.number("mu");
        s.rho1 = m.number("rho1");
        s.rho2 = m.number("rho2");
        s.h0 = m.number("h0");
        if (m.has("u0")) s.u0 = profile_from_json(m.raw("u0"), "model.u0");
        if (m.has("v0")) s.v0 = profile_from_json(m.raw("v0"), "model.v0");
        {
            Reader c(m.raw("coefficients"), "model.coefficients");
            const double period = c.number("period", 1.0);
            if (!(period > 0.0)) throw ConfigError(c.at("period"), "must be positive");
            s.coefficients = CoefficientSet(coefficient_from_json(c.raw("a"), period, c.at("a")),
                                            coefficient_from_json(c.raw("b"), period, c.at("b")),
                                            coefficient_from_json(c.raw("c"), period, c.at("c")),
                                            coefficient_from_json(c.raw("d"), period, c.at("d")));
            c.finish();
        }
        s.kernel = kernel_from_json(m.raw("kernel"), "model.kernel", base_dir);
        if (m.has("growth")) {
            Reader g(m.raw("growth"), "model.growth");
            const std::string kind = g.text("kind");
            if (kind != "lotka_volterra")
                throw ConfigError(g.at("kind"), "only lotka_volterra is configurable from files");
            g.finish();
        }
        m.finish();
        scoped("model", [&] {
            s.validate();
            return 0;
        });
    }
    if (top.has("numerics")) {
        Reader n(top.raw("numerics"), "numerics");
        Numerics& x = cfg.numerics;
        x.N = n.count("N", x.N);
        x.M = n.count("M", x.M);
        x.horizon = n.number("horizon", x.horizon);
        x.record_stride = n.count("record_stride", x.record_stride);
        x.safety = n.number("safety", x.safety);
        x.max_dt = n.number("max_dt", x.max_dt);
        x.bisection_tol = n.number("bisection_tol", x.bisection_tol);
        n.finish();
        if (x.N < 4) throw ConfigError("numerics.N", "need at least 4 intervals");
        if (x.M < 3) throw ConfigError("numerics.M", "need at least 3 nodes");
        if (!(x.horizon >= 0.0)) throw ConfigError("numerics.horizon", "must be nonnegative");
        if (x.record_stride == 0) throw ConfigError("numerics.record_stride", "must be positive");
        if (!(x.safety > 0.0 && x.safety < 1.0)) throw ConfigError("numerics.safety", "must lie in (0, 1)");
        if (!(x.max_dt >= 0.0)) throw ConfigError("numerics.max_dt", "must be nonnegative");
        if (!(x.bisection_tol > 0.0)) throw ConfigError("numerics.bisection_tol", "must be positive");
    }
    if (top.has("classifier")) {
        Reader c(top.raw("classifier"), "classifier");
        ClassifierConfig& x = cfg.classifier;
        x.spread_length = c.optional_number("spread_length");
        x.eps_field = c.number("eps_field", x.eps_field);
        x.eps_speed = c.number("eps_speed", x.eps_speed);
        x.settle_window = c.optional_number("settle_window");
        c.finish();
        if (x.spread_length && !(*x.spread_length > 0.0))
            throw ConfigError("classifier.spread_length", "must be positive");
        if (!(x.eps_field > 0.0)) throw ConfigError("classifier.eps_field", "must be positive");
        if (!(x.eps_speed > 0.0)) throw ConfigError("classifier.eps_speed", "must be positive");
        if (x.settle_window && !(*x.settle_window >= 0.0))
            throw ConfigError("classifier.settle_window", "must be nonnegative");
    }
    cfg.sweep.factors = log_factors(0.01, 100.0, 9);
    if (top.has("sweep")) {
        Reader s(top.raw("sweep"), "sweep");
        if (s.has("factors")) {
            const json& f = s.raw("factors");
            if (f.is_array()) {
                cfg.sweep.factors = s.numbers("factors");
            } else {
                Reader r(f, "sweep.factors");
                const double lo = r.number("lo"), hi = r.number("hi");
                const std::size_t n = r.count("count", 9);
                r.finish();
                cfg.sweep.factors = scoped("sweep.factors", [&] { return log_factors(lo, hi, n); });
            }
        }
        s.finish();
        for (std::size_t i = 0; i < cfg.sweep.factors.size(); ++i) {
            if (!(cfg.sweep.factors[i] > 0.0))
                throw ConfigError("sweep.factors", "must be positive");
            if (i > 0 && !(cfg.sweep.factors[i] > cfg.sweep.factors[i - 1]))
                throw ConfigError("sweep.factors", "must be strictly increasing");
        }
    }
    cfg.eigen.lengths = log_factors(0.05, 100.0, 40);
    if (top.has("eigen")) {
        Reader e(top.raw("eigen"), "eigen");
        if (e.has("lengths")) cfg.eigen.lengths = e.numbers("lengths");
        e.finish();
        for (double l : cfg.eigen.lengths)
            if (!(l > 0.0)) throw ConfigError("eigen.lengths", "must be positive");
    }
    if (top.has("verify")) {
        Reader v(top.raw("verify"), "verify");
        cfg.verify.ordering_pairs = v.count("ordering_pairs", cfg.verify.ordering_pairs);
        cfg.verify.ordering_horizon = v.number("ordering_horizon", cfg.verify.ordering_horizon);
        cfg.verify.max_principle_trials =
            v.count("max_principle_trials", cfg.verify.max_principle_trials);
        v.finish();
        if (!(cfg.verify.ordering_horizon >= 0.0))
            throw ConfigError("verify.ordering_horizon", "must be nonnegative");
    }
    if (top.has("output")) {
        Reader o(top.raw("output"), "output");
        cfg.output.dir = o.text("dir", cfg.output.dir);
        cfg.output.field_dumps = o.flag("field_dumps", cfg.output.field_dumps);
        cfg.output.plots = o.flag("plots", cfg.output.plots);
        o.finish();
    }
    if (top.has("seed")) {
        const json& s = top.raw("seed");
        if (!s.is_number_unsigned()) throw ConfigError("seed", "expected a nonnegative integer");
        cfg.seed = s.get<std::uint64_t>();
    }
    top.finish();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open " + path);
    json j;
    try {
        j = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("malformed JSON: ") + e.what());
    }
    return parse_config(j, std::filesystem::path(path).parent_path().string());
}

json to_json(const RunConfig& c) {
    const ProblemSpec& s = c.spec;
    json model = {
        {"d1", s.d1},
        {"d2", s.d2},
        {"tau", s.tau},
        {"mu", s.mu},
        {"rho1", s.rho1},
        {"rho2", s.rho2},
        {"h0", s.h0},
        {"u0", to_json(s.u0)},
        {"v0", to_json(s.v0)},
        {"coefficients",
         {{"period", s.coefficients.period()},
          {"a", to_json(s.coefficients.a)},
          {"b", to_json(s.coefficients.b)},
          {"c", to_json(s.coefficients.c)},
          {"d", to_json(s.coefficients.d)}}},
        {"kernel", to_json(s.kernel)},
        {"growth", {{"kind", "lotka_volterra"}}},
    };
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    return {
        {"model", model},
        {"numerics",
         {{"N", c.numerics.N},
          {"M", c.numerics.M},
          {"horizon", c.numerics.horizon},
          {"record_stride", c.numerics.record_stride},
          {"safety", c.numerics.safety},
          {"max_dt", c.numerics.max_dt},
          {"bisection_tol", c.numerics.bisection_tol}}},
        {"classifier",
         {{"spread_length", opt(c.classifier.spread_length)},
          {"eps_field", c.classifier.eps_field},
          {"eps_speed", c.classifier.eps_speed},
          {"settle_window", opt(c.classifier.settle_window)}}},
        {"sweep", {{"factors", c.sweep.factors}}},
        {"eigen", {{"lengths", c.eigen.lengths}}},
        {"verify",
         {{"ordering_pairs", c.verify.ordering_pairs},
          {"ordering_horizon", c.verify.ordering_horizon},
          {"max_principle_trials", c.verify.max_principle_trials}}},
        {"output",
         {{"dir", c.output.dir}, {"field_dumps", c.output.field_dumps}, {"plots", c.output.plots}}},
        {"seed", c.seed},
    };
}

RunOptions RunConfig::run_options() const {
    RunOptions o;
    o.horizon = numerics.horizon;
    o.intervals = numerics.N;
    o.record_stride = numerics.record_stride;
    o.step.safety = numerics.safety;
    o.step.max_dt = numerics.max_dt;
    return o;
}

ClassifyOptions RunConfig::classify_options(const Thresholds& thresholds) const {
    ClassifyOptions o;
    o.spread_length = classifier.spread_length.value_or(default_spread_length(spec, thresholds));
    o.eps_field = classifier.eps_field;
    o.eps_speed = classifier.eps_speed;
    o.settle_window = classifier.settle_window.value_or(spec.coefficients.period());
    return o;
}

}  // namespace mixfront
