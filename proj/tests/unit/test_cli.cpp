#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mixfront/commands.hpp"
#include "mixfront/config.hpp"
#include "mixfront/errors.hpp"
#include "mixfront/io.hpp"

using namespace mixfront;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json base() {
    return json::parse(R"({
      "model": {"d1": 1, "d2": 1, "tau": 0.5, "mu": 1, "rho1": 1, "rho2": 1, "h0": 1,
                "coefficients": {"period": 1,
                                 "a": {"kind": "sinusoidal", "mean": 1, "amp": 0.3, "phase": 0},
                                 "b": 1, "c": {"kind": "table", "times": [0, 0.5], "values": [1, 2]},
                                 "d": {"kind": "constant", "value": 0.5}},
                "kernel": {"kind": "plateau", "flat_radius": 0.5, "taper": 0.25},
                "u0": {"kind": "parabola", "amplitude": 0.5}},
      "numerics": {"N": 32, "M": 60, "horizon": 0.5},
      "seed": 5
    })");
}

std::string write_config(const json& j, const std::string& name) {
    const auto dir = fs::temp_directory_path() / "mixfront_cli_test";
    fs::create_directories(dir);
    const auto p = dir / name;
    std::ofstream(p) << j.dump(2);
    return p.string();
}

std::string field_of(const json& j) {
    try {
        parse_config(j);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "";
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config round trip") {
    const auto cfg = parse_config(base());
    const json once = to_json(cfg);
    const json twice = to_json(parse_config(once));
    CHECK(once == twice);
    CHECK(cfg.seed == 5);
    CHECK(cfg.spec.coefficients.a(0.25) == doctest::Approx(1.3));
    CHECK(cfg.numerics.N == 32);
    CHECK(cfg.sweep.factors.size() == 9);
}

TEST_CASE("field-level errors") {
    auto j = base();
    j["model"]["tau"] = 0;
    CHECK(field_of(j) == "model.tau");
    j = base();
    j["model"]["extra"] = 1;
    CHECK(field_of(j) == "model.extra");
    j = base();
    j["model"].erase("d1");
    CHECK(field_of(j) == "model.d1");
    j = base();
    j["model"]["coefficients"]["a"]["amp"] = 2.0;
    CHECK(field_of(j) == "model.coefficients.a.amp");
    j = base();
    j["model"]["kernel"] = {{"kind", "tent"}, {"radius", -1}};
    CHECK(field_of(j) == "model.kernel.radius");
    j = base();
    j["sweep"] = {{"factors", {1.0, 0.5}}};
    CHECK(field_of(j) == "sweep.factors");
    j = base();
    j["sweep"] = {{"factors", {{"lo", 0.1}, {"hi", 10}, {"count", 3}}}};
    CHECK(parse_config(j).sweep.factors.size() == 3);
}

TEST_CASE("exit codes") {
    std::ostringstream log, err;
    auto j = base();
    j["model"]["tau"] = 0;
    CHECK(run_command("simulate", write_config(j, "bad.json"), {}, false, log, err) == exit_config);
    CHECK(err.str().find("tau") != std::string::npos);
    CHECK(run_command("simulate", "/nonexistent/cfg.json", {}, false, log, err) == exit_config);

    const auto out = (fs::temp_directory_path() / "mixfront_cli_test" / "out0").string();
    fs::remove_all(out);
    Overrides o;
    o.out = out;
    o.horizon = 0.0;
    CHECK(run_command("simulate", write_config(base(), "ok.json"), o, false, log, err) == exit_ok);
    for (const char* f : {"trajectory.csv", "fields.jsonl", "outcome.json", "fronts.svg", "fields.svg"})
        CHECK(fs::exists(fs::path(out) / f));
    std::ifstream csv(fs::path(out) / "trajectory.csv");
    std::string header, row, extra;
    std::getline(csv, header);
    std::getline(csv, row);
    CHECK(header == kTrajectoryHeader);
    CHECK_FALSE(row.empty());
    CHECK_FALSE(std::getline(csv, extra));

    o.horizon = -1.0;
    CHECK(run_command("simulate", write_config(base(), "ok.json"), o, false, log, err) == exit_config);
}

TEST_CASE("predict and eigen outputs") {
    std::ostringstream log, err;
    auto j = base();
    j["eigen"] = {{"lengths", {0.5, 1.0, 2.0}}};
    const auto out = (fs::temp_directory_path() / "mixfront_cli_test" / "out1").string();
    Overrides o;
    o.out = out;
    const auto path = write_config(j, "eig.json");
    CHECK(run_command("eigen", path, o, false, log, err) == exit_ok);
    CHECK(run_command("predict", path, o, false, log, err) == exit_ok);
    std::ifstream in(fs::path(out) / "thresholds.json");
    const json th = json::parse(in);
    for (const char* k : {"h_star", "l_star", "a_T", "c_T", "d1", "d2", "tau"}) CHECK(th.contains(k));
    CHECK(th["c_T"].get<double>() == doctest::Approx(1.5));
    std::ifstream pin(fs::path(out) / "prediction.json");
    const json pred = json::parse(pin);
    CHECK(pred["criteria"].size() == 4);
}

TEST_CASE("svg rendering") {
    const auto svg = render_svg({"t", "x", "y", true, false},
                                {{"a", {0, 1, 2}, {1, 10, 100}}, {"b", {0, 1}, {0.0, -1.0}}});
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(render_svg({"t", "x", "y", true, false}, {{"a", {0, 1, 2}, {1, 10, 100}}}) ==
          render_svg({"t", "x", "y", true, false}, {{"a", {0, 1, 2}, {1, 10, 100}}}));
}

}
