#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "mixfront/classify.hpp"
#include "mixfront/eigen.hpp"
#include "mixfront/harness.hpp"
#include "mixfront/solver.hpp"

namespace mixfront {

/// Header: t,g,h,gprime,hprime,max_u,max_v,vx_left,vx_right
inline constexpr const char* kTrajectoryHeader = "t,g,h,gprime,hprime,max_u,max_v,vx_left,vx_right";
inline constexpr const char* kSweepHeader = "scale,verdict,length,field,speed,final_time,error";
inline constexpr const char* kEigenHeader = "length,lambda_nonlocal,lambda_mixed";

void write_trajectory_csv(const std::string& path, const Series& series);
/// One JSON object per snapshot: t, g, h, gprime, hprime, x, u, v.
void write_field_dumps(const std::string& path, const Trajectory& trajectory);
void write_sweep_csv(const std::string& path, const SweepResult& sweep);

struct EigenCurve {
    std::vector<double> length, nonlocal, mixed;
};
void write_eigen_csv(const std::string& path, const EigenCurve& curve);

nlohmann::json to_json(const Outcome& outcome);
nlohmann::json to_json(const Bounds& bounds);
nlohmann::json to_json(const CriteriaPrediction& prediction);
/// {h_star, l_star, a_T, c_T, d1, d2, tau}
nlohmann::json thresholds_json(const Thresholds& thresholds, const ProblemSpec& spec);
nlohmann::json to_json(const Check& check);
nlohmann::json to_json(const VerificationReport& report);
nlohmann::json to_json(const Supersolution& sup);
nlohmann::json to_json(const SweepResult& sweep);

void write_json(const std::string& path, const nlohmann::json& j);

struct PlotLine {
    std::string label;
    std::vector<double> x, y;
};

struct PlotSpec {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    bool log_y = false;
    bool log_x = false;
};

/// Polyline chart as a standalone SVG document.
std::string render_svg(const PlotSpec& spec, const std::vector<PlotLine>& lines);
void write_text(const std::string& path, const std::string& text);

}  // namespace mixfront
