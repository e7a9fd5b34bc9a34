#include "mixfront/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mixfront/errors.hpp"

namespace mixfront {

using nlohmann::json;

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.precision(17);
    return out;
}

// Shortest text that round-trips the double.
std::string num(double v) {
    char buf[32];
    for (int p = 6; p <= 17; ++p) {
        std::snprintf(buf, sizeof buf, "%.*g", p, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

void write_trajectory_csv(const std::string& path, const Series& s) {
    auto out = open_out(path);
    out << kTrajectoryHeader << '\n';
    for (std::size_t i = 0; i < s.size(); ++i)
        out << num(s.t[i]) << ',' << num(s.g[i]) << ',' << num(s.h[i]) << ',' << num(s.gprime[i])
            << ',' << num(s.hprime[i]) << ',' << num(s.max_u[i]) << ',' << num(s.max_v[i]) << ','
            << num(s.vx_left[i]) << ',' << num(s.vx_right[i]) << '\n';
}

void write_field_dumps(const std::string& path, const Trajectory& tr) {
    auto out = open_out(path);
    for (const auto& st : tr.snapshots) {
        const std::size_t n = st.u.size();
        std::vector<double> x(n);
        for (std::size_t j = 0; j < n; ++j)
            x[j] = physical_x(st.g, st.h, -1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(n - 1));
        json rec = {{"t", st.t},           {"g", st.g}, {"h", st.h}, {"gprime", st.gprime},
                    {"hprime", st.hprime}, {"x", x},    {"u", st.u}, {"v", st.v}};
        out << rec.dump() << '\n';
    }
}

void write_sweep_csv(const std::string& path, const SweepResult& sweep) {
    auto out = open_out(path);
    out << kSweepHeader << '\n';
    for (const auto& r : sweep.rows)
        out << num(r.scale) << ',' << to_string(r.outcome.verdict) << ',' << num(r.outcome.length)
            << ',' << num(r.outcome.field) << ',' << num(r.outcome.speed) << ','
            << num(r.outcome.final_time) << ',' << csv_field(r.error) << '\n';
}

void write_eigen_csv(const std::string& path, const EigenCurve& c) {
    auto out = open_out(path);
    out << kEigenHeader << '\n';
    for (std::size_t i = 0; i < c.length.size(); ++i)
        out << num(c.length[i]) << ',' << num(c.nonlocal[i]) << ',' << num(c.mixed[i]) << '\n';
}

json to_json(const Outcome& o) {
    return {{"verdict", to_string(o.verdict)},
            {"terminal_length", o.length},
            {"terminal_field", o.field},
            {"terminal_speed", o.speed},
            {"final_time", o.final_time},
            {"horizon_reached", o.horizon_reached}};
}

json to_json(const Bounds& b) {
    return {{"K", b.k}, {"K1", b.k1}, {"K2", b.k2}, {"K3", b.k3}, {"L_hat", b.lipschitz}};
}

json to_json(const CriteriaPrediction& p) {
    json recs = json::array();
    for (const auto& r : p.records) {
        recs.push_back({{"criterion", r.id},
                        {"hypothesis", r.hypothesis},
                        {"holds", r.holds},
                        {"prediction", r.verdict ? json(to_string(*r.verdict)) : json("no prediction")},
                        {"note", r.note}});
    }
    const auto v = p.verdict();
    return {{"criteria", recs},
            {"verdict", v ? json(to_string(*v)) : json(nullptr)},
            {"bistable", p.bistable()}};
}

json thresholds_json(const Thresholds& th, const ProblemSpec& spec) {
    return {{"h_star", th.h_star}, {"l_star", opt(th.l_star)}, {"a_T", th.a_T}, {"c_T", th.c_T},
            {"d1", spec.d1},       {"d2", spec.d2},            {"tau", spec.tau}};
}

json to_json(const Check& c) {
    return {{"name", c.name},         {"applicable", c.applicable}, {"passed", c.passed},
            {"measured", c.measured}, {"limit", c.limit},           {"detail", c.detail}};
}

json to_json(const VerificationReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back(to_json(c));
    return {{"passed", r.passed()}, {"checks", checks}};
}

json to_json(const Supersolution& s) {
    return {{"h0", s.h0},
            {"h1", s.h1},
            {"h2", s.h2},
            {"delta", s.delta},
            {"sigma", s.sigma},
            {"k", s.k},
            {"C", s.C},
            {"alpha", s.alpha},
            {"lambda_u", s.lambda_u},
            {"lambda_v", s.lambda_v},
            {"A", s.A},
            {"Lambda0", s.Lambda0},
            {"min_residual", s.min_residual},
            {"min_residual_fine", s.min_residual_fine},
            {"rejections", s.rejections},
            {"t_samples", s.t_samples},
            {"t_span", s.t_span}};
}

json to_json(const SweepResult& s) {
    json rows = json::array();
    for (const auto& r : s.rows) {
        json o = to_json(r.outcome);
        o["scale"] = r.scale;
        if (!r.error.empty()) o["error"] = r.error;
        rows.push_back(o);
    }
    return {{"rows", rows},
            {"bracket", {opt(s.last_vanishing), opt(s.first_spreading)}},
            {"bracket_nonempty", s.bracket_nonempty()},
            {"monotone", s.monotone},
            {"transitions", s.transitions},
            {"regime", s.proven_regime ? "proven" : "outside proven regime"}};
}

void write_json(const std::string& path, const json& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

void write_text(const std::string& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
}

std::string render_svg(const PlotSpec& spec, const std::vector<PlotLine>& lines) {
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
    const double W = 720, H = 440, left = 80, right = 150, top = 40, bottom = 60;
    const double pw = W - left - right, ph = H - top - bottom;
    auto tx = [&](double v) { return spec.log_x ? std::log10(v) : v; };
    auto ty = [&](double v) { return spec.log_y ? std::log10(v) : v; };
    auto ok = [&](double x, double y) {
        return std::isfinite(x) && std::isfinite(y) && (!spec.log_x || x > 0) && (!spec.log_y || y > 0);
    };
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& l : lines)
        for (std::size_t i = 0; i < l.x.size(); ++i)
            if (ok(l.x[i], l.y[i])) {
                x0 = std::min(x0, tx(l.x[i]));
                x1 = std::max(x1, tx(l.x[i]));
                y0 = std::min(y0, ty(l.y[i]));
                y1 = std::max(y1, ty(l.y[i]));
            }
    if (!(x0 <= x1)) x0 = 0, x1 = 1;
    if (!(y0 <= y1)) y0 = 0, y1 = 1;
    if (x1 - x0 < 1e-300) x0 -= 0.5, x1 += 0.5;
    if (y1 - y0 < 1e-12 * std::max(1.0, std::abs(y1))) {
        const double pad = std::max(0.5, 0.1 * std::abs(y1));
        y0 -= pad;
        y1 += pad;
    } else {
        const double pad = 0.05 * (y1 - y0);
        y0 -= pad;
        y1 += pad;
    }
    auto px = [&](double v) { return left + (tx(v) - x0) / (x1 - x0) * pw; };
    auto py = [&](double v) { return top + (1.0 - (ty(v) - y0) / (y1 - y0)) * ph; };
    auto label = [](double v, bool log) {
        return log ? "1e" + num(std::round(v * 100) / 100) : num(std::round(v * 1e4) / 1e4);
    };

    std::ostringstream os;
    os.precision(6);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
       << esc(spec.title) << "</text>\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 5; ++k) {
        const double fx = x0 + (x1 - x0) * k / 5.0, fy = y0 + (y1 - y0) * k / 5.0;
        const double gx = left + pw * k / 5.0, gy = top + ph * (1.0 - k / 5.0);
        os << "<line x1=\"" << gx << "\" y1=\"" << top << "\" x2=\"" << gx << "\" y2=\"" << top + ph
           << "\" stroke=\"#ddd\"/>\n";
        os << "<line x1=\"" << left << "\" y1=\"" << gy << "\" x2=\"" << left + pw << "\" y2=\"" << gy
           << "\" stroke=\"#ddd\"/>\n";
        os << "<text x=\"" << gx << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\">"
           << label(fx, spec.log_x) << "</text>\n";
        os << "<text x=\"" << left - 6 << "\" y=\"" << gy + 4 << "\" text-anchor=\"end\">"
           << label(fy, spec.log_y) << "</text>\n";
    }
    os << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 18 << "\" text-anchor=\"middle\">"
       << esc(spec.xlabel) << "</text>\n";
    os << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
       << top + ph / 2 << ")\">" << esc(spec.ylabel) << "</text>\n";
    for (std::size_t li = 0; li < lines.size(); ++li) {
        const auto& l = lines[li];
        const char* col = colors[li % 6];
        os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < l.x.size(); ++i)
            if (ok(l.x[i], l.y[i])) os << px(l.x[i]) << ',' << py(l.y[i]) << ' ';
        os << "\"/>\n";
        const double ly = top + 14 + 18.0 * static_cast<double>(li);
        os << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 36
           << "\" y2=\"" << ly << "\" stroke=\"" << col << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << left + pw + 42 << "\" y=\"" << ly + 4 << "\">" << esc(l.label)
           << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace mixfront
