#include "mixfront/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mixfront/errors.hpp"

namespace mixfront {

namespace {

constexpr int kPositivitySamples = 4096;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double wrap(double t, double period) {
    double r = std::fmod(t, period);
    if (r < 0.0) r += period;
    return r;
}

// Integral of the table interpolant over [0, r], r in [0, period). The
// interpolant is linear between nodes, so the trapezoid rule on the nodes
// (plus the endpoints of [0, r]) is exact.
double table_integral(const PeriodicCoefficient& coeff, const PeriodicCoefficient::Table& tab,
                      double r) {
    std::vector<double> pts{0.0};
    for (double t : tab.times)
        if (t > 0.0 && t < r) pts.push_back(t);
    pts.push_back(r);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        sum += 0.5 * (pts[i + 1] - pts[i]) * (coeff.evaluate(pts[i]) + coeff.evaluate(pts[i + 1]));
    return sum;
}

}  // namespace

PeriodicCoefficient::PeriodicCoefficient(Form form, double period)
    : form_(std::move(form)), period_(period) {
    validate();
}

PeriodicCoefficient PeriodicCoefficient::constant(double value, double period) {
    return PeriodicCoefficient(Constant{value}, period);
}

PeriodicCoefficient PeriodicCoefficient::sinusoidal(double mean, double amplitude, double phase,
                                                    double period) {
    return PeriodicCoefficient(Sinusoidal{mean, amplitude, phase}, period);
}

PeriodicCoefficient PeriodicCoefficient::table(std::vector<double> times,
                                               std::vector<double> values, double period) {
    return PeriodicCoefficient(Table{std::move(times), std::move(values)}, period);
}

void PeriodicCoefficient::validate() const {
    if (!(period_ > 0.0) || !std::isfinite(period_))
        throw ConfigError("period", "must be positive and finite");
    std::visit(overloaded{
                   [](const Constant& c) {
                       if (!(c.value > 0.0)) throw ConfigError("value", "must be positive");
                   },
                   [](const Sinusoidal& s) {
                       if (!(s.amplitude >= 0.0))
                           throw ConfigError("amp", "must be nonnegative");
                       if (!(s.amplitude < s.mean))
                           throw ConfigError("amp", "must be smaller than the mean");
                   },
                   [this](const Table& tab) {
                       if (tab.times.empty() || tab.times.size() != tab.values.size())
                           throw ConfigError("values", "table needs matching, nonempty columns");
                       for (std::size_t i = 0; i < tab.times.size(); ++i) {
                           if (tab.times[i] < 0.0 || tab.times[i] >= period_)
                               throw ConfigError("times", "must lie in [0, period)");
                           if (i > 0 && !(tab.times[i] > tab.times[i - 1]))
                               throw ConfigError("times", "must be strictly increasing");
                           if (!(tab.values[i] > 0.0))
                               throw ConfigError("values", "must be positive");
                       }
                   },
               },
               form_);
    for (int i = 0; i < kPositivitySamples; ++i) {
        double t = period_ * i / kPositivitySamples;
        if (!(evaluate(t) > 0.0)) throw ConfigError("coefficient", "not strictly positive");
    }
}

double PeriodicCoefficient::evaluate(double t) const {
    return std::visit(
        overloaded{
            [](const Constant& c) { return c.value; },
            [this, t](const Sinusoidal& s) {
                return s.mean + s.amplitude * std::sin(2.0 * std::numbers::pi * t / period_ +
                                                       s.phase);
            },
            [this, t](const Table& tab) {
                const auto& ts = tab.times;
                const auto& vs = tab.values;
                if (ts.size() == 1) return vs[0];
                double r = wrap(t, period_);
                if (r >= ts.front() && r < ts.back()) {
                    auto it = std::upper_bound(ts.begin(), ts.end(), r);
                    std::size_t j = static_cast<std::size_t>(it - ts.begin());
                    double w = (r - ts[j - 1]) / (ts[j] - ts[j - 1]);
                    return vs[j - 1] + w * (vs[j] - vs[j - 1]);
                }
                const double t0 = ts.back();
                const double t1 = ts.front() + period_;
                double tt = r < ts.front() ? r + period_ : r;
                double w = (tt - t0) / (t1 - t0);
                return vs.back() + w * (vs.front() - vs.back());
            },
        },
        form_);
}

double PeriodicCoefficient::time_average() const {
    return std::visit(overloaded{
                          [](const Constant& c) { return c.value; },
                          [](const Sinusoidal& s) { return s.mean; },
                          [this](const Table& tab) {
                              return table_integral(*this, tab, period_) / period_;
                          },
                      },
                      form_);
}

double PeriodicCoefficient::centered_integral(double t) const {
    return std::visit(
        overloaded{
            [](const Constant&) { return 0.0; },
            [this, t](const Sinusoidal& s) {
                const double omega = 2.0 * std::numbers::pi / period_;
                return s.amplitude / omega * (std::cos(s.phase) - std::cos(omega * t + s.phase));
            },
            [this, t](const Table& tab) {
                const double avg = time_average();
                double r = wrap(t, period_);
                return table_integral(*this, tab, r) - avg * r;
            },
        },
        form_);
}

double PeriodicCoefficient::max_value() const {
    return std::visit(overloaded{
                          [](const Constant& c) { return c.value; },
                          [](const Sinusoidal& s) { return s.mean + s.amplitude; },
                          [](const Table& tab) {
                              return *std::max_element(tab.values.begin(), tab.values.end());
                          },
                      },
                      form_);
}

double PeriodicCoefficient::min_value() const {
    return std::visit(overloaded{
                          [](const Constant& c) { return c.value; },
                          [](const Sinusoidal& s) { return s.mean - s.amplitude; },
                          [](const Table& tab) {
                              return *std::min_element(tab.values.begin(), tab.values.end());
                          },
                      },
                      form_);
}

std::string PeriodicCoefficient::kind() const {
    return std::visit(overloaded{
                          [](const Constant&) { return std::string("constant"); },
                          [](const Sinusoidal&) { return std::string("sinusoidal"); },
                          [](const Table&) { return std::string("table"); },
                      },
                      form_);
}

CoefficientSet::CoefficientSet(PeriodicCoefficient a_, PeriodicCoefficient b_,
                               PeriodicCoefficient c_, PeriodicCoefficient d_)
    : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {
    const double T = a.period();
    for (const auto* p : {&b, &c, &d})
        if (std::abs(p->period() - T) > 1e-12 * T)
            throw ConfigError("period", "all four coefficients must share one period");
}

}  // namespace mixfront
