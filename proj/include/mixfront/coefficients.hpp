#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace mixfront {

/// A positive, T-periodic environment function such as an intrinsic growth
/// rate or a competition coefficient.
///
/// Three forms are supported: a constant, a sinusoid
/// `mean + amplitude * sin(2*pi*t/period + phase)`, and a piecewise-linear
/// table sampled over one period (wrapping from the last sample back to the
/// first). Construction validates positivity, so evaluation never fails.
class PeriodicCoefficient {
public:
    struct Constant {
        double value;
    };
    struct Sinusoidal {
        double mean;
        double amplitude;
        double phase;
    };
    struct Table {
        std::vector<double> times;   // strictly increasing, in [0, period)
        std::vector<double> values;
    };
    using Form = std::variant<Constant, Sinusoidal, Table>;

    static PeriodicCoefficient constant(double value, double period = 1.0);
    static PeriodicCoefficient sinusoidal(double mean, double amplitude, double phase,
                                          double period = 1.0);
    static PeriodicCoefficient table(std::vector<double> times, std::vector<double> values,
                                     double period);

    double operator()(double t) const { return evaluate(t); }
    double evaluate(double t) const;

    /// (1/T) * integral over one period.
    double time_average() const;

    /// Exact integral of (coeff(s) - average) over [0, t]; periodic in t.
    double centered_integral(double t) const;

    double max_value() const;
    double min_value() const;

    double period() const { return period_; }
    const Form& form() const { return form_; }
    std::string kind() const;

private:
    PeriodicCoefficient(Form form, double period);
    void validate() const;

    Form form_;
    double period_;
};

/// The four coefficients a, b, c, d of the competition system.
struct CoefficientSet {
    PeriodicCoefficient a;
    PeriodicCoefficient b;
    PeriodicCoefficient c;
    PeriodicCoefficient d;

    CoefficientSet(PeriodicCoefficient a_, PeriodicCoefficient b_, PeriodicCoefficient c_,
                   PeriodicCoefficient d_);

    double period() const { return a.period(); }
};

}  // namespace mixfront
