#pragma once

#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace mixfront {

/// One checked condition of the kernel admissibility assumption.
struct KernelCheck {
    std::string name;
    bool passed;
    double measured;
};

/// Result of `Kernel::validate`. Failures are reported, never thrown.
struct ValidationReport {
    std::vector<KernelCheck> checks;
    double normalization_defect = 0.0;
    double symmetry_defect = 0.0;
    double sup = 0.0;
    double lipschitz = 0.0;
    double value_at_zero = 0.0;

    bool ok() const;
    /// Name of the first failing check, empty when everything passed.
    std::string first_failure() const;
};

/// A compactly supported dispersal density J on the real line.
///
/// Built-in shapes are exactly symmetric with unit mass. Tables are
/// piecewise linear through (displacement, density) samples; they are
/// rescaled to unit mass and, unless disabled, symmetrized as
/// (J(x) + J(-x)) / 2.
///
/// Tail masses `integral_r^inf J` come from a cumulative table with spacing
/// support / 4096 built from exact per-cell integrals, linearly
/// interpolated between nodes.
class Kernel {
public:
    struct Tent {
        double radius;
    };
    struct TruncatedGaussian {
        double sigma;
        double cutoff;
    };
    struct Plateau {
        double flat_radius;
        double taper;
    };
    struct Sampled {
        std::vector<double> x;
        std::vector<double> density;
        bool symmetrized;
    };
    using Shape = std::variant<Tent, TruncatedGaussian, Plateau, Sampled>;

    static Kernel tent(double radius);
    static Kernel truncated_gaussian(double sigma, double cutoff);
    static Kernel plateau(double flat_radius, double taper);
    static Kernel sampled(std::vector<double> x, std::vector<double> density,
                          bool symmetrize = true);
    /// Two-column CSV (displacement, density); '#' lines and a non-numeric
    /// header row are skipped.
    static Kernel from_csv(const std::string& path, bool symmetrize = true);

    double operator()(double x) const { return evaluate(x); }
    double evaluate(double x) const;

    /// integral_r^inf J(s) ds.
    double tail_mass(double r) const;

    double support() const { return support_; }
    double sup() const;
    double lipschitz() const;
    /// Half-width of the interval around 0 on which J is exactly constant
    /// (nonzero only for the plateau shape).
    double flat_radius() const;
    /// Points where J is not smooth (kinks, support edges), sorted.
    std::vector<double> breakpoints() const;

    ValidationReport validate() const;

    const Shape& shape() const { return shape_; }
    std::string kind() const;

private:
    Kernel(Shape shape, double support, double scale);
    double raw(double x) const;
    double cell_integral(double a, double b) const;
    void build_tail_table();

    Shape shape_;
    double support_;
    double scale_;
    std::shared_ptr<const std::vector<double>> tail_;  // tail_[i] = tail_mass(i * dr)
    double dr_ = 0.0;
};

}  // namespace mixfront
