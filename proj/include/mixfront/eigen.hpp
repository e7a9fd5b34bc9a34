#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mixfront/coefficients.hpp"
#include "mixfront/kernel.hpp"

namespace mixfront {

struct ProblemSpec;

enum class OperatorKind { nonlocal, mixed };

std::string to_string(OperatorKind kind);

/// Principal eigenpair of an averaged elliptic operator on (0, length).
///
/// `x` and `phi` cover the whole grid. The nonlocal operator lives on M
/// nodes of the closed interval; the mixed operator on M interior nodes, and
/// `phi` then includes the two zero end values.
struct EigenReport {
    OperatorKind op = OperatorKind::nonlocal;
    double length = 0.0;
    double lambda1 = 0.0;
    std::vector<double> x;
    std::vector<double> phi;  // max-normalized to 1
    std::size_t iterations = 0;
    double residual = 0.0;  // ||A phi - lambda phi||_inf for the unshifted matrix
};

struct Thresholds {
    double h_star = 0.0;
    std::optional<double> l_star;
    double a_T = 0.0;
    double c_T = 0.0;
};

/// A = d1 (W - I) + a_T I on `nodes` points of the closed interval.
Eigen::MatrixXd nonlocal_operator_matrix(const Kernel& kernel, double d1, double a_T,
                                         double length, std::size_t nodes);
/// B = d2 tau D2 + d2 (1 - tau) (W - I) + c_T I on `nodes` interior points.
Eigen::MatrixXd mixed_operator_matrix(const Kernel& kernel, double d2, double tau, double c_T,
                                      double length, std::size_t nodes);

/// lambda_1 = -(largest eigenvalue of A). Throws ConvergenceError when the
/// iteration stalls or exceeds 1e5 iterations.
EigenReport lambda1_nonlocal(const Kernel& kernel, double d1, const PeriodicCoefficient& a,
                             double length, std::size_t nodes = 400);
EigenReport lambda1_mixed(const Kernel& kernel, double d2, double tau,
                          const PeriodicCoefficient& c, double length, std::size_t nodes = 400);

/// integral of omega'^2 over (0, length) for the piecewise-linear omega
/// through equally spaced samples.
double gradient_energy(std::span<const double> omega, double length);

/// [d2 tau int w'^2 - d2 (1 - tau) int int J w w] / int w^2 + d2 (1 - tau) - c_T.
/// `omega` samples (0, length) uniformly including both ends, which must
/// vanish.
double rayleigh_quotient(std::span<const double> omega, const Kernel& kernel, double d2,
                         double tau, double c_T, double length);

/// Length where lambda1_mixed changes sign.
double find_h_star(const Kernel& kernel, double d2, double tau, const PeriodicCoefficient& c,
                   double tolerance = 1e-4, std::size_t nodes = 400);
/// Length where lambda1_nonlocal changes sign; empty when a_T >= d1.
std::optional<double> find_l_star(const Kernel& kernel, double d1, const PeriodicCoefficient& a,
                                  double tolerance = 1e-4, std::size_t nodes = 400);

Thresholds compute_thresholds(const ProblemSpec& spec, double tolerance = 1e-4,
                              std::size_t nodes = 400);

}  // namespace mixfront
