#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mixfront/eigen.hpp"
#include "mixfront/solver.hpp"

namespace mixfront {

/// Explicit upper solution for small front responses: fronts +-s(t) with
/// s(t) = h2 (1 - delta/2 - (delta/2) e^{-sigma t}), densities
/// v = k e^{-sigma t} P(xi(t)) omega(x / varsigma(t)) and
/// u = C e^{-sigma t} Q(t) phi(x), where P, Q carry the periodic part of
/// c and a, omega is the ground state of the mixed operator on (-h2, h2) and
/// phi the one of the nonlocal operator on (-h1, h1).
struct Supersolution {
    double h0 = 0.0, h1 = 0.0, h2 = 0.0;
    double delta = 0.0, sigma = 0.0;
    double k = 0.0, C = 0.0;
    double alpha = 0.0;
    double lambda_u = 0.0;  // nonlocal eigenvalue on (-h1, h1)
    double lambda_v = 0.0;  // mixed eigenvalue on (-h2, h2)
    double A = 0.0;
    double Lambda0 = 0.0;
    double min_residual = 0.0;       // min of residual / omega, construction sampling
    double min_residual_fine = 0.0;  // same at 10x finer time sampling
    std::size_t rejections = 0;
    std::size_t t_samples = 0;
    double t_span = 0.0;
    EigenReport omega;  // x shifted to (-h2, h2)
    EigenReport phi;    // x shifted to (-h1, h1)

    double varsigma(double t) const;
    double s(double t) const;
};

struct SupersolutionOptions {
    std::size_t nodes = 400;
    std::size_t max_rejections = 40;
};

/// Throws HypothesisError naming the first violated hypothesis.
Supersolution build_supersolution(const ProblemSpec& spec, const Thresholds& thresholds,
                                  const SupersolutionOptions& options = {});

/// min over interior nodes and `t_samples` times in [0, t_span] of the
/// v-inequality residual divided by omega.
double supersolution_residual(const Supersolution& sup, const ProblemSpec& spec,
                              std::size_t t_samples, double t_span);

struct Check {
    std::string name;
    bool applicable = true;
    bool passed = true;
    double measured = 0.0;
    double limit = 0.0;
    std::string detail;
};

struct VerificationReport {
    std::vector<Check> checks;
    bool passed() const;  // all applicable checks passed
};

/// Fronts inside +-s(t) (within tol) at every recorded time. Not applicable
/// when mu + rho1 + rho2 exceeds Lambda0.
Check check_domination(const Supersolution& sup, const ProblemSpec& spec,
                       const Trajectory& trajectory, double tol = 1e-8);

/// u_A <= u_B + tol at every recorded time and node.
Check check_ordering(const FieldTrajectory& a, const FieldTrajectory& b, double tol = 1e-9);

/// Seeded ordered pairs u0_A <= u0_B on a fixed domain; counts violations.
Check ordering_campaign(const Kernel& kernel, double d1, const PeriodicCoefficient& a,
                        double length, std::size_t pairs, std::uint64_t seed, double horizon,
                        std::size_t nodes = 101);

/// A priori bounds, strict front monotonicity and the speed envelope along
/// a trajectory.
std::vector<Check> check_bounds(const Trajectory& trajectory);

/// g = -h and even fields within tol at every snapshot.
Check check_symmetry(const Trajectory& trajectory, double tol = 1e-8);

/// Random nonnegative states stepped at the admissible dt stay nonnegative.
Check check_max_principle(const ProblemSpec& spec, std::size_t trials, std::uint64_t seed,
                          std::size_t intervals = 64);

}  // namespace mixfront
