#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

#include "mixfront/kernel.hpp"
#include "mixfront/transform.hpp"

namespace mixfront {

enum class Quadrature {
    trapezoid,  ///< closed interval, half hats at both ends
    interior,   ///< interior nodes of a Dirichlet grid, full hats everywhere
};

/// Discrete convolution phi -> integral J(x - y) phi(y) dy on a uniform grid.
///
/// phi is taken piecewise linear between nodes and the kernel is integrated
/// exactly against each hat function, so entry (i, j) is
/// integral J(x_i - y) hat_j(y) dy. Row sums equal the exact mass of J over
/// the interval and never exceed 1. With `Quadrature::interior` the matrix is
/// symmetric Toeplitz; with `Quadrature::trapezoid` the two end columns use
/// half hats. Products only visit the band inside the kernel support.
class NonlocalMatrix {
public:
    NonlocalMatrix(const Kernel& kernel, double spacing, std::size_t nodes, Quadrature quadrature);

    std::size_t size() const { return n_; }
    double spacing() const { return dx_; }
    /// Largest |i - j| with a nonzero entry.
    std::size_t bandwidth() const { return band_; }

    double entry(std::size_t i, std::size_t j) const;
    double row_sum(std::size_t i) const;
    void apply(std::span<const double> in, std::span<double> out) const;
    std::vector<double> apply(std::span<const double> in) const;
    Eigen::MatrixXd dense() const;

private:
    std::size_t n_;
    double dx_;
    bool closed_;
    std::vector<double> full_;  // full_[k]: full hat at distance k dx
    std::vector<double> half_;  // half_[k]: end half hat at distance k dx
    std::size_t band_ = 0;
};

/// Nonlocal matrix for a habitat of physical length `length` on the
/// reference grid (closed-interval weights).
NonlocalMatrix assemble_nonlocal(const Kernel& kernel, double length, const ReferenceGrid& grid);

/// Second difference in z with homogeneous endpoint values.
class LocalLaplacian {
public:
    explicit LocalLaplacian(const ReferenceGrid& grid) : dz_(grid.spacing()), n_(grid.size()) {}

    /// Interior values (phi_{j+1} - 2 phi_j + phi_{j-1}) / dz^2; zero at the ends.
    void apply(std::span<const double> in, std::span<double> out) const;
    double spacing() const { return dz_; }
    std::size_t size() const { return n_; }

private:
    double dz_;
    std::size_t n_;
};

/// d2 * tau * xi * Laplacian(field) + d2 * (1 - tau) * (W field - field) at
/// interior nodes, zero at both ends. Rejects tau outside (0, 1].
std::vector<double> apply_mixed(std::span<const double> field, double d2, double tau,
                                const NonlocalMatrix& nonlocal, const LocalLaplacian& laplacian,
                                double xi);

enum class Side { left, right };

/// One-sided second-order derivative at an endpoint, in physical units.
double boundary_gradient(std::span<const double> field, double g, double h, Side side);

/// First-order upwind evaluation of eta * d/dz at interior nodes; the stencil
/// leans toward j+1 where eta > 0 and toward j-1 where eta < 0.
void upwind_advection(std::span<const double> field, std::span<const double> eta, double dz,
                      std::span<double> out);

/// Thomas algorithm for a tridiagonal system; `lower[0]` and `upper[n-1]`
/// are ignored. Stable for the diagonally dominant M-matrices used here.
std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs);

}  // namespace mixfront
