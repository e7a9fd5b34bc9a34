#pragma once

#include <cstddef>
#include <vector>

namespace mixfront {

/// Uniform grid z_j = -1 + 2j/N on the reference interval [-1, 1].
class ReferenceGrid {
public:
    explicit ReferenceGrid(std::size_t intervals = 256);

    std::size_t intervals() const { return n_; }
    std::size_t size() const { return n_ + 1; }
    double spacing() const { return 2.0 / static_cast<double>(n_); }
    double operator[](std::size_t j) const { return nodes_[j]; }
    const std::vector<double>& nodes() const { return nodes_; }

private:
    std::size_t n_;
    std::vector<double> nodes_;
};

// Front-fixing change of variables x = ((h - g) z + h + g) / 2 that maps the
// moving habitat (g, h) onto [-1, 1]. All functions reject g >= h.

double physical_x(double g, double h, double z);

/// Diffusion factor 4 / (h - g)^2 picked up by d^2/dx^2 in reference coordinates.
double xi(double g, double h);

/// Advection speed in reference coordinates induced by the moving fronts.
double eta(double g, double h, double gprime, double hprime, double z);

/// eta sampled on every grid node.
std::vector<double> eta_on_grid(double g, double h, double gprime, double hprime,
                                const ReferenceGrid& grid);

}  // namespace mixfront
