#include "mixfront/transform.hpp"

#include "mixfront/errors.hpp"

namespace mixfront {

namespace {

void require_ordered(double g, double h) {
    if (!(g < h)) throw ConfigError("fronts", "require g < h");
}

}  // namespace

ReferenceGrid::ReferenceGrid(std::size_t intervals) : n_(intervals) {
    if (intervals < 4) throw ConfigError("N", "need at least 4 intervals");
    nodes_.resize(n_ + 1);
    for (std::size_t j = 0; j <= n_; ++j)
        nodes_[j] = -1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(n_);
    nodes_.front() = -1.0;
    nodes_.back() = 1.0;
}

double physical_x(double g, double h, double z) {
    require_ordered(g, h);
    return ((h - g) * z + h + g) / 2.0;
}

double xi(double g, double h) {
    require_ordered(g, h);
    const double len = h - g;
    return 4.0 / (len * len);
}

double eta(double g, double h, double gprime, double hprime, double z) {
    require_ordered(g, h);
    const double len = h - g;
    return (hprime + gprime) / len + (hprime - gprime) * z / len;
}

std::vector<double> eta_on_grid(double g, double h, double gprime, double hprime,
                                const ReferenceGrid& grid) {
    require_ordered(g, h);
    std::vector<double> out(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) out[j] = eta(g, h, gprime, hprime, grid[j]);
    return out;
}

}  // namespace mixfront
