#include "mixfront/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "mixfront/errors.hpp"

namespace mixfront {

namespace {

constexpr int kTailCells = 4096;
constexpr int kScanPoints = 20000;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double interp_table(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x < xs.front() || x > xs.back()) return 0.0;
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    if (it == xs.end()) return ys.back();
    std::size_t j = static_cast<std::size_t>(it - xs.begin());
    if (j == 0) return ys.front();
    double w = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
    return ys[j - 1] + w * (ys[j] - ys[j - 1]);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm);
    double frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    double fa = f(a);
    double fb = f(b);
    double fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

}  // namespace

bool ValidationReport::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

std::string ValidationReport::first_failure() const {
    for (const auto& c : checks)
        if (!c.passed) return c.name;
    return {};
}

Kernel::Kernel(Shape shape, double support, double scale)
    : shape_(std::move(shape)), support_(support), scale_(scale) {
    build_tail_table();
}

Kernel Kernel::tent(double radius) {
    if (!(radius > 0.0)) throw ConfigError("radius", "must be positive");
    return Kernel(Tent{radius}, radius, 1.0);
}

Kernel Kernel::truncated_gaussian(double sigma, double cutoff) {
    if (!(sigma > 0.0)) throw ConfigError("sigma", "must be positive");
    if (!(cutoff > 0.0)) throw ConfigError("cutoff", "must be positive");
    // exp(-x^2 / 2 sigma^2) shifted down by its cutoff value, so J stays
    // continuous (and Lipschitz) at +-cutoff.
    const double mass = sigma * std::sqrt(2.0 * std::numbers::pi) *
                            std::erf(cutoff / (sigma * std::numbers::sqrt2)) -
                        2.0 * cutoff * std::exp(-cutoff * cutoff / (2.0 * sigma * sigma));
    return Kernel(TruncatedGaussian{sigma, cutoff}, cutoff, 1.0 / mass);
}

Kernel Kernel::plateau(double flat_radius, double taper) {
    if (!(flat_radius >= 0.0)) throw ConfigError("flat_radius", "must be nonnegative");
    if (!(taper > 0.0)) throw ConfigError("taper", "must be positive");
    return Kernel(Plateau{flat_radius, taper}, flat_radius + taper,
                  1.0 / (2.0 * flat_radius + taper));
}

Kernel Kernel::sampled(std::vector<double> x, std::vector<double> density, bool symmetrize) {
    if (x.size() < 2 || x.size() != density.size())
        throw ConfigError("samples", "need at least two (displacement, density) rows");
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto i, auto j) { return x[i] < x[j]; });
    std::vector<double> xs, ys;
    for (auto i : order) {
        if (!xs.empty() && !(x[i] > xs.back()))
            throw ConfigError("samples", "duplicate displacement");
        if (!std::isfinite(density[i])) throw ConfigError("samples", "density must be finite");
        xs.push_back(x[i]);
        ys.push_back(density[i]);
    }
    const double support = std::max(std::abs(xs.front()), std::abs(xs.back()));
    if (!(support > 0.0)) throw ConfigError("samples", "support must be positive");
    Sampled s{std::move(xs), std::move(ys), symmetrize};
    // Exact mass of the piecewise-linear interpolant (breakpoints at +-x_i).
    std::vector<double> bp;
    for (double v : s.x) {
        bp.push_back(v);
        bp.push_back(-v);
    }
    std::sort(bp.begin(), bp.end());
    auto raw = [&](double v) {
        double a = interp_table(s.x, s.density, v);
        return symmetrize ? 0.5 * (a + interp_table(s.x, s.density, -v)) : a;
    };
    double mass = 0.0;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i)
        mass += 0.5 * (bp[i + 1] - bp[i]) * (raw(bp[i]) + raw(bp[i + 1]));
    if (!(mass > 0.0)) throw ConfigError("samples", "density must have positive mass");
    return Kernel(std::move(s), support, 1.0 / mass);
}

Kernel Kernel::from_csv(const std::string& path, bool symmetrize) {
    std::ifstream in(path);
    if (!in) throw ConfigError("csv", "cannot open " + path);
    std::vector<double> xs, ys;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double a, b;
        if (!(ss >> a >> b)) {
            if (xs.empty()) continue;  // header row
            throw ConfigError("csv", "malformed row: " + line);
        }
        xs.push_back(a);
        ys.push_back(b);
    }
    return sampled(std::move(xs), std::move(ys), symmetrize);
}

double Kernel::raw(double x) const {
    return std::visit(
        overloaded{
            [x](const Tent& k) { return std::max(0.0, 1.0 - std::abs(x) / k.radius) / k.radius; },
            [x](const TruncatedGaussian& k) {
                if (std::abs(x) >= k.cutoff) return 0.0;
                const double s2 = 2.0 * k.sigma * k.sigma;
                return std::exp(-x * x / s2) - std::exp(-k.cutoff * k.cutoff / s2);
            },
            [x](const Plateau& k) {
                const double ax = std::abs(x);
                if (ax <= k.flat_radius) return 1.0;
                return std::max(0.0, 1.0 - (ax - k.flat_radius) / k.taper);
            },
            [x](const Sampled& k) {
                double a = interp_table(k.x, k.density, x);
                return k.symmetrized ? 0.5 * (a + interp_table(k.x, k.density, -x)) : a;
            },
        },
        shape_);
}

double Kernel::evaluate(double x) const { return scale_ * raw(x); }

double Kernel::cell_integral(double a, double b) const {
    if (const auto* g = std::get_if<TruncatedGaussian>(&shape_)) {
        const double lo = std::clamp(a, -g->cutoff, g->cutoff);
        const double hi = std::clamp(b, -g->cutoff, g->cutoff);
        const double s = g->sigma * std::numbers::sqrt2;
        const double gauss = g->sigma * std::sqrt(std::numbers::pi / 2.0) *
                             (std::erf(hi / s) - std::erf(lo / s));
        const double shift = std::exp(-g->cutoff * g->cutoff / (2.0 * g->sigma * g->sigma));
        return scale_ * (gauss - shift * (hi - lo));
    }
    // Everything else is piecewise linear: trapezoid over breakpoints is exact.
    std::vector<double> pts{a};
    auto add = [&](double v) {
        if (v > a && v < b) pts.push_back(v);
    };
    std::visit(overloaded{
                   [&](const Tent& k) {
                       add(0.0);
                       add(k.radius);
                       add(-k.radius);
                   },
                   [](const TruncatedGaussian&) {},
                   [&](const Plateau& k) {
                       for (double v : {k.flat_radius, k.flat_radius + k.taper}) {
                           add(v);
                           add(-v);
                       }
                   },
                   [&](const Sampled& k) {
                       for (double v : k.x) {
                           add(v);
                           add(-v);
                       }
                   },
               },
               shape_);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        sum += 0.5 * (pts[i + 1] - pts[i]) * (evaluate(pts[i]) + evaluate(pts[i + 1]));
    return sum;
}

void Kernel::build_tail_table() {
    dr_ = support_ / kTailCells;
    std::vector<double> tail(kTailCells + 1, 0.0);
    for (int i = kTailCells - 1; i >= 0; --i)
        tail[i] = tail[i + 1] + cell_integral(i * dr_, (i + 1) * dr_);
    tail_ = std::make_shared<const std::vector<double>>(std::move(tail));
}

double Kernel::tail_mass(double r) const {
    if (r < 0.0) return 1.0 - tail_mass(-r);
    if (r >= support_) return 0.0;
    const auto& tail = *tail_;
    const double pos = r / dr_;
    const auto i = static_cast<std::size_t>(pos);
    if (i >= kTailCells) return 0.0;
    const double w = pos - static_cast<double>(i);
    return tail[i] + w * (tail[i + 1] - tail[i]);
}

double Kernel::sup() const {
    return std::visit(overloaded{
                          [this](const Sampled& k) {
                              double m = 0.0;
                              for (double v : k.x) m = std::max(m, evaluate(v));
                              return m;
                          },
                          [this](const auto&) { return evaluate(0.0); },
                      },
                      shape_);
}

double Kernel::lipschitz() const {
    return std::visit(
        overloaded{
            [](const Tent& k) { return 1.0 / (k.radius * k.radius); },
            [this](const TruncatedGaussian& k) {
                const double x = std::min(k.sigma, k.cutoff);
                return scale_ * x / (k.sigma * k.sigma) * std::exp(-x * x / (2.0 * k.sigma * k.sigma));
            },
            [this](const Plateau& k) { return scale_ / k.taper; },
            [this](const Sampled& k) {
                double m = 0.0;
                for (std::size_t i = 0; i + 1 < k.x.size(); ++i) {
                    for (double sgn : {1.0, -1.0}) {
                        double a = sgn * k.x[i], b = sgn * k.x[i + 1];
                        m = std::max(m, std::abs(evaluate(b) - evaluate(a)) / std::abs(b - a));
                    }
                }
                return m;
            },
        },
        shape_);
}

double Kernel::flat_radius() const {
    if (const auto* p = std::get_if<Plateau>(&shape_)) return p->flat_radius;
    return 0.0;
}

std::vector<double> Kernel::breakpoints() const {
    std::vector<double> bp;
    std::visit(overloaded{
                   [&](const Tent& k) { bp = {-k.radius, 0.0, k.radius}; },
                   [&](const TruncatedGaussian& k) { bp = {-k.cutoff, k.cutoff}; },
                   [&](const Plateau& k) {
                       const double r = k.flat_radius, e = k.flat_radius + k.taper;
                       bp = {-e, -r, r, e};
                   },
                   [&](const Sampled& k) {
                       for (double v : k.x) {
                           bp.push_back(v);
                           bp.push_back(-v);
                       }
                   },
               },
               shape_);
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    return bp;
}

std::string Kernel::kind() const {
    return std::visit(overloaded{
                          [](const Tent&) { return std::string("tent"); },
                          [](const TruncatedGaussian&) { return std::string("gaussian"); },
                          [](const Plateau&) { return std::string("plateau"); },
                          [](const Sampled&) { return std::string("table"); },
                      },
                      shape_);
}

ValidationReport Kernel::validate() const {
    ValidationReport rep;
    const double span = 1.05 * support_;

    std::vector<double> xs;
    xs.reserve(kScanPoints + 1);
    for (int i = 0; i <= kScanPoints; ++i) xs.push_back(-span + 2.0 * span * i / kScanPoints);
    if (const auto* s = std::get_if<Sampled>(&shape_)) {
        for (double v : s->x) {
            xs.push_back(v);
            xs.push_back(-v);
        }
        std::sort(xs.begin(), xs.end());
    }

    double min_val = std::numeric_limits<double>::infinity();
    double sup = 0.0;
    double sym = 0.0;
    for (double x : xs) {
        const double v = evaluate(x);
        min_val = std::min(min_val, v);
        sup = std::max(sup, v);
        sym = std::max(sym, std::abs(v - evaluate(-x)));
    }

    auto slope_scan = [&](int n) {
        double m = 0.0;
        double prev = evaluate(-span);
        const double h = 2.0 * span / n;
        for (int i = 1; i <= n; ++i) {
            const double cur = evaluate(-span + i * h);
            m = std::max(m, std::abs(cur - prev) / h);
            prev = cur;
        }
        return m;
    };
    const double lip = slope_scan(kScanPoints);
    const double lip_fine = slope_scan(4 * kScanPoints);

    auto f = [this](double x) { return evaluate(x); };
    const double mass = integrate(f, -span, 0.0, 1e-14) + integrate(f, 0.0, span, 1e-14);

    rep.normalization_defect = std::abs(mass - 1.0);
    rep.symmetry_defect = sym;
    rep.sup = sup;
    rep.lipschitz = std::max(lip, lip_fine);
    rep.value_at_zero = evaluate(0.0);

    rep.checks.push_back({"J>=0", min_val >= 0.0, min_val});
    rep.checks.push_back({"J(0)>0", rep.value_at_zero > 0.0, rep.value_at_zero});
    rep.checks.push_back({"unit mass", rep.normalization_defect <= 1e-10, rep.normalization_defect});
    rep.checks.push_back({"symmetric", sym <= 1e-12, sym});
    rep.checks.push_back({"bounded", std::isfinite(sup), sup});
    // A jump shows up as a slope estimate that grows with resolution.
    rep.checks.push_back({"Lipschitz", std::isfinite(lip_fine) && lip_fine <= 1.5 * lip + 1e-9,
                          rep.lipschitz});
    return rep;
}

}  // namespace mixfront
