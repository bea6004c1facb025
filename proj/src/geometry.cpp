#include "gdlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_set>

namespace gdlab {

StarDomain StarDomain::ball(int d, double radius) {
    if (radius <= 0) throw std::invalid_argument("ball: radius must be positive");
    if (d < 1 || d > kMaxDim) throw std::invalid_argument("ball: bad dimension");
    StarDomain s;
    s.kind_ = Kind::Ball;
    s.d_ = d;
    s.rho_ = s.outer_ = radius;
    s.lipschitz_ = 0.0;
    return s;
}

StarDomain StarDomain::ellipsoid(std::vector<double> semi_axes) {
    int d = static_cast<int>(semi_axes.size());
    if (d < 1 || d > kMaxDim) throw std::invalid_argument("ellipsoid: bad dimension");
    StarDomain s;
    s.kind_ = Kind::Ellipsoid;
    s.d_ = d;
    s.rho_ = s.outer_ = semi_axes[0];
    for (double a : semi_axes) {
        if (a <= 0) throw std::invalid_argument("ellipsoid: semi-axes must be positive");
        s.rho_ = std::min(s.rho_, a);
        s.outer_ = std::max(s.outer_, a);
    }
    // The radial profile of an ellipsoid is smooth; its gradient norm is
    // bounded by outer^2/rho, a crude but sufficient Lipschitz constant.
    s.lipschitz_ = s.outer_ * s.outer_ / s.rho_;
    s.axes_ = std::move(semi_axes);
    return s;
}

StarDomain StarDomain::radial_table(std::vector<double> thetas, std::vector<double> phis,
                                    std::vector<double> radii, double lipschitz) {
    if (thetas.size() < 2 || phis.size() < 2)
        throw std::invalid_argument("radial_table: need at least a 2x2 grid");
    if (radii.size() != thetas.size() * phis.size())
        throw std::invalid_argument("radial_table: grid size mismatch");
    if (!std::is_sorted(thetas.begin(), thetas.end()) || !std::is_sorted(phis.begin(), phis.end()))
        throw std::invalid_argument("radial_table: grid must be sorted");
    StarDomain s;
    s.kind_ = Kind::RadialTable;
    s.d_ = 3;
    s.rho_ = s.outer_ = radii[0];
    for (double r : radii) {
        if (r <= 0) throw std::invalid_argument("radial_table: radii must be positive");
        s.rho_ = std::min(s.rho_, r);
        s.outer_ = std::max(s.outer_, r);
    }
    s.lipschitz_ = lipschitz;
    s.thetas_ = std::move(thetas);
    s.phis_ = std::move(phis);
    s.radii_ = std::move(radii);
    return s;
}

namespace {

double lerp(double a, double b, double w) { return a + (b - a) * w; }

}  // namespace

double StarDomain::radial_profile(const PointR& u) const {
    switch (kind_) {
        case Kind::Ball:
            return rho_;
        case Kind::Ellipsoid: {
            // |r u| on the ellipsoid surface: sum (r u_i / a_i)^2 = 1.
            double s = 0;
            for (int i = 0; i < d_; ++i) {
                double q = u[i] / axes_[static_cast<size_t>(i)];
                s += q * q;
            }
            return 1.0 / std::sqrt(s);
        }
        case Kind::RadialTable: {
            double theta = std::acos(std::clamp(u[2], -1.0, 1.0));
            double phi = std::atan2(u[1], u[0]);
            if (phi < 0) phi += 6.283185307179586476925286766559;
            auto cell = [](const std::vector<double>& grid, double v, size_t& i0, double& w) {
                auto it = std::upper_bound(grid.begin(), grid.end(), v);
                size_t hi = static_cast<size_t>(std::clamp<ptrdiff_t>(it - grid.begin(), 1,
                                                                      static_cast<ptrdiff_t>(grid.size()) - 1));
                i0 = hi - 1;
                double span = grid[hi] - grid[i0];
                w = span > 0 ? std::clamp((v - grid[i0]) / span, 0.0, 1.0) : 0.0;
            };
            size_t it0, ip0;
            double wt, wp;
            cell(thetas_, theta, it0, wt);
            cell(phis_, phi, ip0, wp);
            size_t np = phis_.size();
            double r00 = radii_[it0 * np + ip0], r01 = radii_[it0 * np + ip0 + 1];
            double r10 = radii_[(it0 + 1) * np + ip0], r11 = radii_[(it0 + 1) * np + ip0 + 1];
            return lerp(lerp(r00, r01, wp), lerp(r10, r11, wp), wt);
        }
    }
    return rho_;
}

bool StarDomain::contains(const PointR& x) const {
    double n2 = x.norm2();
    if (n2 == 0) return true;
    if (kind_ == Kind::Ball) return n2 < rho_ * rho_;
    if (n2 >= outer_ * outer_) return false;
    if (n2 < rho_ * rho_) return true;
    double n = std::sqrt(n2);
    PointR u(d_);
    for (int i = 0; i < d_; ++i) u[i] = x[i] / n;
    return n < radial_profile(u);
}

PointR StarDomain::inward_normal(const PointR& x) const {
    double n = x.norm();
    if (n <= 0) throw std::invalid_argument("inward_normal: undefined at the origin");
    switch (kind_) {
        case Kind::Ball: {
            PointR v(d_);
            for (int i = 0; i < d_; ++i) v[i] = -x[i] / n;
            return v;
        }
        case Kind::Ellipsoid: {
            PointR g(d_);
            for (int i = 0; i < d_; ++i)
                g[i] = -x[i] / (axes_[static_cast<size_t>(i)] * axes_[static_cast<size_t>(i)]);
            return g.normalized();
        }
        case Kind::RadialTable: {
            // Gradient of the signed radial gap g(x) = r(x/|x|) - |x|, which
            // increases inward, estimated by central differences.
            double h = 1e-5 * n;
            PointR g(d_);
            for (int i = 0; i < d_; ++i) {
                PointR xp = x, xm = x;
                xp[i] += h;
                xm[i] -= h;
                double gp = radial_profile(xp.normalized()) - xp.norm();
                double gm = radial_profile(xm.normalized()) - xm.norm();
                g[i] = (gp - gm) / (2 * h);
            }
            return g.normalized();
        }
    }
    throw std::logic_error("inward_normal: unknown kind");
}

StarDomain StarDomain::scaled(double factor) const {
    if (factor <= 0) throw std::invalid_argument("scaled: factor must be positive");
    StarDomain s = *this;
    s.rho_ *= factor;
    s.outer_ *= factor;
    for (double& a : s.axes_) a *= factor;
    for (double& r : s.radii_) r *= factor;
    return s;
}

GrowingDomain::GrowingDomain(StarDomain shape, ScaleFunction scale, Mode mode)
    : GrowingDomain(std::move(shape), std::move(scale), mode, mode == Mode::Lattice) {}

GrowingDomain::GrowingDomain(StarDomain shape, ScaleFunction scale, Mode mode, bool enforce_b2)
    : shape_(std::move(shape)), scale_(std::move(scale)), mode_(mode) {
    if (enforce_b2 && shape_.inner_radius() < 2.0)
        shape_ = shape_.scaled(2.0 / shape_.inner_radius());
    if (mode_ == Mode::Lattice && enforce_b2 && shape_.inner_radius() * scale_(0.0) < 2.0)
        throw std::invalid_argument("growing domain: lattice convention needs rho * f(0) >= 2");
    ball_fast_ = shape_.kind() == StarDomain::Kind::Ball;
}

bool GrowingDomain::contains(double t, const PointR& x) const {
    double f = scale_(t);
    double n2 = x.norm2();
    if (n2 == 0) return true;
    if (ball_fast_) {
        double b = f * shape_.inner_radius();
        return n2 < b * b;
    }
    double outer = f * shape_.outer_radius();
    if (n2 >= outer * outer) return false;
    double inner = f * shape_.inner_radius();
    if (n2 < inner * inner) return true;
    double n = std::sqrt(n2);
    PointR u(x.d);
    for (int i = 0; i < x.d; ++i) u[i] = x[i] / n;
    return n < f * shape_.radial_profile(u);
}

bool GrowingDomain::contains(double t, const PointZ& y) const {
    if (ball_fast_) {
        double b = scale_(t) * shape_.inner_radius();
        return static_cast<double>(y.norm2()) < b * b;
    }
    return contains(t, y.to_real());
}

double GrowingDomain::boundary_radius(double t, const PointR& u) const {
    return scale_(t) * shape_.radial_profile(u);
}

int GrowingDomain::lattice_neighbors_into(double t, const PointZ& y, PointZ* out) const {
    const int d = shape_.dim();
    int n = 0;
    if (ball_fast_) {
        double b = scale_(t) * shape_.inner_radius();
        double b2 = b * b;
        int64_t base = y.norm2();
        for (int i = 0; i < d; ++i) {
            int64_t yi = y[i];
            if (static_cast<double>(base + 2 * yi + 1) < b2) out[n++] = y.shifted(i, +1);
            if (static_cast<double>(base - 2 * yi + 1) < b2) out[n++] = y.shifted(i, -1);
        }
        // Re-emit in canonical axis order (+e_i before -e_i already holds,
        // and axes were walked in order), so nothing to fix here.
        return n;
    }
    for (int i = 0; i < d; ++i) {
        PointZ p = y.shifted(i, +1);
        if (contains(t, p)) out[n++] = p;
        PointZ m = y.shifted(i, -1);
        if (contains(t, m)) out[n++] = m;
    }
    return n;
}

std::vector<PointZ> GrowingDomain::lattice_neighbors(double t, const PointZ& y) const {
    if (mode_ != Mode::Lattice)
        throw std::invalid_argument("lattice_neighbors: domain is not in lattice mode");
    PointZ buf[2 * kMaxDim];
    int n = lattice_neighbors_into(t, y, buf);
    if (n == 0) throw IsolatedVertexError("lattice walker has no admissible move");
    return std::vector<PointZ>(buf, buf + n);
}

std::vector<PointZ> GrowingDomain::lattice_sites(double t) const {
    const int d = shape_.dim();
    double r = scale_(t) * shape_.outer_radius();
    int32_t lim = static_cast<int32_t>(std::floor(r));
    double count_bound = std::pow(2.0 * lim + 1, d);
    if (count_bound > 4e8) throw std::invalid_argument("lattice_sites: domain too large to enumerate");

    std::vector<PointZ> sites;
    PointZ p(d);
    for (int i = 0; i < d; ++i) p[i] = -lim;
    while (true) {
        if (contains(t, p)) sites.push_back(p);
        int axis = 0;
        while (axis < d) {
            if (++p[axis] <= lim) break;
            p[axis] = -lim;
            ++axis;
        }
        if (axis == d) break;
    }
    return sites;
}

std::vector<PointZ> GrowingDomain::inner_boundary(double t) const {
    std::vector<PointZ> out;
    for (const PointZ& y : lattice_sites(t)) {
        bool boundary = false;
        for (int i = 0; i < y.d && !boundary; ++i)
            boundary = !contains(t, y.shifted(i, +1)) || !contains(t, y.shifted(i, -1));
        if (boundary) out.push_back(y);
    }
    return out;
}

bool GrowingDomain::connectivity_check(double t) const {
    PointZ origin = PointZ::zero(shape_.dim());
    if (!contains(t, origin)) throw std::invalid_argument("connectivity_check: origin not in domain");
    return sites_connected_from(lattice_sites(t), origin);
}

bool sites_connected_from(const std::vector<PointZ>& sites, const PointZ& origin) {
    if (sites.empty()) return false;
    std::unordered_set<PointZ, PointZHash> all(sites.begin(), sites.end());
    if (!all.count(origin)) return false;
    std::unordered_set<PointZ, PointZHash> seen{origin};
    std::deque<PointZ> queue{origin};
    while (!queue.empty()) {
        PointZ y = queue.front();
        queue.pop_front();
        for (int i = 0; i < y.d; ++i)
            for (int s : {+1, -1}) {
                PointZ n = y.shifted(i, s);
                if (all.count(n) && seen.insert(n).second) queue.push_back(n);
            }
    }
    return seen.size() == all.size();
}

}  // namespace gdlab
