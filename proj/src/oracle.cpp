#include "gdlab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace gdlab {

double continuous_hit_prob(double r, double eps, double a, int d) {
    if (d < 3) throw std::invalid_argument("continuous_hit_prob: requires d >= 3");
    if (eps <= 0 || eps >= a) throw std::invalid_argument("continuous_hit_prob: need 0 < eps < a");
    if (r < eps || r > a) throw std::invalid_argument("continuous_hit_prob: need eps <= r <= a");
    double e = 2.0 - d;
    return (std::pow(r, e) - std::pow(a, e)) / (std::pow(eps, e) - std::pow(a, e));
}

double excursion_rate(double a, double eps, int d) {
    if (eps > a / 2) throw std::invalid_argument("excursion_rate: need eps <= a/2");
    return continuous_hit_prob(a / 2, eps, a, d);
}

LatticeGraph LatticeGraph::build(const GrowingDomain& dom, double t, const PointZ& root) {
    if (!dom.contains(t, root)) throw std::invalid_argument("lattice graph: root not in domain");
    LatticeGraph g;
    g.index.reserve(1 << 12);
    std::deque<PointZ> queue{root};
    g.index.emplace(root, 0);
    g.sites.push_back(root);
    PointZ buf[2 * kMaxDim];
    while (!queue.empty()) {
        PointZ y = queue.front();
        queue.pop_front();
        int n = dom.lattice_neighbors_into(t, y, buf);
        for (int i = 0; i < n; ++i) {
            auto [it, inserted] = g.index.emplace(buf[i], static_cast<int32_t>(g.sites.size()));
            if (inserted) {
                g.sites.push_back(buf[i]);
                queue.push_back(buf[i]);
            }
        }
        if (g.sites.size() > 4'000'000)
            throw std::invalid_argument("lattice graph: domain too large for a direct solve");
    }
    g.neighbors.resize(g.sites.size());
    g.degree.resize(g.sites.size());
    for (size_t i = 0; i < g.sites.size(); ++i) {
        int n = dom.lattice_neighbors_into(t, g.sites[i], buf);
        g.degree[i] = n;
        g.neighbors[i].fill(-1);
        for (int k = 0; k < n; ++k) g.neighbors[i][static_cast<size_t>(k)] = g.index.at(buf[k]);
    }
    return g;
}

double HitSolveResult::at(const PointZ& p) const {
    int32_t i = graph.at(p);
    if (i < 0) throw std::invalid_argument("hit solve: point not in solved component");
    return value[static_cast<size_t>(i)];
}

namespace {

// Laplacian form of the harmonic systems: for each unknown site i,
//   deg_i u_i - sum_{j ~ i, j unknown} u_j = rhs_i,
// which is symmetric positive definite once any site is pinned.
struct System {
    const LatticeGraph& g;
    const std::vector<int32_t>& unknown_of_site;  // -1 for pinned sites
    const std::vector<int32_t>& site_of_unknown;

    void apply(const std::vector<double>& x, std::vector<double>& out) const {
        size_t n = site_of_unknown.size();
        for (size_t u = 0; u < n; ++u) {
            int32_t s = site_of_unknown[u];
            double acc = g.degree[static_cast<size_t>(s)] * x[u];
            for (int32_t nb : g.neighbors[static_cast<size_t>(s)]) {
                if (nb < 0) break;
                int32_t un = unknown_of_site[static_cast<size_t>(nb)];
                if (un >= 0) acc -= x[static_cast<size_t>(un)];
            }
            out[u] = acc;
        }
    }
};

int conjugate_gradient(const System& sys, const std::vector<double>& rhs, std::vector<double>& x,
                       double tol) {
    size_t n = rhs.size();
    std::vector<double> r = rhs, p, ap(n);
    x.assign(n, 0.0);
    p = r;
    double rr = 0;
    for (double v : r) rr += v * v;
    double rhs_norm = std::sqrt(rr);
    if (rhs_norm == 0) return 0;
    int it = 0;
    for (; it < 200000; ++it) {
        if (std::sqrt(rr) <= tol * std::max(1.0, rhs_norm)) break;
        sys.apply(p, ap);
        double pap = 0;
        for (size_t i = 0; i < n; ++i) pap += p[i] * ap[i];
        double alpha = rr / pap;
        double rr_new = 0;
        for (size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
            rr_new += r[i] * r[i];
        }
        double beta = rr_new / rr;
        rr = rr_new;
        for (size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    }
    return it;
}

void dense_lu_solve(const System& sys, const std::vector<double>& rhs, std::vector<double>& x) {
    size_t n = rhs.size();
    std::vector<double> a(n * n, 0.0);
    for (size_t u = 0; u < n; ++u) {
        int32_t s = sys.site_of_unknown[u];
        a[u * n + u] = sys.g.degree[static_cast<size_t>(s)];
        for (int32_t nb : sys.g.neighbors[static_cast<size_t>(s)]) {
            if (nb < 0) break;
            int32_t un = sys.unknown_of_site[static_cast<size_t>(nb)];
            if (un >= 0) a[u * n + static_cast<size_t>(un)] -= 1.0;
        }
    }
    x = rhs;
    // Gaussian elimination with partial pivoting.
    std::vector<size_t> perm(n);
    for (size_t i = 0; i < n; ++i) perm[i] = i;
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
        if (piv != col) {
            for (size_t j = 0; j < n; ++j) std::swap(a[col * n + j], a[piv * n + j]);
            std::swap(x[col], x[piv]);
        }
        double diag = a[col * n + col];
        if (std::abs(diag) < 1e-14) throw std::runtime_error("dense solve: singular system");
        for (size_t r = col + 1; r < n; ++r) {
            double f = a[r * n + col] / diag;
            if (f == 0) continue;
            for (size_t j = col; j < n; ++j) a[r * n + j] -= f * a[col * n + j];
            x[r] -= f * x[col];
        }
    }
    for (size_t ri = n; ri-- > 0;) {
        double acc = x[ri];
        for (size_t j = ri + 1; j < n; ++j) acc -= a[ri * n + j] * x[j];
        x[ri] = acc / a[ri * n + ri];
    }
}

}  // namespace

HitSolveResult discrete_hit_solve(const GrowingDomain& dom, double t, const PointZ& target,
                                  SolveMode mode, double exit_radius, int dense_threshold) {
    HitSolveResult res;
    res.graph = LatticeGraph::build(dom, t, target);
    const LatticeGraph& g = res.graph;
    size_t n_sites = g.sites.size();

    int32_t target_idx = g.at(target);
    if (target_idx < 0) throw std::invalid_argument("hit solve: target outside domain component");

    auto is_exit = [&](size_t i) {
        if (exit_radius <= 0) return false;
        return static_cast<double>(g.sites[i].norm2()) >= exit_radius * exit_radius;
    };
    if (mode == SolveMode::ExpectedExitTime && exit_radius <= 0)
        throw std::invalid_argument("hit solve: expected exit time needs an exit set");

    // Pin boundary values, index the rest.
    std::vector<double> fixed(n_sites, 0.0);
    std::vector<char> pinned(n_sites, 0);
    if (mode == SolveMode::BeforeExit) {
        pinned[static_cast<size_t>(target_idx)] = 1;
        fixed[static_cast<size_t>(target_idx)] = 1.0;
    }
    for (size_t i = 0; i < n_sites; ++i)
        if (is_exit(i) && !pinned[i]) pinned[i] = 1;  // exit value 0

    if (mode == SolveMode::BeforeExit && exit_radius <= 0) {
        // No exit: the confined chain hits the target eventually.
        res.value.assign(n_sites, 1.0);
        res.residual_max = 0.0;
        res.iterations = 0;
        return res;
    }

    std::vector<int32_t> unknown_of_site(n_sites, -1);
    std::vector<int32_t> site_of_unknown;
    for (size_t i = 0; i < n_sites; ++i)
        if (!pinned[i]) {
            unknown_of_site[i] = static_cast<int32_t>(site_of_unknown.size());
            site_of_unknown.push_back(static_cast<int32_t>(i));
        }
    size_t n_unknown = site_of_unknown.size();

    // rhs_i = deg_i for exit-time mode, plus pinned-neighbor contributions.
    std::vector<double> rhs(n_unknown, 0.0);
    for (size_t u = 0; u < n_unknown; ++u) {
        size_t s = static_cast<size_t>(site_of_unknown[u]);
        if (mode == SolveMode::ExpectedExitTime) rhs[u] = g.degree[s];
        for (int32_t nb : g.neighbors[s]) {
            if (nb < 0) break;
            if (pinned[static_cast<size_t>(nb)]) rhs[u] += fixed[static_cast<size_t>(nb)];
        }
    }

    System sys{g, unknown_of_site, site_of_unknown};
    std::vector<double> x;
    if (n_unknown == 0) {
        // Everything pinned (e.g. a one-site domain that is the target).
    } else if (n_unknown <= static_cast<size_t>(dense_threshold)) {
        dense_lu_solve(sys, rhs, x);
        res.method = SolveMethod::DenseLU;
    } else {
        res.iterations = conjugate_gradient(sys, rhs, x, 1e-13);
        res.method = SolveMethod::ConjugateGradient;
    }

    res.value.assign(n_sites, 0.0);
    for (size_t i = 0; i < n_sites; ++i) res.value[i] = fixed[i];
    for (size_t u = 0; u < n_unknown; ++u)
        res.value[static_cast<size_t>(site_of_unknown[u])] = x[u];

    // Verify the defining relations in max norm.
    double worst = 0.0;
    for (size_t u = 0; u < n_unknown; ++u) {
        size_t s = static_cast<size_t>(site_of_unknown[u]);
        double acc = 0.0;
        for (int32_t nb : g.neighbors[s]) {
            if (nb < 0) break;
            acc += res.value[static_cast<size_t>(nb)];
        }
        double expect = (mode == SolveMode::ExpectedExitTime ? 1.0 : 0.0) + acc / g.degree[s];
        worst = std::max(worst, std::abs(res.value[s] - expect));
    }
    res.residual_max = worst;
    if (worst > 1e-10) throw std::runtime_error("hit solve: residual above tolerance");
    return res;
}

double discrete_hit_by_time(const GrowingDomain& dom, double t, const PointZ& target,
                            const PointZ& start, int64_t T) {
    LatticeGraph g = LatticeGraph::build(dom, t, target);
    int32_t ti = g.at(target);
    int32_t si = g.at(start);
    if (si < 0) throw std::invalid_argument("hit by time: start outside domain component");
    size_t n = g.sites.size();
    // u_s(y) = P_y(hit target within s steps); u_{s+1} = avg over neighbors,
    // with the target absorbing at 1.
    std::vector<double> u(n, 0.0), next(n, 0.0);
    u[static_cast<size_t>(ti)] = 1.0;
    for (int64_t s = 0; s < T; ++s) {
        for (size_t i = 0; i < n; ++i) {
            if (static_cast<int32_t>(i) == ti) {
                next[i] = 1.0;
                continue;
            }
            double acc = 0.0;
            for (int32_t nb : g.neighbors[i]) {
                if (nb < 0) break;
                acc += u[static_cast<size_t>(nb)];
            }
            next[i] = acc / g.degree[i];
        }
        u.swap(next);
        if (u[static_cast<size_t>(si)] > 1.0 - 1e-15) break;  // saturated
    }
    return u[static_cast<size_t>(si)];
}

}  // namespace gdlab
