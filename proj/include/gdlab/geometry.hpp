#pragma once

#include <stdexcept>
#include <vector>

#include "gdlab/scale.hpp"
#include "gdlab/vec.hpp"

namespace gdlab {

/// A walker with no admissible move (empty neighbor set).
struct IsolatedVertexError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bounded star-shaped domain about the origin, represented radially:
/// x is inside iff |x| < r(x/|x|). The radial profile keeps the star-shape
/// condition structural and makes scaled membership a scalar comparison.
///
/// Variants: Ball(radius), Ellipsoid(semi-axes), RadialTable (d = 3 only,
/// bilinear in spherical angles, with a declared Lipschitz constant as the
/// uniform-domain surrogate).
class StarDomain {
  public:
    enum class Kind { Ball, Ellipsoid, RadialTable };

    static StarDomain ball(int d, double radius);
    static StarDomain ellipsoid(std::vector<double> semi_axes);
    /// theta in [0,pi] x phi in [0,2pi) grid of radii (row-major over theta).
    static StarDomain radial_table(std::vector<double> thetas, std::vector<double> phis,
                                   std::vector<double> radii, double lipschitz);

    int dim() const { return d_; }
    Kind kind() const { return kind_; }
    /// Inner radius rho: B_rho is contained in the domain.
    double inner_radius() const { return rho_; }
    /// Outer radius: the domain is contained in B_outer.
    double outer_radius() const { return outer_; }
    double lipschitz() const { return lipschitz_; }

    /// Boundary distance r(u) along the unit direction u.
    double radial_profile(const PointR& u) const;

    /// True iff |x| < r(x/|x|); the origin is always inside.
    bool contains(const PointR& x) const;

    /// Inward unit normal at a point within a tolerance band of the
    /// boundary. Ball: -x/|x|. Ellipsoid: inward-oriented gradient of the
    /// quadratic form. RadialTable: central-difference gradient of the
    /// radial gap r(x/|x|) - |x|. Rejects the origin.
    PointR inward_normal(const PointR& x) const;

    /// Copy with the radial profile multiplied by `factor`.
    StarDomain scaled(double factor) const;

  private:
    StarDomain() = default;
    Kind kind_ = Kind::Ball;
    int d_ = 3;
    double rho_ = 1.0, outer_ = 1.0, lipschitz_ = 0.0;
    std::vector<double> axes_;                   // ellipsoid semi-axes
    std::vector<double> thetas_, phis_, radii_;  // radial table
};

/// Growing domain D_t = f(t) K, with continuum and lattice views.
///
/// Lattice mode by default rescales the shape so K contains B_2 (the
/// lattice convention that keeps a ball of lattice sites inside every
/// scaled copy); pass enforce_b2 = false for raw shapes. Membership is the
/// open condition |x| < f(t) r(x/|x|). Immutable after construction.
class GrowingDomain {
  public:
    enum class Mode { Continuum, Lattice };

    GrowingDomain(StarDomain shape, ScaleFunction scale, Mode mode);
    GrowingDomain(StarDomain shape, ScaleFunction scale, Mode mode, bool enforce_b2);

    Mode mode() const { return mode_; }
    int dim() const { return shape_.dim(); }
    /// Effective shape (after any B_2 rescaling).
    const StarDomain& shape() const { return shape_; }
    const ScaleFunction& scale() const { return scale_; }

    bool contains(double t, const PointR& x) const;
    bool contains(double t, const PointZ& y) const;

    /// f(t) * r(u): boundary distance along unit direction u at time t.
    double boundary_radius(double t, const PointR& u) const;

    /// In-domain nearest neighbors of y at time t, in the canonical order
    /// +e1, -e1, ..., +ed, -ed. Throws IsolatedVertexError when empty.
    std::vector<PointZ> lattice_neighbors(double t, const PointZ& y) const;

    /// Allocation-free variant for hot loops; returns the count (may be 0).
    int lattice_neighbors_into(double t, const PointZ& y, PointZ* out) const;

    /// All lattice sites of D_t (exhaustive scan of the bounding box).
    std::vector<PointZ> lattice_sites(double t) const;

    /// Sites of D_t with some nearest neighbor outside D_t.
    std::vector<PointZ> inner_boundary(double t) const;

    /// BFS from the origin reaches every site of D_t. Throws if the origin
    /// is outside.
    bool connectivity_check(double t) const;

  private:
    StarDomain shape_;
    ScaleFunction scale_;
    Mode mode_;
    bool ball_fast_ = false;  // Ball shape: membership via one squared compare
};

/// BFS reachability over an explicit site set (helper for connectivity and
/// synthetic fixtures).
bool sites_connected_from(const std::vector<PointZ>& sites, const PointZ& origin);

}  // namespace gdlab
