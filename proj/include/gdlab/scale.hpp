#pragma once

#include <string>
#include <utility>
#include <vector>

namespace gdlab {

/// Growth profile f(t): the radius schedule of a growing domain.
///
/// Three variants share one interface:
///   - PiecewiseConstant: levels a_l at jump times t_l (t_1 = 0), both
///     strictly increasing; f(t) = a_l on [t_l, t_{l+1}).
///   - Power: f(t) = (c + t)^alpha with c > 0, alpha >= 0.
///   - Tabulated: sorted (t, value) samples, right-continuous steps.
/// All variants are non-decreasing, strictly positive and right-continuous.
/// Immutable after construction; safe to share across threads.
class ScaleFunction {
  public:
    enum class Kind { PiecewiseConstant, Power, Tabulated };

    static ScaleFunction power(double c, double alpha);
    /// Levels a_1 < a_2 < ... at jump times t_1 = 0 < t_2 < ...
    static ScaleFunction piecewise(std::vector<double> jump_times, std::vector<double> levels);
    static ScaleFunction tabulated(std::vector<std::pair<double, double>> samples);
    /// Frozen profile f == a (single-level piecewise constant).
    static ScaleFunction constant(double a);

    /// f(t); rejects t < 0.
    double operator()(double t) const;

    /// One-sided derivative f'(t) away from jumps: analytic for Power,
    /// zero for the step variants.
    double derivative(double t) const;

    Kind kind() const { return kind_; }
    double power_c() const { return c_; }
    double power_alpha() const { return alpha_; }
    const std::vector<double>& jump_times() const { return times_; }
    const std::vector<double>& levels() const { return values_; }

    /// Stored discontinuities in (0, horizon]; empty for Power.
    std::vector<double> jumps_in(double horizon) const;

    /// Largest stored time (Power: +inf).
    double stored_horizon() const;

    /// First t with f(t) >= level, located by bisection (exact for steps).
    /// Returns a negative value if the level is not reached by t_max.
    double first_time_reaching(double level, double t_max, double rel_resolution = 1e-9) const;

  private:
    ScaleFunction() = default;
    Kind kind_ = Kind::Power;
    double c_ = 1.0, alpha_ = 0.0;
    std::vector<double> times_;   // jump/sample times
    std::vector<double> values_;  // levels/sample values
};

/// Outcome of evaluating the divergence functional J_f = integral dt / f(t)^d.
struct DivergenceVerdict {
    enum class Verdict { Finite, Divergent, Undetermined };
    enum class Method { ClosedForm, PartialSum };
    double partial_value = 0.0;  // truncated value; full J for ClosedForm-Finite
    Verdict verdict = Verdict::Undetermined;
    Method method = Method::PartialSum;
};

/// J_f in dimension d, truncated at `horizon` where no closed form exists.
/// Power profiles get the exact answer: finite iff alpha*d > 1, with
/// J = 1 / ((alpha*d - 1) c^(alpha*d - 1)); divergent ones report the exact
/// truncated integral. Step profiles report the exact partial sum
/// sum_l a_l^(-d) dT_l plus the boundary fragment, verdict Undetermined
/// (a stored prefix cannot certify its own tail). Rejects d < 3.
DivergenceVerdict j_functional(const ScaleFunction& f, int d, double horizon);

/// Membership report for the separated-scales class of piecewise-constant
/// profiles: increments a_l - a_{l-1} strictly increasing and
/// sum a_l^(2-d) log(1+a_l) finite.
struct FStarReport {
    enum class Verdict { Member, NotMember, Undetermined };
    bool increments_increasing = false;
    double tail_sum_partial = 0.0;
    Verdict verdict = Verdict::Undetermined;
    std::string certificate;  // which analytic bound fired, if any
};

/// Checks the first `check_depth` stored levels. NotMember on the first
/// increment violation. Member requires increasing increments plus an
/// analytic tail certificate: d >= 4 (super-linear levels suffice), a
/// geometric growth ratio, or a polynomial exponent beta with
/// beta*(d-2) > 1. Otherwise Undetermined with the partial tail sum.
FStarReport f_star_membership(const ScaleFunction& f, int d, int check_depth);

/// Dyadic lower envelope g of f: levels 2^(l-1) f(0) at the first times f
/// reaches them, so g <= f <= 2g pointwise.
struct DyadicEnvelope {
    ScaleFunction g = ScaleFunction::constant(1.0);
    bool truncated = false;  // f stayed below the next level over the probed range
    int levels = 0;
};

DyadicEnvelope dyadic_envelope(const ScaleFunction& f, double rel_resolution = 1e-9,
                               int max_levels = 48, double t_max = 1e15);

}  // namespace gdlab
