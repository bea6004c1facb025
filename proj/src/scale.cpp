#include "gdlab/scale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gdlab {

ScaleFunction ScaleFunction::power(double c, double alpha) {
    if (c <= 0) throw std::invalid_argument("scale power: offset c must be positive");
    if (alpha < 0) throw std::invalid_argument("scale power: exponent must be >= 0");
    ScaleFunction f;
    f.kind_ = Kind::Power;
    f.c_ = c;
    f.alpha_ = alpha;
    return f;
}

ScaleFunction ScaleFunction::piecewise(std::vector<double> jump_times, std::vector<double> levels) {
    if (jump_times.empty() || jump_times.size() != levels.size())
        throw std::invalid_argument("scale piecewise: need matching non-empty times/levels");
    if (jump_times.front() != 0.0)
        throw std::invalid_argument("scale piecewise: first jump time must be 0");
    if (levels.front() <= 0)
        throw std::invalid_argument("scale piecewise: levels must be positive");
    for (size_t l = 1; l < levels.size(); ++l) {
        if (jump_times[l] <= jump_times[l - 1])
            throw std::invalid_argument("scale piecewise: jump times must be strictly increasing");
        if (levels[l] <= levels[l - 1])
            throw std::invalid_argument("scale piecewise: levels must be strictly increasing");
    }
    ScaleFunction f;
    f.kind_ = Kind::PiecewiseConstant;
    f.times_ = std::move(jump_times);
    f.values_ = std::move(levels);
    return f;
}

ScaleFunction ScaleFunction::tabulated(std::vector<std::pair<double, double>> samples) {
    if (samples.empty()) throw std::invalid_argument("scale tabulated: empty table");
    std::sort(samples.begin(), samples.end());
    ScaleFunction f;
    f.kind_ = Kind::Tabulated;
    f.times_.reserve(samples.size());
    f.values_.reserve(samples.size());
    for (auto& [t, v] : samples) {
        if (!f.times_.empty() && t == f.times_.back())
            throw std::invalid_argument("scale tabulated: duplicate sample time");
        if (v <= 0) throw std::invalid_argument("scale tabulated: values must be positive");
        if (!f.values_.empty() && v < f.values_.back())
            throw std::invalid_argument("scale tabulated: values must be non-decreasing");
        f.times_.push_back(t);
        f.values_.push_back(v);
    }
    if (f.times_.front() > 0.0)
        throw std::invalid_argument("scale tabulated: first sample must be at t <= 0");
    return f;
}

ScaleFunction ScaleFunction::constant(double a) {
    return piecewise({0.0}, {a});
}

double ScaleFunction::operator()(double t) const {
    if (t < 0) throw std::invalid_argument("scale evaluate: negative time");
    if (kind_ == Kind::Power) return std::pow(c_ + t, alpha_);
    // Right-continuous step lookup: value of the last time <= t.
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    size_t idx = static_cast<size_t>(it - times_.begin());
    return values_[idx - 1];
}

double ScaleFunction::derivative(double t) const {
    if (t < 0) throw std::invalid_argument("scale derivative: negative time");
    if (kind_ == Kind::Power) {
        if (alpha_ == 0.0) return 0.0;
        return alpha_ * std::pow(c_ + t, alpha_ - 1.0);
    }
    return 0.0;
}

std::vector<double> ScaleFunction::jumps_in(double horizon) const {
    std::vector<double> out;
    if (kind_ == Kind::Power) return out;
    for (size_t l = 1; l < times_.size(); ++l)
        if (times_[l] > 0 && times_[l] <= horizon) out.push_back(times_[l]);
    return out;
}

double ScaleFunction::stored_horizon() const {
    if (kind_ == Kind::Power) return std::numeric_limits<double>::infinity();
    return times_.back();
}

double ScaleFunction::first_time_reaching(double level, double t_max, double rel_resolution) const {
    if ((*this)(0.0) >= level) return 0.0;
    if (kind_ == Kind::PiecewiseConstant || kind_ == Kind::Tabulated) {
        for (size_t l = 0; l < values_.size(); ++l)
            if (values_[l] >= level) return std::max(times_[l], 0.0);
        return -1.0;
    }
    if ((*this)(t_max) < level) return -1.0;
    double lo = 0.0, hi = t_max;
    // Shrink the bracket first so the tolerance scales with the answer.
    while (hi - lo > rel_resolution * (1.0 + lo)) {
        double mid = 0.5 * (lo + hi);
        if ((*this)(mid) >= level)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

namespace {

// Exact integral of (c+t)^(-alpha d) over [0, horizon].
double truncated_power_integral(double c, double alphad, double horizon) {
    if (alphad == 1.0) return std::log((c + horizon) / c);
    double e = 1.0 - alphad;
    return (std::pow(c + horizon, e) - std::pow(c, e)) / e;
}

}  // namespace

DivergenceVerdict j_functional(const ScaleFunction& f, int d, double horizon) {
    if (d < 3) throw std::invalid_argument("j_functional: requires d >= 3");
    if (horizon <= 0) throw std::invalid_argument("j_functional: horizon must be positive");

    DivergenceVerdict out;
    if (f.kind() == ScaleFunction::Kind::Power) {
        double alphad = f.power_alpha() * d;
        out.method = DivergenceVerdict::Method::ClosedForm;
        if (alphad > 1.0) {
            out.verdict = DivergenceVerdict::Verdict::Finite;
            out.partial_value = 1.0 / ((alphad - 1.0) * std::pow(f.power_c(), alphad - 1.0));
        } else {
            out.verdict = DivergenceVerdict::Verdict::Divergent;
            out.partial_value = truncated_power_integral(f.power_c(), alphad, horizon);
        }
        return out;
    }

    // Step profiles: exact sum a_l^(-d) dT_l over full intervals below the
    // horizon, plus the fragment of the interval containing it.
    const auto& times = f.jump_times();
    const auto& levels = f.levels();
    double sum = 0.0;
    for (size_t l = 0; l < times.size(); ++l) {
        double t_lo = std::max(times[l], 0.0);
        double t_hi = (l + 1 < times.size()) ? times[l + 1] : horizon;
        t_hi = std::min(t_hi, horizon);
        if (t_hi <= t_lo) continue;
        sum += (t_hi - t_lo) * std::pow(levels[l], -static_cast<double>(d));
    }
    out.partial_value = sum;
    out.verdict = DivergenceVerdict::Verdict::Undetermined;
    out.method = DivergenceVerdict::Method::PartialSum;
    return out;
}

FStarReport f_star_membership(const ScaleFunction& f, int d, int check_depth) {
    if (f.kind() != ScaleFunction::Kind::PiecewiseConstant)
        throw std::invalid_argument("f_star_membership: requires a piecewise-constant profile");
    if (d < 3) throw std::invalid_argument("f_star_membership: requires d >= 3");
    const auto& a = f.levels();
    size_t depth = std::min(a.size(), static_cast<size_t>(check_depth));
    if (depth < 3) throw std::invalid_argument("f_star_membership: need at least 3 levels");

    FStarReport rep;
    rep.increments_increasing = true;
    double prev_inc = a[1] - a[0];
    for (size_t l = 2; l < depth; ++l) {
        double inc = a[l] - a[l - 1];
        if (inc <= prev_inc) {
            rep.increments_increasing = false;
            break;
        }
        prev_inc = inc;
    }
    for (size_t l = 0; l < depth; ++l)
        rep.tail_sum_partial += std::pow(a[l], 2.0 - d) * std::log1p(a[l]);

    if (!rep.increments_increasing) {
        rep.verdict = FStarReport::Verdict::NotMember;
        return rep;
    }
    // Tail certificates over the stored prefix.
    if (d >= 4) {
        // Increasing increments force super-linear a_l, and l^(2-d) log terms
        // are summable once d >= 4.
        rep.verdict = FStarReport::Verdict::Member;
        rep.certificate = "superlinear, d>=4";
        return rep;
    }
    double min_ratio = std::numeric_limits<double>::infinity();
    for (size_t l = 1; l < depth; ++l) min_ratio = std::min(min_ratio, a[l] / a[l - 1]);
    if (min_ratio > 1.05 && a[0] >= 1.0) {
        rep.verdict = FStarReport::Verdict::Member;
        rep.certificate = "geometric growth";
        return rep;
    }
    // Polynomial growth a_l >= a_1 l^beta with beta(d-2) comfortably > 1.
    double beta = std::numeric_limits<double>::infinity();
    for (size_t l = 1; l < depth; ++l)
        beta = std::min(beta, std::log(a[l] / a[0]) / std::log(static_cast<double>(l + 1)));
    if (beta * (d - 2) > 1.25 && a[0] >= 1.0) {
        rep.verdict = FStarReport::Verdict::Member;
        rep.certificate = "polynomial exponent";
        return rep;
    }
    rep.verdict = FStarReport::Verdict::Undetermined;
    return rep;
}

DyadicEnvelope dyadic_envelope(const ScaleFunction& f, double rel_resolution, int max_levels,
                               double t_max) {
    double f0 = f(0.0);
    if (f0 <= 0) throw std::invalid_argument("dyadic_envelope: f(0) must be positive");

    DyadicEnvelope out;
    // A profile that already has the dyadic shape is its own envelope.
    if (f.kind() == ScaleFunction::Kind::PiecewiseConstant) {
        const auto& lv = f.levels();
        bool dyadic = true;
        for (size_t l = 0; l < lv.size(); ++l)
            if (std::abs(lv[l] - std::ldexp(f0, static_cast<int>(l))) > 1e-12 * lv[l]) {
                dyadic = false;
                break;
            }
        if (dyadic) {
            out.g = f;
            out.levels = static_cast<int>(lv.size());
            return out;
        }
    }

    std::vector<double> times{0.0};
    std::vector<double> levels{f0};
    for (int l = 2; l <= max_levels; ++l) {
        double target = std::ldexp(f0, l - 1);  // 2^(l-1) f(0)
        double t = f.first_time_reaching(target, t_max, rel_resolution);
        if (t < 0) {
            out.truncated = true;
            break;
        }
        if (t <= times.back()) t = std::nextafter(times.back(), std::numeric_limits<double>::max());
        times.push_back(t);
        levels.push_back(target);
    }
    if (static_cast<int>(levels.size()) == max_levels) out.truncated = false;
    out.g = ScaleFunction::piecewise(std::move(times), std::move(levels));
    out.levels = static_cast<int>(out.g.levels().size());
    return out;
}

}  // namespace gdlab
