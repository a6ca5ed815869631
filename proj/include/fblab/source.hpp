#pragma once

// Source terms f(x,t) >= 0 for the heat operator.  Four kinds:
//
//   Zero             f = 0
//   Constant         f = c
//   InverseSqrtTime  f = h / sqrt(t)          (unbounded as t -> 0)
//   Tabulated        f = f(x), piecewise linear in x, constant in t,
//                    extended by its end values outside the table
//
// Besides pointwise values the solver needs exact time averages over a step
// (the integrable 1/sqrt(t) singularity would otherwise wreck first-order
// accuracy of the first steps), and the Laplace probe needs the sup norm to
// place the threshold lambda = 2 ||f||_inf / alpha.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fblab {

class SourceTerm {
  public:
    enum class Kind { Zero, Constant, InverseSqrtTime, Tabulated };

    static SourceTerm zero() { return SourceTerm(Kind::Zero, 0.0); }

    static SourceTerm constant(double c) {
        if (!(std::isfinite(c) && c >= 0.0))
            throw std::invalid_argument("SourceTerm::constant: c must be finite and >= 0");
        return SourceTerm(Kind::Constant, c);
    }

    static SourceTerm inverse_sqrt_time(double h) {
        if (!(std::isfinite(h) && h > 0.0))
            throw std::invalid_argument("SourceTerm::inverse_sqrt_time: h must be finite and > 0");
        return SourceTerm(Kind::InverseSqrtTime, h);
    }

    static SourceTerm tabulated(std::vector<double> x, std::vector<double> f) {
        if (x.size() < 2 || x.size() != f.size())
            throw std::invalid_argument("SourceTerm::tabulated: need matching tables with >= 2 nodes");
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!std::isfinite(x[i]) || !std::isfinite(f[i]) || f[i] < 0.0)
                throw std::invalid_argument("SourceTerm::tabulated: values must be finite and >= 0");
            if (i > 0 && !(x[i] > x[i - 1]))
                throw std::invalid_argument("SourceTerm::tabulated: x must be strictly increasing");
        }
        SourceTerm s(Kind::Tabulated, 0.0);
        s.amp_ = *std::max_element(f.begin(), f.end());
        s.xs_ = std::move(x);
        s.fs_ = std::move(f);
        return s;
    }

    Kind kind() const { return kind_; }

    /// Amplitude parameter: c, h, or the table maximum.
    double amplitude() const { return amp_; }

    /// Pointwise value f(x,t); t must be > 0 for the 1/sqrt(t) kind.
    double value(double x, double t) const {
        switch (kind_) {
            case Kind::Zero: return 0.0;
            case Kind::Constant: return amp_;
            case Kind::InverseSqrtTime:
                if (!(t > 0.0))
                    throw std::domain_error("SourceTerm::value: 1/sqrt(t) source needs t > 0");
                return amp_ / std::sqrt(t);
            case Kind::Tabulated: return interp(x);
        }
        return 0.0;  // unreachable
    }

    /// Exact average (1/dt) int_t^{t+dt} f(x,tau) dtau; finite even at t = 0.
    double time_averaged(double x, double t, double dt) const {
        if (!(dt > 0.0))
            throw std::invalid_argument("SourceTerm::time_averaged: dt must be > 0");
        if (kind_ != Kind::InverseSqrtTime) return value(x, t > 0.0 ? t : t + dt);
        return 2.0 * amp_ * (std::sqrt(t + dt) - std::sqrt(t)) / dt;
    }

    /// Whether ||f||_inf is finite.
    bool bounded() const { return kind_ != Kind::InverseSqrtTime; }

    /// ||f||_inf over all x, t > 0; +inf for the unbounded kind.
    double sup() const {
        return bounded() ? amp_ : std::numeric_limits<double>::infinity();
    }

    /// Largest tabulated abscissa; beyond it the source is constant.
    double table_back() const {
        if (kind_ != Kind::Tabulated)
            throw std::logic_error("SourceTerm::table_back: not a tabulated source");
        return xs_.back();
    }

  private:
    SourceTerm(Kind k, double a) : kind_(k), amp_(a) {}

    double interp(double x) const {
        if (x <= xs_.front()) return fs_.front();
        if (x >= xs_.back()) return fs_.back();
        const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;
        const double lam = (x - xs_[i]) / (xs_[i + 1] - xs_[i]);
        return (1.0 - lam) * fs_[i] + lam * fs_[i + 1];
    }

    Kind kind_;
    double amp_;
    std::vector<double> xs_, fs_;
};

}  // namespace fblab
