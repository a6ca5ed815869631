#pragma once

// Monotone piecewise-cubic Hermite interpolation (Fritsch-Carlson slope
// limiting).  Used for tabulated front trajectories and sampled fields: the
// limiter guarantees no overshoot between nodes, so a nonnegative table
// stays nonnegative and a monotone table stays monotone.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace fblab {

class MonotoneCubic {
  public:
    MonotoneCubic(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n)
            throw std::invalid_argument("MonotoneCubic: need matching tables with >= 2 nodes");
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(x_[i]) || !std::isfinite(y_[i]))
                throw std::invalid_argument("MonotoneCubic: values must be finite");
            if (i > 0 && !(x_[i] > x_[i - 1]))
                throw std::invalid_argument("MonotoneCubic: x must be strictly increasing");
        }
        m_.resize(n);
        std::vector<double> h(n - 1), d(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h[i] = x_[i + 1] - x_[i];
            d[i] = (y_[i + 1] - y_[i]) / h[i];
        }
        if (n == 2) {
            m_[0] = m_[1] = d[0];
        } else {
            for (std::size_t i = 1; i + 1 < n; ++i) {
                if (d[i - 1] * d[i] <= 0.0) {
                    m_[i] = 0.0;
                } else {
                    // Weighted harmonic mean keeps |m| within 3 min(|d|).
                    const double w1 = 2.0 * h[i] + h[i - 1];
                    const double w2 = h[i] + 2.0 * h[i - 1];
                    m_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
                }
            }
            m_[0] = end_slope(h[0], h[1], d[0], d[1]);
            m_[n - 1] = end_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
        }
    }

    /// Interpolated value; outside the table the end values are held constant.
    double operator()(double x) const {
        if (!std::isfinite(x))
            throw std::domain_error("MonotoneCubic: argument must be finite");
        if (x <= x_.front()) return y_.front();
        if (x >= x_.back()) return y_.back();
        const auto it = std::upper_bound(x_.begin(), x_.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
        const double h = x_[i + 1] - x_[i];
        const double u = (x - x_[i]) / h;
        const double u2 = u * u, u3 = u2 * u;
        return y_[i] * (2 * u3 - 3 * u2 + 1) + h * m_[i] * (u3 - 2 * u2 + u) +
               y_[i + 1] * (-2 * u3 + 3 * u2) + h * m_[i + 1] * (u3 - u2);
    }

    double front() const { return x_.front(); }
    double back() const { return x_.back(); }

  private:
    // Shape-preserving three-point estimate for a boundary slope.
    static double end_slope(double h0, double h1, double d0, double d1) {
        double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (m * d0 <= 0.0) return 0.0;
        if (d0 * d1 <= 0.0 && std::abs(m) > 3.0 * std::abs(d0)) return 3.0 * d0;
        return m;
    }

    std::vector<double> x_, y_, m_;
};

}  // namespace fblab
