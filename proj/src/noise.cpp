#include "hsl/noise.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hsl {

namespace {

[[noreturn]] void above_range(double y, double fmax) {
    throw std::domain_error("noise inverse: y = " + std::to_string(y) +
                            " above range (achievable maximum " + std::to_string(fmax) + ")");
}

// Bisection for h(r) = y with h non-decreasing on [0, hi]; returns the
// generalized inverse inf{r : h(r) >= y}. 160 halvings reach double precision
// relative to hi.
double bisect_inverse(const std::function<double(double)>& h, double y, double hi) {
    double lo = 0.0;
    for (int i = 0; i < 160 && lo < hi; ++i) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (h(mid) >= y)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double tab_eval(const TabulatedNoise& t, double r) {
    const auto& pts = t.table;
    if (r <= pts.front().first) {
        // linear from the implicit origin
        double r0 = pts.front().first;
        return r0 > 0.0 ? pts.front().second * (r / r0) : pts.front().second;
    }
    if (r >= pts.back().first) return pts.back().second;
    auto it = std::upper_bound(pts.begin(), pts.end(), r,
                               [](double v, const auto& p) { return v < p.first; });
    const auto& [r1, f1] = *it;
    const auto& [r0, f0] = *(it - 1);
    double w = (r - r0) / (r1 - r0);
    return f0 + w * (f1 - f0);
}

}  // namespace

NoiseFunction::NoiseFunction(Family f) : family_(std::move(f)) {
    if (auto* p = std::get_if<PolynomialNoise>(&family_)) {
        if (p->c <= 0.0 || p->scale <= 0.0)
            throw std::invalid_argument("polynomial noise needs c > 0 and scale > 0");
    } else if (auto* e = std::get_if<ExponentialNoise>(&family_)) {
        if (e->scale <= 0.0) throw std::invalid_argument("exponential noise needs scale > 0");
    } else if (auto* l = std::get_if<LinearNoise>(&family_)) {
        if (l->slope <= 0.0 || l->slope > 1.0)
            throw std::invalid_argument("linear noise needs slope in (0, 1]");
    } else if (auto* t = std::get_if<TabulatedNoise>(&family_)) {
        if (t->table.empty()) throw std::invalid_argument("tabulated noise needs samples");
        std::sort(t->table.begin(), t->table.end());
        double prev = 0.0;
        for (const auto& [r, v] : t->table) {
            if (r < 0.0 || v < 0.0 || v + 1e-15 < prev)
                throw std::invalid_argument("tabulated noise must be non-negative and non-decreasing");
            prev = std::max(prev, v);
        }
        if (t->table.front().first == 0.0 && t->table.front().second != 0.0)
            throw std::invalid_argument("tabulated noise must satisfy f(0) = 0");
    }
}

double NoiseFunction::eval(double r) const {
    if (r < 0.0) throw std::invalid_argument("noise eval: r must be >= 0");
    if (r == 0.0) return 0.0;
    return std::visit(
        [r](const auto& fam) -> double {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, ZeroNoise>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, PolynomialNoise>) {
                return fam.scale * std::pow(r, 1.0 + fam.c);
            } else if constexpr (std::is_same_v<T, ExponentialNoise>) {
                return fam.scale * std::exp(-1.0 / r);
            } else if constexpr (std::is_same_v<T, LinearNoise>) {
                return fam.slope * r;
            } else {
                return tab_eval(fam, r);
            }
        },
        family_);
}

double NoiseFunction::inverse(double y, double r_max) const {
    if (y < 0.0) throw std::invalid_argument("noise inverse: y must be >= 0");
    if (y == 0.0) return 0.0;
    double fmax = eval(r_max);
    if (y > fmax * (1.0 + 1e-12)) above_range(y, fmax);
    return std::visit(
        [&](const auto& fam) -> double {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, ZeroNoise>) {
                above_range(y, 0.0);  // unreachable: y > 0 was caught above
            } else if constexpr (std::is_same_v<T, PolynomialNoise>) {
                return std::pow(y / fam.scale, 1.0 / (1.0 + fam.c));
            } else if constexpr (std::is_same_v<T, ExponentialNoise>) {
                return -1.0 / std::log(y / fam.scale);
            } else if constexpr (std::is_same_v<T, LinearNoise>) {
                return y / fam.slope;
            } else {
                return bisect_inverse([this](double r) { return eval(r); }, y, r_max);
            }
        },
        family_);
}

double NoiseFunction::ratio_g(double r) const {
    if (r < 0.0) throw std::invalid_argument("ratio_g: r must be >= 0");
    if (r == 0.0) {
        if (const auto* l = std::get_if<LinearNoise>(&family_)) return l->slope;
        return 0.0;  // limit for the zero/polynomial/exponential families
    }
    return eval(r) / r;
}

double NoiseFunction::ratio_g_inverse(double y, double r_max) const {
    if (y < 0.0) throw std::invalid_argument("ratio_g_inverse: y must be >= 0");
    return std::visit(
        [&](const auto& fam) -> double {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, ZeroNoise>) {
                if (y == 0.0) return 0.0;
                above_range(y, 0.0);
            } else if constexpr (std::is_same_v<T, PolynomialNoise>) {
                // g(r) = scale * r^c
                if (y == 0.0) return 0.0;
                double gmax = fam.scale * std::pow(r_max, fam.c);
                if (y > gmax * (1.0 + 1e-12)) above_range(y, gmax);
                return std::pow(y / fam.scale, 1.0 / fam.c);
            } else if constexpr (std::is_same_v<T, LinearNoise>) {
                // g is the constant slope; generalized inverse exists only at y = slope
                if (std::abs(y - fam.slope) <= 1e-12) return 0.0;
                throw std::domain_error("ratio_g_inverse: constant ratio " +
                                        std::to_string(fam.slope) + " never attains y");
            } else {
                // exponential g is non-decreasing on (0, 1]; tabulated delegated
                double hi = std::is_same_v<T, ExponentialNoise> ? std::min(r_max, 1.0) : r_max;
                if (y == 0.0) return 0.0;
                double gmax = ratio_g(hi);
                if (y > gmax * (1.0 + 1e-12)) above_range(y, gmax);
                return bisect_inverse([this](double r) { return ratio_g(r); }, y, hi);
            }
        },
        family_);
}

double contraction_from_gap(const NoiseFunction& f, double d) {
    if (d <= 0.0) return 0.0;
    if (std::holds_alternative<ZeroNoise>(f.family())) return 0.0;
    if (const auto* l = std::get_if<LinearNoise>(&f.family()))
        return l->slope * d / (1.0 + l->slope);
    if (const auto* p = std::get_if<PolynomialNoise>(&f.family())) {
        if (p->c == 1.0) {
            // scale*u^2 + u = d, stable root
            double u = 2.0 * d / (1.0 + std::sqrt(1.0 + 4.0 * p->scale * d));
            return p->scale * u * u;
        }
    }
    // u + f(u) is strictly increasing from 0; bisect u on [0, d]
    double lo = 0.0, hi = d;
    for (int i = 0; i < 200 && lo < hi; ++i) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (mid + f.eval(mid) >= d)
            hi = mid;
        else
            lo = mid;
    }
    return f.eval(hi);
}

double tilde_f(const NoiseFunction& f, double r) {
    return contraction_from_gap(f, 0.5 * r);
}

std::size_t stop_count(const std::function<double(double)>& h, double u, double b,
                       std::size_t cap) {
    if (u < 0.0 || b < 0.0) throw std::invalid_argument("stop_count: u, b must be >= 0");
    if (u <= b) return 0;
    double cur = u;
    for (std::size_t n = 1; n <= cap; ++n) {
        double next = h(cur);
        if (next <= b) return n;
        if (next >= cur) return kStopInfinity;  // not contracting above b
        cur = next;
    }
    return kStopInfinity;
}

}  // namespace hsl
