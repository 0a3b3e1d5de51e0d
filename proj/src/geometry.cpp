#include "hsl/geometry.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hsl {

namespace {

double clamp_unit(double v) { return std::min(1.0, std::max(-1.0, v)); }

void check_dims(const Point& a, const Point& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("dimension mismatch: " + std::to_string(a.size()) +
                                    " vs " + std::to_string(b.size()));
}

}  // namespace

double dot(const Point& a, const Point& b) {
    check_dims(a, b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const Point& a) { return std::sqrt(dot(a, a)); }

Point sub(const Point& a, const Point& b) {
    check_dims(a, b);
    Point r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Point add(const Point& a, const Point& b) {
    check_dims(a, b);
    Point r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Point scale(const Point& a, double s) {
    Point r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
    return r;
}

Halfspace make_halfspace(Point omega, double b, bool homogeneous) {
    double n = norm(omega);
    if (n == 0.0) throw std::invalid_argument("halfspace with zero normal is degenerate");
    Halfspace h;
    h.omega = scale(omega, 1.0 / n);
    h.b = homogeneous ? 0.0 : b / n;
    h.homogeneous = homogeneous;
    return h;
}

int label(const Threshold& t, double x) { return x <= t.theta ? 1 : 0; }

int label(const Halfspace& h, const Point& x) {
    return dot(h.omega, x) >= h.b ? 1 : 0;
}

int label(const Concept& c, const Point& x) {
    if (c.is_threshold()) {
        if (x.size() != 1) throw std::invalid_argument("threshold concepts take 1-d points");
        return label(c.threshold(), x[0]);
    }
    return label(c.halfspace(), x);
}

Point project_onto_boundary(const Point& x, const Halfspace& h) {
    check_dims(x, h.omega);
    double t = dot(h.omega, x) - h.b;  // omega is unit
    return sub(x, scale(h.omega, t));
}

double distance_to_boundary(const Point& x, const Halfspace& h) {
    check_dims(x, h.omega);
    return std::abs(dot(h.omega, x) - h.b);
}

double threshold_error(const Threshold& a, const Threshold& b) {
    return std::abs(a.theta - b.theta);
}

double homogeneous_error(const Halfspace& a, const Halfspace& b) {
    if (!a.homogeneous || !b.homogeneous)
        throw std::invalid_argument("homogeneous_error requires homogeneous half-spaces");
    double cosang = clamp_unit(dot(a.omega, b.omega));
    return std::acos(cosang) / M_PI;
}

Point sample_uniform_ball(int k, Rng& rng) {
    Point x(static_cast<std::size_t>(k));
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (auto& v : x) {
            v = rng.gaussian();
            n2 += v * v;
        }
    } while (n2 == 0.0);
    double u = rng.uniform();
    double r = 0.5 * std::pow(u, 1.0 / static_cast<double>(k));
    double s = r / std::sqrt(n2);
    for (auto& v : x) v *= s;
    return x;
}

namespace {

constexpr std::size_t kMcChunk = 1 << 12;

std::size_t mc_chunk_disagreements(const Concept& a, const Concept& b, int k,
                                   std::size_t count, std::uint64_t chunk_seed) {
    Rng rng(chunk_seed);
    std::size_t d = 0;
    for (std::size_t i = 0; i < count; ++i) {
        Point x = sample_uniform_ball(k, rng);
        if (label(a, x) != label(b, x)) ++d;
    }
    return d;
}

McEstimate mc_finish(std::size_t disagreements, std::size_t n) {
    McEstimate e;
    e.estimate = static_cast<double>(disagreements) / static_cast<double>(n);
    e.std_error = std::sqrt(e.estimate * (1.0 - e.estimate) / static_cast<double>(n));
    return e;
}

void mc_check(const Concept& a, const Concept& b, std::size_t n) {
    if (a.dim() != b.dim()) throw std::invalid_argument("concepts live in different domains");
    if (a.is_threshold() != b.is_threshold())
        throw std::invalid_argument("concepts live in different domains");
    if (n == 0) throw std::invalid_argument("monte_carlo_error needs n >= 1");
}

}  // namespace

McEstimate monte_carlo_error(const Concept& a, const Concept& b, std::size_t n,
                             std::uint64_t seed) {
    mc_check(a, b, n);
    if (a.is_threshold()) {
        // 1-d case: uniform on [0,1] instead of the ball
        std::size_t d = 0;
        Rng rng(mix_seed(seed, 0));
        for (std::size_t i = 0; i < n; ++i) {
            double x = rng.uniform();
            if (label(a.threshold(), x) != label(b.threshold(), x)) ++d;
        }
        return mc_finish(d, n);
    }
    int k = a.dim();
    std::size_t nchunks = (n + kMcChunk - 1) / kMcChunk;
    std::size_t total = 0;
#pragma omp parallel for reduction(+ : total) schedule(static)
    for (long long c = 0; c < static_cast<long long>(nchunks); ++c) {
        std::size_t lo = static_cast<std::size_t>(c) * kMcChunk;
        std::size_t count = std::min(kMcChunk, n - lo);
        total += mc_chunk_disagreements(a, b, k, count,
                                        mix_seed(seed, static_cast<std::uint64_t>(c)));
    }
    return mc_finish(total, n);
}

McEstimate monte_carlo_error_serial(const Concept& a, const Concept& b,
                                    std::size_t n, std::uint64_t seed) {
    mc_check(a, b, n);
    if (a.is_threshold()) return monte_carlo_error(a, b, n, seed);
    int k = a.dim();
    std::size_t nchunks = (n + kMcChunk - 1) / kMcChunk;
    std::size_t total = 0;
    for (std::size_t c = 0; c < nchunks; ++c) {
        std::size_t lo = c * kMcChunk;
        std::size_t count = std::min(kMcChunk, n - lo);
        total += mc_chunk_disagreements(a, b, k, count, mix_seed(seed, c));
    }
    return mc_finish(total, n);
}

double concept_error(const Concept& a, const Concept& b, std::size_t mc_samples,
                     std::uint64_t seed) {
    if (a.is_threshold() && b.is_threshold())
        return threshold_error(a.threshold(), b.threshold());
    if (!a.is_threshold() && !b.is_threshold() && a.halfspace().homogeneous &&
        b.halfspace().homogeneous)
        return homogeneous_error(a.halfspace(), b.halfspace());
    return monte_carlo_error(a, b, mc_samples, seed).estimate;
}

Halfspace induced_halfspace(const Point& x, const Point& x_prime, int label_x) {
    Point dir = sub(x_prime, x);
    double n = norm(dir);
    if (n == 0.0) throw std::invalid_argument("induced_halfspace: x == x'");
    Point normal = scale(dir, 1.0 / n);
    double b = dot(normal, x_prime);
    Halfspace h{normal, b, false};
    if (label(h, x) != label_x) {
        h.omega = scale(normal, -1.0);
        h.b = -b;
    }
    return h;
}

std::optional<Halfspace> induced_homogeneous(const Point& x, const Point& x_prime,
                                             int label_x) {
    Point dir = sub(x_prime, x);
    double n = norm(dir);
    if (n == 0.0) return std::nullopt;
    Point normal = scale(dir, 1.0 / n);
    double side = dot(normal, x);
    if (side == 0.0) return std::nullopt;  // x on candidate boundary, sign undetermined
    Halfspace h{normal, 0.0, true};
    if (label(h, x) != label_x) h.omega = scale(normal, -1.0);
    return h;
}

double angle_at(const Point& x_prime, const Point& x, const Point& x_proj) {
    Point u = sub(x_prime, x);
    Point v = sub(x_proj, x);
    double nu = norm(u);
    double nv = norm(v);
    if (nu == 0.0 || nv == 0.0)
        throw std::invalid_argument("angle_at: zero-length side");
    return std::acos(clamp_unit(dot(u, v) / (nu * nv)));
}

}  // namespace hsl
