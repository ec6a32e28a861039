#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace fsoest::detail {

struct FixedPointResult {
    double x = 0;
    int iterations = 0;
    bool converged = false;
};

// Fixed-point iteration x = g(x) with secant (Wegstein) relaxation.
// The first step is damped by `damping`; later steps use w = 1 / (1 - s), s the secant slope of g.
// Iterates are clamped to [lo, hi].
template <class G>
FixedPointResult relaxed_fixed_point(G&& g, double x0, double lo, double hi, double damping, double tol, int max_iter)
{
    FixedPointResult out{x0, 0, false};
    double x_prev = std::clamp(x0, lo, hi);
    double g_prev = g(x_prev);
    if (!std::isfinite(g_prev)) {
        return out;
    }
    double x = std::clamp(x_prev + damping * (g_prev - x_prev), lo, hi);
    for (int it = 1; it <= max_iter; ++it) {
        const double gx = g(x);
        out.iterations = it;
        if (!std::isfinite(gx)) {
            out.x = x;
            return out;
        }
        double w = damping;
        const double dx = x - x_prev;
        if (dx != 0) {
            const double s = (gx - g_prev) / dx;
            if (std::isfinite(s) && std::fabs(1.0 - s) > 1e-12) {
                w = std::clamp(1.0 / (1.0 - s), -1e3, 1e3);
            }
        }
        const double x_new = std::clamp(x + w * (gx - x), lo, hi);
        if (std::fabs(x_new - x) <= tol) {
            const bool pinned = (x_new == lo || x_new == hi) && std::fabs(gx - x) > tol;
            out.x = x_new;
            out.converged = !pinned;
            return out;
        }
        x_prev = x;
        g_prev = gx;
        x = x_new;
    }
    out.x = x;
    return out;
}

// Root of f on [lo, hi] given f(lo) and f(hi) of opposite sign (or zero).
template <class F>
double bisect(F&& f, double lo, double hi, double tol, int max_iter = 200)
{
    double flo = f(lo);
    for (int i = 0; i < max_iter && hi - lo > tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0) {
            return mid;
        }
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Golden-section maximization on [lo, hi]; returns the best point probed.
template <class F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, double tol, int max_iter = 200)
{
    constexpr double invphi = 0.6180339887498949;
    double a = lo;
    double b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c);
    double fd = f(d);
    std::pair<double, double> best = fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
    for (int i = 0; i < max_iter && b - a > tol; ++i) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
            if (fc > best.second) {
                best = {c, fc};
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
            if (fd > best.second) {
                best = {d, fd};
            }
        }
    }
    return best;
}

} // namespace fsoest::detail
