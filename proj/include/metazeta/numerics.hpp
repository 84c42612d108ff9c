#pragma once

// Numerical building blocks shared by the ladder, factorization and grafting
// layers: compensated summation, globally adaptive Gauss-Kronrod (7,15)
// quadrature, bracketed root refinement and golden-section minimisation.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <vector>

namespace metazeta::numerics {

// Neumaier's variant of Kahan summation.
template <typename Real = double>
class CompensatedSum {
public:
    void add(Real x)
    {
        const Real t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    Real value() const { return sum_ + comp_; }

private:
    Real sum_ = 0;
    Real comp_ = 0;
};

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    std::size_t evaluations = 0;
    std::size_t intervals = 0;
    bool converged = false;
};

struct QuadratureOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-300;
    std::size_t max_intervals = 4000;
};

namespace detail {

// Kronrod abscissae (descending, last is the centre) and weights for G7/K15.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

}  // namespace detail

struct Segment {
    double a = 0.0;
    double b = 0.0;
    double value = 0.0;
    double error = 0.0;
};

// Single G7/K15 panel. Error estimate is |K15 - G7| (no QUADPACK rescaling, so
// it is conservative for smooth integrands).
template <typename F>
Segment gauss_kronrod_15(F&& f, double a, double b)
{
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    double resk = fc * detail::kWgk[7];
    double resg = fc * detail::kWg[3];
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * detail::kXgk[j];
        const double f1 = f(centre - dx);
        const double f2 = f(centre + dx);
        resk += detail::kWgk[j] * (f1 + f2);
        if (j % 2 == 1) {
            resg += detail::kWg[j / 2] * (f1 + f2);
        }
    }
    return {a, b, resk * half, std::abs((resk - resg) * half)};
}

// Globally adaptive quadrature over [breakpoints.front(), breakpoints.back()].
// Every breakpoint starts a separate panel, so callers can align panels to a
// grid they already know the integrand resolves on.
template <typename F>
QuadratureResult integrate(F&& f, std::span<const double> breakpoints, const QuadratureOptions& opt = {})
{
    QuadratureResult out;
    if (breakpoints.size() < 2) {
        out.converged = true;
        return out;
    }
    auto cmp = [](const Segment& x, const Segment& y) { return x.error < y.error; };
    std::priority_queue<Segment, std::vector<Segment>, decltype(cmp)> heap(cmp);
    double total = 0.0;
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (breakpoints[i + 1] == breakpoints[i]) {
            continue;
        }
        Segment s = gauss_kronrod_15(f, breakpoints[i], breakpoints[i + 1]);
        out.evaluations += 15;
        total += s.value;
        total_err += s.error;
        heap.push(s);
    }
    while (!heap.empty() && total_err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
        if (heap.size() >= opt.max_intervals) {
            break;
        }
        Segment worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            break;  // cannot split further in double precision
        }
        heap.pop();
        Segment left = gauss_kronrod_15(f, worst.a, mid);
        Segment right = gauss_kronrod_15(f, mid, worst.b);
        out.evaluations += 30;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum the final partition in a fixed order so the result does not depend
    // on the accumulated cancellation history above.
    std::vector<Segment> parts;
    parts.reserve(heap.size());
    while (!heap.empty()) {
        parts.push_back(heap.top());
        heap.pop();
    }
    std::sort(parts.begin(), parts.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
    CompensatedSum<double> value;
    CompensatedSum<double> err;
    for (const auto& s : parts) {
        value.add(s.value);
        err.add(s.error);
    }
    out.value = value.value();
    out.abs_error = err.value();
    out.intervals = parts.size();
    out.converged = out.abs_error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(out.value));
    return out;
}

template <typename F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureOptions& opt = {})
{
    const std::array<double, 2> bp{a, b};
    return integrate(std::forward<F>(f), std::span<const double>(bp), opt);
}

// Bisection on a sign-change bracket. Stops when the bracket is narrower than
// abs_tol or cannot shrink further; returns the endpoint with smaller |f|.
template <typename F>
double bisect(F&& f, double lo, double hi, double f_lo, double abs_tol)
{
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= abs_tol || mid <= lo || mid >= hi) {
            break;
        }
        const double f_mid = f(mid);
        if (f_mid == 0.0) {
            return mid;
        }
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Safeguarded Newton for increasing f with known derivative df on [lo, hi],
// where f(lo) <= 0 <= f(hi). Falls back to bisection whenever a Newton step
// leaves the bracket.
template <typename F, typename DF>
double newton_bracketed(F&& f, DF&& df, double lo, double hi, double guess, double abs_tol)
{
    double x = std::clamp(guess, lo, hi);
    for (int iter = 0; iter < 200; ++iter) {
        const double fx = f(x);
        if (fx == 0.0) {
            return x;
        }
        if (fx < 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        if (hi - lo <= abs_tol * 0.25) {
            break;
        }
        const double d = df(x);
        double next = (d > 0.0) ? x - fx / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (std::abs(next - x) <= abs_tol * 0.01) {
            // Converged to below tolerance: finish at the Newton iterate.
            return next;
        }
        if (next == x) {
            break;
        }
        x = next;
    }
    return x;
}

// Golden-section search for a minimum of a unimodal f on [a, b].
template <typename F>
double golden_minimum(F&& f, double a, double b, int max_iter = 200)
{
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int i = 0; i < max_iter; ++i) {
        if (!(c > a && d < b && c < d)) {
            break;
        }
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc < fd ? c : d;
}

// Monotone piecewise cubic (Fritsch-Butland slopes) through (x_i, y_i) with
// non-decreasing y.
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    bool empty() const { return x_.empty(); }

private:
    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> m_;
};

}  // namespace metazeta::numerics
