#include "bayesnr/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "bayesnr/errors.hpp"

namespace bayesnr {

namespace {

// 15-point Kronrod extension of 7-point Gauss (QUADPACK dqk15 constants).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Segment {
    double a, b;
    double integral;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gauss_kronrod(const RealFn& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double fv1[7], fv2[7];
    const double fc = f(mid);
    double gauss = fc * kWg[3];
    double kron = fc * kWgk[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        fv1[j] = f(mid - dx);
        fv2[j] = f(mid + dx);
        kron += (fv1[j] + fv2[j]) * kWgk[j];
        if (j % 2 == 1) gauss += (fv1[j] + fv2[j]) * kWg[j / 2];
    }

    // QUADPACK-style conservative error: scale |K15-G7| against the
    // centered residual so kinks cannot fool the estimate.
    const double reskh = kron * 0.5;
    double resasc = kWgk[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
    resasc *= std::abs(half);

    const double integral = kron * half;
    double err = std::abs((kron - gauss) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));

    return {a, b, integral, err};
}

// Monotone maps taking an unbounded range onto a finite parameter interval.
struct Mapped {
    RealFn f;
    double lo, hi;
};

Mapped map_to_finite(const RealFn& f, double lo, double hi) {
    const bool lo_inf = std::isinf(lo);
    const bool hi_inf = std::isinf(hi);
    if (!lo_inf && !hi_inf) return {f, lo, hi};
    if (lo_inf && hi_inf) {
        // x = t/(1-t^2), t in (-1,1)
        auto g = [f](double t) {
            const double om = 1.0 - t * t;
            const double x = t / om;
            const double jac = (1.0 + t * t) / (om * om);
            return f(x) * jac;
        };
        return {g, -1.0, 1.0};
    }
    if (hi_inf) {
        // x = a + t/(1-t), t in (0,1)
        const double a = lo;
        auto g = [f, a](double t) {
            const double om = 1.0 - t;
            const double x = a + t / om;
            return f(x) / (om * om);
        };
        return {g, 0.0, 1.0};
    }
    // x = b - t/(1-t), mirrored tail
    const double b = hi;
    auto g = [f, b](double t) {
        const double om = 1.0 - t;
        const double x = b - t / om;
        return f(x) / (om * om);
    };
    return {g, 0.0, 1.0};
}

}  // namespace

double integrate(const RealFn& f, double lo, double hi, const QuadratureSpec& spec) {
    if (!(lo < hi)) throw std::invalid_argument("integrate: requires lo < hi");
    if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0) || spec.max_subdivisions < 1)
        throw std::invalid_argument("integrate: invalid QuadratureSpec");

    const Mapped m = map_to_finite(f, lo, hi);

    std::priority_queue<Segment> heap;
    // Seed with a few segments so one lucky node cannot hide structure.
    constexpr int kInitial = 8;
    double total = 0.0, err = 0.0;
    for (int i = 0; i < kInitial; ++i) {
        const double a = m.lo + (m.hi - m.lo) * i / kInitial;
        const double b = m.lo + (m.hi - m.lo) * (i + 1) / kInitial;
        Segment s = gauss_kronrod(m.f, a, b);
        total += s.integral;
        err += s.error;
        heap.push(s);
    }

    int splits = 0;
    while (err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
        if (splits >= spec.max_subdivisions)
            throw NonConvergent("integrate: subdivision budget exhausted (err=" +
                                std::to_string(err) + ")");
        Segment worst = heap.top();
        heap.pop();
        total -= worst.integral;
        err -= worst.error;
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval collapsed to machine precision; accept its estimate
            total += worst.integral;
            continue;
        }
        for (const Segment& s : {gauss_kronrod(m.f, worst.a, mid), gauss_kronrod(m.f, mid, worst.b)}) {
            total += s.integral;
            err += s.error;
            heap.push(s);
        }
        ++splits;
    }
    return total;
}

double integrate_segmented(const RealFn& f, double lo, double hi,
                           const std::vector<double>& breakpoints,
                           const QuadratureSpec& spec) {
    std::vector<double> pts;
    pts.reserve(breakpoints.size() + 2);
    pts.push_back(lo);
    for (double p : breakpoints)
        if (std::isfinite(p) && p > lo && p < hi) pts.push_back(p);
    pts.push_back(hi);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    // Tight per-segment absolute budget keeps the summed error within spec.
    QuadratureSpec per = spec;
    per.abs_tol = spec.abs_tol / static_cast<double>(pts.size());

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        total += integrate(f, pts[i], pts[i + 1], per);
    return total;
}

double find_root(const RealFn& f, double lo, double hi, double tol) {
    if (!(lo < hi)) throw std::invalid_argument("find_root: requires lo < hi");
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) throw NoBracket("find_root: f(lo) and f(hi) have the same sign");

    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // below double resolution
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace bayesnr
