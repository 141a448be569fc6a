#ifndef RISNET_INTEGRATION_HPP
#define RISNET_INTEGRATION_HPP

#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace risnet {

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss-Legendre rule (QUADPACK qk15).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
void kronrod15(F& f, double a, double b, double& value, double& error) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[j];
        const double sum = f(center - dx) + f(center + dx);
        kronrod += kKronrodWeights[j] * sum;
        if (j % 2 == 1) gauss += kGaussWeights[j / 2] * sum;
    }
    value = kronrod * half;
    error = std::abs((kronrod - gauss) * half);
}

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

inline constexpr int kMaxSegments = 4000;

}  // namespace detail

/// Adaptive Gauss-Kronrod quadrature of f over the finite interval [a, b].
///
/// Global bisection of the worst segment until the summed error estimate drops
/// below max(abs_tol, rel_tol * |integral|).
template <class F>
double integrate(F f, double a, double b, double abs_tol = 1e-13, double rel_tol = 1e-12) {
    if (!(std::isfinite(a) && std::isfinite(b))) {
        throw std::invalid_argument("integrate: finite limits required");
    }
    std::priority_queue<detail::Segment> heap;
    detail::Segment first{a, b, 0.0, 0.0};
    detail::kronrod15(f, a, b, first.value, first.error);
    double total = first.value;
    double error = first.error;
    heap.push(first);
    while (error > std::max(abs_tol, rel_tol * std::abs(total)) &&
           heap.size() < static_cast<std::size_t>(detail::kMaxSegments)) {
        const detail::Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            heap.push(worst);
            break;
        }
        detail::Segment left{worst.a, mid, 0.0, 0.0};
        detail::Segment right{mid, worst.b, 0.0, 0.0};
        detail::kronrod15(f, left.a, left.b, left.value, left.error);
        detail::kronrod15(f, right.a, right.b, right.value, right.error);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed the drift of the running update.
    double sum = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        heap.pop();
    }
    return sum;
}

/// Integral of f over [a, inf) through the map x = a + t / (1 - t).
template <class F>
double integrate_to_infinity(F f, double a, double abs_tol = 1e-13, double rel_tol = 1e-12) {
    auto mapped = [&](double t) {
        if (t >= 1.0) return 0.0;
        const double one_minus = 1.0 - t;
        const double x = a + t / one_minus;
        const double v = f(x) / (one_minus * one_minus);
        return std::isfinite(v) ? v : 0.0;
    };
    return integrate(mapped, 0.0, 1.0, abs_tol, rel_tol);
}

}  // namespace risnet

#endif  // RISNET_INTEGRATION_HPP
