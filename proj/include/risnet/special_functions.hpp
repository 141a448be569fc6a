#ifndef RISNET_SPECIAL_FUNCTIONS_HPP
#define RISNET_SPECIAL_FUNCTIONS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace risnet {

/// M-point Gauss-Laguerre rule for the weight e^{-x} on (0, inf).
struct QuadratureRule {
    int order = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

inline void require(bool ok, const char* what) {
    if (!ok) {
        throw std::domain_error(what);
    }
}

// zeta(k) - 1 for k = 2..kZetaTerms+1, via direct summation to n = 19 and an
// Euler-Maclaurin tail at n = 20.
constexpr int kZetaTerms = 40;

inline const std::array<double, kZetaTerms + 2>& zeta_minus_one_table() {
    static const std::array<double, kZetaTerms + 2> table = [] {
        std::array<double, kZetaTerms + 2> z{};
        constexpr double n0 = 20.0;
        // B_2j / (2j)!
        constexpr std::array<double, 4> bern = {1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0,
                                                -1.0 / 1209600.0};
        for (int k = 2; k < kZetaTerms + 2; ++k) {
            const double s = static_cast<double>(k);
            double tail = std::pow(n0, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(n0, -s);
            double rising = s;  // s (s+1) ... (s+2j-2)
            for (int j = 1; j <= 4; ++j) {
                tail += bern[j - 1] * rising * std::pow(n0, -s - 2.0 * j + 1.0);
                rising *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
            }
            double head = 0.0;
            for (int n = 19; n >= 2; --n) {
                head += std::pow(static_cast<double>(n), -s);
            }
            z[k] = head + tail;
        }
        return z;
    }();
    return table;
}

// ln Gamma(1 + z) for |z| <= 0.5.
inline double ln_gamma_1p(double z) {
    constexpr double euler = 0.57721566490153286060651209;
    const auto& zm1 = zeta_minus_one_table();
    double sum = 0.0;
    double power = -z;
    for (int k = 2; k < kZetaTerms + 2; ++k) {
        power *= -z;  // (-z)^k
        sum += zm1[k] * power / k;
    }
    return -std::log1p(z) + z * (1.0 - euler) + sum;
}

inline double stirling_ln_gamma(double x) {
    constexpr double half_ln_2pi = 0.91893853320467274178032973640562;
    const double r = 1.0 / x;
    const double r2 = r * r;
    const double series =
        r * (1.0 / 12.0 +
             r2 * (-1.0 / 360.0 +
                   r2 * (1.0 / 1260.0 +
                         r2 * (-1.0 / 1680.0 +
                               r2 * (1.0 / 1188.0 + r2 * (-691.0 / 360360.0 + r2 / 156.0))))));
    return (x - 0.5) * std::log(x) - x + half_ln_2pi + series;
}

}  // namespace detail

/// Natural log of the gamma function for x > 0.
inline double ln_gamma(double x) {
    detail::require(x > 0.0 && std::isfinite(x), "ln_gamma: argument must be positive and finite");
    if (x < 0.5) {
        return detail::ln_gamma_1p(x) - std::log(x);
    }
    if (x < 1.5) {
        return detail::ln_gamma_1p(x - 1.0);
    }
    if (x < 2.5) {
        const double z = x - 2.0;
        return detail::ln_gamma_1p(z) + std::log1p(z);
    }
    if (x < 12.0) {
        double shifted = x;
        double product = 1.0;
        while (shifted >= 2.5) {
            shifted -= 1.0;
            product *= shifted;
        }
        const double z = shifted - 2.0;
        return detail::ln_gamma_1p(z) + std::log1p(z) + std::log(product);
    }
    return detail::stirling_ln_gamma(x);
}

/// Regularized lower incomplete gamma P(a, x) = Upsilon(a, x) / Gamma(a).
inline double regularized_lower_gamma(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
inline double regularized_upper_gamma(double a, double x);

namespace detail {

inline double gamma_prefactor(double a, double x, double ln_gamma_norm) {
    return std::exp(-x + a * std::log(x) - ln_gamma_norm);
}

// Series for P(a, x), valid and fast for x < a + 1.
inline double lower_gamma_series(double a, double x) {
    double term = 1.0;
    double sum = 1.0;
    double ap = a;
    for (int n = 0; n < 10000; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-17) {
            break;
        }
    }
    return gamma_prefactor(a, x, ln_gamma(a + 1.0)) * sum;
}

// Modified Lentz continued fraction for Q(a, x), valid for x >= a + 1.
inline double upper_gamma_fraction(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) {
            break;
        }
    }
    return gamma_prefactor(a, x, ln_gamma(a)) * h;
}

}  // namespace detail

inline double regularized_lower_gamma(double a, double x) {
    detail::require(a > 0.0, "incomplete gamma: shape must be positive");
    detail::require(x >= 0.0, "incomplete gamma: argument must be nonnegative");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < a + 1.0) {
        return detail::lower_gamma_series(a, x);
    }
    return 1.0 - detail::upper_gamma_fraction(a, x);
}

inline double regularized_upper_gamma(double a, double x) {
    detail::require(a > 0.0, "incomplete gamma: shape must be positive");
    detail::require(x >= 0.0, "incomplete gamma: argument must be nonnegative");
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < a + 1.0) {
        return 1.0 - detail::lower_gamma_series(a, x);
    }
    return detail::upper_gamma_fraction(a, x);
}

/// Lower incomplete gamma function Upsilon(a, x) = int_0^x s^{a-1} e^{-s} ds.
inline double lower_incomplete_gamma(double a, double x) {
    return std::exp(ln_gamma(a)) * regularized_lower_gamma(a, x);
}

/// Modified Bessel function of the second kind, order zero, for x > 0.
///
/// Uses the logarithmic power series up to x = 2. Beyond that the exponentially
/// scaled integral e^x K0(x) = int_0^inf exp(-x (cosh t - 1)) dt is evaluated
/// by the trapezoid rule, which converges geometrically for this integrand.
inline double bessel_k0(double x) {
    detail::require(x > 0.0, "bessel_k0: argument must be positive");
    if (x <= 2.0) {
        constexpr double euler = 0.57721566490153286060651209;
        const double q = 0.25 * x * x;
        double term = 1.0;  // (x^2/4)^k / (k!)^2
        double harmonic = 0.0;
        double i0 = 1.0;
        double tail = 0.0;
        for (int k = 1; k < 60; ++k) {
            term *= q / (static_cast<double>(k) * k);
            harmonic += 1.0 / k;
            i0 += term;
            tail += term * harmonic;
            if (term < 1e-18 * i0) {
                break;
            }
        }
        return -(std::log(0.5 * x) + euler) * i0 + tail;
    }
    if (std::isinf(x)) return 0.0;
    constexpr double h = 0.125;
    double sum = 0.5;  // t = 0 contributes exp(0) / 2
    for (int j = 1; j < 2000; ++j) {
        const double t = j * h;
        const double v = std::exp(-x * (std::cosh(t) - 1.0));
        sum += v;
        if (v < 1e-18 * sum) {
            break;
        }
    }
    return std::exp(-x) * h * sum;
}

/// Complementary error function.
inline double erfc(double x) { return std::erfc(x); }

/// Marcum Q-function of order 1/2 via its closed form in erfc.
inline double marcum_q_half(double a, double b) {
    detail::require(a >= 0.0 && b >= 0.0, "marcum_q_half: arguments must be nonnegative");
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    const double value = 0.5 * (std::erfc((b - a) * inv_sqrt2) + std::erfc((b + a) * inv_sqrt2));
    return value > 1.0 ? 1.0 : value;
}

namespace detail {

// Eigenvalues of a symmetric tridiagonal matrix (implicit QL with Wilkinson
// shifts). diag is overwritten with the eigenvalues in ascending order.
inline void tridiagonal_eigenvalues(std::vector<double>& diag, std::vector<double> off) {
    const int n = static_cast<int>(diag.size());
    off.push_back(0.0);
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m = l;
        while (true) {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(diag[m]) + std::abs(diag[m + 1]);
                if (std::abs(off[m]) <= std::numeric_limits<double>::epsilon() * dd) {
                    break;
                }
            }
            if (m == l) {
                break;
            }
            if (++iter > 60) {
                throw std::runtime_error("tridiagonal_eigenvalues: no convergence");
            }
            double g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            double r = std::hypot(g, 1.0);
            g = diag[m] - diag[l] + off[l] / (g + std::copysign(r, g));
            double s = 1.0;
            double c = 1.0;
            double p = 0.0;
            int i = m - 1;
            for (; i >= l; --i) {
                double f = s * off[i];
                const double b = c * off[i];
                r = std::hypot(f, g);
                off[i + 1] = r;
                if (r == 0.0) {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if (r == 0.0 && i >= l) {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    std::sort(diag.begin(), diag.end());
}

// L_n(x) and L_{n-1}(x) by the three-term recurrence.
inline std::pair<double, double> laguerre_pair(int n, double x) {
    double prev = 1.0;
    double cur = 1.0 - x;
    if (n == 0) return {1.0, 0.0};
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return {cur, prev};
}

}  // namespace detail

/// Standard M-point Gauss-Laguerre rule, 1 <= M <= 64.
///
/// Nodes are the eigenvalues of the Jacobi matrix, polished by one Newton step
/// on L_M. Weights use t / ((M+1)^2 L_{M+1}(t)^2), which keeps full relative
/// accuracy for the tiny weights at the largest nodes.
inline QuadratureRule gauss_laguerre(int order) {
    if (order < 1 || order > 64) {
        throw std::out_of_range("gauss_laguerre: order must be in [1, 64], got " +
                                std::to_string(order));
    }
    std::vector<double> diag(order);
    std::vector<double> off(order > 1 ? order - 1 : 0);
    for (int i = 0; i < order; ++i) diag[i] = 2.0 * i + 1.0;
    for (int i = 1; i < order; ++i) off[i - 1] = i;
    detail::tridiagonal_eigenvalues(diag, off);

    QuadratureRule rule;
    rule.order = order;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const double n = order;
    for (int i = 0; i < order; ++i) {
        double t = diag[i];
        const auto [ln, lnm1] = detail::laguerre_pair(order, t);
        const double deriv = n * (ln - lnm1) / t;  // L_n'(t) = n (L_n - L_{n-1}) / t
        if (deriv != 0.0) {
            t -= ln / deriv;
        }
        const auto [lnp1, unused] = detail::laguerre_pair(order + 1, t);
        (void)unused;
        rule.nodes[i] = t;
        rule.weights[i] = t / ((n + 1.0) * (n + 1.0) * lnp1 * lnp1);
    }
    return rule;
}

}  // namespace risnet

#endif  // RISNET_SPECIAL_FUNCTIONS_HPP
