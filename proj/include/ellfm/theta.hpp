#ifndef ELLFM_THETA_HPP
#define ELLFM_THETA_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "ellfm/errors.hpp"

namespace ellfm
{

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

/// Evaluation result carrying the precision flag raised by the series and product routines.
struct ThetaValue
{
    cplx value;
    bool precision_warning = false;
};

/// Modulus, nome and truncation policy shared by all theta evaluations.
///
/// The series for the odd theta function is truncated at |j| <= N + 1/2, with N the
/// smallest integer whose geometric tail bound stays below tail_tolerance for every
/// argument with |Im z| <= strip_height. Arguments outside the strip are reduced by the
/// tau quasi-periodicity before summation. Immutable after construction.
class ThetaContext
{
public:
    explicit ThetaContext(cplx tau, double tail_tolerance = 1e-14, double strip_factor = 2.0)
        : m_tau(tau), m_tail_tolerance(tail_tolerance)
    {
        if (!(tau.imag() > 0.0)) {
            throw domain_error("theta context: Im(tau) must be positive");
        }
        if (!(tail_tolerance > 0.0)) {
            throw domain_error("theta context: tail tolerance must be positive");
        }
        m_q = std::exp(2.0 * pi * I * tau);
        m_strip = strip_factor * tau.imag();
        m_truncation = truncation_for(tau.imag(), m_strip, tail_tolerance);
        m_coeff.reserve(static_cast<std::size_t>(m_truncation) + 1);
        for (int n = 0; n <= m_truncation; ++n) {
            const double j = n + 0.5;
            const cplx c = 2.0 * std::exp(I * pi * j * j * tau);
            m_coeff.push_back((n % 2 == 0) ? c : -c);
        }
        m_scale = std::abs(series(cplx{0.5, 0.0}));
    }

    cplx tau() const noexcept { return m_tau; }
    cplx nome() const noexcept { return m_q; }
    int truncation() const noexcept { return m_truncation; }
    double tail_tolerance() const noexcept { return m_tail_tolerance; }
    double strip_height() const noexcept { return m_strip; }
    /// |[1/2]|, the reference magnitude for pole guards.
    double scale() const noexcept { return m_scale; }

    /// Bound on the discarded tail |sum_{|j| > N+1/2}| for |Im z| <= strip.
    static double tail_bound(double im_tau, double strip, int n)
    {
        const double j0 = n + 1.5;
        const double t0 = 2.0 * std::exp(-pi * im_tau * j0 * j0 + 2.0 * pi * j0 * strip);
        const double ratio = std::exp(-pi * im_tau * (2.0 * j0 + 1.0) + 2.0 * pi * strip);
        if (ratio >= 1.0) {
            return std::numeric_limits<double>::infinity();
        }
        return t0 / (1.0 - ratio);
    }

    static int truncation_for(double im_tau, double strip, double tol)
    {
        for (int n = 1; n < 400; ++n) {
            if (tail_bound(im_tau, strip, n) < tol) {
                return n;
            }
        }
        return 400;
    }

    /// Raw truncated sum 2 sum_{n=0}^{N} (-1)^n exp(i pi (n+1/2)^2 tau) sin((2n+1) pi z).
    cplx sum(cplx z, int n_max) const
    {
        cplx acc{0.0, 0.0};
        for (int n = 0; n <= n_max; ++n) {
            const double j = n + 0.5;
            const cplx term = std::exp(I * pi * j * j * m_tau) * std::sin(2.0 * j * pi * z);
            acc += (n % 2 == 0) ? term : -term;
        }
        return 2.0 * acc;
    }

    /// Same sum at the context truncation, using cached coefficients.
    cplx series(cplx z) const
    {
        cplx acc{0.0, 0.0};
        for (std::size_t n = 0; n < m_coeff.size(); ++n) {
            acc += m_coeff[n] * std::sin((2.0 * double(n) + 1.0) * pi * z);
        }
        return acc;
    }

private:
    cplx m_tau;
    cplx m_q;
    double m_tail_tolerance;
    double m_strip = 0.0;
    int m_truncation = 0;
    double m_scale = 1.0;
    std::vector<cplx> m_coeff;
};

/// Odd theta function [z] = -sum_{j in Z+1/2} exp(i pi j^2 tau + 2 pi i j (z + 1/2)), with flag.
inline ThetaValue theta_additive_checked(const ThetaContext &ctx, cplx z)
{
    const cplx tau = ctx.tau();
    cplx factor{1.0, 0.0};
    if (std::abs(z.imag()) > ctx.strip_height()) {
        // [z0 + m tau] = (-1)^m exp(-2 pi i m z0 - pi i m^2 tau) [z0]
        const double m = std::round(z.imag() / tau.imag());
        const cplx z0 = z - m * tau;
        factor = std::exp(-2.0 * pi * I * m * z0 - pi * I * m * m * tau);
        if (std::fmod(std::abs(m), 2.0) == 1.0) {
            factor = -factor;
        }
        z = z0;
    }
    const cplx v = factor * ctx.series(z);
    const bool finite = std::isfinite(v.real()) && std::isfinite(v.imag());
    return {v, !finite || std::abs(factor) > 1e200};
}

inline cplx theta_additive(const ThetaContext &ctx, cplx z)
{
    return theta_additive_checked(ctx, z).value;
}

/// Principal square root with argument in (-pi, pi] before halving.
inline cplx principal_sqrt(cplx x)
{
    double a = std::arg(x);
    if (a <= -pi) {
        a = pi;
    }
    return std::polar(std::sqrt(std::abs(x)), 0.5 * a);
}

/// vartheta(x) = (x^{1/2} - x^{-1/2}) phi(q x) phi(q / x), phi(x) = prod_{s>=0} (1 - q^s x).
inline ThetaValue theta_multiplicative_checked(const ThetaContext &ctx, cplx x)
{
    if (x == cplx{0.0, 0.0}) {
        throw domain_error("multiplicative theta: x = 0");
    }
    const cplx q = ctx.nome();
    const cplx root = principal_sqrt(x);
    cplx value = root - 1.0 / root;
    const cplx inv = 1.0 / x;
    const double reach = std::max(std::abs(x), std::abs(inv));
    const double stop = ctx.tail_tolerance() * 1e-2;
    cplx qs = q;
    constexpr int max_factors = 4000;
    int s = 1;
    for (; s <= max_factors; ++s) {
        value *= (1.0 - qs * x) * (1.0 - qs * inv);
        if (std::abs(qs) * reach < stop) {
            break;
        }
        qs *= q;
    }
    return {value, s > max_factors};
}

inline cplx theta_multiplicative(const ThetaContext &ctx, cplx x)
{
    return theta_multiplicative_checked(ctx, x).value;
}

/// C(q) := vartheta(e^{2 pi i z}) / [z], measured at z0 = 1/4 after checking z-independence.
inline cplx proportionality_constant(const ThetaContext &ctx)
{
    constexpr double probes[] = {0.15, 0.25, 0.35, 0.45};
    auto ratio = [&](double z) {
        return theta_multiplicative(ctx, std::exp(2.0 * pi * I * z)) / theta_additive(ctx, cplx{z, 0.0});
    };
    const cplx c0 = ratio(0.25);
    for (double z : probes) {
        if (std::abs(ratio(z) - c0) > 1e-8 * std::abs(c0)) {
            throw inconsistent_error("proportionality constant depends on z");
        }
    }
    return c0;
}

/// Data for checking membership in Theta_n(chi) and the uniqueness statement.
struct EllipticPolyProbe
{
    int degree = 1;
    cplx chi_one{1.0, 0.0};
    /// chi(tau) = (-1)^n e^alpha
    cplx alpha{0.0, 0.0};
    std::vector<cplx> sample_points;
};

struct ProbeReport
{
    double max_dev_one = 0.0;
    double max_dev_tau = 0.0;
};

struct AgreementReport
{
    ProbeReport p;
    ProbeReport q;
    bool agree_at_nodes = false;
    bool agree_at_extras = false;
    double max_extra_dev = 0.0;
    /// Agreement at the n nodes implies agreement elsewhere.
    bool consistent = false;
};

/// Distance from u to the lattice Z + tau Z (nearest of the neighbouring cells).
inline double lattice_distance(cplx u, cplx tau)
{
    const double m = std::round(u.imag() / tau.imag());
    const cplx u1 = u - m * tau;
    const double n = std::round(u1.real());
    double best = std::numeric_limits<double>::infinity();
    for (int dm = -1; dm <= 1; ++dm) {
        for (int dn = -1; dn <= 1; ++dn) {
            best = std::min(best, std::abs(u1 - (n + dn) - double(dm) * tau));
        }
    }
    return best;
}

namespace detail
{

inline void check_probe(const ThetaContext &ctx, const EllipticPolyProbe &probe)
{
    const auto &y = probe.sample_points;
    if (probe.degree < 1 || static_cast<int>(y.size()) < probe.degree) {
        throw domain_error("elliptic probe: need at least n sample points");
    }
    for (std::size_t a = 0; a < y.size(); ++a) {
        for (std::size_t b = a + 1; b < y.size(); ++b) {
            if (lattice_distance(y[a] - y[b], ctx.tau()) < 1e-4) {
                throw domain_error("elliptic probe: degenerate sample points");
            }
        }
    }
    cplx total{0.0, 0.0};
    for (int j = 0; j < probe.degree; ++j) {
        total += y[static_cast<std::size_t>(j)];
    }
    // e^alpha carries the sum of zeros as alpha / (2 pi i)
    if (lattice_distance(total - probe.alpha / (2.0 * pi * I), ctx.tau()) < 1e-4) {
        throw domain_error("elliptic probe: node sum hits alpha modulo the lattice");
    }
}

} // namespace detail

/// Measures the deviation of f from the quasi-periodicities defining Theta_n(chi).
template <typename F>
ProbeReport elliptic_poly_probe(const ThetaContext &ctx, F &&f, const EllipticPolyProbe &probe)
{
    detail::check_probe(ctx, probe);
    const cplx tau = ctx.tau();
    const double n = probe.degree;
    const cplx chi_tau = ((probe.degree % 2 == 0) ? 1.0 : -1.0) * std::exp(probe.alpha);
    ProbeReport rep;
    for (cplx y : probe.sample_points) {
        const cplx fy = f(y);
        if (std::abs(fy) < 1e-14 * ctx.scale()) {
            throw pole_error("elliptic probe: |f(y)| below division guard");
        }
        const cplx r1 = f(y + 1.0) / fy;
        const cplx rt = f(y + tau) / fy;
        const cplx expect_tau = chi_tau * std::exp(-2.0 * pi * I * n * y - pi * I * n * tau);
        rep.max_dev_one = std::max(rep.max_dev_one, std::abs(r1 - probe.chi_one) / std::abs(probe.chi_one));
        rep.max_dev_tau = std::max(rep.max_dev_tau, std::abs(rt - expect_tau) / std::abs(expect_tau));
    }
    return rep;
}

/// Checks P and Q in Theta_n(chi), compares them on the first n sample points, and then on
/// the extra points.
template <typename P, typename Q>
AgreementReport elliptic_poly_agreement(const ThetaContext &ctx, P &&p, Q &&q, const EllipticPolyProbe &probe,
                                        std::span<const cplx> extra_points, double tol)
{
    AgreementReport rep;
    rep.p = elliptic_poly_probe(ctx, p, probe);
    rep.q = elliptic_poly_probe(ctx, q, probe);
    auto rel = [](cplx a, cplx b) {
        const double s = std::max({std::abs(a), std::abs(b), 1e-300});
        return std::abs(a - b) / s;
    };
    rep.agree_at_nodes = true;
    for (int j = 0; j < probe.degree; ++j) {
        const cplx y = probe.sample_points[static_cast<std::size_t>(j)];
        if (rel(p(y), q(y)) > tol) {
            rep.agree_at_nodes = false;
        }
    }
    for (cplx y : extra_points) {
        rep.max_extra_dev = std::max(rep.max_extra_dev, rel(p(y), q(y)));
    }
    rep.agree_at_extras = rep.max_extra_dev <= tol;
    const bool quasi_ok = std::max({rep.p.max_dev_one, rep.p.max_dev_tau, rep.q.max_dev_one, rep.q.max_dev_tau}) <= tol;
    rep.consistent = quasi_ok && (!rep.agree_at_nodes || rep.agree_at_extras);
    return rep;
}

} // namespace ellfm

#endif
