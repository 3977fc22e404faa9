#ifndef ELLFM_CLOSED_FORMS_HPP
#define ELLFM_CLOSED_FORMS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "ellfm/errors.hpp"
#include "ellfm/labels.hpp"
#include "ellfm/lattice_spec.hpp"
#include "ellfm/theta.hpp"

namespace ellfm
{

namespace detail
{

struct ThetaEval
{
    const ThetaContext &ctx;

    cplx operator()(cplx z) const { return theta_additive(ctx, z); }

    cplx denom(cplx z, const char *what) const
    {
        const cplx d = theta_additive(ctx, z);
        if (std::abs(d) < 1e-12 * ctx.scale()) {
            throw pole_error(std::string("closed form: vanishing denominator ") + what);
        }
        return d;
    }
};

inline cplx lam(const DynParams &p, int c)
{
    return p.lambda[static_cast<std::size_t>(c - 1)];
}

inline std::vector<std::size_t> identity_perm(std::size_t n)
{
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    return p;
}

// prod_{a<b} [x_a - x_b + gamma] / [x_a - x_b] for x already permuted
inline cplx cross_ratio(const ThetaEval &th, std::span<const cplx> x, cplx g)
{
    cplx t{1.0, 0.0};
    for (std::size_t a = 0; a < x.size(); ++a) {
        for (std::size_t b = a + 1; b < x.size(); ++b) {
            const cplx d = x[a] - x[b];
            t *= th(d + g) / th.denom(d, "[z_a - z_b]");
        }
    }
    return t;
}

// Row factor of a symmetric-function summand:
// prod_{i<I} [x - y_i + lo] * [x - y_I + centre] * prod_{i>I} [x - y_i + hi]
inline cplx row_factor(const ThetaEval &th, cplx x, std::span<const cplx> y, int pos, cplx centre, cplx lo, cplx hi)
{
    cplx t{1.0, 0.0};
    for (int i = 1; i <= static_cast<int>(y.size()); ++i) {
        const cplx yi = y[static_cast<std::size_t>(i - 1)];
        if (i < pos) {
            t *= th(x - yi + lo);
        } else if (i == pos) {
            t *= th(x - yi + centre);
        } else {
            t *= th(x - yi + hi);
        }
    }
    return t;
}

template <typename T>
std::vector<T> permuted(std::span<const T> v, const std::vector<std::size_t> &perm)
{
    std::vector<T> out;
    out.reserve(perm.size());
    for (std::size_t i : perm) {
        out.push_back(v[i]);
    }
    return out;
}

} // namespace detail

/// E_{L,k}: symmetrization over S_k of the position factors, with [gamma]^k prefactor.
inline cplx eval_E_base(const ThetaContext &ctx, const BaseLattice &req)
{
    req.validate();
    const detail::ThetaEval th{ctx};
    const int k = req.label.k();
    const cplx g = req.params.gamma;
    const cplx l12 = detail::lam(req.params, 1) - detail::lam(req.params, 2);
    cplx pre{1.0, 0.0};
    for (int j = 1; j <= k; ++j) {
        pre *= th(g) / th.denom(l12 + double(1 - j) * g, "[lambda_1 - lambda_2 + (1-j) gamma]");
    }
    auto perm = detail::identity_perm(static_cast<std::size_t>(k));
    cplx sum{0.0, 0.0};
    do {
        const auto zs = detail::permuted<cplx>(req.z, perm);
        cplx t{1.0, 0.0};
        for (int a = 1; a <= k; ++a) {
            const int Ia = req.label.positions[static_cast<std::size_t>(a - 1)];
            t *= detail::row_factor(th, zs[static_cast<std::size_t>(a - 1)], req.w, Ia, -l12 + double(2 * a - 1 - Ia) * g,
                                    0.0, -g);
        }
        sum += t * detail::cross_ratio(th, zs, g);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return pre * sum;
}

/// Two-level symmetric function; the merged sequence m_i uses the sigma_2-permuted z^(2).
inline cplx eval_E_fm(const ThetaContext &ctx, const FMLattice &req)
{
    req.validate();
    const detail::ThetaEval th{ctx};
    const FMLabel &lb = req.label;
    const cplx g = req.params.gamma;
    const cplx l12 = detail::lam(req.params, 1) - detail::lam(req.params, 2);
    const cplx l3 = detail::lam(req.params, 3);
    const auto tilde = induced_set(lb);
    const auto i2 = lb.colors2();
    const int k1 = lb.k1();
    const int k2 = lb.k2();

    cplx pre{1.0, 0.0};
    for (int a = 1; a <= k1; ++a) {
        pre *= th(g) / th.denom(l12 + double(1 - a) * g, "[lambda_1 - lambda_2 + (1-a) gamma]");
    }
    std::vector<int> upper_col(static_cast<std::size_t>(k2));
    std::vector<int> upper_c(static_cast<std::size_t>(k2));
    for (int a = 1; a <= k2; ++a) {
        const int Ia = lb.I2()[static_cast<std::size_t>(a - 1)];
        const int col = i2[static_cast<std::size_t>(Ia - 1)];
        const int c = color_count(lb, Ia, col);
        upper_col[static_cast<std::size_t>(a - 1)] = col;
        upper_c[static_cast<std::size_t>(a - 1)] = c;
        pre *= th(g) / th.denom(detail::lam(req.params, col) - l3 + double(1 - c) * g, "[lambda_i - lambda_3 + (1-c) gamma]");
    }

    auto p1 = detail::identity_perm(static_cast<std::size_t>(k1));
    auto p2 = detail::identity_perm(static_cast<std::size_t>(k2));
    cplx sum{0.0, 0.0};
    do {
        const auto zz2 = detail::permuted<cplx>(req.z2, p2);
        std::vector<cplx> m = zz2;
        m.insert(m.end(), req.w1.begin(), req.w1.end());
        cplx upper{1.0, 0.0};
        for (int a = 1; a <= k2; ++a) {
            const int Ia = lb.I2()[static_cast<std::size_t>(a - 1)];
            const auto s = static_cast<std::size_t>(a - 1);
            const cplx centre = l3 - detail::lam(req.params, upper_col[s]) + double(a - Ia - 1 + upper_c[s]) * g;
            upper *= detail::row_factor(th, zz2[s], req.w2, Ia, centre, 0.0, -g);
        }
        upper *= detail::cross_ratio(th, zz2, g);
        do {
            const auto zz1 = detail::permuted<cplx>(req.z1, p1);
            cplx t = upper;
            for (int a = 1; a <= k1; ++a) {
                const int Ia = tilde[static_cast<std::size_t>(a - 1)];
                t *= detail::row_factor(th, zz1[static_cast<std::size_t>(a - 1)], m, Ia, -l12 + double(2 * a - 1 - Ia) * g,
                                        0.0, -g);
            }
            sum += t * detail::cross_ratio(th, zz1, g);
        } while (std::next_permutation(p1.begin(), p1.end()));
    } while (std::next_permutation(p2.begin(), p2.end()));
    return pre * sum;
}

/// Spectral-independent rescaling factor relating E-bar to E at L1 = 0.
inline cplx overall_factor_62(const ThetaContext &ctx, const FMLabel &lb, const DynParams &params)
{
    const detail::ThetaEval th{ctx};
    const cplx g = params.gamma;
    const auto i2 = lb.colors2();
    cplx f{1.0, 0.0};
    for (int a = 0; a < lb.k1() + lb.k2(); ++a) {
        f /= th.denom(g, "[gamma]");
    }
    for (int a = 1; a <= lb.k1(); ++a) {
        f *= th(detail::lam(params, 1) - detail::lam(params, 2) + double(1 - a) * g);
    }
    for (int a = 1; a <= lb.k2(); ++a) {
        const int Ia = lb.I2()[static_cast<std::size_t>(a - 1)];
        const int col = i2[static_cast<std::size_t>(Ia - 1)];
        f *= th(detail::lam(params, col) - detail::lam(params, 3) + double(1 - color_count(lb, Ia, col)) * g);
    }
    return f;
}

/// E-bar at L1 = 0, evaluated directly as a double symmetrization without denominators.
inline cplx eval_E_bar(const ThetaContext &ctx, const FMLattice &req)
{
    req.validate();
    const FMLabel &lb = req.label;
    if (lb.L1() != 0) {
        throw precondition_error("eval_E_bar: needs L1 = 0");
    }
    const detail::ThetaEval th{ctx};
    const cplx g = req.params.gamma;
    const cplx l12 = detail::lam(req.params, 1) - detail::lam(req.params, 2);
    const cplx l3 = detail::lam(req.params, 3);
    const auto tilde = induced_set(lb);
    const auto i2 = lb.colors2();
    auto p1 = detail::identity_perm(static_cast<std::size_t>(lb.k1()));
    auto p2 = detail::identity_perm(static_cast<std::size_t>(lb.k2()));
    cplx sum{0.0, 0.0};
    do {
        const auto zz2 = detail::permuted<cplx>(req.z2, p2);
        cplx upper{1.0, 0.0};
        for (int a = 1; a <= lb.k2(); ++a) {
            const int Ia = lb.I2()[static_cast<std::size_t>(a - 1)];
            const int col = i2[static_cast<std::size_t>(Ia - 1)];
            const cplx centre = l3 - detail::lam(req.params, col) + double(a - Ia + color_count(lb, Ia, col)) * g;
            upper *= detail::row_factor(th, zz2[static_cast<std::size_t>(a - 1)], req.w2, Ia, centre, g, 0.0);
        }
        upper *= detail::cross_ratio(th, zz2, g);
        do {
            const auto zz1 = detail::permuted<cplx>(req.z1, p1);
            cplx t = upper;
            for (int a = 1; a <= lb.k1(); ++a) {
                const int Ia = tilde[static_cast<std::size_t>(a - 1)];
                t *= detail::row_factor(th, zz1[static_cast<std::size_t>(a - 1)], zz2, Ia, -l12 + double(2 * a - Ia) * g, g,
                                        0.0);
            }
            sum += t * detail::cross_ratio(th, zz1, g);
        } while (std::next_permutation(p1.begin(), p1.end()));
    } while (std::next_permutation(p2.begin(), p2.end()));
    return sum;
}

/// Right-hand factor of the base recursion at w_L = z_k - gamma (I_k = L).
inline cplx recursion_factor_base(const ThetaContext &ctx, const BaseLattice &req)
{
    req.validate();
    const detail::ThetaEval th{ctx};
    const int k = req.label.k();
    const int L = req.label.L;
    if (k == 0 || req.label.positions.back() != L) {
        throw precondition_error("recursion_factor_base: needs I_k = L");
    }
    const cplx g = req.params.gamma;
    const cplx l12 = detail::lam(req.params, 1) - detail::lam(req.params, 2);
    const cplx zk = req.z.back();
    cplx f = th(g) * th(-l12 + double(2 * k - L) * g) / th.denom(l12 + double(1 - k) * g, "[lambda_1 - lambda_2 + (1-k) gamma]");
    for (int j = 0; j + 1 < k; ++j) {
        f *= th(req.z[static_cast<std::size_t>(j)] - zk + g);
    }
    for (int j = 0; j + 1 < L; ++j) {
        f *= th(zk - req.w[static_cast<std::size_t>(j)]);
    }
    return f;
}

/// prod_j [z_j - w_L - gamma], the peeled column when I_k != L.
inline cplx peel_factor_base(const ThetaContext &ctx, const BaseLattice &req)
{
    req.validate();
    cplx f{1.0, 0.0};
    for (cplx zj : req.z) {
        f *= theta_additive(ctx, zj - req.w.back() - req.params.gamma);
    }
    return f;
}

/// W_{L,1}(z | w | L) in closed form.
inline cplx initial_value_base(const ThetaContext &ctx, const BaseLattice &req)
{
    req.validate();
    if (req.label.k() != 1 || req.label.positions[0] != req.label.L) {
        throw precondition_error("initial_value_base: needs k = 1 and I_1 = L");
    }
    const detail::ThetaEval th{ctx};
    const cplx g = req.params.gamma;
    const cplx l12 = detail::lam(req.params, 1) - detail::lam(req.params, 2);
    const int L = req.label.L;
    const cplx z = req.z[0];
    cplx f = th(g) * th(z - req.w.back() - l12 + double(1 - L) * g) / th.denom(l12, "[lambda_1 - lambda_2]");
    for (int j = 0; j + 1 < L; ++j) {
        f *= th(z - req.w[static_cast<std::size_t>(j)]);
    }
    return f;
}

/// Column factor g_ell(w_L) of the base partition function.
inline cplx g_ell(const ThetaContext &ctx, const BaseLattice &req, int ell)
{
    req.validate();
    const int k = req.label.k();
    const int L = req.label.L;
    if (ell < 1 || ell > k) {
        throw domain_error("g_ell: ell outside 1..k");
    }
    const cplx g = req.params.gamma;
    const cplx l12 = detail::lam(req.params, 1) - detail::lam(req.params, 2);
    const cplx wL = req.w.back();
    cplx f{1.0, 0.0};
    for (int j = 1; j <= k; ++j) {
        const cplx d = req.z[static_cast<std::size_t>(j - 1)] - wL;
        if (j < ell) {
            f *= theta_additive(ctx, d);
        } else if (j == ell) {
            f *= theta_additive(ctx, d - l12 + double(2 * k - L - ell) * g);
        } else {
            f *= theta_additive(ctx, d - g);
        }
    }
    return f;
}

/// w_L-dependent summand factor f_sigma of E_{L,k}.
inline cplx f_sigma(const ThetaContext &ctx, const BaseLattice &req, std::span<const std::size_t> sigma)
{
    req.validate();
    const int k = req.label.k();
    const int L = req.label.L;
    const cplx g = req.params.gamma;
    const cplx l12 = detail::lam(req.params, 1) - detail::lam(req.params, 2);
    const cplx wL = req.w.back();
    cplx f = theta_additive(ctx, req.z[sigma[static_cast<std::size_t>(k - 1)]] - wL - l12 + double(2 * k - 1 - L) * g);
    for (int i = 0; i + 1 < k; ++i) {
        f *= theta_additive(ctx, req.z[sigma[static_cast<std::size_t>(i)]] - wL - g);
    }
    return f;
}

namespace detail
{

inline void require_colored_corner(const FMLabel &lb, const char *who)
{
    if (lb.k2() == 0 || lb.I2().back() != lb.L2()) {
        throw precondition_error(std::string(who) + ": needs i^(2)_{L2} in {1,2}");
    }
}

} // namespace detail

/// Frozen-part factor of the FM recursion at w2_{L2} = z2_{k2} - gamma.
inline cplx recursion_factor_fm(const ThetaContext &ctx, const FMLattice &req)
{
    req.validate();
    const FMLabel &lb = req.label;
    detail::require_colored_corner(lb, "recursion_factor_fm");
    const detail::ThetaEval th{ctx};
    const int k2 = lb.k2();
    const int L2 = lb.L2();
    const int col = lb.colors2().back();
    const int c = color_count(lb, L2, col);
    const cplx g = req.params.gamma;
    const cplx dl = detail::lam(req.params, col) - detail::lam(req.params, 3);
    const cplx zk = req.z2.back();
    cplx f = th(g) * th(-dl + double(k2 - L2 + c) * g) / th.denom(dl + double(1 - c) * g, "[lambda_i - lambda_3 + (1-c) gamma]");
    for (int j = 0; j + 1 < k2; ++j) {
        f *= th(req.z2[static_cast<std::size_t>(j)] - zk + g);
    }
    for (int j = 0; j + 1 < L2; ++j) {
        f *= th(zk - req.w2[static_cast<std::size_t>(j)]);
    }
    return f;
}

/// prod_j [z2_j - w2_{L2} - gamma], the peeled upper column when i^(2)_{L2} = 3.
inline cplx peel_factor_fm(const ThetaContext &ctx, const FMLattice &req)
{
    req.validate();
    cplx f{1.0, 0.0};
    for (cplx zj : req.z2) {
        f *= theta_additive(ctx, zj - req.w2.back() - req.params.gamma);
    }
    return f;
}

/// Weight of the frozen upper region for k2 = 1 (first power of the central factor).
inline cplx upper_region_factor(const ThetaContext &ctx, const FMLattice &req)
{
    req.validate();
    const FMLabel &lb = req.label;
    detail::require_colored_corner(lb, "upper_region_factor");
    if (lb.k2() != 1) {
        throw precondition_error("upper_region_factor: needs k2 = 1");
    }
    const detail::ThetaEval th{ctx};
    const int L2 = lb.L2();
    const int col = lb.colors2().back();
    const cplx g = req.params.gamma;
    const cplx dl = detail::lam(req.params, col) - detail::lam(req.params, 3);
    const cplx z = req.z2[0];
    cplx f = th(g) * th(z - req.w2.back() - dl - double(L2 - 1) * g) / th.denom(dl, "[lambda_i - lambda_3]");
    for (int j = 0; j + 1 < L2; ++j) {
        f *= th(z - req.w2[static_cast<std::size_t>(j)]);
    }
    return f;
}

/// Base lattice left after freezing the upper region (k2 = 1): columns {z2_1, w1}.
inline BaseLattice initial_base_lattice(const FMLattice &req)
{
    const FMLabel &lb = req.label;
    IndexSet pos;
    for (int x : lb.I1()) {
        pos.push_back(x + 1 - lb.L2());
    }
    std::vector<cplx> w{req.z2.at(0)};
    w.insert(w.end(), req.w1.begin(), req.w1.end());
    DynParams p{{req.params.lambda[0], req.params.lambda[1]}, req.params.gamma};
    return BaseLattice{req.z1, std::move(w), std::move(p), BaseLabel(lb.L1() + 1, std::move(pos))};
}

/// Upper-column factor h_ell(w2_{L2}).
inline cplx h_ell(const ThetaContext &ctx, const FMLattice &req, int ell)
{
    req.validate();
    const FMLabel &lb = req.label;
    detail::require_colored_corner(lb, "h_ell");
    const int k2 = lb.k2();
    const int L2 = lb.L2();
    if (ell < 1 || ell > k2) {
        throw domain_error("h_ell: ell outside 1..k2");
    }
    const int col = lb.colors2().back();
    const cplx g = req.params.gamma;
    const cplx dl = detail::lam(req.params, col) - detail::lam(req.params, 3);
    const cplx w = req.w2.back();
    const int shift = color_count(lb, L2, col) - color_count(lb, L2, 3) - ell;
    cplx f{1.0, 0.0};
    for (int j = 1; j <= k2; ++j) {
        const cplx d = req.z2[static_cast<std::size_t>(j - 1)] - w;
        if (j < ell) {
            f *= theta_additive(ctx, d);
        } else if (j == ell) {
            f *= theta_additive(ctx, d - dl + double(shift) * g);
        } else {
            f *= theta_additive(ctx, d - g);
        }
    }
    return f;
}

/// w2_{L2}-dependent summand factor f_sigma2 of E.
inline cplx f_sigma2(const ThetaContext &ctx, const FMLattice &req, std::span<const std::size_t> sigma2)
{
    req.validate();
    const FMLabel &lb = req.label;
    detail::require_colored_corner(lb, "f_sigma2");
    const int k2 = lb.k2();
    const int L2 = lb.L2();
    const int col = lb.colors2().back();
    const cplx g = req.params.gamma;
    const cplx dl = detail::lam(req.params, col) - detail::lam(req.params, 3);
    const cplx w = req.w2.back();
    cplx f = theta_additive(ctx, req.z2[sigma2[static_cast<std::size_t>(k2 - 1)]] - w - dl +
                                     double(k2 - L2 - 1 + color_count(lb, L2, col)) * g);
    for (int a = 0; a + 1 < k2; ++a) {
        f *= theta_additive(ctx, req.z2[sigma2[static_cast<std::size_t>(a)]] - w - g);
    }
    return f;
}

} // namespace ellfm

#endif
