#ifndef ELLFM_RMATRIX_HPP
#define ELLFM_RMATRIX_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <complex>
#include <cstddef>
#include <vector>

#include "ellfm/errors.hpp"
#include "ellfm/theta.hpp"

namespace ellfm
{

/// Dynamical variable lambda (one component per color) and the step gamma.
struct DynParams
{
    std::vector<cplx> lambda;
    cplx gamma{0.0, 0.0};
};

/// lambda with component `state` lowered by gamma.
inline DynParams shift_lambda(DynParams params, int state)
{
    if (state < 1 || state > static_cast<int>(params.lambda.size())) {
        throw domain_error("shift_lambda: state outside 1..n");
    }
    params.lambda[static_cast<std::size_t>(state - 1)] -= params.gamma;
    return params;
}

/// Matrix element <a_out|<b_out| R |a_in>|b_in>; a is the auxiliary (first) space.
struct WeightKey
{
    int a_in = 1;
    int b_in = 1;
    int a_out = 1;
    int b_out = 1;

    auto operator<=>(const WeightKey &) const = default;
};

enum class EntryKind
{
    forbidden,
    diagonal,
    pass,
    exchange
};

inline EntryKind entry_kind(const WeightKey &k)
{
    if (k.a_in == k.b_in) {
        return (k.a_out == k.a_in && k.b_out == k.b_in) ? EntryKind::diagonal : EntryKind::forbidden;
    }
    if (k.a_out == k.a_in && k.b_out == k.b_in) {
        return EntryKind::pass;
    }
    if (k.a_out == k.b_in && k.b_out == k.a_in) {
        return EntryKind::exchange;
    }
    return EntryKind::forbidden;
}

/// Nonzero entries at rank n: n diagonal, n(n-1) pass and n(n-1) exchange weights.
inline std::vector<WeightKey> nonzero_entries(int rank)
{
    std::vector<WeightKey> out;
    for (int a = 1; a <= rank; ++a) {
        for (int b = 1; b <= rank; ++b) {
            for (int c = 1; c <= rank; ++c) {
                for (int d = 1; d <= rank; ++d) {
                    const WeightKey k{a, b, c, d};
                    if (entry_kind(k) != EntryKind::forbidden) {
                        out.push_back(k);
                    }
                }
            }
        }
    }
    return out;
}

/// Rank, theta context and per-entry multipliers of the dynamical R-matrix.
///
/// The multipliers are all 1 for the genuine table; `perturbed` returns a copy with one
/// entry rescaled, which the mutation checks use.
class RContext
{
public:
    RContext(int rank, ThetaContext theta) : m_rank(rank), m_theta(std::move(theta))
    {
        if (rank < 2 || rank > 3) {
            throw domain_error("RContext: rank must be 2 or 3");
        }
        m_mult.fill(cplx{1.0, 0.0});
    }

    int rank() const noexcept { return m_rank; }
    const ThetaContext &theta() const noexcept { return m_theta; }

    cplx multiplier(const WeightKey &k) const { return m_mult[slot(k)]; }

    RContext perturbed(const WeightKey &k, cplx factor) const
    {
        check_colors(k);
        if (entry_kind(k) == EntryKind::forbidden) {
            throw domain_error("RContext::perturbed: entry is forbidden by the ice rule");
        }
        RContext copy = *this;
        copy.m_mult[slot(k)] *= factor;
        return copy;
    }

    void check_colors(const WeightKey &k) const
    {
        for (int c : {k.a_in, k.b_in, k.a_out, k.b_out}) {
            if (c < 1 || c > m_rank) {
                throw domain_error("R-matrix: color outside 1..rank");
            }
        }
    }

private:
    static std::size_t slot(const WeightKey &k)
    {
        return static_cast<std::size_t>((((k.a_in - 1) * 3 + (k.b_in - 1)) * 3 + (k.a_out - 1)) * 3 + (k.b_out - 1));
    }

    int m_rank;
    ThetaContext m_theta;
    std::array<cplx, 81> m_mult{};
};

namespace detail
{

inline cplx guarded_denominator(const ThetaContext &th, cplx arg)
{
    const cplx d = theta_additive(th, arg);
    if (std::abs(d) < 1e-12 * th.scale()) {
        throw pole_error("R-matrix: theta denominator below pole threshold");
    }
    return d;
}

} // namespace detail

/// Vertex weight of R(z, lambda).
///
///   diagonal  (a, a -> a, a):  [z - gamma]
///   pass      (a, b -> a, b):  [z][l_ab + gamma] / [l_ab]
///   exchange  (a, b -> b, a):  -[gamma][z + l_ba] / [l_ba]
///
/// with l_ab = lambda_a - lambda_b, a the auxiliary color.
inline cplx r_entry(const RContext &ctx, cplx z, const DynParams &params, int a_in, int b_in, int a_out, int b_out)
{
    const WeightKey key{a_in, b_in, a_out, b_out};
    ctx.check_colors(key);
    if (static_cast<int>(params.lambda.size()) < ctx.rank()) {
        throw domain_error("r_entry: lambda has fewer components than the rank");
    }
    const ThetaContext &th = ctx.theta();
    const cplx g = params.gamma;
    auto lam = [&](int c) { return params.lambda[static_cast<std::size_t>(c - 1)]; };
    switch (entry_kind(key)) {
    case EntryKind::forbidden:
        return {0.0, 0.0};
    case EntryKind::diagonal:
        return ctx.multiplier(key) * theta_additive(th, z - g);
    case EntryKind::pass: {
        const cplx l = lam(a_in) - lam(b_in);
        return ctx.multiplier(key) * theta_additive(th, z) * theta_additive(th, l + g) / detail::guarded_denominator(th, l);
    }
    case EntryKind::exchange: {
        const cplx l = lam(b_in) - lam(a_in);
        return -ctx.multiplier(key) * theta_additive(th, g) * theta_additive(th, z + l) / detail::guarded_denominator(th, l);
    }
    }
    return {0.0, 0.0};
}

namespace detail
{

using Dense = std::vector<cplx>;

inline Dense matmul(const Dense &a, const Dense &b, std::size_t dim)
{
    Dense c(dim * dim, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t k = 0; k < dim; ++k) {
            const cplx aik = a[i * dim + k];
            if (aik == cplx{0.0, 0.0}) {
                continue;
            }
            for (std::size_t j = 0; j < dim; ++j) {
                c[i * dim + j] += aik * b[k * dim + j];
            }
        }
    }
    return c;
}

// R acting on tensor factors (i, j) of V^{(x)3}; lambda lowered by gamma h_shift when shift >= 0.
inline Dense embed_r(const RContext &ctx, cplx z, const DynParams &params, int i, int j, int shift)
{
    const int n = ctx.rank();
    const std::size_t dim = static_cast<std::size_t>(n * n * n);
    Dense m(dim * dim, cplx{0.0, 0.0});
    const int other = 3 - i - j;
    auto index = [n](const std::array<int, 3> &s) {
        return static_cast<std::size_t>(((s[0] - 1) * n + (s[1] - 1)) * n + (s[2] - 1));
    };
    std::array<int, 3> in{};
    for (in[0] = 1; in[0] <= n; ++in[0]) {
        for (in[1] = 1; in[1] <= n; ++in[1]) {
            for (in[2] = 1; in[2] <= n; ++in[2]) {
                const DynParams p = shift >= 0 ? shift_lambda(params, in[static_cast<std::size_t>(shift)]) : params;
                for (int ao = 1; ao <= n; ++ao) {
                    for (int bo = 1; bo <= n; ++bo) {
                        std::array<int, 3> out{};
                        out[static_cast<std::size_t>(i)] = ao;
                        out[static_cast<std::size_t>(j)] = bo;
                        out[static_cast<std::size_t>(other)] = in[static_cast<std::size_t>(other)];
                        const cplx v = r_entry(ctx, z, p, in[static_cast<std::size_t>(i)],
                                               in[static_cast<std::size_t>(j)], ao, bo);
                        m[index(out) * dim + index(in)] = v;
                    }
                }
            }
        }
    }
    return m;
}

} // namespace detail

/// Normalized max-entry residual of
///   R12(z12, l - g h3) R13(z13, l) R23(z23, l - g h1) = R23(z23, l) R13(z13, l - g h2) R12(z12, l).
inline double dybe_residual(const RContext &ctx, cplx z12, cplx z13, cplx z23, const DynParams &params)
{
    if (std::abs(z13 - (z12 + z23)) > 1e-12 * (1.0 + std::abs(z13))) {
        throw precondition_error("dybe_residual: z13 must equal z12 + z23");
    }
    const std::size_t dim = static_cast<std::size_t>(ctx.rank() * ctx.rank() * ctx.rank());
    using detail::embed_r;
    using detail::matmul;
    const auto lhs = matmul(matmul(embed_r(ctx, z12, params, 0, 1, 2), embed_r(ctx, z13, params, 0, 2, -1), dim),
                            embed_r(ctx, z23, params, 1, 2, 0), dim);
    const auto rhs = matmul(matmul(embed_r(ctx, z23, params, 1, 2, -1), embed_r(ctx, z13, params, 0, 2, 1), dim),
                            embed_r(ctx, z12, params, 0, 1, -1), dim);
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t k = 0; k < lhs.size(); ++k) {
        diff = std::max(diff, std::abs(lhs[k] - rhs[k]));
        scale = std::max({scale, std::abs(lhs[k]), std::abs(rhs[k])});
    }
    return scale > 0.0 ? diff / scale : diff;
}

} // namespace ellfm

#endif
