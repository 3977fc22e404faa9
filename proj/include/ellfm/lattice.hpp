#ifndef ELLFM_LATTICE_HPP
#define ELLFM_LATTICE_HPP

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "ellfm/errors.hpp"
#include "ellfm/labels.hpp"
#include "ellfm/lattice_spec.hpp"
#include "ellfm/rmatrix.hpp"

namespace ellfm
{

/// Default cap on weighted terms generated by one contraction.
inline constexpr std::size_t default_contraction_budget = 4782969; // 3^14

/// Boundary colors of a rectangular region; rows are indexed 1..k from the top.
struct RegionBoundary
{
    std::vector<int> aux_in;
    std::vector<int> aux_out;
    std::vector<int> site_in;
    std::vector<int> site_out;
};

namespace detail
{

using StateMap = std::map<std::vector<int>, cplx>;

// Sums one row over its internal auxiliary edges. Each vertex sees the height of its
// northwest face: the row height lowered by the outgoing site states to its left.
struct RowTransfer
{
    const RContext &ctx;
    cplx z;
    std::span<const cplx> cols;
    int aux_out;
    std::span<const int> site_in;
    StateMap &out;
    std::size_t &terms;
    std::size_t budget;
    std::vector<int> outs;

    void run(std::size_t j, int aux, const DynParams &lam, cplx amp)
    {
        if (j == cols.size()) {
            if (aux == aux_out) {
                if (++terms > budget) {
                    throw size_error("contraction exceeds the term budget");
                }
                out[outs] += amp;
            }
            return;
        }
        const int n = ctx.rank();
        for (int ao = 1; ao <= n; ++ao) {
            for (int so = 1; so <= n; ++so) {
                if (entry_kind({aux, site_in[j], ao, so}) == EntryKind::forbidden) {
                    continue;
                }
                const cplx v = r_entry(ctx, z - cols[j], lam, aux, site_in[j], ao, so);
                outs.push_back(so);
                run(j + 1, ao, shift_lambda(lam, so), amp * v);
                outs.pop_back();
            }
        }
    }
};

inline void check_region(const RContext &ctx, std::span<const cplx> rows, std::span<const cplx> cols,
                         const RegionBoundary &b)
{
    if (b.aux_in.size() != rows.size() || b.aux_out.size() != rows.size() || b.site_in.size() != cols.size() ||
        b.site_out.size() != cols.size()) {
        throw domain_error("region: boundary lengths do not match the spectral data");
    }
    for (const auto *v : {&b.aux_in, &b.aux_out, &b.site_in, &b.site_out}) {
        for (int c : *v) {
            if (c < 1 || c > ctx.rank()) {
                throw domain_error("region: boundary color outside 1..rank");
            }
        }
    }
}

} // namespace detail

/// <aux_out|<site_out| T_a(z | sites | lambda) |aux_in>|site_in> for T_a = R_{aL} ... R_{a1}.
inline cplx monodromy_element(const RContext &ctx, cplx z, std::span<const cplx> sites, const DynParams &params,
                              int aux_in, int aux_out, std::span<const int> site_in, std::span<const int> site_out)
{
    if (site_in.size() != sites.size() || site_out.size() != sites.size()) {
        throw domain_error("monodromy_element: length mismatch");
    }
    ctx.check_colors({aux_in, aux_out, 1, 1});
    detail::StateMap out;
    std::size_t terms = 0;
    detail::RowTransfer row{ctx, z, sites, aux_out, site_in, out, terms, default_contraction_budget, {}};
    row.run(0, aux_in, params, cplx{1.0, 0.0});
    const auto it = out.find(std::vector<int>(site_out.begin(), site_out.end()));
    return it == out.end() ? cplx{0.0, 0.0} : it->second;
}

/// Exact state sum of a region whose northwest face has height `nw`.
///
/// Rows act on the site kets from the bottom row up. Row m starts at height
/// nw - gamma * sum_{r<m} e(aux_in_r). Internal states are kept in an ordered map, so the
/// summation order is fixed.
inline cplx contract_region(const RContext &ctx, std::span<const cplx> rows, std::span<const cplx> cols,
                            const RegionBoundary &boundary, const DynParams &nw,
                            std::size_t budget = default_contraction_budget)
{
    detail::check_region(ctx, rows, cols, boundary);
    detail::StateMap states;
    states[boundary.site_in] = cplx{1.0, 0.0};
    std::size_t terms = 0;
    for (std::size_t m = rows.size(); m-- > 0;) {
        DynParams row_height = nw;
        for (std::size_t r = 0; r < m; ++r) {
            row_height = shift_lambda(row_height, boundary.aux_in[r]);
        }
        detail::StateMap next;
        for (const auto &[sites, amp] : states) {
            detail::RowTransfer row{ctx, rows[m], cols, boundary.aux_out[m], sites, next, terms, budget, {}};
            row.run(0, boundary.aux_in[m], row_height, amp);
        }
        states = std::move(next);
        if (states.empty()) {
            return {0.0, 0.0};
        }
    }
    const auto it = states.find(boundary.site_out);
    return it == states.end() ? cplx{0.0, 0.0} : it->second;
}

/// W_{L,k}: aux 1 -> 2 on every row, sites 2 -> i^(1). Empty lattice gives 1.
inline cplx brute_force_base(const RContext &ctx, const BaseLattice &lat,
                             std::size_t budget = default_contraction_budget)
{
    lat.validate();
    const int k = lat.label.k();
    RegionBoundary b{std::vector<int>(static_cast<std::size_t>(k), 1), std::vector<int>(static_cast<std::size_t>(k), 2),
                     std::vector<int>(static_cast<std::size_t>(lat.label.L), 2), lat.label.colors()};
    return contract_region(ctx, lat.z, lat.w, b, lat.params, budget);
}

/// Two-region state sum, summed over the intermediate colors l in {1,2}^{k2}.
inline cplx brute_force_fm(const RContext &ctx, const FMLattice &lat, std::size_t budget = default_contraction_budget)
{
    lat.validate();
    if (ctx.rank() != 3) {
        throw domain_error("brute_force_fm: needs a rank-3 context");
    }
    const FMLabel &lb = lat.label;
    const auto k1 = static_cast<std::size_t>(lb.k1());
    const auto k2 = static_cast<std::size_t>(lb.k2());
    const auto i2 = lb.colors2();
    const auto i1 = lb.colors1();
    std::vector<cplx> lower_cols = lat.z2;
    lower_cols.insert(lower_cols.end(), lat.w1.begin(), lat.w1.end());

    cplx total{0.0, 0.0};
    std::vector<int> ell(k2, 1);
    while (true) {
        RegionBoundary upper{ell, std::vector<int>(k2, 3), std::vector<int>(static_cast<std::size_t>(lb.L2()), 3), i2};
        const cplx up = contract_region(ctx, lat.z2, lat.w2, upper, lat.params, budget);
        if (up != cplx{0.0, 0.0}) {
            std::vector<int> lower_out = ell;
            lower_out.insert(lower_out.end(), i1.begin(), i1.end());
            RegionBoundary lower{std::vector<int>(k1, 1), std::vector<int>(k1, 2), std::vector<int>(lower_cols.size(), 2),
                                 std::move(lower_out)};
            total += up * contract_region(ctx, lat.z1, lower_cols, lower, lat.params, budget);
        }
        std::size_t p = 0;
        while (p < k2 && ell[p] == 2) {
            ell[p++] = 1;
        }
        if (p == k2) {
            break;
        }
        ell[p] = 2;
    }
    return total;
}

using ColorCounts = std::array<int, 3>;

/// Height of the northwest face of vertex (m, j) from conservation:
/// lambda - gamma (A + S_j - E_{m,j}), where A counts all incoming auxiliary colors, S_j the
/// incoming site colors left of column j, and E_{m,j} the auxiliary colors entering column j
/// from rows m and below.
inline DynParams face_height(const DynParams &nw, const ColorCounts &A, const ColorCounts &S, const ColorCounts &E)
{
    DynParams p = nw;
    for (std::size_t c = 0; c < p.lambda.size() && c < 3; ++c) {
        p.lambda[c] -= p.gamma * double(A[c] + S[c] - E[c]);
    }
    return p;
}

namespace detail
{

inline ColorCounts counts_of(std::span<const int> colors)
{
    ColorCounts c{0, 0, 0};
    for (int x : colors) {
        ++c[static_cast<std::size_t>(x - 1)];
    }
    return c;
}

// Incoming auxiliary counts derived from the boundary: site_out + aux_out - site_in.
inline ColorCounts aux_in_counts(const RegionBoundary &b)
{
    ColorCounts a = counts_of(b.site_out);
    const ColorCounts ao = counts_of(b.aux_out);
    const ColorCounts si = counts_of(b.site_in);
    for (std::size_t c = 0; c < 3; ++c) {
        a[c] += ao[c] - si[c];
    }
    return a;
}

// Product of the weights in column j (1-based) when the auxiliary colors entering and leaving
// it are known for every row. The site color is propagated upward from the bottom.
inline cplx column_product(const RContext &ctx, std::span<const cplx> rows, cplx w, const DynParams &nw,
                           const RegionBoundary &b, int j, std::span<const int> left, std::span<const int> right)
{
    const ColorCounts A = aux_in_counts(b);
    const ColorCounts S = counts_of(std::span<const int>(b.site_in).first(static_cast<std::size_t>(j - 1)));
    ColorCounts E{0, 0, 0};
    int site = b.site_in[static_cast<std::size_t>(j - 1)];
    cplx prod{1.0, 0.0};
    for (std::size_t m = rows.size(); m-- > 0;) {
        ++E[static_cast<std::size_t>(left[m] - 1)];
        const int above = (left[m] == right[m]) ? site : left[m];
        if (entry_kind({left[m], site, right[m], above}) == EntryKind::forbidden) {
            throw precondition_error("frozen column: configuration violates the ice rule");
        }
        prod *= r_entry(ctx, rows[m] - w, face_height(nw, A, S, E), left[m], site, right[m], above);
        site = above;
    }
    if (site != b.site_out[static_cast<std::size_t>(j - 1)]) {
        throw precondition_error("frozen column: top color does not match the boundary");
    }
    return prod;
}

inline RegionBoundary base_boundary(const BaseLattice &lat)
{
    const auto k = static_cast<std::size_t>(lat.label.k());
    return {std::vector<int>(k, 1), std::vector<int>(k, 2), std::vector<int>(static_cast<std::size_t>(lat.label.L), 2),
            lat.label.colors()};
}

inline RegionBoundary upper_boundary(const FMLattice &lat)
{
    const auto k2 = static_cast<std::size_t>(lat.label.k2());
    return {std::vector<int>(k2, 1), std::vector<int>(k2, 3), std::vector<int>(static_cast<std::size_t>(lat.label.L2()), 3),
            lat.label.colors2()};
}

} // namespace detail

/// Last-column weight product of W_{L,k} when row ell carries color 1 into column L (I_k = L).
inline cplx frozen_column_factor(const RContext &ctx, const BaseLattice &lat, int ell)
{
    lat.validate();
    const int k = lat.label.k();
    if (k == 0 || lat.label.positions.back() != lat.label.L) {
        throw precondition_error("frozen_column_factor: needs I_k = L");
    }
    if (ell < 1 || ell > k) {
        throw domain_error("frozen_column_factor: ell outside 1..k");
    }
    std::vector<int> left(static_cast<std::size_t>(k), 2);
    left[static_cast<std::size_t>(ell - 1)] = 1;
    const std::vector<int> right(static_cast<std::size_t>(k), 2);
    return detail::column_product(ctx, lat.z, lat.w.back(), lat.params, detail::base_boundary(lat), lat.label.L, left,
                                  right);
}

/// Last upper-column weight product when row ell carries i^(2)_{L2} into column L2.
inline cplx frozen_column_factor(const RContext &ctx, const FMLattice &lat, int ell)
{
    lat.validate();
    const FMLabel &lb = lat.label;
    const int k2 = lb.k2();
    if (k2 == 0 || lb.I2().back() != lb.L2()) {
        throw precondition_error("frozen_column_factor: needs i^(2)_{L2} in {1,2}");
    }
    if (ell < 1 || ell > k2) {
        throw domain_error("frozen_column_factor: ell outside 1..k2");
    }
    const int c = lb.colors2().back();
    std::vector<int> left(static_cast<std::size_t>(k2), 3);
    left[static_cast<std::size_t>(ell - 1)] = c;
    const std::vector<int> right(static_cast<std::size_t>(k2), 3);
    return detail::column_product(ctx, lat.z2, lat.w2.back(), lat.params, detail::upper_boundary(lat), lb.L2(), left,
                                  right);
}

namespace detail
{

// Bottom row carries `carry` through columns 1..L-1 and exchanges it at column L; the rows
// above pass through column L. Evaluated at w_L = z_k - gamma.
inline cplx corner_product(const RContext &ctx, std::span<const cplx> rows, std::span<const cplx> cols,
                           const DynParams &nw, const RegionBoundary &b, int carry, int filler)
{
    const std::size_t k = rows.size();
    const std::size_t L = cols.size();
    const cplx w_last = rows[k - 1] - nw.gamma;
    const ColorCounts A = aux_in_counts(b);
    cplx prod{1.0, 0.0};
    // bottom row, E_{k,j} = e(carry) for every column
    ColorCounts E{0, 0, 0};
    ++E[static_cast<std::size_t>(carry - 1)];
    for (std::size_t j = 0; j + 1 < L; ++j) {
        const ColorCounts S = counts_of(std::span<const int>(b.site_in).first(j));
        const int s = b.site_in[j];
        prod *= r_entry(ctx, rows[k - 1] - cols[j], face_height(nw, A, S, E), carry, s, carry, s);
    }
    const ColorCounts S = counts_of(std::span<const int>(b.site_in).first(L - 1));
    prod *= r_entry(ctx, rows[k - 1] - w_last, face_height(nw, A, S, E), carry, b.site_in[L - 1], b.site_in[L - 1], carry);
    for (std::size_t m = k - 1; m-- > 0;) {
        ++E[static_cast<std::size_t>(filler - 1)];
        prod *= r_entry(ctx, rows[m] - w_last, face_height(nw, A, S, E), filler, carry, filler, carry);
    }
    return prod;
}

} // namespace detail

/// Frozen bottom row and last column of W_{L,k} at w_L = z_k - gamma (I_k = L).
inline cplx frozen_corner_factor(const RContext &ctx, const BaseLattice &lat)
{
    lat.validate();
    if (lat.label.k() == 0 || lat.label.positions.back() != lat.label.L) {
        throw precondition_error("frozen_corner_factor: needs I_k = L");
    }
    return detail::corner_product(ctx, lat.z, lat.w, lat.params, detail::base_boundary(lat), 1, 2);
}

/// Frozen bottom row and last column of the upper region at w2_{L2} = z2_{k2} - gamma.
inline cplx frozen_corner_factor(const RContext &ctx, const FMLattice &lat)
{
    lat.validate();
    const FMLabel &lb = lat.label;
    if (lb.k2() == 0 || lb.I2().back() != lb.L2()) {
        throw precondition_error("frozen_corner_factor: needs i^(2)_{L2} in {1,2}");
    }
    return detail::corner_product(ctx, lat.z2, lat.w2, lat.params, detail::upper_boundary(lat), lb.colors2().back(), 3);
}

/// Weight of the fully frozen upper region when k2 = 1 and i^(2)_{L2} in {1,2}.
inline cplx frozen_upper_region(const RContext &ctx, const FMLattice &lat)
{
    lat.validate();
    const FMLabel &lb = lat.label;
    if (lb.k2() != 1 || lb.I2().back() != lb.L2()) {
        throw precondition_error("frozen_upper_region: needs k2 = 1 and i^(2)_{L2} in {1,2}");
    }
    const RegionBoundary b = detail::upper_boundary(lat);
    const int c = lb.colors2().back();
    const ColorCounts A = detail::aux_in_counts(b);
    ColorCounts E{0, 0, 0};
    ++E[static_cast<std::size_t>(c - 1)];
    cplx prod{1.0, 0.0};
    const auto L2 = static_cast<std::size_t>(lb.L2());
    for (std::size_t j = 0; j < L2; ++j) {
        const ColorCounts S = detail::counts_of(std::span<const int>(b.site_in).first(j));
        const bool last = j + 1 == L2;
        prod *= r_entry(ctx, lat.z2[0] - lat.w2[j], face_height(lat.params, A, S, E), c, 3, last ? 3 : c, last ? c : 3);
    }
    return prod;
}

} // namespace ellfm

#endif
