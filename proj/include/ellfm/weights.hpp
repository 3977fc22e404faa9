#ifndef ELLFM_WEIGHTS_HPP
#define ELLFM_WEIGHTS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <vector>

#include "ellfm/closed_forms.hpp"
#include "ellfm/errors.hpp"
#include "ellfm/labels.hpp"
#include "ellfm/lattice_spec.hpp"
#include "ellfm/theta.hpp"

namespace ellfm
{

enum class ThetaMode
{
    additive,
    multiplicative
};

/// [u].
struct AdditiveBackend
{
    const ThetaContext *ctx;
    cplx operator()(cplx u) const { return theta_additive(*ctx, u); }
};

/// vartheta(e^{2 pi i u}).
struct MultiplicativeBackend
{
    const ThetaContext *ctx;
    cplx operator()(cplx u) const { return theta_multiplicative(*ctx, std::exp(2.0 * pi * I * u)); }
};

/// Adds `delta` to the middle-case exponent of the factor (k, a); used by mutation checks.
struct PsiTweak
{
    int k = 1;
    int a = 1;
    int delta = 0;
};

/// Data of an elliptic weight function. Every multiplicative variable x is stored through its
/// additive coordinate u with x = e^{2 pi i u}.
struct WeightConfig
{
    int N = 0;
    /// I_1..I_N, a partition of {1..n}; each block increasing.
    std::vector<IndexSet> blocks;
    /// t[k-1] holds t^(k), of length lambda^(k); t[N-1] is z.
    std::vector<std::vector<cplx>> t;
    cplx h{0.0, 0.0};
    std::vector<cplx> mu;
    std::optional<PsiTweak> tweak;

    int n() const
    {
        int s = 0;
        for (const auto &b : blocks) {
            s += static_cast<int>(b.size());
        }
        return s;
    }

    /// lambda_k = |I_k|.
    std::vector<int> composition() const
    {
        std::vector<int> c;
        for (const auto &b : blocks) {
            c.push_back(static_cast<int>(b.size()));
        }
        return c;
    }

    /// lambda^(k) for k = 0..N.
    std::vector<int> partial_sums() const
    {
        std::vector<int> s{0};
        for (const auto &b : blocks) {
            s.push_back(s.back() + static_cast<int>(b.size()));
        }
        return s;
    }

    /// i^(k): the union of I_1..I_k in increasing order.
    IndexSet union_upto(int k) const
    {
        IndexSet u;
        for (int j = 0; j < k; ++j) {
            u.insert(u.end(), blocks[static_cast<std::size_t>(j)].begin(), blocks[static_cast<std::size_t>(j)].end());
        }
        std::sort(u.begin(), u.end());
        return u;
    }

    void validate() const
    {
        if (N < 1 || static_cast<int>(blocks.size()) != N) {
            throw label_error("weight config: need N blocks");
        }
        const int total = n();
        std::vector<int> seen(static_cast<std::size_t>(total) + 1, 0);
        for (const auto &b : blocks) {
            if (!detail::strictly_increasing(b)) {
                throw label_error("weight config: block not strictly increasing");
            }
            for (int x : b) {
                if (x < 1 || x > total || seen[static_cast<std::size_t>(x)]++) {
                    throw label_error("weight config: blocks do not partition 1..n");
                }
            }
        }
        const auto ps = partial_sums();
        if (static_cast<int>(t.size()) != N) {
            throw label_error("weight config: need N variable sets");
        }
        for (int k = 1; k <= N; ++k) {
            if (static_cast<int>(t[static_cast<std::size_t>(k - 1)].size()) != ps[static_cast<std::size_t>(k)]) {
                throw label_error("weight config: |t^(k)| must equal lambda^(k)");
            }
        }
        if (static_cast<int>(mu.size()) != N) {
            throw label_error("weight config: need N components of mu");
        }
    }
};

/// p_{I,j}(m) = |I_j intersect {1..m-1}|.
inline int p_count(const WeightConfig &cfg, int j, int m)
{
    if (j < 1 || j > cfg.N || m < 1 || m > cfg.n() + 1) {
        throw domain_error("p_count: index out of range");
    }
    const auto &b = cfg.blocks[static_cast<std::size_t>(j - 1)];
    return static_cast<int>(std::count_if(b.begin(), b.end(), [m](int x) { return x < m; }));
}

/// The block index j with i^(k)_a in I_j.
inline int j_of(const WeightConfig &cfg, int k, int a)
{
    const IndexSet u = cfg.union_upto(k);
    if (a < 1 || a > static_cast<int>(u.size())) {
        throw domain_error("j_of: a outside 1..lambda^(k)");
    }
    const int x = u[static_cast<std::size_t>(a - 1)];
    for (int j = 1; j <= cfg.N; ++j) {
        if (detail::contains(cfg.blocks[static_cast<std::size_t>(j - 1)], x)) {
            return j;
        }
    }
    throw label_error("j_of: element in no block");
}

/// 1 + p_{I,j(I,k,a)}(i^(k)_a) - p_{I,k+1}(i^(k)_a), plus any configured tweak.
inline int psi_exponent(const WeightConfig &cfg, int k, int a)
{
    const int ia = cfg.union_upto(k)[static_cast<std::size_t>(a - 1)];
    int e = 1 + p_count(cfg, j_of(cfg, k, a), ia) - p_count(cfg, k + 1, ia);
    if (cfg.tweak && cfg.tweak->k == k && cfg.tweak->a == a) {
        e += cfg.tweak->delta;
    }
    return e;
}

namespace detail
{

// Additive argument e h + mu_{k+1} - mu_j of a middle-case denominator.
inline cplx psi_argument(const WeightConfig &cfg, int k, int a)
{
    const int j = j_of(cfg, k, a);
    return double(psi_exponent(cfg, k, a)) * cfg.h + cfg.mu[static_cast<std::size_t>(k)] -
           cfg.mu[static_cast<std::size_t>(j - 1)];
}

// Sym_{t^(1)} ... Sym_{t^(N-1)} U, with or without the middle-case denominators.
template <typename T, typename Theta>
T symmetrized(const WeightConfig &cfg, Theta &&theta, bool with_denominators)
{
    cfg.validate();
    const int N = cfg.N;
    const auto ps = cfg.partial_sums();
    std::vector<IndexSet> ivec(static_cast<std::size_t>(N) + 1);
    for (int k = 1; k <= N; ++k) {
        ivec[static_cast<std::size_t>(k)] = cfg.union_upto(k);
    }
    std::vector<std::vector<cplx>> psi_arg(static_cast<std::size_t>(N));
    for (int k = 1; k < N; ++k) {
        for (int a = 1; a <= ps[static_cast<std::size_t>(k)]; ++a) {
            psi_arg[static_cast<std::size_t>(k)].push_back(psi_argument(cfg, k, a));
        }
    }
    std::vector<std::vector<std::size_t>> perm(static_cast<std::size_t>(N));
    for (int k = 1; k < N; ++k) {
        perm[static_cast<std::size_t>(k)] = identity_perm(static_cast<std::size_t>(ps[static_cast<std::size_t>(k)]));
    }

    auto summand = [&]() {
        T prod(1.0);
        auto var = [&](int k, int idx) -> cplx {
            const auto &tk = cfg.t[static_cast<std::size_t>(k - 1)];
            if (k == N) {
                return tk[static_cast<std::size_t>(idx - 1)];
            }
            return tk[perm[static_cast<std::size_t>(k)][static_cast<std::size_t>(idx - 1)]];
        };
        for (int k = 1; k < N; ++k) {
            const auto &ik = ivec[static_cast<std::size_t>(k)];
            const auto &ik1 = ivec[static_cast<std::size_t>(k + 1)];
            for (int a = 1; a <= ps[static_cast<std::size_t>(k)]; ++a) {
                const int ia = ik[static_cast<std::size_t>(a - 1)];
                const cplx ta = var(k, a);
                for (int c = 1; c <= ps[static_cast<std::size_t>(k + 1)]; ++c) {
                    const int ic = ik1[static_cast<std::size_t>(c - 1)];
                    const cplx x = var(k + 1, c) - ta;
                    if (ic < ia) {
                        prod *= theta(x + cfg.h);
                    } else if (ic > ia) {
                        prod *= theta(x);
                    } else {
                        const cplx arg = psi_arg[static_cast<std::size_t>(k)][static_cast<std::size_t>(a - 1)];
                        prod *= theta(x + arg);
                        if (with_denominators) {
                            prod /= theta(arg);
                        }
                    }
                }
                for (int b = a + 1; b <= ps[static_cast<std::size_t>(k)]; ++b) {
                    const cplx x = var(k, b) - ta;
                    prod *= theta(x + cfg.h);
                    prod /= theta(x);
                }
            }
        }
        return prod;
    };

    T total(0.0);
    // odometer over the product of symmetric groups, k = 1 fastest
    while (true) {
        total += summand();
        int k = 1;
        while (k < N && !std::next_permutation(perm[static_cast<std::size_t>(k)].begin(),
                                               perm[static_cast<std::size_t>(k)].end())) {
            ++k;
        }
        if (k >= N) {
            break;
        }
    }
    return total;
}

template <typename Theta>
cplx with_backend(const ThetaContext &ctx, ThetaMode mode, Theta &&f)
{
    if (mode == ThetaMode::additive) {
        return f(AdditiveBackend{&ctx});
    }
    return f(MultiplicativeBackend{&ctx});
}

} // namespace detail

/// W_I = vartheta(h)^{lambda^{1}} Sym ... Sym U_I.
inline cplx weight_function(const ThetaContext &ctx, const WeightConfig &cfg, ThetaMode mode)
{
    return detail::with_backend(ctx, mode, [&](auto theta) {
        const auto ps = cfg.partial_sums();
        const int lam1 = std::accumulate(ps.begin() + 1, ps.end() - 1, 0);
        const cplx th_h = theta(cfg.h);
        for (int k = 1; k < cfg.N; ++k) {
            for (int a = 1; a <= ps[static_cast<std::size_t>(k)]; ++a) {
                if (std::abs(theta(detail::psi_argument(cfg, k, a))) < 1e-12 * ctx.scale()) {
                    throw pole_error("weight_function: vanishing psi denominator");
                }
            }
        }
        return std::pow(th_h, lam1) * detail::symmetrized<cplx>(cfg, theta, true);
    });
}

/// psi_I(h, mu): product of all middle-case denominators.
inline cplx psi_I(const ThetaContext &ctx, const WeightConfig &cfg, ThetaMode mode)
{
    cfg.validate();
    return detail::with_backend(ctx, mode, [&](auto theta) {
        const auto ps = cfg.partial_sums();
        cplx p{1.0, 0.0};
        for (int k = 1; k < cfg.N; ++k) {
            for (int a = 1; a <= ps[static_cast<std::size_t>(k)]; ++a) {
                p *= theta(detail::psi_argument(cfg, k, a));
            }
        }
        return p;
    });
}

/// vartheta(h)^{-lambda^{1}} psi_I W_I, evaluated with the denominators cancelled termwise.
inline cplx normalized_weight(const ThetaContext &ctx, const WeightConfig &cfg, ThetaMode mode)
{
    return detail::with_backend(ctx, mode,
                                [&](auto theta) { return detail::symmetrized<cplx>(cfg, theta, false); });
}

/// Theta-factor tally: multiplication adds, division subtracts, addition requires agreement.
struct FactorCount
{
    int power = 0;
    bool empty = true;

    explicit FactorCount(double unit) : power(0), empty(unit == 0.0) {}
    FactorCount(int p, bool e) : power(p), empty(e) {}

    FactorCount &operator*=(const FactorCount &o)
    {
        power += o.power;
        return *this;
    }
    FactorCount &operator/=(const FactorCount &o)
    {
        power -= o.power;
        return *this;
    }
    FactorCount &operator+=(const FactorCount &o)
    {
        if (empty) {
            *this = o;
        } else if (o.power != power) {
            throw inconsistent_error("FactorCount: summands carry different theta counts");
        }
        return *this;
    }
};

/// Net number of theta factors per summand of the normalized weight function.
inline int normalized_theta_power(const WeightConfig &cfg)
{
    auto counter = [](cplx) { return FactorCount(1, false); };
    return detail::symmetrized<FactorCount>(cfg, counter, false).power;
}

/// N = 3 configuration matching a label with L1 = 0:
/// t^(1) = -z^(1), t^(2) = -z^(2), t^(3) = -w^(2), h = gamma, mu = lambda (additive coordinates).
inline WeightConfig correspondence_map(const FMLattice &req)
{
    req.validate();
    const FMLabel &lb = req.label;
    if (lb.L1() != 0) {
        throw precondition_error("correspondence_map: needs L1 = 0");
    }
    IndexSet b2;
    std::set_difference(lb.I2().begin(), lb.I2().end(), lb.I1().begin(), lb.I1().end(), std::back_inserter(b2));
    IndexSet b3;
    const IndexSet all = lb.I3hat();
    std::set_difference(all.begin(), all.end(), lb.I2().begin(), lb.I2().end(), std::back_inserter(b3));
    auto neg = [](const std::vector<cplx> &v) {
        std::vector<cplx> o;
        for (cplx x : v) {
            o.push_back(-x);
        }
        return o;
    };
    WeightConfig cfg;
    cfg.N = 3;
    cfg.blocks = {lb.I1(), b2, b3};
    cfg.t = {neg(req.z1), neg(req.z2), neg(req.w2)};
    cfg.h = req.params.gamma;
    cfg.mu = req.params.lambda;
    return cfg;
}

/// Both sides of p_{I,j(I,2,a)}(i^(2)_a) - p_{I,3}(i^(2)_a) = c(I2_a, i^(2)_{I2_a}) - 1 - I2_a + a.
inline std::pair<int, int> counting_identity_upper(const FMLabel &lb, const WeightConfig &cfg, int a)
{
    const int ia = cfg.union_upto(2)[static_cast<std::size_t>(a - 1)];
    const int lhs = p_count(cfg, j_of(cfg, 2, a), ia) - p_count(cfg, 3, ia);
    const int Ia = lb.I2()[static_cast<std::size_t>(a - 1)];
    const int rhs = color_count(lb, Ia, lb.colors2()[static_cast<std::size_t>(Ia - 1)]) - 1 - Ia + a;
    return {lhs, rhs};
}

/// Both sides of p_{I,j(I,1,a)}(i^(1)_a) - p_{I,2}(i^(1)_a) = 2a - 1 - Itilde_a.
inline std::pair<int, int> counting_identity_lower(const FMLabel &lb, const WeightConfig &cfg, int a)
{
    const int ia = cfg.union_upto(1)[static_cast<std::size_t>(a - 1)];
    const int lhs = p_count(cfg, j_of(cfg, 1, a), ia) - p_count(cfg, 2, ia);
    const int rhs = 2 * a - 1 - induced_set(lb)[static_cast<std::size_t>(a - 1)];
    return {lhs, rhs};
}

/// Case correspondences: sign(i^(k+1)_c - i^(k)_a) equals sign(c - P_a), with P = Itilde (k = 1)
/// or I^(2) (k = 2). Also checks j(I,1,a) = 1 and j(I,2,a) = i^(2)_{I2_a}.
inline bool case_correspondence_holds(const FMLabel &lb, const WeightConfig &cfg)
{
    const auto tilde = induced_set(lb);
    const auto i2 = lb.colors2();
    for (int k = 1; k <= 2; ++k) {
        const IndexSet ik = cfg.union_upto(k);
        const IndexSet ik1 = cfg.union_upto(k + 1);
        for (int a = 1; a <= static_cast<int>(ik.size()); ++a) {
            const int pa = (k == 1) ? tilde[static_cast<std::size_t>(a - 1)] : lb.I2()[static_cast<std::size_t>(a - 1)];
            for (int c = 1; c <= static_cast<int>(ik1.size()); ++c) {
                const int lhs = (ik1[static_cast<std::size_t>(c - 1)] > ik[static_cast<std::size_t>(a - 1)]) -
                                (ik1[static_cast<std::size_t>(c - 1)] < ik[static_cast<std::size_t>(a - 1)]);
                const int rhs = (c > pa) - (c < pa);
                if (lhs != rhs) {
                    return false;
                }
            }
            const int expected_j = (k == 1) ? 1 : i2[static_cast<std::size_t>(lb.I2()[static_cast<std::size_t>(a - 1)] - 1)];
            if (j_of(cfg, k, a) != expected_j) {
                return false;
            }
        }
    }
    return true;
}

} // namespace ellfm

#endif
