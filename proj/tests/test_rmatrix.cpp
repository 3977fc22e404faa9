#include "support.hpp"

using namespace ellfm;
using ellfm::testing::close_rel;
using ellfm::testing::draw;

namespace
{

DynParams params_of(const ParameterDraw &d, int rank)
{
    return {std::vector<cplx>(d.lambda.begin(), d.lambda.begin() + rank), d.gamma};
}

} // namespace

TEST(RMatrix, EntryCounts)
{
    EXPECT_EQ(nonzero_entries(2).size(), 6u);
    EXPECT_EQ(nonzero_entries(3).size(), 15u);
    EXPECT_EQ(entry_kind({1, 2, 2, 2}), EntryKind::forbidden);
    EXPECT_EQ(entry_kind({2, 2, 2, 2}), EntryKind::diagonal);
    EXPECT_EQ(entry_kind({1, 3, 1, 3}), EntryKind::pass);
    EXPECT_EQ(entry_kind({1, 3, 3, 1}), EntryKind::exchange);
}

TEST(RMatrix, IceRuleZeros)
{
    const auto d = draw("rm/ice", {0, 0, 0, 1});
    for (int rank = 2; rank <= 3; ++rank) {
        const RContext ctx(rank, ThetaContext(d.tau));
        const DynParams p = params_of(d, rank);
        EXPECT_EQ(r_entry(ctx, d.w2[0], p, 1, 2, 2, 2), cplx(0.0, 0.0));
        for (int a = 1; a <= rank; ++a) {
            for (int b = 1; b <= rank; ++b) {
                for (int c = 1; c <= rank; ++c) {
                    for (int e = 1; e <= rank; ++e) {
                        const cplx v = r_entry(ctx, d.w2[0], p, a, b, c, e);
                        const bool conserved = (a == c && b == e) || (a == e && b == c);
                        if (!conserved) {
                            EXPECT_EQ(v, cplx(0.0, 0.0)) << a << b << c << e;
                        } else {
                            EXPECT_NE(v, cplx(0.0, 0.0)) << a << b << c << e;
                        }
                    }
                }
            }
        }
    }
}

TEST(RMatrix, ExchangeEntryMatchesSingleSiteLattice)
{
    const auto d = draw("rm/exchange", {1, 0, 1, 0});
    const ThetaContext th(d.tau);
    const RContext ctx(2, th);
    const DynParams p = params_of(d, 2);
    const cplx z = d.z1[0] - d.w1[0];
    const cplx l1 = p.lambda[0];
    const cplx l2 = p.lambda[1];
    const cplx expect = theta_additive(th, p.gamma) * theta_additive(th, z + l2 - l1) / theta_additive(th, l1 - l2);
    EXPECT_TRUE(close_rel(r_entry(ctx, z, p, 1, 2, 2, 1), expect, 1e-14));
    const BaseLattice lat{d.z1, d.w1, p, BaseLabel(1, {1})};
    EXPECT_TRUE(close_rel(brute_force_base(ctx, lat), expect, 1e-14));
}

TEST(RMatrix, ShiftLambda)
{
    const DynParams p{{1.0, 2.0, 3.0}, 0.25};
    const DynParams s = shift_lambda(p, 2);
    EXPECT_EQ(s.lambda, (std::vector<cplx>{1.0, 1.75, 3.0}));
    const DynParams t = shift_lambda(shift_lambda(shift_lambda(p, 1), 1), 2);
    EXPECT_EQ(t.lambda, (std::vector<cplx>{0.5, 1.75, 3.0}));
    EXPECT_THROW(shift_lambda(p, 4), domain_error);
}

TEST(RMatrix, DynamicalYangBaxter)
{
    for (int rank = 2; rank <= 3; ++rank) {
        for (int i = 0; i < 5; ++i) {
            const auto d = draw("rm/dybe/" + std::to_string(rank) + "/" + std::to_string(i), {0, 0, 0, 2});
            const RContext ctx(rank, ThetaContext(d.tau));
            EXPECT_LT(dybe_residual(ctx, d.w2[0], d.w2[0] + d.w2[1], d.w2[1], params_of(d, rank)), 1e-10);
        }
    }
    const RContext fixed(2, ThetaContext(cplx{0.0, 0.8}));
    EXPECT_LT(dybe_residual(fixed, {0.13, 0.04}, {0.02, 0.11}, {-0.11, 0.07}, DynParams{{{0.3, 0.1}, {-0.2, 0.05}}, {0.21, 0.03}}),
              1e-10);
}

TEST(RMatrix, DynamicalYangBaxterAtCoincidentPoint)
{
    const auto d = draw("rm/dybe0", {0, 0, 0, 1});
    const RContext ctx(3, ThetaContext(d.tau));
    EXPECT_LT(dybe_residual(ctx, 0.0, d.w2[0], d.w2[0], params_of(d, 3)), 1e-10);
}

TEST(RMatrix, DynamicalYangBaxterDetectsPerturbation)
{
    const auto d = draw("rm/dybe-mut", {0, 0, 0, 2});
    const RContext ctx(3, ThetaContext(d.tau));
    for (const auto &k : nonzero_entries(3)) {
        const RContext bad = ctx.perturbed(k, 1.0 + 1e-4);
        EXPECT_GT(dybe_residual(bad, d.w2[0], d.w2[0] + d.w2[1], d.w2[1], params_of(d, 3)), 1e-8)
            << k.a_in << k.b_in << k.a_out << k.b_out;
    }
}

TEST(RMatrix, DybeRequiresConsistentSpectralPoints)
{
    const RContext ctx(2, ThetaContext(cplx{0.0, 0.8}));
    EXPECT_THROW(dybe_residual(ctx, 0.1, 0.3, 0.1, DynParams{{0.3, -0.2}, 0.2}), precondition_error);
}

TEST(RMatrix, DependsOnlyOnLambdaDifferences)
{
    const auto d = draw("rm/shift", {0, 0, 0, 2});
    const RContext ctx(3, ThetaContext(d.tau));
    const DynParams p = params_of(d, 3);
    DynParams q = p;
    for (auto &x : q.lambda) {
        x += d.w2[1];
    }
    for (const auto &k : nonzero_entries(3)) {
        EXPECT_TRUE(close_rel(r_entry(ctx, d.w2[0], p, k.a_in, k.b_in, k.a_out, k.b_out),
                              r_entry(ctx, d.w2[0], q, k.a_in, k.b_in, k.a_out, k.b_out), 1e-12));
    }
}

TEST(RMatrix, RankThreeRestrictsToRankTwo)
{
    const auto d = draw("rm/restrict", {0, 0, 0, 1});
    const ThetaContext th(d.tau);
    const RContext r2(2, th);
    const RContext r3(3, th);
    for (const auto &k : nonzero_entries(2)) {
        EXPECT_EQ(r_entry(r2, d.w2[0], params_of(d, 2), k.a_in, k.b_in, k.a_out, k.b_out),
                  r_entry(r3, d.w2[0], params_of(d, 3), k.a_in, k.b_in, k.a_out, k.b_out));
    }
}

TEST(RMatrix, PoleGuard)
{
    const RContext ctx(2, ThetaContext(cplx{0.0, 0.8}));
    const DynParams p{{0.3, 0.3}, 0.2};
    EXPECT_THROW(r_entry(ctx, 0.1, p, 1, 2, 1, 2), pole_error);
    EXPECT_THROW(r_entry(ctx, 0.1, p, 1, 2, 2, 1), pole_error);
    EXPECT_NO_THROW(r_entry(ctx, 0.1, p, 1, 1, 1, 1));
}

TEST(RMatrix, ContextValidation)
{
    const ThetaContext th(cplx{0.0, 0.8});
    EXPECT_THROW(RContext(4, th), domain_error);
    const RContext ctx(2, th);
    EXPECT_THROW(r_entry(ctx, 0.1, DynParams{{0.3, 0.1}, 0.2}, 3, 1, 3, 1), domain_error);
    EXPECT_THROW(ctx.perturbed({1, 2, 2, 2}, 2.0), domain_error);
    const RContext scaled = ctx.perturbed({1, 1, 1, 1}, 2.0);
    EXPECT_EQ(scaled.multiplier({1, 1, 1, 1}), cplx(2.0, 0.0));
    EXPECT_EQ(ctx.multiplier({1, 1, 1, 1}), cplx(1.0, 0.0));
}
