#include "support.hpp"

using namespace ellfm;
using ellfm::testing::base_of;
using ellfm::testing::close_rel;
using ellfm::testing::draw;
using ellfm::testing::fm_of;

TEST(ClosedBase, InitialValue)
{
    for (int L = 1; L <= 4; ++L) {
        const auto d = draw("cf/init/" + std::to_string(L), {1, 0, L, 0});
        const ThetaContext th(d.tau);
        const BaseLattice lat = base_of(d, BaseLabel(L, {L}));
        EXPECT_TRUE(close_rel(eval_E_base(th, lat), initial_value_base(th, lat), 1e-13));
    }
}

TEST(ClosedBase, EmptyLabelIsOne)
{
    const auto d = draw("cf/k0", {0, 0, 2, 0});
    EXPECT_EQ(eval_E_base(ThetaContext(d.tau), base_of(d, BaseLabel(2, {}))), cplx(1.0, 0.0));
}

TEST(ClosedBase, Symmetric)
{
    const auto d = draw("cf/sym", {2, 0, 4, 0});
    const ThetaContext th(d.tau);
    for (const auto &lb : enumerate_base_labels(4, 2)) {
        BaseLattice a = base_of(d, lb);
        BaseLattice b = a;
        std::swap(b.z[0], b.z[1]);
        EXPECT_TRUE(close_rel(eval_E_base(th, a), eval_E_base(th, b), 1e-10));
    }
}

TEST(ClosedBase, AgreesWithContractionOnEnvelope)
{
    for (int L = 1; L <= 4; ++L) {
        for (int k = 0; k <= std::min(L, 2); ++k) {
            const auto d = draw("cf/env/" + std::to_string(L) + std::to_string(k), {k, 0, L, 0});
            const ThetaContext th(d.tau);
            const RContext ctx(2, th);
            for (const auto &lb : enumerate_base_labels(L, k)) {
                EXPECT_TRUE(close_rel(eval_E_base(th, base_of(d, lb)), brute_force_base(ctx, base_of(d, lb)), 1e-9));
            }
        }
    }
}

TEST(ClosedForms, GlobalLambdaShiftInvariance)
{
    const auto d = draw("cf/lshift", {1, 2, 0, 3});
    const ThetaContext th(d.tau);
    const cplx c{0.37, -0.21};
    for (const auto &lb : enumerate_labels(1, 2, 0, 3)) {
        const FMLattice a = fm_of(d, lb);
        FMLattice b = a;
        for (auto &x : b.params.lambda) {
            x += c;
        }
        EXPECT_TRUE(close_rel(eval_E_fm(th, a), eval_E_fm(th, b), 1e-12));
        EXPECT_TRUE(close_rel(eval_E_bar(th, a), eval_E_bar(th, b), 1e-12));
    }
    const auto e = draw("cf/lshift-base", {2, 0, 3, 0});
    BaseLattice a = base_of(e, BaseLabel(3, {1, 3}));
    BaseLattice b = a;
    for (auto &x : b.params.lambda) {
        x += c;
    }
    EXPECT_TRUE(close_rel(eval_E_base(th, a), eval_E_base(th, b), 1e-12));
}

TEST(ClosedBase, RecursionRewrites)
{
    const auto d = draw("cf/rec", {2, 0, 4, 0});
    const ThetaContext th(d.tau);
    for (const auto &lb : enumerate_base_labels(4, 2)) {
        BaseLattice lat = base_of(d, lb);
        if (lb.positions.back() == 4) {
            lat.w.back() = lat.z.back() - lat.params.gamma;
            BaseLattice small = lat;
            small.z.pop_back();
            small.w.pop_back();
            small.label = BaseLabel(3, {lb.positions.front()});
            EXPECT_TRUE(close_rel(eval_E_base(th, lat), recursion_factor_base(th, lat) * eval_E_base(th, small), 1e-8));
        } else {
            BaseLattice small = lat;
            small.w.pop_back();
            small.label = BaseLabel(3, lb.positions);
            EXPECT_TRUE(close_rel(eval_E_base(th, lat), peel_factor_base(th, lat) * eval_E_base(th, small), 1e-8));
        }
    }
}

TEST(ClosedFM, RecursionRewrites)
{
    const auto d = draw("cf/recfm", {2, 2, 1, 3});
    const ThetaContext th(d.tau);
    for (const auto &lb : enumerate_labels(2, 2, 1, 3)) {
        FMLattice lat = fm_of(d, lb);
        if (lb.I2().back() == 3) {
            lat.w2.back() = lat.z2.back() - lat.params.gamma;
            FMLattice small = lat;
            small.w1.insert(small.w1.begin(), small.z2.back());
            small.z2.pop_back();
            small.w2.pop_back();
            small.label = j_transform(lb);
            EXPECT_TRUE(close_rel(eval_E_fm(th, lat), recursion_factor_fm(th, lat) * eval_E_fm(th, small), 1e-8));
        } else {
            FMLattice small = lat;
            small.w2.pop_back();
            small.label = k_transform(lb);
            EXPECT_TRUE(close_rel(eval_E_fm(th, lat), peel_factor_fm(th, lat) * eval_E_fm(th, small), 1e-8));
        }
    }
}

TEST(ClosedFM, InitialConditionFactorizes)
{
    const auto d = draw("cf/initfm", {2, 1, 2, 3});
    const ThetaContext th(d.tau);
    for (const auto &lb : enumerate_labels(2, 1, 2, 3)) {
        if (lb.I2().back() != 3) {
            EXPECT_THROW(upper_region_factor(th, fm_of(d, lb)), precondition_error);
            continue;
        }
        const FMLattice lat = fm_of(d, lb);
        const BaseLattice base = initial_base_lattice(lat);
        EXPECT_EQ(base.label.positions.size(), lb.I1().size());
        EXPECT_TRUE(close_rel(eval_E_fm(th, lat), upper_region_factor(th, lat) * eval_E_base(th, base), 1e-8));
    }
}

TEST(ClosedFM, SymmetricInUpperRows)
{
    const auto d = draw("cf/symfm", {2, 2, 1, 3});
    const ThetaContext th(d.tau);
    for (const auto &lb : enumerate_labels(2, 2, 1, 3)) {
        FMLattice a = fm_of(d, lb);
        FMLattice b = a;
        std::swap(b.z2[0], b.z2[1]);
        EXPECT_TRUE(close_rel(eval_E_fm(th, a), eval_E_fm(th, b), 1e-10));
        FMLattice c = a;
        std::swap(c.z1[0], c.z1[1]);
        EXPECT_TRUE(close_rel(eval_E_fm(th, a), eval_E_fm(th, c), 1e-10));
    }
}

TEST(ClosedFM, NoUpperRowsReducesToBase)
{
    const auto d = draw("cf/k2zero", {2, 0, 3, 0});
    const ThetaContext th(d.tau);
    for (const auto &lb : enumerate_labels(2, 0, 3, 0)) {
        EXPECT_TRUE(close_rel(eval_E_fm(th, fm_of(d, lb)), eval_E_base(th, base_of(d, BaseLabel(3, lb.I1()))), 1e-13));
    }
}

TEST(ClosedEbar, TwoRoutesAgree)
{
    const auto d = draw("cf/ebar", {2, 2, 0, 3});
    const ThetaContext th(d.tau);
    for (const auto &lb : enumerate_labels(2, 2, 0, 3)) {
        const FMLattice lat = fm_of(d, lb);
        FMLattice sh = lat;
        for (auto &x : sh.z1) {
            x += sh.params.gamma;
        }
        for (auto &x : sh.w2) {
            x -= sh.params.gamma;
        }
        EXPECT_TRUE(close_rel(eval_E_bar(th, lat), overall_factor_62(th, lb, lat.params) * eval_E_fm(th, sh), 1e-10));
        FMLattice sw = lat;
        std::swap(sw.z2[0], sw.z2[1]);
        EXPECT_TRUE(close_rel(eval_E_bar(th, lat), eval_E_bar(th, sw), 1e-10));
    }
    EXPECT_THROW(eval_E_bar(th, fm_of(draw("cf/ebar-l1", {1, 1, 1, 1}), FMLabel(1, 1, 1, 1, {1}, {1}))),
                 precondition_error);
}

TEST(ClosedForms, QuasiPeriodicFactors)
{
    const auto d = draw("cf/qp", {2, 2, 1, 3});
    const ThetaContext th(d.tau);
    const BaseLattice base = base_of(draw("cf/qpb", {2, 0, 3, 0}), BaseLabel(3, {1, 3}));
    const cplx e1 = expected_qp_factor(QpKind::one_shift, th, base);
    const cplx et = expected_qp_factor(QpKind::tau_shift, th, base);
    EXPECT_EQ(e1, cplx(1.0, 0.0));
    auto shifted = [](BaseLattice b, cplx s) {
        b.w.back() += s;
        return b;
    };
    for (int ell = 1; ell <= 2; ++ell) {
        EXPECT_TRUE(close_rel(g_ell(th, shifted(base, d.tau), ell) / g_ell(th, base, ell), et, 1e-8));
    }
    std::vector<std::size_t> sigma{1, 0};
    EXPECT_TRUE(close_rel(f_sigma(th, shifted(base, d.tau), sigma) / f_sigma(th, base, sigma), et, 1e-8));
    EXPECT_TRUE(close_rel(eval_E_base(th, shifted(base, 1.0)) / eval_E_base(th, base), e1, 1e-8));

    for (const auto &lb : enumerate_labels(2, 2, 1, 3)) {
        if (lb.I2().back() != 3) {
            continue;
        }
        const FMLattice lat = fm_of(d, lb);
        FMLattice sh = lat;
        sh.w2.back() += d.tau;
        const cplx ef = expected_qp_factor(QpKind::tau_shift, th, lat);
        EXPECT_TRUE(close_rel(eval_E_fm(th, sh) / eval_E_fm(th, lat), ef, 1e-8));
        for (int ell = 1; ell <= 2; ++ell) {
            EXPECT_TRUE(close_rel(h_ell(th, sh, ell) / h_ell(th, lat, ell), ef, 1e-8));
        }
        EXPECT_TRUE(close_rel(f_sigma2(th, sh, sigma) / f_sigma2(th, lat, sigma), ef, 1e-8));
    }
}

TEST(ClosedForms, PoleGuards)
{
    auto d = draw("cf/pole", {2, 0, 2, 0});
    const ThetaContext th(d.tau);
    BaseLattice base = base_of(d, BaseLabel(2, {1, 2}));
    base.params.lambda[1] = base.params.lambda[0];
    EXPECT_THROW(eval_E_base(th, base), pole_error);
    BaseLattice same = base_of(d, BaseLabel(2, {1, 2}));
    same.z[1] = same.z[0];
    EXPECT_THROW(eval_E_base(th, same), pole_error);
}
