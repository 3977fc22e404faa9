#include <random>

#include "support.hpp"

using namespace ellfm;
using ellfm::testing::close_rel;

namespace
{

// -sum_{j in Z+1/2} exp(i pi j^2 tau + 2 pi i j (z + 1/2)), summed from the outside in.
cplx reference_theta(cplx tau, cplx z, int n_max)
{
    cplx acc{0.0, 0.0};
    for (int n = n_max; n >= -n_max - 1; --n) {
        const double j = n + 0.5;
        acc += std::exp(I * pi * j * j * tau + 2.0 * pi * I * j * (z + 0.5));
    }
    return -acc;
}

std::vector<cplx> random_points(cplx tau, int count, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<cplx> out;
    for (int i = 0; i < count; ++i) {
        const double re = u(rng);
        out.push_back({re, tau.imag() * u(rng)});
    }
    return out;
}

} // namespace

TEST(Theta, ZeroAtOrigin)
{
    const ThetaContext th(cplx{0.0, 0.8});
    EXPECT_EQ(theta_additive(th, 0.0), cplx(0.0, 0.0));
}

TEST(Theta, ContextRejectsBadInput)
{
    EXPECT_THROW(ThetaContext(cplx{0.3, 0.0}), domain_error);
    EXPECT_THROW(ThetaContext(cplx{0.3, -1.0}), domain_error);
    EXPECT_THROW(ThetaContext(cplx{0.0, 1.0}, 0.0), domain_error);
}

TEST(Theta, PeriodOne)
{
    const ThetaContext th(cplx{0.0, 0.8});
    for (cplx z : random_points(th.tau(), 50, 1)) {
        EXPECT_TRUE(close_rel(theta_additive(th, z + 1.0) / theta_additive(th, z), -1.0, 1e-10));
    }
}

TEST(Theta, PeriodTau)
{
    for (cplx tau : {cplx{0.0, 0.8}, cplx{0.3, 0.8}, cplx{-0.4, 0.5}}) {
        const ThetaContext th(tau);
        for (cplx z : random_points(tau, 50, 2)) {
            const cplx expect = -std::exp(-2.0 * pi * I * z - pi * I * tau);
            EXPECT_TRUE(close_rel(theta_additive(th, z + tau) / theta_additive(th, z), expect, 1e-10));
        }
    }
}

TEST(Theta, Oddness)
{
    for (cplx tau : {cplx{0.0, 0.6}, cplx{0.0, 0.9}, cplx{0.3, 0.8}}) {
        const ThetaContext th(tau);
        for (cplx z : random_points(tau, 100, 3)) {
            const cplx a = theta_additive(th, z);
            EXPECT_LT(std::abs(a + theta_additive(th, -z)), 1e-12 * std::max(1.0, std::abs(a)));
        }
    }
}

TEST(Theta, MatchesReferenceSumAtDoubledTruncation)
{
    const ThetaContext th(cplx{0.0, 1.0});
    const int n = 2 * th.truncation();
    EXPECT_TRUE(close_rel(theta_additive(th, 0.3), reference_theta(th.tau(), 0.3, n), 1e-12));
    for (cplx z : random_points(th.tau(), 20, 4)) {
        EXPECT_LT(std::abs(theta_additive(th, z) - reference_theta(th.tau(), z, n)), 1e-12);
    }
}

TEST(Theta, DoublingTruncationStaysWithinTailTolerance)
{
    const ThetaContext th(cplx{0.2, 0.6});
    for (cplx z : random_points(th.tau(), 30, 5)) {
        const cplx v = theta_additive(th, z);
        EXPECT_LE(std::abs(v - th.sum(z, 2 * th.truncation())), th.tail_tolerance() * std::max(1.0, std::abs(v)));
    }
}

TEST(Theta, OffStripArgumentsAreReduced)
{
    const ThetaContext th(cplx{0.1, 0.8});
    const cplx z{0.23, 3.1 * 0.8};
    ASSERT_GT(std::abs(z.imag()), th.strip_height());
    const cplx ref = reference_theta(th.tau(), z, 80);
    EXPECT_TRUE(close_rel(theta_additive(th, z), ref, 1e-10));
}

TEST(Theta, TruncationGrowsAsToleranceShrinks)
{
    EXPECT_LE(ThetaContext::truncation_for(0.8, 1.6, 1e-10), ThetaContext::truncation_for(0.8, 1.6, 1e-14));
    EXPECT_LE(ThetaContext::truncation_for(1.2, 2.4, 1e-14), ThetaContext::truncation_for(0.5, 1.0, 1e-14));
    const int n = ThetaContext::truncation_for(0.8, 1.6, 1e-14);
    EXPECT_LT(ThetaContext::tail_bound(0.8, 1.6, n), 1e-14);
    EXPECT_GE(ThetaContext::tail_bound(0.8, 1.6, n - 1), 1e-14);
}

TEST(Theta, OverflowRaisesPrecisionWarning)
{
    const ThetaContext th(cplx{0.0, 0.8});
    EXPECT_FALSE(theta_additive_checked(th, cplx{0.1, 0.2}).precision_warning);
    EXPECT_TRUE(theta_additive_checked(th, cplx{0.1, 400.0}).precision_warning);
}

TEST(ThetaMultiplicative, VanishesAtOne)
{
    const ThetaContext th(cplx{0.0, 0.9});
    EXPECT_EQ(theta_multiplicative(th, 1.0), cplx(0.0, 0.0));
    EXPECT_THROW(theta_multiplicative(th, 0.0), domain_error);
}

TEST(ThetaMultiplicative, AntisymmetricOnUnitCircle)
{
    const ThetaContext th(cplx{0.1, 0.7});
    for (cplx z : random_points(th.tau(), 30, 6)) {
        const cplx x = std::exp(2.0 * pi * I * z.real());
        const cplx a = theta_multiplicative(th, x);
        EXPECT_LT(std::abs(theta_multiplicative(th, 1.0 / x) + a), 1e-10 * std::max(1.0, std::abs(a)));
    }
}

TEST(ThetaMultiplicative, ProportionalToAdditive)
{
    const ThetaContext th(cplx{0.0, 0.9});
    const cplx c = proportionality_constant(th);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 5; ++i) {
        const cplx z{0.45 * u(rng), 0.4 * u(rng)};
        EXPECT_TRUE(close_rel(theta_multiplicative(th, std::exp(2.0 * pi * I * z)) / theta_additive(th, z), c, 1e-9));
    }
}

TEST(ThetaMultiplicative, SmallNomeLimit)
{
    // |q| = 1e-6
    const cplx tau{0.0, std::log(1e6) / (2.0 * pi)};
    const ThetaContext th(tau);
    EXPECT_NEAR(std::abs(th.nome()), 1e-6, 1e-15);
    const cplx c = proportionality_constant(th);
    const cplx q8 = std::exp(2.0 * pi * I * tau / 8.0);
    EXPECT_LT(std::abs(c * q8 - I), 1e-4);
}

TEST(ThetaMultiplicative, ConstantInsensitiveToTruncation)
{
    const ThetaContext a(cplx{0.2, 0.7});
    const ThetaContext b(cplx{0.2, 0.7}, 1e-22);
    ASSERT_GE(b.truncation(), a.truncation() + 1);
    EXPECT_TRUE(close_rel(proportionality_constant(a), proportionality_constant(b), 1e-13));
}

TEST(EllipticProbe, ProductOfTwoThetas)
{
    const ThetaContext th(cplx{0.1, 0.8});
    const cplx c1{0.21, 0.05};
    const cplx c2{-0.13, 0.11};
    // applying the tau law twice: chi(tau) = exp(2 pi i (c1 + c2))
    const EllipticPolyProbe probe{2, {1.0, 0.0}, 2.0 * pi * I * (c1 + c2), {{0.31, 0.07}, {-0.27, -0.12}}};
    auto f = [&](cplx y) { return theta_additive(th, y - c1) * theta_additive(th, y - c2); };
    const ProbeReport rep = elliptic_poly_probe(th, f, probe);
    EXPECT_LT(rep.max_dev_one, 1e-9);
    EXPECT_LT(rep.max_dev_tau, 1e-9);

    EllipticPolyProbe wrong = probe;
    wrong.alpha = -wrong.alpha;
    EXPECT_GT(elliptic_poly_probe(th, f, wrong).max_dev_tau, 1e-3);
}

TEST(EllipticProbe, ThetaItselfHasDegreeOne)
{
    const ThetaContext th(cplx{0.0, 0.9});
    const EllipticPolyProbe probe{1, {-1.0, 0.0}, {0.0, 0.0}, {{0.17, 0.02}, {-0.31, 0.2}}};
    const ProbeReport rep = elliptic_poly_probe(th, [&](cplx y) { return theta_additive(th, y); }, probe);
    EXPECT_LT(rep.max_dev_one, 1e-12);
    EXPECT_LT(rep.max_dev_tau, 1e-10);
}

TEST(EllipticProbe, AgreementVerdicts)
{
    const ThetaContext th(cplx{0.1, 0.8});
    const cplx c1{0.21, 0.05};
    const cplx c2{-0.13, 0.11};
    const EllipticPolyProbe probe{2, {1.0, 0.0}, 2.0 * pi * I * (c1 + c2), {{0.31, 0.07}, {-0.27, -0.12}}};
    auto p = [&](cplx y) { return theta_additive(th, y - c1) * theta_additive(th, y - c2); };
    const std::vector<cplx> extra{{0.4, -0.05}, {-0.08, 0.13}};

    const AgreementReport same = elliptic_poly_agreement(th, p, p, probe, extra, 1e-9);
    EXPECT_TRUE(same.agree_at_nodes);
    EXPECT_TRUE(same.agree_at_extras);
    EXPECT_TRUE(same.consistent);
    EXPECT_EQ(same.max_extra_dev, 0.0);

    // same zero sum, different zeros: a different element of the same space
    const cplx d1 = c1 + cplx{0.1, 0.0};
    const cplx d2 = c2 - cplx{0.1, 0.0};
    auto q = [&](cplx y) { return theta_additive(th, y - d1) * theta_additive(th, y - d2); };
    const AgreementReport diff = elliptic_poly_agreement(th, p, q, probe, extra, 1e-9);
    EXPECT_FALSE(diff.agree_at_nodes);
    EXPECT_TRUE(diff.consistent);
}

TEST(EllipticProbe, RejectsDegenerateNodes)
{
    const ThetaContext th(cplx{0.0, 0.8});
    auto f = [&](cplx y) { return theta_additive(th, y); };
    EXPECT_THROW(elliptic_poly_probe(th, f, EllipticPolyProbe{2, {1.0, 0.0}, {0.0, 0.0}, {{0.1, 0.0}}}), domain_error);
    EXPECT_THROW(elliptic_poly_probe(th, f, EllipticPolyProbe{2, {1.0, 0.0}, {0.0, 0.0}, {{0.1, 0.0}, {1.1, 0.0}}}),
                 domain_error);
}

TEST(LatticeDistance, ReducesModuloPeriods)
{
    const cplx tau{0.3, 0.7};
    EXPECT_LT(lattice_distance(2.0 + 3.0 * tau, tau), 1e-12);
    EXPECT_NEAR(lattice_distance(cplx{0.1, 0.0} + tau, tau), 0.1, 1e-12);
}
