#ifndef ELLFM_TESTS_SUPPORT_HPP
#define ELLFM_TESTS_SUPPORT_HPP

#include <string>

#include <gtest/gtest.h>

#include "ellfm.hpp"

namespace ellfm::testing
{

inline ParameterDraw draw(const std::string &key, DrawShape shape, std::uint64_t seed = 7)
{
    SuiteConfig cfg;
    cfg.seed = seed;
    return sample_parameters(cfg, key, shape);
}

inline BaseLattice base_of(const ParameterDraw &d, const BaseLabel &lb)
{
    return BaseLattice{d.z1, d.w1, {{d.lambda[0], d.lambda[1]}, d.gamma}, lb};
}

inline FMLattice fm_of(const ParameterDraw &d, const FMLabel &lb)
{
    return FMLattice{d.z1, d.z2, d.w1, d.w2, {d.lambda, d.gamma}, lb};
}

inline ::testing::AssertionResult close_rel(cplx a, cplx b, double tol)
{
    const double e = rel_error(a, b);
    if (e <= tol) {
        return ::testing::AssertionSuccess();
    }
    return ::testing::AssertionFailure() << a << " vs " << b << " rel " << e << " > " << tol;
}

} // namespace ellfm::testing

#endif
