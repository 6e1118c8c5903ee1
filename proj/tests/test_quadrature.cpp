#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "spectral_forge/quadrature.hpp"

using namespace spectral_forge;
using namespace spectral_forge::quad;

namespace {

QuadratureSpec with(Scheme s) {
    QuadratureSpec q;
    q.scheme = s;
    return q;
}

}  // namespace

class BothSchemes : public ::testing::TestWithParam<Scheme> {};

TEST_P(BothSchemes, ExponentialHalfLine) {
    auto r = integrate([](double y) { return std::exp(-y); }, Interval::half_line(), with(GetParam()));
    EXPECT_NEAR(r.value.real(), 1.0, 1e-12);
}

TEST_P(BothSchemes, EndpointSingularity) {
    auto r = integrate([](double y) { return 1.0 / std::sqrt(y); }, Interval{0.0, 1.0}, with(GetParam()));
    EXPECT_NEAR(r.value.real(), 2.0, 1e-10);
}

TEST_P(BothSchemes, GaussianLine) {
    auto r = integrate([](double x) { return std::exp(-x * x); }, Interval::real_line(), with(GetParam()));
    EXPECT_NEAR(r.value.real(), std::sqrt(std::numbers::pi), 1e-12);
}

TEST_P(BothSchemes, ComplexOscillatory) {
    // int_0^inf e^{-(1+2i) t} dt = 1/(1+2i)
    auto f = [](double t) { return std::exp(-std::complex<double>(1.0, 2.0) * t); };
    auto r = integrate(f, Interval::half_line(), with(GetParam()));
    EXPECT_LE(std::abs(r.value - 1.0 / std::complex<double>(1.0, 2.0)), 1e-11);
}

TEST_P(BothSchemes, ReversedBoundsNegate) {
    auto f = [](double x) { return x * x; };
    auto r = integrate(f, Interval{2.0, 0.0}, with(GetParam()));
    EXPECT_NEAR(r.value.real(), -8.0 / 3.0, 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Quadrature, BothSchemes,
                         ::testing::Values(Scheme::gauss_kronrod, Scheme::double_exponential));

TEST(Quadrature, TwoSchemeAgreementTanhWeight) {
    auto f = [](double r) { return r * std::tanh(std::numbers::pi * r) * std::exp(-r * r); };
    auto a = integrate(f, Interval::real_line(), with(Scheme::gauss_kronrod));
    auto b = integrate(f, Interval::real_line(), with(Scheme::double_exponential));
    EXPECT_LE(std::abs(a.value - b.value), 1e-10);
}

TEST(Quadrature, FailureIsReported) {
    QuadratureSpec spec;
    spec.scheme = Scheme::gauss_kronrod;
    spec.max_subdivisions = 3;
    auto f = [](double x) { return std::sin(1.0 / x); };
    EXPECT_THROW(integrate(f, Interval{1e-6, 1.0}, spec), QuadratureError);
    spec.scheme = Scheme::double_exponential;
    spec.max_subdivisions = 16;
    EXPECT_THROW(integrate(f, Interval{1e-6, 1.0}, spec), QuadratureError);
}

TEST(Quadrature, RejectsBadSpec) {
    QuadratureSpec spec;
    spec.abs_tol = 0.0;
    EXPECT_THROW(integrate([](double) { return 1.0; }, Interval{0, 1}, spec), DomainError);
    spec = {};
    spec.max_subdivisions = 0;
    EXPECT_THROW(integrate([](double) { return 1.0; }, Interval{0, 1}, spec), DomainError);
}
