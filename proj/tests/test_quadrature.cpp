#include <catch2/catch_amalgamated.hpp>

#include "heatctl/quadrature.hpp"
#include "heatctl/transforms.hpp"
#include "heatctl/basis.hpp"

using namespace heatctl;
using R = mpreal;

namespace {

QuadConfig<R> cfg30() {
    set_working_precision(30);
    return QuadConfig<R>::defaults(30);
}

}  // namespace

TEST_CASE("truncation radius matches the exponential-bound solve", "[quadrature]") {
    auto cfg = cfg30();
    // e^{-R^2 cos(pi/4) t_eff} = tol  =>  R = sqrt(ln(1/tol) / (cos(pi/4) t_eff))
    const R r1 = truncation_radius(R("0.5"), R("1e-40"), cfg);
    REQUIRE(fabs(r1 - R("16.139")) < R("1e-2"));
    const R r2 = truncation_radius(R("0.5"), R(1), cfg);
    REQUIRE(r2 == 0);
    const R r3 = truncation_radius(R("0.2"), R("1e-40"), cfg);
    REQUIRE(fabs(r3 - R("25.519")) < R("1e-2"));

    SECTION("rejects nonpositive t_eff") {
        REQUIRE_THROWS_AS(truncation_radius(R(0), R("1e-10"), cfg), std::invalid_argument);
        REQUIRE_THROWS_AS(truncation_radius(R(-1), R("1e-10"), cfg), std::invalid_argument);
    }
    SECTION("reports the cap") {
        bool capped = false;
        cfg.max_radius = 5;
        const R r = truncation_radius(R("0.5"), R("1e-40"), cfg, &capped);
        REQUIRE(capped);
        REQUIRE(r == 5);
    }
    SECTION("monotone in t_eff and tol") {
        REQUIRE(truncation_radius(R(1), R("1e-30"), cfg) <=
                truncation_radius(R("0.5"), R("1e-30"), cfg));
        REQUIRE(truncation_radius(R(1), R("1e-20"), cfg) <=
                truncation_radius(R(1), R("1e-30"), cfg));
    }
}

TEST_CASE("ray integral of the Gaussian", "[quadrature]") {
    auto cfg = cfg30();
    auto f = [](const R& r) { return Cplx<R>(exp(-r * r)); };
    const R got = ray_integral<R>(f, sqrt(R(2)), cfg);
    const R ref = sqrt(pi_v<R>()) / 2;
    REQUIRE(fabs(got - ref) < R("1e-24"));
}

TEST_CASE("purely imaginary singular part integrates to zero", "[quadrature]") {
    auto cfg = cfg30();
    // i e^{-r^2}/r: the removable-singularity structure at lambda = 0
    auto f = [](const R& r) { return Cplx<R>(R(0), exp(-r * r) / r); };
    const R got = ray_integral<R>(f, sqrt(R(2)), cfg);
    REQUIRE(fabs(got) < R("1e-24"));
}

TEST_CASE("ray integral is linear", "[quadrature]") {
    auto cfg = cfg30();
    auto f = [](const R& r) { return Cplx<R>(exp(-r * r)); };
    auto g = [](const R& r) { return Cplx<R>(exp(-2 * r * r)); };
    const R a = R(3), b = R("-0.7");
    auto combo = [&](const R& r) { return a * f(r) + b * g(r); };
    const R lhs = ray_integral<R>(combo, R(1) / 2, cfg);
    const R rhs = a * ray_integral<R>(f, R(1) / 2, cfg) + b * ray_integral<R>(g, R(1) / 2, cfg);
    REQUIRE(fabs(lhs - rhs) < R("1e-23"));
}

TEST_CASE("truncation soundness: doubling R does not move the result", "[quadrature]") {
    auto cfg = cfg30();
    const R t_eff = sqrt(R(2));
    const R radius = truncation_radius(t_eff, cfg.truncation_tol(), cfg);
    auto f = [](const R& r) { return Cplx<R>(exp(-r * r)); };
    const Cplx<R> one = segment_integral<R>(f, R("1e-20"), radius, cfg);
    const Cplx<R> two = segment_integral<R>(f, R("1e-20"), 2 * radius, cfg);
    REQUIRE(abs(two - one) < cfg.abs_tol);
}

TEST_CASE("precision monotonicity against a closed form", "[quadrature]") {
    auto reference_gap = [](unsigned digits) {
        set_working_precision(digits);
        auto cfg = QuadConfig<R>::defaults(digits);
        auto f = [](const R& r) { return Cplx<R>(exp(-r * r)); };
        const R got = ray_integral<R>(f, sqrt(R(2)), cfg);
        return static_cast<double>(fabs(got - sqrt(pi_v<R>()) / 2));
    };
    const double d20 = reference_gap(20);
    const double d25 = reference_gap(25);
    const double d30 = reference_gap(30);
    REQUIRE(d25 <= d20 + 1e-30);
    REQUIRE(d30 <= d25 + 1e-32);
    set_working_precision(30);
}

TEST_CASE("segment integral basics", "[quadrature]") {
    auto cfg = cfg30();
    auto one = [](const R&) { return Cplx<R>(R(1)); };
    REQUIRE(fabs(segment_integral<R>(one, R(0), R(1), cfg).re - 1) < R("1e-28"));

    auto s = [](const R& t) { return Cplx<R>(sin(pi_v<R>() * t)); };
    const R got = segment_integral<R>(s, R(0), R(1), cfg).re;
    REQUIRE(fabs(got - 2 / pi_v<R>()) < R("1e-24"));

    REQUIRE_THROWS_AS(segment_integral<R>(one, R(1), R(0), cfg), std::invalid_argument);
}

TEST_CASE("removable origin: production integrands stable under halving eps", "[quadrature]") {
    auto cfg = cfg30();
    const R T = R(1) / 2, d = R("0.3"), x = R("0.25");
    const Cplx<R> dir = ContourRay<R>::main().direction();
    const Cplx<R> i{R(0), R(1)};

    auto u_integrand = [&](const R& r) {
        const Cplx<R> lam = r * dir;
        return R(2) * (i * exp(-sqr(lam) * T) * cos_over_cos_half(lam, x) / r);
    };
    auto f_integrand = [&](const R& r) {
        const Cplx<R> lam = r * dir;
        return R(2) * (i * cos_over_sin(lam, x, R(1)) * damped_B(1u, lam, d, T) * dir);
    };
    // both have finite Re limits at r -> 0; the eps panel must not move the value
    const R u1 = ray_integral<R>(u_integrand, T, cfg, /*origin_eps=*/R("1e-13"));
    const R u2 = ray_integral<R>(u_integrand, T, cfg, /*origin_eps=*/R("5e-14"));
    REQUIRE(is_finite(u1));
    REQUIRE(fabs(u1 - u2) <= cfg.rel_tol * fabs(u1) + cfg.abs_tol);

    const R f1 = ray_integral<R>(f_integrand, T - d, cfg, R("1e-13"));
    const R f2 = ray_integral<R>(f_integrand, T - d, cfg, R("5e-14"));
    REQUIRE(is_finite(f1));
    REQUIRE(fabs(f1 - f2) <= cfg.rel_tol * fabs(f1) + cfg.abs_tol);
}

TEST_CASE("refinement failure carries the best estimate", "[quadrature]") {
    set_working_precision(30);
    auto cfg = QuadConfig<R>::defaults(30);
    cfg.max_refinements = 2;
    auto wild = [](const R& r) { return Cplx<R>(cos(50 * r * r)); };
    REQUIRE_THROWS_AS(segment_integral<R>(wild, R(0), R(10), cfg), QuadratureError);
    try {
        segment_integral<R>(wild, R(0), R(10), cfg);
    } catch (const QuadratureError& e) {
        REQUIRE(!e.best_estimate().empty());
        REQUIRE(!e.error_bound().empty());
    }
}

TEST_CASE("non-finite integrand values are reported with the offending r", "[quadrature]") {
    auto cfg = cfg30();
    auto bad = [](const R& r) {
        return Cplx<R>(sqrt(R(1) - r));  // NaN past r = 1
    };
    REQUIRE_THROWS_AS(ray_integral<R>(bad, R(1), cfg), IntegrandError);
    try {
        ray_integral<R>(bad, R(1), cfg);
    } catch (const IntegrandError& e) {
        REQUIRE(std::string(e.what()).find("r =") != std::string::npos);
    }
}

TEST_CASE("quad config validation", "[quadrature]") {
    REQUIRE_THROWS_AS(QuadConfig<R>::defaults(10), std::invalid_argument);
    auto cfg = cfg30();
    cfg.rel_tol = R(2);
    REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = cfg30();
    cfg.max_radius = R(0);
    REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
}
