#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fracobs/tridiag.hpp"
#include "oracle_dense.hpp"

using namespace fracobs;

namespace {

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::fabs(a[i] - b[i]));
    return d;
}

}  // namespace

TEST_CASE("laplacian stencil has the classic coefficients") {
    const TriDiag a = laplacian_stencil(3);
    CHECK(a.diag == std::vector<double>{2.0, 2.0, 2.0});
    CHECK(a.sub == std::vector<double>{-1.0, -1.0});
    CHECK(a.sup == std::vector<double>{-1.0, -1.0});
    CHECK_THROWS_AS(laplacian_stencil(0), std::invalid_argument);
}

TEST_CASE("matrix-vector product") {
    const TriDiag a = laplacian_stencil(3);
    const std::vector<double> y = fracobs::apply(a, {1.0, 2.0, 3.0});
    CHECK(y == std::vector<double>{0.0, 0.0, 4.0});
    CHECK_THROWS_AS(fracobs::apply(a, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("heaviside mask is strict at the obstacle") {
    const Mask m = heaviside_mask({1.0, 0.5, 0.2}, {0.5, 0.5, 0.5});
    CHECK(m.bits == std::vector<bool>{true, false, false});
}

TEST_CASE("row masking freezes rows and keeps active couplings") {
    Mask m;
    m.bits = {true, false, true};
    const TriDiag sys = masked_system(m, 2.0, laplacian_stencil(3));
    CHECK(sys.diag == std::vector<double>{5.0, 1.0, 5.0});
    CHECK(sys.sub == std::vector<double>{0.0, -2.0});
    CHECK(sys.sup == std::vector<double>{-2.0, 0.0});
}

TEST_CASE("column masking zeroes couplings into frozen unknowns") {
    Mask m;
    m.bits = {true, false, true};
    const TriDiag sys = column_masked_system(m, 2.0, laplacian_stencil(3));
    CHECK(sys.diag == std::vector<double>{5.0, 1.0, 5.0});
    CHECK(sys.sub == std::vector<double>{-2.0, 0.0});
    CHECK(sys.sup == std::vector<double>{0.0, -2.0});
}

TEST_CASE("masked rows pass their right-hand side through unchanged") {
    Mask m;
    m.bits = {true, false, true, false};
    const TriDiag sys = masked_system(m, 0.7, laplacian_stencil(4));
    const std::vector<double> rhs{1.0, -2.5, 3.0, 4.25};
    const std::vector<double> x = thomas_solve(sys, rhs);
    CHECK(x[1] == doctest::Approx(-2.5).epsilon(1e-14));
    CHECK(x[3] == doctest::Approx(4.25).epsilon(1e-14));
}

TEST_CASE("two by two solve by hand") {
    TriDiag t;
    t.diag = {3.0, 3.0};
    t.sub = {-1.0};
    t.sup = {-1.0};
    const std::vector<double> x = thomas_solve(t, {2.0, 2.0});
    CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("thomas_solve agrees with dense elimination on random dominant systems") {
    std::mt19937 rng(20240517);
    std::uniform_real_distribution<double> off(-1.0, 1.0);
    std::uniform_real_distribution<double> bump(0.1, 2.0);
    std::uniform_real_distribution<double> load(-5.0, 5.0);
    std::uniform_int_distribution<int> dim(1, 300);

    for (int trial = 0; trial < 60; ++trial) {
        const int n = dim(rng);
        TriDiag t;
        t.diag.resize(n);
        t.sub.resize(n - 1);
        t.sup.resize(n - 1);
        for (int i = 0; i + 1 < n; ++i) {
            t.sub[i] = off(rng);
            t.sup[i] = off(rng);
        }
        for (int i = 0; i < n; ++i) {
            double row = 0.0;
            if (i > 0) row += std::fabs(t.sub[i - 1]);
            if (i + 1 < n) row += std::fabs(t.sup[i]);
            t.diag[i] = row + bump(rng);
            if (off(rng) < 0.0) t.diag[i] = -t.diag[i];
        }
        std::vector<double> rhs(n);
        for (double& v : rhs) v = load(rng);

        const std::vector<double> fast = thomas_solve(t, rhs);
        const std::vector<double> slow = dense_solve(to_dense(t), rhs);
        CHECK(max_diff(fast, slow) <= 1e-12);
    }
}

TEST_CASE("masked systems agree with dense elimination") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 17;
        Mask m;
        m.bits.resize(n);
        for (int i = 0; i < n; ++i) m.bits[i] = coin(rng) < 0.6;
        std::vector<double> rhs(n);
        for (double& v : rhs) v = coin(rng) - 0.5;

        for (bool by_column : {false, true}) {
            const TriDiag sys = by_column
                                    ? column_masked_system(m, 3.1, laplacian_stencil(n))
                                    : masked_system(m, 3.1, laplacian_stencil(n));
            const std::vector<double> fast = thomas_solve(sys, rhs);
            const std::vector<double> slow = dense_solve(to_dense(sys), rhs);
            CHECK(max_diff(fast, slow) <= 1e-12);
        }
    }
}

TEST_CASE("zero pivot is reported") {
    TriDiag t;
    t.diag = {0.0};
    CHECK_THROWS_AS(thomas_solve(t, {1.0}), std::runtime_error);

    TriDiag t2;
    t2.diag = {1.0, 1.0};
    t2.sub = {1.0};
    t2.sup = {1.0};
    // elimination makes the second pivot exactly zero
    CHECK_THROWS_AS(thomas_solve(t2, {1.0, 1.0}), std::runtime_error);
}

TEST_CASE("shape errors are rejected") {
    TriDiag t;
    t.diag = {1.0, 1.0};
    t.sub = {0.0};
    t.sup = {0.0};
    CHECK_THROWS_AS(thomas_solve(t, {1.0}), std::invalid_argument);
    TriDiag empty;
    CHECK_THROWS_AS(thomas_solve(empty, {}), std::invalid_argument);
    Mask short_mask;
    short_mask.bits = {true};
    CHECK_THROWS_AS(masked_system(short_mask, 1.0, laplacian_stencil(3)),
                    std::invalid_argument);
    Mask m3;
    m3.bits = {true, true, true};
    CHECK_THROWS_AS(masked_system(m3, -1.0, laplacian_stencil(3)), std::invalid_argument);
}
