#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "hgsts/trajectory.hpp"

using namespace hgsts;

namespace {

const ErdosCatalog& cat8() {
    static const ErdosCatalog c = enumerate_erdos(8);
    return c;
}

Trajectory traj(int n, int k, TrackingConstants c = {}) { return Trajectory(make_params(n, k, cat8(), c)); }

// Closed-form antiderivative of rho: sum_j J_j b^{j-2} / ((j-2) N3^{j-3}).
double rho_integral_exact(int n, int k) {
    const double n3 = binom_real(n, 3);
    const double b = static_cast<double>(n) * n / 6.0;
    double s = 0;
    for (int j = 6; j <= k + 2; ++j) {
        const double J = count_J(n, j, cat8());
        s += J * b / (j - 2) * std::pow(b / n3, j - 3);
    }
    return s;
}

}  // namespace

TEST(Trajectory, BoundaryValues) {
    const auto tr = traj(100, 4);
    EXPECT_DOUBLE_EQ(tr.p(0), 1.0);
    EXPECT_NEAR(tr.p(tr.i_max()), 0.0, 1e-12);
    EXPECT_DOUBLE_EQ(tr.rho(0), 0.0);
    EXPECT_DOUBLE_EQ(tr.f_edge(0), 98.0);
    EXPECT_DOUBLE_EQ(tr.A_traj(0), binom_real(100, 3));
    EXPECT_DOUBLE_EQ(tr.eps(0), 0.07);
    EXPECT_THROW((void)tr.p(-1), InvalidArgument);
    EXPECT_THROW((void)tr.p(tr.i_max() + 1), InvalidArgument);
}

TEST(Trajectory, FOverAIsRhoPrime) {
    for (int k : {4, 5, 6}) {
        const auto tr = traj(1000, k);
        for (int x = 1; x < 20; ++x) {
            const double i = tr.i_max() * x / 20.0;
            EXPECT_NEAR(tr.F_traj(i) / tr.A_traj(i), tr.rho_prime(i), 1e-12 * tr.rho_prime(i)) << "k=" << k << " i=" << i;
        }
    }
}

TEST(Trajectory, SmallFOverA) {
    const int n = 500;
    const auto tr = traj(n, 6);
    for (int x = 0; x < 20; ++x) {
        const double i = tr.i_max() * x / 20.0;
        const double want = 6.0 / (tr.p(i) * n * (n - 1.0));
        EXPECT_NEAR(tr.f_edge(i) / tr.A_traj(i), want, 1e-12 * want);
        EXPECT_NEAR(tr.A_identity(i), tr.A_traj(i), 1e-9 * tr.A_traj(i));
    }
}

TEST(Trajectory, RhoPrimeMatchesFivePointStencil) {
    const auto tr = traj(2000, 6);
    const double h = 50.0;
    for (int x = 1; x < 10; ++x) {
        const double i = tr.i_max() * x / 10.0;
        const double d = (-tr.rho(i + 2 * h) + 8 * tr.rho(i + h) - 8 * tr.rho(i - h) + tr.rho(i - 2 * h)) / (12 * h);
        EXPECT_NEAR(d, tr.rho_prime(i), 1e-7 * tr.rho_prime(i));
    }
}

TEST(Trajectory, DerivativeIdentitiesOnGrid) {
    for (int k : {4, 6}) {
        const auto tr = traj(10000, k);
        double worst = 0;
        for (int x = 1; x <= 100; ++x) {
            const double i = tr.i_max() * x / 101.0;
            for (const auto& r : derivative_checks(tr, i)) worst = std::max(worst, r.relative);
        }
        EXPECT_LE(worst, 1e-6) << "k=" << k;
    }
    EXPECT_THROW(derivative_checks(traj(100, 4), 0), InvalidArgument);
}

TEST(Trajectory, FjcDerivativeAgainstIndependentStencil) {
    const auto tr = traj(3000, 5);
    const double h = 100;
    for (double frac : {0.2, 0.5, 0.8}) {
        const double i = tr.i_max() * frac;
        const double fe = (-tr.f_edge(i + 2 * h) + 8 * tr.f_edge(i + h) - 8 * tr.f_edge(i - h) + tr.f_edge(i - 2 * h)) / (12 * h);
        EXPECT_NEAR(fe, tr.f_edge_prime_closed(i), 1e-6 * std::abs(fe));
        for (int j = 6; j <= 7; ++j) {
            for (int c = 0; c <= j - 4; ++c) {
                auto f = [&](double y) { return tr.f_jc(y, j, c); };
                const double d = (-f(i + 2 * h) + 8 * f(i + h) - 8 * f(i - h) + f(i - 2 * h)) / (12 * h);
                EXPECT_NEAR(d, tr.f_jc_prime_closed(i, j, c), 1e-5 * (std::abs(d) + 1e-12)) << j << "," << c;
            }
        }
    }
}

TEST(Trajectory, FjcArgumentChecks) {
    const auto tr = traj(100, 4);
    EXPECT_THROW((void)tr.f_jc(10, 5, 0), InvalidArgument);
    EXPECT_THROW((void)tr.f_jc(10, 7, 0), InvalidArgument);
    EXPECT_THROW((void)tr.f_jc(10, 6, 3), InvalidArgument);
    EXPECT_NO_THROW((void)tr.f_jc(10, 6, 2));
}

TEST(Trajectory, EpsAndCutoff) {
    TrackingConstants c;
    c.C = 3;
    c.eps0 = 0.1;
    c.gamma = 0.25;
    const auto tr = traj(200, 4, c);
    EXPECT_NEAR(tr.eps(1000), 0.1 * std::pow(1 + 3.0 / 40000, 1000), 1e-12);
    EXPECT_EQ(tr.tau_cut(), 5000);
    EXPECT_THROW(make_params(200, 4, cat8(), TrackingConstants{2, 0, 0.4}), InvalidArgument);
    EXPECT_THROW(make_params(200, 4, cat8(), TrackingConstants{2, 0.1, 1.0}), InvalidArgument);
    EXPECT_THROW(make_params(200, 7, cat8()), InvalidArgument);
}

TEST(Trajectory, DefaultBandMarginPositive) {
    for (int n : {100, 150, 300, 500, 1000, 10000}) EXPECT_GT(traj(n, 4).band_margin(), 0) << n;
}

TEST(LogCount, ConstantsFromErdValues) {
    EXPECT_DOUBLE_EQ(conjectured_log_count(1000, 4, &cat8()).constant, 2.25);
    EXPECT_DOUBLE_EQ(conjectured_log_count(1000, 5, &cat8()).constant, 2.25 + 60.0 / 120.0);
    EXPECT_DOUBLE_EQ(conjectured_log_count(1000, 6, &cat8()).constant, 2.75 + 2520.0 / 720.0);
    EXPECT_DOUBLE_EQ(conjectured_log_count(1000, 2, &cat8()).constant, 2.0);
    const auto lc = conjectured_log_count(1000, 4, &cat8());
    EXPECT_NEAR(lc.log_count, 1e6 / 6.0 * (std::log(1000.0) - 2.25), 1e-6);
    EXPECT_THROW(conjectured_log_count(1000, 7, &cat8()), InvalidArgument);
    EXPECT_THROW(conjectured_log_count(1000, 4, nullptr), InvalidArgument);
}

TEST(LogCount, QuadratureMatchesClosedForm) {
    for (int k : {4, 6}) {
        const auto tr = traj(2000, k);
        const double exact = rho_integral_exact(2000, k);
        EXPECT_NEAR(rho_integral(tr), exact, 1e-8 * exact);
    }
}

TEST(LogCount, QuadratureNearAsymptoticSum) {
    const int n = 2000;
    const auto tr = traj(n, 4);
    const double want = n * static_cast<double>(n) / 6.0 * (6.0 / 24.0);
    EXPECT_NEAR(rho_integral(tr), want, 0.01 * want);
}

TEST(TrajectoryCsv, ColumnsAndTrailer) {
    const auto tr = traj(100, 5);
    const auto csv = trajectory_csv(tr, {0, 100, 200});
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "i,p,rho,f_edge,A,F,f_6_0,f_6_1,f_6_2,f_7_0,f_7_1,f_7_2,f_7_3,eps");
    int rows = 0;
    std::string last;
    while (std::getline(is, line)) {
        if (line.rfind("# schema", 0) == 0) {
            last = line;
            continue;
        }
        ++rows;
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 13);
    }
    EXPECT_EQ(rows, 3);
    EXPECT_EQ(last, "# schema trajectory-csv v1");
}
