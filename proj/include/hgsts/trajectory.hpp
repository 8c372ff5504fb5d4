#pragma once

// Analytic trajectories for the removal process: densities, rho, f_edge, A, f_{j,c}, F,
// error functions, the cutoff time, derivative identities, and the conjectured log-count.
// The step index i is treated as a real variable throughout.

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hgsts/configs.hpp"
#include "hgsts/schema.hpp"
#include "hgsts/triple.hpp"

namespace hgsts {

/// Tracking constants. Defaults are calibrated for desk-scale n (see README); they satisfy
/// the band check f_edge(tau_cut) > eps(tau_cut) n for every n >= 100.
struct TrackingConstants {
    double C = 2.0;
    double eps0 = 0.07;
    double gamma = 0.4;
};

struct TrajectoryParams {
    int n = 0;
    int k = 0;
    std::map<int, double> J;  // j -> J_j for 4 <= j <= k+2
    TrackingConstants constants;

    [[nodiscard]] int j_max() const { return k + 2; }
    [[nodiscard]] int m() const { return 2 * j_max(); }
};

inline TrajectoryParams make_params(int n, int k, const ErdosCatalog& catalog, TrackingConstants c = {}) {
    if (k < 2) throw InvalidArgument("trajectory: k must be at least 2");
    if (n < k + 2) throw InvalidArgument("trajectory: n must be at least k+2");
    if (!(c.eps0 > 0 && c.eps0 <= 1)) throw InvalidArgument("trajectory: eps0 must lie in (0, 1]");
    if (!(c.gamma > 0 && c.gamma < 1)) throw InvalidArgument("trajectory: gamma must lie in (0, 1)");
    if (!(c.C >= 0)) throw InvalidArgument("trajectory: C must be non-negative");
    TrajectoryParams p;
    p.n = n;
    p.k = k;
    p.constants = c;
    for (int j = 4; j <= k + 2; ++j) {
        if (j > catalog.j_max()) throw InvalidArgument("trajectory: catalog does not cover k+2");
        p.J[j] = count_J(n, j, catalog);
    }
    return p;
}

class Trajectory {
public:
    explicit Trajectory(TrajectoryParams params)
        : P_(std::move(params)),
          N2_(binom_real(P_.n, 2)),
          N3_(binom_real(P_.n, 3)) {}

    [[nodiscard]] const TrajectoryParams& params() const { return P_; }
    [[nodiscard]] double i_max() const { return N2_ / 3.0; }

    [[nodiscard]] double p(double i) const {
        check_range(i);
        return 1.0 - 3.0 * i / N2_;
    }
    [[nodiscard]] double p_C(double i) const {
        check_range(i);
        return i / N3_;
    }

    /// Not range-checked: the quadrature for the log-count integrates to n^2/6 > C(n,2)/3.
    [[nodiscard]] double rho(double i) const {
        double s = 0;
        for (int j = 6; j <= P_.j_max(); ++j) s += J(j) * std::pow(i / N3_, j - 3);
        return s;
    }
    [[nodiscard]] double rho_prime(double i) const {
        double s = 0;
        for (int j = 6; j <= P_.j_max(); ++j) s += (j - 3) * J(j) / N3_ * std::pow(i / N3_, j - 4);
        return s;
    }

    [[nodiscard]] double f_edge(double i) const {
        const double pp = p(i);
        return std::exp(-rho(i)) * pp * pp * (P_.n - 2);
    }
    [[nodiscard]] double A_traj(double i) const {
        const double pp = p(i);
        return std::exp(-rho(i)) * pp * pp * pp * N3_;
    }
    /// The equivalent form (1/3) p(i) C(n,2) f_edge(i).
    [[nodiscard]] double A_identity(double i) const { return p(i) * N2_ * f_edge(i) / 3.0; }

    [[nodiscard]] double f_jc(double i, int j, int c) const {
        if (j < 6 || j > P_.j_max()) throw InvalidArgument("f_jc: j outside [6, j_max]");
        if (c < 0 || c > j - 4) throw InvalidArgument("f_jc: c outside [0, j-4]");
        const double pp = p(i);
        const int free = j - 3 - c;
        const double base = std::exp(-free * rho(i)) * std::pow(pp, 3 * free) * J(j);
        if (c == 0) return base;
        return binom_real(j - 3, c) * base * std::pow(i / N3_, c);
    }

    [[nodiscard]] double F_traj(double i) const {
        double s = 0;
        for (int j = 6; j <= P_.j_max(); ++j) s += f_jc(i, j, j - 4);
        return s;
    }

    [[nodiscard]] double eps(double i) const {
        const double nn = static_cast<double>(P_.n) * P_.n;
        return std::exp(i * std::log1p(P_.constants.C / nn)) * P_.constants.eps0;
    }
    [[nodiscard]] double eps_kl(double i, int kappa, int ell) const {
        if (ell < 1 || ell > P_.m()) throw InvalidArgument("eps_kl: ell outside [1, m]");
        if (kappa < 0 || kappa > ell) throw InvalidArgument("eps_kl: kappa outside [0, ell]");
        const double nn = static_cast<double>(P_.n) * P_.n;
        return std::pow(P_.n, kappa + static_cast<double>(ell) / (P_.m() + kappa)) * (1.0 + i / nn);
    }
    [[nodiscard]] std::int64_t tau_cut() const {
        return static_cast<std::int64_t>(std::floor((1.0 - P_.constants.gamma) * P_.n * static_cast<double>(P_.n) / 6.0));
    }

    /// Margin f_edge(tau_cut) - eps(tau_cut) n; the constants are usable only if positive.
    [[nodiscard]] double band_margin() const {
        const auto t = static_cast<double>(tau_cut());
        return f_edge(t) - eps(t) * P_.n;
    }

    // Closed-form right-hand sides of the derivative identities.
    [[nodiscard]] double f_edge_prime_closed(double i) const {
        return -(2 * f_edge(i) + F_traj(i)) * f_edge(i) / A_traj(i);
    }
    [[nodiscard]] double f_jc_prime_closed(double i, int j, int c) const {
        const double lead = -(j - 3 - c) * (3 * f_edge(i) + F_traj(i)) * f_jc(i, j, c) / A_traj(i);
        if (c == 0) return lead;
        return lead + (j - 2 - c) * f_jc(i, j, c - 1) / A_traj(i);
    }

private:
    [[nodiscard]] double J(int j) const {
        auto it = P_.J.find(j);
        return it == P_.J.end() ? 0.0 : it->second;
    }
    void check_range(double i) const {
        if (i < 0 || i > N2_ / 3.0 * (1 + 1e-12)) {
            throw InvalidArgument("trajectory: i = " + std::to_string(i) + " outside [0, C(n,2)/3]");
        }
    }

    TrajectoryParams P_;
    double N2_;
    double N3_;
};

struct DerivativeResidual {
    std::string name;  // "edge" or "j=<j>,c=<c>"
    double finite_difference = 0;
    double closed_form = 0;
    double relative = 0;
};

/// Five-point central differences against the closed forms. The default step is a small
/// fraction of the distance to the nearer end of [0, C(n,2)/3]. Residuals are relative to the
/// sum of absolute values of the closed-form terms, which stays meaningful where they nearly cancel.
inline std::vector<DerivativeResidual> derivative_checks(const Trajectory& tr, double i, double h = -1) {
    const auto& P = tr.params();
    if (h <= 0) h = 1e-3 * std::min(i, tr.i_max() - i);
    if (!(h > 0) || i - 2 * h < 0 || i + 2 * h > tr.i_max()) {
        throw InvalidArgument("derivative_checks: i too close to the range ends");
    }
    auto stencil = [h](const auto& f) { return (-f(2 * h) + 8 * f(h) - 8 * f(-h) + f(-2 * h)) / (12 * h); };
    std::vector<DerivativeResidual> out;
    {
        DerivativeResidual r;
        r.name = "edge";
        r.finite_difference = stencil([&](double d) { return tr.f_edge(i + d); });
        r.closed_form = tr.f_edge_prime_closed(i);
        r.relative = std::abs(r.finite_difference - r.closed_form) / std::abs(r.closed_form);
        out.push_back(r);
    }
    for (int j = 6; j <= P.j_max(); ++j) {
        for (int c = 0; c <= j - 4; ++c) {
            DerivativeResidual r;
            r.name = "j=" + std::to_string(j) + ",c=" + std::to_string(c);
            r.finite_difference = stencil([&](double d) { return tr.f_jc(i + d, j, c); });
            r.closed_form = tr.f_jc_prime_closed(i, j, c);
            double scale = std::abs((j - 3 - c) * (3 * tr.f_edge(i) + tr.F_traj(i)) * tr.f_jc(i, j, c) / tr.A_traj(i));
            if (c > 0) scale += std::abs((j - 2 - c) * tr.f_jc(i, j, c - 1) / tr.A_traj(i));
            r.relative = std::abs(r.finite_difference - r.closed_form) / scale;
            out.push_back(r);
        }
    }
    return out;
}

struct LogCount {
    double constant = 0;   // 2 + sum_{j=6}^{k+2} erd_j/(j-2)!
    double log_count = 0;  // (n^2/6)(ln n - constant)
};

/// Conjectured leading-order log of the number of k-sparse Steiner triple systems.
inline LogCount conjectured_log_count(int n, int k, const ErdosCatalog* catalog) {
    if (k < 2) throw InvalidArgument("conjectured_log_count: k must be at least 2");
    if (n < 1) throw InvalidArgument("conjectured_log_count: n must be positive");
    LogCount lc;
    lc.constant = 2.0;
    for (int j = 6; j <= k + 2; ++j) {
        if (catalog == nullptr || j > catalog->j_max()) {
            throw InvalidArgument("conjectured_log_count: catalog must cover k+2");
        }
        lc.constant += static_cast<double>(catalog->erd(j)) / factorial_real(j - 2);
    }
    lc.log_count = static_cast<double>(n) * n / 6.0 * (std::log(static_cast<double>(n)) - lc.constant);
    return lc;
}

/// Composite Simpson quadrature of rho over [0, n^2/6].
inline double rho_integral(const Trajectory& tr, int intervals = 20000) {
    if (intervals % 2 == 1) ++intervals;
    const double n = tr.params().n;
    const double b = n * n / 6.0;
    const double h = b / intervals;
    double s = tr.rho(0) + tr.rho(b);
    for (int x = 1; x < intervals; ++x) s += (x % 2 == 1 ? 4 : 2) * tr.rho(x * h);
    return s * h / 3.0;
}

/// Grid export: columns i,p,rho,f_edge,A,F,f_<j>_<c>...,eps.
inline std::string trajectory_csv(const Trajectory& tr, const std::vector<double>& grid) {
    const auto& P = tr.params();
    std::ostringstream os;
    os.precision(17);
    os << "i,p,rho,f_edge,A,F";
    for (int j = 6; j <= P.j_max(); ++j) {
        for (int c = 0; c <= j - 4; ++c) os << ",f_" << j << '_' << c;
    }
    os << ",eps\n";
    for (double i : grid) {
        os << i << ',' << tr.p(i) << ',' << tr.rho(i) << ',' << tr.f_edge(i) << ',' << tr.A_traj(i) << ','
           << tr.F_traj(i);
        for (int j = 6; j <= P.j_max(); ++j) {
            for (int c = 0; c <= j - 4; ++c) os << ',' << tr.f_jc(i, j, c);
        }
        os << ',' << tr.eps(i) << '\n';
    }
    os << schema_line("trajectory-csv");
    return os.str();
}

}  // namespace hgsts
