#ifndef E3TOP_DYNAMICS_HPP
#define E3TOP_DYNAMICS_HPP

#include <array>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "e3top/e3core.hpp"

namespace e3top {

struct Trajectory {
    std::vector<std::pair<double, PhasePoint>> samples;  // (t, point)
    double dt = 0;
    std::string method = "rk4";
    bool aborted = false;  // domain blow-up; samples hold the partial run
};

/// Classical fixed-step RK4 for an arbitrary field on R^6.
Trajectory integrate_field(const std::function<Vec6(const PhasePoint&)>& field,
                           const PhasePoint& p0, double dt, int n);

/// The Euler equations: RK4 flow of sgrad H.
Trajectory integrate(const SystemSpec& sys, const PhasePoint& p0, double dt, int n);

struct Drifts {
    double h = 0, k = 0, f1 = 0, f2 = 0;
};

/// Sup-norm drifts of (H, K, F1, F2) relative to the initial sample.
Drifts conservation_report(const SystemSpec& sys, const Trajectory& traj);

/// CSV: t,S1,S2,S3,R1,R2,R3,H,K,F1,F2.
std::string trajectory_csv(const SystemSpec& sys, const Trajectory& traj);

struct LinearizationReport {
    double x = 0, m = 0, k = 0;
    double c_h = 1, c_k = 0;
    std::array<std::array<double, 4>, 4> matrix{};
    std::array<std::complex<double>, 4> eigenvalues{};
    double fd_step = 0;
};

/// Central-difference Jacobian of the field of c_H * H + c_K * K in a 4-dim
/// chart: (S1, S2, R1, R2) on the orbit near the pole when x^2 = a (rank-0),
/// else (x, m, phi, k) (rank-1).  Throws std::invalid_argument when the
/// combination field does not vanish at the base point (tolerance 1e-8).
LinearizationReport linearize_reduced(const SystemSpec& sys, const OrbitParams& orb,
                                      double x, double m, double k,
                                      double c_h, double c_k, double fd_step = 0);

/// Minimal over pairings of the maximum complex distance between two
/// 4-element spectra (exact bipartite matching by permutation search).
double match_spectra(const std::array<std::complex<double>, 4>& u,
                     const std::array<std::complex<double>, 4>& v);

}  // namespace e3top

#endif
