#include "e3top/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace e3top {

using expr::DomainError;

namespace {

Vec6 axpy(const Vec6& u, double c, const Vec6& v) {
    Vec6 out;
    for (int i = 0; i < 6; ++i) out[i] = u[i] + c * v[i];
    return out;
}

}  // namespace

Trajectory integrate_field(const std::function<Vec6(const PhasePoint&)>& field,
                           const PhasePoint& p0, double dt, int n) {
    if (!(dt > 0)) throw std::invalid_argument("integrate: dt must be > 0");
    Trajectory traj;
    traj.dt = dt;
    traj.samples.reserve(n + 1);
    Vec6 y = to_vec6(p0);
    traj.samples.emplace_back(0.0, p0);
    for (int i = 1; i <= n; ++i) {
        try {
            const Vec6 k1 = field(from_vec6(y));
            const Vec6 k2 = field(from_vec6(axpy(y, dt / 2, k1)));
            const Vec6 k3 = field(from_vec6(axpy(y, dt / 2, k2)));
            const Vec6 k4 = field(from_vec6(axpy(y, dt, k3)));
            for (int c = 0; c < 6; ++c)
                y[c] += dt / 6 * (k1[c] + 2 * k2[c] + 2 * k3[c] + k4[c]);
        } catch (const DomainError&) {
            traj.aborted = true;
            break;
        }
        bool finite = true;
        for (double v : y) finite = finite && std::isfinite(v);
        if (!finite) {
            traj.aborted = true;
            break;
        }
        traj.samples.emplace_back(i * dt, from_vec6(y));
    }
    return traj;
}

Trajectory integrate(const SystemSpec& sys, const PhasePoint& p0, double dt, int n) {
    return integrate_field(
        [&sys](const PhasePoint& p) { return sgrad_h(sys, p); }, p0, dt, n);
}

Drifts conservation_report(const SystemSpec& sys, const Trajectory& traj) {
    Drifts d;
    if (traj.samples.empty()) return d;
    const PhasePoint& p0 = traj.samples.front().second;
    const double h0 = hamiltonian(sys, p0), k0 = p0.S.z;
    const auto [a0, g0] = casimirs(p0);
    for (const auto& [t, p] : traj.samples) {
        (void)t;
        const auto [a, g] = casimirs(p);
        d.h = std::max(d.h, std::fabs(hamiltonian(sys, p) - h0));
        d.k = std::max(d.k, std::fabs(p.S.z - k0));
        d.f1 = std::max(d.f1, std::fabs(a - a0));
        d.f2 = std::max(d.f2, std::fabs(g - g0));
    }
    return d;
}

std::string trajectory_csv(const SystemSpec& sys, const Trajectory& traj) {
    std::string out = "t,S1,S2,S3,R1,R2,R3,H,K,F1,F2\n";
    char buf[64];
    for (const auto& [t, p] : traj.samples) {
        const auto [a, g] = casimirs(p);
        const double vals[11] = {t,     p.S.x, p.S.y, p.S.z,
                                 p.R.x, p.R.y, p.R.z, hamiltonian(sys, p),
                                 p.S.z, a,     g};
        for (int i = 0; i < 11; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", vals[i]);
            out += buf;
            out += (i == 10) ? '\n' : ',';
        }
    }
    return out;
}

namespace {

using Field4 = std::function<std::array<double, 4>(const std::array<double, 4>&)>;

LinearizationReport jacobian4(const Field4& field, const std::array<double, 4>& base,
                              double fd) {
    LinearizationReport rep;
    rep.fd_step = fd;
    Eigen::Matrix4d A;
    for (int j = 0; j < 4; ++j) {
        std::array<double, 4> up = base, dn = base;
        up[j] += fd;
        dn[j] -= fd;
        const auto fu = field(up), fd_ = field(dn);
        for (int i = 0; i < 4; ++i) {
            A(i, j) = (fu[i] - fd_[i]) / (2 * fd);
            rep.matrix[i][j] = A(i, j);
        }
    }
    const Eigen::EigenSolver<Eigen::Matrix4d> es(A);
    for (int i = 0; i < 4; ++i) rep.eigenvalues[i] = es.eigenvalues()(i);
    // deterministic order: by real part, then imaginary
    std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(),
              [](std::complex<double> u, std::complex<double> v) {
                  return u.real() != v.real() ? u.real() < v.real()
                                              : u.imag() < v.imag();
              });
    return rep;
}

}  // namespace

LinearizationReport linearize_reduced(const SystemSpec& sys, const OrbitParams& orb,
                                      double x, double m, double k,
                                      double c_h, double c_k, double fd_step) {
    const double a = orb.a, g = orb.g, ra = std::sqrt(a);
    const double scale = std::max({ra, std::fabs(g), std::fabs(k), std::fabs(m)});
    const double fd = fd_step > 0 ? fd_step : 1e-5 * (1 + scale);
    const bool rank0 = std::fabs(std::fabs(x) - ra) <= 1e-9 * ra;

    Field4 field;
    std::array<double, 4> base;
    if (rank0) {
        const double s = x > 0 ? 1.0 : -1.0;
        // on-orbit chart (S1, S2, R1, R2) near the pole:
        //   R3 = s*sqrt(a - R1^2 - R2^2), S3 = (g - S1 R1 - S2 R2)/R3
        base = {0, 0, 0, 0};
        field = [&sys, a, g, s, c_h, c_k](const std::array<double, 4>& v) {
            const double r3 = s * std::sqrt(a - v[2] * v[2] - v[3] * v[3]);
            const double s3 = (g - v[0] * v[2] - v[1] * v[3]) / r3;
            const PhasePoint p{{v[0], v[1], s3}, {v[2], v[3], r3}};
            const Vec6 fh = sgrad_h(sys, p);
            const Vec6 fk = sgrad_k(p);
            return std::array<double, 4>{c_h * fh[0] + c_k * fk[0],
                                         c_h * fh[1] + c_k * fk[1],
                                         c_h * fh[3] + c_k * fk[3],
                                         c_h * fh[4] + c_k * fk[4]};
        };
    } else {
        // reduced chart (x, m, phi, k); the K-field contributes phi' = 1
        base = {x, m, 0, k};
        field = [&sys, a, g, c_h, c_k](const std::array<double, 4>& v) {
            const ReducedPoint r{v[0], v[1], v[2], v[3], a, g};
            const std::array<double, 4> fh = reduced_field(sys, r);
            return std::array<double, 4>{c_h * fh[0], c_h * fh[1],
                                         c_h * fh[2] + c_k, c_h * fh[3]};
        };
    }

    const auto f0 = field(base);
    double norm = 0;
    for (double v : f0) norm = std::max(norm, std::fabs(v));
    if (norm > 1e-8 * (1 + scale))
        throw std::invalid_argument(
            "linearize_reduced: combination field does not vanish at the base "
            "point (|field| = " + std::to_string(norm) + ")");

    LinearizationReport rep = jacobian4(field, base, fd);
    rep.x = x;
    rep.m = m;
    rep.k = k;
    rep.c_h = c_h;
    rep.c_k = c_k;
    return rep;
}

double match_spectra(const std::array<std::complex<double>, 4>& u,
                     const std::array<std::complex<double>, 4>& v) {
    std::array<int, 4> idx = {0, 1, 2, 3};
    double best = 1e300;
    std::sort(idx.begin(), idx.end());
    do {
        double worst = 0;
        for (int i = 0; i < 4; ++i)
            worst = std::max(worst, std::abs(u[i] - v[idx[i]]));
        best = std::min(best, worst);
    } while (std::next_permutation(idx.begin(), idx.end()));
    return best;
}

}  // namespace e3top
