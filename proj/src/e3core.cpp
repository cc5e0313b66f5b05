#include "e3top/e3core.hpp"

namespace e3top {

using expr::DomainError;
using expr::Expr;

SystemSpec::SystemSpec(double beta_, Expr g1_, Expr g2_, Expr g3_, Expr V_)
    : beta(beta_), g1(g1_), g2(g2_), g3(g3_), V(V_) {
    if (!(beta > 0)) throw std::invalid_argument("SystemSpec: beta must be > 0");
}

SystemSpec make_lagrange(double beta) {
    return SystemSpec(beta, Expr(), Expr(), Expr(), Expr::parse("-x"));
}

SystemSpec make_leggett(double gamma) {
    return SystemSpec(1.0, Expr(), Expr(),
                      Expr::constant(-gamma / 2), Expr::parse("-x^2/2"));
}

std::pair<double, double> casimirs(const PhasePoint& p) {
    return {dot(p.R, p.R), dot(p.S, p.R)};
}

double hamiltonian(const SystemSpec& sys, const PhasePoint& p) {
    const auto [a, g] = casimirs(p);
    const double x = p.R.z;
    const double m = p.S.x * p.R.y - p.S.y * p.R.x;
    return 0.5 * (p.S.x * p.S.x + p.S.y * p.S.y + p.S.z * p.S.z / sys.beta) +
           sys.g1.f.eval(a, x) * m + sys.g2.f.eval(a, x) * g +
           sys.g3.f.eval(a, x) * p.S.z + sys.V.f.eval(a, x);
}

void grad_h(const SystemSpec& sys, const PhasePoint& p, Vec3& dS, Vec3& dR) {
    const auto [a, g] = casimirs(p);
    const double x = p.R.z;
    const double m = p.S.x * p.R.y - p.S.y * p.R.x;

    const double g1 = sys.g1.f.eval(a, x), g1x = sys.g1.fx.eval(a, x),
                 g1a = sys.g1.fa.eval(a, x);
    const double g2 = sys.g2.f.eval(a, x), g2x = sys.g2.fx.eval(a, x),
                 g2a = sys.g2.fa.eval(a, x);
    const double g3 = sys.g3.f.eval(a, x), g3x = sys.g3.fx.eval(a, x),
                 g3a = sys.g3.fa.eval(a, x);
    const double Vx = sys.V.fx.eval(a, x), Va = sys.V.fa.eval(a, x);

    dS = {p.S.x + g1 * p.R.y + g2 * p.R.x,
          p.S.y - g1 * p.R.x + g2 * p.R.y,
          p.S.z / sys.beta + g2 * p.R.z + g3};

    // d m/dR = (-S2, S1, 0); the chain rule carries da/dR = 2R, dx/dR3 = 1.
    const Vec3 dm = {-p.S.y, p.S.x, 0};
    const double common1 = g1a * m + g2a * g + g3a * p.S.z + Va;
    dR = {2 * p.R.x * common1 + g1 * dm.x + g2 * p.S.x,
          2 * p.R.y * common1 + g1 * dm.y + g2 * p.S.y,
          2 * p.R.z * common1 + g1x * m + g2x * g + g3x * p.S.z + Vx +
              g2 * p.S.z};
}

Vec6 sgrad_h(const SystemSpec& sys, const PhasePoint& p) {
    Vec3 dS, dR;
    grad_h(sys, p, dS, dR);
    const Vec3 Sdot = cross(dS, p.S) + cross(dR, p.R);
    const Vec3 Rdot = cross(dS, p.R);
    return {Sdot.x, Sdot.y, Sdot.z, Rdot.x, Rdot.y, Rdot.z};
}

Vec6 sgrad_k(const PhasePoint& p) {
    return {-p.S.y, p.S.x, 0, -p.R.y, p.R.x, 0};
}

ReducedPoint to_reduced(const PhasePoint& p) {
    const double rho2 = p.R.x * p.R.x + p.R.y * p.R.y;
    if (rho2 == 0)
        throw DomainError("to_reduced: point has R1 = R2 = 0 (outside the chart)");
    const auto [a, g] = casimirs(p);
    double phi = std::atan2(p.R.y, p.R.x);
    if (phi < 0) phi += 2 * M_PI;
    return {p.R.z, p.S.x * p.R.y - p.S.y * p.R.x, phi, p.S.z, a, g};
}

PhasePoint from_reduced(const ReducedPoint& r) {
    const double u = r.a - r.x * r.x;
    if (!(u > 0))
        throw DomainError("from_reduced: x^2 >= a");
    const double rho = std::sqrt(u);
    const double c = std::cos(r.phi), s = std::sin(r.phi);
    const double t = r.g - r.k * r.x;
    return {{(t * c + r.m * s) / rho, (t * s - r.m * c) / rho, r.k},
            {rho * c, rho * s, r.x}};
}

double reduced_hamiltonian(const SystemSpec& sys, const ReducedPoint& r) {
    const double u = r.a - r.x * r.x;
    if (!(u > 0)) throw DomainError("reduced_hamiltonian: x^2 >= a");
    const double t = r.g - r.k * r.x;
    return (t * t + r.m * r.m) / (2 * u) + r.k * r.k / (2 * sys.beta) +
           sys.g1.f.eval(r.a, r.x) * r.m + sys.g2.f.eval(r.a, r.x) * r.g +
           sys.g3.f.eval(r.a, r.x) * r.k + sys.V.f.eval(r.a, r.x);
}

Potential reduced_potential(const SystemSpec& sys, const OrbitParams& orb,
                            double k, double x) {
    const double a = orb.a, g = orb.g;
    const double u = a - x * x;
    if (!(u > 0)) throw DomainError("reduced_potential: x^2 >= a");

    const double g1 = sys.g1.f.eval(a, x), g1x = sys.g1.fx.eval(a, x),
                 g1xx = sys.g1.fxx.eval(a, x);
    const double g2 = sys.g2.f.eval(a, x), g2x = sys.g2.fx.eval(a, x),
                 g2xx = sys.g2.fxx.eval(a, x);
    const double g3 = sys.g3.f.eval(a, x), g3x = sys.g3.fx.eval(a, x),
                 g3xx = sys.g3.fxx.eval(a, x);
    const double V = sys.V.f.eval(a, x), Vx = sys.V.fx.eval(a, x),
                 Vxx = sys.V.fxx.eval(a, x);

    const double t = g - k * x;
    Potential p;
    p.w = t * t / (2 * u) + k * k / (2 * sys.beta) - g1 * g1 * u / 2 + g2 * g +
          g3 * k + V;
    // d/dx[(g-kx)^2/(2(a-x^2))] = (g-kx)(gx-ka)/(a-x^2)^2
    const double N = t * (g * x - k * a);
    p.wx = N / (u * u) + x * g1 * g1 - u * g1 * g1x + g * g2x + k * g3x + Vx;
    const double Nprime = g * g - 2 * g * k * x + a * k * k;
    p.wxx = (Nprime * u + 4 * x * N) / (u * u * u) + g1 * g1 +
            4 * x * g1 * g1x - u * (g1x * g1x + g1 * g1xx) + g * g2xx +
            k * g3xx + Vxx;
    return p;
}

ReducedGrad reduced_grad(const SystemSpec& sys, const ReducedPoint& r) {
    const double a = r.a, g = r.g, x = r.x, m = r.m, k = r.k;
    const double u = a - x * x;
    if (!(u > 0)) throw DomainError("reduced_grad: x^2 >= a");
    const double g1 = sys.g1.f.eval(a, x), g1x = sys.g1.fx.eval(a, x);
    const double g2x = sys.g2.fx.eval(a, x);
    const double g3 = sys.g3.f.eval(a, x), g3x = sys.g3.fx.eval(a, x);
    const double Vx = sys.V.fx.eval(a, x);
    const double t = g - k * x;
    ReducedGrad out;
    out.h_m = m / u + g1;
    out.h_x = (x * (t * t + m * m) - k * t * u) / (u * u) + g1x * m + g2x * g +
              g3x * k + Vx;
    out.h_k = x * (k * x - g) / u + k / sys.beta + g3;
    return out;
}

std::array<double, 4> reduced_field(const SystemSpec& sys, const ReducedPoint& r) {
    const double u = r.a - r.x * r.x;
    const ReducedGrad d = reduced_grad(sys, r);
    return {u * d.h_m, -u * d.h_x, d.h_k, 0};
}

std::array<double, 6> pushforward_reduced(const PhasePoint& p, const Vec6& v) {
    const double rho2 = p.R.x * p.R.x + p.R.y * p.R.y;
    if (rho2 == 0)
        throw DomainError("pushforward_reduced: R1 = R2 = 0 (outside the chart)");
    const double dS1 = v[0], dS2 = v[1], dS3 = v[2];
    const double dR1 = v[3], dR2 = v[4], dR3 = v[5];
    return {
        dR3,                                                           // x
        p.R.y * dS1 - p.R.x * dS2 + p.S.x * dR2 - p.S.y * dR1,         // m
        (-p.R.y * dR1 + p.R.x * dR2) / rho2,                           // phi
        dS3,                                                           // k
        2 * (p.R.x * dR1 + p.R.y * dR2 + p.R.z * dR3),                 // a
        p.R.x * dS1 + p.R.y * dS2 + p.R.z * dS3 + p.S.x * dR1 +
            p.S.y * dR2 + p.S.z * dR3,                                 // g
    };
}

}  // namespace e3top
