#ifndef E3TOP_E3CORE_HPP
#define E3TOP_E3CORE_HPP

#include <array>
#include <cmath>
#include <utility>

#include "e3top/expr.hpp"

namespace e3top {

struct Vec3 {
    double x = 0, y = 0, z = 0;
};

inline Vec3 operator+(Vec3 u, Vec3 v) { return {u.x + v.x, u.y + v.y, u.z + v.z}; }
inline Vec3 operator-(Vec3 u, Vec3 v) { return {u.x - v.x, u.y - v.y, u.z - v.z}; }
inline Vec3 operator*(double c, Vec3 v) { return {c * v.x, c * v.y, c * v.z}; }
inline double dot(Vec3 u, Vec3 v) { return u.x * v.x + u.y * v.y + u.z * v.z; }
inline Vec3 cross(Vec3 u, Vec3 v) {
    return {u.y * v.z - u.z * v.y, u.z * v.x - u.x * v.z, u.x * v.y - u.y * v.x};
}

/// A point (S, R) of R^6 ~ e(3)*.
struct PhasePoint {
    Vec3 S, R;
};

using Vec6 = std::array<double, 6>;

inline Vec6 to_vec6(const PhasePoint& p) {
    return {p.S.x, p.S.y, p.S.z, p.R.x, p.R.y, p.R.z};
}
inline PhasePoint from_vec6(const Vec6& v) {
    return {{v[0], v[1], v[2]}, {v[3], v[4], v[5]}};
}

/// Casimir values of a coadjoint orbit: a = <R,R> > 0, g = <S,R>.
struct OrbitParams {
    double a = 1;
    double g = 0;
};

/// Coordinates (x, m, phi, k, a, g) on the chart R1^2 + R2^2 != 0,
/// with x = R3, m = S1 R2 - S2 R1, phi = arg(R1 + i R2), k = S3.
struct ReducedPoint {
    double x = 0, m = 0, phi = 0, k = 0;
    double a = 1, g = 0;
};

/// The Hamiltonian
///   H = (S1^2 + S2^2 + S3^2/beta)/2 + g1*(S1 R2 - S2 R1)
///       + g2*<S,R> + g3*S3 + V,
/// where g1, g2, g3, V are functions of (a, x) = (<R,R>, R3).
class SystemSpec {
public:
    /// Holds one of g1, g2, g3, V together with its cached derivatives.
    struct Func {
        expr::Expr f, fx, fxx, fa;
        explicit Func(expr::Expr e)
            : f(e), fx(e.diff_x()), fxx(e.diff_x().diff_x()), fa(e.diff_a()) {}
        Func() : Func(expr::Expr()) {}
    };

    SystemSpec(double beta, expr::Expr g1, expr::Expr g2, expr::Expr g3, expr::Expr V);

    double beta;
    Func g1, g2, g3, V;
};

/// Lagrange-top normal form: beta = 1, V = -x, g1 = g2 = g3 = 0.
SystemSpec make_lagrange(double beta = 1.0);
/// Leggett spin system, rescaled by 1/2: beta = 1, g3 = -gamma/2, V = -x^2/2.
SystemSpec make_leggett(double gamma = 1.0);

/// (F1, F2) = (<R,R>, <S,R>).
std::pair<double, double> casimirs(const PhasePoint& p);

double hamiltonian(const SystemSpec& sys, const PhasePoint& p);

/// Full gradient of H: (dH/dS, dH/dR), with the R-part taken through the
/// chain rule a = <R,R>, x = R3.
void grad_h(const SystemSpec& sys, const PhasePoint& p, Vec3& dS, Vec3& dR);

/// Skew-gradient of H: (dH/dS x S + dH/dR x R, dH/dS x R).
Vec6 sgrad_h(const SystemSpec& sys, const PhasePoint& p);

/// Skew-gradient of K = S3: (-S2, S1, 0, -R2, R1, 0).
Vec6 sgrad_k(const PhasePoint& p);

/// Chart map; throws DomainError when R1 = R2 = 0.
ReducedPoint to_reduced(const PhasePoint& p);

/// Inverse chart map; throws DomainError when x^2 >= a.
PhasePoint from_reduced(const ReducedPoint& r);

/// H in the chart coordinates:
///   ((g-kx)^2 + m^2)/(2(a-x^2)) + k^2/(2 beta) + g1 m + g2 g + g3 k + V.
double reduced_hamiltonian(const SystemSpec& sys, const ReducedPoint& r);

/// Reduced potential W(k, x) and its first two x-partials.
struct Potential {
    double w, wx, wxx;
};

/// W = (g-kx)^2/(2(a-x^2)) + k^2/(2 beta) - g1^2 (a-x^2)/2 + g2 g + g3 k + V.
Potential reduced_potential(const SystemSpec& sys, const OrbitParams& orb,
                            double k, double x);

/// Partials of the reduced Hamiltonian at fixed (a, g).
struct ReducedGrad {
    double h_x, h_m, h_k;
};
ReducedGrad reduced_grad(const SystemSpec& sys, const ReducedPoint& r);

/// The chart field of H: (x', m', phi', k') =
///   ((a-x^2) H_m, -(a-x^2) H_x, H_k, 0).
std::array<double, 4> reduced_field(const SystemSpec& sys, const ReducedPoint& r);

/// Pushforward of an ambient tangent vector through the chart map,
/// for checking reduced_field against the ambient skew-gradient.
std::array<double, 6> pushforward_reduced(const PhasePoint& p, const Vec6& v);

}  // namespace e3top

#endif
