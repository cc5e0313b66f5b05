#ifndef E3TOP_SINGULAR_HPP
#define E3TOP_SINGULAR_HPP

#include <array>
#include <complex>
#include <utility>
#include <vector>

#include "e3top/e3core.hpp"

namespace e3top {

/// Scale-aware zero tolerances; the bases can be overridden from config.
struct Tolerances {
    double q_base = 1e-9;   // rank-0 degeneracy: |q| <= q_base*(1+p^2)
    double d_base = 1e-10;  // discriminant zero: |D| <= d_base*(1+B'^2)
    double w_base = 1e-9;   // rank-1 degeneracy: |W_xx| <= w_base*(1+k^2)
};

enum class Rank0Type { CenterCenter, FocusFocus, Degenerate };
enum class Rank1Type { Elliptic, Hyperbolic, Degenerate };

const char* to_string(Rank0Type t);
const char* to_string(Rank1Type t);

struct Rank0Report {
    int sign = +1;  // +1 for P+, -1 for P-
    PhasePoint point;
    double q = 0, p = 0;
    double h11 = 1;
    std::complex<double> h12;
    double h22 = 0;
    Rank0Type type = Rank0Type::Degenerate;

    /// Closed-form linearization spectrum {±i(p+√q), ±i(p-√q)}
    /// (complex square root when q < 0).
    std::array<std::complex<double>, 4> spectrum() const;
};

/// The two rank-0 points P± = (0, 0, ±g/√a, 0, 0, ±√a).
std::pair<PhasePoint, PhasePoint> rank0_points(const OrbitParams& orb);

Rank0Report rank0_classify(const SystemSpec& sys, const OrbitParams& orb,
                           int sign, const Tolerances& tol = {});

/// m-value on the rank-1 critical set: m = -(a - x^2) g1(a, x).
double rank1_m(const SystemSpec& sys, const OrbitParams& orb, double x);

/// Coefficients of the critical-k equation  A k^2 + B' k + C' = 0
/// (linear when x = 0) and its discriminant D = B'^2 - 4 A C'.
struct KQuadratic {
    double quad_a;   // a x / (a - x^2)^2
    double b_prime;
    double c_prime;
    double d;        // discriminant
};
KQuadratic rank1_quadratic(const SystemSpec& sys, const OrbitParams& orb, double x);

struct KRoots {
    enum class Kind { None, One, Two, Line } kind = Kind::None;
    double lo = 0, hi = 0;  // lo <= hi when kind == Two; lo == hi when One
};
KRoots rank1_solve_k(const SystemSpec& sys, const OrbitParams& orb, double x,
                     const Tolerances& tol = {});

struct Rank1Point {
    double x = 0, k = 0;
    double m = 0;       // -(a - x^2) g1
    double lambda = 0;  // dH/dk at the point
    double w_dxx = 0;
    /// Non-zero linearization eigenvalues of sgrad(H - lambda K):
    /// ±i√((a-x^2) w_dxx) for w_dxx > 0, ±√(-(a-x^2) w_dxx) for w_dxx < 0.
    std::pair<std::complex<double>, std::complex<double>> mu;
    Rank1Type type = Rank1Type::Degenerate;
};

/// Classify a critical pair (k, x); throws std::invalid_argument when the
/// critical condition |dW/dx| <= 1e-9*(1+k^2) is not met.
Rank1Point rank1_classify(const SystemSpec& sys, const OrbitParams& orb,
                          double k, double x, const Tolerances& tol = {});

/// A point of the critical circle through (x, k) at angle phi.
PhasePoint critical_circle(const SystemSpec& sys, const OrbitParams& orb,
                           double x, double k, double phi);

struct ThetaInterval {
    double lo = 0, hi = 0;
    bool closed_lo = false, closed_hi = false;
};

struct ThetaDecomposition {
    std::vector<ThetaInterval> intervals;  // non-degenerate components of Theta
    std::vector<double> isolated;          // tangential zeros of D
    /// B'(0) = C'(0) = 0: every k solves the x = 0 equation (parabola case).
    bool degenerate_family = false;
};

ThetaDecomposition theta_decomposition(const SystemSpec& sys, const OrbitParams& orb,
                                       int n_grid = 2048, const Tolerances& tol = {});

}  // namespace e3top

#endif
