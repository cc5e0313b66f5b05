#ifndef E3TOP_FIBERS_HPP
#define E3TOP_FIBERS_HPP

#include <optional>
#include <string>
#include <vector>

#include "e3top/diagram.hpp"

namespace e3top {

/// One x-interval of {h >= W(k, x)}; an endpoint may sit at ±√a when the
/// fiber closes through a pole, and lo == hi marks a zero-width touch.
struct FiberRegion {
    double lo = 0, hi = 0;
    bool pole_lo = false, pole_hi = false;
    std::vector<double> pinches;  // interior critical x with h = W
};

struct Atom {
    int circles = 0;  // number of critical circles in the singular component
    std::string name;  // "A", "B", or "V_k"
};

struct FiberReport {
    double h = 0, k = 0;
    std::vector<FiberRegion> regions;
    std::vector<double> critical_x;  // dW/dx = 0 and h = W (within tolerance)
    int components = 0;
    int tori = 0;  // components that are plain tori
    std::optional<Atom> atom;
    bool tangency_warning = false;  // zero of order > 2; classification withheld
};

FiberReport fiber_analyze(const SystemSpec& sys, const OrbitParams& orb,
                          double h, double k, int n_grid = 1024,
                          const Tolerances& tol = {});

struct AtomCrossing {
    FiberReport at;
    int tori_below = 0, tori_above = 0;  // counts at h ∓ delta
    std::optional<Atom> atom;
    bool tangency_warning = false;
};

/// Fiber analysis at a bifurcation-curve sample plus torus counts just
/// below/above in h (delta = 1e-4*(1+|h|)).
AtomCrossing atom_at_diagram_point(const SystemSpec& sys, const OrbitParams& orb,
                                   const CurveSample& sample, int n_grid = 1024,
                                   const Tolerances& tol = {});

enum class Piece { RP3, S3, S1xS2 };
const char* to_string(Piece p);

struct IsoenergyReport {
    double h = 0;
    /// Sublevel intervals {Phi <= h}; endpoints clamped to ±√a.
    std::vector<std::pair<double, double>> image_intervals;
    std::vector<Piece> pieces;
};

/// Phi(x) = min over (k, m) of the reduced Hamiltonian at fixed x;
/// closed-form separable quadratic minimum, finite up to the poles.
double phi_min(const SystemSpec& sys, const OrbitParams& orb, double x);

IsoenergyReport isoenergy_classify(const SystemSpec& sys, const OrbitParams& orb,
                                   double h, int n_grid = 1024);

}  // namespace e3top

#endif
