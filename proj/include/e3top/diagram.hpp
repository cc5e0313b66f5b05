#ifndef E3TOP_DIAGRAM_HPP
#define E3TOP_DIAGRAM_HPP

#include <optional>
#include <string>
#include <vector>

#include "e3top/singular.hpp"

namespace e3top {

/// Image of a rank-0 point in the (h, k) plane.
struct ZPoint {
    int sign = +1;
    double h = 0, k = 0;
    Rank0Type type = Rank0Type::Degenerate;
};

enum class EndpointTag {
    TendsToZPlus,
    TendsToZMinus,
    TendsToInfinity,
    MeetsSpecialPoint,
    InteriorStop,
};
const char* to_string(EndpointTag t);

struct CurveSample {
    double x, k, h;
    Rank1Type type;
    bool cusp_flag = false;  // |dk/dx| ~ 0 by divided differences
};

struct CurveBranch {
    enum class Sign { Plus, Minus } branch = Sign::Plus;
    double x_lo = 0, x_hi = 0;
    std::vector<CurveSample> samples;  // strictly increasing in x
    EndpointTag tag_lo = EndpointTag::InteriorStop;
    EndpointTag tag_hi = EndpointTag::InteriorStop;
};

struct IsolatedPoint {
    double h, k, x0;
};

struct SpecialPoint {
    double h, k;
};

/// h = k^2/(2 beta) + g3(a,0) k + c.
struct Parabola {
    double beta, g3_0, c;
};

struct BifurcationDiagram {
    OrbitParams orbit;
    std::vector<ZPoint> z_points;  // Z+ then Z-
    std::vector<CurveBranch> curves;
    std::vector<IsolatedPoint> isolated_points;
    std::optional<SpecialPoint> special_point;
    std::optional<Parabola> parabola;
};

/// Z± = (g^2/(2 beta a) + g g2(a,±√a) ± (g/√a) g3(a,±√a) + V(a,±√a), ±g/√a).
std::pair<ZPoint, ZPoint> rank0_images(const SystemSpec& sys, const OrbitParams& orb);

std::vector<CurveBranch> trace_curves(const SystemSpec& sys, const OrbitParams& orb,
                                      int samples_per_interval = 512,
                                      const Tolerances& tol = {});

std::vector<IsolatedPoint> isolated_points(const SystemSpec& sys,
                                           const OrbitParams& orb,
                                           const Tolerances& tol = {});

std::optional<SpecialPoint> special_point(const SystemSpec& sys,
                                          const OrbitParams& orb,
                                          const Tolerances& tol = {});

std::optional<Parabola> exceptional_parabola(const SystemSpec& sys,
                                             const OrbitParams& orb,
                                             const Tolerances& tol = {});

BifurcationDiagram compute_diagram(const SystemSpec& sys, const OrbitParams& orb,
                                   int samples_per_interval = 512,
                                   const Tolerances& tol = {});

/// (h - W(k,x), dW/dx(k,x)): both vanish on the traced curves.
std::pair<double, double> envelope_residual(const SystemSpec& sys,
                                            const OrbitParams& orb,
                                            double h, double k, double x);

/// Exports; samples with |k| > k_max are omitted from CSV/SVG (the data
/// model keeps them).
std::string export_csv(const BifurcationDiagram& d, double k_max = 1e3);
std::string export_svg(const BifurcationDiagram& d, double k_max = 1e3);
std::string export_json(const BifurcationDiagram& d);
BifurcationDiagram diagram_from_json(const std::string& text);

}  // namespace e3top

#endif
