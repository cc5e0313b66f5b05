#include "e3top/diagram.hpp"

#include <algorithm>
#include <cmath>

namespace e3top {

const char* to_string(EndpointTag t) {
    switch (t) {
        case EndpointTag::TendsToZPlus: return "tends_to_Z+";
        case EndpointTag::TendsToZMinus: return "tends_to_Z-";
        case EndpointTag::TendsToInfinity: return "tends_to_infinity";
        case EndpointTag::MeetsSpecialPoint: return "meets_special_point";
        case EndpointTag::InteriorStop: return "interior_stop";
    }
    return "?";
}

std::pair<ZPoint, ZPoint> rank0_images(const SystemSpec& sys, const OrbitParams& orb) {
    const double a = orb.a, g = orb.g, ra = std::sqrt(a);
    std::pair<ZPoint, ZPoint> out;
    for (int sign : {+1, -1}) {
        const double x = sign * ra;
        ZPoint z;
        z.sign = sign;
        z.k = sign * g / ra;
        z.h = g * g / (2 * sys.beta * a) + g * sys.g2.f.eval(a, x) +
              sign * (g / ra) * sys.g3.f.eval(a, x) + sys.V.f.eval(a, x);
        z.type = rank0_classify(sys, orb, sign).type;
        (sign > 0 ? out.first : out.second) = z;
    }
    return out;
}

std::optional<SpecialPoint> special_point(const SystemSpec& sys,
                                          const OrbitParams& orb,
                                          const Tolerances& tol) {
    const KQuadratic q0 = rank1_quadratic(sys, orb, 0);
    const double td = tol.d_base * (1 + q0.b_prime * q0.b_prime);
    if (std::fabs(q0.b_prime) <= td) return std::nullopt;
    SpecialPoint sp;
    sp.k = -q0.c_prime / q0.b_prime;
    sp.h = reduced_potential(sys, orb, sp.k, 0).w;
    return sp;
}

std::optional<Parabola> exceptional_parabola(const SystemSpec& sys,
                                             const OrbitParams& orb,
                                             const Tolerances& tol) {
    const KQuadratic q0 = rank1_quadratic(sys, orb, 0);
    const double td = tol.d_base * (1 + q0.b_prime * q0.b_prime);
    if (std::fabs(q0.b_prime) > td || std::fabs(q0.c_prime) > td)
        return std::nullopt;
    const double a = orb.a, g = orb.g;
    Parabola p;
    p.beta = sys.beta;
    p.g3_0 = sys.g3.f.eval(a, 0);
    const double g1_0 = sys.g1.f.eval(a, 0);
    p.c = g * g / (2 * a) - a * g1_0 * g1_0 / 2 + g * sys.g2.f.eval(a, 0) +
          sys.V.f.eval(a, 0);
    return p;
}

std::vector<IsolatedPoint> isolated_points(const SystemSpec& sys,
                                           const OrbitParams& orb,
                                           const Tolerances& tol) {
    std::vector<IsolatedPoint> out;
    const ThetaDecomposition th = theta_decomposition(sys, orb, 2048, tol);
    for (double x0 : th.isolated) {
        const KQuadratic q = rank1_quadratic(sys, orb, x0);
        IsolatedPoint ip;
        ip.x0 = x0;
        ip.k = -q.b_prime / (2 * q.quad_a);
        ip.h = reduced_potential(sys, orb, ip.k, x0).w;
        out.push_back(ip);
    }
    return out;
}

std::pair<double, double> envelope_residual(const SystemSpec& sys,
                                            const OrbitParams& orb,
                                            double h, double k, double x) {
    const Potential p = reduced_potential(sys, orb, k, x);
    return {h - p.w, p.wx};
}

namespace {

Rank1Type classify_wxx(double wxx, double k, const Tolerances& tol) {
    const double tw = tol.w_base * (1 + k * k);
    if (std::fabs(wxx) <= tw) return Rank1Type::Degenerate;
    return wxx > 0 ? Rank1Type::Elliptic : Rank1Type::Hyperbolic;
}

/// Sample abscissas for one Theta interval: uniform grid plus geometric
/// refinement within 1e-3*len of each endpoint (open endpoints excluded,
/// closed endpoints included exactly).
std::vector<double> sample_xs(const ThetaInterval& iv, int n) {
    const double len = iv.hi - iv.lo;
    std::vector<double> xs;
    xs.reserve(n + 40);
    if (iv.closed_lo) xs.push_back(iv.lo);
    const double edge = 1e-3 * len;
    for (int j = 16; j >= 1; --j)
        xs.push_back(iv.lo + edge * std::pow(0.5, j));
    for (int i = 0; i < n; ++i)
        xs.push_back(iv.lo + len * (i + 0.5) / n);
    for (int j = 1; j <= 16; ++j)
        xs.push_back(iv.hi - edge * std::pow(0.5, j));
    if (iv.closed_hi) xs.push_back(iv.hi);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

void flag_cusps(std::vector<CurveSample>& s) {
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        const double dk = (s[i + 1].k - s[i - 1].k) / (s[i + 1].x - s[i - 1].x);
        s[i].cusp_flag = std::fabs(dk) <= 1e-6 * (1 + std::fabs(s[i].k));
    }
}

EndpointTag tag_at(const SystemSpec& sys, const OrbitParams& orb,
                   double x_end, double k_end, const Tolerances& tol) {
    const double ra = std::sqrt(orb.a);
    const double edge_tol = 1e-9 * ra;
    if (std::fabs(std::fabs(x_end) - ra) <= edge_tol) {
        const int sign = x_end > 0 ? +1 : -1;
        if (rank0_classify(sys, orb, sign, tol).type == Rank0Type::CenterCenter)
            return sign > 0 ? EndpointTag::TendsToZPlus : EndpointTag::TendsToZMinus;
        return EndpointTag::InteriorStop;
    }
    if (std::fabs(x_end) <= edge_tol) {
        const auto sp = special_point(sys, orb, tol);
        if (sp && std::fabs(k_end - sp->k) <= 1e-2 * (1 + std::fabs(sp->k)))
            return EndpointTag::MeetsSpecialPoint;
        return EndpointTag::TendsToInfinity;
    }
    return EndpointTag::InteriorStop;
}

}  // namespace

std::vector<CurveBranch> trace_curves(const SystemSpec& sys, const OrbitParams& orb,
                                      int samples_per_interval,
                                      const Tolerances& tol) {
    std::vector<CurveBranch> out;
    const ThetaDecomposition th = theta_decomposition(sys, orb, 2048, tol);
    for (const ThetaInterval& iv : th.intervals) {
        const std::vector<double> xs = sample_xs(iv, samples_per_interval);
        CurveBranch plus, minus;
        plus.branch = CurveBranch::Sign::Plus;
        minus.branch = CurveBranch::Sign::Minus;
        plus.x_lo = minus.x_lo = iv.lo;
        plus.x_hi = minus.x_hi = iv.hi;
        for (double x : xs) {
            // evaluating dW/dx amplifies root rounding by ~a^2/(a-x^2)^2, so
            // samples refined against the poles would carry garbage residuals
            if (orb.a - x * x < 1e-3 * orb.a) continue;
            const KRoots roots = rank1_solve_k(sys, orb, x, tol);
            if (roots.kind == KRoots::Kind::None || roots.kind == KRoots::Kind::Line)
                continue;
            for (CurveBranch* br : {&plus, &minus}) {
                const double k =
                    br->branch == CurveBranch::Sign::Plus ? roots.hi : roots.lo;
                // past |k| ~ 1e6 the absolute dW/dx residual of a correctly
                // rounded root exceeds 1e-9; stop emitting along the asymptote
                if (std::fabs(k) > 1e6) continue;
                const Potential pot = reduced_potential(sys, orb, k, x);
                br->samples.push_back(
                    {x, k, pot.w, classify_wxx(pot.wxx, k, tol)});
            }
        }
        for (CurveBranch* br : {&plus, &minus}) {
            if (br->samples.empty()) continue;
            flag_cusps(br->samples);
            br->tag_lo = tag_at(sys, orb, iv.lo, br->samples.front().k, tol);
            br->tag_hi = tag_at(sys, orb, iv.hi, br->samples.back().k, tol);
            out.push_back(std::move(*br));
        }
    }
    return out;
}

BifurcationDiagram compute_diagram(const SystemSpec& sys, const OrbitParams& orb,
                                   int samples_per_interval,
                                   const Tolerances& tol) {
    BifurcationDiagram d;
    d.orbit = orb;
    const auto [zp, zm] = rank0_images(sys, orb);
    d.z_points = {zp, zm};
    d.curves = trace_curves(sys, orb, samples_per_interval, tol);
    d.isolated_points = isolated_points(sys, orb, tol);
    d.special_point = special_point(sys, orb, tol);
    d.parabola = exceptional_parabola(sys, orb, tol);
    return d;
}

}  // namespace e3top
