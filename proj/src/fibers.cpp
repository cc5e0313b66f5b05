#include "e3top/fibers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace e3top {

const char* to_string(Piece p) {
    switch (p) {
        case Piece::RP3: return "RP3";
        case Piece::S3: return "S3";
        case Piece::S1xS2: return "S1xS2";
    }
    return "?";
}

namespace {

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double flo) {
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Minimize f on [lo, hi] by golden-section; returns argmin.
double golden_min(const std::function<double(double)>& f, double lo, double hi) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1);
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        if (fc < fd) {
            hi = d; d = c; fd = fc;
            c = hi - gr * (hi - lo); fc = f(c);
        } else {
            lo = c; c = d; fc = fd;
            d = lo + gr * (hi - lo); fd = f(d);
        }
    }
    return 0.5 * (lo + hi);
}

/// Limit of W(k, x) as x -> s*sqrt(a) along the fiber-closure direction
/// (only meaningful when k = s*g/sqrt(a); the (g-kx)^2 and g1^2 terms vanish).
double pole_w(const SystemSpec& sys, const OrbitParams& orb, double k, int s) {
    const double xp = s * std::sqrt(orb.a);
    return k * k / (2 * sys.beta) + orb.g * sys.g2.f.eval(orb.a, xp) +
           k * sys.g3.f.eval(orb.a, xp) + sys.V.f.eval(orb.a, xp);
}

bool touches_pole(const SystemSpec& sys, const OrbitParams& orb, double h,
                  double k, int s, double tol_g) {
    const double kp = s * orb.g / std::sqrt(orb.a);
    if (std::fabs(k - kp) > 1e-9 * (1 + std::fabs(k))) return false;
    return pole_w(sys, orb, k, s) <= h + tol_g;
}

}  // namespace

FiberReport fiber_analyze(const SystemSpec& sys, const OrbitParams& orb,
                          double h, double k, int n_grid,
                          const Tolerances& tol) {
    if (n_grid < 256) n_grid = 256;
    const double ra = std::sqrt(orb.a);
    const double tol_g = 1e-8 * (1 + std::fabs(h) + k * k);
    const auto G = [&](double x) {
        return h - reduced_potential(sys, orb, k, x).w;
    };

    FiberReport rep;
    rep.h = h;
    rep.k = k;

    std::vector<double> xs(n_grid), gs(n_grid);
    for (int i = 0; i < n_grid; ++i) {
        xs[i] = -ra + 2 * ra * (i + 1) / (n_grid + 1);
        gs[i] = G(xs[i]);
    }

    // simple sign-change roots of G
    std::vector<double> roots;
    for (int i = 0; i + 1 < n_grid; ++i)
        if ((gs[i] > 0) != (gs[i + 1] > 0))
            roots.push_back(bisect(G, xs[i], xs[i + 1], gs[i]));

    // positive segments between breakpoints
    std::vector<double> bp;
    bp.push_back(xs.front());
    bp.insert(bp.end(), roots.begin(), roots.end());
    bp.push_back(xs.back());
    std::vector<FiberRegion> regions;
    for (std::size_t j = 0; j + 1 < bp.size(); ++j) {
        const double lo = bp[j], hi = bp[j + 1];
        if (G(0.5 * (lo + hi)) <= 0) continue;
        FiberRegion r;
        r.lo = (j == 0) ? -ra : lo;  // provisional: pole side resolved below
        r.hi = (j + 2 == bp.size()) ? ra : hi;
        regions.push_back(r);
    }

    // resolve pole-abutting ends: either the fiber closes through the pole
    // or there is a root between the last grid point and the pole
    for (FiberRegion& r : regions) {
        for (int side : {-1, +1}) {
            double& end = side < 0 ? r.lo : r.hi;
            bool& pole = side < 0 ? r.pole_lo : r.pole_hi;
            if (std::fabs(end - side * ra) > 1e-12) continue;
            if (touches_pole(sys, orb, h, k, side, tol_g)) {
                end = side * ra;
                pole = true;
                continue;
            }
            // walk geometrically toward the pole until G < 0, then bisect
            double inner = side < 0 ? xs.front() : xs.back();
            double step = (ra - std::fabs(inner)) / 2;
            double probe = inner;
            while (step > 1e-15 * ra) {
                const double next = side * (std::fabs(probe) + step);
                if (G(next) <= 0) {
                    end = side < 0 ? bisect(G, next, probe, G(next))
                                   : bisect(G, probe, next, G(probe));
                    pole = false;
                    break;
                }
                probe = next;
                step /= 2;
            }
        }
    }

    // a pole-hugging region can be narrower than the grid: if the fiber
    // closes through a pole but no region reaches it, recover the sliver
    for (int side : {-1, +1}) {
        if (!touches_pole(sys, orb, h, k, side, tol_g)) continue;
        bool present = false;
        for (const FiberRegion& r : regions)
            if (side < 0 ? r.pole_lo : r.pole_hi) present = true;
        if (present) continue;
        const double inner = side < 0 ? xs.front() : xs.back();
        if (G(inner) > 0) continue;  // already handled as a region
        // find a positive G value approaching the pole, then bracket the root
        double pos = 0;
        bool found = false;
        for (double eps = (ra - std::fabs(inner)) / 2; eps > 1e-15 * ra;
             eps /= 2) {
            const double xp = side * (ra - eps);
            if (G(xp) > 0) {
                pos = xp;
                found = true;
                break;
            }
        }
        FiberRegion r;
        if (!found) {
            // grazing contact exactly at the pole: zero-width touch
            r.lo = r.hi = side * ra;
            r.pole_lo = r.pole_hi = true;
        } else {
            const double root = side < 0 ? bisect(G, pos, inner, G(pos))
                                         : bisect(G, inner, pos, G(inner));
            r.lo = side < 0 ? side * ra : root;
            r.hi = side < 0 ? root : side * ra;
            r.pole_lo = side < 0;
            r.pole_hi = side > 0;
        }
        regions.push_back(r);
        std::sort(regions.begin(), regions.end(),
                  [](const FiberRegion& u, const FiberRegion& v) {
                      return u.lo < v.lo;
                  });
    }

    // merge regions split by roundoff slivers of G around a pinch
    for (std::size_t j = 0; j + 1 < regions.size();) {
        const double glo = regions[j].hi, ghi = regions[j + 1].lo;
        double gmin = 0;  // most negative G in the gap
        for (int i = 0; i <= 8; ++i)
            gmin = std::min(gmin, G(glo + (ghi - glo) * i / 8.0));
        if (std::fabs(gmin) <= tol_g) {
            regions[j].pinches.push_back(0.5 * (glo + ghi));
            regions[j].hi = regions[j + 1].hi;
            regions[j].pole_hi = regions[j + 1].pole_hi;
            for (double p : regions[j + 1].pinches) regions[j].pinches.push_back(p);
            regions.erase(regions.begin() + j + 1);
        } else {
            ++j;
        }
    }

    // interior pinches: local minima of G inside a region that touch zero
    for (FiberRegion& r : regions) {
        for (int i = 1; i + 1 < n_grid; ++i) {
            if (xs[i] <= r.lo + 1e-9 || xs[i] >= r.hi - 1e-9) continue;
            if (!(gs[i] <= gs[i - 1] && gs[i] <= gs[i + 1])) continue;
            const double xstar = golden_min(G, xs[i - 1], xs[i + 1]);
            if (std::fabs(G(xstar)) > tol_g) continue;
            if (xstar <= r.lo + 1e-9 || xstar >= r.hi - 1e-9) continue;
            bool dup = false;
            for (double p : r.pinches)
                if (std::fabs(p - xstar) < 1e-6 * ra) dup = true;
            if (!dup) r.pinches.push_back(xstar);
        }
        std::sort(r.pinches.begin(), r.pinches.end());
    }

    // zero-width touches: local maxima of G that reach zero from below
    std::vector<double> touches;
    for (int i = 1; i + 1 < n_grid; ++i) {
        if (!(gs[i] < 0 && gs[i] >= gs[i - 1] && gs[i] >= gs[i + 1])) continue;
        const double xstar =
            golden_min([&](double x) { return -G(x); }, xs[i - 1], xs[i + 1]);
        if (std::fabs(G(xstar)) > tol_g) continue;
        bool covered = false;
        for (const FiberRegion& r : regions)
            if (xstar >= r.lo - 1e-9 && xstar <= r.hi + 1e-9) covered = true;
        for (double t : touches)
            if (std::fabs(t - xstar) < 1e-6 * ra) covered = true;
        if (!covered) touches.push_back(xstar);
    }
    for (double t : touches) {
        FiberRegion r;
        r.lo = r.hi = t;
        regions.push_back(r);
    }
    std::sort(regions.begin(), regions.end(),
              [](const FiberRegion& u, const FiberRegion& v) { return u.lo < v.lo; });

    rep.regions = regions;
    for (const FiberRegion& r : regions) {
        if (r.lo == r.hi) rep.critical_x.push_back(r.lo);
        for (double p : r.pinches) rep.critical_x.push_back(p);
    }
    std::sort(rep.critical_x.begin(), rep.critical_x.end());

    rep.components = static_cast<int>(regions.size());
    for (const FiberRegion& r : regions)
        if (r.lo < r.hi && r.pinches.empty()) ++rep.tori;

    // tangency guard: a pinch with W_xx ~ 0 is a zero of order > 2
    for (double cx : rep.critical_x) {
        const Potential p = reduced_potential(sys, orb, k, cx);
        if (std::fabs(p.wxx) <= tol.w_base * (1 + k * k))
            rep.tangency_warning = true;
    }
    if (!rep.tangency_warning) {
        int best_c = 0;
        bool have_touch = false;
        for (const FiberRegion& r : regions) {
            if (r.lo == r.hi) have_touch = true;
            best_c = std::max(best_c, static_cast<int>(r.pinches.size()));
        }
        if (best_c >= 1) {
            Atom a;
            a.circles = best_c;
            a.name = best_c == 1 ? "B" : "V_" + std::to_string(best_c);
            rep.atom = a;
        } else if (have_touch) {
            rep.atom = Atom{1, "A"};
        }
    }
    return rep;
}

AtomCrossing atom_at_diagram_point(const SystemSpec& sys, const OrbitParams& orb,
                                   const CurveSample& sample, int n_grid,
                                   const Tolerances& tol) {
    AtomCrossing out;
    const double delta = 1e-4 * (1 + std::fabs(sample.h));
    out.at = fiber_analyze(sys, orb, sample.h, sample.k, n_grid, tol);
    out.tori_below =
        fiber_analyze(sys, orb, sample.h - delta, sample.k, n_grid, tol).tori;
    out.tori_above =
        fiber_analyze(sys, orb, sample.h + delta, sample.k, n_grid, tol).tori;
    if (sample.type == Rank1Type::Degenerate || out.at.tangency_warning) {
        out.tangency_warning = true;
        return out;
    }
    out.atom = out.at.atom;
    return out;
}

double phi_min(const SystemSpec& sys, const OrbitParams& orb, double x) {
    const double a = orb.a, g = orb.g, b = sys.beta;
    const double u = a - x * x;
    const double g1 = sys.g1.f.eval(a, x), g2 = sys.g2.f.eval(a, x),
                 g3 = sys.g3.f.eval(a, x), V = sys.V.f.eval(a, x);
    // min over m at fixed x: m = -u g1; min over k: separable quadratic.
    // The combined closed form stays finite as u -> 0.
    return (g * g + 2 * b * g * g3 * x - b * g3 * g3 * u) / (2 * (b * x * x + u)) -
           g1 * g1 * u / 2 + g2 * g + V;
}

IsoenergyReport isoenergy_classify(const SystemSpec& sys, const OrbitParams& orb,
                                   double h, int n_grid) {
    if (n_grid < 256) n_grid = 256;
    const double ra = std::sqrt(orb.a);
    const auto F = [&](double x) { return phi_min(sys, orb, x) - h; };

    IsoenergyReport rep;
    rep.h = h;
    std::vector<double> xs(n_grid + 1), fs(n_grid + 1);
    for (int i = 0; i <= n_grid; ++i) {
        xs[i] = -ra + 2 * ra * i / n_grid;
        fs[i] = F(xs[i]);
    }
    std::vector<double> bp;
    bp.push_back(-ra);
    for (int i = 0; i + 1 <= n_grid; ++i)
        if ((fs[i] > 0) != (fs[i + 1] > 0))
            bp.push_back(bisect(F, xs[i], xs[i + 1], fs[i]));
    bp.push_back(ra);
    for (std::size_t j = 0; j + 1 < bp.size(); ++j) {
        const double lo = bp[j], hi = bp[j + 1];
        if (F(0.5 * (lo + hi)) > 0) continue;
        rep.image_intervals.emplace_back(lo, hi);
    }
    // join intervals sharing a breakpoint (F has a double zero there)
    for (std::size_t j = 0; j + 1 < rep.image_intervals.size();) {
        if (rep.image_intervals[j].second >= rep.image_intervals[j + 1].first - 1e-12) {
            rep.image_intervals[j].second = rep.image_intervals[j + 1].second;
            rep.image_intervals.erase(rep.image_intervals.begin() + j + 1);
        } else {
            ++j;
        }
    }
    const double edge = 1e-9 * ra;
    for (const auto& [lo, hi] : rep.image_intervals) {
        const bool at_lo = lo <= -ra + edge, at_hi = hi >= ra - edge;
        if (at_lo && at_hi)
            rep.pieces.push_back(Piece::RP3);
        else if (at_lo || at_hi)
            rep.pieces.push_back(Piece::S3);
        else
            rep.pieces.push_back(Piece::S1xS2);
    }
    return rep;
}

}  // namespace e3top
