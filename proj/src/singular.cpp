#include "e3top/singular.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace e3top {

using expr::DomainError;

const char* to_string(Rank0Type t) {
    switch (t) {
        case Rank0Type::CenterCenter: return "center-center";
        case Rank0Type::FocusFocus: return "focus-focus";
        case Rank0Type::Degenerate: return "degenerate";
    }
    return "?";
}

const char* to_string(Rank1Type t) {
    switch (t) {
        case Rank1Type::Elliptic: return "elliptic";
        case Rank1Type::Hyperbolic: return "hyperbolic";
        case Rank1Type::Degenerate: return "degenerate";
    }
    return "?";
}

std::array<std::complex<double>, 4> Rank0Report::spectrum() const {
    const std::complex<double> i(0, 1);
    const std::complex<double> sq = std::sqrt(std::complex<double>(q, 0));
    return {i * (p + sq), -i * (p + sq), i * (p - sq), -i * (p - sq)};
}

std::pair<PhasePoint, PhasePoint> rank0_points(const OrbitParams& orb) {
    if (!(orb.a > 0)) throw std::invalid_argument("rank0_points: a must be > 0");
    const double ra = std::sqrt(orb.a);
    const double s3 = orb.g / ra;
    return {PhasePoint{{0, 0, s3}, {0, 0, ra}}, PhasePoint{{0, 0, -s3}, {0, 0, -ra}}};
}

Rank0Report rank0_classify(const SystemSpec& sys, const OrbitParams& orb,
                           int sign, const Tolerances& tol) {
    const double a = orb.a, g = orb.g;
    const double r3 = sign * std::sqrt(a);

    const double g1 = sys.g1.f.eval(a, r3);
    const double g2x = sys.g2.fx.eval(a, r3);
    const double g3 = sys.g3.f.eval(a, r3), g3x = sys.g3.fx.eval(a, r3);
    const double Vx = sys.V.fx.eval(a, r3);

    Rank0Report rep;
    rep.sign = sign;
    rep.point = {{0, 0, g / r3 * 1.0}, {0, 0, r3}};
    rep.point.S.z = sign * g / std::sqrt(a);
    // The g2 term carries a minus sign; the leading orbit-invariant terms
    // follow the rank-0 type formula for the quadratic-in-S normal form.
    rep.q = g * g / (4 * r3 * r3) - r3 * r3 * g1 * g1 - g * r3 * g2x -
            g * g3x - r3 * Vx;
    rep.p = (g / r3) * (0.5 - 1.0 / sys.beta) - g3;
    rep.h11 = 1;
    rep.h12 = std::complex<double>(-(g / (sys.beta * r3) + g3) / r3, -g1);
    rep.h22 = (g / (r3 * r3 * r3)) * (g / (sys.beta * r3) + g3) -
              (g * g2x + (g / r3) * g3x + Vx) / r3;

    const double tq = tol.q_base * (1 + rep.p * rep.p);
    rep.type = std::fabs(rep.q) <= tq ? Rank0Type::Degenerate
               : rep.q > 0            ? Rank0Type::CenterCenter
                                      : Rank0Type::FocusFocus;
    return rep;
}

double rank1_m(const SystemSpec& sys, const OrbitParams& orb, double x) {
    const double u = orb.a - x * x;
    if (!(u > 0)) throw DomainError("rank1_m: x^2 >= a");
    return -u * sys.g1.f.eval(orb.a, x);
}

KQuadratic rank1_quadratic(const SystemSpec& sys, const OrbitParams& orb, double x) {
    const double a = orb.a, g = orb.g;
    const double u = a - x * x;
    if (!(u > 0)) throw DomainError("rank1_quadratic: x^2 >= a");
    const double g1 = sys.g1.f.eval(a, x), g1x = sys.g1.fx.eval(a, x);
    const double g2x = sys.g2.fx.eval(a, x);
    const double g3x = sys.g3.fx.eval(a, x);
    const double Vx = sys.V.fx.eval(a, x);

    KQuadratic q;
    q.quad_a = a * x / (u * u);
    q.b_prime = g3x - g * (a + x * x) / (u * u);
    q.c_prime = g * g * x / (u * u) + x * g1 * g1 - u * g1 * g1x + g * g2x + Vx;
    // Equivalent expanded form with the (a-x^2)^-4 cancellations done by hand;
    // better conditioned than b'^2 - 4ac for small |x|.
    const double num = std::pow(g - (a + x * x) * g3x, 2) -
                       4 * a * x *
                           (x * g1 * g1 - u * g1 * g1x + g * g2x +
                            x * g3x * g3x + Vx);
    q.d = num / (u * u);
    return q;
}

KRoots rank1_solve_k(const SystemSpec& sys, const OrbitParams& orb, double x,
                     const Tolerances& tol) {
    const KQuadratic q = rank1_quadratic(sys, orb, x);
    KRoots out;
    const double td = tol.d_base * (1 + q.b_prime * q.b_prime);
    if (x == 0) {
        if (std::fabs(q.b_prime) > td) {
            out.kind = KRoots::Kind::One;
            out.lo = out.hi = -q.c_prime / q.b_prime;
        } else if (std::fabs(q.c_prime) <= td) {
            out.kind = KRoots::Kind::Line;
        }
        return out;
    }
    if (q.d < -td) return out;  // no real roots
    if (std::fabs(q.d) <= td) {
        // The absolute discriminant test misfires when the whole quadratic is
        // uniformly small (tiny leading coefficient near x = 0): only report a
        // double root if the two roots actually coincide relative to their size.
        const double sep = std::sqrt(std::max(q.d, 0.0)) / std::fabs(q.quad_a);
        const double mag = std::fabs(q.b_prime) / (2 * std::fabs(q.quad_a));
        if (sep <= 1e-6 * (1 + mag)) {
            out.kind = KRoots::Kind::One;
            out.lo = out.hi = -q.b_prime / (2 * q.quad_a);
            return out;
        }
    }
    const double sq = std::sqrt(q.d);
    const double qq = -(q.b_prime + std::copysign(sq, q.b_prime)) / 2;
    double r1, r2;
    if (qq != 0) {
        r1 = qq / q.quad_a;
        r2 = q.c_prime / qq;
    } else {  // b' == 0
        r1 = sq / (2 * q.quad_a);
        r2 = -r1;
    }
    out.kind = KRoots::Kind::Two;
    out.lo = std::min(r1, r2);
    out.hi = std::max(r1, r2);
    return out;
}

Rank1Point rank1_classify(const SystemSpec& sys, const OrbitParams& orb,
                          double k, double x, const Tolerances& tol) {
    const Potential pot = reduced_potential(sys, orb, k, x);
    const double tcrit = 1e-9 * (1 + k * k);
    if (std::fabs(pot.wx) > tcrit)
        throw std::invalid_argument("rank1_classify: (k, x) is not critical: |dW/dx| = " +
                                    std::to_string(pot.wx));
    Rank1Point pt;
    pt.x = x;
    pt.k = k;
    pt.m = rank1_m(sys, orb, x);
    pt.lambda = reduced_grad(sys, {x, pt.m, 0, k, orb.a, orb.g}).h_k;
    pt.w_dxx = pot.wxx;
    const double u = orb.a - x * x;
    const double tw = tol.w_base * (1 + k * k);
    if (std::fabs(pt.w_dxx) <= tw) {
        pt.type = Rank1Type::Degenerate;
        pt.mu = {0, 0};
    } else if (pt.w_dxx > 0) {
        pt.type = Rank1Type::Elliptic;
        const double om = std::sqrt(u * pt.w_dxx);
        pt.mu = {std::complex<double>(0, om), std::complex<double>(0, -om)};
    } else {
        pt.type = Rank1Type::Hyperbolic;
        const double om = std::sqrt(-u * pt.w_dxx);
        pt.mu = {std::complex<double>(om, 0), std::complex<double>(-om, 0)};
    }
    return pt;
}

PhasePoint critical_circle(const SystemSpec& sys, const OrbitParams& orb,
                           double x, double k, double phi) {
    return from_reduced({x, rank1_m(sys, orb, x), phi, k, orb.a, orb.g});
}

namespace {

double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double flo) {
    // assumes a sign change on [lo, hi]
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
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

double golden_max(const std::function<double(double)>& f, double lo, double hi) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1);
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        if (fc > fd) {
            hi = d; d = c; fd = fc;
            c = hi - gr * (hi - lo); fc = f(c);
        } else {
            lo = c; c = d; fc = fd;
            d = lo + gr * (hi - lo); fd = f(d);
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

ThetaDecomposition theta_decomposition(const SystemSpec& sys, const OrbitParams& orb,
                                       int n_grid, const Tolerances& tol) {
    if (n_grid < 100) throw std::invalid_argument("theta_decomposition: n_grid >= 100");
    const double ra = std::sqrt(orb.a);
    const auto disc = [&](double x) { return rank1_quadratic(sys, orb, x).d; };
    const auto tau_d = [&](double x) {
        const double b = rank1_quadratic(sys, orb, x).b_prime;
        return tol.d_base * (1 + b * b);
    };

    ThetaDecomposition out;
    {
        const KQuadratic q0 = rank1_quadratic(sys, orb, 0);
        const double td = tol.d_base * (1 + q0.b_prime * q0.b_prime);
        out.degenerate_family =
            std::fabs(q0.b_prime) <= td && std::fabs(q0.c_prime) <= td;
    }

    const int n_side = std::max(n_grid / 2, 64);
    for (const auto [side_lo, side_hi] :
         {std::pair{-ra, 0.0}, std::pair{0.0, ra}}) {
        const double len = side_hi - side_lo;
        std::vector<double> xs(n_side), ds(n_side);
        for (int i = 0; i < n_side; ++i) {
            xs[i] = side_lo + len * (i + 1) / (n_side + 1);
            ds[i] = disc(xs[i]);
        }
        // sign-change roots
        std::vector<double> roots;
        for (int i = 0; i + 1 < n_side; ++i)
            if ((ds[i] > 0) != (ds[i + 1] > 0))
                roots.push_back(bisect_root(disc, xs[i], xs[i + 1], ds[i]));

        // segment walk: breakpoints are the side ends plus the roots
        std::vector<double> bp;
        bp.push_back(side_lo);
        bp.insert(bp.end(), roots.begin(), roots.end());
        bp.push_back(side_hi);
        for (std::size_t j = 0; j + 1 < bp.size(); ++j) {
            const double lo = bp[j], hi = bp[j + 1];
            // segment sign from the most decisive grid sample strictly inside
            // (a single midpoint probe could land on a tangential zero)
            double probe = 0;
            for (int i = 0; i < n_side; ++i)
                if (xs[i] > lo && xs[i] < hi && std::fabs(ds[i]) > std::fabs(probe))
                    probe = ds[i];
            if (probe == 0) probe = disc(lo + 0.5 * (hi - lo));
            if (probe < 0) continue;
            ThetaInterval iv;
            iv.lo = lo;
            iv.hi = hi;
            iv.closed_lo = (j > 0);                // root endpoints are contained
            iv.closed_hi = (j + 2 < bp.size());    // 0 and ±√a are not
            if (iv.closed_lo && iv.closed_hi && iv.hi - iv.lo <= 1e-7 * ra) {
                // a grazing touch that leaked through roundoff as a sliver
                out.isolated.push_back(0.5 * (iv.lo + iv.hi));
            } else {
                out.intervals.push_back(iv);
            }
        }

        // tangential zeros: interior local maxima of D grazing zero (either
        // side: a max that rounds to slightly positive but was too narrow to
        // register as a sign change is still a tangency)
        for (int i = 1; i + 1 < n_side; ++i) {
            if (!(ds[i] < 0 && ds[i] >= ds[i - 1] && ds[i] >= ds[i + 1])) continue;
            const double xstar = golden_max(disc, xs[i - 1], xs[i + 1]);
            const double dstar = disc(xstar);
            if (std::fabs(dstar) <= tau_d(xstar)) {
                bool dup = false;
                for (double y : out.isolated)
                    if (std::fabs(y - xstar) < 1e-6 * ra) dup = true;
                for (const ThetaInterval& iv : out.intervals)
                    if (xstar >= iv.lo && xstar <= iv.hi) dup = true;
                if (!dup) out.isolated.push_back(xstar);
            }
        }
    }
    std::sort(out.isolated.begin(), out.isolated.end());
    std::sort(out.intervals.begin(), out.intervals.end(),
              [](const ThetaInterval& a, const ThetaInterval& b) { return a.lo < b.lo; });
    return out;
}

}  // namespace e3top
