#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "e3top/diagram.hpp"
#include "json.hpp"

namespace e3top {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_g6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

const char* branch_name(CurveBranch::Sign s) {
    return s == CurveBranch::Sign::Plus ? "plus" : "minus";
}

CurveBranch::Sign branch_from(const std::string& s) {
    if (s == "plus") return CurveBranch::Sign::Plus;
    if (s == "minus") return CurveBranch::Sign::Minus;
    throw std::runtime_error("diagram_from_json: bad branch: " + s);
}

Rank1Type rank1_from(const std::string& s) {
    for (Rank1Type t : {Rank1Type::Elliptic, Rank1Type::Hyperbolic,
                        Rank1Type::Degenerate})
        if (s == to_string(t)) return t;
    throw std::runtime_error("diagram_from_json: bad rank-1 type: " + s);
}

Rank0Type rank0_from(const std::string& s) {
    for (Rank0Type t : {Rank0Type::CenterCenter, Rank0Type::FocusFocus,
                        Rank0Type::Degenerate})
        if (s == to_string(t)) return t;
    throw std::runtime_error("diagram_from_json: bad rank-0 type: " + s);
}

EndpointTag tag_from(const std::string& s) {
    for (EndpointTag t : {EndpointTag::TendsToZPlus, EndpointTag::TendsToZMinus,
                          EndpointTag::TendsToInfinity,
                          EndpointTag::MeetsSpecialPoint,
                          EndpointTag::InteriorStop})
        if (s == to_string(t)) return t;
    throw std::runtime_error("diagram_from_json: bad endpoint tag: " + s);
}

}  // namespace

std::string export_csv(const BifurcationDiagram& d, double k_max) {
    std::string out = "x,k,h,branch,type\n";
    for (const CurveBranch& br : d.curves)
        for (const CurveSample& s : br.samples) {
            if (std::fabs(s.k) > k_max) continue;
            out += fmt_g17(s.x);
            out += ',';
            out += fmt_g17(s.k);
            out += ',';
            out += fmt_g17(s.h);
            out += ',';
            out += branch_name(br.branch);
            out += ',';
            out += to_string(s.type);
            out += '\n';
        }
    return out;
}

std::string export_json(const BifurcationDiagram& d) {
    ordered_json j;
    j["orbit"] = {{"a", d.orbit.a}, {"g", d.orbit.g}};
    j["z_points"] = ordered_json::array();
    for (const ZPoint& z : d.z_points)
        j["z_points"].push_back({{"sign", z.sign},
                                 {"h", z.h},
                                 {"k", z.k},
                                 {"type", to_string(z.type)}});
    j["curves"] = ordered_json::array();
    for (const CurveBranch& br : d.curves) {
        ordered_json jb;
        jb["branch"] = branch_name(br.branch);
        jb["x_lo"] = br.x_lo;
        jb["x_hi"] = br.x_hi;
        jb["tag_lo"] = to_string(br.tag_lo);
        jb["tag_hi"] = to_string(br.tag_hi);
        jb["samples"] = ordered_json::array();
        for (const CurveSample& s : br.samples)
            jb["samples"].push_back(
                {s.x, s.k, s.h, to_string(s.type), s.cusp_flag});
        j["curves"].push_back(std::move(jb));
    }
    j["isolated_points"] = ordered_json::array();
    for (const IsolatedPoint& p : d.isolated_points)
        j["isolated_points"].push_back({{"h", p.h}, {"k", p.k}, {"x0", p.x0}});
    if (d.special_point)
        j["special_point"] = {{"h", d.special_point->h}, {"k", d.special_point->k}};
    else
        j["special_point"] = nullptr;
    if (d.parabola)
        j["parabola"] = {{"beta", d.parabola->beta},
                         {"g3_0", d.parabola->g3_0},
                         {"c", d.parabola->c}};
    else
        j["parabola"] = nullptr;
    return j.dump(2) + "\n";
}

BifurcationDiagram diagram_from_json(const std::string& text) {
    const ordered_json j = ordered_json::parse(text);
    BifurcationDiagram d;
    d.orbit = {j["orbit"]["a"].get<double>(), j["orbit"]["g"].get<double>()};
    for (const auto& jz : j["z_points"]) {
        ZPoint z;
        z.sign = jz["sign"].get<int>();
        z.h = jz["h"].get<double>();
        z.k = jz["k"].get<double>();
        z.type = rank0_from(jz["type"].get<std::string>());
        d.z_points.push_back(z);
    }
    for (const auto& jb : j["curves"]) {
        CurveBranch br;
        br.branch = branch_from(jb["branch"].get<std::string>());
        br.x_lo = jb["x_lo"].get<double>();
        br.x_hi = jb["x_hi"].get<double>();
        br.tag_lo = tag_from(jb["tag_lo"].get<std::string>());
        br.tag_hi = tag_from(jb["tag_hi"].get<std::string>());
        for (const auto& js : jb["samples"]) {
            CurveSample s;
            s.x = js[0].get<double>();
            s.k = js[1].get<double>();
            s.h = js[2].get<double>();
            s.type = rank1_from(js[3].get<std::string>());
            s.cusp_flag = js[4].get<bool>();
            br.samples.push_back(s);
        }
        d.curves.push_back(std::move(br));
    }
    for (const auto& jp : j["isolated_points"])
        d.isolated_points.push_back({jp["h"].get<double>(), jp["k"].get<double>(),
                                     jp["x0"].get<double>()});
    if (!j["special_point"].is_null())
        d.special_point = SpecialPoint{j["special_point"]["h"].get<double>(),
                                       j["special_point"]["k"].get<double>()};
    if (!j["parabola"].is_null())
        d.parabola = Parabola{j["parabola"]["beta"].get<double>(),
                              j["parabola"]["g3_0"].get<double>(),
                              j["parabola"]["c"].get<double>()};
    return d;
}

std::string export_svg(const BifurcationDiagram& d, double k_max) {
    // collect (h, k) bounds over everything that will be drawn
    double hmin = 1e300, hmax = -1e300, kmin = 1e300, kmax = -1e300;
    auto grow = [&](double h, double k) {
        hmin = std::min(hmin, h);
        hmax = std::max(hmax, h);
        kmin = std::min(kmin, k);
        kmax = std::max(kmax, k);
    };
    for (const ZPoint& z : d.z_points) grow(z.h, z.k);
    for (const CurveBranch& br : d.curves)
        for (const CurveSample& s : br.samples)
            if (std::fabs(s.k) <= k_max && std::fabs(s.h) <= k_max * k_max)
                grow(s.h, s.k);
    for (const IsolatedPoint& p : d.isolated_points) grow(p.h, p.k);
    if (d.special_point) grow(d.special_point->h, d.special_point->k);
    if (hmin > hmax) { hmin = kmin = -1; hmax = kmax = 1; }
    const double hpad = 0.05 * (hmax - hmin + 1e-12);
    const double kpad = 0.05 * (kmax - kmin + 1e-12);
    hmin -= hpad; hmax += hpad; kmin -= kpad; kmax += kpad;

    const double W = 800, Hgt = 600;
    auto px = [&](double h) { return (h - hmin) / (hmax - hmin) * W; };
    auto py = [&](double k) { return Hgt - (k - kmin) / (kmax - kmin) * Hgt; };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" "
           "height=\"600\" viewBox=\"0 0 800 600\">\n";
    out += "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";

    if (d.parabola) {
        // h = k^2/(2 beta) + g3_0 k + c, drawn over the visible k range
        std::string pts;
        for (int i = 0; i <= 200; ++i) {
            const double k = kmin + (kmax - kmin) * i / 200.0;
            const double h = k * k / (2 * d.parabola->beta) + d.parabola->g3_0 * k +
                             d.parabola->c;
            pts += (i ? "L" : "M");
            pts += fmt_g6(px(h)) + " " + fmt_g6(py(k));
        }
        out += "<path class=\"parabola\" d=\"" + pts +
               "\" fill=\"none\" stroke=\"#888\" stroke-dasharray=\"2 3\"/>\n";
    }

    for (const CurveBranch& br : d.curves) {
        // one path per maximal run of equal type
        std::size_t i = 0;
        while (i < br.samples.size()) {
            const Rank1Type t = br.samples[i].type;
            std::string pts;
            bool first = true;
            std::size_t jdx = i;
            for (; jdx < br.samples.size() && br.samples[jdx].type == t; ++jdx) {
                const CurveSample& s = br.samples[jdx];
                if (std::fabs(s.k) > k_max) continue;
                pts += (first ? "M" : "L");
                pts += fmt_g6(px(s.h)) + " " + fmt_g6(py(s.k));
                first = false;
            }
            if (!first) {
                const char* cls = t == Rank1Type::Elliptic     ? "curve elliptic"
                                  : t == Rank1Type::Hyperbolic ? "curve hyperbolic"
                                                               : "curve degenerate";
                out += "<path class=\"";
                out += cls;
                out += "\" d=\"" + pts + "\" fill=\"none\" stroke=\"";
                out += t == Rank1Type::Hyperbolic ? "#d62728" : "#1f77b4";
                out += "\"";
                if (t == Rank1Type::Hyperbolic) out += " stroke-dasharray=\"6 4\"";
                if (t == Rank1Type::Degenerate) out += " stroke-dasharray=\"1 3\"";
                out += "/>\n";
            }
            i = jdx;
        }
    }

    for (const ZPoint& z : d.z_points) {
        out += "<circle class=\"z-marker\" cx=\"" + fmt_g6(px(z.h)) + "\" cy=\"" +
               fmt_g6(py(z.k)) + "\" r=\"4\" fill=\"black\"/>\n";
        out += "<text x=\"" + fmt_g6(px(z.h) + 6) + "\" y=\"" +
               fmt_g6(py(z.k) - 6) + "\" font-size=\"12\">Z";
        out += z.sign > 0 ? "+" : "-";
        out += " (";
        out += to_string(z.type);
        out += ")</text>\n";
    }
    for (const IsolatedPoint& p : d.isolated_points)
        out += "<circle class=\"isolated\" cx=\"" + fmt_g6(px(p.h)) + "\" cy=\"" +
               fmt_g6(py(p.k)) + "\" r=\"3\" fill=\"#2ca02c\"/>\n";
    if (d.special_point)
        out += "<circle class=\"special\" cx=\"" + fmt_g6(px(d.special_point->h)) +
               "\" cy=\"" + fmt_g6(py(d.special_point->k)) +
               "\" r=\"3\" fill=\"#ff7f0e\"/>\n";
    out += "</svg>\n";
    return out;
}

}  // namespace e3top
