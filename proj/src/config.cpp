#include "e3top/config.hpp"

#include <fstream>
#include <sstream>

namespace e3top {

using expr::Expr;
using expr::ParseError;

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (!quoted && (line[i] == '#' || line[i] == ';'))
            return line.substr(0, i);
    }
    return line;
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
        return s.substr(1, s.size() - 2);
    return s;
}

double parse_num(const std::string& field, const std::string& s) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(field + ": not a number: '" + s + "'");
    }
}

int parse_int(const std::string& field, const std::string& s) {
    const double v = parse_num(field, s);
    const int i = static_cast<int>(v);
    if (i != v) throw ConfigError(field + ": not an integer: '" + s + "'");
    return i;
}

void check_expr(const std::string& field, const std::string& s) {
    try {
        (void)Expr::parse(s);
    } catch (const ParseError& e) {
        throw ConfigError(field + ": " + e.what() + " (at offset " +
                          std::to_string(e.offset()) + ")");
    }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    bool beta_set = false, g1_set = false, g2_set = false, g3_set = false,
         v_set = false;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = unquote(trim(line.substr(eq + 1)));
        const std::string field = section + "." + key;

        if (section == "system") {
            if (key == "preset") cfg.preset = val;
            else if (key == "beta") { cfg.beta = parse_num(field, val); beta_set = true; }
            else if (key == "g1") { cfg.g1 = val; g1_set = true; }
            else if (key == "g2") { cfg.g2 = val; g2_set = true; }
            else if (key == "g3") { cfg.g3 = val; g3_set = true; }
            else if (key == "V") { cfg.v = val; v_set = true; }
            else throw ConfigError("unknown key: " + field);
        } else if (section == "orbit") {
            if (key == "a") cfg.orbit.a = parse_num(field, val);
            else if (key == "g") cfg.orbit.g = parse_num(field, val);
            else throw ConfigError("unknown key: " + field);
        } else if (section == "grids") {
            if (key == "x_steps") cfg.x_steps = parse_int(field, val);
            else if (key == "samples_per_interval")
                cfg.samples_per_interval = parse_int(field, val);
            else if (key == "fiber_grid") cfg.fiber_grid = parse_int(field, val);
            else throw ConfigError("unknown key: " + field);
        } else if (section == "tol") {
            if (key == "q") cfg.tol.q_base = parse_num(field, val);
            else if (key == "D") cfg.tol.d_base = parse_num(field, val);
            else if (key == "W") cfg.tol.w_base = parse_num(field, val);
            else throw ConfigError("unknown key: " + field);
        } else if (section == "output") {
            if (key == "dir") cfg.out_dir = val;
            else throw ConfigError("unknown key: " + field);
        } else {
            throw ConfigError("unknown section: [" + section + "]");
        }
    }

    // presets fill the fields the user did not set explicitly
    if (cfg.preset == "lagrange") {
        if (!beta_set) cfg.beta = 1;
        if (!v_set) cfg.v = "-x";
        if (!g1_set) cfg.g1 = "0";
        if (!g2_set) cfg.g2 = "0";
        if (!g3_set) cfg.g3 = "0";
    } else if (cfg.preset == "leggett") {
        if (!beta_set) cfg.beta = 1;
        if (!g3_set) cfg.g3 = "-0.5";
        if (!v_set) cfg.v = "-x^2/2";
        if (!g1_set) cfg.g1 = "0";
        if (!g2_set) cfg.g2 = "0";
    } else if (!cfg.preset.empty()) {
        throw ConfigError("system.preset: unknown preset '" + cfg.preset + "'");
    }

    if (!(cfg.beta > 0)) throw ConfigError("system.beta: must be > 0");
    if (!(cfg.orbit.a > 0)) throw ConfigError("orbit.a: must be > 0");
    if (cfg.x_steps < 100) throw ConfigError("grids.x_steps: must be >= 100");
    if (cfg.samples_per_interval < 2)
        throw ConfigError("grids.samples_per_interval: must be >= 2");
    if (cfg.fiber_grid < 256) throw ConfigError("grids.fiber_grid: must be >= 256");
    check_expr("system.g1", cfg.g1);
    check_expr("system.g2", cfg.g2);
    check_expr("system.g3", cfg.g3);
    check_expr("system.V", cfg.v);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

SystemSpec RunConfig::make_system() const {
    return SystemSpec(beta, Expr::parse(g1), Expr::parse(g2), Expr::parse(g3),
                      Expr::parse(v));
}

}  // namespace e3top
