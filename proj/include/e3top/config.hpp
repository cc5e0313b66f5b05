#ifndef E3TOP_CONFIG_HPP
#define E3TOP_CONFIG_HPP

#include <string>

#include "e3top/singular.hpp"

namespace e3top {

/// Thrown by config parsing/validation; the message names the field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    // [system]
    std::string preset;  // "", "lagrange", or "leggett"
    double beta = 1;
    std::string g1 = "0", g2 = "0", g3 = "0", v = "0";
    // [orbit]
    OrbitParams orbit;
    // [grids]
    int x_steps = 2048;
    int samples_per_interval = 512;
    int fiber_grid = 1024;
    // [tol]
    Tolerances tol;
    // [output]
    std::string out_dir = ".";

    /// Build the validated SystemSpec (preset applied first, explicit
    /// expression keys override preset fields).
    SystemSpec make_system() const;
};

/// Flat INI-style text: [section] headers, key = value lines, `#`/`;`
/// comments; expression values may be double-quoted.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace e3top

#endif
