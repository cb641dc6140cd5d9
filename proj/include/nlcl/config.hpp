#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "nlcl/convolution.hpp"
#include "nlcl/roe.hpp"
#include "nlcl/scenario.hpp"

namespace nlcl {

struct InitialConfig {
    std::string mode = "particles";  // particles | file
    std::size_t count = 192;
    Rect region{0.0, 0.4, 0.0, 0.6};
    double gamma = 200.0;
    double rho_max = 2004.0;
    std::vector<Vec2> positions;  // explicit positions override random placement
    double split_x = 1.0 / 3.0;
    int left_class = 2;
    int right_class = 1;
    std::string file;
};

struct OutputConfig {
    std::string directory = "out";
    bool csv = true;
    bool binary = false;
};

struct RunConfig {
    Scenario scenario;
    CflPolicy cfl;
    long snapshot_every = 50;
    ConvolutionMode convolution = ConvolutionMode::fft;
    std::uint64_t seed = 1;
    InitialConfig initial;
    OutputConfig output;
    bool diag_entropy = true;
    bool diag_kernel_bounds = true;
    double exit_x = 1.1;  // cells with center x >= exit_x form the exit zone
    double crossing_x = std::numeric_limits<double>::quiet_NaN();  // NaN: downstream end of the diverter
};

/// Parses flat `key = value` text. Throws ConfigError naming the offending key.
RunConfig parse_config(const std::string& text);

/// Reads and parses a file; IoError when unreadable.
RunConfig load_config(const std::string& path);

/// Builds the initial class densities described by the config.
std::vector<Field2D> initial_state(const RunConfig& cfg);

} // namespace nlcl
