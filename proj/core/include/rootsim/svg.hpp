#pragma once

#include <stdexcept>
#include <string>

#include "rootsim/simulation_log.hpp"

namespace rootsim {

class SvgError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SvgOptions {
    double width{600.0};
    double margin{20.0};
    double stroke{2.0};
    bool show_title{true};
};

/// Planar drawing of a run: obstacles, the final curve of every attempt, the start point and
/// the target. Throws SvgError when the log leaves the z = 0 plane.
std::string emit_svg(const SimulationLog& log, const SvgOptions& options = {});

}  // namespace rootsim
