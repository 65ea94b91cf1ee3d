#pragma once

#include "stoplab/solver.hpp"

#include <string>
#include <vector>

namespace stoplab {

/// Header t,x,v,g,exercise; one row per node, by t then x; 17 significant digits.
std::string surface_csv(const ValueSurface& s);

/// Header t,b; sentinels written as -inf / +inf.
std::string boundary_csv(const Boundary& b);

/// Write surface.csv and boundary.csv into dir (created if missing).
/// Returns the paths written. I/O failures throw std::runtime_error.
std::vector<std::string> export_surface(const ValueSurface& s, const Boundary& b, const std::string& dir);

/// Write text to dir/name, creating dir.
std::string write_text_file(const std::string& dir, const std::string& name, const std::string& text);

}  // namespace stoplab
