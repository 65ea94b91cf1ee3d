#pragma once

#include "stoplab/field.hpp"
#include "stoplab/grid.hpp"
#include "stoplab/report.hpp"
#include "stoplab/solver.hpp"
#include "stoplab/table.hpp"

#include <cstdint>

namespace stoplab {

/// Threshold defining M = {mu < -tol_zero}.
inline constexpr double tol_zero = 1e-12;

enum class Scope { everywhere, region };

/// x -> g(t, x) non-decreasing on the grid (probed at t = 0 only when g does
/// not depend on t).
CheckReport check_g_monotone(const ScalarField& g, const Grid& grid);

/// t -> mu(t, x) non-increasing. With Scope::region only later points inside
/// M are tested, against every earlier time node.
CheckReport check_mu_time_monotone(const ScalarField& mu, const Grid& grid, Scope scope);

/// sigma^2 v_xx + 2 mu v_x >= 0 on interior nodes of C intersected with the
/// complement of M, skipping nodes next to a change of either mask.
CheckReport check_condition_iii(const ValueSurface& s, const ScalarField& mu, const ScalarField& sigma);

struct HMonotoneReport {
    CheckReport x_part;
    CheckReport t_part;
    CheckReport overall;
};
/// x -> h non-decreasing and t -> h non-increasing.
HMonotoneReport check_h_monotone(const ScalarField& h, const Grid& grid);

/// v(t_{k+1}, x) <= v(t_k, x) + 10 tol_contact at every node.
CheckReport verify_value_time_monotone(const ValueSurface& s);

/// Lower boundaries non-decreasing, upper boundaries non-increasing, within
/// one cell; sentinels must move in the same direction.
CheckReport verify_boundary_monotone(const Boundary& b);

struct RegionMasks {
    Table<std::uint8_t> C, D, M, Mc;
};
RegionMasks classify_regions(const ValueSurface& s, const ScalarField& drift);

/// Heuristic jump scan: x-increments of v compared with those of the obstacle.
CheckReport check_continuity(const ValueSurface& s);

}  // namespace stoplab
