#pragma once

// Exact maximization of (W - D)/L over grid profiles, boundary sweeps, the
// extremal boundary actions and the conditional interval problems.
//
// All maximizations are over profiles whose values at integer x are grid
// heights (multiples of dy) inside the working window [-J dy, J dy].
// Ties are broken by preferring the smaller height at the last free node,
// then the next-to-last, and so on (reverse-lexicographic order).

#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "wnaction/net.hpp"
#include "wnaction/noise.hpp"
#include "wnaction/profile.hpp"

namespace wnaction {

struct SolverOptions {
    int working_cap = 0;      // in dy steps; 0 means the field's cap
    int node_scale = 1;       // free nodes at multiples of this scale (coarse problems)
    bool keep_value_function = false;
    bool prefer_larger_on_ties = false;  // debug only: flips the tie-break
};

struct DPSolution {
    double value = 0.0;  // max (W - D)/L
    HeightProfile argmax;
    // value_function[n][j + J]: best partial (W - D) from x = 0 to node n
    // ending at height j*dy; -inf when unreachable. Empty unless requested.
    std::vector<std::vector<double>> value_function;
    int cap_steps = 0;
    bool cap_saturated = false;
};

// Grid index of a height; throws unless y is a multiple of dy.
int grid_index(double y, double dy);

DPSolution maximize_fixed_bc(const NoiseField& field, double y0, double y1, const SolverOptions& opt = {});

// Exhaustive enumeration with the same tie-break; requires K^(L-1) <= 1e7.
DPSolution brute_force_max(const NoiseField& field, double y0, double y1, const SolverOptions& opt = {});

struct SweepOptions {
    double window = 0.0;  // |y0|, |y1| <= window
    double db = 0.0;      // boundary step, multiple of dy
    SolverOptions solver;
};

struct SweepResult {
    int L = 1;
    double window = 0.0;
    double db = 0.0;
    std::vector<double> grid;   // boundary heights, ascending
    std::vector<int> scales;    // dyadic rho of the per-scale energies
    // Row-major over (i0, i1), pair index i0 * grid.size() + i1.
    std::vector<double> value;          // max (W - D)/L
    std::vector<double> linear_action;  // (W - D)(a_{y0,y1})/L
    std::vector<double> M;              // value - linear_action
    std::vector<double> midpoint;       // h*(L/2)
    std::vector<double> per_scale_D;    // [pair * scales.size() + k]: D(h*_rho)/L
    std::map<int, double> per_scale_D_max;
    std::vector<std::uint8_t> saturated;
    bool cap_saturated = false;
    std::optional<HeightProfile> zero_bc_argmax;  // h* at (0, 0) when 0 is on the grid

    std::size_t side() const noexcept { return grid.size(); }
    std::size_t pair(std::size_t i0, std::size_t i1) const noexcept { return i0 * grid.size() + i1; }
    // Index of y on the grid; throws if absent.
    std::size_t locate(double y) const;
    double M_at(double y0, double y1) const { return M[pair(locate(y0), locate(y1))]; }
};

// Boundary heights {k*db : |k*db| <= window}.
std::vector<double> boundary_grid(double window, double db);

SweepResult boundary_sweep(const NoiseField& field, const SweepOptions& opt);

struct ExtremalActions {
    double a_plus = 0.0;
    double a_minus = 0.0;
};

ExtremalActions extremal_actions(const SweepResult& sweep);

// min(a_minus, min of M over the enlarged sweep); the enlarged sweep must
// cover the window 2L on a coarser grid.
double tilde_minus(double a_minus, const SweepResult& enlarged);

// Per-scale D(h_rho)/L of a profile, without allocating intermediate profiles.
std::vector<double> per_scale_dirichlet(const HeightProfile& h, std::vector<int>* scales = nullptr);

struct IntervalSolution {
    double value = 0.0;            // see the producing function
    std::vector<double> heights;   // maximizer at each integer x of the interval
    bool cap_saturated = false;
};

// Best (W - D) restricted to [x_begin, x_end] over grid profiles on that
// interval with the given end heights (not normalized).
IntervalSolution maximize_on_interval(const NoiseField& field, int x_begin, int x_end, double y_begin, double y_end,
                                      const SolverOptions& opt = {});

// A_{l,n}(base): the best relative action (W_n - D)(h_n)/l over corrections
// h_n vanishing at the ends of interval n for which base + h_n is a grid
// profile. Equivalently the fixed-endpoint maximum over the interval minus the
// interval action of base, divided by l. base must be at scale l with grid
// values at (n-1)l and nl.
IntervalSolution conditional_interval_max(const NoiseField& field, const HeightProfile& base, int n,
                                          const SolverOptions& opt = {});

struct BinExtremes {
    double sup = -std::numeric_limits<double>::infinity();
    double inf = std::numeric_limits<double>::infinity();
    std::size_t members = 0;
};

// sup / inf of A_{l,n} over coarse profiles in the bin of `bin` restricted to
// endpoint offsets o on the dy grid with -half_width <= o < half_width
// (half_width = l/2 by default). At most 64 offsets per endpoint.
BinExtremes bin_extremal_interval(const NoiseField& field, const NetPoint& bin, int n, double half_width = -1.0,
                                  const SolverOptions& opt = {});

// Profile built from the coarse profile by replacing each interval with its
// conditional maximizer.
HeightProfile paste_conditional_maximizers(const NoiseField& field, const HeightProfile& coarse,
                                           const SolverOptions& opt = {});

} // namespace wnaction
