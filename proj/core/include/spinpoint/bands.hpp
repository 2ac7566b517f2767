#pragma once

// Bloch bands of periodic combs of point interactions.
//
// A comb repeats one cell of length `period`.  The cell's explicit elements
// are followed by an implied free segment that fills the cell up to the
// period.  Band membership uses the eigenvalues lambda of the cell transfer
// matrix: propagating modes have |lambda| = 1 and quasi-momentum
// q = |arg lambda| / period in [0, pi / period].
//
// With E = k^2, a single RFlip(r) per unit cell gives the low-energy
// branches E = q^2 / (1 + r) and E = q^2 / (1 - r).  At r = 1 the second
// one degenerates into the linear branch E = 2 sqrt(3) q.

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "spinpoint/device.hpp"

namespace spinpoint {

inline constexpr double kDefaultBandTolerance = 1e-8;

class PeriodicComb {
public:
    PeriodicComb(Device cell, double period = 1.0);

    const Device& cell() const noexcept { return cell_; }
    double period() const noexcept { return period_; }
    // Length of the implied trailing free segment.
    double fill_length() const noexcept;

    bool operator==(const PeriodicComb&) const = default;

private:
    Device cell_;
    double period_;
};

// propagation(k, fill) * total_transfer(cell, k)
BoundaryMatrix cell_transfer(const PeriodicComb& comb, double k);

struct BandPoint {
    double k = 0.0;
    double energy = 0.0;
    double q = 0.0;
    int branch = -1;               // -1 for points flagged defective
    double lambda_residual = 0.0;  // ||lambda| - 1|
    bool defective = false;
};

struct BandDiagram {
    PeriodicComb comb;
    std::vector<BandPoint> points;  // sorted by k, then q
    int branch_count = 0;

    // Points of one branch, in k order.
    std::vector<BandPoint> branch(int id) const;
};

struct DispersionOptions {
    unsigned threads = 1;
    double band_tolerance = kDefaultBandTolerance;
};

// Modes at a single momentum.  Reciprocal eigenvalue pairs (lambda, 1/lambda)
// share one q and are reported once; exactly degenerate q values collapse.
std::vector<BandPoint> modes_at(const PeriodicComb& comb, double k,
                                double band_tolerance = kDefaultBandTolerance);

// Branches are joined by nearest-neighbour continuity in q, predicted
// linearly from the last two points of each branch; ties go to the larger
// eigenvector overlap.
BandDiagram dispersion(const PeriodicComb& comb, std::span<const double> k_grid,
                       const DispersionOptions& options = {});

// Rewrites the comb in the basis phi_pm = (psi_up +- psi_dn) / sqrt(2).
// Returns the (phi_plus, phi_minus) scalar combs made of spinless defects:
// RFlip(r) becomes X4(-r) and X4(+r), RTildeFlip(t) becomes X1(t) and X1(-t),
// spin-diagonal defects are copied to both.
std::optional<std::pair<PeriodicComb, PeriodicComb>> spin_decouple(const PeriodicComb& comb);

// cos(q a) for a comb of X4 defects: cos(ka) + (x4 k / 2) sin(ka).
// The momentum propagates iff |value| <= 1.
double scalar_kp_relation(double x4, double period, double k);

// q for the closed-form X4 comb, or nothing inside a gap.
std::optional<double> scalar_kp_q(double x4, double period, double k);

// Gap edges from the closed-form X4 relation: roots of |cos(qa)| = 1,
// bracketed on a ka = 0.01 scan and refined by bisection.
std::vector<double> scalar_band_edges(double x4, double period, double k_min, double k_max);

// Gap edges from the cell-transfer eigenvalues.  Each reciprocal pair gives
// cos(q a) = (lambda + 1/lambda) / 2; the two pair values are followed by
// continuity along the ka = 0.01 scan so that edges shared by both pairs
// (e.g. ka = n pi for RFlip combs) are still bracketed.  Assumes real cell
// matrices (no flux defects).
std::vector<double> band_edges(const PeriodicComb& comb, double k_min, double k_max);

struct CurvatureFit {
    double curvature = 0.0;       // c in E = c q^2
    double relative_mass = 0.0;   // 1 / c; the free particle has 1
    double rms_residual = 0.0;
    std::size_t points = 0;
};

struct SlopeFit {
    double slope = 0.0;        // v in E = v q + w q^2
    double quadratic = 0.0;    // w
    double line_slope = 0.0;   // v' in the pure line E = v' q
    double rms_residual = 0.0; // of the v, w fit
    std::size_t points = 0;
};

// Both fits use the points with 0 < q <= q_max and throw FitError with fewer
// than 10 of them.
CurvatureFit effective_mass(std::span<const BandPoint> branch, double q_max);
SlopeFit sound_slope(std::span<const BandPoint> branch, double q_max);

}  // namespace spinpoint
