#pragma once

// Finite devices: point defects separated by free segments on the line.

#include <array>
#include <span>
#include <variant>
#include <vector>

#include "spinpoint/extension.hpp"
#include "spinpoint/scattering.hpp"

namespace spinpoint {

struct FreeSegment {
    double length = 0.0;
    bool operator==(const FreeSegment&) const = default;
};

using Element = std::variant<DefectSpec, FreeSegment>;

// Ordered elements, first element nearest x = -infinity.  Immutable once
// constructed; construction validates every element.
class Device {
public:
    Device() = default;
    explicit Device(std::vector<Element> elements);

    std::span<const Element> elements() const noexcept { return elements_; }
    std::size_t size() const noexcept { return elements_.size(); }
    bool empty() const noexcept { return elements_.empty(); }

    // Sum of free-segment lengths.
    double length() const noexcept;

    // Same elements in reverse spatial order.
    Device reversed() const;

    bool operator==(const Device&) const = default;

private:
    std::vector<Element> elements_;
};

Device concat(const Device& left, const Device& right);

// Transfer from the left end to the right end: M_n ... M_2 M_1.
BoundaryMatrix total_transfer(const Device& device, double k);

struct SpectrumRow {
    double k = 0.0;
    double energy = 0.0;
    std::array<double, 4> probabilities{};  // outgoing channel order
    double unitarity_residual = 0.0;
    bool singular = false;  // probabilities and residual are NaN when set
};

struct SpectrumTable {
    Channel incident = Channel::LeftUp;
    std::vector<SpectrumRow> rows;
};

struct SweepOptions {
    unsigned threads = 1;
    double transfer_tolerance = kDefaultTransferTolerance;
};

ScatteringMatrix device_scattering(const Device& device, double k,
                                   double tol = kDefaultTransferTolerance);

// Rows are returned in grid order regardless of thread count.
SpectrumTable spectrum(const Device& device, std::span<const double> k_grid, Channel incident,
                       const SweepOptions& options = {});

// [defect, Free(separation), defect]
Device preset_resonator(const DefectSpec& defect, double separation = 1.0);

// Filter chain [outer, Free(spacing), center, Free(spacing), outer].  The
// geometry is a configurable default, not a reconstruction of any measured
// device.
struct FilterParams {
    DefectSpec outer = DefectSpec::r_flip(0.5);
    DefectSpec center = DefectSpec::x1(1.0);
    double spacing = 1.0;
};

Device preset_filter(const FilterParams& params = {});

}  // namespace spinpoint
