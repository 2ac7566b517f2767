#include "spinpoint/device.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "spinpoint/errors.hpp"
#include "spinpoint/sweep.hpp"

namespace spinpoint {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

}  // namespace

Device::Device(std::vector<Element> elements) : elements_(std::move(elements)) {
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        if (const auto* seg = std::get_if<FreeSegment>(&elements_[i])) {
            if (!(seg->length > 0.0) || !std::isfinite(seg->length)) {
                throw DomainError("element " + std::to_string(i) +
                                  ": free segment length must be > 0, got " + std::to_string(seg->length));
            }
        } else {
            try {
                validate(std::get<DefectSpec>(elements_[i]));
            } catch (const DomainError& e) {
                throw DomainError("element " + std::to_string(i) + ": " + e.what());
            }
        }
    }
}

double Device::length() const noexcept {
    double total = 0.0;
    for (const auto& e : elements_) {
        if (const auto* seg = std::get_if<FreeSegment>(&e)) total += seg->length;
    }
    return total;
}

Device Device::reversed() const {
    return Device(std::vector<Element>(elements_.rbegin(), elements_.rend()));
}

Device concat(const Device& left, const Device& right) {
    std::vector<Element> all(left.elements().begin(), left.elements().end());
    all.insert(all.end(), right.elements().begin(), right.elements().end());
    return Device(std::move(all));
}

BoundaryMatrix total_transfer(const Device& device, double k) {
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw DomainError("momentum k must be finite and > 0, got " + std::to_string(k));
    }
    BoundaryMatrix t = BoundaryMatrix::Identity();
    for (const auto& e : device.elements()) {
        const BoundaryMatrix m = std::visit(
            overloaded{[&](const DefectSpec& d) { return defect_matrix(d); },
                       [&](const FreeSegment& s) { return propagation(k, s.length); }},
            e);
        t = m * t;
    }
    return t;
}

ScatteringMatrix device_scattering(const Device& device, double k, double tol) {
    return transfer_to_scattering(total_transfer(device, k), k, tol);
}

SpectrumTable spectrum(const Device& device, std::span<const double> k_grid, Channel incident,
                       const SweepOptions& options) {
    require_positive_sorted(k_grid);
    SpectrumTable table;
    table.incident = incident;
    table.rows.resize(k_grid.size());

    parallel_for(k_grid.size(), options.threads, [&](std::size_t i) {
        const double k = k_grid[i];
        SpectrumRow row;
        row.k = k;
        row.energy = k * k;
        try {
            const auto s = device_scattering(device, k, options.transfer_tolerance);
            row.probabilities = channel_probabilities(s, incident);
            row.unitarity_residual = unitarity_residual(s);
        } catch (const SpectralSingularityError&) {
            constexpr double nan = std::numeric_limits<double>::quiet_NaN();
            row.probabilities = {nan, nan, nan, nan};
            row.unitarity_residual = nan;
            row.singular = true;
        }
        table.rows[i] = row;
    });
    return table;
}

Device preset_resonator(const DefectSpec& defect, double separation) {
    if (!(separation > 0.0)) {
        throw DomainError("resonator separation must be > 0, got " + std::to_string(separation));
    }
    return Device({defect, FreeSegment{separation}, defect});
}

Device preset_filter(const FilterParams& params) {
    if (!(params.spacing > 0.0)) {
        throw DomainError("filter spacing must be > 0, got " + std::to_string(params.spacing));
    }
    return Device({params.outer, FreeSegment{params.spacing}, params.center,
                   FreeSegment{params.spacing}, params.outer});
}

}  // namespace spinpoint
