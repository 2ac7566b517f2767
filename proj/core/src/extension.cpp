#include "spinpoint/extension.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "spinpoint/errors.hpp"

namespace spinpoint {

namespace {

constexpr complex kI{0.0, 1.0};

void require_finite(double v, std::string_view what) {
    if (!std::isfinite(v)) {
        throw DomainError(std::string(what) + " must be finite");
    }
}

}  // namespace

std::string_view to_string(DefectKind kind) noexcept {
    switch (kind) {
        case DefectKind::X1: return "x1";
        case DefectKind::X4: return "x4";
        case DefectKind::MassJump: return "mass_jump";
        case DefectKind::Flux: return "flux";
        case DefectKind::RFlip: return "r_x4";
        case DefectKind::RTildeFlip: return "r_x1";
        case DefectKind::Product: return "product";
    }
    return "unknown";
}

void validate(const DefectSpec& spec) {
    switch (spec.kind) {
        case DefectKind::MassJump:
            require_finite(spec.value, "mu");
            if (!(spec.value > 0.0)) {
                throw DomainError("mass-jump parameter mu must be > 0, got " + std::to_string(spec.value));
            }
            break;
        case DefectKind::Product:
            if (spec.factors.empty()) {
                throw DomainError("product defect needs at least one factor");
            }
            for (const auto& f : spec.factors) validate(f);
            break;
        default:
            require_finite(spec.value, to_string(spec.kind));
            break;
    }
}

bool is_spin_diagonal(const DefectSpec& spec) {
    switch (spec.kind) {
        case DefectKind::RFlip:
        case DefectKind::RTildeFlip:
            return spec.value == 0.0;
        case DefectKind::Product:
            for (const auto& f : spec.factors) {
                if (!is_spin_diagonal(f)) return false;
            }
            return true;
        default:
            return true;
    }
}

std::array<CurrentForm, 3> sigma_forms() {
    // Sp2 = [[0,1],[-1,0]], sigma_x = [[0,1],[1,0]]
    BoundaryMatrix sx = BoundaryMatrix::Zero();
    sx(0, 1) = -kI;
    sx(1, 0) = kI;
    sx(2, 3) = -kI;
    sx(3, 2) = kI;

    BoundaryMatrix sy = BoundaryMatrix::Zero();
    sy(0, 1) = -1.0;
    sy(1, 0) = -1.0;
    sy(2, 3) = 1.0;
    sy(3, 2) = 1.0;

    // (1/i) [[0, sigma_x], [-sigma_x, 0]]
    BoundaryMatrix sz = BoundaryMatrix::Zero();
    sz(0, 3) = -kI;
    sz(1, 2) = -kI;
    sz(2, 1) = kI;
    sz(3, 0) = kI;

    return {CurrentForm{CurrentAxis::X, sx}, CurrentForm{CurrentAxis::Y, sy},
            CurrentForm{CurrentAxis::Z, sz}};
}

BoundaryMatrix lift(const SpinBlock& block) {
    BoundaryMatrix m = BoundaryMatrix::Zero();
    m.topLeftCorner<2, 2>() = block;
    m.bottomRightCorner<2, 2>() = block;
    return m;
}

SpinBlock x1_block(double x1) {
    SpinBlock b;
    b << 1.0, 0.0, x1, 1.0;
    return b;
}

SpinBlock x4_block(double x4) {
    SpinBlock b;
    b << 1.0, -x4, 0.0, 1.0;
    return b;
}

SpinBlock mass_jump_block(double mu) {
    if (!(mu > 0.0) || !std::isfinite(mu)) {
        throw DomainError("mass-jump parameter mu must be finite and > 0, got " + std::to_string(mu));
    }
    SpinBlock b;
    b << mu, 0.0, 0.0, 1.0 / mu;
    return b;
}

complex flux_phase(double phi) {
    // Reduce first so large |phi| keeps full precision in the phase.
    const double reduced = std::remainder(phi, 2.0);
    return std::polar(1.0, std::numbers::pi * reduced);
}

BoundaryMatrix defect_matrix(const DefectSpec& spec) {
    validate(spec);
    switch (spec.kind) {
        case DefectKind::X1:
            return lift(x1_block(spec.value));
        case DefectKind::X4:
            return lift(x4_block(spec.value));
        case DefectKind::MassJump:
            return lift(mass_jump_block(spec.value));
        case DefectKind::Flux:
            return flux_phase(spec.value) * BoundaryMatrix::Identity();
        case DefectKind::RFlip: {
            BoundaryMatrix m = BoundaryMatrix::Identity();
            m(0, 3) = spec.value;
            m(2, 1) = spec.value;
            return m;
        }
        case DefectKind::RTildeFlip: {
            BoundaryMatrix m = BoundaryMatrix::Identity();
            m(1, 2) = spec.value;
            m(3, 0) = spec.value;
            return m;
        }
        case DefectKind::Product: {
            BoundaryMatrix m = BoundaryMatrix::Identity();
            for (const auto& f : spec.factors) m = m * defect_matrix(f);
            return m;
        }
    }
    throw UsageError("unhandled defect kind");
}

BoundaryMatrix compose(std::span<const BoundaryMatrix> matrices) {
    if (matrices.empty()) {
        throw UsageError("compose: empty matrix list");
    }
    BoundaryMatrix m = matrices.front();
    for (const auto& next : matrices.subspan(1)) m = m * next;
    return m;
}

BoundaryMatrix compose(std::initializer_list<BoundaryMatrix> matrices) {
    return compose(std::span<const BoundaryMatrix>(matrices.begin(), matrices.size()));
}

CurrentReport conserves_currents(const BoundaryMatrix& m, double tol) {
    if (!(tol > 0.0)) {
        throw DomainError("tolerance must be > 0");
    }
    CurrentReport report;
    const auto forms = sigma_forms();
    for (std::size_t i = 0; i < forms.size(); ++i) {
        const BoundaryMatrix diff = m.adjoint() * forms[i].matrix * m - forms[i].matrix;
        const double residual = diff.cwiseAbs().maxCoeff();
        report.residuals[i] = residual;
        report.conserved[i] = residual <= tol;
    }
    return report;
}

double x2_from_mu(double mu) {
    if (!(mu > 0.0) || !std::isfinite(mu)) {
        throw DomainError("mu must be finite and > 0, got " + std::to_string(mu));
    }
    return 2.0 * (mu - 1.0) / (mu + 1.0);
}

double mu_from_x2(double x2) {
    if (!(std::abs(x2) < 2.0)) {
        throw DomainError("X2 must satisfy |X2| < 2, got " + std::to_string(x2));
    }
    return (2.0 + x2) / (2.0 - x2);
}

double x3_from_flux(double phi) {
    require_finite(phi, "phi");
    const double reduced = std::remainder(phi, 2.0);
    if (std::abs(std::abs(reduced) - 1.0) < 1e-15) {
        throw DomainError("flux fraction phi = 1 (mod 2) corresponds to infinite X3");
    }
    return 2.0 * std::tan(std::numbers::pi * reduced / 2.0);
}

double flux_from_x3(double x3) {
    require_finite(x3, "X3");
    return 2.0 / std::numbers::pi * std::atan(x3 / 2.0);
}

}  // namespace spinpoint
