#pragma once

// Boundary-condition matrices for spin-1/2 point interactions.
//
// Every matrix acts on the boundary 4-vector (psi_up, psi'_up, psi_dn, psi'_dn)
// and maps the left limit at the singular point to the right limit:
//
//     Phi(0+) = M Phi(0-)
//
// Units: hbar = 1, m = 1/2, so the free dispersion is E = k^2 and lengths
// are dimensionless.

#include <array>
#include <complex>
#include <initializer_list>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace spinpoint {

using complex = std::complex<double>;
using BoundaryMatrix = Eigen::Matrix4cd;
using SpinBlock = Eigen::Matrix2cd;

inline constexpr double kDefaultCurrentTolerance = 1e-12;

enum class DefectKind {
    X1,          // delta potential, strength x1 (1/length)
    X4,          // delta' type, strength x4 (length)
    MassJump,    // X2 extension, parametrized by mu = sqrt(m+/m-)
    Flux,        // X3 extension, flux fraction phi (mod 2)
    RFlip,       // spin-flip X4 analog, coupling r (length)
    RTildeFlip,  // spin-flip X1 analog, coupling r_tilde (1/length)
    Product,     // ordered product of factors
};

std::string_view to_string(DefectKind kind) noexcept;

// Symbolic description of one point interaction.  `value` carries the single
// real parameter of the kind (x1, x4, mu, phi, r or r_tilde); Product uses
// `factors` instead.  Factors are listed left to right as in M1 M2 ... Mn, so
// the last factor acts first on Phi(0-).
struct DefectSpec {
    DefectKind kind = DefectKind::X1;
    double value = 0.0;
    std::vector<DefectSpec> factors;

    static DefectSpec x1(double strength) { return {DefectKind::X1, strength, {}}; }
    static DefectSpec x4(double strength) { return {DefectKind::X4, strength, {}}; }
    static DefectSpec mass_jump(double mu) { return {DefectKind::MassJump, mu, {}}; }
    static DefectSpec flux(double phi) { return {DefectKind::Flux, phi, {}}; }
    static DefectSpec r_flip(double r) { return {DefectKind::RFlip, r, {}}; }
    static DefectSpec r_tilde_flip(double r_tilde) { return {DefectKind::RTildeFlip, r_tilde, {}}; }
    static DefectSpec product(std::vector<DefectSpec> factors) {
        return {DefectKind::Product, 0.0, std::move(factors)};
    }

    bool operator==(const DefectSpec&) const = default;
};

// Throws DomainError when a parameter is outside its domain.
void validate(const DefectSpec& spec);

// True when the defect (recursively) commutes with spin, i.e. carries no
// spin-flip coupling.
bool is_spin_diagonal(const DefectSpec& spec);

enum class CurrentAxis { X, Y, Z };

struct CurrentForm {
    CurrentAxis axis;
    BoundaryMatrix matrix;
};

// The Hermitian forms with J_i = Phi^dagger Sigma_i Phi.
std::array<CurrentForm, 3> sigma_forms();

// Lift a spinless 2x2 condition to 4x4 acting identically on both spins.
BoundaryMatrix lift(const SpinBlock& block);

SpinBlock x1_block(double x1);
SpinBlock x4_block(double x4);
SpinBlock mass_jump_block(double mu);
complex flux_phase(double phi);

BoundaryMatrix defect_matrix(const DefectSpec& spec);

// Ordered product; the rightmost matrix is applied first to Phi(0-).
BoundaryMatrix compose(std::span<const BoundaryMatrix> matrices);
BoundaryMatrix compose(std::initializer_list<BoundaryMatrix> matrices);

struct CurrentReport {
    std::array<bool, 3> conserved{};
    std::array<double, 3> residuals{};

    bool x() const noexcept { return conserved[0]; }
    bool y() const noexcept { return conserved[1]; }
    bool z() const noexcept { return conserved[2]; }
    bool all() const noexcept { return conserved[0] && conserved[1] && conserved[2]; }
};

// residual_i = max |(M^dagger Sigma_i M - Sigma_i)_{ab}|
CurrentReport conserves_currents(const BoundaryMatrix& m, double tol = kDefaultCurrentTolerance);

// X2 = 2 (mu - 1) / (mu + 1); inverse mu = (2 + X2) / (2 - X2), |X2| < 2.
double x2_from_mu(double mu);
double mu_from_x2(double x2);

// exp(i pi phi) = (2 + i X3) / (2 - i X3).  phi = 1 (mod 2) has no finite X3.
double x3_from_flux(double phi);
double flux_from_x3(double x3);

}  // namespace spinpoint
