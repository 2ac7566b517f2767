#include "spinpoint/scattering.hpp"

#include <cmath>
#include <string>

#include "spinpoint/errors.hpp"

namespace spinpoint {

namespace {

constexpr complex kI{0.0, 1.0};
constexpr double kSingularRcond = 1e-13;

void require_momentum(double k) {
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw DomainError("momentum k must be finite and > 0, got " + std::to_string(k));
    }
}

Eigen::Matrix4cd permutation_matrix(const std::array<Channel, 4>& order) {
    // P(i, order[i]) = 1, so (P S P^T)(i, j) = S(order[i], order[j]).
    Eigen::Matrix4cd p = Eigen::Matrix4cd::Zero();
    for (std::size_t i = 0; i < order.size(); ++i) p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(index(order[i]))) = 1.0;
    return p;
}

}  // namespace

BoundaryMatrix propagation(double k, double length) {
    require_momentum(k);
    if (!(length >= 0.0) || !std::isfinite(length)) {
        throw DomainError("segment length must be finite and >= 0, got " + std::to_string(length));
    }
    const double c = std::cos(k * length);
    const double s = std::sin(k * length);
    SpinBlock block;
    block << c, s / k, -k * s, c;
    return lift(block);
}

ScatteringMatrix transfer_to_scattering(const BoundaryMatrix& transfer, double k, double tol) {
    require_momentum(k);

    const auto report = conserves_currents(transfer, 1.0);
    const double norm = transfer.cwiseAbs().rowwise().sum().maxCoeff();
    const double allowed = tol * std::max(1.0, norm * norm);
    if (!(report.residuals[0] <= allowed)) {
        throw InvalidTransferError("transfer matrix violates Sigma_x current conservation (residual " +
                                       std::to_string(report.residuals[0]) + ")",
                                   report.residuals[0]);
    }

    // Per spin block (psi, psi') = W (A, B) with W = [[1, 1], [ik, -ik]].
    SpinBlock w;
    w << 1.0, 1.0, kI * k, -kI * k;
    SpinBlock w_inv;
    w_inv << 0.5, -kI / (2.0 * k), 0.5, kI / (2.0 * k);
    const Eigen::Matrix4cd q = lift(w_inv) * transfer * lift(w);

    // Left coefficients (A_up, B_up, A_dn, B_dn) = (a_Lu, b_Lu, a_Ld, b_Ld);
    // right coefficients = (b_Ru, a_Ru, b_Rd, a_Rd).  Split each into the part
    // fed by incoming v = (a_Lu, a_Ld, a_Ru, a_Rd) and by outgoing
    // u = (b_Lu, b_Ld, b_Ru, b_Rd):  right = Q left.
    Eigen::Matrix4cd left_in = Eigen::Matrix4cd::Zero();
    Eigen::Matrix4cd left_out = Eigen::Matrix4cd::Zero();
    Eigen::Matrix4cd right_in = Eigen::Matrix4cd::Zero();
    Eigen::Matrix4cd right_out = Eigen::Matrix4cd::Zero();
    left_in(0, 0) = 1.0;
    left_out(1, 0) = 1.0;
    left_in(2, 1) = 1.0;
    left_out(3, 1) = 1.0;
    right_out(0, 2) = 1.0;
    right_in(1, 2) = 1.0;
    right_out(2, 3) = 1.0;
    right_in(3, 3) = 1.0;

    const Eigen::Matrix4cd system = right_out - q * left_out;
    const Eigen::Matrix4cd rhs = q * left_in - right_in;

    Eigen::PartialPivLU<Eigen::Matrix4cd> lu(system);
    if (!(lu.rcond() > kSingularRcond)) {
        throw SpectralSingularityError(k);
    }
    return ScatteringMatrix{lu.solve(rhs), k};
}

ScatteringMatrix closed_form_s_r(double k, double r) {
    require_momentum(k);
    const double kr = k * r;
    const complex refl = kr * kr;
    const complex flip = 2.0 * kI * kr;
    Eigen::Matrix4cd s;
    // clang-format off
    s << refl,  4.0,   -flip, flip,
         4.0,   refl,  flip,  -flip,
         -flip, flip,  refl,  4.0,
         flip,  -flip, 4.0,   refl;
    // clang-format on
    s /= (kr * kr + 4.0);
    return ScatteringMatrix{s, k};
}

Eigen::Matrix4cd to_closed_form_order(const Eigen::Matrix4cd& s) {
    const Eigen::Matrix4cd p = permutation_matrix(kClosedFormChannels);
    return p * s * p.transpose();
}

Eigen::Matrix4cd from_closed_form_order(const Eigen::Matrix4cd& s) {
    const Eigen::Matrix4cd p = permutation_matrix(kClosedFormChannels);
    return p.transpose() * s * p;
}

std::array<double, 4> channel_probabilities(const ScatteringMatrix& s, Channel incoming) {
    std::array<double, 4> out{};
    for (auto c : kAllChannels) out[index(c)] = std::norm(s(c, incoming));
    return out;
}

double spin_flip_probability(const ScatteringMatrix& s, Channel incoming) {
    double total = 0.0;
    for (auto c : kAllChannels) {
        if (is_up(c) != is_up(incoming)) total += std::norm(s(c, incoming));
    }
    return total;
}

double unitarity_residual(const ScatteringMatrix& s) {
    return (s.entries.adjoint() * s.entries - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff();
}

}  // namespace spinpoint
