#pragma once

// Four-channel scattering matrices from boundary/transfer matrices.
//
// Plane-wave convention per spin component s, with E = k^2:
//
//     psi_s(x) = a_{L,s} e^{ikx} + b_{L,s} e^{-ikx}      left of the element
//     psi_s(x) = b_{R,s} e^{ikx} + a_{R,s} e^{-ikx}      right of the element
//
// a are incoming amplitudes, b outgoing.  Left amplitudes are referenced to
// the left end of the element, right amplitudes to its right end.  S maps
// (a_{L,up}, a_{L,dn}, a_{R,up}, a_{R,dn}) to (b_{L,up}, b_{L,dn}, b_{R,up}, b_{R,dn}).

#include <array>
#include <cstddef>

#include "spinpoint/extension.hpp"

namespace spinpoint {

inline constexpr double kDefaultTransferTolerance = 1e-10;

enum class Channel : std::size_t { LeftUp = 0, LeftDown = 1, RightUp = 2, RightDown = 3 };

inline constexpr std::array<Channel, 4> kAllChannels{Channel::LeftUp, Channel::LeftDown,
                                                     Channel::RightUp, Channel::RightDown};

constexpr std::size_t index(Channel c) noexcept { return static_cast<std::size_t>(c); }
constexpr bool is_up(Channel c) noexcept { return c == Channel::LeftUp || c == Channel::RightUp; }
constexpr bool is_left(Channel c) noexcept { return c == Channel::LeftUp || c == Channel::LeftDown; }

struct ScatteringMatrix {
    Eigen::Matrix4cd entries;
    double k = 0.0;

    complex operator()(Channel out, Channel in) const { return entries(index(out), index(in)); }
    double energy() const noexcept { return k * k; }
};

// The closed-form matrix for a single RFlip defect lists channels as
// (L up, R up, L down, R down).  Row/column i of that matrix is channel
// kClosedFormChannels[i] of ours; no phase or conjugation is involved.
inline constexpr std::array<Channel, 4> kClosedFormChannels{Channel::LeftUp, Channel::RightUp,
                                                            Channel::LeftDown, Channel::RightDown};

// Free evolution over length L: each spin block [[cos kL, sin kL / k], [-k sin kL, cos kL]].
BoundaryMatrix propagation(double k, double length);

// Throws InvalidTransferError when T violates Sigma_x conservation beyond
// tol * max(1, |T|^2), SpectralSingularityError when the channel
// rearrangement is singular at k.
ScatteringMatrix transfer_to_scattering(const BoundaryMatrix& transfer, double k,
                                        double tol = kDefaultTransferTolerance);

// Closed-form S for a single RFlip(r) defect, in closed-form channel order.
ScatteringMatrix closed_form_s_r(double k, double r);

// Reorder our S into the closed-form channel order, and back.
Eigen::Matrix4cd to_closed_form_order(const Eigen::Matrix4cd& s);
Eigen::Matrix4cd from_closed_form_order(const Eigen::Matrix4cd& s);

// |S_{out,in}|^2 over the outgoing channels, in channel order.
std::array<double, 4> channel_probabilities(const ScatteringMatrix& s, Channel incoming);

// Probability that the outgoing spin differs from the incoming one.
double spin_flip_probability(const ScatteringMatrix& s, Channel incoming);

// max |(S^dagger S - I)_{ab}|
double unitarity_residual(const ScatteringMatrix& s);

}  // namespace spinpoint
