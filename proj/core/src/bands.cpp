#include "spinpoint/bands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "spinpoint/errors.hpp"
#include "spinpoint/sweep.hpp"

namespace spinpoint {

namespace {

constexpr double kCollapseTolerance = 1e-9;
constexpr double kDefectiveSplit = 1e-7;
constexpr double kDefectiveOverlap = 1.0 - 1e-6;
constexpr double kEdgeScanStep = 0.01;  // in units of ka
constexpr std::size_t kMinFitPoints = 10;

struct Mode {
    BandPoint point;
    Eigen::Vector4cd vector;
};

std::vector<Mode> compute_modes(const PeriodicComb& comb, double k, double tol) {
    const BoundaryMatrix t = cell_transfer(comb, k);
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(t, true);
    const auto& values = solver.eigenvalues();
    const auto& vectors = solver.eigenvectors();

    std::vector<Mode> candidates;
    for (Eigen::Index j = 0; j < 4; ++j) {
        const double residual = std::abs(std::abs(values(j)) - 1.0);
        if (!(residual < tol)) continue;

        bool defective = false;
        for (Eigen::Index i = 0; i < 4; ++i) {
            if (i == j || std::abs(values(i) - values(j)) >= kDefectiveSplit) continue;
            const double overlap = std::abs(vectors.col(i).normalized().dot(vectors.col(j).normalized()));
            if (overlap > kDefectiveOverlap) defective = true;
        }

        Mode m;
        m.point.k = k;
        m.point.energy = k * k;
        m.point.q = std::abs(std::arg(values(j))) / comb.period();
        m.point.lambda_residual = residual;
        m.point.defective = defective;
        m.vector = vectors.col(j).normalized();
        candidates.push_back(m);
    }

    std::sort(candidates.begin(), candidates.end(),
              [](const Mode& a, const Mode& b) { return a.point.q < b.point.q; });

    std::vector<Mode> modes;
    for (const auto& c : candidates) {
        if (!modes.empty() && c.point.q - modes.back().point.q < kCollapseTolerance) {
            auto& kept = modes.back();
            kept.point.defective = kept.point.defective || c.point.defective;
            kept.point.lambda_residual = std::max(kept.point.lambda_residual, c.point.lambda_residual);
            continue;
        }
        modes.push_back(c);
    }
    return modes;
}

struct Track {
    int id = 0;
    std::size_t last_index = 0;
    double k_last = 0.0;
    double q_last = 0.0;
    double k_prev = 0.0;
    double q_prev = 0.0;
    bool has_prev = false;
    Eigen::Vector4cd vector;
};

double fold(double q, double zone) {
    if (q < 0.0) q = -q;
    if (q > zone) q = 2.0 * zone - q;
    return q;
}

DefectSpec flip_sign_map(const DefectSpec& d, bool plus) {
    switch (d.kind) {
        case DefectKind::RFlip:
            return DefectSpec::x4(plus ? -d.value : d.value);
        case DefectKind::RTildeFlip:
            return DefectSpec::x1(plus ? d.value : -d.value);
        case DefectKind::Product: {
            std::vector<DefectSpec> mapped;
            mapped.reserve(d.factors.size());
            for (const auto& f : d.factors) mapped.push_back(flip_sign_map(f, plus));
            return DefectSpec::product(std::move(mapped));
        }
        default:
            return d;
    }
}

template <class F>
double bisect(F&& g, double a, double b, double g_a) {
    for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
        const double mid = 0.5 * (a + b);
        const double g_mid = g(mid);
        if (g_mid == 0.0) return mid;
        if ((g_a < 0.0) == (g_mid < 0.0)) {
            a = mid;
            g_a = g_mid;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

template <class F>
std::vector<double> find_roots(F&& g, double k_min, double k_max, double step) {
    std::vector<double> roots;
    double lo = k_min;
    double g_lo = g(lo);
    if (g_lo == 0.0) roots.push_back(lo);
    while (lo < k_max) {
        const double hi = std::min(lo + step, k_max);
        const double g_hi = g(hi);
        if (g_hi == 0.0) {
            roots.push_back(hi);
        } else if (g_lo != 0.0 && (g_lo < 0.0) != (g_hi < 0.0)) {
            roots.push_back(bisect(g, lo, hi, g_lo));
        }
        lo = hi;
        g_lo = g_hi;
    }
    return roots;
}

// The two values of cos(q a) = (lambda + 1/lambda) / 2 over the reciprocal
// eigenvalue pairs of the cell transfer, ascending.
std::array<double, 2> half_traces(const PeriodicComb& comb, double k) {
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(cell_transfer(comb, k), false);
    std::array<double, 4> c{};
    for (Eigen::Index j = 0; j < 4; ++j) {
        const complex l = solver.eigenvalues()(j);
        c[static_cast<std::size_t>(j)] = (0.5 * (l + 1.0 / l)).real();
    }
    std::sort(c.begin(), c.end());
    return {0.5 * (c[0] + c[1]), 0.5 * (c[2] + c[3])};
}

std::vector<BandPoint> window(std::span<const BandPoint> branch, double q_max) {
    std::vector<BandPoint> picked;
    for (const auto& p : branch) {
        if (p.q > 0.0 && p.q <= q_max && !p.defective) picked.push_back(p);
    }
    if (picked.size() < kMinFitPoints) {
        throw FitError("fit needs at least " + std::to_string(kMinFitPoints) + " points with 0 < q <= " +
                       std::to_string(q_max) + ", got " + std::to_string(picked.size()));
    }
    return picked;
}

}  // namespace

PeriodicComb::PeriodicComb(Device cell, double period) : cell_(std::move(cell)), period_(period) {
    if (!(period_ > 0.0) || !std::isfinite(period_)) {
        throw DomainError("comb period must be finite and > 0, got " + std::to_string(period_));
    }
    if (cell_.length() > period_ * (1.0 + 1e-12)) {
        throw DomainError("cell free segments (" + std::to_string(cell_.length()) + ") exceed the period (" +
                          std::to_string(period_) + ")");
    }
}

double PeriodicComb::fill_length() const noexcept { return std::max(0.0, period_ - cell_.length()); }

BoundaryMatrix cell_transfer(const PeriodicComb& comb, double k) {
    const BoundaryMatrix inner = total_transfer(comb.cell(), k);
    const double fill = comb.fill_length();
    if (fill <= 0.0) return inner;
    return propagation(k, fill) * inner;
}

std::vector<BandPoint> BandDiagram::branch(int id) const {
    std::vector<BandPoint> out;
    for (const auto& p : points) {
        if (p.branch == id) out.push_back(p);
    }
    return out;
}

std::vector<BandPoint> modes_at(const PeriodicComb& comb, double k, double band_tolerance) {
    std::vector<BandPoint> out;
    for (const auto& m : compute_modes(comb, k, band_tolerance)) out.push_back(m.point);
    return out;
}

BandDiagram dispersion(const PeriodicComb& comb, std::span<const double> k_grid, const DispersionOptions& options) {
    require_positive_sorted(k_grid);
    std::vector<std::vector<Mode>> per_k(k_grid.size());
    parallel_for(k_grid.size(), options.threads,
                 [&](std::size_t i) { per_k[i] = compute_modes(comb, k_grid[i], options.band_tolerance); });

    const double zone = std::numbers::pi / comb.period();
    const double max_jump = 0.25 * zone;

    BandDiagram diagram{comb, {}, 0};
    std::vector<Track> tracks;
    for (std::size_t i = 0; i < per_k.size(); ++i) {
        auto& modes = per_k[i];
        const double k = k_grid[i];

        struct Candidate {
            std::size_t track;
            std::size_t mode;
            double cost;
            double overlap;
        };
        std::vector<Candidate> candidates;
        for (std::size_t t = 0; t < tracks.size(); ++t) {
            const auto& tr = tracks[t];
            if (i == 0 || tr.last_index != i - 1) continue;
            double predicted = tr.q_last;
            if (tr.has_prev) {
                predicted += (tr.q_last - tr.q_prev) / (tr.k_last - tr.k_prev) * (k - tr.k_last);
            }
            predicted = fold(predicted, zone);
            for (std::size_t m = 0; m < modes.size(); ++m) {
                if (modes[m].point.defective) continue;
                const double cost = std::abs(predicted - modes[m].point.q);
                if (cost > max_jump) continue;
                candidates.push_back({t, m, cost, std::abs(tr.vector.dot(modes[m].vector))});
            }
        }
        std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
            if (std::abs(a.cost - b.cost) > 1e-12) return a.cost < b.cost;
            return a.overlap > b.overlap;
        });

        std::vector<bool> track_used(tracks.size(), false);
        std::vector<bool> mode_used(modes.size(), false);
        for (const auto& c : candidates) {
            if (track_used[c.track] || mode_used[c.mode]) continue;
            track_used[c.track] = mode_used[c.mode] = true;
            auto& tr = tracks[c.track];
            auto& mode = modes[c.mode];
            tr.k_prev = tr.k_last;
            tr.q_prev = tr.q_last;
            tr.has_prev = true;
            tr.k_last = k;
            tr.q_last = mode.point.q;
            tr.last_index = i;
            tr.vector = mode.vector;
            mode.point.branch = tr.id;
        }
        for (std::size_t m = 0; m < modes.size(); ++m) {
            auto& mode = modes[m];
            if (mode_used[m] || mode.point.defective) continue;
            Track tr;
            tr.id = diagram.branch_count++;
            tr.last_index = i;
            tr.k_last = k;
            tr.q_last = mode.point.q;
            tr.vector = mode.vector;
            tracks.push_back(tr);
            mode.point.branch = tr.id;
        }
        for (const auto& mode : modes) diagram.points.push_back(mode.point);
    }
    return diagram;
}

std::optional<std::pair<PeriodicComb, PeriodicComb>> spin_decouple(const PeriodicComb& comb) {
    std::vector<Element> plus;
    std::vector<Element> minus;
    for (const auto& e : comb.cell().elements()) {
        if (const auto* d = std::get_if<DefectSpec>(&e)) {
            plus.emplace_back(flip_sign_map(*d, true));
            minus.emplace_back(flip_sign_map(*d, false));
        } else {
            plus.push_back(e);
            minus.push_back(e);
        }
    }
    return std::make_pair(PeriodicComb(Device(std::move(plus)), comb.period()),
                          PeriodicComb(Device(std::move(minus)), comb.period()));
}

double scalar_kp_relation(double x4, double period, double k) {
    const double ka = k * period;
    return std::cos(ka) + 0.5 * x4 * k * std::sin(ka);
}

std::optional<double> scalar_kp_q(double x4, double period, double k) {
    const double c = scalar_kp_relation(x4, period, k);
    if (std::abs(c) > 1.0) return std::nullopt;
    return std::acos(c) / period;
}

std::vector<double> scalar_band_edges(double x4, double period, double k_min, double k_max) {
    auto g = [&](double k) { return std::abs(scalar_kp_relation(x4, period, k)) - 1.0; };
    return find_roots(g, k_min, k_max, kEdgeScanStep / period);
}

std::vector<double> band_edges(const PeriodicComb& comb, double k_min, double k_max) {
    const double step = kEdgeScanStep / comb.period();
    std::vector<double> ks;
    for (double k = k_min; k < k_max; k += step) ks.push_back(k);
    ks.push_back(k_max);

    std::vector<std::array<double, 2>> tracked(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) {
        auto c = half_traces(comb, ks[i]);
        if (i >= 1) {
            std::array<double, 2> predicted = tracked[i - 1];
            if (i >= 2) {
                for (int j = 0; j < 2; ++j) predicted[j] += tracked[i - 1][j] - tracked[i - 2][j];
            }
            const double keep = std::abs(predicted[0] - c[0]) + std::abs(predicted[1] - c[1]);
            const double swap = std::abs(predicted[0] - c[1]) + std::abs(predicted[1] - c[0]);
            if (swap < keep) std::swap(c[0], c[1]);
        }
        tracked[i] = c;
    }

    std::vector<double> edges;
    for (int j = 0; j < 2; ++j) {
        for (double bound : {1.0, -1.0}) {
            for (std::size_t i = 0; i < ks.size(); ++i) {
                const double g_hi = tracked[i][j] - bound;
                if (g_hi == 0.0) {
                    edges.push_back(ks[i]);
                    continue;
                }
                if (i == 0) continue;
                const double g_lo = tracked[i - 1][j] - bound;
                if (g_lo == 0.0 || (g_lo < 0.0) == (g_hi < 0.0)) continue;

                // Follow channel j inside the bracket by closeness to the
                // linear interpolation of its values at the current ends.
                double k0 = ks[i - 1];
                double k1 = ks[i];
                double c0 = tracked[i - 1][j];
                double c1 = tracked[i][j];
                for (int it = 0; it < 200 && k1 - k0 > 1e-15 * k1; ++it) {
                    const double mid = 0.5 * (k0 + k1);
                    const auto c = half_traces(comb, mid);
                    const double guess = 0.5 * (c0 + c1);
                    const double cm = std::abs(c[0] - guess) <= std::abs(c[1] - guess) ? c[0] : c[1];
                    if (cm == bound) {
                        k0 = k1 = mid;
                        break;
                    }
                    if ((c0 < bound) == (cm < bound)) {
                        k0 = mid;
                        c0 = cm;
                    } else {
                        k1 = mid;
                        c1 = cm;
                    }
                }
                edges.push_back(0.5 * (k0 + k1));
            }
        }
    }
    std::sort(edges.begin(), edges.end());
    return edges;
}

CurvatureFit effective_mass(std::span<const BandPoint> branch, double q_max) {
    const auto pts = window(branch, q_max);
    double num = 0.0;
    double den = 0.0;
    for (const auto& p : pts) {
        const double q2 = p.q * p.q;
        num += p.energy * q2;
        den += q2 * q2;
    }
    CurvatureFit fit;
    fit.curvature = num / den;
    fit.relative_mass = 1.0 / fit.curvature;
    fit.points = pts.size();
    double ss = 0.0;
    for (const auto& p : pts) {
        const double r = p.energy - fit.curvature * p.q * p.q;
        ss += r * r;
    }
    fit.rms_residual = std::sqrt(ss / static_cast<double>(pts.size()));
    return fit;
}

SlopeFit sound_slope(std::span<const BandPoint> branch, double q_max) {
    const auto pts = window(branch, q_max);
    const auto n = static_cast<Eigen::Index>(pts.size());
    Eigen::MatrixXd design(n, 2);
    Eigen::VectorXd energy(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double q = pts[static_cast<std::size_t>(i)].q;
        design(i, 0) = q;
        design(i, 1) = q * q;
        energy(i) = pts[static_cast<std::size_t>(i)].energy;
    }
    const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(energy);

    SlopeFit fit;
    fit.slope = coef(0);
    fit.quadratic = coef(1);
    fit.line_slope = design.col(0).dot(energy) / design.col(0).squaredNorm();
    fit.rms_residual = std::sqrt((design * coef - energy).squaredNorm() / static_cast<double>(n));
    fit.points = pts.size();
    return fit;
}

}  // namespace spinpoint
