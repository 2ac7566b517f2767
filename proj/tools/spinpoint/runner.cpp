#include "runner.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

namespace spinpoint::cli {

namespace {

constexpr std::array<std::string_view, 4> kShort{"lu", "ld", "ru", "rd"};

std::vector<double> grid_of(const RunConfig& c) {
    return make_grid(c.sweep.k_min, c.sweep.k_max, c.sweep.points, c.sweep.spacing);
}

Device device_of(const RunConfig& c) {
    if (c.device) return *c.device;
    return Device({*c.defect});
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error("cannot open output file '" + path + "'");
    file << contents;
    if (!file) throw Error("failed writing output file '" + path + "'");
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    std::array<char, 64> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

std::string check_report(const DefectSpec& defect, const Tolerances& tol) {
    const auto report = conserves_currents(defect_matrix(defect), tol.current);
    constexpr std::array<std::string_view, 3> axes{"X", "Y", "Z"};
    std::ostringstream os;
    os << "# spinpoint check\n";
    os << "defect: " << serialize(defect) << "\n";
    os << "tolerance: " << format_double(tol.current) << "\n";
    for (std::size_t i = 0; i < 3; ++i) {
        os << axes[i] << ": " << (report.conserved[i] ? "pass" : "fail")
           << "  residual=" << format_double(report.residuals[i]) << "\n";
    }
    os << "summary: ";
    for (std::size_t i = 0; i < 3; ++i) {
        os << (i ? ", " : "") << axes[i] << ": " << (report.conserved[i] ? "pass" : "fail");
    }
    os << "\n";
    return os.str();
}

std::string scatter_csv(const RunConfig& config) {
    const auto grid = grid_of(config);
    const Device device = device_of(config);

    std::vector<std::string> rows(grid.size());
    parallel_for(grid.size(), config.threads, [&](std::size_t i) {
        const double k = grid[i];
        std::string row = format_double(k) + "," + format_double(k * k);
        try {
            const auto s = device_scattering(device, k, config.tolerances.transfer);
            row += ",0";
            for (Eigen::Index r = 0; r < 4; ++r) {
                for (Eigen::Index c = 0; c < 4; ++c) {
                    row += "," + format_double(s.entries(r, c).real()) + "," + format_double(s.entries(r, c).imag());
                }
            }
        } catch (const SpectralSingularityError&) {
            row += ",1";
            for (int n = 0; n < 32; ++n) row += ",nan";
        }
        rows[i] = std::move(row);
    });

    std::string out = "# spinpoint-csv v1 scatter channels=left_up,left_down,right_up,right_down\n";
    out += "k,E,singular";
    for (auto o : kShort) {
        for (auto in : kShort) {
            out += ",S_" + std::string(o) + "_" + std::string(in) + "_re";
            out += ",S_" + std::string(o) + "_" + std::string(in) + "_im";
        }
    }
    out += "\n";
    for (const auto& r : rows) out += r + "\n";
    return out;
}

std::string device_csv(const RunConfig& config) {
    const auto grid = grid_of(config);
    const auto table = spectrum(device_of(config), grid, config.incident,
                                SweepOptions{config.threads, config.tolerances.transfer});
    std::string out = "# spinpoint-csv v1 device incident=" + std::string(channel_name(config.incident)) + "\n";
    out += "k,E,P_left_up,P_left_down,P_right_up,P_right_down,unitarity_residual,singular\n";
    for (const auto& row : table.rows) {
        out += format_double(row.k) + "," + format_double(row.energy);
        for (double p : row.probabilities) out += "," + format_double(p);
        out += "," + format_double(row.unitarity_residual) + "," + (row.singular ? "1" : "0") + "\n";
    }
    return out;
}

std::string bands_csv(const RunConfig& config) {
    const auto grid = grid_of(config);
    const auto diagram = dispersion(*config.comb, grid, DispersionOptions{config.threads, config.tolerances.band});
    std::string out = "# spinpoint-csv v1 bands period=" + format_double(config.comb->period()) + "\n";
    out += "k,E,q,branch_id,lambda_residual\n";
    for (const auto& p : diagram.points) {
        out += format_double(p.k) + "," + format_double(p.energy) + "," + format_double(p.q) + "," +
               std::to_string(p.branch) + "," + format_double(p.lambda_residual) + "\n";
    }
    return out;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        std::string result;
        switch (config.command) {
            case Command::Check:
                result = check_report(*config.defect, config.tolerances);
                out << result;
                if (!config.output.empty()) write_file(config.output, result);
                return 0;
            case Command::Scatter: result = scatter_csv(config); break;
            case Command::Device: result = device_csv(config); break;
            case Command::Bands: result = bands_csv(config); break;
        }
        if (config.output.empty()) {
            out << result;
        } else {
            write_file(config.output, result);
        }
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace spinpoint::cli
