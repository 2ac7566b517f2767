#pragma once

// Run configuration for the spinpoint tool.  The on-disk format is JSON; the
// schema is described in docs/config.md.

#include <optional>
#include <string>
#include <string_view>

#include "spinpoint/bands.hpp"
#include "spinpoint/device.hpp"
#include "spinpoint/errors.hpp"
#include "spinpoint/sweep.hpp"

namespace spinpoint::cli {

inline constexpr int kSchemaVersion = 1;

enum class Command { Check, Scatter, Device, Bands };

std::string_view to_string(Command c) noexcept;
std::optional<Command> parse_command(std::string_view name) noexcept;

std::string_view channel_name(Channel c) noexcept;

// Malformed document (line/column set) or a semantic problem (key set).
class ConfigError : public Error {
public:
    ConfigError(const std::string& message, std::string key, int line = 0, int column = 0);

    const std::string& key() const noexcept { return key_; }
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    std::string key_;
    int line_;
    int column_;
};

struct SweepConfig {
    double k_min = 0.01;
    double k_max = 20.0;
    std::size_t points = 1000;
    Spacing spacing = Spacing::Log;

    bool operator==(const SweepConfig&) const = default;
};

struct Tolerances {
    double current = kDefaultCurrentTolerance;
    double transfer = kDefaultTransferTolerance;
    double band = kDefaultBandTolerance;

    bool operator==(const Tolerances&) const = default;
};

struct RunConfig {
    int schema_version = kSchemaVersion;
    Command command = Command::Check;
    std::optional<DefectSpec> defect;    // check, scatter
    std::optional<Device> device;        // scatter, device
    std::optional<PeriodicComb> comb;    // bands
    SweepConfig sweep;
    Channel incident = Channel::LeftUp;
    std::string output;                  // empty: standard output
    unsigned threads = 1;
    Tolerances tolerances;

    bool operator==(const RunConfig&) const = default;
};

// Parses and validates a JSON document.  `command` (from the command line)
// fills in or must agree with the document's "command" key.  Parameter-domain
// violations surface as DomainError with the key path prefixed.
RunConfig parse_config(std::string_view text, std::optional<Command> command = std::nullopt);

// Canonical JSON form; parse_config(serialize(c)) == c.
std::string serialize(const RunConfig& config);

std::string serialize(const DefectSpec& defect);

}  // namespace spinpoint::cli
