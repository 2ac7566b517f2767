#include "config.hpp"

#include <array>
#include <cmath>
#include <initializer_list>
#include <set>

#include <json.hpp>

namespace spinpoint::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr std::array<std::pair<Command, std::string_view>, 4> kCommands{{
    {Command::Check, "check"},
    {Command::Scatter, "scatter"},
    {Command::Device, "device"},
    {Command::Bands, "bands"},
}};

constexpr std::array<std::string_view, 4> kChannelNames{"left_up", "left_down", "right_up", "right_down"};

std::string join(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string at_index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

[[noreturn]] void semantic(const std::string& key, const std::string& message) {
    throw ConfigError(key + ": " + message, key);
}

const json& require_object(const json& j, const std::string& path) {
    if (!j.is_object()) semantic(path.empty() ? "<root>" : path, "expected an object");
    return j;
}

void reject_unknown(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) semantic(join(path, key), "unknown key");
    }
}

double number(const json& j, const std::string& key) {
    if (!j.is_number()) semantic(key, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) semantic(key, "expected a finite number");
    return v;
}

long long integer(const json& j, const std::string& key) {
    if (!j.is_number_integer()) semantic(key, "expected an integer");
    return j.get<long long>();
}

std::string text(const json& j, const std::string& key) {
    if (!j.is_string()) semantic(key, "expected a string");
    return j.get<std::string>();
}

double positive(const json& j, const std::string& key) {
    const double v = number(j, key);
    if (!(v > 0.0)) semantic(key, "must be > 0, got " + std::to_string(v));
    return v;
}

template <class F>
auto with_domain_path(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const DomainError& e) {
        throw DomainError(path + ": " + e.what());
    }
}

DefectSpec parse_defect(const json& j, const std::string& path) {
    require_object(j, path);
    if (!j.contains("kind")) semantic(join(path, "kind"), "missing required key");
    const std::string kind = text(j.at("kind"), join(path, "kind"));

    auto single = [&](std::string_view key) {
        reject_unknown(j, path, {"kind", key});
        if (!j.contains(key)) semantic(join(path, key), "missing required key");
        return number(j.at(key), join(path, key));
    };
    auto one_of = [&](std::string_view a, std::string_view b) -> std::pair<bool, double> {
        reject_unknown(j, path, {"kind", a, b});
        const bool has_a = j.contains(a);
        if (has_a == j.contains(b)) {
            semantic(path.empty() ? "kind" : path, "give exactly one of '" + std::string(a) + "' or '" + std::string(b) + "'");
        }
        const std::string key(has_a ? a : b);
        return {has_a, number(j.at(key), join(path, key))};
    };

    DefectSpec spec;
    if (kind == "x1") {
        spec = DefectSpec::x1(single("x1"));
    } else if (kind == "x4") {
        spec = DefectSpec::x4(single("x4"));
    } else if (kind == "r_x4") {
        spec = DefectSpec::r_flip(single("r"));
    } else if (kind == "r_x1") {
        spec = DefectSpec::r_tilde_flip(single("r_tilde"));
    } else if (kind == "mass_jump") {
        const auto [is_mu, v] = one_of("mu", "x2");
        spec = is_mu ? DefectSpec::mass_jump(v)
                     : DefectSpec::mass_jump(with_domain_path(join(path, "x2"), [&] { return mu_from_x2(v); }));
        with_domain_path(join(path, is_mu ? "mu" : "x2"), [&] {
            validate(spec);
            return 0;
        });
    } else if (kind == "flux") {
        const auto [is_phi, v] = one_of("phi", "x3");
        spec = DefectSpec::flux(is_phi ? v : flux_from_x3(v));
    } else if (kind == "product") {
        reject_unknown(j, path, {"kind", "factors"});
        const std::string key = join(path, "factors");
        if (!j.contains("factors")) semantic(key, "missing required key");
        const auto& factors = j.at("factors");
        if (!factors.is_array() || factors.empty()) semantic(key, "expected a non-empty array");
        std::vector<DefectSpec> parsed;
        for (std::size_t i = 0; i < factors.size(); ++i) parsed.push_back(parse_defect(factors[i], at_index(key, i)));
        spec = DefectSpec::product(std::move(parsed));
    } else {
        semantic(join(path, "kind"), "unknown defect kind '" + kind + "'");
    }
    return spec;
}

std::vector<Element> parse_elements(const json& j, const std::string& path) {
    if (!j.is_array()) semantic(path, "expected an array");
    std::vector<Element> elements;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string item = at_index(path, i);
        const auto& e = require_object(j[i], item);
        if (e.contains("free")) {
            reject_unknown(e, item, {"free"});
            const double length = number(e.at("free"), join(item, "free"));
            if (!(length > 0.0)) {
                semantic(join(item, "free"), "free segment length must be > 0 (element " + std::to_string(i) +
                                                 "), got " + std::to_string(length));
            }
            elements.emplace_back(FreeSegment{length});
        } else {
            elements.emplace_back(parse_defect(e, item));
        }
    }
    return elements;
}

Device parse_device(const json& j, const std::string& path) {
    require_object(j, path);
    if (j.contains("elements")) {
        reject_unknown(j, path, {"elements"});
        return Device(parse_elements(j.at("elements"), join(path, "elements")));
    }
    if (!j.contains("preset")) semantic(path, "expected 'elements' or 'preset'");
    const std::string preset = text(j.at("preset"), join(path, "preset"));
    if (preset == "resonator") {
        reject_unknown(j, path, {"preset", "defect", "separation"});
        if (!j.contains("defect")) semantic(join(path, "defect"), "missing required key");
        const auto defect = parse_defect(j.at("defect"), join(path, "defect"));
        const double separation = j.contains("separation") ? positive(j.at("separation"), join(path, "separation")) : 1.0;
        return preset_resonator(defect, separation);
    }
    if (preset == "filter") {
        reject_unknown(j, path, {"preset", "outer", "center", "spacing"});
        FilterParams params;
        if (j.contains("outer")) params.outer = parse_defect(j.at("outer"), join(path, "outer"));
        if (j.contains("center")) params.center = parse_defect(j.at("center"), join(path, "center"));
        if (j.contains("spacing")) params.spacing = positive(j.at("spacing"), join(path, "spacing"));
        return preset_filter(params);
    }
    semantic(join(path, "preset"), "unknown preset '" + preset + "'");
}

PeriodicComb parse_comb(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path, {"period", "cell"});
    const double period = j.contains("period") ? positive(j.at("period"), join(path, "period")) : 1.0;
    std::vector<Element> cell;
    if (j.contains("cell")) cell = parse_elements(j.at("cell"), join(path, "cell"));
    Device device(std::move(cell));
    if (device.length() > period * (1.0 + 1e-12)) semantic(join(path, "cell"), "free segments exceed the period");
    return PeriodicComb(std::move(device), period);
}

SweepConfig parse_sweep(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path, {"k_min", "k_max", "points", "spacing"});
    SweepConfig s;
    if (j.contains("k_min")) s.k_min = positive(j.at("k_min"), join(path, "k_min"));
    if (j.contains("k_max")) s.k_max = number(j.at("k_max"), join(path, "k_max"));
    if (j.contains("points")) {
        const auto n = integer(j.at("points"), join(path, "points"));
        if (n < 2) semantic(join(path, "points"), "must be >= 2");
        s.points = static_cast<std::size_t>(n);
    }
    if (j.contains("spacing")) {
        const std::string sp = text(j.at("spacing"), join(path, "spacing"));
        if (sp == "linear") {
            s.spacing = Spacing::Linear;
        } else if (sp == "log") {
            s.spacing = Spacing::Log;
        } else {
            semantic(join(path, "spacing"), "expected 'linear' or 'log'");
        }
    }
    if (!(s.k_max > s.k_min)) semantic(join(path, "k_max"), "must exceed k_min");
    return s;
}

Tolerances parse_tolerances(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path, {"current", "transfer", "band"});
    Tolerances t;
    if (j.contains("current")) t.current = positive(j.at("current"), join(path, "current"));
    if (j.contains("transfer")) t.transfer = positive(j.at("transfer"), join(path, "transfer"));
    if (j.contains("band")) t.band = positive(j.at("band"), join(path, "band"));
    return t;
}

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
    int line = 1;
    int column = 1;
    const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

json defect_json(const DefectSpec& d) {
    json j;
    j["kind"] = std::string(to_string(d.kind));
    switch (d.kind) {
        case DefectKind::X1: j["x1"] = d.value; break;
        case DefectKind::X4: j["x4"] = d.value; break;
        case DefectKind::MassJump: j["mu"] = d.value; break;
        case DefectKind::Flux: j["phi"] = d.value; break;
        case DefectKind::RFlip: j["r"] = d.value; break;
        case DefectKind::RTildeFlip: j["r_tilde"] = d.value; break;
        case DefectKind::Product: {
            json factors = json::array();
            for (const auto& f : d.factors) factors.push_back(defect_json(f));
            j["factors"] = std::move(factors);
            break;
        }
    }
    return j;
}

json elements_json(const Device& device) {
    json out = json::array();
    for (const auto& e : device.elements()) {
        if (const auto* seg = std::get_if<FreeSegment>(&e)) {
            out.push_back(json{{"free", seg->length}});
        } else {
            out.push_back(defect_json(std::get<DefectSpec>(e)));
        }
    }
    return out;
}

}  // namespace

ConfigError::ConfigError(const std::string& message, std::string key, int line, int column)
    : Error(message), key_(std::move(key)), line_(line), column_(column) {}

std::string_view to_string(Command c) noexcept {
    for (const auto& [cmd, name] : kCommands) {
        if (cmd == c) return name;
    }
    return "unknown";
}

std::optional<Command> parse_command(std::string_view name) noexcept {
    for (const auto& [cmd, n] : kCommands) {
        if (n == name) return cmd;
    }
    return std::nullopt;
}

std::string_view channel_name(Channel c) noexcept { return kChannelNames[index(c)]; }

RunConfig parse_config(std::string_view text_in, std::optional<Command> command) {
    json root;
    try {
        root = json::parse(text_in.begin(), text_in.end());
    } catch (const json::parse_error& e) {
        const auto [line, column] = line_column(text_in, e.byte);
        throw ConfigError("parse error at line " + std::to_string(line) + ", column " + std::to_string(column) +
                              ": " + e.what(),
                          "", line, column);
    }
    require_object(root, "");
    reject_unknown(root, "", {"schema_version", "command", "defect", "device", "comb", "sweep", "incident",
                              "output", "threads", "tolerances"});

    RunConfig cfg;
    if (root.contains("schema_version")) {
        cfg.schema_version = static_cast<int>(integer(root.at("schema_version"), "schema_version"));
        if (cfg.schema_version != kSchemaVersion) {
            semantic("schema_version", "unsupported version " + std::to_string(cfg.schema_version) +
                                           " (expected " + std::to_string(kSchemaVersion) + ")");
        }
    }

    std::optional<Command> from_file;
    if (root.contains("command")) {
        const std::string name = text(root.at("command"), "command");
        from_file = parse_command(name);
        if (!from_file) semantic("command", "unknown command '" + name + "'");
    }
    if (from_file && command && *from_file != *command) {
        semantic("command", "document says '" + std::string(to_string(*from_file)) + "' but '" +
                                std::string(to_string(*command)) + "' was requested");
    }
    if (!from_file && !command) semantic("command", "missing required key");
    cfg.command = from_file ? *from_file : *command;

    if (root.contains("defect")) cfg.defect = parse_defect(root.at("defect"), "defect");
    if (root.contains("device")) cfg.device = parse_device(root.at("device"), "device");
    if (root.contains("comb")) cfg.comb = parse_comb(root.at("comb"), "comb");
    if (root.contains("sweep")) cfg.sweep = parse_sweep(root.at("sweep"), "sweep");
    if (root.contains("incident")) {
        const std::string name = text(root.at("incident"), "incident");
        bool found = false;
        for (auto c : kAllChannels) {
            if (channel_name(c) == name) {
                cfg.incident = c;
                found = true;
            }
        }
        if (!found) semantic("incident", "unknown channel '" + name + "'");
    }
    if (root.contains("output")) cfg.output = text(root.at("output"), "output");
    if (root.contains("threads")) {
        const auto n = integer(root.at("threads"), "threads");
        if (n < 0) semantic("threads", "must be >= 0");
        cfg.threads = static_cast<unsigned>(n);
    }
    if (root.contains("tolerances")) cfg.tolerances = parse_tolerances(root.at("tolerances"), "tolerances");

    auto forbid = [&](bool present, std::string_view key) {
        if (present) semantic(std::string(key), "not used by command '" + std::string(to_string(cfg.command)) + "'");
    };
    switch (cfg.command) {
        case Command::Check:
            if (!cfg.defect) semantic("defect", "missing required key");
            forbid(cfg.device.has_value(), "device");
            forbid(cfg.comb.has_value(), "comb");
            break;
        case Command::Scatter:
            if (cfg.defect.has_value() == cfg.device.has_value()) semantic("defect", "give exactly one of 'defect' or 'device'");
            forbid(cfg.comb.has_value(), "comb");
            break;
        case Command::Device:
            if (!cfg.device) semantic("device", "missing required key");
            forbid(cfg.defect.has_value(), "defect");
            forbid(cfg.comb.has_value(), "comb");
            break;
        case Command::Bands:
            if (!cfg.comb) semantic("comb", "missing required key");
            forbid(cfg.defect.has_value(), "defect");
            forbid(cfg.device.has_value(), "device");
            break;
    }
    return cfg;
}

std::string serialize(const DefectSpec& defect) { return defect_json(defect).dump(); }

std::string serialize(const RunConfig& c) {
    json j;
    j["schema_version"] = c.schema_version;
    j["command"] = std::string(to_string(c.command));
    if (c.defect) j["defect"] = defect_json(*c.defect);
    if (c.device) j["device"] = json{{"elements", elements_json(*c.device)}};
    if (c.comb) j["comb"] = json{{"period", c.comb->period()}, {"cell", elements_json(c.comb->cell())}};
    j["sweep"] = json{{"k_min", c.sweep.k_min},
                      {"k_max", c.sweep.k_max},
                      {"points", c.sweep.points},
                      {"spacing", c.sweep.spacing == Spacing::Linear ? "linear" : "log"}};
    j["incident"] = std::string(channel_name(c.incident));
    if (!c.output.empty()) j["output"] = c.output;
    j["threads"] = c.threads;
    j["tolerances"] = json{{"current", c.tolerances.current},
                           {"transfer", c.tolerances.transfer},
                           {"band", c.tolerances.band}};
    return j.dump(2) + "\n";
}

}  // namespace spinpoint::cli
