#pragma once

#include <complex>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dlambda/model.hpp"
#include "dlambda/spectra.hpp"

namespace dlambda {

enum class ValueType { real, complex, integer, boolean, text };

struct ConfigKey {
    std::string_view section;
    std::string_view name;
    ValueType type;
    std::string_view help;
};

/// Every recognised key, in echo order. Names are unique across sections.
const std::vector<ConfigKey>& config_keys();

/// Canonical key name for a name or alias (delta41 -> d41, ...); empty if unknown.
std::string_view canonical_key(std::string_view name);

inline constexpr std::string_view kCommands[] = {"steady", "floquet", "dynamics", "sweep", "group-index", "reproduce"};

/// The values given in a config file and on the command line, normalised to
/// canonical text. Defaults are not stored; see the resolve_* functions.
struct RunConfig {
    std::map<std::string, std::string, std::less<>> values;

    bool has(std::string_view key) const;
    std::string text(std::string_view key, std::string_view fallback = {}) const;
    double real(std::string_view key, double fallback) const;
    int integer(std::string_view key, int fallback) const;
    bool boolean(std::string_view key, bool fallback) const;
    std::string command() const { return text("command"); }

    bool operator==(const RunConfig&) const = default;
};

using Overrides = std::vector<std::pair<std::string, std::string>>;

/// Parses INI text (sections run, model, spectra, floquet, dynamics, output)
/// and applies flag overrides on top. Throws UnknownKey, TypeMismatch,
/// UnknownFigure or MissingRequired (listing every missing key).
RunConfig parse_config(std::string_view ini_text, const Overrides& flags = {});

/// INI text that parses back to the same RunConfig.
std::string echo_config(const RunConfig& config);

/// Preset base (if any) with the model keys applied.
SystemParamsD resolve_params(const RunConfig& config);

/// Model keys given explicitly, in echo order.
std::vector<std::string> model_overrides(const RunConfig& config);

/// Applies the explicitly given model keys of `config` to p.
SystemParamsD apply_model_overrides(SystemParamsD p, const RunConfig& config);

struct SweepSpec {
    SweepAxis axis = SweepAxis::probe_delta41;
    double grid_min = 0;
    double grid_max = 0;
    int grid_points = 0;
    SweepMode mode = SweepMode::steady_if_resonant;
    Component component = Component::direct;
    double at = 0;
    double carrier = kSodiumCarrier;
};

/// Sweep settings: explicit keys over the defaults of the preset figure.
SweepSpec resolve_sweep(const RunConfig& config);

/// One "key = value" line per model parameter, for reproducibility headers.
std::string describe_params(const SystemParamsD& p);

/// Comment block written at the top of every output file.
std::string reproducibility_header(const RunConfig& config, std::string_view extra = {});

} // namespace dlambda
