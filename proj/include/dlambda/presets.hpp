#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dlambda/model.hpp"
#include "dlambda/spectra.hpp"

namespace dlambda {

/// One plotted curve: a parameter set swept along the figure axis.
struct FigureCurve {
    std::string id; // also the CSV file stem
    std::string label;
    SystemParamsD params;
};

struct FigurePreset {
    std::string id;
    std::string title;
    SweepAxis axis = SweepAxis::probe_delta41;
    double grid_min = 0;
    double grid_max = 0;
    int grid_points = 2001;
    SweepMode mode = SweepMode::steady_if_resonant;
    Component component = Component::direct; // what the figure plots
    double at = 0;                           // where the qualitative checks look
    std::vector<FigureCurve> curves;
};

/// fig3a ... fig8. Sub-figure ids only; see expand_figure for groups.
const std::vector<FigurePreset>& figure_presets();
const FigurePreset& figure_preset(std::string_view id); // UnknownFigure
bool is_figure_id(std::string_view id);

/// "fig3" -> {fig3a, fig3b, fig3c}; a sub-figure id maps to itself.
std::vector<std::string> expand_figure(std::string_view id); // UnknownFigure

/// The parameter set of the first curve of a figure, for use as a base preset.
SystemParamsD preset_params(std::string_view id);

/// A single machine-verified qualitative feature.
struct ManifestCheck {
    std::string name;
    std::string expectation;
    std::string observed;
    std::optional<bool> passed; // empty: skipped
    std::string note;
};

/// Runs the qualitative checks for one sub-figure given its computed spectra
/// (one per curve, same order as the preset). May run companion sweeps.
std::vector<ManifestCheck> figure_checks(const FigurePreset& preset, const std::vector<Spectrum>& spectra);

} // namespace dlambda
