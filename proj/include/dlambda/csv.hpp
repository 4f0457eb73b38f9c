#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "dlambda/dynamics.hpp"
#include "dlambda/spectra.hpp"

namespace dlambda {

/// 17 significant digits, general notation; reads back to the same double.
std::string format_number(double x);

/// 64-bit FNV-1a, used to tag outputs with the configuration they came from.
std::uint64_t fnv1a(std::string_view text);
std::string hex(std::uint64_t value);

inline constexpr std::string_view kSpectrumHeader =
    "axis,delta,re_direct,im_direct,re_loop,im_loop,re_counter,im_counter,re_total,im_total";

/// Writes `# `-prefixed comment lines, one per line of `preamble`.
void write_preamble(std::ostream& out, std::string_view preamble);

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum, std::string_view preamble = {});

/// t followed by re/im of the 15 stored components.
void write_trajectory_csv(std::ostream& out, const Trajectory<double>& traj, std::string_view preamble = {});

/// Plain rows of comma-separated cells.
void write_rows(std::ostream& out, const std::vector<std::vector<std::string>>& rows, std::string_view preamble = {});

} // namespace dlambda
