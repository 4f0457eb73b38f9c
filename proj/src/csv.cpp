#include "dlambda/csv.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

namespace dlambda {

std::string format_number(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    if (x == 0)
        return "0"; // no "-0"
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::uint64_t fnv1a(std::string_view text)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex(std::uint64_t value)
{
    char buf[17];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, 16);
    std::string s(buf, res.ptr);
    return std::string(16 - s.size(), '0') + s;
}

void write_preamble(std::ostream& out, std::string_view preamble)
{
    while (!preamble.empty()) {
        const auto nl = preamble.find('\n');
        const auto line = preamble.substr(0, nl);
        out << '#';
        if (!line.empty())
            out << ' ' << line;
        out << '\n';
        if (nl == std::string_view::npos)
            break;
        preamble.remove_prefix(nl + 1);
    }
}

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum, std::string_view preamble)
{
    write_preamble(out, preamble);
    out << kSpectrumHeader << '\n';
    for (const auto& pt : spectrum.points) {
        out << format_number(pt.axis) << ',' << format_number(pt.delta) << ',' << format_number(pt.direct.real())
            << ',' << format_number(pt.direct.imag()) << ',' << format_number(pt.loop_scatter.real()) << ','
            << format_number(pt.loop_scatter.imag()) << ',' << format_number(pt.counter.real()) << ','
            << format_number(pt.counter.imag()) << ',';
        if (pt.total)
            out << format_number(pt.total->real()) << ',' << format_number(pt.total->imag());
        else
            out << ',';
        out << '\n';
    }
}

void write_trajectory_csv(std::ostream& out, const Trajectory<double>& traj, std::string_view preamble)
{
    write_preamble(out, preamble);
    out << 't';
    for (int k = 0; k < kDim; ++k) {
        const auto [i, j] = levels_of(k);
        out << ",re_rho" << i << j << ",im_rho" << i << j;
    }
    out << '\n';
    for (std::size_t n = 0; n < traj.times.size(); ++n) {
        out << format_number(traj.times[n]);
        for (int k = 0; k < kDim; ++k)
            out << ',' << format_number(traj.states[n](k).real()) << ',' << format_number(traj.states[n](k).imag());
        out << '\n';
    }
}

void write_rows(std::ostream& out, const std::vector<std::vector<std::string>>& rows, std::string_view preamble)
{
    write_preamble(out, preamble);
    for (const auto& row : rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k)
                out << ',';
            out << row[k];
        }
        out << '\n';
    }
}

} // namespace dlambda
