#include "dlambda/config.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "dlambda/csv.hpp"
#include "dlambda/error.hpp"
#include "dlambda/presets.hpp"

namespace dlambda {

namespace {

using V = ValueType;

const std::vector<ConfigKey> keys = {
    {"run", "command", V::text, "steady | floquet | dynamics | sweep | group-index | reproduce"},
    {"run", "figure", V::text, "figure id for reproduce (fig3a ... fig8, or a group such as fig3)"},
    {"run", "preset", V::text, "figure whose parameters serve as defaults"},
    {"model", "g31", V::complex, "Rabi frequency |1>-|3>"},
    {"model", "g32", V::complex, "Rabi frequency |2>-|3>"},
    {"model", "g42", V::complex, "Rabi frequency |2>-|4>"},
    {"model", "g41", V::complex, "probe Rabi frequency |1>-|4>"},
    {"model", "d31", V::real, "detuning Delta31"},
    {"model", "d32", V::real, "detuning Delta32"},
    {"model", "d42", V::real, "detuning Delta42"},
    {"model", "d41", V::real, "probe detuning Delta41"},
    {"model", "gamma13", V::real, "decay rate |3> -> |1>"},
    {"model", "gamma14", V::real, "decay rate |4> -> |1>"},
    {"model", "gamma23", V::real, "decay rate |3> -> |2>"},
    {"model", "gamma24", V::real, "decay rate |4> -> |2>"},
    {"model", "gamma12_deph", V::real, "ground-state dephasing Gamma12"},
    {"model", "phi0", V::real, "initial loop phase"},
    {"model", "kr", V::real, "wave-vector mismatch times position"},
    {"spectra", "axis", V::text, "raman_delta12 | probe_delta41"},
    {"spectra", "grid_min", V::real, "first grid point"},
    {"spectra", "grid_max", V::real, "last grid point"},
    {"spectra", "grid_points", V::integer, "number of grid points"},
    {"spectra", "mode", V::text, "steady_if_resonant | floquet_direct"},
    {"spectra", "component", V::text, "direct | loop_scatter | counter | total"},
    {"spectra", "at", V::real, "group-index evaluation point"},
    {"spectra", "carrier", V::real, "omega_p / gamma0 used in the group index"},
    {"floquet", "t", V::real, "time at which components are evaluated"},
    {"floquet", "medium", V::boolean, "scale by the sodium D1 medium prefactor"},
    {"dynamics", "t_end", V::real, "integration time"},
    {"dynamics", "dt", V::real, "maximum RK4 step"},
    {"dynamics", "t_a", V::real, "start of the demodulation window"},
    {"dynamics", "store_every", V::integer, "keep every n-th step in the trajectory"},
    {"output", "output_dir", V::text, "directory for output files"},
};

const std::pair<std::string_view, std::string_view> aliases[] = {
    {"delta31", "d31"}, {"delta32", "d32"}, {"delta42", "d42"}, {"delta41", "d41"}, {"gamma12", "gamma12_deph"},
};

const ConfigKey* find_key(std::string_view name)
{
    for (const auto& k : keys)
        if (k.name == name)
            return &k;
    return nullptr;
}

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::optional<double> parse_real(std::string_view s)
{
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    double v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
        return std::nullopt;
    return v;
}

std::optional<std::complex<double>> parse_complex(std::string_view s)
{
    if (s.empty() || s.front() != '(') {
        const auto v = parse_real(s);
        if (!v)
            return std::nullopt;
        return std::complex<double>(*v);
    }
    std::istringstream in{std::string(s)};
    std::complex<double> z;
    in >> z;
    if (!in)
        return std::nullopt;
    in >> std::ws;
    if (!in.eof())
        return std::nullopt;
    return z;
}

[[noreturn]] void mismatch(const ConfigKey& k, std::string_view value, std::string_view expected)
{
    throw Error(ErrorKind::TypeMismatch, std::string(k.section) + "." + std::string(k.name) + " = '" +
                                             std::string(value) + "' is not " + std::string(expected));
}

std::string normalise(const ConfigKey& k, const std::string& raw)
{
    switch (k.type) {
    case V::real: {
        const auto v = parse_real(raw);
        if (!v)
            mismatch(k, raw, "a real number");
        return format_number(*v);
    }
    case V::complex: {
        const auto z = parse_complex(raw);
        if (!z)
            mismatch(k, raw, "a real number or (re,im)");
        if (z->imag() == 0)
            return format_number(z->real());
        return "(" + format_number(z->real()) + "," + format_number(z->imag()) + ")";
    }
    case V::integer: {
        int v = 0;
        const auto res = std::from_chars(raw.data(), raw.data() + raw.size(), v);
        if (raw.empty() || res.ec != std::errc() || res.ptr != raw.data() + raw.size())
            mismatch(k, raw, "an integer");
        return std::to_string(v);
    }
    case V::boolean:
        if (raw == "true" || raw == "yes" || raw == "on" || raw == "1")
            return "true";
        if (raw == "false" || raw == "no" || raw == "off" || raw == "0")
            return "false";
        mismatch(k, raw, "a boolean");
    case V::text:
        break;
    }

    if (k.name == "command" &&
        std::find(std::begin(kCommands), std::end(kCommands), raw) == std::end(kCommands))
        mismatch(k, raw, "a known command");
    if (k.name == "figure" || k.name == "preset")
        expand_figure(raw); // UnknownFigure
    if (k.name == "axis" && !parse_axis(raw))
        mismatch(k, raw, "raman_delta12 or probe_delta41");
    if (k.name == "mode" && !parse_mode(raw))
        mismatch(k, raw, "steady_if_resonant or floquet_direct");
    if (k.name == "component" && !parse_component(raw))
        mismatch(k, raw, "direct, loop_scatter, counter or total");
    if (k.name == "axis")
        return std::string(to_string(*parse_axis(raw)));
    if (k.name == "component")
        return std::string(to_string(*parse_component(raw)));
    return raw;
}

void set_value(RunConfig& cfg, const ConfigKey& k, const std::string& raw)
{
    const std::string v = trim(raw);
    if (v.empty() && k.type == V::text) {
        cfg.values.erase(std::string(k.name));
        return;
    }
    cfg.values[std::string(k.name)] = normalise(k, v);
}

const FigurePreset* base_figure(const RunConfig& cfg)
{
    const std::string id = cfg.command() == "reproduce" ? cfg.text("figure") : cfg.text("preset");
    if (id.empty())
        return nullptr;
    return &figure_preset(expand_figure(id).front());
}

} // namespace

const std::vector<ConfigKey>& config_keys()
{
    return keys;
}

std::string_view canonical_key(std::string_view name)
{
    if (const auto* k = find_key(name))
        return k->name;
    for (const auto& [alias, target] : aliases)
        if (alias == name)
            return target;
    return {};
}

bool RunConfig::has(std::string_view key) const
{
    return values.find(key) != values.end();
}

std::string RunConfig::text(std::string_view key, std::string_view fallback) const
{
    const auto it = values.find(key);
    return it == values.end() ? std::string(fallback) : it->second;
}

double RunConfig::real(std::string_view key, double fallback) const
{
    const auto it = values.find(key);
    return it == values.end() ? fallback : *parse_real(it->second);
}

int RunConfig::integer(std::string_view key, int fallback) const
{
    const auto it = values.find(key);
    return it == values.end() ? fallback : std::stoi(it->second);
}

bool RunConfig::boolean(std::string_view key, bool fallback) const
{
    const auto it = values.find(key);
    return it == values.end() ? fallback : it->second == "true";
}

RunConfig parse_config(std::string_view ini_text, const Overrides& flags)
{
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in{std::string(ini_text)};
    try {
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw Error(ErrorKind::TypeMismatch, "malformed configuration: " + e.message() + " (line " +
                                                 std::to_string(e.line()) + ")");
    }

    RunConfig cfg;
    std::vector<std::string> unknown;
    for (const auto& [section, body] : tree) {
        if (body.empty()) {
            unknown.push_back(section + " (outside any section)");
            continue;
        }
        for (const auto& [name, value] : body) {
            const auto canon = canonical_key(name);
            const ConfigKey* k = canon.empty() ? nullptr : find_key(canon);
            if (!k || k->section != section) {
                unknown.push_back(section + "." + name);
                continue;
            }
            set_value(cfg, *k, value.data());
        }
    }
    if (!unknown.empty()) {
        std::string list;
        for (const auto& u : unknown)
            list += (list.empty() ? "" : ", ") + u;
        throw Error(ErrorKind::UnknownKey, list);
    }

    for (const auto& [name, value] : flags) {
        const auto canon = canonical_key(name);
        if (canon.empty())
            throw Error(ErrorKind::UnknownKey, name);
        set_value(cfg, *find_key(canon), value);
    }

    // Required keys depend on the command.
    std::vector<std::string> missing;
    const std::string cmd = cfg.command();
    if (cmd.empty())
        missing.push_back("run.command");
    if (cmd == "reproduce") {
        if (!cfg.has("figure"))
            missing.push_back("run.figure");
    } else if (!cmd.empty() && !cfg.has("preset")) {
        for (const auto& k : keys) {
            const bool model = k.section == "model";
            const bool grid = (cmd == "sweep" || cmd == "group-index") &&
                              (k.name == "axis" || k.name == "grid_min" || k.name == "grid_max" || k.name == "grid_points");
            const bool at = cmd == "group-index" && k.name == "at";
            if ((model || grid || at) && !cfg.has(k.name))
                missing.push_back(std::string(k.section) + "." + std::string(k.name));
        }
    }
    if (!missing.empty()) {
        std::string list;
        for (const auto& m : missing)
            list += (list.empty() ? "" : ", ") + m;
        throw Error(ErrorKind::MissingRequired, list);
    }
    return cfg;
}

std::string echo_config(const RunConfig& config)
{
    std::string out;
    std::string_view section;
    for (const auto& k : keys) {
        const auto it = config.values.find(k.name);
        if (it == config.values.end())
            continue;
        if (k.section != section) {
            section = k.section;
            out += "[" + std::string(section) + "]\n";
        }
        out += std::string(k.name) + " = " + it->second + "\n";
    }
    return out;
}

SystemParamsD apply_model_overrides(SystemParamsD p, const RunConfig& c)
{
    const auto cx = [&](std::string_view key, std::complex<double>& field) {
        if (c.has(key))
            field = *parse_complex(c.text(key));
    };
    const auto re = [&](std::string_view key, double& field) { field = c.real(key, field); };
    cx("g31", p.g31);
    cx("g32", p.g32);
    cx("g42", p.g42);
    cx("g41", p.g41);
    re("d31", p.d31);
    re("d32", p.d32);
    re("d42", p.d42);
    re("d41", p.d41);
    re("gamma13", p.gamma13);
    re("gamma14", p.gamma14);
    re("gamma23", p.gamma23);
    re("gamma24", p.gamma24);
    re("gamma12_deph", p.gamma12_deph);
    re("phi0", p.phi0);
    re("kr", p.kr);
    return p;
}

SystemParamsD resolve_params(const RunConfig& config)
{
    SystemParamsD base;
    if (const auto* f = base_figure(config))
        base = f->curves.front().params;
    return apply_model_overrides(base, config);
}

std::vector<std::string> model_overrides(const RunConfig& config)
{
    std::vector<std::string> out;
    for (const auto& k : keys)
        if (k.section == "model" && config.has(k.name))
            out.emplace_back(k.name);
    return out;
}

SweepSpec resolve_sweep(const RunConfig& config)
{
    SweepSpec s;
    if (const auto* f = base_figure(config)) {
        s.axis = f->axis;
        s.grid_min = f->grid_min;
        s.grid_max = f->grid_max;
        s.grid_points = f->grid_points;
        s.mode = f->mode;
        s.component = f->component;
        s.at = f->at;
    }
    if (config.has("axis"))
        s.axis = *parse_axis(config.text("axis"));
    if (config.has("mode"))
        s.mode = *parse_mode(config.text("mode"));
    if (config.has("component"))
        s.component = *parse_component(config.text("component"));
    s.grid_min = config.real("grid_min", s.grid_min);
    s.grid_max = config.real("grid_max", s.grid_max);
    s.grid_points = config.integer("grid_points", s.grid_points);
    s.at = config.real("at", s.at);
    s.carrier = config.real("carrier", s.carrier);
    return s;
}

std::string describe_params(const SystemParamsD& p)
{
    const auto cx = [](std::complex<double> z) {
        return z.imag() == 0 ? format_number(z.real())
                             : "(" + format_number(z.real()) + "," + format_number(z.imag()) + ")";
    };
    std::string out;
    const auto line = [&](std::string_view k, const std::string& v) { out += std::string(k) + " = " + v + "\n"; };
    line("g31", cx(p.g31));
    line("g32", cx(p.g32));
    line("g42", cx(p.g42));
    line("g41", cx(p.g41));
    line("d31", format_number(p.d31));
    line("d32", format_number(p.d32));
    line("d42", format_number(p.d42));
    line("d41", format_number(p.d41));
    line("gamma13", format_number(p.gamma13));
    line("gamma14", format_number(p.gamma14));
    line("gamma23", format_number(p.gamma23));
    line("gamma24", format_number(p.gamma24));
    line("gamma12_deph", format_number(p.gamma12_deph));
    line("phi0", format_number(p.phi0));
    line("kr", format_number(p.kr));
    return out;
}

std::string reproducibility_header(const RunConfig& config, std::string_view extra)
{
    const std::string echo = echo_config(config);
    std::string out = "; dlambda " + config.command() + ", config hash " + hex(fnv1a(echo)) + "\n";
    out += echo;
    // Informational lines start with ';' so the block still parses as a config.
    std::string_view rest = extra;
    while (!rest.empty()) {
        const auto nl = rest.find('\n');
        out += "; " + std::string(rest.substr(0, nl)) + "\n";
        if (nl == std::string_view::npos)
            break;
        rest.remove_prefix(nl + 1);
    }
    return out;
}

} // namespace dlambda
