#include "tllcd/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "tllcd/errors.hpp"
#include "tllcd/tll_model.hpp"

namespace tllcd {

namespace {

std::string_view trim(std::string_view s) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        const std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

struct ParseContext {
    int line = 0;
    std::string key;

    [[noreturn]] void error(const std::string& what) const {
        std::ostringstream os;
        os << "line " << line << ": key '" << key << "': " << what;
        fail(ErrorKind::config, os.str());
    }
};

double parse_double(std::string_view s, const ParseContext& ctx) {
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(x))
        ctx.error("expected a finite number, got '" + std::string(s) + "'");
    return x;
}

int parse_int(std::string_view s, const ParseContext& ctx) {
    int x = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || ptr != s.data() + s.size())
        ctx.error("expected an integer, got '" + std::string(s) + "'");
    return x;
}

bool parse_bool(std::string_view s, const ParseContext& ctx) {
    if (s == "on" || s == "true") return true;
    if (s == "off" || s == "false") return false;
    ctx.error("expected on/off or true/false, got '" + std::string(s) + "'");
}

template <typename Enum>
Enum parse_enum(std::string_view s, std::initializer_list<std::pair<std::string_view, Enum>> options,
                const ParseContext& ctx) {
    std::string allowed;
    for (const auto& [name, value] : options) {
        if (s == name) return value;
        allowed += (allowed.empty() ? "" : ", ") + std::string(name);
    }
    ctx.error("expected one of {" + allowed + "}, got '" + std::string(s) + "'");
}

std::vector<std::vector<double>> parse_rows(std::string_view s, std::size_t width, const ParseContext& ctx) {
    std::vector<std::vector<double>> rows;
    for (auto row : split(s, ';')) {
        if (row.empty()) continue;
        const auto fields = split_ws(row);
        if (fields.size() != width)
            ctx.error("each ';'-separated row needs " + std::to_string(width) + " numbers");
        std::vector<double> values;
        for (auto f : fields) values.push_back(parse_double(f, ctx));
        rows.push_back(std::move(values));
    }
    return rows;
}

std::string join_doubles(const std::vector<double>& xs, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += sep;
        out += format_double(xs[i]);
    }
    return out;
}

using Setter = std::function<void(RunConfig&, std::string_view, const ParseContext&)>;

GasParameters& gas_of(RunConfig& c) {
    if (!c.gas) c.gas = GasParameters{};
    return *c.gas;
}

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = {
        {"family",
         [](RunConfig& c, std::string_view v, const ParseContext& ctx) {
             c.protocol.coupling.family = parse_enum<CouplingFamily>(
                 v,
                 {{"contact", CouplingFamily::contact},
                  {"lorentzian", CouplingFamily::lorentzian},
                  {"custom_table", CouplingFamily::custom_table}},
                 ctx);
         }},
        {"g2_start", [](RunConfig& c, std::string_view v, const ParseContext& ctx) { c.protocol.coupling.g2_start = parse_double(v, ctx); }},
        {"g2_end", [](RunConfig& c, std::string_view v, const ParseContext& ctx) { c.protocol.coupling.g2_end = parse_double(v, ctx); }},
        {"g4_start", [](RunConfig& c, std::string_view v, const ParseContext& ctx) { c.protocol.coupling.g4_start = parse_double(v, ctx); }},
        {"g4_end", [](RunConfig& c, std::string_view v, const ParseContext& ctx) { c.protocol.coupling.g4_end = parse_double(v, ctx); }},
        {"R0", [](RunConfig& c, std::string_view v, const ParseContext& ctx) { c.protocol.coupling.R0 = parse_double(v, ctx); }},
        {"table",
         [](RunConfig& c, std::string_view v, const ParseContext& ctx) {
             c.protocol.coupling.table.clear();
             for (const auto& r : parse_rows(v, 3, ctx)) c.protocol.coupling.table.push_back({r[0], r[1], r[2]});
         }},
        {"schedule",
         [](RunConfig& c, std::string_view v, const ParseContext& ctx) {
             c.protocol.schedule.kind = parse_enum<ScheduleKind>(
                 v,
                 {{"poly5", ScheduleKind::poly5},
                  {"linear", ScheduleKind::linear},
                  {"custom_samples", ScheduleKind::custom_samples}},
                 ctx);
         }},
        {"schedule_samples",
         [](RunConfig& c, std::string_view v, const ParseContext& ctx) {
             c.protocol.schedule.samples.clear();
             for (const auto& r : parse_rows(v, 2, ctx)) c.protocol.schedule.samples.emplace_back(r[0], r[1]);
         }},
        {"t_f", [](RunConfig& c, std::string_view v, const ParseContext& ctx) { c.protocol.t_f = parse_double(v, ctx); }},
        {"L", [](RunConfig& c, std::string_view v, const ParseContext& ctx) { c.protocol.L = parse_double(v, ctx); }},
        {"n_modes", [](RunConfig& c, std::string_view v, const ParseContext& ctx) { c.protocol.n_modes = parse_int(v, ctx); }},
        {"v_F", [](RunConfig& c, std::string_view v, const ParseContext& ctx) { c.protocol.v_F = parse_double(v, ctx); }},
        {"cd", [](RunConfig& c, std::string_view v, const ParseContext& ctx) { c.protocol.cd_enabled = parse_bool(v, ctx); }},
        {"lorentzian_chi",
         [](RunConfig& c, std::string_view v, const ParseContext& ctx) {
             c.protocol.lorentzian_chi = parse_enum<LorentzianChiMode>(
                 v, {{"exact", LorentzianChiMode::exact}, {"linearized", LorentzianChiMode::linearized}}, ctx);
         }},
        {"initial_state",
         [](RunConfig& c, std::string_view v, const ParseContext& ctx) {
             c.protocol.initial_state = parse_enum<InitialState>(
                 v, {{"vacuum", InitialState::vacuum}, {"ground", InitialState::ground}}, ctx);
         }},
        {"output_dir",
         [](RunConfig& c, std::string_view v, const ParseContext& ctx) {
             if (v.empty()) ctx.error("must not be empty");
             c.output_dir = std::string(v);
         }},
        {"record_points", [](RunConfig& c, std::string_view v, const ParseContext& ctx) { c.record_points = parse_int(v, ctx); }},
        {"emit_plots", [](RunConfig& c, std::string_view v, const ParseContext& ctx) { c.emit_plots = parse_bool(v, ctx); }},
        {"units",
         [](RunConfig& c, std::string_view v, const ParseContext& ctx) {
             c.units = parse_enum<Units>(v, {{"natural", Units::natural}, {"experimental", Units::experimental}}, ctx);
         }},
        {"rtol", [](RunConfig& c, std::string_view v, const ParseContext& ctx) { c.rtol = parse_double(v, ctx); }},
        {"atol", [](RunConfig& c, std::string_view v, const ParseContext& ctx) { c.atol = parse_double(v, ctx); }},
        {"stability_points", [](RunConfig& c, std::string_view v, const ParseContext& ctx) { c.stability_points = parse_int(v, ctx); }},
        {"adiabatic_threshold", [](RunConfig& c, std::string_view v, const ParseContext& ctx) { c.adiabatic_threshold = parse_double(v, ctx); }},
        {"workers", [](RunConfig& c, std::string_view v, const ParseContext& ctx) { c.workers = parse_int(v, ctx); }},
        {"sweep_tf",
         [](RunConfig& c, std::string_view v, const ParseContext& ctx) {
             c.sweep_tf.clear();
             for (auto f : split(v, ',')) c.sweep_tf.push_back(parse_double(f, ctx));
         }},
        {"sound_velocity", [](RunConfig& c, std::string_view v, const ParseContext& ctx) { c.sound_velocity = parse_double(v, ctx); }},
        {"gas_a_s_nm", [](RunConfig& c, std::string_view v, const ParseContext& ctx) { gas_of(c).a_s_nm = parse_double(v, ctx); }},
        {"gas_mass_kg", [](RunConfig& c, std::string_view v, const ParseContext& ctx) { gas_of(c).mass_kg = parse_double(v, ctx); }},
        {"gas_omega_perp_hz", [](RunConfig& c, std::string_view v, const ParseContext& ctx) { gas_of(c).omega_perp_hz = parse_double(v, ctx); }},
        {"gas_n1d_per_um", [](RunConfig& c, std::string_view v, const ParseContext& ctx) { gas_of(c).n1d_per_um = parse_double(v, ctx); }},
    };
    return table;
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    require(ec == std::errc(), "format_double: buffer too small");
    return std::string(buf, ptr);
}

std::string_view to_string(Units units) { return units == Units::natural ? "natural" : "experimental"; }

std::string_view to_string(CouplingFamily family) {
    switch (family) {
        case CouplingFamily::contact: return "contact";
        case CouplingFamily::lorentzian: return "lorentzian";
        case CouplingFamily::custom_table: return "custom_table";
    }
    return "contact";
}

std::string_view to_string(ScheduleKind kind) {
    switch (kind) {
        case ScheduleKind::poly5: return "poly5";
        case ScheduleKind::linear: return "linear";
        case ScheduleKind::custom_samples: return "custom_samples";
    }
    return "poly5";
}

RunConfig parse_config(std::string_view text) {
    RunConfig config;
    std::set<std::string, std::less<>> seen;
    ParseContext ctx;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++ctx.line;
        ctx.key.clear();
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) ctx.error("expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        ctx.key = std::string(key);
        const auto it = setters().find(key);
        if (it == setters().end()) ctx.error("unknown key");
        if (!seen.insert(ctx.key).second) ctx.error("repeated key");
        it->second(config, value, ctx);
    }
    validate(config);
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::io, "cannot read config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
    const auto& p = c.protocol;
    std::ostringstream os;
    auto kv = [&](std::string_view key, std::string_view value) { os << key << " = " << value << '\n'; };
    kv("family", to_string(p.coupling.family));
    kv("g2_start", format_double(p.coupling.g2_start));
    kv("g2_end", format_double(p.coupling.g2_end));
    kv("g4_start", format_double(p.coupling.g4_start));
    kv("g4_end", format_double(p.coupling.g4_end));
    kv("R0", format_double(p.coupling.R0));
    if (!p.coupling.table.empty()) {
        std::string rows;
        for (const auto& r : p.coupling.table) {
            if (!rows.empty()) rows += "; ";
            rows += join_doubles({r.p, r.g2, r.g4}, " ");
        }
        kv("table", rows);
    }
    kv("schedule", to_string(p.schedule.kind));
    if (!p.schedule.samples.empty()) {
        std::string rows;
        for (const auto& [s, v] : p.schedule.samples) {
            if (!rows.empty()) rows += "; ";
            rows += join_doubles({s, v}, " ");
        }
        kv("schedule_samples", rows);
    }
    kv("t_f", format_double(p.t_f));
    kv("L", format_double(p.L));
    kv("n_modes", std::to_string(p.n_modes));
    kv("v_F", format_double(p.v_F));
    kv("cd", p.cd_enabled ? "on" : "off");
    kv("lorentzian_chi", p.lorentzian_chi == LorentzianChiMode::exact ? "exact" : "linearized");
    kv("initial_state", p.initial_state == InitialState::vacuum ? "vacuum" : "ground");
    kv("output_dir", c.output_dir);
    kv("record_points", std::to_string(c.record_points));
    kv("emit_plots", c.emit_plots ? "true" : "false");
    kv("units", to_string(c.units));
    kv("rtol", format_double(c.rtol));
    kv("atol", format_double(c.atol));
    kv("stability_points", std::to_string(c.stability_points));
    kv("adiabatic_threshold", format_double(c.adiabatic_threshold));
    kv("workers", std::to_string(c.workers));
    if (!c.sweep_tf.empty()) kv("sweep_tf", join_doubles(c.sweep_tf, ", "));
    if (c.sound_velocity) kv("sound_velocity", format_double(*c.sound_velocity));
    if (c.gas) {
        kv("gas_a_s_nm", format_double(c.gas->a_s_nm));
        kv("gas_mass_kg", format_double(c.gas->mass_kg));
        kv("gas_omega_perp_hz", format_double(c.gas->omega_perp_hz));
        kv("gas_n1d_per_um", format_double(c.gas->n1d_per_um));
    }
    return os.str();
}

void validate(const RunConfig& c) {
    auto check = [](bool ok, const std::string& what) {
        if (!ok) fail(ErrorKind::config, what);
    };
    check(c.record_points >= 2, "record_points must be at least 2");
    check(c.rtol > 0.0 && c.atol > 0.0, "rtol and atol must be positive");
    check(c.stability_points >= 2, "stability_points must be at least 2");
    check(c.adiabatic_threshold > 0.0, "adiabatic_threshold must be positive");
    check(c.workers >= 1, "workers must be at least 1");
    for (double t : c.sweep_tf) check(t > 0.0, "sweep_tf entries must be positive");
    if (c.sound_velocity) check(*c.sound_velocity > 0.0, "sound_velocity must be positive");
    if (c.gas) {
        check(c.gas->a_s_nm > 0.0 && c.gas->mass_kg > 0.0 && c.gas->omega_perp_hz > 0.0 && c.gas->n1d_per_um > 0.0,
              "gas_a_s_nm, gas_mass_kg, gas_omega_perp_hz and gas_n1d_per_um must all be given and positive");
    }
    try {
        validate(c.protocol);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::contract || e.kind() == ErrorKind::range) fail(ErrorKind::config, e.what());
        throw;
    }
}

OdeTolerance ode_tolerance(const RunConfig& config) {
    OdeTolerance tol;
    tol.rtol = config.rtol;
    tol.atol = config.atol;
    return tol;
}

double reference_sound_velocity(const RunConfig& config) {
    if (config.sound_velocity) return *config.sound_velocity;
    if (config.gas) return experimental_sound_velocity(*config.gas);
    const auto grid = momentum_grid(config.protocol);
    const auto mc = mode_couplings(config.protocol, grid.front(), config.protocol.t_f);
    return luttinger_params(mc.value.g2, mc.value.g4, config.protocol.v_F).v_s;
}

}  // namespace tllcd
