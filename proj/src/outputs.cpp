#include "tllcd/outputs.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "tllcd/errors.hpp"

namespace tllcd {

namespace {

class CsvWriter {
public:
    explicit CsvWriter(std::string_view header) { out_ += header; out_ += '\n'; }

    CsvWriter& num(double x) { return cell(format_double(x)); }
    CsvWriter& cell(std::string_view s) {
        if (!first_) out_ += ',';
        out_ += s;
        first_ = false;
        return *this;
    }
    void end_row() {
        out_ += '\n';
        first_ = true;
    }
    std::string str() && { return std::move(out_); }

private:
    std::string out_;
    bool first_ = true;
};

std::string join(const std::string& dir, const std::string& file) {
    return (std::filesystem::path(dir) / file).string();
}

}  // namespace

std::string format_mode_csv(std::span<const ModeTrajectory> modes) {
    CsvWriter w("t,p,n_bare,n_qp,fidelity,pair_energy,residual,epsilon_cd,chi");
    for (const auto& m : modes) {
        for (const auto& r : m.records) {
            w.num(r.t).num(r.p).num(r.occupation_bare).num(r.occupation_quasiparticle)
                .num(r.fidelity_instantaneous_gs).num(r.pair_energy).num(r.residual_energy)
                .num(r.epsilon_cd).num(r.chi);
            w.end_row();
        }
    }
    return std::move(w).str();
}

std::string format_aggregate_csv(std::span<const AggregatePoint> aggregate) {
    CsvWriter w("t,total_residual,total_energy,v_s,K,chi,min_margin");
    for (const auto& a : aggregate) {
        w.num(a.t).num(a.total_residual).num(a.total_energy).num(a.v_s).num(a.K).num(a.chi).num(a.min_margin);
        w.end_row();
    }
    return std::move(w).str();
}

std::string format_sweep_csv(std::span<const SweepRow> rows) {
    CsvWriter w("t_f,cd,stability_pass,stability_margin,final_residual,min_final_fidelity,max_final_occupation,status");
    for (const auto& r : rows) {
        w.num(r.t_f).cell(r.cd_enabled ? "on" : "off").cell(r.stability_pass ? "true" : "false")
            .num(r.stability_margin).num(r.final_residual).num(r.min_final_fidelity)
            .num(r.max_final_occupation).cell(r.status);
        w.end_row();
    }
    return std::move(w).str();
}

std::string format_manifest(const RunManifest& m) {
    std::ostringstream os;
    os << serialize_config(m.config);
    auto kv = [&](std::string_view key, std::string_view value) { os << "run." << key << " = " << value << '\n'; };
    kv("code_version", code_version);
    kv("command", m.command);
    kv("status", m.status);
    if (!m.failure_cause.empty()) {
        std::string cause = m.failure_cause;
        for (auto& ch : cause)
            if (ch == '\n' || ch == '#') ch = ' ';
        kv("failure_cause", cause);
    }
    if (m.config.units == Units::experimental) {
        kv("length_unit_m", "1e-06");
        kv("time_unit_s", "0.001");
        kv("velocity_unit_m_per_s", "0.001");
    } else {
        kv("length_unit_m", "1");
        kv("time_unit_s", "1");
        kv("velocity_unit_m_per_s", "1");
    }
    if (m.stability) {
        kv("stability_margin", format_double(m.stability->margin));
        kv("stability_pass", m.stability->pass ? "true" : "false");
        kv("stability_worst_time", format_double(m.stability->worst_time));
        kv("stability_worst_p", format_double(m.stability->worst_p));
        if (m.stability->closed_form_tf_bound) kv("closed_form_tf_bound", format_double(*m.stability->closed_form_tf_bound));
    }
    if (m.speed_window) {
        kv("speed_window_t_min", format_double(m.speed_window->t_min));
        kv("speed_window_t_adiabatic", format_double(m.speed_window->t_adiabatic));
        kv("speed_window_threshold", format_double(m.speed_window->threshold));
    }
    if (m.reference_sound_velocity) kv("reference_sound_velocity", format_double(*m.reference_sound_velocity));
    if (m.dimensional_window) {
        kv("dimensional_t_min", format_double(m.dimensional_window->t_min));
        kv("dimensional_t_upper", format_double(m.dimensional_window->t_upper));
    }
    kv("mode_errors", std::to_string(m.mode_errors.size()));
    for (const auto& e : m.mode_errors) {
        std::string msg = e.message;
        for (auto& ch : msg)
            if (ch == '\n' || ch == '#') ch = ' ';
        kv("mode_error." + std::to_string(e.mode_index), format_double(e.p) + " " + msg);
    }
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::error_code ec;
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent, ec);
    if (ec) fail(ErrorKind::io, "cannot create directory '" + parent.string() + "': " + ec.message());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::io, "cannot open '" + path + "' for writing");
    out << content;
    out.close();
    if (!out) fail(ErrorKind::io, "write to '" + path + "' failed");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::io, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CsvTable parse_csv(const std::string& text) {
    CsvTable table;
    std::istringstream in(text);
    std::string line;
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::string cur;
        for (char c : s) {
            if (c == ',') {
                out.push_back(cur);
                cur.clear();
            } else if (c != '\r') {
                cur += c;
            }
        }
        out.push_back(cur);
        return out;
    };
    if (!std::getline(in, line)) fail(ErrorKind::io, "CSV is empty");
    table.header = split(line);
    for (const auto& h : table.header) table.columns[h];
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != table.header.size())
            fail(ErrorKind::io, "CSV row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                                    " cells, header has " + std::to_string(table.header.size()));
        for (std::size_t i = 0; i < cells.size(); ++i) {
            double x = std::numeric_limits<double>::quiet_NaN();
            const auto& c = cells[i];
            const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), x);
            if (ec != std::errc() || ptr != c.data() + c.size()) x = std::numeric_limits<double>::quiet_NaN();
            table.columns[table.header[i]].push_back(x);
        }
    }
    return table;
}

OutputFiles write_outputs(const SimulationResult& result, const RunManifest& manifest) {
    const auto& dir = manifest.config.output_dir;
    OutputFiles files{join(dir, "modes.csv"), join(dir, "aggregate.csv"), join(dir, "manifest.txt")};
    write_text_file(files.modes, format_mode_csv(result.modes));
    write_text_file(files.aggregate, format_aggregate_csv(result.aggregate));
    write_text_file(files.manifest, format_manifest(manifest));
    return files;
}

}  // namespace tllcd
