#include "ptchain/io.hpp"

#include <cstdio>
#include <fstream>

namespace ptchain {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvBuilder::CsvBuilder(const std::vector<std::string>& header) {
    for (size_t i = 0; i < header.size(); ++i) {
        if (i) out_ += ',';
        out_ += header[i];
    }
    out_ += '\n';
}

void CsvBuilder::begin_row() {
    if (row_open_) out_ += '\n';
    row_open_ = true;
}

void CsvBuilder::add(double v) { add_raw(format_double(v)); }

void CsvBuilder::add_int(long long v) { add_raw(std::to_string(v)); }

void CsvBuilder::add_raw(const std::string& cell) {
    if (!row_open_) begin_row();
    if (out_.back() != '\n') out_ += ',';
    out_ += cell;
}

std::string CsvBuilder::finish() const { return row_open_ ? out_ + "\n" : out_; }

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file: " + path);
    f << content;
    if (!f) throw ConfigError("failed writing output file: " + path);
}

Json spec_to_json(const ChainSpec& spec) {
    Json j;
    j["n"] = spec.n;
    j["omega_sq"] = spec.omega_sq;
    j["gamma"] = spec.gamma;
    return j;
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

std::string levels_to_csv(const std::vector<EnergyLevel>& levels, int n) {
    std::vector<std::string> header;
    for (int j = 1; j <= n; ++j) header.push_back("n_" + std::to_string(j));
    header.insert(header.end(), {"energy_re", "energy_im", "is_real", "re_group"});
    CsvBuilder csv(header);
    for (const EnergyLevel& lvl : levels) {
        csv.begin_row();
        for (int q : lvl.occ) csv.add_int(q);
        csv.add(lvl.energy.real());
        csv.add(lvl.energy.imag());
        csv.add_int(lvl.is_real ? 1 : 0);
        csv.add(lvl.degeneracy_key);
    }
    return csv.finish();
}

Json levels_to_json(const ChainSpec& spec, const std::vector<EnergyLevel>& levels) {
    Json j;
    j["spec"] = spec_to_json(spec);
    Json arr = Json::array();
    for (const EnergyLevel& lvl : levels) {
        Json e;
        e["occ"] = lvl.occ;
        e["energy"] = complex_to_json(lvl.energy);
        e["is_real"] = lvl.is_real;
        e["re_group"] = lvl.degeneracy_key;
        arr.push_back(std::move(e));
    }
    j["levels"] = std::move(arr);
    return j;
}

std::string sample_to_csv(const EigenfunctionSample& sample, int n) {
    std::vector<std::string> header;
    for (int j = 1; j <= n; ++j) header.push_back("x_" + std::to_string(j));
    header.insert(header.end(), {"psi_re", "psi_im"});
    CsvBuilder csv(header);
    for (size_t i = 0; i < sample.points.size(); ++i) {
        csv.begin_row();
        for (double c : sample.points[i]) csv.add(c);
        csv.add(sample.values[i].real());
        csv.add(sample.values[i].imag());
    }
    return csv.finish();
}

Json sample_to_json(const ChainSpec& spec, const EigenfunctionSample& sample) {
    Json j;
    j["spec"] = spec_to_json(spec);
    j["occ"] = sample.occ;
    Json pts = Json::array(), vals = Json::array();
    for (const auto& p : sample.points) pts.push_back(p);
    for (const Complex& v : sample.values) vals.push_back(complex_to_json(v));
    j["points"] = std::move(pts);
    j["values"] = std::move(vals);
    return j;
}

std::string phase_point_to_csv(const PhaseClass& cls, const ModeSet& modes) {
    std::vector<std::string> header{"class", "label", "witness_a", "witness_b"};
    for (int j = 1; j <= modes.size(); ++j) {
        header.push_back("lambda_" + std::to_string(j) + "_re");
        header.push_back("lambda_" + std::to_string(j) + "_im");
    }
    CsvBuilder csv(header);
    csv.begin_row();
    csv.add_int(static_cast<int>(cls.variant));
    csv.add_raw(to_string(cls.variant));
    csv.add_int(cls.witness_a);
    csv.add_int(cls.witness_b);
    for (const Complex& l : modes.nu_sq) {
        csv.add(l.real());
        csv.add(l.imag());
    }
    return csv.finish();
}

Json phase_point_to_json(const ChainSpec& spec, const PhaseClass& cls, const ModeSet& modes) {
    Json j;
    j["spec"] = spec_to_json(spec);
    j["class"] = static_cast<int>(cls.variant);
    j["label"] = to_string(cls.variant);
    j["witness"] = Json::array({cls.witness_a, cls.witness_b});
    Json lam = Json::array(), nu = Json::array();
    for (const Complex& l : modes.nu_sq) lam.push_back(complex_to_json(l));
    for (const Complex& v : modes.nu) nu.push_back(complex_to_json(v));
    j["nu_sq"] = std::move(lam);
    j["nu"] = std::move(nu);
    return j;
}

std::string grid_to_csv(const PhaseGrid& grid) {
    std::vector<std::string> header;
    for (const ScanAxis& ax : grid.axes)
        header.push_back(ax.label.empty() ? "axis" : ax.label);
    header.push_back("class");
    CsvBuilder csv(header);
    const size_t n_axes = grid.axes.size();
    for (size_t flat = 0; flat < grid.cells.size(); ++flat) {
        csv.begin_row();
        size_t rem = flat;
        std::vector<double> coords(n_axes);
        for (size_t k = n_axes; k-- > 0;) {
            const int i = static_cast<int>(rem % static_cast<size_t>(grid.axes[k].count));
            rem /= static_cast<size_t>(grid.axes[k].count);
            coords[k] = grid.axes[k].value(i);
        }
        for (double c : coords) csv.add(c);
        csv.add_int(grid.cells[flat]);
    }
    return csv.finish();
}

Json grid_to_json(const PhaseGrid& grid) {
    Json j;
    j["spec"] = spec_to_json(grid.base);
    Json axes = Json::array();
    for (const ScanAxis& ax : grid.axes) {
        Json a;
        a["label"] = ax.label;
        a["min"] = ax.min;
        a["max"] = ax.max;
        a["count"] = ax.count;
        axes.push_back(std::move(a));
    }
    j["axes"] = std::move(axes);
    j["classes"] = grid.cells;
    return j;
}

std::string record_to_csv(const TrajectoryRecord& record) {
    const int n = record.spec.n;
    std::vector<std::string> header{"t"};
    for (int j = 1; j <= n; ++j) {
        header.push_back("x" + std::to_string(j) + "_re");
        header.push_back("x" + std::to_string(j) + "_im");
    }
    for (int j = 1; j <= n; ++j) {
        header.push_back("v" + std::to_string(j) + "_re");
        header.push_back("v" + std::to_string(j) + "_im");
    }
    header.insert(header.end(), {"H_re", "H_im"});
    CsvBuilder csv(header);
    for (size_t i = 0; i < record.states.size(); ++i) {
        const ClassicalState& s = record.states[i];
        csv.begin_row();
        csv.add(s.t);
        for (const Complex& x : s.x) {
            csv.add(x.real());
            csv.add(x.imag());
        }
        for (const Complex& v : s.v) {
            csv.add(v.real());
            csv.add(v.imag());
        }
        csv.add(record.energy[i].real());
        csv.add(record.energy[i].imag());
    }
    return csv.finish();
}

Json record_to_json(const TrajectoryRecord& record) {
    Json j;
    j["spec"] = spec_to_json(record.spec);
    j["dt_out"] = record.dt_out;
    Json states = Json::array();
    for (size_t i = 0; i < record.states.size(); ++i) {
        const ClassicalState& s = record.states[i];
        Json e;
        e["t"] = s.t;
        Json xs = Json::array(), vs = Json::array();
        for (const Complex& x : s.x) xs.push_back(complex_to_json(x));
        for (const Complex& v : s.v) vs.push_back(complex_to_json(v));
        e["x"] = std::move(xs);
        e["v"] = std::move(vs);
        e["H"] = complex_to_json(record.energy[i]);
        states.push_back(std::move(e));
    }
    j["states"] = std::move(states);
    return j;
}

namespace {

std::string part_suffix(ComplexPart p) { return p == ComplexPart::Re ? "_re" : "_im"; }

}  // namespace

std::string section_to_csv(const PoincareSection& section) {
    const std::string u = "x" + std::to_string(section.config.project + 1) +
                          part_suffix(section.config.project_part);
    const std::string v = "v" + std::to_string(section.config.project + 1) +
                          part_suffix(section.config.project_part);
    CsvBuilder csv({"t", u, v});
    for (size_t i = 0; i < section.points.size(); ++i) {
        csv.begin_row();
        csv.add(section.times[i]);
        csv.add(section.points[i].first);
        csv.add(section.points[i].second);
    }
    return csv.finish();
}

Json section_to_json(const TrajectoryRecord& record, const PoincareSection& section) {
    Json j;
    j["spec"] = spec_to_json(record.spec);
    Json cfg;
    cfg["coord"] = section.config.coord;
    cfg["part"] = section.config.part == ComplexPart::Re ? "re" : "im";
    cfg["level"] = section.config.level;
    cfg["direction"] = section.config.direction == CrossingDirection::Ascending ? "asc"
                       : section.config.direction == CrossingDirection::Descending ? "desc"
                                                                                   : "both";
    cfg["project"] = section.config.project;
    cfg["project_part"] = section.config.project_part == ComplexPart::Re ? "re" : "im";
    cfg["interpolation_order"] = section.interpolation_order;
    j["section"] = std::move(cfg);
    j["times"] = section.times;
    Json pts = Json::array();
    for (const auto& p : section.points) pts.push_back(Json::array({p.first, p.second}));
    j["points"] = std::move(pts);
    return j;
}

std::string comparison_to_csv(const SpectralComparison& cmp, int n) {
    std::vector<std::string> header;
    for (int j = 1; j <= n; ++j) header.push_back("n_" + std::to_string(j));
    header.insert(header.end(),
                  {"analytic_re", "analytic_im", "numeric_re", "numeric_im", "distance"});
    CsvBuilder csv(header);
    for (const LevelMatch& lm : cmp.matches) {
        csv.begin_row();
        for (int q : lm.occ) csv.add_int(q);
        csv.add(lm.analytic.real());
        csv.add(lm.analytic.imag());
        csv.add(lm.numeric.real());
        csv.add(lm.numeric.imag());
        csv.add(lm.distance);
    }
    return csv.finish();
}

Json comparison_to_json(const ChainSpec& spec, const SpectralComparison& cmp) {
    Json j;
    j["spec"] = spec_to_json(spec);
    j["cutoff"] = cmp.cutoff;
    j["dimension"] = cmp.dimension;
    j["max_distance"] = cmp.max_distance;
    Json arr = Json::array();
    for (const LevelMatch& lm : cmp.matches) {
        Json e;
        e["occ"] = lm.occ;
        e["analytic"] = complex_to_json(lm.analytic);
        e["numeric"] = complex_to_json(lm.numeric);
        e["distance"] = lm.distance;
        arr.push_back(std::move(e));
    }
    j["levels"] = std::move(arr);
    return j;
}

}  // namespace ptchain
