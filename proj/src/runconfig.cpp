#include "ptchain/runconfig.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

namespace ptchain {

namespace {

const std::map<std::string, Command>& command_names() {
    static const std::map<std::string, Command> names{
        {"spectrum", Command::Spectrum},       {"eigenfunction", Command::Eigenfunction},
        {"phase-point", Command::PhasePoint},  {"phase-scan", Command::PhaseScan},
        {"trajectory", Command::Trajectory},   {"poincare", Command::Poincare},
        {"oracle-check", Command::OracleCheck}};
    return names;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

Command command_from_string(const std::string& s) {
    const auto it = command_names().find(s);
    if (it == command_names().end()) throw ConfigError("unknown command: " + s);
    return it->second;
}

std::string to_string(Command c) {
    for (const auto& [name, cmd] : command_names())
        if (cmd == c) return name;
    return "?";
}

double parse_number(const std::string& text) {
    const auto parse_plain = [](const std::string& s) {
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end == s.c_str() || *end != '\0')
            throw ConfigError("cannot parse number: '" + s + "'");
        return v;
    };
    const size_t slash = text.find('/');
    if (slash == std::string::npos) return parse_plain(text);
    const double num = parse_plain(text.substr(0, slash));
    const double den = parse_plain(text.substr(slash + 1));
    if (den == 0.0) throw ConfigError("zero denominator in '" + text + "'");
    return num / den;
}

ScanAxis parse_axis(const std::string& token, int n) {
    const std::vector<std::string> parts = split(token, ':');
    if (parts.size() != 4)
        throw ConfigError("axis must look like name:min:max:count, got '" + token + "'");
    ScanAxis ax;
    ax.label = parts[0];
    std::string name = parts[0];
    bool squared = false;
    if (name.size() > 2 && name.substr(name.size() - 2) == "sq") {
        squared = true;
        name = name.substr(0, name.size() - 2);
    }
    if (name == "gamma") {
        if (squared) throw ConfigError("'gammasq' is not a parameter");
        ax.param = AxisParam::Gamma;
        ax.site = 0;
    } else if (name.size() >= 2 && name[0] == 'w') {
        const std::string site_key = name.substr(1);
        static const std::map<std::string, int> letters{
            {"x", 0}, {"y", 1}, {"z", 2}, {"w", 3}, {"u", 4}};
        int site;
        const auto it = letters.find(site_key);
        if (it != letters.end()) {
            site = it->second;
        } else {
            try {
                site = std::stoi(site_key) - 1;
            } catch (...) {
                throw ConfigError("unknown axis parameter '" + parts[0] + "'");
            }
        }
        if (site < 0 || site >= n)
            throw ConfigError("axis site in '" + parts[0] + "' out of range for n=" +
                              std::to_string(n));
        ax.param = squared ? AxisParam::OmegaSq : AxisParam::Omega;
        ax.site = site;
    } else {
        throw ConfigError("unknown axis parameter '" + parts[0] + "'");
    }
    ax.min = parse_number(parts[1]);
    ax.max = parse_number(parts[2]);
    try {
        ax.count = std::stoi(parts[3]);
    } catch (...) {
        throw ConfigError("bad axis count in '" + token + "'");
    }
    return ax;
}

std::vector<Complex> parse_complex_list(const std::string& text, const char* what) {
    const std::vector<std::string> parts = split(text, ',');
    if (parts.size() % 2 != 0)
        throw ConfigError(std::string(what) + ": expected interleaved re,im pairs");
    std::vector<Complex> out;
    for (size_t i = 0; i < parts.size(); i += 2)
        out.emplace_back(parse_number(parts[i]), parse_number(parts[i + 1]));
    return out;
}

namespace {

ComplexPart part_from_string(const std::string& s) {
    if (s == "re") return ComplexPart::Re;
    if (s == "im") return ComplexPart::Im;
    throw ConfigError("part must be 're' or 'im', got '" + s + "'");
}

CrossingDirection direction_from_string(const std::string& s) {
    if (s == "asc") return CrossingDirection::Ascending;
    if (s == "desc") return CrossingDirection::Descending;
    if (s == "both") return CrossingDirection::Both;
    throw ConfigError("direction must be asc, desc or both, got '" + s + "'");
}

std::string to_string(CrossingDirection d) {
    switch (d) {
        case CrossingDirection::Ascending: return "asc";
        case CrossingDirection::Descending: return "desc";
        case CrossingDirection::Both: return "both";
    }
    return "?";
}

std::string to_string(ComplexPart p) { return p == ComplexPart::Re ? "re" : "im"; }

}  // namespace

RunConfig config_from_json(const Json& j) {
    RunConfig c;
    if (j.contains("command")) c.command = command_from_string(j.at("command").get<std::string>());
    if (j.contains("n")) c.spec.n = j.at("n").get<int>();
    if (j.contains("omega_sq"))
        c.spec.omega_sq = j.at("omega_sq").get<std::vector<double>>();
    else if (j.contains("n"))
        c.spec.omega_sq.assign(static_cast<size_t>(std::max(c.spec.n, 0)), 1.0);
    if (j.contains("gamma")) c.spec.gamma = j.at("gamma").get<double>();
    if (j.contains("max_quanta")) c.max_quanta = j.at("max_quanta").get<int>();
    if (j.contains("level_cap")) c.level_cap = j.at("level_cap").get<std::int64_t>();
    if (j.contains("occ")) c.occ = j.at("occ").get<OccupationVector>();
    if (j.contains("grid")) {
        c.grid_min = j.at("grid").at("min").get<double>();
        c.grid_max = j.at("grid").at("max").get<double>();
        c.grid_count = j.at("grid").at("count").get<int>();
    }
    if (j.contains("random_points")) c.random_points = j.at("random_points").get<int>();
    if (j.contains("box")) c.box = j.at("box").get<double>();
    if (j.contains("tol")) c.tol = j.at("tol").get<double>();
    if (j.contains("axes"))
        for (const auto& tok : j.at("axes"))
            c.axes.push_back(parse_axis(tok.get<std::string>(), c.spec.n));
    if (j.contains("x0"))
        for (const auto& p : j.at("x0")) c.x0.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    if (j.contains("v0"))
        for (const auto& p : j.at("v0")) c.v0.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    if (j.contains("dt")) c.dt = j.at("dt").get<double>();
    if (j.contains("t_end")) c.t_end = j.at("t_end").get<double>();
    if (j.contains("dt_out")) c.dt_out = j.at("dt_out").get<double>();
    if (j.contains("section")) {
        const Json& s = j.at("section");
        if (s.contains("coord")) c.section.coord = s.at("coord").get<int>();
        if (s.contains("part")) c.section.part = part_from_string(s.at("part").get<std::string>());
        if (s.contains("level")) c.section.level = s.at("level").get<double>();
        if (s.contains("direction"))
            c.section.direction = direction_from_string(s.at("direction").get<std::string>());
        if (s.contains("project")) c.section.project = s.at("project").get<int>();
        if (s.contains("project_part"))
            c.section.project_part = part_from_string(s.at("project_part").get<std::string>());
    }
    if (j.contains("cutoff")) c.cutoff = j.at("cutoff").get<int>();
    if (j.contains("max_sum")) c.max_sum = j.at("max_sum").get<int>();
    if (j.contains("dimension_cap")) c.dimension_cap = j.at("dimension_cap").get<std::int64_t>();
    if (j.contains("output")) c.output = j.at("output").get<std::string>();
    if (j.contains("format")) {
        const std::string f = j.at("format").get<std::string>();
        if (f == "csv")
            c.format = OutputFormat::Csv;
        else if (f == "json")
            c.format = OutputFormat::Json;
        else
            throw ConfigError("format must be csv or json, got '" + f + "'");
    }
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("threads")) c.threads = j.at("threads").get<int>();
    return c;
}

Json config_to_json(const RunConfig& c) {
    Json j;
    j["command"] = to_string(c.command);
    j["n"] = c.spec.n;
    j["omega_sq"] = c.spec.omega_sq;
    j["gamma"] = c.spec.gamma;
    switch (c.command) {
        case Command::Spectrum:
            j["max_quanta"] = c.max_quanta;
            j["level_cap"] = c.level_cap;
            break;
        case Command::Eigenfunction:
            j["occ"] = c.occ;
            if (c.grid_count > 0) {
                j["grid"] = Json{{"min", *c.grid_min}, {"max", *c.grid_max}, {"count", c.grid_count}};
            } else {
                j["random_points"] = c.random_points;
                j["box"] = c.box;
            }
            break;
        case Command::PhasePoint:
            j["tol"] = c.tol;
            break;
        case Command::PhaseScan: {
            j["tol"] = c.tol;
            Json axes = Json::array();
            for (const ScanAxis& ax : c.axes) {
                std::ostringstream os;
                os << ax.label << ':' << format_double(ax.min) << ':' << format_double(ax.max)
                   << ':' << ax.count;
                axes.push_back(os.str());
            }
            j["axes"] = std::move(axes);
            break;
        }
        case Command::Trajectory:
        case Command::Poincare: {
            Json xs = Json::array(), vs = Json::array();
            for (const Complex& x : c.x0) xs.push_back(complex_to_json(x));
            for (const Complex& v : c.v0) vs.push_back(complex_to_json(v));
            j["x0"] = std::move(xs);
            j["v0"] = std::move(vs);
            j["dt"] = c.dt;
            j["t_end"] = c.t_end;
            j["dt_out"] = c.dt_out;
            if (c.command == Command::Poincare) {
                Json s;
                s["coord"] = c.section.coord;
                s["part"] = to_string(c.section.part);
                s["level"] = c.section.level;
                s["direction"] = to_string(c.section.direction);
                s["project"] = c.section.project;
                s["project_part"] = to_string(c.section.project_part);
                j["section"] = std::move(s);
            }
            break;
        }
        case Command::OracleCheck:
            j["cutoff"] = c.cutoff;
            j["max_sum"] = c.max_sum;
            j["dimension_cap"] = c.dimension_cap;
            break;
    }
    j["output"] = c.output;
    j["format"] = c.format == OutputFormat::Csv ? "csv" : "json";
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    return j;
}

std::vector<std::string> validate(const RunConfig& c) {
    std::vector<std::string> diags;
    if (c.spec.n < 2) diags.push_back("n must be >= 2");
    if (static_cast<int>(c.spec.omega_sq.size()) != c.spec.n)
        diags.push_back("omega_sq must have exactly n entries");
    for (double w2 : c.spec.omega_sq)
        if (!(w2 > 0.0)) {
            diags.push_back("every omega_sq entry must be > 0");
            break;
        }
    if (c.output.empty()) diags.push_back("output path must not be empty");
    if (c.threads < 0) diags.push_back("threads must be >= 0");

    const int n = c.spec.n;
    switch (c.command) {
        case Command::Spectrum:
            if (c.max_quanta < 0) diags.push_back("max_quanta must be >= 0");
            if (c.level_cap < 1) diags.push_back("level_cap must be >= 1");
            break;
        case Command::Eigenfunction:
            if (static_cast<int>(c.occ.size()) != n)
                diags.push_back("occ must have exactly n entries");
            for (int q : c.occ)
                if (q < 0) {
                    diags.push_back("occupations must be >= 0");
                    break;
                }
            if (c.grid_count > 0 && c.random_points > 0)
                diags.push_back("choose either a grid or random points, not both");
            if (c.grid_count == 0 && c.random_points == 0)
                diags.push_back("eigenfunction needs a grid or random points");
            if (c.grid_count > 0 && (!c.grid_min || !c.grid_max || !(*c.grid_min < *c.grid_max)))
                diags.push_back("grid range must be increasing");
            if (c.grid_count > 0 && std::pow(static_cast<double>(c.grid_count), n) > 2e6)
                diags.push_back("grid has too many points (cap 2e6)");
            if (c.random_points < 0) diags.push_back("random_points must be >= 0");
            if (!(c.box > 0.0)) diags.push_back("box must be > 0");
            break;
        case Command::PhasePoint:
            if (!(c.tol > 0.0)) diags.push_back("tol must be > 0");
            break;
        case Command::PhaseScan:
            if (!(c.tol > 0.0)) diags.push_back("tol must be > 0");
            if (c.axes.empty() || c.axes.size() > 3)
                diags.push_back("phase-scan needs 1 to 3 axes");
            for (const ScanAxis& ax : c.axes) {
                if (ax.count < 1) diags.push_back("axis count must be >= 1");
                if (ax.count > 1 && !(ax.max > ax.min))
                    diags.push_back("axis range must be increasing");
                if (ax.param != AxisParam::Gamma && (ax.site < 0 || ax.site >= n))
                    diags.push_back("axis site out of range");
            }
            break;
        case Command::Trajectory:
        case Command::Poincare:
            if (static_cast<int>(c.x0.size()) != n) diags.push_back("x0 must have n complex entries");
            if (static_cast<int>(c.v0.size()) != n) diags.push_back("v0 must have n complex entries");
            if (!(c.dt > 0.0)) diags.push_back("dt must be > 0");
            if (!(c.t_end > 0.0)) diags.push_back("t_end must be > 0");
            if (!(c.dt_out >= c.dt)) diags.push_back("dt_out must be >= dt");
            if (c.command == Command::Poincare) {
                if (c.section.coord < 0 || c.section.coord >= n)
                    diags.push_back("section coord out of range");
                if (c.section.project < 0 || c.section.project >= n)
                    diags.push_back("section projection out of range");
            }
            break;
        case Command::OracleCheck:
            if (c.cutoff < 1) diags.push_back("cutoff must be >= 1");
            if (c.dimension_cap < 2) diags.push_back("dimension_cap must be >= 2");
            break;
    }
    return diags;
}

namespace {

std::vector<std::vector<double>> make_points(const RunConfig& c) {
    const int n = c.spec.n;
    std::vector<std::vector<double>> points;
    if (c.grid_count > 0) {
        const double lo = *c.grid_min, hi = *c.grid_max;
        std::int64_t total = 1;
        for (int j = 0; j < n; ++j) total *= c.grid_count;
        points.reserve(static_cast<size_t>(total));
        std::vector<double> pt(static_cast<size_t>(n), lo);
        for (std::int64_t flat = 0; flat < total; ++flat) {
            std::int64_t rem = flat;
            for (int j = n - 1; j >= 0; --j) {
                const int i = static_cast<int>(rem % c.grid_count);
                rem /= c.grid_count;
                pt[static_cast<size_t>(j)] =
                    c.grid_count == 1 ? lo : lo + (hi - lo) * i / (c.grid_count - 1);
            }
            points.push_back(pt);
        }
    } else {
        std::mt19937_64 rng(c.seed);
        const auto uniform = [&rng] { return (rng() >> 11) * 0x1.0p-53; };
        points.reserve(static_cast<size_t>(c.random_points));
        for (int i = 0; i < c.random_points; ++i) {
            std::vector<double> pt(static_cast<size_t>(n));
            for (int j = 0; j < n; ++j)
                pt[static_cast<size_t>(j)] = c.box * (2.0 * uniform() - 1.0);
            points.push_back(std::move(pt));
        }
    }
    return points;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const InvalidSpec*>(&e) ||
        dynamic_cast<const DimensionMismatch*>(&e))
        return 2;
    if (dynamic_cast<const CombinatorialOverflow*>(&e) || dynamic_cast<const GridTooLarge*>(&e) ||
        dynamic_cast<const DimensionCap*>(&e))
        return 4;
    return 3;
}

const char* error_type_name(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
    if (dynamic_cast<const InvalidSpec*>(&e)) return "InvalidSpec";
    if (dynamic_cast<const DimensionMismatch*>(&e)) return "DimensionMismatch";
    if (dynamic_cast<const CombinatorialOverflow*>(&e)) return "CombinatorialOverflow";
    if (dynamic_cast<const GridTooLarge*>(&e)) return "GridTooLarge";
    if (dynamic_cast<const DimensionCap*>(&e)) return "DimensionCap";
    if (dynamic_cast<const DegenerateModes*>(&e)) return "DegenerateModes";
    if (dynamic_cast<const RootSolveFailure*>(&e)) return "RootSolveFailure";
    if (dynamic_cast<const EigensolveFailure*>(&e)) return "EigensolveFailure";
    if (dynamic_cast<const MatchingAmbiguous*>(&e)) return "MatchingAmbiguous";
    if (dynamic_cast<const StepTooLarge*>(&e)) return "StepTooLarge";
    if (dynamic_cast<const InsufficientData*>(&e)) return "InsufficientData";
    if (dynamic_cast<const NoCrossings*>(&e)) return "NoCrossings";
    if (dynamic_cast<const UndersampledRecord*>(&e)) return "UndersampledRecord";
    return "Error";
}

struct Artifact {
    std::string text;  // csv
    Json json;
};

Artifact produce(const RunConfig& c) {
    Artifact art;
    const bool csv = c.format == OutputFormat::Csv;
    switch (c.command) {
        case Command::Spectrum: {
            const auto levels = enumerate_levels(c.spec, c.max_quanta, c.level_cap, c.threads);
            if (csv)
                art.text = levels_to_csv(levels, c.spec.n);
            else
                art.json = levels_to_json(c.spec, levels);
            break;
        }
        case Command::Eigenfunction: {
            const auto sample = eigenfunction_evaluate(c.spec, c.occ, make_points(c));
            if (csv)
                art.text = sample_to_csv(sample, c.spec.n);
            else
                art.json = sample_to_json(c.spec, sample);
            break;
        }
        case Command::PhasePoint: {
            const PhaseClass cls = classify_phase(c.spec, c.tol);
            const ModeSet modes = general_mode_frequencies(c.spec);
            if (csv)
                art.text = phase_point_to_csv(cls, modes);
            else
                art.json = phase_point_to_json(c.spec, cls, modes);
            break;
        }
        case Command::PhaseScan: {
            const PhaseGrid grid = scan_phase_diagram({c.spec, c.axes, c.tol}, c.threads);
            if (csv)
                art.text = grid_to_csv(grid);
            else
                art.json = grid_to_json(grid);
            break;
        }
        case Command::Trajectory: {
            const ClassicalState init{0.0, c.x0, c.v0};
            const TrajectoryRecord rec = integrate(c.spec, init, c.dt, c.t_end, c.dt_out);
            if (csv)
                art.text = record_to_csv(rec);
            else
                art.json = record_to_json(rec);
            break;
        }
        case Command::Poincare: {
            const ClassicalState init{0.0, c.x0, c.v0};
            const TrajectoryRecord rec = integrate(c.spec, init, c.dt, c.t_end, c.dt_out);
            const PoincareSection sec = poincare_section(rec, c.section);
            if (csv)
                art.text = section_to_csv(sec);
            else
                art.json = section_to_json(rec, sec);
            break;
        }
        case Command::OracleCheck: {
            const FockBasisSpec basis{c.cutoff, c.spec.n};
            const SpectralComparison cmp =
                fock_spectrum_check(c.spec, basis, c.max_sum, c.dimension_cap);
            if (csv)
                art.text = comparison_to_csv(cmp, c.spec.n);
            else
                art.json = comparison_to_json(c.spec, cmp);
            break;
        }
    }
    return art;
}

}  // namespace

int run(const RunConfig& config, std::ostream& err) {
    const auto emit_error = [&err](const std::string& type, const std::string& message) {
        Json e;
        e["error"] = Json{{"type", type}, {"message", message}};
        err << e.dump() << "\n";
    };
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const std::vector<std::string> diags = validate(config);
        if (!diags.empty()) {
            std::string joined;
            for (const std::string& d : diags) {
                if (!joined.empty()) joined += "; ";
                joined += d;
            }
            throw ConfigError(joined);
        }
        Artifact art = produce(config);
        if (config.format == OutputFormat::Csv)
            write_text_file(config.output, art.text);
        else
            write_text_file(config.output, art.json.dump(2) + "\n");

        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        Json manifest;
        manifest["tool"] = "ptchain";
        manifest["version"] = "0.1.0";
        manifest["config"] = config_to_json(config);
        manifest["outputs"] = Json::array({config.output});
        manifest["wall_time_s"] = wall;
        write_text_file(config.output + ".manifest.json", manifest.dump(2) + "\n");
        return 0;
    } catch (const std::exception& e) {
        emit_error(error_type_name(e), e.what());
        return exit_code_for(e);
    }
}

}  // namespace ptchain
