// Batch front-end: every subcommand builds a RunConfig (JSON config file
// plus flag overrides, flags winning) and hands it to ptchain::run().

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "ptchain/runconfig.hpp"

namespace {

using ptchain::RunConfig;

struct FlagValues {
    std::string config_path;
    std::string n, gamma, omega_sq;
    std::string omega_site_sq[4];
    std::string max_quanta, level_cap;
    std::string occ, grid, random_points, box;
    std::string tol, axes;
    std::string x0, v0, dt, t_end, dt_out, section, project;
    std::string cutoff, max_sum, dimension_cap;
    std::string output, format, seed, threads;
};

void add_common_flags(CLI::App* cmd, FlagValues& f) {
    cmd->add_option("--config", f.config_path, "JSON config file; flags override its values");
    cmd->add_option("--output,-o", f.output, "output artifact path");
    cmd->add_option("--format", f.format, "csv or json (default csv)");
    cmd->add_option("--seed", f.seed, "seed for randomized point generation");
    cmd->add_option("--threads", f.threads, "worker count, 0 = auto");
    cmd->add_option("--n", f.n, "number of oscillators");
    cmd->add_option("--gamma", f.gamma, "coupling strength (rationals like 1/12 allowed)");
    cmd->add_option("--omega-sq", f.omega_sq, "comma list of squared natural frequencies");
    cmd->add_option("--omega-x-sq", f.omega_site_sq[0], "squared frequency of site 1");
    cmd->add_option("--omega-y-sq", f.omega_site_sq[1], "squared frequency of site 2");
    cmd->add_option("--omega-z-sq", f.omega_site_sq[2], "squared frequency of site 3");
    cmd->add_option("--omega-w-sq", f.omega_site_sq[3], "squared frequency of site 4");
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

RunConfig build_config(ptchain::Command command, const FlagValues& f) {
    using ptchain::ConfigError;
    ptchain::Json base = ptchain::Json::object();
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in) throw ConfigError("cannot read config file: " + f.config_path);
        in >> base;
    }
    RunConfig c = ptchain::config_from_json(base);
    c.command = command;

    if (!f.n.empty()) {
        c.spec.n = std::stoi(f.n);
        if (base.contains("omega_sq") == false && f.omega_sq.empty())
            c.spec.omega_sq.assign(static_cast<size_t>(std::max(c.spec.n, 0)), 1.0);
    }
    if (!f.omega_sq.empty()) {
        c.spec.omega_sq.clear();
        for (const std::string& tok : split_list(f.omega_sq))
            c.spec.omega_sq.push_back(ptchain::parse_number(tok));
        if (f.n.empty()) c.spec.n = static_cast<int>(c.spec.omega_sq.size());
    }
    for (int site = 0; site < 4; ++site)
        if (!f.omega_site_sq[site].empty()) {
            if (site >= c.spec.n) throw ConfigError("per-site omega flag beyond n");
            c.spec.omega_sq[static_cast<size_t>(site)] =
                ptchain::parse_number(f.omega_site_sq[site]);
        }
    if (!f.gamma.empty()) c.spec.gamma = ptchain::parse_number(f.gamma);

    if (!f.max_quanta.empty()) c.max_quanta = std::stoi(f.max_quanta);
    if (!f.level_cap.empty()) c.level_cap = std::stoll(f.level_cap);
    if (!f.occ.empty()) {
        c.occ.clear();
        for (const std::string& tok : split_list(f.occ)) c.occ.push_back(std::stoi(tok));
    }
    if (!f.grid.empty()) {
        const std::vector<std::string> parts = split_list(f.grid);
        ptchain::ScanAxis probe;  // reuse the axis syntax min:max:count
        std::vector<std::string> g;
        {
            std::string cur;
            for (char ch : f.grid)
                if (ch == ':') {
                    g.push_back(cur);
                    cur.clear();
                } else
                    cur += ch;
            g.push_back(cur);
        }
        if (g.size() != 3) throw ConfigError("--grid must look like min:max:count");
        c.grid_min = ptchain::parse_number(g[0]);
        c.grid_max = ptchain::parse_number(g[1]);
        c.grid_count = std::stoi(g[2]);
        (void)parts;
        (void)probe;
    }
    if (!f.random_points.empty()) c.random_points = std::stoi(f.random_points);
    if (!f.box.empty()) c.box = ptchain::parse_number(f.box);
    if (!f.tol.empty()) c.tol = ptchain::parse_number(f.tol);
    if (!f.axes.empty()) {
        c.axes.clear();
        for (const std::string& tok : split_list(f.axes))
            c.axes.push_back(ptchain::parse_axis(tok, c.spec.n));
    }
    if (!f.x0.empty()) c.x0 = ptchain::parse_complex_list(f.x0, "--x0");
    if (!f.v0.empty()) c.v0 = ptchain::parse_complex_list(f.v0, "--v0");
    if (!f.dt.empty()) c.dt = ptchain::parse_number(f.dt);
    if (!f.t_end.empty()) c.t_end = ptchain::parse_number(f.t_end);
    if (!f.dt_out.empty()) c.dt_out = ptchain::parse_number(f.dt_out);
    if (!f.section.empty()) {
        std::vector<std::string> s;
        std::string cur;
        for (char ch : f.section)
            if (ch == ':') {
                s.push_back(cur);
                cur.clear();
            } else
                cur += ch;
        s.push_back(cur);
        if (s.size() != 4) throw ConfigError("--section must look like coord:part:level:direction");
        c.section.coord = std::stoi(s[0]) - 1;  // 1-based on the command line
        c.section.part = s[1] == "im" ? ptchain::ComplexPart::Im : ptchain::ComplexPart::Re;
        c.section.level = ptchain::parse_number(s[2]);
        if (s[3] == "asc")
            c.section.direction = ptchain::CrossingDirection::Ascending;
        else if (s[3] == "desc")
            c.section.direction = ptchain::CrossingDirection::Descending;
        else if (s[3] == "both")
            c.section.direction = ptchain::CrossingDirection::Both;
        else
            throw ConfigError("section direction must be asc, desc or both");
    }
    if (!f.project.empty()) {
        std::vector<std::string> s;
        std::string cur;
        for (char ch : f.project)
            if (ch == ':') {
                s.push_back(cur);
                cur.clear();
            } else
                cur += ch;
        s.push_back(cur);
        if (s.size() != 2) throw ConfigError("--project must look like coord:part");
        c.section.project = std::stoi(s[0]) - 1;
        c.section.project_part = s[1] == "im" ? ptchain::ComplexPart::Im : ptchain::ComplexPart::Re;
    }
    if (!f.cutoff.empty()) c.cutoff = std::stoi(f.cutoff);
    if (!f.max_sum.empty()) c.max_sum = std::stoi(f.max_sum);
    if (!f.dimension_cap.empty()) c.dimension_cap = std::stoll(f.dimension_cap);
    if (!f.output.empty()) c.output = f.output;
    if (!f.format.empty()) {
        if (f.format == "csv")
            c.format = ptchain::OutputFormat::Csv;
        else if (f.format == "json")
            c.format = ptchain::OutputFormat::Json;
        else
            throw ConfigError("format must be csv or json");
    }
    if (!f.seed.empty()) c.seed = std::stoull(f.seed);
    if (!f.threads.empty()) c.threads = std::stoi(f.threads);
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact spectra, phase diagrams and classical dynamics of "
                 "imaginary-coupled oscillator chains"};
    app.require_subcommand(1);

    struct Sub {
        ptchain::Command command;
        CLI::App* cmd;
        FlagValues flags;
    };
    std::vector<Sub> subs;
    subs.reserve(8);  // CLI11 binds to flag addresses; no reallocation allowed
    const auto add_sub = [&](ptchain::Command command, const char* name, const char* blurb) {
        subs.push_back({command, app.add_subcommand(name, blurb), {}});
        add_common_flags(subs.back().cmd, subs.back().flags);
        return subs.back().cmd;
    };

    {
        CLI::App* s = add_sub(ptchain::Command::Spectrum, "spectrum",
                              "enumerate energy levels up to a total quanta bound");
        s->add_option("--max-quanta", subs.back().flags.max_quanta, "total quanta bound");
        s->add_option("--level-cap", subs.back().flags.level_cap, "refuse bigger enumerations");
    }
    {
        CLI::App* s = add_sub(ptchain::Command::Eigenfunction, "eigenfunction",
                              "evaluate one eigenfunction on a grid or random points");
        s->add_option("--occ", subs.back().flags.occ, "comma list of mode occupations");
        s->add_option("--grid", subs.back().flags.grid, "product grid min:max:count per axis");
        s->add_option("--random-points", subs.back().flags.random_points, "seeded random points");
        s->add_option("--box", subs.back().flags.box, "half-width of the random-point box");
    }
    {
        CLI::App* s = add_sub(ptchain::Command::PhasePoint, "phase-point",
                              "classify a single parameter point");
        s->add_option("--tol", subs.back().flags.tol, "classification tolerance");
    }
    {
        CLI::App* s = add_sub(ptchain::Command::PhaseScan, "phase-scan",
                              "classify a 1-3 axis parameter grid");
        s->add_option("--axes", subs.back().flags.axes,
                      "comma list of axes name:min:max:count (wx, wzsq, gamma, ...)");
        s->add_option("--tol", subs.back().flags.tol, "classification tolerance");
    }
    {
        CLI::App* s = add_sub(ptchain::Command::Trajectory, "trajectory",
                              "integrate the classical equations of motion");
        s->add_option("--x0", subs.back().flags.x0, "initial positions re,im,re,im,...");
        s->add_option("--v0", subs.back().flags.v0, "initial velocities re,im,re,im,...");
        s->add_option("--dt", subs.back().flags.dt, "integrator step");
        s->add_option("--t-end", subs.back().flags.t_end, "final time");
        s->add_option("--dt-out", subs.back().flags.dt_out, "output sample spacing");
    }
    {
        CLI::App* s = add_sub(ptchain::Command::Poincare, "poincare",
                              "integrate and extract a Poincare section");
        s->add_option("--x0", subs.back().flags.x0, "initial positions re,im,re,im,...");
        s->add_option("--v0", subs.back().flags.v0, "initial velocities re,im,re,im,...");
        s->add_option("--dt", subs.back().flags.dt, "integrator step");
        s->add_option("--t-end", subs.back().flags.t_end, "final time");
        s->add_option("--dt-out", subs.back().flags.dt_out, "output sample spacing");
        s->add_option("--section", subs.back().flags.section,
                      "coord:part:level:direction (1-based coord, e.g. 2:re:0:asc)");
        s->add_option("--project", subs.back().flags.project, "coord:part projection (1-based)");
    }
    {
        CLI::App* s = add_sub(ptchain::Command::OracleCheck, "oracle-check",
                              "compare analytic levels against a truncated-basis diagonalization");
        s->add_option("--cutoff", subs.back().flags.cutoff, "max quanta per site");
        s->add_option("--max-sum", subs.back().flags.max_sum, "total quanta of checked levels");
        s->add_option("--dimension-cap", subs.back().flags.dimension_cap, "refuse bigger bases");
    }

    CLI11_PARSE(app, argc, argv);

    for (const Sub& sub : subs) {
        if (!sub.cmd->parsed()) continue;
        try {
            const RunConfig config = build_config(sub.command, sub.flags);
            return ptchain::run(config, std::cerr);
        } catch (const std::exception& e) {
            ptchain::Json err;
            err["error"] = ptchain::Json{{"type", "ConfigError"}, {"message", e.what()}};
            std::cerr << err.dump() << "\n";
            return 2;
        }
    }
    return 2;
}
