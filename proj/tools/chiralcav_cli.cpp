#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "chiralcav/io/commands.hpp"

namespace io = chiralcav::io;

namespace {

struct Globals
{
    std::string config_path;
    std::string preset;
    std::string output;
    std::string format;
    std::string unit;
    std::string dump_radial;
    int threads = 1;
};

std::string read_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw chiralcav::InvalidParameter("--config: cannot read '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

io::RunConfig load(const Globals& g)
{
    io::RunConfig cfg;
    if (!g.preset.empty()) {
        const auto text = io::preset_text(g.preset);
        if (!text) {
            std::string known;
            for (const auto& n : io::preset_names()) known += (known.empty() ? "" : ", ") + n;
            throw chiralcav::InvalidParameter("--preset: unknown preset '" + g.preset + "' (known: " + known + ")");
        }
        cfg = io::parse_config(*text, cfg);
    }
    if (!g.config_path.empty()) cfg = io::parse_config(read_file(g.config_path), cfg);
    if (!g.format.empty()) cfg = io::parse_config("[output]\nformat = " + g.format + "\n", cfg);
    if (!g.unit.empty()) cfg = io::parse_config("[output]\nunit = " + g.unit + "\n", cfg);
    if (!g.output.empty()) cfg.output_path = g.output;
    return cfg;
}

int run(const std::string& name, const Globals& g)
{
    const io::RunConfig cfg = load(g);
    if (g.threads < 1) throw chiralcav::InvalidParameter("--threads: must be >= 1");
    io::RunOptions opts;
    opts.threads = g.threads;
    opts.dump_radial = g.dump_radial;

    io::CommandResult res;
    if (name == "shift") res = io::cmd_shift(cfg, opts);
    else if (name == "sweep") res = io::cmd_sweep(cfg, opts);
    else if (name == "oracle") res = io::cmd_oracle(cfg, opts);
    else if (name == "rabi") res = io::cmd_rabi(cfg, opts);
    else if (name == "lamb") res = io::cmd_lamb(cfg, opts);

    const bool json = cfg.format == io::OutputFormat::json;
    if (cfg.output_path.empty()) {
        io::write_table(std::cout, res.table, json);
        std::cerr << res.summary;
    } else {
        {
            auto f = io::open_output(cfg.output_path);
            io::write_table(f, res.table, json);
        }
        nlohmann::json meta = res.meta;
        meta["command"] = name;
        meta["preset"] = g.preset;
        meta["config"] = g.config_path;
        meta["format"] = json ? "json" : "csv";
        meta["unit"] = std::string(chiralcav::unit_label(cfg.unit));
        meta["threads"] = g.threads;
        meta["exit_status"] = res.status;
        meta["columns"] = res.table.columns;
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char stamp[32];
        std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        meta["created_utc"] = stamp;
        io::write_sidecar(cfg.output_path, meta);
        std::cout << res.summary;
    }
    std::cout.flush();
    return res.status;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Chiral-cavity spectral shifts and vacuum Rabi dynamics"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    Globals g;
    app.add_option("--config", g.config_path, "INI run configuration");
    app.add_option("--preset", g.preset, "built-in scenario, applied before --config");
    app.add_option("--output", g.output, "data file (default: stdout)");
    app.add_option("--format", g.format, "csv or json");
    app.add_option("--unit", g.unit, "hartree, meV, GHz or cm-1");
    app.add_option("--threads", g.threads, "worker threads for sweeps");
    app.add_option("--dump-radial", g.dump_radial, "write numerically solved (r, u) pairs as CSV");

    for (const char* name : {"shift", "sweep", "oracle", "rabi", "lamb"}) app.add_subcommand(name);
    app.get_subcommand("shift")->description("AM and CL shifts for the configured state(s)");
    app.get_subcommand("sweep")->description("shifts over the [sweep] range, ordered by sweep value");
    app.get_subcommand("oracle")->description("exact diagonalization against the perturbative oscillator gap");
    app.get_subcommand("rabi")->description("two-level population: printed, first-order and direct curves");
    app.get_subcommand("lamb")->description("free-space cavity-Lamb shift with its cutoff logarithm");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        return run(name, g);
    } catch (const chiralcav::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const chiralcav::NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
}
