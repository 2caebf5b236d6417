#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "ciw/scenarios.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ciw::ConfigError*>(&e)) return 2;
    if (dynamic_cast<const ciw::IoError*>(&e)) return 3;
    return 1;  // assertion or internal failure
}

int thread_cap() {
    // the engine runs a single orchestration thread; CIW_THREADS is honored
    // as an upper bound on worker parallelism
    const char* env = std::getenv("CIW_THREADS");
    if (!env) return 1;
    int v = std::atoi(env);
    return v >= 1 ? std::min(v, 1) : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ciw workbench: pseudo-spectral convex-integration constructions"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "execute a scenario from a config file");
    run->add_option("config", config_path, "path to the run configuration")->required();

    int geom_dim = 2;
    auto* geom = app.add_subcommand("geometry", "print the direction set as JSON");
    geom->add_option("--dim", geom_dim, "spatial dimension (2 or 3)")
        ->check(CLI::IsMember({2, 3}));

    std::string dump_path;
    auto* dump = app.add_subcommand("dump", "inspect a CIWF field dump");
    dump->add_option("file", dump_path, "path to a .ciwf file")->required();

    app.add_subcommand("version", "print the version");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("version")) {
            std::cout << "workbench_cli " << kVersion << "\n";
            return 0;
        }
        if (app.got_subcommand("geometry")) {
            std::cout << ciw::geometry_json(geom_dim).dump(2) << "\n";
            return 0;
        }
        if (app.got_subcommand("dump")) {
            ciw::DumpInfo info = ciw::read_dump(dump_path);
            ciw::ordered_json o;
            o["schema_version"] = 1;
            o["version"] = info.version;
            o["d"] = info.d;
            o["n"] = info.n;
            o["n_t"] = info.nt;
            o["components"] = info.components;
            o["layout"] = info.layout;
            o["kind"] = info.kind;
            o["T"] = info.T;
            o["coefficients"] = info.coefficients;
            o["max_abs"] = info.max_abs;
            std::cout << o.dump(2) << "\n";
            return 0;
        }
        // run
        ciw::RunConfig cfg = ciw::parse_config_file(config_path);
        (void)thread_cap();
        bool ok = ciw::run_scenario(cfg);
        if (!ok) {
            std::cerr << "workbench_cli: hard assertions failed, see diagnostics.csv\n";
            return 1;
        }
        return 0;
    } catch (const ciw::Error& e) {
        std::cerr << "workbench_cli: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "workbench_cli: " << e.what() << "\n";
        return 1;
    }
}
