// Command-line driver for the satellite link simulator.
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "satqkd/scenario.hpp"

namespace fs = std::filesystem;
using namespace satqkd;

namespace {

struct Options {
    std::string config;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    std::string grid;
    std::string preset;
};

scenario::ScenarioConfig resolve(const Options& o) {
    if (!o.config.empty() && !o.preset.empty()) throw DomainError("--config and --preset are mutually exclusive");
    auto c = !o.preset.empty() ? scenario::preset(o.preset)
             : !o.config.empty() ? scenario::load_file(o.config)
                                 : scenario::ScenarioConfig{};
    if (o.seed) c.mc.seed = *o.seed;
    if (!o.grid.empty()) c.grid = scenario::ZenithGrid::parse(o.grid);
    c.validate();
    return c;
}

void write(const fs::path& dir, const std::string& name, const std::string& text) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    const auto path = dir / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DomainError("cannot write " + path.string());
    f << text;
    std::cout << path.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LEO downlink channel and decoy-state key-rate simulator"};
    app.require_subcommand(1);
    Options o;
    auto add_common = [&o](CLI::App* s) {
        s->add_option("--config", o.config, "JSON scenario file");
        s->add_option("--out", o.out, "output directory");
        s->add_option("--seed", o.seed, "Monte Carlo seed");
        s->add_option("--grid", o.grid, "zenith grid start:stop:step in degrees");
        s->add_option("--preset", o.preset, "fig2|fig3|fig5|fig6|fig9")
            ->check(CLI::IsMember({"fig2", "fig3", "fig5", "fig6", "fig9"}));
    };
    auto* loss = app.add_subcommand("loss-budget", "slant range, elongation, extinction and <eta> vs zenith");
    auto* turbs = app.add_subcommand("turb-stats", "channel moments vs zenith");
    auto* pdtc = app.add_subcommand("pdt", "transmittance distribution at one zenith angle");
    auto* pass = app.add_subcommand("qkd-pass", "QBER and key rate along satellite passes");
    auto* atmo = app.add_subcommand("atmosphere-tables", "standard atmosphere and Cn2 profiles");
    for (auto* s : {loss, turbs, pdtc, pass, atmo}) add_common(s);
    double pdt_zenith = -1.0;
    pdtc->add_option("--zenith", pdt_zenith, "apparent zenith angle in degrees");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        auto c = resolve(o);
        const fs::path out(o.out);
        if (loss->parsed()) {
            write(out, "loss_budget.csv", scenario::run_loss_budget(c));
        } else if (turbs->parsed()) {
            write(out, "turb_stats.csv", scenario::run_turbulence_stats(c));
        } else if (pdtc->parsed()) {
            if (pdt_zenith >= 0.0) c.pdt_zenith_deg = pdt_zenith;
            c.validate();
            const auto f = scenario::run_pdt(c);
            write(out, "pdt_density.csv", f.density_csv);
            write(out, "pdt_summary.json", f.summary_json);
        } else if (pass->parsed()) {
            write(out, "qkd_pass.csv", scenario::run_qkd_pass(c));
        } else if (atmo->parsed()) {
            const auto f = scenario::run_atmosphere_tables(c);
            write(out, "standard_atmosphere.csv", f.standard_atmosphere_csv);
            write(out, "cn2_profiles.csv", f.cn2_profiles_csv);
        }
    } catch (const DomainError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
