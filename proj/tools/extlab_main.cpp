#include <chrono>
#include <cstdio>
#include <ctime>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "extlab/errors.hpp"
#include "extlab/experiments.hpp"
#include "extlab/params.hpp"
#include "extlab/report.hpp"

namespace {

std::string timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
    return buf;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"extlab: numerical experiments for grid-averaged Fourier "
                 "extension of smooth Alpert projections"};
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "enumerate experiments");

    std::string experiment, config_path, out_dir = "out";
    std::vector<std::string> sets;
    auto* run = app.add_subcommand("run", "run one experiment");
    run->add_option("experiment", experiment, "experiment name")->required();
    run->add_option("--config", config_path, "key = value config file");
    run->add_option("--set", sets, "override: key=value (repeatable)");
    run->add_option("--out", out_dir, "output directory root");

    CLI11_PARSE(app, argc, argv);

    if (list->parsed()) {
        for (const auto& n : extlab::experiment_names()) std::printf("%s\n", n.c_str());
        return 0;
    }

    try {
        std::map<std::string, std::string> kv;
        if (!config_path.empty()) kv = extlab::parse_config_file(config_path);
        extlab::apply_overrides(kv, sets);
        const extlab::Params params = extlab::Params::from_kv(kv);

        const auto rep = extlab::run_experiment(experiment, params);
        const std::string dir = out_dir + "/" + experiment + "/" + timestamp();
        extlab::write_report(rep, dir);

        std::printf("experiment %s: %zu rows, %.2f s\n", rep.experiment.c_str(),
                    rep.rows.size(), rep.wall_seconds);
        for (const auto& c : rep.criteria) {
            std::printf("  [%s] %s: value %.6g %s %.6g%s\n", c.pass ? "PASS" : "FAIL",
                        c.name.c_str(), c.value, c.relation.c_str(), c.threshold,
                        c.note.empty() ? "" : (" (" + c.note + ")").c_str());
        }
        std::printf("wrote %s\n", dir.c_str());
        return rep.pass() ? 0 : 1;
    } catch (const extlab::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
