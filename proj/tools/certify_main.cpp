#include "certify/errors.hpp"
#include "certify/scenario.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

namespace {

int max_threads() {
    if (const char* env = std::getenv("CERTIFY_THREADS")) {
        int n = std::atoi(env);
        if (n > 0)
            return n;
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

int run_one(certify::Scenario scenario, const std::string& out_dir, int resolution,
            const std::string& check) {
    if (resolution > 0)
        scenario.resolution = resolution;
    if (check == "main")
        scenario.checks = {"main", "topology", "injectivity"};
    else if (check == "nonconvex")
        scenario.checks = {"nonconvex", "topology", "injectivity"};
    else if (check == "all")
        scenario.checks = {"main", "nonconvex", "topology", "injectivity"};

    certify::RunResult res = certify::run_scenario(scenario, out_dir);
    std::cout << scenario.name << ": " << res.verdict << " (report: " << res.report_path << ")\n";
    return res.exit_status;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"certify: boundary-Jacobian diffeomorphism certificates for "
                 "sigma-harmonic mappings of the unit disk"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir = "certify-out", check = "all";
    int resolution = 0;

    CLI::App* run = app.add_subcommand("run", "run a scenario file");
    run->add_option("scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--resolution", resolution, "override n_boundary");
    run->add_option("--check", check, "main|nonconvex|all")
        ->check(CLI::IsMember({"main", "nonconvex", "all"}));

    CLI::App* gal = app.add_subcommand("gallery", "built-in scenarios");
    CLI::App* gal_list = gal->add_subcommand("list", "list gallery scenarios");
    CLI::App* gal_run = gal->add_subcommand("run", "run gallery scenarios");
    std::vector<std::string> names;
    gal_run->add_option("names", names, "gallery scenario names")->required();
    gal_run->add_option("--out", out_dir, "output directory (one subdirectory per scenario)");
    gal_run->add_option("--resolution", resolution, "override n_boundary");
    gal_run->add_option("--check", check, "main|nonconvex|all")
        ->check(CLI::IsMember({"main", "nonconvex", "all"}));
    gal->require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return run_one(certify::load_scenario_file(scenario_path), out_dir, resolution,
                           check);
        if (gal_list->parsed()) {
            for (const auto& s : certify::gallery())
                std::cout << s.name << ": " << s.description << "\n";
            return 0;
        }
        if (gal_run->parsed()) {
            // scenarios run concurrently, each into its own output directory
            std::vector<certify::Scenario> scenarios;
            for (const auto& n : names)
                scenarios.push_back(certify::gallery_scenario(n));
            std::vector<int> codes(scenarios.size(), 2);
            std::mutex mtx;
            size_t next = 0;
            auto worker = [&] {
                for (;;) {
                    size_t i;
                    {
                        std::lock_guard lock(mtx);
                        if (next >= scenarios.size())
                            return;
                        i = next++;
                    }
                    try {
                        codes[i] = run_one(scenarios[i], out_dir + "/" + scenarios[i].name,
                                           resolution, check);
                    } catch (const certify::Error& e) {
                        std::lock_guard lock(mtx);
                        std::cerr << scenarios[i].name << ": error: " << e.what() << "\n";
                        codes[i] = 2;
                    }
                }
            };
            int nt = std::min<int>(max_threads(), static_cast<int>(scenarios.size()));
            std::vector<std::thread> pool;
            for (int i = 0; i < nt; ++i)
                pool.emplace_back(worker);
            for (auto& t : pool)
                t.join();
            int worst = 0;
            for (int c : codes)
                worst = std::max(worst, c);
            return worst;
        }
    } catch (const certify::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
