#pragma once

#include "certify/certify.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace certify {

struct Scenario {
    std::string name;
    std::string description;
    std::array<std::string, 4> sigma_entries = {"1", "0", "0", "1"};
    double K = 1.0;
    Smoothness smoothness = Smoothness::Smooth;
    std::string phi_x = "cos(theta)";
    std::string phi_y = "sin(theta)";
    std::string points_file;           // alternative to the expression pair
    int resolution = 256;
    int n_alpha = 16;
    double grading = 1.0;
    double boundary_det_tol = -1.0;    // < 0: scale-aware default
    double ellipticity_tol = 1e-10;
    double hull_tol = -1.0;
    std::vector<std::string> checks = {"main", "nonconvex", "topology", "injectivity"};
    bool dump_fields = false;
};

/// Parses a scenario JSON document, rejecting unknown keys.
Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario_file(const std::string& path);
std::string scenario_to_json(const Scenario& s);

const std::vector<Scenario>& gallery();
const Scenario& gallery_scenario(const std::string& name);

struct RunResult {
    int exit_status = 2;
    std::string verdict;
    std::string report_path;
};

/// Runs the scenario and writes report.json, boundary_profile.csv,
/// alpha_sweep.csv and optional field dumps under out_dir. Exit status:
/// 0 Diffeomorphism, 10 BoundaryDegenerate, 11 FoldDetected,
/// 12 Inconclusive, 2 input error.
RunResult run_scenario(const Scenario& scenario, const std::string& out_dir);

} // namespace certify
