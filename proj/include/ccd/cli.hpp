#pragma once

// Command implementations behind the ccdtool binary; split out so tests can
// drive them without spawning processes.

#include "ccd/core.hpp"
#include "ccd/detect.hpp"
#include "ccd/synth.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace ccd::cli {

// dataset CSV: header x1,...,xd[,label]; label 0 regular / 1 outlier
void write_dataset_csv(std::ostream& out, const Dataset& data);
Dataset read_dataset_csv(std::istream& in); // throws with row numbers on bad cells

struct GenerateConfig {
    std::string preset = "uni-general"; // uni-general | gau-general | matern | thomas | mixed
    int d = 2;
    std::size_t n = 100;
    std::size_t clusters = 2;
    double contamination = 0.05;
    std::string outlier_rule = "big-sphere"; // big-sphere | annulus | collective
    double collective_shift = 0.0;
    double noise_level = 0.01;
    std::uint64_t seed = 0;
    std::string out_path;
};
int cmd_generate(const GenerateConfig& cfg);

Dataset make_preset_dataset(const GenerateConfig& cfg); // shared with bench

struct DetectConfig {
    std::string in_path;
    std::string detector = "sun-mccd";
    DetectorParams params;
    std::string out_path;  // labels CSV
    std::string json_path; // diagnostics (optional)
};
int cmd_detect(const DetectConfig& cfg);

struct BenchConfig {
    std::vector<std::string> presets{"uni-general"};
    std::vector<int> dims{2};
    std::vector<std::size_t> sizes{100};
    std::vector<std::string> detectors{"sun-mccd"};
    std::size_t reps = 100;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    double contamination = 0.05;
    std::size_t clusters = 2;
    double beta = 2.0;
    std::string out_path;
    std::string svg_path; // optional plot
};
int cmd_bench(const BenchConfig& cfg);

struct NormalizeConfig {
    std::string in_path, out_path;
};
int cmd_normalize(const NormalizeConfig& cfg);

struct CsrTestConfig {
    std::string in_path;     // empty: generate a CSR ball instead
    std::string statistic = "ripley"; // ripley | nnd
    double alpha = 0.05;
    int d = 2;
    std::size_t n = 30;
    std::uint64_t seed = 0;
    std::string out_path; // empty: stdout
};
int cmd_csr_test(const CsrTestConfig& cfg);

// exit codes: 0 ok, 1 input error, 2 runtime failure
int dispatch_errors(const std::function<int()>& body);

} // namespace ccd::cli
