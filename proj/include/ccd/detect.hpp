#pragma once

// The four CCD-based outlier detectors. RU/SU cluster with RK-CCDs, UN/SUN
// with UN-CCDs; the S-variants (SU, SUN) extend cluster coverage through the
// mutual catch graph and filter small clusters with S_min. All four share the
// per-cluster rule: calibrate delta_j on the cluster core, rebuild a KS-CCD on
// the full cluster membership, and flag every non-core point whose mutual
// catch component contains no core point.

#include "ccd/ccd.hpp"
#include "ccd/core.hpp"
#include "ccd/mcg.hpp"

#include <string>
#include <vector>

namespace ccd {

struct DetectorParams {
    double alpha = 0.0;      // 0: per-dimension default for the clustering CCD
    double delta0 = 0.0;     // 0: 2 * n_core / V_d(seed ball radius)
    double delta_step = 0.0; // 0: delta0 / 50
    std::size_t s_min = 0;   // 0: ceil(0.5 * contamination * n) for SU/SUN
    double contamination = 0.05;
    std::size_t k_env_sims = 100;
    std::size_t nnd_sims = 1000;
    ScanDirection un_direction = ScanDirection::ascending;
};

struct ClusterDiagnostics {
    int seed_center = -1;
    double seed_radius = 0.0;
    double delta_j = 0.0;
    bool delta_floor = false;
    std::size_t core_size = 0, member_size = 0;
};

struct DetectionReport {
    std::vector<int> outlier_flags; // 0/1 per point
    std::vector<int> cluster_ids;   // per point; outliers keep their nearest cluster
    ClusterModel model;
    std::vector<ClusterDiagnostics> diagnostics;
    bool shared_component = false;
    bool zero_radius_fallback = false;
    std::size_t rejected_by_smin = 0;
};

DetectionReport ru_mccd(const Dataset& data, const DetectorParams& params = {});
DetectionReport su_mccd(const Dataset& data, const DetectorParams& params = {});
DetectionReport un_mccd(const Dataset& data, const DetectorParams& params = {});
DetectionReport sun_mccd(const Dataset& data, const DetectorParams& params = {});

enum class Detector { ru, su, un, sun };

DetectionReport run_detector(Detector which, const Dataset& data,
                             const DetectorParams& params = {});

Detector detector_from_name(const std::string& name); // "ru-mccd" etc.
std::string detector_name(Detector d);

// Shared core: cluster with `variant`, optionally extend/filter (shaped), then
// apply the per-cluster outlier rule. Exposed for tests that inject a model.
DetectionReport detect_with_model(const Dataset& data, const DistanceMatrix& dist,
                                  ClusterModel model, const DetectorParams& params);

} // namespace ccd
