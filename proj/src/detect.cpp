#include "ccd/detect.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ccd {

std::string detector_name(Detector d) {
    switch (d) {
        case Detector::ru: return "ru-mccd";
        case Detector::su: return "su-mccd";
        case Detector::un: return "un-mccd";
        default: return "sun-mccd";
    }
}

Detector detector_from_name(const std::string& name) {
    if (name == "ru-mccd" || name == "ru") return Detector::ru;
    if (name == "su-mccd" || name == "su") return Detector::su;
    if (name == "un-mccd" || name == "un") return Detector::un;
    if (name == "sun-mccd" || name == "sun") return Detector::sun;
    throw std::invalid_argument("unknown detector: " + name);
}

DetectionReport detect_with_model(const Dataset& data, const DistanceMatrix& dist,
                                  ClusterModel model, const DetectorParams& params) {
    std::size_t n = data.size();
    DetectionReport rep;
    rep.outlier_flags.assign(n, 0);
    rep.cluster_ids.assign(n, -1);
    rep.shared_component = model.shared_component;
    rep.zero_radius_fallback = model.zero_radius_fallback;
    rep.rejected_by_smin = model.rejected_ids.size();

    for (std::size_t c = 0; c < model.clusters.size(); ++c)
        for (int p : model.clusters[c].member_ids) rep.cluster_ids[p] = static_cast<int>(c);
    for (int p : model.rejected_ids) rep.outlier_flags[p] = 1; // dropped by S_min

    for (std::size_t c = 0; c < model.clusters.size(); ++c) {
        Cluster& cl = model.clusters[c];
        ClusterDiagnostics diag;
        diag.seed_center = cl.seed_center;
        diag.seed_radius = cl.seed_radius;
        diag.core_size = cl.covered_ids.size();
        diag.member_size = cl.member_ids.size();

        // density start: twice the core's empirical density in the seed ball
        double r0 = cl.seed_radius;
        for (const auto& b : cl.core_balls) r0 = std::max(r0, b.radius);
        double delta0 = params.delta0;
        if (delta0 <= 0.0)
            delta0 = r0 > 0.0
                ? 2.0 * static_cast<double>(cl.covered_ids.size()) / unit_ball_volume(data.d, r0)
                : 1.0;
        double step = params.delta_step > 0.0 ? params.delta_step : delta0 / 50.0;

        auto calib = dmcg_calibrate(cl.covered_ids, dist, data.d, delta0, step);
        // grid exhaustion means the core cannot be connected at any tested
        // density (e.g. a 2-point core under the strict open-ball rule); fall
        // back to the density estimate rather than a near-zero floor value,
        // which would inflate every radius and shield the whole membership
        double delta_j = calib.hit_floor ? delta0 : calib.delta;
        cl.delta_j = delta_j;
        diag.delta_j = delta_j;
        diag.delta_floor = calib.hit_floor;
        rep.diagnostics.push_back(diag);

        // KS-CCD on the full membership at the calibrated density
        auto radii = ks_radii_subset(cl.member_ids, dist, delta_j, data.d);
        auto mcg = build_mcg_subset(cl.member_ids, radii, dist);
        auto comp = connected_components(cl.member_ids.size(), mcg.adj);

        std::vector<char> comp_has_core(cl.member_ids.size(), 0);
        std::vector<char> is_core_point(n, 0);
        for (int p : cl.covered_ids) is_core_point[p] = 1;
        int ncomp = 0;
        for (int cc : comp) ncomp = std::max(ncomp, cc + 1);
        std::vector<char> core_comp(ncomp, 0);
        for (std::size_t i = 0; i < cl.member_ids.size(); ++i)
            if (is_core_point[cl.member_ids[i]]) core_comp[comp[i]] = 1;
        for (std::size_t i = 0; i < cl.member_ids.size(); ++i) {
            int p = cl.member_ids[i];
            if (!is_core_point[p] && !core_comp[comp[i]]) rep.outlier_flags[p] = 1;
        }
    }

    rep.model = std::move(model);
    return rep;
}

DetectionReport run_detector(Detector which, const Dataset& data,
                             const DetectorParams& params) {
    data.validate();
    if (data.size() < 2) throw std::invalid_argument("detector: need >= 2 points");
    bool shaped = which == Detector::su || which == Detector::sun;
    CcdVariant variant =
        (which == Detector::ru || which == Detector::su) ? CcdVariant::RK : CcdVariant::UN;

    DistanceMatrix dist = distance_matrix(data);
    CcdParams cp;
    cp.alpha = params.alpha;
    cp.k_env_sims = params.k_env_sims;
    cp.nnd_sims = params.nnd_sims;
    cp.direction = params.un_direction;
    CatchDigraph g = build_ccd(data, dist, variant, cp);

    auto balls = dominating_balls(g, dist);
    std::vector<ClusterCandidate> candidates;
    std::size_t s_min = 0;
    if (shaped) {
        MutualCatchGraph mcg = build_mcg(g, dist);
        candidates = extend_coverage(g, mcg, balls, dist);
        s_min = params.s_min > 0
            ? params.s_min
            : static_cast<std::size_t>(
                  std::ceil(0.5 * params.contamination * static_cast<double>(data.size())));
        if (s_min < 1) s_min = 1;
    } else {
        for (const auto& b : balls) candidates.push_back(ball_candidate(b, g));
    }

    ClusterModel model = select_clusters(std::move(candidates), dist, s_min);
    assign_stragglers(model, dist);
    return detect_with_model(data, dist, std::move(model), params);
}

DetectionReport ru_mccd(const Dataset& data, const DetectorParams& p) {
    return run_detector(Detector::ru, data, p);
}
DetectionReport su_mccd(const Dataset& data, const DetectorParams& p) {
    return run_detector(Detector::su, data, p);
}
DetectionReport un_mccd(const Dataset& data, const DetectorParams& p) {
    return run_detector(Detector::un, data, p);
}
DetectionReport sun_mccd(const Dataset& data, const DetectorParams& p) {
    return run_detector(Detector::sun, data, p);
}

} // namespace ccd
