#include "ccd/cli.hpp"

#include "ccd/csr.hpp"
#include "ccd/metrics.hpp"
#include "ccd/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

namespace ccd::cli {

static std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

static std::string fmt6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
    for (int k = 0; k < data.d; ++k) out << (k ? ",x" : "x") << (k + 1);
    if (data.labels) out << ",label";
    out << "\n";
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double* p = data.point(i);
        for (int k = 0; k < data.d; ++k) {
            if (k) out << ",";
            out << fmt(p[k]);
        }
        if (data.labels) out << "," << (*data.labels)[i];
        out << "\n";
    }
}

Dataset read_dataset_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("CSV: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.push_back(cell);
    }
    bool has_label = !header.empty() && header.back() == "label";
    int d = static_cast<int>(header.size()) - (has_label ? 1 : 0);
    if (d < 1) throw std::invalid_argument("CSV: no feature columns in header");

    Dataset data;
    data.d = d;
    if (has_label) data.labels = std::vector<int>{};
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        int col = 0;
        while (std::getline(ss, cell, ',')) {
            ++col;
            try {
                std::size_t used = 0;
                double v = std::stod(cell, &used);
                if (used != cell.size()) throw std::invalid_argument("trailing junk");
                if (col <= d) data.coords.push_back(v);
                else if (has_label && col == d + 1) data.labels->push_back(v != 0.0 ? 1 : 0);
                else throw std::invalid_argument("extra column");
            } catch (const std::exception&) {
                throw std::invalid_argument("CSV row " + std::to_string(row) + ", column " +
                                            std::to_string(col) + ": bad cell '" + cell + "'");
            }
        }
        if (col != d + (has_label ? 1 : 0))
            throw std::invalid_argument("CSV row " + std::to_string(row) + ": expected " +
                                        std::to_string(d + (has_label ? 1 : 0)) + " columns");
    }
    data.validate();
    return data;
}

Dataset make_preset_dataset(const GenerateConfig& cfg) {
    if (cfg.preset == "uni-general" || cfg.preset == "gau-general") {
        SceneSpec spec;
        spec.d = cfg.d;
        spec.n = cfg.n;
        spec.n_clusters = cfg.clusters;
        spec.cluster_kind =
            cfg.preset == "uni-general" ? ClusterKind::uniform : ClusterKind::gaussian;
        spec.contamination = cfg.contamination;
        spec.noise_level = cfg.noise_level;
        spec.collective_shift = cfg.collective_shift;
        spec.seed = cfg.seed;
        if (cfg.outlier_rule == "annulus") spec.outlier_rule = OutlierRule::annulus;
        else if (cfg.outlier_rule == "collective") spec.outlier_rule = OutlierRule::collective;
        else if (cfg.outlier_rule != "big-sphere")
            throw std::invalid_argument("--outlier-rule: unknown rule " + cfg.outlier_rule);
        return gen_scene(spec);
    }
    ProcessSpec spec;
    spec.d = cfg.d;
    spec.seed = cfg.seed;
    if (cfg.preset == "matern") {
        spec.kind = ProcessKind::matern;
        spec.kappa = 6.0;
        spec.sigma = 0.1;
    } else if (cfg.preset == "thomas") {
        spec.kind = ProcessKind::thomas;
        spec.kappa = 6.0;
        spec.sigma = 0.07;
    } else if (cfg.preset == "mixed") {
        spec.kind = ProcessKind::mixed;
        spec.kappa = 3.0;
        spec.sigma = 0.1;
        spec.sigma2 = 0.07;
    } else {
        throw std::invalid_argument("--preset: unknown preset " + cfg.preset);
    }
    spec.mu = neyman_scott_mu(spec.kind, cfg.d);
    return gen_neyman_scott(spec);
}

int cmd_generate(const GenerateConfig& cfg) {
    Dataset data = make_preset_dataset(cfg);
    std::ofstream out(cfg.out_path);
    if (!out) throw std::runtime_error("cannot open output file " + cfg.out_path);
    write_dataset_csv(out, data);
    return 0;
}

int cmd_detect(const DetectConfig& cfg) {
    std::ifstream in(cfg.in_path);
    if (!in) throw std::invalid_argument("cannot open input file " + cfg.in_path);
    Dataset data = read_dataset_csv(in);
    Detector which = detector_from_name(cfg.detector);
    DetectionReport rep = run_detector(which, data, cfg.params);

    if (!cfg.out_path.empty()) {
        std::ofstream out(cfg.out_path);
        if (!out) throw std::runtime_error("cannot open output file " + cfg.out_path);
        out << "flag,cluster\n";
        for (std::size_t i = 0; i < data.size(); ++i)
            out << rep.outlier_flags[i] << "," << rep.cluster_ids[i] << "\n";
    }

    nlohmann::json j;
    j["detector"] = detector_name(which);
    j["n"] = data.size();
    j["d"] = data.d;
    j["n_clusters"] = rep.model.clusters.size();
    j["n_flagged"] = std::count(rep.outlier_flags.begin(), rep.outlier_flags.end(), 1);
    j["shared_component"] = rep.shared_component;
    j["zero_radius_fallback"] = rep.zero_radius_fallback;
    j["rejected_by_smin"] = rep.rejected_by_smin;
    nlohmann::json clusters = nlohmann::json::array();
    for (const auto& dgn : rep.diagnostics) {
        clusters.push_back({{"seed_center", dgn.seed_center},
                            {"seed_radius", dgn.seed_radius},
                            {"delta_j", dgn.delta_j},
                            {"delta_floor", dgn.delta_floor},
                            {"core_size", dgn.core_size},
                            {"member_size", dgn.member_size}});
    }
    j["clusters"] = clusters;
    if (data.labels) {
        Scores s = scores(confusion(*data.labels, rep.outlier_flags), 2.0);
        j["scores"] = {{"tpr", s.tpr}, {"tnr", s.tnr}, {"ba", s.ba}, {"f2", s.f_beta}};
    }
    if (!cfg.json_path.empty()) {
        std::ofstream out(cfg.json_path);
        if (!out) throw std::runtime_error("cannot open output file " + cfg.json_path);
        out << j.dump(2) << "\n";
    } else {
        std::cout << j.dump(2) << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// bench

namespace {

struct BenchTask {
    std::size_t setting_idx; // row in the output
    std::size_t dataset_key; // preset x d x n combo (shared across detectors)
    std::size_t rep;
    GenerateConfig gen;
    Detector detector;
};

struct RepResult {
    Scores s;
    bool ok = false;
};

} // namespace

int cmd_bench(const BenchConfig& cfg) {
    if (cfg.reps < 1) throw std::invalid_argument("--reps must be >= 1");
    struct Setting {
        GenerateConfig gen;
        Detector detector;
        std::string preset, det_name;
        std::size_t dataset_key;
    };
    std::vector<Setting> settings;
    std::size_t key = 0;
    for (const auto& preset : cfg.presets)
        for (int d : cfg.dims)
            for (std::size_t n : cfg.sizes) {
                for (const auto& det : cfg.detectors) {
                    Setting st;
                    st.gen.preset = preset;
                    st.gen.d = d;
                    st.gen.n = n;
                    st.gen.clusters = cfg.clusters;
                    st.gen.contamination = cfg.contamination;
                    st.detector = detector_from_name(det);
                    st.preset = preset;
                    st.det_name = detector_name(st.detector);
                    st.dataset_key = key;
                    settings.push_back(st);
                }
                ++key;
            }

    std::vector<BenchTask> tasks;
    for (std::size_t s = 0; s < settings.size(); ++s)
        for (std::size_t r = 0; r < cfg.reps; ++r) {
            BenchTask t;
            t.setting_idx = s;
            t.dataset_key = settings[s].dataset_key;
            t.rep = r;
            t.gen = settings[s].gen;
            t.detector = settings[s].detector;
            tasks.push_back(t);
        }

    std::vector<RepResult> results(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            BenchTask& t = tasks[i];
            try {
                GenerateConfig g = t.gen;
                // dataset stream depends on (seed, dataset combo, rep) only, so
                // every detector sees the same data and scheduling cannot matter
                g.seed = mix_seed(mix_seed(cfg.seed, t.dataset_key), t.rep);
                Dataset data = make_preset_dataset(g);
                DetectorParams params;
                params.contamination = cfg.contamination;
                DetectionReport rep = run_detector(t.detector, data, params);
                results[i].s = scores(confusion(*data.labels, rep.outlier_flags), cfg.beta);
                results[i].ok = true;
            } catch (const std::exception&) {
                results[i].ok = false;
            }
        }
    };
    std::size_t jobs = std::max<std::size_t>(1, cfg.jobs);
    // warm the reference caches serially: lazily racing many builders is safe
    // but slower on small machines
    if (jobs > 1) {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < jobs; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    } else {
        worker();
    }

    struct Agg {
        std::vector<Scores> ok;
        std::size_t failures = 0;
    };
    std::vector<Agg> agg(settings.size());
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (results[i].ok) agg[tasks[i].setting_idx].ok.push_back(results[i].s);
        else ++agg[tasks[i].setting_idx].failures;
    }

    std::ostringstream csv;
    csv << "setting,detector,d,n,reps,tpr,tpr_se,tnr,tnr_se,ba,f2,failures\n";
    for (std::size_t s = 0; s < settings.size(); ++s) {
        const auto& a = agg[s];
        auto mean_of = [&](auto get) {
            double m = 0.0;
            for (const auto& sc : a.ok) m += get(sc);
            return a.ok.empty() ? 0.0 : m / static_cast<double>(a.ok.size());
        };
        auto se_of = [&](auto get, double mean) {
            if (a.ok.size() < 2) return std::string();
            double ss = 0.0;
            for (const auto& sc : a.ok) {
                double dv = get(sc) - mean;
                ss += dv * dv;
            }
            double sd = std::sqrt(ss / static_cast<double>(a.ok.size() - 1));
            return fmt6(sd / std::sqrt(static_cast<double>(a.ok.size())));
        };
        double tpr = mean_of([](const Scores& x) { return x.tpr; });
        double tnr = mean_of([](const Scores& x) { return x.tnr; });
        double ba = mean_of([](const Scores& x) { return x.ba; });
        double f2 = mean_of([](const Scores& x) { return x.f_beta; });
        csv << settings[s].preset << "," << settings[s].det_name << "," << settings[s].gen.d
            << "," << settings[s].gen.n << "," << cfg.reps << "," << fmt6(tpr) << ","
            << se_of([](const Scores& x) { return x.tpr; }, tpr) << "," << fmt6(tnr) << ","
            << se_of([](const Scores& x) { return x.tnr; }, tnr) << "," << fmt6(ba) << ","
            << fmt6(f2) << "," << a.failures << "\n";
    }

    if (!cfg.out_path.empty()) {
        std::ofstream out(cfg.out_path);
        if (!out) throw std::runtime_error("cannot open output file " + cfg.out_path);
        out << csv.str();
    } else {
        std::cout << csv.str();
    }

    if (!cfg.svg_path.empty()) {
        // simple grouped bar chart of TPR / TNR per row
        std::ofstream out(cfg.svg_path);
        if (!out) throw std::runtime_error("cannot open output file " + cfg.svg_path);
        std::size_t m = settings.size();
        int w = 80 * static_cast<int>(m) + 60, h = 260;
        out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h
            << "'>\n";
        for (std::size_t s = 0; s < m; ++s) {
            double tpr = 0.0, tnr = 0.0;
            for (const auto& sc : agg[s].ok) {
                tpr += sc.tpr;
                tnr += sc.tnr;
            }
            if (!agg[s].ok.empty()) {
                tpr /= agg[s].ok.size();
                tnr /= agg[s].ok.size();
            }
            int x = 50 + 80 * static_cast<int>(s);
            out << "<rect x='" << x << "' y='" << 220 - 200 * tpr << "' width='30' height='"
                << 200 * tpr << "' fill='#4477aa'/>\n";
            out << "<rect x='" << x + 32 << "' y='" << 220 - 200 * tnr << "' width='30' height='"
                << 200 * tnr << "' fill='#cc6677'/>\n";
            out << "<text x='" << x << "' y='240' font-size='10'>" << settings[s].det_name
                << "</text>\n";
        }
        out << "</svg>\n";
    }
    return 0;
}

int cmd_normalize(const NormalizeConfig& cfg) {
    std::ifstream in(cfg.in_path);
    if (!in) throw std::invalid_argument("cannot open input file " + cfg.in_path);
    Dataset data = read_dataset_csv(in);
    std::size_t n = data.size();
    if (n < 2) throw std::invalid_argument("normalize: need >= 2 rows");

    auto median_of = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        std::size_t m = v.size();
        return m % 2 == 1 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
    };
    for (int k = 0; k < data.d; ++k) {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = data.point(i)[k];
        double med = median_of(col);
        std::vector<double> dev(n);
        for (std::size_t i = 0; i < n; ++i) dev[i] = std::abs(col[i] - med);
        double madn = median_of(dev) / 0.6745;
        if (madn == 0.0) {
            std::cerr << "warning: feature x" << (k + 1) << " is constant; emitting zeros\n";
            for (std::size_t i = 0; i < n; ++i) data.point(i)[k] = 0.0;
        } else {
            for (std::size_t i = 0; i < n; ++i) data.point(i)[k] = (col[i] - med) / madn;
        }
    }
    std::ofstream out(cfg.out_path);
    if (!out) throw std::runtime_error("cannot open output file " + cfg.out_path);
    write_dataset_csv(out, data);
    return 0;
}

int cmd_csr_test(const CsrTestConfig& cfg) {
    Dataset data;
    if (!cfg.in_path.empty()) {
        std::ifstream in(cfg.in_path);
        if (!in) throw std::invalid_argument("cannot open input file " + cfg.in_path);
        data = read_dataset_csv(in);
    } else {
        Rng rng(cfg.seed);
        data.d = cfg.d;
        data.coords.resize(cfg.n * cfg.d);
        for (std::size_t i = 0; i < cfg.n; ++i) unit_ball_point(rng, cfg.d, data.point(i));
    }
    std::size_t n = data.size();
    if (n < 2) throw std::invalid_argument("csr-test: need >= 2 points");

    // normalize into the unit ball: centroid shift, max-norm scale
    std::vector<double> centroid(data.d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (int k = 0; k < data.d; ++k) centroid[k] += data.point(i)[k];
    for (double& c : centroid) c /= static_cast<double>(n);
    double max_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (int k = 0; k < data.d; ++k) data.point(i)[k] -= centroid[k];
        max_norm = std::max(max_norm, euclidean(data.point(i), std::vector<double>(data.d, 0.0).data(), data.d));
    }
    if (max_norm > 0.0)
        for (double& v : data.coords) v /= max_norm;

    nlohmann::json j;
    j["statistic"] = cfg.statistic;
    j["n"] = n;
    j["d"] = data.d;
    j["alpha"] = cfg.alpha;
    if (cfg.statistic == "ripley") {
        Rng rng(mix_seed(cfg.seed, 0x656e76ULL));
        KEnvelope env = build_k_envelope(n, data.d, default_t_grid(), 1000, cfg.alpha, rng);
        CsrVerdict v = srmct_ripley(data, env);
        j["verdict"] = v == CsrVerdict::retain ? "retain_csr" : "reject_csr";
    } else if (cfg.statistic == "nnd") {
        auto& ref = shared_nnd_reference(data.d);
        auto [mean_nnd, median_nnd] = nnd_stats(data, 1.0);
        auto res = srmct_nnd_stats(mean_nnd, median_nnd, n, ref, cfg.alpha);
        j["verdict"] = res.verdict == CsrVerdict::retain ? "retain_csr" : "reject_csr";
        j["p_mean"] = res.p_mean;
        j["p_median"] = res.p_median;
        j["degenerate"] = res.degenerate;
    } else {
        throw std::invalid_argument("--statistic: must be ripley or nnd");
    }
    if (!cfg.out_path.empty()) {
        std::ofstream out(cfg.out_path);
        if (!out) throw std::runtime_error("cannot open output file " + cfg.out_path);
        out << j.dump(2) << "\n";
    } else {
        std::cout << j.dump(2) << "\n";
    }
    return 0;
}

int dispatch_errors(const std::function<int()>& body) {
    try {
        return body();
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace ccd::cli
