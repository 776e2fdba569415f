#include "ads/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ads/sampling.hpp"
#include "ads/series.hpp"

namespace ads {

namespace fs = std::filesystem;

std::string csv_real(double v) {
    char buf[48];
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

class CsvFile {
public:
    CsvFile(const fs::path& path, const std::string& header) : out_(path) {
        if (!out_) throw std::runtime_error("cannot open " + path.string());
        out_ << header << "\n";
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            out_ << (i ? "," : "") << cells[i];
        out_ << "\n";
    }

private:
    std::ofstream out_;
};

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    long ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start)
            .count();
    }
};

void write_manifest(const fs::path& out, const std::string& command,
                    const ExperimentConfig& cfg, const Timer& timer,
                    const std::string& extra) {
    std::ofstream m(out / "manifest.txt");
    m << kVersionTag << "\n";
    m << "command: " << command << "\n";
    m << "wall_clock_ms: " << timer.ms() << "\n";
#ifdef _OPENMP
    m << "threads: " << omp_get_max_threads() << "\n";
#else
    m << "threads: 1\n";
#endif
    if (!extra.empty()) m << extra;
    m << "--- config ---\n" << config_echo(cfg);
}

void export_orbit_csv(const OrbitTable& table, const fs::path& out) {
    CsvFile csv(out / "orbit.csv", "word,mu1,mu2,nu,shell");
    for (const auto& r : table.rows())
        csv.row({table.word_string(r), csv_real(r.mu.mu1), csv_real(r.mu.mu2),
                 csv_real(r.nu), std::to_string(r.shell)});
}

OrbitTable enumerate_from_config(const ExperimentConfig& cfg, int depth_override = -1) {
    const GeneratorSet gens = build_group(cfg);
    EnumerateOptions opt;
    opt.shell_r = cfg.shell_r;
    return enumerate(gens, depth_override > 0 ? depth_override : cfg.depth,
                     basepoint(), opt);
}

QuadricPoint config_point(const ExperimentConfig& cfg) {
    QuadricPoint p(cfg.point);
    if (std::fabs(p.q() - 1.0) > 1e-9)
        throw ConfigError("series point is off the quadric");
    return p;
}

std::string verdict_string(const SpectrumRow& row) {
    if (row.parity_excluded) return "parity_excluded";
    return row.certified ? "certified" : "not_certified";
}

}  // namespace

int run_sharpness(const ExperimentConfig& cfg, const fs::path& out) {
    Timer timer;
    const OrbitTable table = enumerate_from_config(cfg);
    CsvFile csv(out / "sharpness.csv",
                "depth,c_prime,C_prime,c,C,clip_lb,ratio_words,admissible");
    SharpnessEstimate last;
    for (int d = 1; d <= cfg.depth; ++d) {
        const SharpnessEstimate est = sharpness_fit(table, cfg.ratio_floor, 0.05, d);
        const double clip = clip_lower_bound(table, cfg.ratio_floor, d);
        csv.row({std::to_string(d), csv_real(est.c_prime), csv_real(est.C_prime),
                 csv_real(est.c), csv_real(est.C), csv_real(clip),
                 std::to_string(est.ratio_words), est.admissible ? "true" : "false"});
        last = est;
    }
    if (cfg.export_orbit) export_orbit_csv(table, out);
    write_manifest(out, "sharpness", cfg, timer,
                   std::string("admissible: ") + (last.admissible ? "true" : "false") +
                       "\n");
    return 0;
}

int run_count(const ExperimentConfig& cfg, const fs::path& out) {
    Timer timer;
    const OrbitTable table = enumerate_from_config(cfg);
    const QuadricPoint x0 = basepoint();
    CsvFile csv(out / "count.csv", "R,count,complete");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    long npts = 0;
    bool all_complete = true;
    for (int i = 0; i < cfg.r_count; ++i) {
        const double R = cfg.r_start + cfg.r_step * i;
        const BallCount bc = count_pseudoball(table, x0, R);
        csv.row({csv_real(R), std::to_string(bc.count), bc.complete ? "true" : "false"});
        all_complete = all_complete && bc.complete;
        if (bc.count > 0) {
            const double y = std::log(double(bc.count));
            sx += R; sy += y; sxx += R * R; sxy += R * y;
            ++npts;
        }
    }
    double slope = 0.0;
    if (npts >= 2) {
        const double denom = double(npts) * sxx - sx * sx;
        if (denom > 1e-12) slope = (double(npts) * sxy - sx * sy) / denom;
    }
    CsvFile sum(out / "count_summary.csv", "quantity,value,depth,complete");
    const std::string comp = all_complete ? "true" : "false";
    sum.row({"fitted_slope", csv_real(slope), std::to_string(cfg.depth), comp});
    try {
        const CriticalExponent ce = critical_exponent(table);
        const SharpnessEstimate sh = sharpness_fit(table, cfg.ratio_floor);
        sum.row({"delta_hat", csv_real(ce.delta_hat), std::to_string(cfg.depth), comp});
        sum.row({"c", csv_real(sh.c), std::to_string(cfg.depth), comp});
        sum.row({"slope_bound", csv_real(ce.delta_hat / sh.c + 0.1),
                 std::to_string(cfg.depth), comp});
        sum.row({"slope_within_bound",
                 slope <= ce.delta_hat / sh.c + 0.1 ? "1" : "0",
                 std::to_string(cfg.depth), comp});
    } catch (const std::runtime_error&) {
        sum.row({"delta_hat", "nan", std::to_string(cfg.depth), comp});
    }
    if (cfg.export_orbit) export_orbit_csv(table, out);
    write_manifest(out, "count", cfg, timer, "");
    return 0;
}

int run_spectrum(const ExperimentConfig& cfg, const fs::path& out) {
    Timer timer;
    const OrbitTable table = enumerate_from_config(cfg);
    const GrowthFit fit = growth_fit(table, basepoint(), cfg.shell_r);
    const SpectrumReport rep = spectrum_certified(table, fit, cfg.m, cfg.ell_max);
    CsvFile csv(out / "spectrum.csv",
                "ell,eigenvalue,identity_mass,remainder,tail,verdict,complete_flags,depth");
    for (const auto& row : rep.rows) {
        csv.row({std::to_string(row.ell), csv_real(row.eigenvalue),
                 std::to_string(row.cert.identity_mass), csv_real(row.cert.remainder),
                 csv_real(row.cert.tail), verdict_string(row),
                 row.parity_excluded ? "parity" : row.cert.caveats,
                 std::to_string(cfg.depth)});
    }
    CsvFile sum(out / "spectrum_summary.csv", "quantity,value");
    sum.row({"ell0", std::to_string(rep.ell0)});
    sum.row({"antipode", rep.antipode ? "true" : "false"});
    sum.row({"clip_lb", csv_real(rep.clip_lb)});
    sum.row({"trend_ell0_times_one_minus_clip_cubed", csv_real(rep.trend)});
    sum.row({"S", csv_real(fit.S)});
    sum.row({"U", csv_real(fit.U)});
    sum.row({"r_min", csv_real(fit.r_min.value_or(std::nan("")))});
    sum.row({"floor_a", csv_real(fit.floor.a)});
    if (cfg.export_orbit) export_orbit_csv(table, out);
    write_manifest(out, "spectrum", cfg, timer,
                   "ell0: " + std::to_string(rep.ell0) + "\n");
    return 0;
}

int run_deform(const ExperimentConfig& cfg, const fs::path& out) {
    Timer timer;
    if (cfg.kind != GroupSpecKind::schottky && cfg.kind != GroupSpecKind::pair)
        throw ConfigError("deform sweep requires a schottky or pair group");
    CsvFile csv(out / "deform.csv", "t,c_prime,c,clip_lb,r_min,ell0");
    int max_ell0 = -1, ell0_at_0 = -1;
    bool aborted = false;
    double aborted_at = 0.0;
    for (int i = 0; i < cfg.t_count; ++i) {
        ExperimentConfig step = cfg;
        step.deform_enabled = true;
        step.t = cfg.t_start + cfg.t_step * i;
        const OrbitTable table = enumerate_from_config(step);
        const SharpnessEstimate sh = sharpness_fit(table, cfg.ratio_floor);
        if (!sh.admissible) {
            aborted = true;
            aborted_at = step.t;
            break;
        }
        const GrowthFit fit = growth_fit(table, basepoint(), cfg.shell_r);
        const SpectrumReport rep = spectrum_certified(table, fit, cfg.m, cfg.ell_max);
        const double clip = clip_lower_bound(table, cfg.ratio_floor);
        csv.row({csv_real(step.t), csv_real(sh.c_prime), csv_real(sh.c), csv_real(clip),
                 csv_real(fit.r_min.value_or(std::nan(""))), std::to_string(rep.ell0)});
        max_ell0 = std::max(max_ell0, rep.ell0);
        if (i == 0) ell0_at_0 = rep.ell0;
    }
    CsvFile sum(out / "deform_summary.csv", "quantity,value");
    sum.row({"max_ell0", std::to_string(max_ell0)});
    sum.row({"ell0_at_t0", std::to_string(ell0_at_0)});
    sum.row({"aborted", aborted ? "true" : "false"});
    if (aborted) sum.row({"aborted_at_t", csv_real(aborted_at)});
    write_manifest(out, "deform", cfg, timer,
                   aborted ? "caveat: sweep aborted at inadmissible t\n" : "");
    return 0;
}

int run_laplacian(const ExperimentConfig& cfg, const fs::path& out) {
    Timer timer;
    const LaplacianConfig lap = calibrate(cfg.model, cfg.m, cfg.h, 2024);
    Rng rng(cfg.seed);
    CsvFile csv(out / "laplacian.csv",
                "model,m,ell,sign,eigenvalue,max_abs_residual,max_scaled_residual");
    for (int ell = cfg.ell_min; ell <= cfg.ell_max; ++ell) {
        if (cfg.model == Model::ads) {
            for (int sign : {+1, -1}) {
                const SpectralIndex idx{ell, sign, cfg.m};
                const double lam = eigenvalue_ads(cfg.m, ell);
                double worst_abs = 0.0, worst_scaled = 0.0;
                for (int n = 0; n < cfg.samples; ++n) {
                    const QuadricPoint x = rand_quadric(cfg.m, 3.0, rng);
                    const std::complex<double> fd = laplacian_fd(
                        [&](const QuadricPoint& p) { return psi_ads(idx, p).value(); },
                        x, lap);
                    const std::complex<double> want = lam * psi_ads(idx, x).value();
                    const double r = std::abs(fd - want);
                    worst_abs = std::max(worst_abs, r);
                    const double den = lam != 0.0 ? std::abs(want)
                                                  : std::abs(psi_ads(idx, x).value());
                    worst_scaled = std::max(worst_scaled, r / std::max(den, 1e-300));
                }
                csv.row({"ads", std::to_string(cfg.m), std::to_string(ell),
                         sign > 0 ? "+" : "-", csv_real(lam), csv_real(worst_abs),
                         csv_real(worst_scaled)});
            }
        } else {
            if (ell < 1) continue;
            const double lam = 2.0 * (ell + 1) * (ell - 2);
            double worst_abs = 0.0, worst_scaled = 0.0;
            for (int n = 0; n < cfg.samples; ++n) {
                Z4 z;
                do {
                    for (auto& w : z) w = {rng.normal(), rng.normal()};
                } while (h_form(z) < 0.05);
                const double target = rng.uniform(0.5, 2.0);
                const double scale = std::sqrt(target / h_form(z));
                for (auto& w : z) w *= scale;
                const double fd = laplacian_su22_fd(
                    [&](const Z4& p) { return psi_su22(ell, p); }, z, lap);
                const double want = lam * psi_su22(ell, z);
                const double r = std::fabs(fd - want);
                worst_abs = std::max(worst_abs, r);
                const double den =
                    lam != 0.0 ? std::fabs(want) : std::fabs(psi_su22(ell, z));
                worst_scaled = std::max(worst_scaled, r / std::max(den, 1e-300));
            }
            csv.row({"su22", "2", std::to_string(ell), "+", csv_real(lam),
                     csv_real(worst_abs), csv_real(worst_scaled)});
        }
    }
    write_manifest(out, "laplacian", cfg, timer,
                   "calibration_s: " + csv_real(lap.s) + "\n");
    return 0;
}

int run_series_eval(const ExperimentConfig& cfg, const fs::path& out) {
    Timer timer;
    const OrbitTable table = enumerate_from_config(cfg);
    const GrowthFit fit = growth_fit(table, basepoint(), cfg.shell_r);
    const QuadricPoint x = config_point(cfg);
    CsvFile csv(out / "series.csv",
                "ell,value_re,value_im,terms,max_term_log,tail_log_bound");
    for (int ell = std::max(2, cfg.ell_min); ell <= cfg.ell_max; ++ell) {
        const SeriesValue sv = poincare_eval(SpectralIndex{ell, +1, 2}, table, x, &fit);
        csv.row({std::to_string(ell), csv_real(sv.value.real()), csv_real(sv.value.imag()),
                 std::to_string(sv.terms_used), csv_real(sv.max_term_log),
                 csv_real(sv.tail_log_bound)});
    }
    if (cfg.export_orbit) export_orbit_csv(table, out);
    write_manifest(out, "series-eval", cfg, timer, "");
    return 0;
}

int run_command(const std::string& command, const ExperimentConfig& cfg,
                const fs::path& out) {
    fs::create_directories(out);
#ifdef _OPENMP
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
#endif
    try {
        if (command == "sharpness") return run_sharpness(cfg, out);
        if (command == "count") return run_count(cfg, out);
        if (command == "spectrum") return run_spectrum(cfg, out);
        if (command == "deform") return run_deform(cfg, out);
        if (command == "laplacian") return run_laplacian(cfg, out);
        if (command == "series-eval") return run_series_eval(cfg, out);
        std::fprintf(stderr, "unknown command: %s\n", command.c_str());
        return 2;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::runtime_error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
}

}  // namespace ads
