#include "ads/spectra.hpp"

#include <algorithm>
#include <vector>

#include "ads/sampling.hpp"

namespace ads {

double eigenvalue_ads(int m, int ell) {
    if (ell < 0) throw PreconditionError("eigenvalue_ads: ell must be >= 0");
    return double(ell) * double(ell - m);
}

SignedLog psi_ads_signed(const SpectralIndex& idx, double x1, double x2) {
    const double n2 = x1 * x1 + x2 * x2;
    if (n2 < 1e-30) throw PoleProximity("psi_ads: x1^2 + x2^2 below 1e-30");
    int sign = 1;
    // Canonical half-plane so psi(-x) = (-1)^ell psi(x) is exact.
    if (x1 < 0.0 || (x1 == 0.0 && x2 < 0.0)) {
        x1 = -x1;
        x2 = -x2;
        if (idx.ell & 1) sign = -1;
    }
    SignedLog out;
    out.log_mag = -0.5 * idx.ell * std::log(n2);
    double ph = -double(idx.ell) * std::atan2(idx.sign >= 0 ? x2 : -x2, x1);
    ph = std::remainder(ph, 2.0 * M_PI);
    if (ph <= -M_PI) ph += 2.0 * M_PI;
    out.phase = ph;
    out.sign = sign;
    return out;
}

LogComplex psi_ads(const SpectralIndex& idx, const QuadricPoint& x) {
    const SignedLog s = psi_ads_signed(idx, x.coords[0], x.coords[1]);
    LogComplex out;
    out.log_mag = s.log_mag;
    out.phase = s.phase;
    if (s.sign < 0) {
        out.phase += (out.phase <= 0.0) ? M_PI : -M_PI;
        if (out.phase <= -M_PI) out.phase += 2.0 * M_PI;
    }
    return out;
}

DecayBounds decay_bounds(int ell, double nu) {
    if (nu < 0.0) throw PreconditionError("decay_bounds: nu must be >= 0");
    DecayBounds b;
    b.loose_log = -0.5 * ell * std::log(0.5 * std::cosh(nu));
    b.tight_log = -double(ell) * std::log(std::cosh(nu / 4.0));
    return b;
}

namespace {

QuadricPoint project_to_quadric(const std::vector<double>& y) {
    double q = y[0] * y[0] + y[1] * y[1];
    for (std::size_t i = 2; i < y.size(); ++i) q -= y[i] * y[i];
    if (q <= 0.0)
        throw PreconditionError("degree-0 extension: stencil point has Q <= 0");
    const double inv = 1.0 / std::sqrt(q);
    std::vector<double> c(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) c[i] = y[i] * inv;
    return QuadricPoint(std::move(c));
}

}  // namespace

std::complex<double> laplacian_fd(
    const std::function<std::complex<double>(const QuadricPoint&)>& f,
    const QuadricPoint& x, const LaplacianConfig& cfg) {
    const int dim = x.m() + 2;
    const double h = cfg.h, inv_h2 = 1.0 / (h * h);
    const std::complex<double> f0 = f(x);
    std::complex<double> acc = 0.0;
    std::vector<double> y = x.coords;
    for (int i = 0; i < dim; ++i) {
        const double eps_i = (i < 2) ? 1.0 : -1.0;
        const double saved = y[std::size_t(i)];
        y[std::size_t(i)] = saved + h;
        const std::complex<double> fp = f(project_to_quadric(y));
        y[std::size_t(i)] = saved - h;
        const std::complex<double> fm = f(project_to_quadric(y));
        y[std::size_t(i)] = saved;
        acc += eps_i * (fp - 2.0 * f0 + fm) * inv_h2;
    }
    return cfg.s * acc;
}

double p_ell(int ell, std::complex<double> z1, std::complex<double> z2) {
    const double a1 = std::norm(z1), a2 = std::norm(z2);
    // sum_i binom(ell, i)^2 (-1)^i a1^{ell-i} a2^i, Horner-style in a2/a1
    double sum = 0.0;
    double binom = 1.0;  // binom(ell, i)
    for (int i = 0; i <= ell; ++i) {
        double term = binom * binom;
        if (i & 1) term = -term;
        sum += term * std::pow(a1, ell - i) * std::pow(a2, i);
        binom = binom * double(ell - i) / double(i + 1);
    }
    return sum;
}

double h_form(const Z4& z) {
    return std::norm(z[0]) + std::norm(z[1]) - std::norm(z[2]) - std::norm(z[3]);
}

double psi_su22(int ell, const Z4& z) {
    if (ell < 1) throw PreconditionError("psi_su22: ell must be >= 1");
    const double n12 = std::norm(z[0]) + std::norm(z[1]);
    if (n12 < 1e-30) throw PoleProximity("psi_su22: |z1|^2 + |z2|^2 below 1e-30");
    const double h = h_form(z);
    double hp = 1.0;
    for (int i = 0; i < ell + 1; ++i) hp *= h;
    return p_ell(ell, z[0], z[1]) * hp * std::pow(n12, -2 * ell - 1);
}

double laplacian_su22_fd(const std::function<double(const Z4&)>& f, const Z4& z,
                         const LaplacianConfig& cfg) {
    const double h = cfg.h, inv_h2 = 1.0 / (h * h);
    const double f0 = f(z);
    double acc = 0.0;
    for (int j = 0; j < 4; ++j) {
        const double sigma = (j < 2) ? -1.0 : 1.0;
        for (int part = 0; part < 2; ++part) {
            const std::complex<double> step =
                part == 0 ? std::complex<double>(h, 0.0) : std::complex<double>(0.0, h);
            Z4 zp = z, zm = z;
            zp[std::size_t(j)] += step;
            zm[std::size_t(j)] -= step;
            acc += sigma * 0.25 * (f(zp) - 2.0 * f0 + f(zm)) * inv_h2;
        }
    }
    return cfg.s * 2.0 * h_form(z) * acc;
}

LaplacianConfig calibrate(Model model, int m, double h, std::uint64_t seed) {
    LaplacianConfig cfg;
    cfg.model = model;
    cfg.m = m;
    cfg.h = h;
    cfg.s = 1.0;

    constexpr int kProbeEll = 3;
    const double lam = model == Model::ads ? eigenvalue_ads(m, kProbeEll)
                                           : 2.0 * (kProbeEll + 1) * (kProbeEll - 2);
    if (std::fabs(lam) < 1e-12)
        throw CalibrationError("calibrate: probe eigenvalue is zero");

    Rng rng(seed);
    constexpr int kSamples = 50;
    const double candidates[] = {1.0, -1.0, 0.5, -0.5, 2.0, -2.0};
    std::vector<std::vector<double>> residuals(6);

    LaplacianConfig unit = cfg;
    unit.s = 1.0;
    for (int n = 0; n < kSamples; ++n) {
        if (model == Model::ads) {
            const QuadricPoint x = rand_quadric(m, 2.0, rng);
            SpectralIndex idx{kProbeEll, +1, m};
            const std::complex<double> fd = laplacian_fd(
                [&](const QuadricPoint& p) { return psi_ads(idx, p).value(); }, x, unit);
            const std::complex<double> want = lam * psi_ads(idx, x).value();
            for (int c = 0; c < 6; ++c)
                residuals[std::size_t(c)].push_back(std::abs(candidates[c] * fd - want));
        } else {
            // sample z with h(z) in [0.5, 2]
            Z4 z;
            do {
                for (auto& w : z) w = {rng.normal(), rng.normal()};
            } while (h_form(z) < 0.05);
            const double target = rng.uniform(0.5, 2.0);
            const double scale = std::sqrt(target / h_form(z));
            for (auto& w : z) w *= scale;
            const double raw = laplacian_su22_fd(
                [&](const Z4& p) { return psi_su22(kProbeEll, p); }, z, unit);
            const double want = lam * psi_su22(kProbeEll, z);
            for (int c = 0; c < 6; ++c)
                residuals[std::size_t(c)].push_back(std::fabs(candidates[c] * raw - want));
        }
    }

    double best = 1e300, second = 1e300;
    int best_c = 0;
    for (int c = 0; c < 6; ++c) {
        auto& v = residuals[std::size_t(c)];
        std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
        const double med = v[v.size() / 2];
        if (med < best) {
            second = best;
            best = med;
            best_c = c;
        } else if (med < second) {
            second = med;
        }
    }
    if (second < 1e300 && best > 0.9 * second)
        throw CalibrationError("calibrate: two candidates tie within 10%");
    cfg.s = candidates[best_c];
    return cfg;
}

}  // namespace ads
