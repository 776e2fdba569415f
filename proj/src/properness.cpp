#include "ads/properness.hpp"

#include <algorithm>
#include <cmath>

namespace ads {

namespace {

void require_words(const OrbitTable& table) {
    if (table.size() <= 1) throw EmptyTable("orbit table has no nontrivial words");
}

double max_ratio_above_floor(const OrbitTable& table, double floor, int max_len,
                             long* n_used) {
    double best = 0.0;
    long used = 0;
    for (const auto& r : table.rows()) {
        if (r.word_length == 0) continue;
        if (max_len >= 0 && r.word_length > max_len) continue;
        if (r.mu.mu1 > floor) {
            best = std::max(best, r.mu.mu2 / r.mu.mu1);
            ++used;
        }
    }
    if (n_used) *n_used = used;
    return best;
}

}  // namespace

SharpnessEstimate sharpness_fit(const OrbitTable& table, double floor, double margin,
                                int max_len) {
    require_words(table);
    SharpnessEstimate est;
    est.depth = max_len >= 0 ? max_len : table.depth();
    est.floor = floor;
    est.c_prime = max_ratio_above_floor(table, floor, max_len, &est.ratio_words);
    double cp_excess = 0.0;
    for (const auto& r : table.rows()) {
        if (r.word_length == 0) continue;
        if (max_len >= 0 && r.word_length > max_len) continue;
        cp_excess = std::max(cp_excess, r.mu.mu2 - est.c_prime * r.mu.mu1);
    }
    est.C_prime = std::max(cp_excess, 0.0);
    est.c = (1.0 - est.c_prime) / std::sqrt(2.0 * (1.0 + est.c_prime * est.c_prime));
    est.C = est.C_prime / std::sqrt(2.0);
    est.admissible = est.c_prime < 1.0 - margin;
    return est;
}

double clip_lower_bound(const OrbitTable& table, double floor, int max_len) {
    require_words(table);
    return max_ratio_above_floor(table, floor, max_len, nullptr);
}

LinearFloor linear_floor(const OrbitTable& table) {
    // min over enumerated lengths of (min nu at that length) / length
    std::vector<double> min_nu(std::size_t(table.depth()) + 1, 1e300);
    for (const auto& r : table.rows()) {
        if (r.word_length == 0) continue;
        min_nu[r.word_length] = std::min(min_nu[r.word_length], r.nu);
    }
    LinearFloor f;
    f.a = 1e300;
    for (std::size_t len = 1; len < min_nu.size(); ++len) {
        if (min_nu[len] > 1e299) continue;
        f.a = std::min(f.a, min_nu[len] / double(len));
    }
    if (f.a > 1e299) f.a = 0.0;  // no nontrivial words
    f.positive = f.a > 1e-9;
    if (!f.positive) f.a = 0.0;
    return f;
}

BallCount count_pseudoball(const OrbitTable& table, const QuadricPoint& x, double R) {
    if (R <= 0.0) throw PreconditionError("count_pseudoball: R must be positive");
    BallCount out;
    const bool at_base = x.coords == table.base().coords;
    const Mat2 xm = quadric_to_matrix(x);
    const auto& rows = table.rows();
    long count = 0;
    int degenerate = 0;
    const std::int64_t n = static_cast<std::int64_t>(rows.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(+ : count) \
    reduction(| : degenerate) if (n > 4096)
#endif
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            const double nu_at_x =
                at_base ? rows[i].nu
                        : mu_product(rows[i].g.g1 * xm * rows[i].g.g2.inverse());
            if (nu_at_x < R) ++count;
        } catch (const PreconditionError&) {
            degenerate = 1;
        }
    }
    if (degenerate)
        throw PreconditionError("count_pseudoball: degenerate orbit product");
    out.count = count;
    const LinearFloor f = linear_floor(table);
    const double displacement = nu_point(x);
    out.complete = table.gens().k() == 0 ||
                   (f.positive && f.a * (table.depth() + 1) - f.b > R + displacement);
    return out;
}

CriticalExponent critical_exponent(const OrbitTable& table) {
    if (table.depth() < 6) throw InsufficientDepth("critical_exponent: depth < 6");
    std::vector<double> radii;
    radii.reserve(table.size());
    for (const auto& r : table.rows()) radii.push_back(mu_norm_a(r.mu));
    std::sort(radii.begin(), radii.end());
    const double rmax = radii.back();
    CriticalExponent ce;
    if (rmax < 1e-12) return ce;  // trivial group
    ce.window_lo = 0.2 * rmax;
    ce.window_hi = 0.9 * rmax;
    // log(count of elements with ||mu||_a <= R) sampled at the data points
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    long n = 0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double R = radii[i];
        if (R < ce.window_lo || R > ce.window_hi) continue;
        const double y = std::log(double(i + 1));
        sx += R; sy += y; sxx += R * R; sxy += R * y;
        ++n;
    }
    if (n < 2) throw InsufficientDepth("critical_exponent: too few points in window");
    const double denom = double(n) * sxx - sx * sx;
    ce.delta_hat = std::max(0.0, (double(n) * sxy - sx * sy) / denom);
    const double intercept = (sy - ce.delta_hat * sx) / double(n);
    double ss = 0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double R = radii[i];
        if (R < ce.window_lo || R > ce.window_hi) continue;
        const double e = std::log(double(i + 1)) - (ce.delta_hat * R + intercept);
        ss += e * e;
    }
    ce.residual = std::sqrt(ss / double(n));
    return ce;
}

GrowthFit growth_fit(const OrbitTable& table, const QuadricPoint& x, double r) {
    if (r <= 0.0) throw PreconditionError("growth_fit: shell width must be positive");
    GrowthFit fit;
    fit.r = r;
    fit.floor = linear_floor(table);

    const bool reuse =
        x.coords == table.base().coords && std::fabs(r - table.shell_r()) < 1e-15;
    const Mat2 xm = quadric_to_matrix(x);
    std::vector<long> shells;
    double rmin = 1e300;
    bool have_nontrivial = false;
    for (const auto& row : table.rows()) {
        const double nu_at_x =
            reuse ? row.nu : mu_product(row.g.g1 * xm * row.g.g2.inverse());
        const long n = reuse ? row.shell : long(std::floor(nu_at_x / r));
        if (n >= long(shells.size())) shells.resize(std::size_t(n) + 1, 0);
        ++shells[std::size_t(n)];
        if (row.word_length > 0) {
            have_nontrivial = true;
            if (nu_at_x > 1e-9) rmin = std::min(rmin, nu_at_x);
        }
    }
    fit.shells = std::move(shells);
    fit.r_min_required = have_nontrivial;
    if (rmin < 1e299) fit.r_min = rmin;

    // U: least-squares slope of log c(n) over nonzero shells n >= 1;
    // S: smallest constant making S e^{U n} dominate every enumerated shell.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    long npts = 0;
    for (std::size_t n = 1; n < fit.shells.size(); ++n) {
        if (fit.shells[n] <= 0) continue;
        const double xn = double(n), yn = std::log(double(fit.shells[n]));
        sx += xn; sy += yn; sxx += xn * xn; sxy += xn * yn;
        ++npts;
    }
    if (npts >= 2) {
        const double denom = double(npts) * sxx - sx * sx;
        if (denom > 1e-12) fit.U = std::max(0.0, (double(npts) * sxy - sx * sy) / denom);
    }
    fit.S = 1.0;
    for (std::size_t n = 0; n < fit.shells.size(); ++n) {
        if (fit.shells[n] <= 0) continue;
        fit.S = std::max(fit.S, double(fit.shells[n]) * std::exp(-fit.U * double(n)));
    }
    return fit;
}

bool dirichlet_member(const QuadricPoint& x, const OrbitTable& table) {
    const double nx = nu_point(x);
    const Mat2 xm = quadric_to_matrix(x);
    for (const auto& row : table.rows()) {
        if (row.word_length == 0 && !row.antipodal) continue;
        const double ny = mu_product(row.g.g1 * xm * row.g.g2.inverse());
        if (nx > ny + 1e-12) return false;
    }
    return true;
}

}  // namespace ads
