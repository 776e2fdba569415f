#include "ads/series.hpp"

#include <algorithm>
#include <cmath>

#include "ads/sampling.hpp"

namespace ads {

namespace {

constexpr std::size_t kBlock = 4096;
constexpr double kXcTol = 1e-9;

// Scaled compensated accumulator: value = e^{scale_log} (re + i im).
struct ScaledSum {
    double scale_log = -HUGE_VAL;
    double re = 0.0, im = 0.0;
    double c_re = 0.0, c_im = 0.0;  // Kahan compensation
    double max_term_log = -HUGE_VAL;
    long terms = 0;

    void rescale_to(double new_log) {
        const double f = std::exp(scale_log - new_log);
        re *= f; im *= f; c_re *= f; c_im *= f;
        scale_log = new_log;
    }

    void add(const SignedLog& t) {
        ++terms;
        max_term_log = std::max(max_term_log, t.log_mag);
        if (t.log_mag > scale_log) {
            if (scale_log == -HUGE_VAL) {
                scale_log = t.log_mag;
                re = im = c_re = c_im = 0.0;
            } else {
                rescale_to(t.log_mag);
            }
        }
        const std::complex<double> v = t.scaled_value(scale_log);
        // Kahan on both components
        double y = v.real() - c_re, s = re + y;
        c_re = (s - re) - y;
        re = s;
        y = v.imag() - c_im;
        s = im + y;
        c_im = (s - im) - y;
        im = s;
    }

    void merge(const ScaledSum& o) {
        terms += o.terms;
        max_term_log = std::max(max_term_log, o.max_term_log);
        if (o.scale_log == -HUGE_VAL) return;
        if (scale_log == -HUGE_VAL) {
            scale_log = o.scale_log;
            re = o.re; im = o.im;
            return;
        }
        const double target = std::max(scale_log, o.scale_log);
        rescale_to(target);
        const double f = std::exp(o.scale_log - target);
        re += f * o.re;
        im += f * o.im;
    }

    std::complex<double> value() const {
        if (scale_log == -HUGE_VAL) return {0.0, 0.0};
        const double s = std::exp(scale_log);
        return {s * re, s * im};
    }
};

// Point gamma^{-1} . x in the matrix model: g1^{-1} * X * g2; only the first
// two quadric coordinates feed psi.
inline void moved_coords(const GroupElement& g, const Mat2& xm, double& x1, double& x2) {
    const Mat2 y = g.g1.inverse() * xm * g.g2;
    x1 = 0.5 * (y.a + y.d);
    x2 = 0.5 * (y.c - y.b);
}

ScaledSum sum_terms(const SpectralIndex& idx, const OrbitTable& table, const Mat2& xm,
                    bool parallel) {
    const auto& rows = table.rows();
    const std::size_t n = rows.size();
    const std::size_t nblocks = (n + kBlock - 1) / kBlock;
    std::vector<ScaledSum> partial(nblocks);
    const std::int64_t nb = static_cast<std::int64_t>(nblocks);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel && nb > 1)
#endif
    for (std::int64_t b = 0; b < nb; ++b) {
        ScaledSum acc;
        const std::size_t lo = std::size_t(b) * kBlock;
        const std::size_t hi = std::min(n, lo + kBlock);
        for (std::size_t i = lo; i < hi; ++i) {
            double x1, x2;
            moved_coords(rows[i].g, xm, x1, x2);
            acc.add(psi_ads_signed(idx, x1, x2));
        }
        partial[std::size_t(b)] = acc;
    }
    ScaledSum total;
    for (const auto& p : partial) total.merge(p);
    return total;
}

}  // namespace

double tail_bound_log(int ell, const GrowthFit& fit, long n0) {
    const double q = fit.U - double(ell) * fit.r / 4.0;
    if (!(q < -1e-15)) return HUGE_VAL;
    // sum_{n >= n0} S e^{Un} 2^ell e^{-ell r n / 4} = S 2^ell e^{q n0} / (1 - e^q)
    return std::log(fit.S) + double(ell) * std::log(2.0) + q * double(n0) -
           std::log1p(-std::exp(q));
}

std::optional<long> first_unenumerated_shell(const OrbitTable& table,
                                             const GrowthFit& fit) {
    if (table.gens().k() == 0) return std::nullopt;  // finite group, no tail
    if (!fit.floor.positive) return std::nullopt;
    const double nu_min_out = fit.floor.a * double(table.depth() + 1) - fit.floor.b;
    return std::max<long>(1, long(std::floor(nu_min_out / fit.r)));
}

SeriesValue poincare_eval(const SpectralIndex& idx, const OrbitTable& table,
                          const QuadricPoint& x, const GrowthFit* fit_in) {
    if (idx.ell < 2) throw PreconditionError("poincare_eval: ell must be >= 2");
    if (idx.m != 2) throw PreconditionError("poincare_eval: series requires m = 2");
    GrowthFit local;
    const GrowthFit* fit = fit_in;
    if (!fit) {
        local = growth_fit(table, table.base(), table.shell_r());
        fit = &local;
    }

    SeriesValue out;
    const Mat2 xm = quadric_to_matrix(x);
    ScaledSum total = sum_terms(idx, table, xm, true);
    out.value = total.value();
    out.terms_used = total.terms;
    out.max_term_log = total.max_term_log;

    if (table.gens().k() == 0) {
        out.tail_log_bound = -HUGE_VAL;  // whole group enumerated
        return out;
    }
    const auto n0 = first_unenumerated_shell(table, *fit);
    if (!n0) {
        out.tail_log_bound = HUGE_VAL;
        return out;
    }
    // Point shift: unenumerated words reach x with nu eroded by at most the
    // mu-displacement of x from the basepoint.
    const double displacement = nu_point(x) + nu_point(table.base());
    const long shift = long(std::ceil(displacement / fit->r));
    const long n_eff = std::max<long>(1, *n0 - shift);
    out.tail_log_bound =
        tail_bound_log(idx.ell, *fit, n_eff);
    if (out.tail_log_bound == HUGE_VAL)
        throw DivergentAtDepth("poincare_eval: ell below the geometric floor");
    return out;
}

int ell_threshold_closed(double S, double U, double T) {
    if (S < 1.0 || T <= 0.0 || U < 0.0)
        throw PreconditionError("ell_threshold_closed: need S >= 1, T > 0, U >= 0");
    const double R = (std::log(2.0 * S) + U) / std::log(std::cosh(T));
    return int(std::floor(R)) + 1;
}

NonvanishingCertificate certify_nonzero(const SpectralIndex& idx,
                                        const OrbitTable& table,
                                        const GrowthFit& fit) {
    if (nu_point(table.base()) > 1e-12)
        throw PreconditionError("certify_nonzero: table must be enumerated at x0");
    NonvanishingCertificate cert;
    cert.ell = idx.ell;
    cert.depth = table.depth();

    const auto& rows = table.rows();
    long mass_plus = 0, mass_minus = 0;
    int bad_xc = 0;
    // Remainder: exact |psi| over off-X_c rows, compensated blockwise sum.
    const std::size_t n = rows.size();
    const std::size_t nblocks = (n + kBlock - 1) / kBlock;
    std::vector<double> partial(nblocks, 0.0);
    const std::int64_t nb = static_cast<std::int64_t>(nblocks);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) \
    reduction(+ : mass_plus, mass_minus) reduction(| : bad_xc) if (nb > 1)
#endif
    for (std::int64_t b = 0; b < nb; ++b) {
        double acc = 0.0, comp = 0.0;
        const std::size_t lo = std::size_t(b) * kBlock;
        const std::size_t hi = std::min(n, lo + kBlock);
        for (std::size_t i = lo; i < hi; ++i) {
            const OrbitRow& r = rows[i];
            if (r.nu < kXcTol) {
                // gamma . x0 in matrix form is g1 g2^{-1}; it must be +-x0
                // for the built group classes.
                const Mat2 y = r.g.g1 * r.g.g2.inverse();
                const double x1 = 0.5 * (y.a + y.d);
                const double x2 = 0.5 * (y.c - y.b);
                if (std::fabs(std::fabs(x1) - 1.0) > kXcTol || std::fabs(x2) > kXcTol) {
                    bad_xc = 1;
                    continue;
                }
                if (x1 > 0.0 || idx.ell % 2 == 0)
                    ++mass_plus;
                else
                    ++mass_minus;
            } else {
                // |psi| = (x1^2 + x2^2)^{-ell/2} = ((1 + cosh nu)/2)^{-ell/2}
                const double exact =
                    std::exp(-0.5 * idx.ell * std::log(0.5 * (1.0 + std::cosh(r.nu))));
                const double y = exact - comp;
                const double s = acc + y;
                comp = (s - acc) - y;
                acc = s;
            }
        }
        partial[std::size_t(b)] = acc;
    }
    if (bad_xc)
        throw NumericalFailure(
            "certify_nonzero: orbit point on the compact suborbit is not +-x0");
    double rem = 0.0, comp = 0.0;
    for (double p : partial) {
        const double y = p - comp;
        const double s = rem + y;
        comp = (s - rem) - y;
        rem = s;
    }
    cert.identity_mass = mass_plus;
    cert.antipodal_mass = mass_minus;
    cert.remainder = rem;

    std::string caveats =
        "conditional:envelope(S=" + std::to_string(fit.S) + ",U=" + std::to_string(fit.U) +
        "),floor(a=" + std::to_string(fit.floor.a) + ",b=0)";
    if (table.gens().k() == 0) {
        cert.tail = 0.0;
        cert.complete = true;
    } else {
        const auto n0 = first_unenumerated_shell(table, fit);
        if (!n0) {
            cert.tail = HUGE_VAL;
            cert.complete = false;
            caveats += ";incomplete:linear-floor-not-positive";
        } else {
            const double t = tail_bound_log(idx.ell, fit, *n0);
            cert.tail = std::exp(t);  // +inf when below the geometric floor
            cert.complete = std::isfinite(cert.tail);
            if (!cert.complete) caveats += ";incomplete:below-geometric-floor";
        }
    }
    cert.caveats = caveats;
    const double net = std::fabs(double(cert.identity_mass) - double(cert.antipodal_mass));
    cert.certified = std::isfinite(cert.tail) && net - cert.remainder - cert.tail > 0.0;
    return cert;
}

SpectrumReport spectrum_certified(const OrbitTable& table, const GrowthFit& fit,
                                  int m, int ell_max) {
    if (ell_max < 2) throw PreconditionError("spectrum_certified: ell_max must be >= 2");
    SpectrumReport rep;
    rep.antipode = detect_antipode(table);
    for (int ell = 2; ell <= ell_max; ++ell) {
        SpectrumRow row;
        row.ell = ell;
        row.eigenvalue = eigenvalue_ads(m, ell);
        row.parity_excluded = rep.antipode && (ell % 2 == 1);
        if (!row.parity_excluded) {
            row.cert = certify_nonzero(SpectralIndex{ell, +1, 2}, table, fit);
            row.certified = row.cert.certified;
        }
        rep.rows.push_back(std::move(row));
    }
    rep.ell0 = -1;
    for (int ell = 2; ell <= ell_max; ++ell) {
        bool all = true;
        for (const auto& row : rep.rows)
            if (row.ell >= ell && !row.parity_excluded && !row.certified) all = false;
        bool any = false;
        for (const auto& row : rep.rows)
            if (row.ell >= ell && !row.parity_excluded) any = true;
        if (all && any) {
            rep.ell0 = ell;
            break;
        }
    }
    try {
        rep.clip_lb = clip_lower_bound(table);
    } catch (const EmptyTable&) {
        rep.clip_lb = 0.0;
    }
    const double one_minus = 1.0 - rep.clip_lb;
    rep.trend = rep.ell0 > 0 ? rep.ell0 * one_minus * one_minus * one_minus : 0.0;
    return rep;
}

InvarianceReport invariance_residual(const SpectralIndex& idx, const OrbitTable& table,
                                     std::span<const std::size_t> gamma_rows,
                                     std::span<const QuadricPoint> xs) {
    InvarianceReport rep;
    const GrowthFit fit = growth_fit(table, table.base(), table.shell_r());
    for (const QuadricPoint& x : xs) {
        const SeriesValue base = poincare_eval(idx, table, x, &fit);
        for (std::size_t gi : gamma_rows) {
            const OrbitRow& gr = table.rows().at(gi);
            const QuadricPoint gx = act(gr.g, x);
            const SeriesValue moved = poincare_eval(idx, table, gx, &fit);
            rep.max_residual = std::max(rep.max_residual, std::abs(moved.value - base.value));
            // Unmatched words live beyond depth N - |gamma|; erode the first
            // omitted shell accordingly.
            const auto n0 = first_unenumerated_shell(table, fit);
            if (n0) {
                const double displacement =
                    nu_point(x) + gr.mu.mu1 + gr.mu.mu2;
                const long shift =
                    long(std::ceil((fit.floor.a * double(gr.word_length) + displacement) /
                                   fit.r));
                const long n_eff = std::max<long>(1, *n0 - shift);
                const double t = tail_bound_log(idx.ell, fit, n_eff);
                rep.allowed = std::max(rep.allowed, 2.0 * std::exp(t) + 1e-9);
            } else {
                rep.allowed = HUGE_VAL;
            }
        }
    }
    if (table.gens().k() == 0) rep.allowed = 1e-9;
    return rep;
}

double conjugation_equivariance(const SpectralIndex& idx, const OrbitTable& table,
                                const GroupElement& g,
                                std::span<const QuadricPoint> xs) {
    const GeneratorSet conj_gens = conjugate(table.gens(), g);
    EnumerateOptions opt;
    opt.shell_r = table.shell_r();
    const OrbitTable conj_table = enumerate(conj_gens, table.depth(), table.base(), opt);
    const GroupElement gi = g.inverse();
    double worst = 0.0;
    for (const QuadricPoint& x : xs) {
        // S_Gamma(g . psi)(x) = sum psi(g^{-1} gamma^{-1} x)
        const Mat2 xm = quadric_to_matrix(x);
        ScaledSum lhs;
        for (const auto& r : table.rows()) {
            double x1, x2;
            const Mat2 y = gi.g1 * (r.g.g1.inverse() * xm * r.g.g2) * gi.g2.inverse();
            x1 = 0.5 * (y.a + y.d);
            x2 = 0.5 * (y.c - y.b);
            lhs.add(psi_ads_signed(idx, x1, x2));
        }
        const QuadricPoint gx = act(gi, x);
        const Mat2 gxm = quadric_to_matrix(gx);
        ScaledSum rhs = sum_terms(idx, conj_table, gxm, false);
        worst = std::max(worst, std::abs(lhs.value() - rhs.value()));
    }
    return worst;
}

OriginShift origin_shift_search(const OrbitTable& table, int trials, std::uint64_t seed) {
    if (trials < 1) throw PreconditionError("origin_shift_search: trials must be >= 1");
    Rng rng(seed);
    OriginShift best;
    best.g = GroupElement::identity();
    best.shifted_r_min = -1.0;
    const auto& rows = table.rows();
    for (int trial = 0; trial <= trials; ++trial) {
        const GroupElement g =
            trial == 0 ? GroupElement::identity() : rand_small_element(0.5, rng);
        const GroupElement gi = g.inverse();
        double lo = HUGE_VAL;
        int degenerate = 0;
        const std::int64_t n = static_cast<std::int64_t>(rows.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(min : lo) \
    reduction(| : degenerate) if (n > 4096)
#endif
        for (std::int64_t i = 0; i < n; ++i) {
            const OrbitRow& r = rows[i];
            if (r.word_length == 0) continue;
            try {
                const Mat2 c1 = gi.g1 * r.g.g1 * g.g1;
                const Mat2 c2 = gi.g2 * r.g.g2 * g.g2;
                lo = std::min(lo, mu_product(c1 * c2.inverse()));
            } catch (const PreconditionError&) {
                degenerate = 1;
            }
        }
        if (degenerate)
            throw NumericalFailure("origin_shift_search: degenerate conjugated product");
        if (lo == HUGE_VAL) lo = 0.0;  // no nontrivial rows
        if (lo > best.shifted_r_min) {
            best.g = g;
            best.shifted_r_min = lo;
        }
    }
    best.positive = best.shifted_r_min > 1e-9;
    return best;
}

double eigen_residual(const SpectralIndex& idx, const OrbitTable& table,
                      std::span<const QuadricPoint> samples,
                      const LaplacianConfig& cfg) {
    const GrowthFit fit = growth_fit(table, table.base(), table.shell_r());
    const double lam = eigenvalue_ads(idx.m, idx.ell);
    double worst = 0.0;
    for (const QuadricPoint& x : samples) {
        const SeriesValue sv = poincare_eval(idx, table, x, &fit);
        const double mag = std::abs(sv.value);
        if (std::exp(sv.tail_log_bound) > 1e-8 * mag)
            throw TailTooLarge("eigen_residual: tail bound exceeds 1e-8 |partial sum|");
        const std::complex<double> fd = laplacian_fd(
            [&](const QuadricPoint& p) {
                return poincare_eval(idx, table, p, &fit).value;
            },
            x, cfg);
        const double num = std::abs(fd - lam * sv.value);
        const double den = lam != 0.0 ? std::fabs(lam) * mag : mag;
        worst = std::max(worst, num / std::max(den, 1e-300));
    }
    return worst;
}

}  // namespace ads
