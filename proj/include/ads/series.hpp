#ifndef ADS_SERIES_HPP
#define ADS_SERIES_HPP

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ads/properness.hpp"
#include "ads/spectra.hpp"

// The generalized Poincare series: orbit summation with certified truncation
// tails, nonvanishing certificates at the origin, closed-form thresholds,
// parity filtering and per-ell spectrum reports.

namespace ads {

struct DivergentAtDepth : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TailTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SeriesValue {
    std::complex<double> value;
    long terms_used = 0;
    double max_term_log = -HUGE_VAL;
    double tail_log_bound = -HUGE_VAL;  // log of the bound on the omitted mass
};

/// Log-scale bound on sum_{n >= n0} cosh(r n / 4)^{-ell} S e^{U n} via
/// cosh t >= e^t / 2. Returns +inf when ell r / 4 <= U (geometric floor).
double tail_bound_log(int ell, const GrowthFit& fit, long n0);

/// First shell index no enumerated word can certify coverage beyond: every
/// unenumerated word has nu >= a (N + 1), so shells below floor(a(N+1)/r)
/// are fully enumerated. Returns nullopt when the floor is not positive.
std::optional<long> first_unenumerated_shell(const OrbitTable& table,
                                             const GrowthFit& fit);

/// Truncated sum of psi(gamma^{-1} . x) over the table in deterministic
/// (length, lex) order with compensated block accumulation. The tail bound
/// is shifted by the mu-displacement of x from the basepoint.
SeriesValue poincare_eval(const SpectralIndex& idx, const OrbitTable& table,
                          const QuadricPoint& x,
                          const GrowthFit* fit = nullptr);

/// Smallest integer d with d > (log(2S) + U) / log cosh T.
int ell_threshold_closed(double S, double U, double T);

struct NonvanishingCertificate {
    int ell = 0;
    long identity_mass = 0;   // enumerated gamma with psi(gamma . x0) = 1
    long antipodal_mass = 0;  // enumerated gamma with psi(gamma . x0) = -1
    double remainder = 0.0;   // exact sum of |psi| off the compact suborbit
    double tail = 0.0;        // envelope bound on the unenumerated mass
    bool certified = false;
    bool complete = true;     // linear floor certifies shell coverage
    std::string caveats;
    int depth = 0;
};

/// Lemma-8.5-style certificate: certified iff
/// |identity_mass - antipodal_mass| - remainder - tail > 0.
NonvanishingCertificate certify_nonzero(const SpectralIndex& idx,
                                        const OrbitTable& table,
                                        const GrowthFit& fit);

struct SpectrumRow {
    int ell = 0;
    double eigenvalue = 0.0;
    bool certified = false;
    bool parity_excluded = false;
    NonvanishingCertificate cert;
};

struct SpectrumReport {
    std::vector<SpectrumRow> rows;
    bool antipode = false;
    int ell0 = -1;        // least ell with every non-excluded ell' >= ell certified
    double clip_lb = 0.0; // one-sided Lipschitz estimate, context only
    double trend = 0.0;   // ell0 * (1 - clip_lb)^3
};

SpectrumReport spectrum_certified(const OrbitTable& table, const GrowthFit& fit,
                                  int m, int ell_max);

struct InvarianceReport {
    double max_residual = 0.0;
    double allowed = 0.0;  // 2 exp(tail bound) + float slack
};

/// Gamma-periodicity of the truncated series over sample translates.
InvarianceReport invariance_residual(const SpectralIndex& idx, const OrbitTable& table,
                                     std::span<const std::size_t> gamma_rows,
                                     std::span<const QuadricPoint> xs);

/// |S_Gamma(g . psi)(x) - S_{g^{-1} Gamma g}(psi)(g^{-1} x)|, an exact
/// finite-sum identity up to roundoff.
double conjugation_equivariance(const SpectralIndex& idx, const OrbitTable& table,
                                const GroupElement& g,
                                std::span<const QuadricPoint> xs);

struct OriginShift {
    GroupElement g;
    double shifted_r_min = 0.0;
    bool positive = false;
};

/// Search over random conjugators with mu-components <= 1/2 for the one
/// maximizing the minimal nu over the conjugated nontrivial orbit.
OriginShift origin_shift_search(const OrbitTable& table, int trials,
                                std::uint64_t seed);

/// Max over samples of |FD Laplacian of the truncated series - ell(ell-m) phi|
/// divided by |ell(ell-m) phi| (by |phi| when the eigenvalue is zero).
double eigen_residual(const SpectralIndex& idx, const OrbitTable& table,
                      std::span<const QuadricPoint> samples,
                      const LaplacianConfig& cfg);

}  // namespace ads

#endif
