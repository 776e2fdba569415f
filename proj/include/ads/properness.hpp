#ifndef ADS_PROPERNESS_HPP
#define ADS_PROPERNESS_HPP

#include <optional>
#include <vector>

#include "ads/groups.hpp"

// Quantifying proper discontinuity: sharpness constant fits, a one-sided
// Lipschitz-constant estimator, pseudo-ball orbit counts with completeness
// guards, critical-exponent regression and shell-count envelopes.

namespace ads {

struct EmptyTable : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InsufficientDepth : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fitted constants of mu(rho(w)) <= c' mu(j(w)) + C', converted to the
/// (c, C) form c = (1 - c') / sqrt(2 (1 + c'^2)), C = C' / sqrt(2).
struct SharpnessEstimate {
    double c_prime = 0.0;
    double C_prime = 0.0;
    double c = 0.0;
    double C = 0.0;
    int depth = 0;
    double floor = 0.0;
    long ratio_words = 0;  // words above the floor feeding c'
    bool admissible = false;
};

/// Fit over words of length <= max_len (all lengths when max_len < 0).
SharpnessEstimate sharpness_fit(const OrbitTable& table, double floor = 2.0,
                                double margin = 0.05, int max_len = -1);

/// Max ratio mu(rho(w)) / mu(j(w)) over words above the floor: a lower
/// bound on the minimal equivariant Lipschitz constant, one-sided only.
double clip_lower_bound(const OrbitTable& table, double floor = 2.0, int max_len = -1);

/// Linear floor nu(gamma . x0) >= a |gamma| (b = 0): a is the minimum of
/// per-length minima divided by length. a = 0 when some nontrivial orbit
/// point sits on the compact suborbit.
struct LinearFloor {
    double a = 0.0;
    double b = 0.0;
    bool positive = false;
};

LinearFloor linear_floor(const OrbitTable& table);

struct BallCount {
    long count = 0;
    bool complete = false;
};

/// #{enumerated gamma : nu(gamma . x) < R}. The flag certifies that no word
/// beyond the enumerated depth can enter the ball, via the linear floor and
/// the mu-displacement of x.
BallCount count_pseudoball(const OrbitTable& table, const QuadricPoint& x, double R);

struct CriticalExponent {
    double delta_hat = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
    double residual = 0.0;
};

/// Least-squares slope of log #{gamma : ||mu(gamma)||_a < R} against R over
/// [20%, 90%] of the enumerated radius range.
CriticalExponent critical_exponent(const OrbitTable& table);

/// Shell-count envelope c(n) <= S e^{U n} for nu-shells of width r, plus the
/// minimum nonzero nu over the orbit and the linear floor.
struct GrowthFit {
    double r = 1.0;
    double S = 1.0;
    double U = 0.0;
    std::optional<double> r_min;
    LinearFloor floor;
    std::vector<long> shells;
    bool r_min_required = false;  // true when nontrivial rows exist
};

GrowthFit growth_fit(const OrbitTable& table, const QuadricPoint& x, double r);

/// Depth-limited membership in the pseudo-Riemannian Dirichlet domain:
/// nu(x) <= nu(gamma . x) + 1e-12 for all enumerated gamma != e.
bool dirichlet_member(const QuadricPoint& x, const OrbitTable& table);

}  // namespace ads

#endif
