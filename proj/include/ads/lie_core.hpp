#ifndef ADS_LIE_CORE_HPP
#define ADS_LIE_CORE_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

// Exact-formula layer for SL2(R) x SL2(R), the quadric model of the
// 3-dimensional anti-de Sitter space (and its AdS^{m+1} generalization),
// and the Cartan / polar projections built from 2x2 singular values.

namespace ads {

struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Row-major 2x2 real matrix, kept unit-determinant by the callers.
struct Mat2 {
    double a = 1.0, b = 0.0;
    double c = 0.0, d = 1.0;

    static Mat2 identity() { return {}; }

    double det() const { return a * d - b * c; }
    double frob2() const { return a * a + b * b + c * c + d * d; }

    Mat2 transpose() const { return {a, c, b, d}; }

    // det is assumed close to 1; no pivoting needed.
    Mat2 inverse() const { return {d, -b, -c, a}; }

    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 operator-() const { return {-a, -b, -c, -d}; }

    /// Rescale by 1/sqrt(det) so product chains hold |det-1| <= 1e-9.
    void renormalize() {
        const double s = 1.0 / std::sqrt(det());
        a *= s; b *= s; c *= s; d *= s;
    }

    double max_abs_diff(const Mat2& o) const {
        return std::max(std::max(std::fabs(a - o.a), std::fabs(b - o.b)),
                        std::max(std::fabs(c - o.c), std::fabs(d - o.d)));
    }
};

/// Rotation R(theta) in SO(2).
Mat2 rotation(double theta);

/// Hyperbolic translation a_T = diag(e^{T/2}, e^{-T/2}); mu2(a_T) = T.
Mat2 boost(double T);

/// Isometry (g1, g2) of AdS^3 acting by g |-> g1 g g2^{-1}.
struct GroupElement {
    Mat2 g1, g2;

    static GroupElement identity() { return {}; }

    GroupElement inverse() const { return {g1.inverse(), g2.inverse()}; }
    GroupElement operator*(const GroupElement& o) const {
        return {g1 * o.g1, g2 * o.g2};
    }
};

/// Point of the quadric Q(x) = x1^2 + x2^2 - x3^2 - ... - x_{m+2}^2 = 1.
struct QuadricPoint {
    std::vector<double> coords;  // length m + 2, m >= 2

    QuadricPoint() : coords{1.0, 0.0, 0.0, 0.0} {}
    explicit QuadricPoint(std::vector<double> c) : coords(std::move(c)) {}

    int m() const { return static_cast<int>(coords.size()) - 2; }
    double q() const {
        double s = coords[0] * coords[0] + coords[1] * coords[1];
        for (std::size_t i = 2; i < coords.size(); ++i) s -= coords[i] * coords[i];
        return s;
    }
};

/// Origin x0 = (1, 0, ..., 0).
QuadricPoint basepoint(int m = 2);

/// Cartan projection of (g1, g2), one nonnegative component per factor.
struct CartanPair {
    double mu1 = 0.0, mu2 = 0.0;
    double sum() const { return mu1 + mu2; }
};

/// Quadric point -> SL2(R) matrix [[x1+x4, -x2+x3], [x2+x3, x1-x4]] (m = 2 only).
Mat2 quadric_to_matrix(const QuadricPoint& x);

/// Inverse of quadric_to_matrix; requires det g = 1 within 1e-6.
QuadricPoint matrix_to_quadric(const Mat2& g);

/// (g1, g2) . x through the matrix model: g1 * mat(x) * g2^{-1}.
QuadricPoint act(const GroupElement& g, const QuadricPoint& x);

/// Cartan projection of SL2(R): arcosh(||g||_F^2 / 2), the log of the top
/// eigenvalue of g^t g. Stable near the identity via log1p-style arcosh.
double mu(const Mat2& g);

/// Componentwise Cartan projection of a pair.
CartanPair mu_pair(const GroupElement& g);

/// Polar projection of a quadric point: arcosh(2 x1^2 + 2 x2^2 - 1).
/// Vanishes exactly on the compact suborbit x1^2 + x2^2 = 1.
double nu_point(const QuadricPoint& x);

/// Polar projection of a group element: mu(g1 * g2^{-1}) = nu(g . x0).
double nu_elem(const GroupElement& g);

// a-geometry normalization: ||mu||_a and the distance to mu(H) = diagonal.
inline double mu_norm_a(const CartanPair& p) {
    return std::sqrt(p.mu1 * p.mu1 + p.mu2 * p.mu2);
}
inline double mu_dist_diag_a(const CartanPair& p) {
    return std::fabs(p.mu1 - p.mu2) / std::sqrt(2.0);
}

/// arcosh(1 + u) for u >= 0 without cancellation near u = 0.
inline double arcosh1p(double u) {
    if (u < 0.0) {
        if (u < -1e-12) throw PreconditionError("arcosh argument below 1");
        u = 0.0;
    }
    return std::log1p(u + std::sqrt(u * (2.0 + u)));
}

/// mu of a freshly formed matrix product. For products that land near the
/// identity after large-entry cancellation, dividing the Frobenius norm by
/// the computed determinant absorbs the noise (frob^2 >= 2 det holds
/// identically, so the ratio stays >= 1). For large products the determinant
/// itself cancels and the plain formula is already relatively accurate.
/// Throws when a near-identity product has degenerated past recovery.
inline double mu_product(const Mat2& g) {
    const double f2 = g.frob2();
    if (f2 >= 1e8) return arcosh1p(0.5 * f2 - 1.0);
    const double d = g.det();
    if (!(d > 0.25 && d < 4.0))
        throw PreconditionError("mu_product: product matrix lost unit determinant");
    return arcosh1p(0.5 * f2 / d - 1.0);
}

}  // namespace ads

#endif
