#include "ads/lie_core.hpp"

namespace ads {

Mat2 rotation(double theta) {
    const double co = std::cos(theta), si = std::sin(theta);
    return {co, -si, si, co};
}

Mat2 boost(double T) {
    const double e = std::exp(T / 2.0);
    return {e, 0.0, 0.0, 1.0 / e};
}

QuadricPoint basepoint(int m) {
    std::vector<double> c(static_cast<std::size_t>(m) + 2, 0.0);
    c[0] = 1.0;
    return QuadricPoint(std::move(c));
}

Mat2 quadric_to_matrix(const QuadricPoint& x) {
    if (x.m() != 2) throw PreconditionError("quadric_to_matrix requires m = 2");
    if (std::fabs(x.q() - 1.0) > 1e-6)
        throw PreconditionError("quadric_to_matrix: point off the quadric");
    const auto& v = x.coords;
    return {v[0] + v[3], -v[1] + v[2], v[1] + v[2], v[0] - v[3]};
}

QuadricPoint matrix_to_quadric(const Mat2& g) {
    if (std::fabs(g.det() - 1.0) > 1e-6)
        throw PreconditionError("matrix_to_quadric: determinant not 1");
    return QuadricPoint({0.5 * (g.a + g.d), 0.5 * (g.c - g.b),
                         0.5 * (g.b + g.c), 0.5 * (g.a - g.d)});
}

QuadricPoint act(const GroupElement& g, const QuadricPoint& x) {
    return matrix_to_quadric(g.g1 * quadric_to_matrix(x) * g.g2.inverse());
}

double mu(const Mat2& g) {
    // tr(g^t g) / 2 = 1 + u with u >= 0 up to roundoff.
    return arcosh1p(0.5 * g.frob2() - 1.0);
}

CartanPair mu_pair(const GroupElement& g) { return {mu(g.g1), mu(g.g2)}; }

double nu_point(const QuadricPoint& x) {
    const double u = 2.0 * (x.coords[0] * x.coords[0] + x.coords[1] * x.coords[1]) - 2.0;
    return arcosh1p(u);
}

double nu_elem(const GroupElement& g) { return mu_product(g.g1 * g.g2.inverse()); }

}  // namespace ads
