#include "ads/groups.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ads {

namespace {

constexpr double kFreenessFloor = 0.1;
constexpr int kFreenessDepth = 8;

// Alphabet rank of a signed letter: +1, -1, +2, -2, ... in that order.
inline int alpha_rank(std::int8_t letter) {
    const int i = std::abs(int(letter)) - 1;
    return 2 * i + (letter < 0 ? 1 : 0);
}

inline std::int8_t rank_to_letter(int rank) {
    const int i = rank / 2 + 1;
    return static_cast<std::int8_t>(rank % 2 ? -i : i);
}

GroupElement generator_power(const GroupElement& g, bool inverse) {
    return inverse ? g.inverse() : g;
}

double min_mu_over_words(const std::vector<Mat2>& gens, int depth) {
    const int k = static_cast<int>(gens.size());
    std::vector<Mat2> letters;
    letters.reserve(2 * k);
    for (const auto& g : gens) {
        letters.push_back(g);
        letters.push_back(g.inverse());
    }
    double best = 1e300;
    // Depth-first over reduced words; stack of (matrix, last alphabet rank).
    struct Frame { Mat2 m; int last; int next; };
    std::vector<Frame> stack;
    stack.push_back({Mat2::identity(), -1, 0});
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.next >= 2 * k) { stack.pop_back(); continue; }
        const int rank = f.next++;
        if (f.last >= 0 && rank == (f.last ^ 1)) continue;
        Mat2 child = f.m * letters[rank];
        best = std::min(best, mu(child));
        if (static_cast<int>(stack.size()) < depth)
            stack.push_back({child, rank, 0});
    }
    return best;
}

void check_not_central(const GroupElement& g) {
    const Mat2 id = Mat2::identity();
    if (g.g1.max_abs_diff(id) < 1e-9 && g.g2.max_abs_diff(id) < 1e-9)
        throw PreconditionError("generator equals the identity");
    if (g.g1.max_abs_diff(-id) < 1e-9 && g.g2.max_abs_diff(-id) < 1e-9)
        throw PreconditionError("generator equals minus the identity");
}

}  // namespace

Mat2 exp_traceless(const Mat2& xi) {
    if (std::fabs(xi.a + xi.d) > 1e-12)
        throw PreconditionError("exp_traceless: matrix has nonzero trace");
    // xi^2 = -det(xi) I for traceless xi.
    const double d = -xi.det();
    if (d > 1e-300) {
        const double s = std::sqrt(d), f = std::sinh(s) / s, co = std::cosh(s);
        return {co + f * xi.a, f * xi.b, f * xi.c, co + f * xi.d};
    }
    if (d < -1e-300) {
        const double s = std::sqrt(-d), f = std::sin(s) / s, co = std::cos(s);
        return {co + f * xi.a, f * xi.b, f * xi.c, co + f * xi.d};
    }
    return {1.0 + xi.a, xi.b, xi.c, 1.0 + xi.d};
}

GeneratorSet make_cyclic(double T, CyclicSide side, std::optional<double> T2) {
    if (T <= 0.0) throw PreconditionError("make_cyclic: T must be positive");
    const double T2v = T2.value_or(T / 2.0);
    GroupElement g;
    switch (side) {
        case CyclicSide::left: g = {boost(T), Mat2::identity()}; break;
        case CyclicSide::right: g = {Mat2::identity(), boost(T)}; break;
        case CyclicSide::both:
            if (std::fabs(T - T2v) < 1e-12)
                throw PreconditionError("make_cyclic: both-sided with T2 = T fixes x0");
            g = {boost(T), boost(T2v)};
            break;
    }
    return {GroupKind::cyclic, {g}, {"a"}, false};
}

GeneratorSet make_schottky(int k, double T, std::span<const double> angles) {
    if (k < 2) throw PreconditionError("make_schottky: k must be >= 2");
    if (static_cast<int>(angles.size()) != k)
        throw PreconditionError("make_schottky: need one angle per generator");
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            double d = std::remainder(angles[i] - angles[j], M_PI);
            if (std::fabs(d) < 1e-9)
                throw PreconditionError("make_schottky: angles collide mod pi");
        }
    GeneratorSet out;
    out.kind = GroupKind::free_group;
    for (int i = 0; i < k; ++i) {
        Mat2 r = rotation(angles[i]);
        out.gens.push_back({r * boost(T) * r.inverse(), Mat2::identity()});
        out.labels.push_back(std::string(1, char('a' + i)));
    }
    std::vector<Mat2> j_half;
    for (const auto& g : out.gens) j_half.push_back(g.g1);
    if (min_mu_over_words(j_half, kFreenessDepth) <= kFreenessFloor)
        throw FreenessUnverified("make_schottky: collision check failed");
    return out;
}

GeneratorSet make_pair(const RepPair& reps) {
    if (reps.j_gens.size() != reps.rho_gens.size())
        throw PreconditionError("make_pair: mismatched generator counts");
    if (reps.j_gens.empty()) throw PreconditionError("make_pair: empty generator set");
    if (min_mu_over_words(reps.j_gens, kFreenessDepth) <= kFreenessFloor)
        throw FreenessUnverified("make_pair: j-half fails the freeness check");
    GeneratorSet out;
    out.kind = GroupKind::free_group;
    for (std::size_t i = 0; i < reps.j_gens.size(); ++i) {
        out.gens.push_back({reps.j_gens[i], reps.rho_gens[i]});
        check_not_central(out.gens.back());
        out.labels.push_back(std::string(1, char('a' + i)));
    }
    return out;
}

GeneratorSet make_trivial() { return {GroupKind::free_group, {}, {}, false}; }

GeneratorSet with_antipode(GeneratorSet gens) {
    gens.antipode = true;
    return gens;
}

GeneratorSet deform(const GeneratorSet& base, double t, DeformMode mode,
                    const DeformParams& params) {
    RepPair reps;
    for (const auto& g : base.gens) reps.j_gens.push_back(g.g1);
    const std::size_t k = reps.j_gens.size();
    for (std::size_t i = 0; i < k; ++i) {
        switch (mode) {
            case DeformMode::rotation: {
                const double th = params.rho_angles.empty()
                                      ? double(i + 1)
                                      : params.rho_angles[i % params.rho_angles.size()];
                reps.rho_gens.push_back(rotation(t * th));
                break;
            }
            case DeformMode::shear: {
                if (params.xis.empty())
                    throw PreconditionError("deform: shear mode needs xi matrices");
                const Mat2& xi = params.xis[i % params.xis.size()];
                Mat2 scaled{t * xi.a, t * xi.b, t * xi.c, t * xi.d};
                reps.rho_gens.push_back(exp_traceless(scaled));
                break;
            }
        }
    }
    GeneratorSet out = make_pair(reps);
    out.kind = base.kind;
    out.labels = base.labels;
    out.antipode = base.antipode;
    return out;
}

GeneratorSet conjugate(const GeneratorSet& gens, const GroupElement& g) {
    GeneratorSet out = gens;
    const GroupElement gi = g.inverse();
    for (auto& gamma : out.gens) gamma = gi * gamma * g;
    return out;
}

std::size_t reduced_word_count(GroupKind kind, int k, int depth, bool antipode) {
    std::size_t n = 1;
    if (kind == GroupKind::cyclic) {
        n += 2 * std::size_t(std::max(depth, 0));
    } else if (k > 0) {
        std::size_t level = 2 * std::size_t(k);
        for (int d = 1; d <= depth; ++d) {
            n += level;
            level *= std::size_t(2 * k - 1);
        }
    }
    return antipode ? 2 * n : n;
}

namespace {

struct RowBuild {
    GroupElement g;
    std::uint32_t word_offset;
    std::uint16_t word_length;
};

void finish_row(OrbitRow& row, const RowBuild& b, bool anti, const Mat2& base_mat) {
    row.word_offset = b.word_offset;
    row.word_length = b.word_length;
    row.antipodal = anti;
    row.g = b.g;
    if (anti) row.g.g2 = -row.g.g2;
    row.mu = mu_pair(row.g);
    // nu(g . x) through the matrix model; the antipodal factor flips the
    // sign of the moved matrix and leaves nu unchanged.
    row.nu = mu_product(b.g.g1 * base_mat * b.g.g2.inverse());
}

}  // namespace

OrbitTable enumerate(const GeneratorSet& gens, int depth, const QuadricPoint& base,
                     const EnumerateOptions& opt) {
    if (depth < 0) throw PreconditionError("enumerate: negative depth");
    const int k = gens.k();
    const std::size_t total = reduced_word_count(gens.kind, k, depth, gens.antipode);
    const std::size_t est_bytes = total * (sizeof(OrbitRow) + std::size_t(depth) / 2 + 8);
    if (est_bytes > opt.memory_budget_bytes) {
        int n = depth;
        while (n > 0 && reduced_word_count(gens.kind, k, n, gens.antipode) *
                                (sizeof(OrbitRow) + std::size_t(n) / 2 + 8) >
                            opt.memory_budget_bytes)
            --n;
        throw EnumerationBudget("enumerate: memory budget exceeded, admissible depth " +
                                    std::to_string(n),
                                n);
    }

    for (const auto& g : gens.gens) check_not_central(g);

    OrbitTable table(gens, depth, base, opt.shell_r);
    const Mat2 base_mat = quadric_to_matrix(base);

    // Build the base (non-antipodal) rows level by level; deterministic
    // (length, lexicographic) order by construction.
    std::vector<RowBuild> current, next;
    std::vector<std::int8_t> pool;
    std::vector<std::int8_t> level_letters, next_letters;
    current.push_back({GroupElement::identity(), 0, 0});

    std::vector<RowBuild> all;
    all.reserve(total / (gens.antipode ? 2 : 1));
    all.push_back(current[0]);

    if (gens.kind == GroupKind::cyclic && k == 1) {
        GroupElement pos = GroupElement::identity(), neg = GroupElement::identity();
        const GroupElement g = gens.gens[0], gi = g.inverse();
        for (int n = 1; n <= depth; ++n) {
            pos = pos * g;
            neg = neg * gi;
            if (n % 64 == 0) {
                pos.g1.renormalize(); pos.g2.renormalize();
                neg.g1.renormalize(); neg.g2.renormalize();
            }
            for (int sgn = 0; sgn < 2; ++sgn) {
                RowBuild b;
                b.g = sgn ? neg : pos;
                b.word_length = static_cast<std::uint16_t>(n);
                b.word_offset = static_cast<std::uint32_t>(pool.size());
                for (int i = 0; i < n; ++i) pool.push_back(sgn ? -1 : 1);
                all.push_back(b);
            }
        }
    } else if (k > 0) {
        // Letter matrices in alphabet-rank order.
        std::vector<GroupElement> letters(2 * std::size_t(k));
        for (int i = 0; i < k; ++i) {
            letters[2 * i] = gens.gens[i];
            letters[2 * i + 1] = gens.gens[i].inverse();
        }
        std::vector<int> last_rank_cur{-1}, last_rank_next;
        for (int level = 1; level <= depth; ++level) {
            const std::size_t parents = current.size();
            const std::size_t fanout = (level == 1) ? 2 * std::size_t(k)
                                                    : 2 * std::size_t(k) - 1;
            next.assign(parents * fanout, RowBuild{});
            last_rank_next.assign(parents * fanout, 0);
            next_letters.assign(parents * fanout * std::size_t(level), 0);

            const std::int64_t pn = static_cast<std::int64_t>(parents);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (opt.parallel && pn > 256)
#endif
            for (std::int64_t p = 0; p < pn; ++p) {
                const RowBuild& parent = current[p];
                const int lastr = last_rank_cur[p];
                std::size_t slot = std::size_t(p) * fanout;
                for (int r = 0; r < 2 * k; ++r) {
                    if (lastr >= 0 && r == (lastr ^ 1)) continue;
                    RowBuild child;
                    child.g = parent.g * letters[r];
                    if (level % 64 == 0) {
                        child.g.g1.renormalize();
                        child.g.g2.renormalize();
                    }
                    child.word_length = static_cast<std::uint16_t>(level);
                    std::int8_t* dst = next_letters.data() + slot * std::size_t(level);
                    if (level > 1)
                        std::memcpy(dst, level_letters.data() + std::size_t(p) * (level - 1),
                                    std::size_t(level - 1));
                    dst[level - 1] = rank_to_letter(r);
                    next[slot] = child;
                    last_rank_next[slot] = r;
                    ++slot;
                }
            }
            // Record offsets into the shared pool in deterministic order.
            for (std::size_t s = 0; s < next.size(); ++s) {
                next[s].word_offset = static_cast<std::uint32_t>(pool.size());
                pool.insert(pool.end(),
                            next_letters.begin() + s * std::size_t(level),
                            next_letters.begin() + (s + 1) * std::size_t(level));
                all.push_back(next[s]);
            }
            current.swap(next);
            last_rank_cur.swap(last_rank_next);
            level_letters.swap(next_letters);
        }
    }

    // Materialize rows (with the antipodal companion rows interleaved).
    auto& rows = table.mutable_rows();
    rows.assign(gens.antipode ? 2 * all.size() : all.size(), OrbitRow{});
    const std::int64_t n_all = static_cast<std::int64_t>(all.size());
    int degenerate = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(| : degenerate) \
    if (opt.parallel && n_all > 512)
#endif
    for (std::int64_t i = 0; i < n_all; ++i) {
        try {
            if (gens.antipode) {
                finish_row(rows[2 * i], all[i], false, base_mat);
                finish_row(rows[2 * i + 1], all[i], true, base_mat);
            } else {
                finish_row(rows[i], all[i], false, base_mat);
            }
        } catch (const PreconditionError&) {
            degenerate = 1;
        }
    }
    if (degenerate)
        throw PreconditionError(
            "enumerate: a word product degenerated numerically (nu not computable)");
    for (auto& r : rows)
        r.shell = static_cast<std::int32_t>(std::floor(r.nu / opt.shell_r));
    table.mutable_pool() = std::move(pool);
    return table;
}

std::string OrbitTable::word_string(const OrbitRow& r) const {
    std::string s;
    if (r.word_length == 0) s = "e";
    for (std::int8_t l : letters(r)) {
        const int i = std::abs(int(l)) - 1;
        std::string lab = i < static_cast<int>(gens_.labels.size())
                              ? gens_.labels[i]
                              : std::string(1, char('a' + i));
        if (l < 0) {
            for (auto& ch : lab) ch = static_cast<char>(std::toupper(ch));
        }
        s += lab;
    }
    if (r.antipodal) s += ".z";
    return s;
}

bool OrbitTable::byte_identical(const OrbitTable& o) const {
    if (rows_.size() != o.rows_.size() || letter_pool_ != o.letter_pool_) return false;
    auto same_mat = [](const Mat2& x, const Mat2& y) {
        return std::memcmp(&x, &y, 4 * sizeof(double)) == 0;
    };
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const OrbitRow &a = rows_[i], &b = o.rows_[i];
        if (a.word_offset != b.word_offset || a.word_length != b.word_length ||
            a.antipodal != b.antipodal || a.shell != b.shell)
            return false;
        if (!same_mat(a.g.g1, b.g.g1) || !same_mat(a.g.g2, b.g.g2)) return false;
        if (std::memcmp(&a.mu, &b.mu, sizeof(CartanPair)) != 0) return false;
        if (std::memcmp(&a.nu, &b.nu, sizeof(double)) != 0) return false;
    }
    return true;
}

bool detect_antipode(const OrbitTable& table) {
    const Mat2 id = Mat2::identity();
    for (const auto& r : table.rows()) {
        const bool first_id = r.g.g1.max_abs_diff(id) < 1e-9;
        const bool first_neg = r.g.g1.max_abs_diff(-id) < 1e-9;
        const bool second_id = r.g.g2.max_abs_diff(id) < 1e-9;
        const bool second_neg = r.g.g2.max_abs_diff(-id) < 1e-9;
        if ((first_id && second_neg) || (first_neg && second_id)) return true;
    }
    return false;
}

}  // namespace ads
