#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "ads/groups.hpp"
#include "ads/sampling.hpp"

using namespace ads;

namespace {

std::vector<double> schottky_angles() { return {0.0, M_PI / 4.0}; }

// Independent word walker: multiply letter matrices along a reduced word,
// no reuse of the enumerator machinery.
GroupElement walk(const GeneratorSet& gens, std::span<const std::int8_t> letters) {
    GroupElement g = GroupElement::identity();
    for (std::int8_t l : letters) {
        const GroupElement& gen = gens.gens[std::size_t(std::abs(int(l)) - 1)];
        g = g * (l > 0 ? gen : gen.inverse());
    }
    return g;
}

// Test-only recursive enumeration oracle, independent of enumerate().
void dfs_oracle(const GeneratorSet& gens, int depth, int last_rank, const GroupElement& g,
                const std::function<void(const GroupElement&, int)>& visit, int len) {
    visit(g, len);
    if (depth == 0) return;
    const int k = gens.k();
    for (int r = 0; r < 2 * k; ++r) {
        if (last_rank >= 0 && r == (last_rank ^ 1)) continue;
        const int i = r / 2;
        const GroupElement step =
            (r % 2) ? gens.gens[std::size_t(i)].inverse() : gens.gens[std::size_t(i)];
        dfs_oracle(gens, depth - 1, r, g * step, visit, len + 1);
    }
}

}  // namespace

TEST_CASE("make_cyclic pinned behavior") {
    const GeneratorSet left = make_cyclic(2.0, CyclicSide::left);
    CHECK(mu_pair(left.gens[0]).mu1 == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(mu_pair(left.gens[0]).mu2 == 0.0);

    const GroupElement sq = left.gens[0] * left.gens[0];
    CHECK(mu_pair(sq).mu1 == doctest::Approx(4.0).epsilon(1e-14));

    const OrbitTable t1 = enumerate(make_cyclic(1.0, CyclicSide::left), 10);
    for (const auto& r : t1.rows())
        CHECK(r.nu == doctest::Approx(double(r.word_length)).epsilon(1e-12));

    CHECK_THROWS_AS(make_cyclic(0.0), PreconditionError);
    CHECK_THROWS_AS(make_cyclic(-1.0), PreconditionError);
    CHECK_THROWS_AS(make_cyclic(2.0, CyclicSide::both, 2.0), PreconditionError);

    // both-sided displacement |T - T2| per power
    const OrbitTable tb = enumerate(make_cyclic(3.0, CyclicSide::both, 1.0), 6);
    for (const auto& r : tb.rows())
        CHECK(r.nu == doctest::Approx(2.0 * r.word_length).epsilon(1e-12));
}

TEST_CASE("make_schottky counts and freeness floor") {
    const auto angles = schottky_angles();
    const GeneratorSet s = make_schottky(2, 6.0, angles);

    const OrbitTable t2 = enumerate(s, 2);
    long len2 = 0;
    for (const auto& r : t2.rows())
        if (r.word_length == 2) ++len2;
    CHECK(len2 == 12);
    CHECK(t2.size() == 17);

    double min_len1 = 1e300;
    for (const auto& r : t2.rows())
        if (r.word_length == 1) min_len1 = std::min(min_len1, r.mu.mu1);
    CHECK(min_len1 == doctest::Approx(6.0).epsilon(1e-12));

    // no nontrivial word of length <= 6 lands near +-identity (oracle DFS)
    const OrbitTable t6 = enumerate(s, 6);
    const Mat2 id = Mat2::identity();
    for (const auto& r : t6.rows()) {
        if (r.word_length == 0) continue;
        const bool near_plus =
            r.g.g1.max_abs_diff(id) < 1e-6 && r.g.g2.max_abs_diff(id) < 1e-6;
        const bool near_minus =
            r.g.g1.max_abs_diff(-id) < 1e-6 && r.g.g2.max_abs_diff(-id) < 1e-6;
        CHECK_FALSE(near_plus);
        CHECK_FALSE(near_minus);
    }

    CHECK_THROWS_AS(make_schottky(1, 6.0, std::vector<double>{0.0}), PreconditionError);
    const std::vector<double> bad = {0.0, M_PI};  // collide mod pi
    CHECK_THROWS_AS(make_schottky(2, 6.0, bad), PreconditionError);
    // tiny translation length fails the empirical floor
    const std::vector<double> ang = {0.0, 0.3};
    CHECK_THROWS_AS(make_schottky(2, 0.01, ang), FreenessUnverified);
}

TEST_CASE("make_pair special cases") {
    const auto angles = schottky_angles();
    const GeneratorSet s = make_schottky(2, 6.0, angles);
    RepPair reps;
    for (const auto& g : s.gens) reps.j_gens.push_back(g.g1);

    SUBCASE("trivial rho reduces to the Schottky embedding") {
        reps.rho_gens = {Mat2::identity(), Mat2::identity()};
        const GeneratorSet p = make_pair(reps);
        for (int i = 0; i < 2; ++i) {
            CHECK(p.gens[i].g1.max_abs_diff(s.gens[i].g1) == 0.0);
            CHECK(p.gens[i].g2.max_abs_diff(Mat2::identity()) == 0.0);
        }
    }
    SUBCASE("rho = j fixes the basepoint") {
        reps.rho_gens = reps.j_gens;
        const OrbitTable t = enumerate(make_pair(reps), 3);
        const QuadricPoint x0 = basepoint();
        for (const auto& r : t.rows()) {
            const QuadricPoint y = act(r.g, x0);
            for (int c = 0; c < 4; ++c)
                CHECK(std::fabs(y.coords[c] - x0.coords[c]) <= 1e-7);
            CHECK(r.nu <= 1e-3);  // cancellation-limited at T = 6
        }
    }
    SUBCASE("rho into rotations has mu2 identically zero") {
        reps.rho_gens = {rotation(0.4), rotation(1.1)};
        const OrbitTable t = enumerate(make_pair(reps), 5);
        for (const auto& r : t.rows()) CHECK(r.mu.mu2 <= 1e-7);
    }
    SUBCASE("mismatched arity rejected") {
        reps.rho_gens = {Mat2::identity()};
        CHECK_THROWS_AS(make_pair(reps), PreconditionError);
    }
}

TEST_CASE("deform families") {
    const GeneratorSet base = make_schottky(2, 6.0, schottky_angles());
    DeformParams params;
    params.rho_angles = {1.0, 2.0};
    params.xis = {Mat2{0, 1, 1, 0}, Mat2{1, 0, 0, -1}};

    SUBCASE("t = 0 gives trivial rho in both modes") {
        for (const DeformMode mode : {DeformMode::rotation, DeformMode::shear}) {
            const GeneratorSet d = deform(base, 0.0, mode, params);
            for (const auto& g : d.gens)
                CHECK(g.g2.max_abs_diff(Mat2::identity()) == 0.0);
        }
    }
    SUBCASE("rotation mode stays at mu2 = 0 for all words") {
        const GeneratorSet d = deform(base, 0.7, DeformMode::rotation, params);
        const OrbitTable t = enumerate(d, 5);
        for (const auto& r : t.rows()) CHECK(r.mu.mu2 <= 1e-7);
    }
    SUBCASE("shear mode ratio grows linearly at small t") {
        // mu(exp(t xi)) <= 2 t ||xi||_op; both xis here have op-norm 1
        for (double t : {0.1, 0.2, 0.4}) {
            const GeneratorSet d = deform(base, t, DeformMode::shear, params);
            const OrbitTable tab = enumerate(d, 5);
            double cp = 0.0;
            for (const auto& r : tab.rows())
                if (r.mu.mu1 > 2.0) cp = std::max(cp, r.mu.mu2 / r.mu.mu1);
            CHECK(cp <= t * 2.0 * 1.05);
            CHECK(cp > 0.0);
        }
    }
    SUBCASE("exp_traceless closed forms") {
        const Mat2 diag = exp_traceless(Mat2{0.5, 0, 0, -0.5});
        CHECK(diag.max_abs_diff(Mat2{std::exp(0.5), 0, 0, std::exp(-0.5)}) < 1e-14);
        const Mat2 rot = exp_traceless(Mat2{0, -0.3, 0.3, 0});
        CHECK(rot.max_abs_diff(rotation(0.3)) < 1e-14);
        const Mat2 nil = exp_traceless(Mat2{0, 0.7, 0, 0});
        CHECK(nil.max_abs_diff(Mat2{1, 0.7, 0, 1}) < 1e-14);
        CHECK_THROWS_AS(exp_traceless(Mat2{1, 0, 0, 0}), PreconditionError);
    }
}

TEST_CASE("enumerate row counts match closed forms") {
    CHECK(enumerate(make_cyclic(2.0), 3).size() == 7);
    const GeneratorSet s = make_schottky(2, 6.0, schottky_angles());
    CHECK(enumerate(s, 1).size() == 5);
    CHECK(enumerate(s, 3).size() == 53);
    CHECK(enumerate(make_trivial(), 5).size() == 1);
    CHECK(enumerate(with_antipode(make_trivial()), 5).size() == 2);
    CHECK(reduced_word_count(GroupKind::free_group, 2, 3, false) == 53);
    CHECK(reduced_word_count(GroupKind::cyclic, 1, 3, false) == 7);
}

TEST_CASE("enumerate deterministic order and byte-identical reruns") {
    const GeneratorSet s = make_schottky(2, 6.0, schottky_angles());
    EnumerateOptions par, ser;
    ser.parallel = false;
    const OrbitTable a = enumerate(s, 7, basepoint(), par);
    const OrbitTable b = enumerate(s, 7, basepoint(), par);
    const OrbitTable c = enumerate(s, 7, basepoint(), ser);
    CHECK(a.byte_identical(b));
    CHECK(a.byte_identical(c));

    // (length, lex) order
    for (std::size_t i = 1; i < a.size(); ++i) {
        const auto &p = a.rows()[i - 1], &q = a.rows()[i];
        CHECK(p.word_length <= q.word_length);
        if (p.word_length == q.word_length) {
            const auto lp = a.letters(p), lq = a.letters(q);
            bool le = true;
            for (std::size_t j = 0; j < lp.size(); ++j) {
                const int rp = 2 * (std::abs(int(lp[j])) - 1) + (lp[j] < 0);
                const int rq = 2 * (std::abs(int(lq[j])) - 1) + (lq[j] < 0);
                if (rp != rq) {
                    le = rp < rq;
                    break;
                }
            }
            CHECK(le);
        }
    }
}

TEST_CASE("word/matrix homomorphism") {
    const GeneratorSet s = make_schottky(2, 4.0, schottky_angles());
    const OrbitTable t = enumerate(s, 5);
    Rng rng(3);
    int done = 0;
    while (done < 200) {
        const auto& ra = t.rows()[std::size_t(rng.bits() % t.size())];
        const auto& rb = t.rows()[std::size_t(rng.bits() % t.size())];
        const auto la = t.letters(ra), lb = t.letters(rb);
        if (!la.empty() && !lb.empty() && la.back() == -lb.front()) continue;  // not reduced
        const GroupElement prod = ra.g * rb.g;
        std::vector<std::int8_t> cat(la.begin(), la.end());
        cat.insert(cat.end(), lb.begin(), lb.end());
        const GroupElement direct = walk(s, cat);
        // entries grow like e^{mu/2}; compare at entry scale
        const double scale1 = std::max(1.0, std::sqrt(direct.g1.frob2()));
        const double scale2 = std::max(1.0, std::sqrt(direct.g2.frob2()));
        CHECK(prod.g1.max_abs_diff(direct.g1) <= 1e-9 * scale1);
        CHECK(prod.g2.max_abs_diff(direct.g2) <= 1e-9 * scale2);
        ++done;
    }
}

TEST_CASE("enumerate matches the recursive oracle") {
    const GeneratorSet s = make_schottky(2, 6.0, schottky_angles());
    const OrbitTable t = enumerate(s, 5);
    std::multiset<long> table_mus, oracle_mus;
    for (const auto& r : t.rows())
        table_mus.insert(std::lround(r.mu.mu1 * 1e9));
    dfs_oracle(
        s, 5, -1, GroupElement::identity(),
        [&](const GroupElement& g, int) { oracle_mus.insert(std::lround(mu(g.g1) * 1e9)); },
        0);
    CHECK(table_mus == oracle_mus);
}

TEST_CASE("detect_antipode") {
    CHECK(detect_antipode(enumerate(with_antipode(make_trivial()), 0)));
    CHECK(detect_antipode(enumerate(with_antipode(make_cyclic(2.0)), 3)));
    CHECK_FALSE(detect_antipode(enumerate(make_schottky(2, 6.0, schottky_angles()), 4)));

    // <(-a_T, e)> never contains an antipodal form
    GeneratorSet neg;
    neg.kind = GroupKind::cyclic;
    neg.gens = {GroupElement{-boost(1.5), Mat2::identity()}};
    neg.labels = {"a"};
    CHECK_FALSE(detect_antipode(enumerate(neg, 8)));
}

TEST_CASE("conjugate") {
    const GeneratorSet s = make_cyclic(2.0);
    SUBCASE("identity conjugation is a no-op") {
        const GeneratorSet c = conjugate(s, GroupElement::identity());
        CHECK(c.gens[0].g1.max_abs_diff(s.gens[0].g1) == 0.0);
    }
    SUBCASE("mu of conjugated generator moves by at most the triangle bound") {
        Rng rng(9);
        for (int i = 0; i < 100; ++i) {
            const GroupElement g = rand_small_element(1.0, rng);
            const GeneratorSet c = conjugate(s, g);
            const CartanPair before = mu_pair(s.gens[0]), after = mu_pair(c.gens[0]);
            CHECK(std::fabs(after.mu1 - before.mu1) <= 2 * mu(g.g1) + 1e-9);
            CHECK(std::fabs(after.mu2 - before.mu2) <= 2 * mu(g.g2) + 1e-9);
        }
    }
    SUBCASE("orbit equivariance act(g^-1 gamma g, g^-1 x) = g^-1 act(gamma, x)") {
        Rng rng(13);
        const OrbitTable t = enumerate(s, 6);
        for (int i = 0; i < 50; ++i) {
            const GroupElement g = rand_small_element(1.0, rng);
            const QuadricPoint x = rand_quadric(2, 2.0, rng);
            const GroupElement gi = g.inverse();
            for (const auto& r : t.rows()) {
                const GroupElement conj = gi * r.g * g;
                const QuadricPoint lhs = act(conj, act(gi, x));
                const QuadricPoint rhs = act(gi, act(r.g, x));
                for (int cconst = 0; cconst < 4; ++cconst)
                    CHECK(std::fabs(lhs.coords[cconst] - rhs.coords[cconst]) <= 1e-9);
            }
        }
    }
}

TEST_CASE("memory budget refusal names an admissible depth") {
    const GeneratorSet s = make_schottky(2, 6.0, schottky_angles());
    EnumerateOptions opt;
    opt.memory_budget_bytes = 200000;
    try {
        enumerate(s, 12, basepoint(), opt);
        FAIL("expected EnumerationBudget");
    } catch (const EnumerationBudget& e) {
        CHECK(e.admissible_depth >= 1);
        CHECK(e.admissible_depth < 12);
        EnumerateOptions ok = opt;
        CHECK_NOTHROW(enumerate(s, e.admissible_depth, basepoint(), ok));
    }
}

TEST_CASE("word rendering") {
    const GeneratorSet s = make_schottky(2, 6.0, schottky_angles());
    const OrbitTable t = enumerate(s, 2);
    CHECK(t.word_string(t.rows()[0]) == "e");
    CHECK(t.word_string(t.rows()[1]) == "a");
    CHECK(t.word_string(t.rows()[2]) == "A");
    CHECK(t.word_string(t.rows()[3]) == "b");

    const OrbitTable ta = enumerate(with_antipode(make_trivial()), 0);
    CHECK(ta.word_string(ta.rows()[1]) == "e.z");
}
