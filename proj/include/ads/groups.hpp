#ifndef ADS_GROUPS_HPP
#define ADS_GROUPS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ads/lie_core.hpp"

// Discrete groups acting on AdS^3: cyclic groups, Schottky free groups,
// holonomy pairs (j, rho) and their deformations, plus exact reduced-word
// enumeration into an immutable orbit table.

namespace ads {

struct FreenessUnverified : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EnumerationBudget : std::runtime_error {
    int admissible_depth;
    EnumerationBudget(const std::string& msg, int n)
        : std::runtime_error(msg), admissible_depth(n) {}
};

enum class GroupKind { cyclic, free_group };
enum class CyclicSide { left, right, both };
enum class DeformMode { rotation, shear };

/// Free or cyclic generator set. `antipode` adjoins the central antipodal
/// element (e, -e), doubling the enumerated group.
struct GeneratorSet {
    GroupKind kind = GroupKind::free_group;
    std::vector<GroupElement> gens;
    std::vector<std::string> labels;
    bool antipode = false;

    int k() const { return static_cast<int>(gens.size()); }
};

/// Reduced word: signed generator indices, +i for gens[i-1], -i for its
/// inverse; no letter is followed by its own inverse.
struct Word {
    std::vector<std::int8_t> letters;
};

/// Images of the free generators under the two representations j and rho.
struct RepPair {
    std::vector<Mat2> j_gens;
    std::vector<Mat2> rho_gens;
};

struct DeformParams {
    std::vector<double> rho_angles;  // rotation mode: rho_t(g_i) = R(t * rho_angles[i])
    std::vector<Mat2> xis;           // shear mode: rho_t(g_i) = exp(t * xis[i]), traceless
};

struct OrbitRow {
    std::uint32_t word_offset = 0;
    std::uint16_t word_length = 0;
    bool antipodal = false;  // carries the extra central (e, -e) factor
    GroupElement g;
    CartanPair mu;
    double nu = 0.0;   // nu(g . basepoint)
    std::int32_t shell = 0;
};

struct EnumerateOptions {
    double shell_r = 1.0;
    bool parallel = true;
    std::size_t memory_budget_bytes = std::size_t(3) << 30;
};

/// All reduced words of length <= depth with matrices, Cartan pairs and
/// nu(gamma . x); rows sorted by (length, lexicographic letters, antipodal).
class OrbitTable {
public:
    OrbitTable(GeneratorSet gens, int depth, QuadricPoint base, double shell_r)
        : gens_(std::move(gens)), depth_(depth), base_(std::move(base)), shell_r_(shell_r) {}

    const GeneratorSet& gens() const { return gens_; }
    int depth() const { return depth_; }
    const QuadricPoint& base() const { return base_; }
    double shell_r() const { return shell_r_; }

    const std::vector<OrbitRow>& rows() const { return rows_; }
    std::size_t size() const { return rows_.size(); }

    std::span<const std::int8_t> letters(const OrbitRow& r) const {
        return {letter_pool_.data() + r.word_offset, r.word_length};
    }
    std::string word_string(const OrbitRow& r) const;

    // construction access for the enumerator
    std::vector<OrbitRow>& mutable_rows() { return rows_; }
    std::vector<std::int8_t>& mutable_pool() { return letter_pool_; }

    bool byte_identical(const OrbitTable& o) const;

private:
    GeneratorSet gens_;
    int depth_;
    QuadricPoint base_;
    double shell_r_;
    std::vector<std::int8_t> letter_pool_;
    std::vector<OrbitRow> rows_;
};

/// Cyclic group generated by (a_T, e), (e, a_T) or (a_T, a_{T2}).
GeneratorSet make_cyclic(double T, CyclicSide side = CyclicSide::left,
                         std::optional<double> T2 = std::nullopt);

/// Free group with generators (R(theta_i) a_T R(theta_i)^{-1}, e).
/// Freeness is verified empirically (no near-identity collision, floor on
/// mu over reduced words of length <= 8).
GeneratorSet make_schottky(int k, double T, std::span<const double> angles);

/// Pair group {(j(w), rho(w))}. The j-half must pass the Schottky freeness check.
GeneratorSet make_pair(const RepPair& reps);

/// The trivial group (see with_antipode for the antipodal extension).
GeneratorSet make_trivial();

/// Adjoin the central antipodal element (e, -e).
GeneratorSet with_antipode(GeneratorSet gens);

/// Deform a generator set: keep the first factor as j, replace the second by
/// rho_t per the mode. t = 0 gives the trivial rho.
GeneratorSet deform(const GeneratorSet& base, double t, DeformMode mode,
                    const DeformParams& params);

/// Conjugate every generator by g: gamma |-> g^{-1} gamma g.
GeneratorSet conjugate(const GeneratorSet& gens, const GroupElement& g);

OrbitTable enumerate(const GeneratorSet& gens, int depth,
                     const QuadricPoint& base = basepoint(),
                     const EnumerateOptions& opt = {});

/// True iff some enumerated element equals (e, -e) or (-e, e) within 1e-9.
bool detect_antipode(const OrbitTable& table);

/// Exact reduced-word counts: cyclic 2 per length, free 2k(2k-1)^{n-1}.
std::size_t reduced_word_count(GroupKind kind, int k, int depth, bool antipode);

/// exp of a traceless 2x2 matrix (closed form).
Mat2 exp_traceless(const Mat2& xi);

}  // namespace ads

#endif
