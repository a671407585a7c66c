#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "siegel/int_matrix.hpp"
#include "siegel/siegel_point.hpp"

/// Exact integer machinery for even lattices: Gram matrices, short-vector
/// enumeration and representation numbers N(S, T) = #{G : G^t S G = T}.
namespace siegel::lattice {

/// Gram matrix of an even positive-definite lattice: symmetric, even
/// diagonal, all leading principal minors positive.
class GramMatrix {
public:
    explicit GramMatrix(IntMatrix entries);

    int dim() const { return m_.rows(); }
    const IntMatrix& entries() const { return m_; }
    Int operator()(int i, int j) const { return m_(i, j); }
    Int determinant() const;

    bool operator==(const GramMatrix&) const = default;

private:
    IntMatrix m_;
};

/// Symmetric positive-semidefinite integer matrix with even diagonal: the
/// index T of a Fourier coefficient of a genus-g theta series.
class EvenSymMatrix {
public:
    explicit EvenSymMatrix(IntMatrix entries);
    EvenSymMatrix(std::initializer_list<std::initializer_list<Int>> rows) : EvenSymMatrix(IntMatrix(rows)) {}

    int size() const { return m_.rows(); }
    const IntMatrix& entries() const { return m_; }
    Int operator()(int i, int j) const { return m_(i, j); }
    Int trace() const;
    Int max_diagonal() const;
    int rank() const { return siegel::rank(m_); }

    /// Row-major entries.
    std::vector<Int> flattened() const { return {m_.data().begin(), m_.data().end()}; }

    bool operator==(const EvenSymMatrix&) const = default;
    auto operator<=>(const EvenSymMatrix& o) const { return m_ <=> o.m_; }

private:
    IntMatrix m_;
};

/// Drop the zero rows/columns of T (they force zero columns of G) and return
/// the lexicographically smallest image of the remainder under simultaneous
/// signed permutations. Representation numbers are invariant under both.
EvenSymMatrix reduced_canonical_form(const EvenSymMatrix& t);

struct Limits {
    /// Ceiling on the number of vectors (counting both signs) a table may hold.
    std::size_t max_vectors = 20'000'000;
};

/// Nonzero lattice vectors of norm <= max_norm, one representative per +-
/// pair, grouped by norm. Vectors are coefficient vectors in the basis of the
/// Gram matrix, stored flattened.
class VectorTable {
public:
    int dim() const { return dim_; }
    Int max_norm() const { return max_norm_; }

    std::span<const std::int32_t> representatives(Int norm) const;
    std::size_t representative_count(Int norm) const;
    /// Number of vectors of the given norm, both signs included.
    std::size_t count(Int norm) const { return 2 * representative_count(norm); }
    std::size_t total_count() const;
    std::vector<Int> norms() const;
    /// Vectors of one norm; with expand_signs each -v follows its v.
    std::vector<std::vector<std::int32_t>> vectors(Int norm, bool expand_signs) const;

private:
    friend VectorTable short_vectors(const GramMatrix&, Int, const Limits&);
    int dim_ = 0;
    Int max_norm_ = 0;
    std::map<Int, std::vector<std::int32_t>> by_norm_;
};

/// E8 in the Bourbaki basis: D8 glued with the all-halves vector.
GramMatrix gram_e8();
/// D16+ in the analogous basis of D16 glued with the all-halves vector.
GramMatrix gram_d16_plus();
GramMatrix direct_sum(const GramMatrix& a, const GramMatrix& b);

/// Fincke-Pohst enumeration under the Cholesky factor of S; norms are
/// confirmed exactly. Throws ResourceLimitError above limits.max_vectors.
VectorTable short_vectors(const GramMatrix& s, Int max_norm, const Limits& limits = {});

/// N(S, T) by column-by-column extension with inner-product pruning.
std::uint64_t representation_count(const GramMatrix& s, const EvenSymMatrix& t, const Limits& limits = {});

/// Truncation region for Fourier indices T. Every diagonal entry is at most
/// max_diag; a target with a diagonal entry above trace_free_diag must also
/// have trace <= max_trace. The plain box has trace_free_diag = max_diag.
struct TargetRegion {
    Int max_diag = 0;
    Int trace_free_diag = 0;
    Int max_trace = 0;

    static TargetRegion box(Int max_diag) { return {max_diag, max_diag, 0}; }
    bool is_box() const { return trace_free_diag >= max_diag; }
    /// Membership depends only on the diagonal.
    bool contains(const EvenSymMatrix& t) const;
    /// ValidationError unless all bounds are even and consistent.
    void validate() const;
    /// "max_diag 6 trace_free_diag 4 max_trace 12", or "max_diag 4" for a box.
    std::string describe() const;

    bool operator==(const TargetRegion&) const = default;
};

/// All even psd g x g matrices in the region, sorted lexicographically by
/// row-major entries.
std::vector<EvenSymMatrix> enumerate_targets(int g, const TargetRegion& region);
inline std::vector<EvenSymMatrix> enumerate_targets(int g, Int max_diag) {
    return enumerate_targets(g, TargetRegion::box(max_diag));
}

/// Orthogonal sum of D_n^+ blocks (n divisible by 8) in standard
/// coordinates, D_n^+ = { x in Z^n u (Z + 1/2)^n : sum(x) even }.
/// E8 = D8^+, D16+ = D16^+. Representation numbers are counted by a
/// dynamic program over coordinates instead of vector tuples.
class DnPlusLattice {
public:
    explicit DnPlusLattice(std::vector<int> block_sizes);

    static DnPlusLattice e8() { return DnPlusLattice({8}); }
    static DnPlusLattice e8_e8() { return DnPlusLattice({8, 8}); }
    static DnPlusLattice d16_plus() { return DnPlusLattice({16}); }

    int rank() const { return rank_; }
    const std::vector<int>& blocks() const { return blocks_; }

    /// Basis vectors as rows, in doubled coordinates (2x is integral).
    IntMatrix basis_doubled() const;
    GramMatrix gram() const;
    bool contains_doubled(std::span<const Int> y) const;

    /// N(L, T), exact.
    std::uint64_t count(const EvenSymMatrix& t) const;

private:
    std::vector<int> blocks_;
    int rank_ = 0;
};

/// Options for the truncated theta-series evaluation.
struct ThetaSeriesOptions {
    double lambda_floor = 0.05;
    /// Largest diagonal entry allowed in the truncated sum, indexed by genus.
    std::array<Int, 5> max_diag_ceiling = {0, 16, 8, 6, 4};
    Limits limits{};
};

/// Result of a truncated theta series: value plus the certified tail bound.
struct ThetaSeriesValue {
    Complex value;
    Int cutoff = 0;     ///< largest diagonal entry included
    double tail = 0.0;  ///< bound on the discarded terms
};

/// Genus-g theta series sum_T N(S,T) exp(pi i Tr(T tau)), truncated so the
/// discarded tail is below tol.
ThetaSeriesValue lattice_theta_series(const GramMatrix& s, const SiegelPoint& tau, double tol,
                                      const ThetaSeriesOptions& opts = {});
ThetaSeriesValue lattice_theta_series(const DnPlusLattice& l, const SiegelPoint& tau, double tol,
                                      const ThetaSeriesOptions& opts = {});

inline Complex lattice_theta_value(const GramMatrix& s, const SiegelPoint& tau, double tol,
                                   const ThetaSeriesOptions& opts = {}) {
    return lattice_theta_series(s, tau, tol, opts).value;
}
inline Complex lattice_theta_value(const DnPlusLattice& l, const SiegelPoint& tau, double tol,
                                   const ThetaSeriesOptions& opts = {}) {
    return lattice_theta_series(l, tau, tol, opts).value;
}

/// exp(pi i Tr(T tau)).
Complex fourier_term(const EvenSymMatrix& t, const SiegelPoint& tau);

/// One row of the comparison table between the two rank-16 lattices.
struct CoefficientRow {
    EvenSymMatrix target;
    std::uint64_t n_e8e8 = 0;
    std::uint64_t n_d16 = 0;
    std::int64_t difference() const {
        return static_cast<std::int64_t>(n_e8e8) - static_cast<std::int64_t>(n_d16);
    }
};

struct CoefficientTable {
    int genus = 0;
    TargetRegion region;
    std::vector<CoefficientRow> rows;  ///< sorted lexicographically by target
};

/// N(E8+E8, T) and N(D16+, T) for every target of enumerate_targets(g, region).
/// Counts are shared across targets with equal reduced canonical form.
CoefficientTable coefficient_table(int g, const TargetRegion& region);
inline CoefficientTable coefficient_table(int g, Int max_diag) { return coefficient_table(g, TargetRegion::box(max_diag)); }

/// The same counts, one row per distinct reduced canonical form.
CoefficientTable coefficient_classes(int g, const TargetRegion& region);
/// Full table from a class table; throws ValidationError on a missing class.
CoefficientTable expand_classes(const CoefficientTable& classes);

/// CSV: flattened T entries, N_E8+E8, N_D16+, difference.
std::string to_csv(const CoefficientTable& table);
/// Canonical text: "# genus g " + region.describe(), then one sorted line per row,
/// "[[..]] n_e8e8 n_d16plus difference".
std::string to_text(const CoefficientTable& table);
CoefficientTable parse_text(std::string_view text);

}  // namespace siegel::lattice
