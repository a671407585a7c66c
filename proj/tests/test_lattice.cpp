#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include "siegel/error.hpp"
#include "siegel/lattice.hpp"
#include "siegel/schottky.hpp"

using namespace siegel;
using namespace siegel::lattice;

namespace {

// Number of vectors of norm `norm` in D_n^+, by a direct count over doubled
// coordinates y = 2x: either all y_i even or all odd, sum(y) = 0 mod 4.
std::uint64_t dn_plus_norm_count(int n, Int norm) {
    const Int target = 4 * norm;  // sum of y_i^2
    std::uint64_t total = 0;
    for (int odd = 0; odd < 2; ++odd) {
        // ways[s][r]: coordinates so far with sum of squares s and sum = r mod 4
        std::vector<std::array<std::uint64_t, 4>> ways(target + 1);
        ways[0][0] = 1;
        for (int i = 0; i < n; ++i) {
            std::vector<std::array<std::uint64_t, 4>> next(target + 1);
            for (Int s = 0; s <= target; ++s)
                for (int r = 0; r < 4; ++r) {
                    if (ways[s][r] == 0) continue;
                    for (Int y = -8; y <= 8; ++y) {
                        if (((y % 2) != 0) != (odd == 1)) continue;
                        if (s + y * y > target) continue;
                        next[s + y * y][((r + y) % 4 + 4) % 4] += ways[s][r];
                    }
                }
            ways = std::move(next);
        }
        total += ways[target][0];
    }
    return total;
}

// Vectors of norm <= max_norm by brute force over a coordinate box that
// provably contains them: |v_i| <= sqrt(max_norm * (S^-1)_ii).
std::map<Int, std::size_t> box_counts(const GramMatrix& s, Int max_norm) {
    const int n = s.dim();
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = double(s(i, j));
    const Eigen::MatrixXd inv = m.inverse();
    std::vector<int> bound(n);
    for (int i = 0; i < n; ++i) bound[i] = int(std::floor(std::sqrt(double(max_norm) * inv(i, i)) + 1e-9));
    std::map<Int, std::size_t> out;
    std::vector<int> v(n);
    std::function<void(int)> rec = [&](int i) {
        if (i == n) {
            Int q = 0;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) q += Int(v[a]) * s(a, b) * v[b];
            if (q > 0 && q <= max_norm) ++out[q];
            return;
        }
        for (v[i] = -bound[i]; v[i] <= bound[i]; ++v[i]) rec(i + 1);
    };
    rec(0);
    return out;
}

GramMatrix random_gram(std::mt19937_64& rng, int n) {
    std::uniform_int_distribution<int> off(-2, 2), diag(1, 3);
    for (;;) {
        IntMatrix m(n, n);
        for (int i = 0; i < n; ++i) {
            m(i, i) = 2 * diag(rng);
            for (int j = i + 1; j < n; ++j) m(i, j) = m(j, i) = off(rng);
        }
        if (is_positive_definite(m)) return GramMatrix(m);
    }
}

IntMatrix random_unimodular(std::mt19937_64& rng, int n) {
    IntMatrix u = IntMatrix::identity(n);
    std::uniform_int_distribution<int> idx(0, n - 1), mult(-1, 1);
    for (int step = 0; step < 12; ++step) {
        const int i = idx(rng), j = idx(rng);
        if (i == j) continue;
        const int k = mult(rng);
        for (int r = 0; r < n; ++r) u(r, i) += k * u(r, j);
    }
    CHECK(std::abs(determinant(u)) == 1);
    return u;
}

// Jacobi theta_2, theta_3, theta_4 at nome q = exp(pi i tau), by direct sums.
struct Jacobi {
    Complex t2, t3, t4;
};

Jacobi jacobi(Complex tau) {
    Jacobi j{0, 0, 0};
    const Complex pi_i(0, std::numbers::pi);
    for (int n = -40; n <= 40; ++n) {
        const Complex e = std::exp(pi_i * tau * double(n) * double(n));
        j.t3 += e;
        j.t4 += (n % 2 ? -1.0 : 1.0) * e;
        j.t2 += std::exp(pi_i * tau * (n + 0.5) * (n + 0.5));
    }
    return j;
}

const EvenSymMatrix kD4{{2, -1, 0, 0}, {-1, 2, -1, -1}, {0, -1, 2, 0}, {0, -1, 0, 2}};

}  // namespace

TEST_CASE("unimodular Gram matrices") {
    const GramMatrix e8 = gram_e8();
    const GramMatrix d16 = gram_d16_plus();
    CHECK(e8.dim() == 8);
    CHECK(d16.dim() == 16);
    CHECK(e8.determinant() == 1);
    CHECK(d16.determinant() == 1);
    for (const auto* s : {&e8, &d16})
        for (int i = 0; i < s->dim(); ++i) CHECK((*s)(i, i) % 2 == 0);
    const GramMatrix e8e8 = direct_sum(e8, e8);
    CHECK(e8e8.dim() == 16);
    CHECK(e8e8.determinant() == 1);
}

TEST_CASE("Gram basis spans the D_n^+ lattice") {
    for (const auto& l : {DnPlusLattice::e8(), DnPlusLattice::e8_e8(), DnPlusLattice::d16_plus()}) {
        const IntMatrix b = l.basis_doubled();
        for (int r = 0; r < b.rows(); ++r) CHECK(l.contains_doubled(b.row(r)));
        // Basis vectors of a unimodular lattice with the right determinant span it.
        CHECK(l.gram().determinant() == 1);
    }
}

TEST_CASE("E8 shells against the coordinate count") {
    const VectorTable t = short_vectors(gram_e8(), 6);
    CHECK(t.count(2) == 240);
    CHECK(t.representative_count(2) == 120);
    for (Int norm : {2, 4, 6}) CHECK(t.count(norm) == dn_plus_norm_count(8, norm));
    CHECK(dn_plus_norm_count(8, 4) == 2160);
    CHECK(short_vectors(gram_e8(), 0).total_count() == 0);
    // Minimum nonzero norm is 2: nothing below it.
    CHECK(short_vectors(gram_e8(), 1).total_count() == 0);
}

TEST_CASE("rank-16 shells") {
    const VectorTable d16 = short_vectors(gram_d16_plus(), 4);
    const VectorTable e8e8 = short_vectors(direct_sum(gram_e8(), gram_e8()), 4);
    CHECK(d16.count(2) == 480);
    CHECK(d16.count(4) == 61920);
    CHECK(e8e8.count(2) == 480);
    CHECK(e8e8.count(4) == 61920);
    CHECK(dn_plus_norm_count(16, 2) == 480);
    CHECK(dn_plus_norm_count(16, 4) == 61920);
}

TEST_CASE("short_vectors matches box enumeration on random Gram matrices") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + trial % 3;
        const GramMatrix s = random_gram(rng, n);
        const Int max_norm = 12;
        const VectorTable t = short_vectors(s, max_norm);
        const auto oracle = box_counts(s, max_norm);
        std::size_t total = 0;
        for (const auto& [norm, count] : oracle) {
            CHECK(t.count(norm) == count);
            total += count;
        }
        CHECK(t.total_count() == total);
        for (Int norm : t.norms()) {
            std::set<std::vector<std::int32_t>> seen;
            for (const auto& v : t.vectors(norm, true)) {
                Int q = 0;
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) q += Int(v[a]) * s(a, b) * v[b];
                CHECK(q == norm);
                CHECK(seen.insert(v).second);
            }
        }
    }
}

TEST_CASE("short_vectors respects the ceiling") {
    Limits tight;
    tight.max_vectors = 1000;
    CHECK_THROWS_AS(short_vectors(gram_e8(), 4, tight), ResourceLimitError);
}

TEST_CASE("representation counts, small cases") {
    const GramMatrix e8 = gram_e8();
    CHECK(representation_count(e8, EvenSymMatrix{{0}}) == 1);
    CHECK(representation_count(e8, EvenSymMatrix{{2}}) == 240);
    CHECK(representation_count(e8, EvenSymMatrix{{2, 0}, {0, 2}}) == 240 * 126);
    const auto e8e8 = direct_sum(e8, e8);
    const auto d16 = gram_d16_plus();
    const EvenSymMatrix two_i{{2, 0}, {0, 2}};
    CHECK(representation_count(e8e8, two_i) == representation_count(d16, two_i));
    CHECK(DnPlusLattice::e8_e8().count(two_i) == representation_count(e8e8, two_i));
}

TEST_CASE("coordinate program agrees with column extension") {
    const auto e8 = gram_e8();
    const auto e8e8 = direct_sum(e8, e8);
    const auto d16 = gram_d16_plus();
    for (const auto& t : enumerate_targets(2, 4)) CHECK(DnPlusLattice::e8().count(t) == representation_count(e8, t));
    for (const auto& t : enumerate_targets(3, 2)) {
        CHECK(DnPlusLattice::e8_e8().count(t) == representation_count(e8e8, t));
        CHECK(DnPlusLattice::d16_plus().count(t) == representation_count(d16, t));
    }
}

TEST_CASE("genus-1 convolution") {
    const auto e8 = DnPlusLattice::e8();
    const auto e8e8 = DnPlusLattice::e8_e8();
    for (Int n = 0; n <= 6; ++n) {
        std::uint64_t conv = 0;
        for (Int k = 0; k <= n; ++k) conv += e8.count(EvenSymMatrix{{2 * k}}) * e8.count(EvenSymMatrix{{2 * (n - k)}});
        CHECK(e8e8.count(EvenSymMatrix{{2 * n}}) == conv);
    }
}

TEST_CASE("Witt cancellation below rank 4 (quick region)") {
    const auto a = DnPlusLattice::e8_e8();
    const auto b = DnPlusLattice::d16_plus();
    for (int g = 1; g <= 3; ++g)
        for (const auto& t : enumerate_targets(g, g == 3 ? 4 : 6)) CHECK(a.count(t) == b.count(t));
}

TEST_CASE("basis independence") {
    std::mt19937_64 rng(5);
    const GramMatrix e8 = gram_e8();
    const std::vector<EvenSymMatrix> targets = {EvenSymMatrix{{4}}, EvenSymMatrix{{2, 1}, {1, 2}},
                                                EvenSymMatrix{{2, 0}, {0, 4}}};
    for (int trial = 0; trial < 3; ++trial) {
        const IntMatrix u = random_unimodular(rng, 8);
        const GramMatrix moved(u.transpose() * e8.entries() * u);
        for (const auto& t : targets) CHECK(representation_count(moved, t) == representation_count(e8, t));
    }
}

TEST_CASE("genus-4 separation at D4") {
    const std::uint64_t a = DnPlusLattice::e8_e8().count(kD4);
    const std::uint64_t b = DnPlusLattice::d16_plus().count(kD4);
    CHECK(a == 7257600);
    CHECK(b == 2096640);
    // The column-extension count over the Gram matrices agrees.
    CHECK(representation_count(direct_sum(gram_e8(), gram_e8()), kD4) == a);
    CHECK(representation_count(gram_d16_plus(), kD4) == b);
    // Nothing of smaller trace separates: every genus-4 target of trace < 8
    // with all columns nonzero has a diagonal entry 0 or trace 8.
    for (const auto& t : enumerate_targets(4, 2))
        if (t.trace() < 8) CHECK(DnPlusLattice::e8_e8().count(t) == DnPlusLattice::d16_plus().count(t));
}

TEST_CASE("enumerate_targets") {
    const auto g1 = enumerate_targets(1, 4);
    REQUIRE(g1.size() == 3);
    CHECK(g1[0] == EvenSymMatrix{{0}});
    CHECK(g1[1] == EvenSymMatrix{{2}});
    CHECK(g1[2] == EvenSymMatrix{{4}});

    // Direct listing for g = 2, diagonal in {0, 2}.
    std::set<IntMatrix> oracle;
    for (Int a : {0, 2})
        for (Int c : {0, 2})
            for (Int b = -2; b <= 2; ++b) {
                IntMatrix m{{a, b}, {b, c}};
                if (is_positive_semidefinite(m)) oracle.insert(m);
            }
    std::set<IntMatrix> got;
    for (const auto& t : enumerate_targets(2, 2)) CHECK(got.insert(t.entries()).second);
    CHECK(got == oracle);
    CHECK(got.count(IntMatrix{{2, 0}, {0, 2}}) == 1);
    CHECK(got.count(IntMatrix{{2, 1}, {1, 2}}) == 1);

    const auto g4 = enumerate_targets(4, 2);
    CHECK(std::find(g4.begin(), g4.end(), kD4) != g4.end());
    CHECK(std::is_sorted(g4.begin(), g4.end()));
}

TEST_CASE("trace-capped region") {
    const TargetRegion r{6, 4, 12};
    r.validate();
    CHECK_FALSE(r.is_box());
    CHECK(r.describe() == "max_diag 6 trace_free_diag 4 max_trace 12");
    CHECK(TargetRegion::box(4).describe() == "max_diag 4");
    CHECK(r.contains(EvenSymMatrix{{6, 0}, {0, 6}}));
    CHECK(r.contains(EvenSymMatrix{{4, 0, 0, 0}, {0, 4, 0, 0}, {0, 0, 4, 0}, {0, 0, 0, 4}}));
    CHECK_FALSE(r.contains(EvenSymMatrix{{6, 0, 0, 0}, {0, 4, 0, 0}, {0, 0, 2, 0}, {0, 0, 0, 2}}));
    CHECK(r.contains(EvenSymMatrix{{6, 0, 0, 0}, {0, 2, 0, 0}, {0, 0, 2, 0}, {0, 0, 0, 2}}));
    CHECK_THROWS_AS((TargetRegion{5, 4, 12}).validate(), ValidationError);
    const auto box = enumerate_targets(3, 4);
    const auto capped = enumerate_targets(3, TargetRegion{6, 4, 12});
    for (const auto& t : box) CHECK(std::binary_search(capped.begin(), capped.end(), t));
}

TEST_CASE("reduced canonical form") {
    const EvenSymMatrix t{{2, 0, 1}, {0, 0, 0}, {1, 0, 4}};
    const EvenSymMatrix r = reduced_canonical_form(t);
    CHECK(r.size() == 2);
    CHECK(DnPlusLattice::e8_e8().count(t) == DnPlusLattice::e8_e8().count(r));
    CHECK(reduced_canonical_form(EvenSymMatrix{{2, -1}, {-1, 2}}) == reduced_canonical_form(EvenSymMatrix{{2, 1}, {1, 2}}));
}

TEST_CASE("theta series of E8 at tau = i") {
    const SiegelPoint tau = SiegelPoint::scaled_identity(1, 1.0);
    const auto j = jacobi(Complex(0, 1));
    // theta_E8 = (theta_2^8 + theta_3^8 + theta_4^8) / 2
    const Complex oracle = 0.5 * (std::pow(j.t2, 8) + std::pow(j.t3, 8) + std::pow(j.t4, 8));
    const auto gram = lattice_theta_series(gram_e8(), tau, 1e-11);
    const auto coord = lattice_theta_series(DnPlusLattice::e8(), tau, 1e-11);
    CHECK(gram.tail < 1e-11);
    CHECK(std::abs(gram.value - oracle) < 1e-10);
    CHECK(std::abs(coord.value - oracle) < 1e-10);
}

TEST_CASE("theta series factorizes over direct sums") {
    for (double t : {1.0, 1.3}) {
        const SiegelPoint tau(Eigen::MatrixXcd::Constant(1, 1, Complex(0.3, t)));
        const Complex e8 = lattice_theta_value(DnPlusLattice::e8(), tau, 1e-11);
        const Complex e8e8 = lattice_theta_value(DnPlusLattice::e8_e8(), tau, 1e-11);
        CHECK(std::abs(e8e8 - e8 * e8) < 1e-10);
    }
    const Complex far = lattice_theta_value(gram_e8(), SiegelPoint::scaled_identity(1, 8.0), 1e-12);
    CHECK(std::abs(far - 1.0) < 1e-10);
}

TEST_CASE("genus-2 theta series agrees for both rank-16 lattices") {
    const SiegelPoint tau(Eigen::MatrixXd{{0.1, 0.2}, {0.2, -0.3}}, Eigen::MatrixXd{{1.7, 0.3}, {0.3, 1.6}});
    const auto a = lattice_theta_series(DnPlusLattice::e8_e8(), tau, 1e-8);
    const auto b = lattice_theta_series(DnPlusLattice::d16_plus(), tau, 1e-8);
    CHECK(std::abs(a.value - b.value) < 2e-8);
    const Complex e8 = lattice_theta_value(DnPlusLattice::e8(), tau, 1e-10);
    CHECK(std::abs(a.value - e8 * e8) < 2e-8);
}

TEST_CASE("cutoff infeasible") {
    ThetaSeriesOptions opts;
    opts.max_diag_ceiling[1] = 2;
    CHECK_THROWS_AS(lattice_theta_series(gram_e8(), SiegelPoint::scaled_identity(1, 0.5), 1e-12, opts),
                    CutoffInfeasibleError);
}

TEST_CASE("table formats") {
    const CoefficientTable table = coefficient_table(2, 2);
    const std::string text = to_text(table);
    CHECK(text.rfind("# genus 2 max_diag 2\n", 0) == 0);
    const CoefficientTable back = parse_text(text);
    CHECK(back.genus == 2);
    CHECK(back.region == table.region);
    REQUIRE(back.rows.size() == table.rows.size());
    for (std::size_t k = 0; k < back.rows.size(); ++k) {
        CHECK(back.rows[k].target == table.rows[k].target);
        CHECK(back.rows[k].n_e8e8 == table.rows[k].n_e8e8);
        CHECK(back.rows[k].difference() == 0);
    }
    const std::string csv = to_csv(table);
    CHECK(csv.find("2,0,0,2,") != std::string::npos);
    CHECK_THROWS_AS(parse_text("# genus 2 max_diag 2\n[[2]] 240 240 1\n"), ValidationError);
    CHECK_THROWS_AS(parse_text("[[2]] 240 240 0\n"), ValidationError);
}

TEST_CASE("shipped genus-4 class table") {
    const CoefficientTable classes = parse_text(schottky::default_class_table());
    CHECK(classes.genus == 4);
    CHECK(classes.region == (TargetRegion{6, 4, 12}));
    CHECK(classes.rows.size() == 1635);
    std::size_t rechecked = 0;
    for (std::size_t k = 0; k < classes.rows.size(); ++k) {
        const auto& row = classes.rows[k];
        if (row.target.rank() < 4) CHECK(row.difference() == 0);
        if (row.target.entries() == reduced_canonical_form(kD4).entries()) CHECK(row.difference() == 5160960);
        // Recount a spread-out sample of classes from scratch.
        if (k % 163 == 0) {
            CHECK(DnPlusLattice::e8_e8().count(row.target) == row.n_e8e8);
            CHECK(DnPlusLattice::d16_plus().count(row.target) == row.n_d16);
            ++rechecked;
        }
    }
    CHECK(rechecked >= 10);
}
