#include <doctest.h>

#include <array>
#include <fstream>
#include <map>

#include <boost/rational.hpp>
#include <json.hpp>

#include "siegel/error.hpp"
#include "siegel/sampling.hpp"
#include "siegel/schottky.hpp"

using namespace siegel;
using namespace siegel::schottky;

namespace {

// Polynomials in r1, r2, r3 over the rationals.
struct Poly {
    std::map<std::array<int, 3>, boost::rational<long>> terms;

    Poly() = default;
    Poly(long c) {
        if (c != 0) terms[{0, 0, 0}] = c;
    }
    static Poly var(int i) {
        Poly p;
        std::array<int, 3> e{};
        e[i] = 1;
        p.terms[e] = 1;
        return p;
    }
    Poly& clean() {
        std::erase_if(terms, [](const auto& kv) { return kv.second == boost::rational<long>(0); });
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) {
        for (const auto& [e, c] : b.terms) a.terms[e] += c;
        return a.clean();
    }
    friend Poly operator-(Poly a, const Poly& b) {
        for (const auto& [e, c] : b.terms) a.terms[e] -= c;
        return a.clean();
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly out;
        for (const auto& [ea, ca] : a.terms)
            for (const auto& [eb, cb] : b.terms) out.terms[{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}] += ca * cb;
        return out.clean();
    }
    bool operator==(const Poly&) const = default;
};

std::vector<SiegelPoint> generic_points(int g, int count, std::uint64_t seed) {
    return sampling::PointSampler(seed).points(g, count);
}

// F from the classical expression in all 136 even genus-4 theta constants:
// (2^-4 sum theta^8)^2 - 2^-4 sum theta^16, in binary128.
Complex oracle_F(const SiegelPoint& tau) {
    const auto th = theta::theta_constants_quad(theta::even_characteristics(4), tau, 1e-30);
    theta::QuadComplex s8(0), s16(0);
    for (const auto& t : th) {
        theta::QuadComplex t2 = t * t, t4 = t2 * t2, t8 = t4 * t4;
        s8 += t8;
        s16 += t8 * t8;
    }
    const theta::QuadComplex a = s8 / theta::Quad(16);
    const theta::QuadComplex f = a * a - s16 / theta::Quad(16);
    return {static_cast<double>(f.real()), static_cast<double>(f.imag())};
}

SiegelPoint block_point(std::uint64_t seed) {
    sampling::PointSampler s(seed);
    return SiegelPoint::block_diagonal(s.point(3), s.point(1));
}

nlohmann::json fixture() {
    std::ifstream in(SIEGEL_DATA_DIR "/proportionality.json");
    REQUIRE(in);
    return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("square relation factors into the four sign variants") {
    const Poly r1 = Poly::var(0), r2 = Poly::var(1), r3 = Poly::var(2);
    const Poly lhs = square_relation_value(r1, r2, r3);
    const Poly product = (r1 - r2 - r3) * (r1 + r2 + r3) * (r1 - r2 + r3) * (r1 + r2 - r3);
    CHECK(lhs == product);
    CHECK_FALSE(lhs == Poly(-1) * product);
    CHECK(lhs.terms.size() == 6);
}

TEST_CASE("square relation values") {
    CHECK(square_relation_value(1.0, 1.0, 0.0) == 0.0);
    CHECK(square_relation_value(3.0, 2.0, 1.0) == 0.0);
    CHECK(square_relation_value(1.0, 1.0, 1.0) == -3.0);
}

TEST_CASE("coefficient invariants") {
    const auto& coeffs = default_coefficients();
    CHECK(coeffs.region == (lattice::TargetRegion{6, 4, 12}));
    REQUIRE(coeffs.targets.size() == coeffs.diffs.size());
    CHECK(coeffs.targets.size() == 183315);
    std::size_t nonzero = 0;
    for (std::size_t k = 0; k < coeffs.targets.size(); ++k) {
        if (coeffs.targets[k].rank() < 4) CHECK(coeffs.diffs[k] == 0);
        if (coeffs.diffs[k] != 0) ++nonzero;
    }
    CHECK(nonzero == coeffs.nonzero_count());
    const lattice::EvenSymMatrix zero{{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}};
    CHECK(lattice::DnPlusLattice::e8_e8().count(zero) == 1);
    CHECK(lattice::DnPlusLattice::d16_plus().count(zero) == 1);
}

TEST_CASE("recomputed coefficients for the box of diagonal 2") {
    const auto fresh = schottky_coefficients(lattice::TargetRegion::box(2));
    const auto& shipped = default_coefficients();
    for (std::size_t k = 0; k < fresh.targets.size(); ++k) {
        const auto it = std::lower_bound(shipped.targets.begin(), shipped.targets.end(), fresh.targets[k]);
        REQUIRE(it != shipped.targets.end());
        REQUIRE(*it == fresh.targets[k]);
        CHECK(shipped.diffs[std::size_t(it - shipped.targets.begin())] == fresh.diffs[k]);
    }
}

TEST_CASE("F_lattice agrees with the theta-constant expression") {
    for (const auto& tau : generic_points(4, 3, 11)) {
        const auto series = F_lattice_series(tau, 1e-3);
        const Complex oracle = oracle_F(tau);
        CHECK(std::abs(series.value - oracle) < 1e-6 * std::abs(oracle));
        CHECK(std::abs(series.value - oracle) <= series.tail);
    }
}

TEST_CASE("F_lattice at 2i I vanishes") {
    // A diagonal point is a product of elliptic curves.
    const auto series = F_lattice_series(SiegelPoint::scaled_identity(4, 2.0), 1e-12);
    CHECK(series.magnitude > 0);
    CHECK(std::abs(series.value) < 1e-12 * series.magnitude);
    CHECK(std::abs(F_theta(SiegelPoint::scaled_identity(4, 2.0))) < 1e-12 * series.magnitude);
}

TEST_CASE("F_lattice along a ray i t M") {
    const auto& coeffs = default_coefficients();
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(4, 4);
    m(0, 1) = m(1, 0) = 0.1;
    m(1, 2) = m(2, 1) = -0.15;
    m(2, 3) = m(3, 2) = 0.12;
    m(0, 3) = m(3, 0) = 0.08;
    auto ray = [&](double t) { return SiegelPoint(Eigen::MatrixXd::Zero(4, 4), t * m); };
    const auto series = F_lattice_series(ray(2.0), 1e-12);
    double bound = 0;
    double trace8 = 0;
    for (std::size_t k = 0; k < coeffs.targets.size(); ++k) {
        double tr = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) tr += double(coeffs.targets[k](i, j)) * 2.0 * m(j, i);
        const double term = double(coeffs.diffs[k]) * std::exp(-std::numbers::pi * tr);
        bound += std::abs(term);
        if (coeffs.targets[k].trace() == 8) trace8 += term;
    }
    CHECK(std::abs(series.value) <= bound);
    CHECK(std::abs(series.value.imag()) < 1e-12 * std::abs(series.value));
    // The first nonzero coefficients sit at trace 8.
    CHECK(std::abs(series.value - trace8) < 1e-2 * std::abs(trace8));
    double last = std::abs(series.value);
    for (double t : {2.5, 3.0, 4.0}) {
        const double v = std::abs(F_lattice(ray(t), 1e-12));
        CHECK(v < last);
        last = v;
    }
}

TEST_CASE("F near 2i I grows like the eighth power of the real perturbation") {
    Eigen::MatrixXd r(4, 4);
    r << 0.3, -0.7, 0.2, 0.5, -0.7, -0.4, 0.6, -0.3, 0.2, 0.6, 0.1, -0.8, 0.5, -0.3, -0.8, 0.4;
    auto point = [&](double s) { return SiegelPoint(s * r, 2.0 * Eigen::MatrixXd::Identity(4, 4)); };
    const double f1 = std::abs(oracle_F(point(0.1)));
    const double f2 = std::abs(oracle_F(point(0.2)));
    CHECK(f2 / f1 > 128.0);
    CHECK(f2 / f1 < 512.0);
    CHECK(std::abs(F_lattice(point(0.2), 1e-12) - oracle_F(point(0.2))) < 1e-6 * f2);
    // At scale 0.1 such points still look like Jacobians to the indicator.
    CHECK(schottky_indicator(point(0.1), 1e-3) < 1e-3);
    Eigen::MatrixXd d = r.diagonal().asDiagonal();
    CHECK(schottky_indicator(SiegelPoint(0.1 * d, 2.0 * Eigen::MatrixXd::Identity(4, 4)), 1e-3) < 1e-12);
}

TEST_CASE("F vanishes on block-diagonal points") {
    for (std::uint64_t seed : {1, 2, 3}) {
        const SiegelPoint tau = block_point(seed);
        CHECK(schottky_indicator(tau, 1e-3) < 1e-6);
        const auto series = F_lattice_series(tau, 1e-3);
        CHECK(std::abs(F_theta(tau)) < 1e-6 * series.magnitude * 4.0 / 315.0);
    }
}

TEST_CASE("genus-3 relation") {
    const auto terms = relation_terms(SiegelPoint::scaled_identity(3, 2.0), 1e-12);
    CHECK(terms.residual() < 1e-10);
    for (const auto& tau : generic_points(3, 20, 7)) CHECK(relation_terms(tau, 1e-12).residual() < 1e-8);
    // Each characteristic in the relation is even.
    for (const auto& row : relation_characteristics()) {
        REQUIRE(row.size() == 4);
        for (const auto& c : row) CHECK(c.parity() == theta::Parity::even);
    }
}

TEST_CASE("relation terms factor at diagonal points") {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
    const Complex t[3] = {{0.1, 1.2}, {-0.2, 0.9}, {0.3, 1.4}};
    for (int i = 0; i < 3; ++i) m(i, i) = t[i];
    const SiegelPoint tau(m);
    const auto terms = relation_terms(tau, 1e-12);
    const auto& rel = relation_characteristics();
    const Complex rs[3] = {terms.r1, terms.r2, terms.r3};
    for (int i = 0; i < 3; ++i) {
        Complex prod = 1;
        for (const auto& c : rel[std::size_t(i)])
            for (int k = 0; k < 3; ++k) {
                const theta::Characteristic one({c.eps()[std::size_t(k)]}, {c.eps_prime()[std::size_t(k)]});
                prod *= theta::theta_constant(one, SiegelPoint(Eigen::MatrixXcd::Constant(1, 1, t[k])), 1e-12);
            }
        CHECK(std::abs(rs[i] - prod) < 1e-11);
    }
}

TEST_CASE("squared coordinates") {
    const auto sq = sq_coordinates(SiegelPoint::scaled_identity(3, 2.0), 1e-12);
    REQUIRE(sq.size() == 36);
    double largest = 0;
    const auto evens3 = theta::even_characteristics(3);
    for (std::size_t k = 0; k < sq.size(); ++k) {
        const auto& v = sq[k];
        const auto& c = evens3[k];
        // Zero exactly when some coordinate carries the odd genus-1 characteristic.
        bool odd_factor = false;
        for (int i = 0; i < 3; ++i) odd_factor = odd_factor || (c.eps()[std::size_t(i)] && c.eps_prime()[std::size_t(i)]);
        if (odd_factor)
            CHECK(std::abs(v) < 1e-20);
        else
            CHECK(v.real() > 0);
        CHECK(std::abs(v.imag()) < 1e-12);
        largest = std::max(largest, std::abs(v));
    }
    CHECK(largest == doctest::Approx(1.0));
    for (const auto& tau : generic_points(3, 5, 13)) CHECK(std::abs(square_relation_on_coordinates(sq_coordinates(tau, 1e-12))) < 1e-9);
    CHECK_THROWS_AS(square_relation_on_coordinates(std::vector<Complex>(10)), ValidationError);

    // Block point: coordinates are products of lower-genus squares.
    sampling::PointSampler s(14);
    const SiegelPoint a = s.point(2), b = s.point(1);
    const auto block = theta::theta_constants(theta::even_characteristics(3), SiegelPoint::block_diagonal(a, b), 1e-12);
    const auto sqb = sq_coordinates(SiegelPoint::block_diagonal(a, b), 1e-12);
    const auto evens = theta::even_characteristics(3);
    std::size_t idx = 0;
    const auto it = std::max_element(block.begin(), block.end(), [](auto x, auto y) { return std::abs(x * x) < std::abs(y * y); });
    const Complex scale = (*it) * (*it);
    for (const auto& c : evens) {
        const theta::Characteristic c2({c.eps()[0], c.eps()[1]}, {c.eps_prime()[0], c.eps_prime()[1]});
        const theta::Characteristic c1({c.eps()[2]}, {c.eps_prime()[2]});
        const Complex prod = theta::theta_constant(c2, a, 1e-12) * theta::theta_constant(c1, b, 1e-12);
        CHECK(std::abs(sqb[idx] - prod * prod / scale) < 1e-10);
        ++idx;
    }
}

TEST_CASE("F_theta is a fixed multiple of F") {
    const auto fx = fixture();
    const double stored = fx["constant"].get<double>();
    for (const auto& tau : generic_points(4, 3, 11)) {
        const Complex ratio = F_theta(tau) / oracle_F(tau);
        CHECK(std::abs(ratio - stored) < 1e-12);
    }
    CHECK(stored == doctest::Approx(4.0 / 315.0).epsilon(1e-14));
}

TEST_CASE("proportionality fit") {
    const auto fx = fixture();
    const auto pts = generic_points(4, fx["points"].get<int>(), fx["seed"].get<std::uint64_t>());
    const auto fit = proportionality(pts, 1e-3);
    CHECK(fit.points_used == pts.size());
    CHECK(fit.max_rel_deviation < 1e-6);
    CHECK(std::abs(fit.constant - fx["constant"].get<double>()) < 1e-9);

    const auto one = proportionality({pts[0]}, 1e-3);
    CHECK(one.points_used == 1);
    CHECK(one.max_rel_deviation < 1e-15);

    CHECK_THROWS_AS(proportionality({block_point(1), block_point(2)}, 1e-3), DegenerateError);
}

TEST_CASE("tail bounds and errors") {
    const lattice::TargetRegion region{6, 4, 12};
    CHECK(region_tail(region, 2.0) < region_tail(region, 1.5));
    CHECK(region_tail(region, 1.5) < region_tail(lattice::TargetRegion::box(4), 1.5));
    CHECK(std::isinf(rank16_shell_tail(0.1, 2)));
    // Exact partial sums of the norm-2 and norm-4 shells lie below the bound.
    const double q = std::exp(-std::numbers::pi * 1.0);
    CHECK(480 * q * q + 61920 * std::pow(q, 4) < rank16_shell_tail(1.0, 2));
    CHECK_THROWS_AS(F_lattice(SiegelPoint::scaled_identity(4, 1.0), 1e-12), CutoffInfeasibleError);
    CHECK_THROWS_AS(F_lattice(SiegelPoint::scaled_identity(3, 2.0), 1e-3), ValidationError);
    CHECK_THROWS_AS(F_theta(SiegelPoint::scaled_identity(3, 2.0)), ValidationError);
    CHECK_THROWS_AS(relation_terms(SiegelPoint::scaled_identity(4, 2.0), 1e-10), ValidationError);
}
