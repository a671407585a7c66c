#include "siegel/schottky.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <cmath>
#include <limits>
#include <numbers>

#include "siegel/error.hpp"

namespace siegel::schottky {

namespace detail {
extern const char* const kClassTable;
}

namespace {

using lattice::EvenSymMatrix;
using theta::Characteristic;

constexpr int kGenus = 4;

double sigma7(Int n) {
    double s = 0;
    for (Int d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        s += std::pow(double(d), 7);
        if (d * d != n) s += std::pow(double(n / d), 7);
    }
    return s;
}

void require_genus(const SiegelPoint& tau, int g) {
    if (tau.genus() != g) throw ValidationError("expected a point of genus " + std::to_string(g));
}

Characteristic char_of(const char* text) { return Characteristic::parse(text); }

}  // namespace

std::size_t SchottkyCoefficients::nonzero_count() const {
    return static_cast<std::size_t>(std::count_if(diffs.begin(), diffs.end(), [](auto d) { return d != 0; }));
}

SchottkyCoefficients from_table(const lattice::CoefficientTable& table) {
    if (table.genus != kGenus) throw ValidationError("Schottky coefficients need a genus-4 table");
    SchottkyCoefficients out;
    out.region = table.region;
    out.targets.reserve(table.rows.size());
    out.diffs.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        out.targets.push_back(row.target);
        out.diffs.push_back(row.difference());
    }
    return out;
}

SchottkyCoefficients schottky_coefficients(const lattice::TargetRegion& region) {
    return from_table(lattice::coefficient_table(kGenus, region));
}

std::string_view default_class_table() { return detail::kClassTable; }

const SchottkyCoefficients& default_coefficients() {
    static const SchottkyCoefficients coeffs =
        from_table(lattice::expand_classes(lattice::parse_text(default_class_table())));
    return coeffs;
}

double rank16_shell_tail(double lambda, Int min_norm) {
    // Both rank-16 lattices have 480 sigma_7(n) vectors of norm 2n. Past the
    // point where the ratio bound ((n+1)/n)^7 exp(-2 pi lambda) drops to 1/2,
    // sigma_7(n) <= zeta(7) n^7 bounds the remainder geometrically.
    constexpr double zeta7 = 1.0083493;
    const double q = std::exp(-2 * std::numbers::pi * lambda);
    // The ratio test below needs q < 1/2; smaller lambda gives no useful bound.
    if (q >= 0.4) return std::numeric_limits<double>::infinity();
    Int n = std::max<Int>(1, (min_norm + 1) / 2);
    double total = 0;
    for (;; ++n) {
        total += 480 * sigma7(n) * std::pow(q, double(n));
        const double m = double(n + 1);
        const double rho = std::pow((m + 1) / m, 7) * q;
        if (rho <= 0.5) {
            const double rest = 480 * zeta7 * std::pow(m, 7) * std::pow(q, m) / (1 - rho);
            if (rest <= 1e-3 * total || rest == 0) return total + rest;
        }
    }
}

double region_tail(const lattice::TargetRegion& region, double lambda) {
    // Targets outside the region with c(T) != 0 have four nonzero columns and
    // either a column of norm > max_diag or trace > max_trace. Both lattices
    // contribute, and Tr(T Im tau) >= lambda Tr(T).
    const double a2 = rank16_shell_tail(lambda, 2);
    double bound = kGenus * rank16_shell_tail(lambda, region.max_diag + 2) * std::pow(a2, kGenus - 1);
    if (!region.is_box()) {
        // The rest have all columns of norm <= max_diag, some column above
        // trace_free_diag and trace > max_trace: a finite set of diagonals.
        auto shell = [&](Int norm) { return 480 * sigma7(norm / 2) * std::exp(-std::numbers::pi * lambda * double(norm)); };
        std::array<Int, kGenus> d{};
        std::function<void(int)> walk = [&](int i) {
            if (i == kGenus) {
                Int top = 0, trace = 0;
                double product = 1;
                for (Int v : d) {
                    top = std::max(top, v);
                    trace += v;
                    product *= shell(v);
                }
                if (top > region.trace_free_diag && trace > region.max_trace) bound += product;
                return;
            }
            for (Int v = 2; v <= region.max_diag; v += 2) {
                d[i] = v;
                walk(i + 1);
            }
        };
        walk(0);
    }
    return 2.0 * bound;
}

LatticeSeriesValue F_lattice_series(const SchottkyCoefficients& coeffs, const SiegelPoint& tau, double tol) {
    require_genus(tau, kGenus);
    if (!(tol > 0)) throw ValidationError("tolerance must be positive");
    LatticeSeriesValue out;
    out.tail = region_tail(coeffs.region, tau.min_imag_eigenvalue());
    if (!(out.tail < tol))
        throw CutoffInfeasibleError("tail bound " + sci(out.tail) + " exceeds tolerance " + sci(tol) +
                                    " for coefficients with " + coeffs.region.describe());
    const Eigen::MatrixXcd& m = tau.matrix();
    Complex sum = 0;
    double magnitude = 0;
    for (std::size_t k = 0; k < coeffs.targets.size(); ++k) {
        if (coeffs.diffs[k] == 0) continue;
        const auto& t = coeffs.targets[k];
        Complex tr = 0;
        for (int i = 0; i < kGenus; ++i)
            for (int j = 0; j < kGenus; ++j) tr += double(t(i, j)) * m(j, i);
        const Complex term = double(coeffs.diffs[k]) * std::exp(Complex(0, std::numbers::pi) * tr);
        sum += term;
        magnitude += std::abs(term);
    }
    out.value = sum;
    out.magnitude = magnitude;
    return out;
}

LatticeSeriesValue F_lattice_series(const SiegelPoint& tau, double tol) {
    return F_lattice_series(default_coefficients(), tau, tol);
}

double ThetaRelationTerms::residual() const {
    const double scale = std::abs(r1) + std::abs(r2) + std::abs(r3);
    return scale == 0 ? 0.0 : std::abs(r1 - r2 - r3) / scale;
}

const std::vector<std::vector<Characteristic>>& relation_characteristics() {
    static const std::vector<std::vector<Characteristic>> chars = {
        {char_of("000/000"), char_of("000/100"), char_of("000/010"), char_of("000/110")},
        {char_of("001/000"), char_of("001/100"), char_of("001/010"), char_of("001/110")},
        {char_of("000/001"), char_of("000/101"), char_of("000/011"), char_of("000/111")},
    };
    return chars;
}

ThetaRelationTerms relation_terms(const SiegelPoint& tau, double tol) {
    require_genus(tau, 3);
    std::vector<Characteristic> flat;
    for (const auto& row : relation_characteristics()) flat.insert(flat.end(), row.begin(), row.end());
    const auto th = theta::theta_constants(flat, tau, tol);
    Complex r[3];
    for (int i = 0; i < 3; ++i) r[i] = th[4 * i] * th[4 * i + 1] * th[4 * i + 2] * th[4 * i + 3];
    return {r[0], r[1], r[2]};
}

std::vector<Complex> sq_coordinates(const SiegelPoint& tau, double tol) {
    require_genus(tau, 3);
    const auto th = theta::theta_constants(theta::even_characteristics(3), tau, tol);
    std::vector<Complex> sq;
    sq.reserve(th.size());
    for (const auto& t : th) sq.push_back(t * t);
    const auto largest = std::max_element(sq.begin(), sq.end(), [](auto a, auto b) { return std::abs(a) < std::abs(b); });
    if (std::abs(*largest) < tol) throw DegenerateError("all squared theta constants are below tolerance");
    const Complex scale = *largest;
    for (auto& v : sq) v /= scale;
    return sq;
}

Complex square_relation_on_coordinates(const std::vector<Complex>& coords) {
    const auto evens = theta::even_characteristics(3);
    if (coords.size() != evens.size()) throw ValidationError("expected 36 projective coordinates");
    Complex p[3];
    const auto& rel = relation_characteristics();
    for (int i = 0; i < 3; ++i) {
        p[i] = 1;
        for (const auto& c : rel[i]) {
            const auto it = std::find(evens.begin(), evens.end(), c);
            p[i] *= coords[static_cast<std::size_t>(it - evens.begin())];
        }
    }
    return square_relation_in_squares(p[0], p[1], p[2]);
}

Complex F_theta(const SiegelPoint& tau, double tol) {
    require_genus(tau, kGenus);
    const Characteristic zero = char_of("0/0");
    const Characteristic one = char_of("0/1");
    std::vector<Characteristic> flat;
    for (const auto& row : relation_characteristics())
        for (const auto& c : row) {
            flat.push_back(c.concat(zero));
            flat.push_back(c.concat(one));
        }
    const auto th = theta::theta_constants_quad(flat, tau, tol);
    theta::QuadComplex p[3];
    for (int i = 0; i < 3; ++i) {
        p[i] = theta::QuadComplex(1);
        for (int k = 0; k < 8; ++k) p[i] *= th[8 * i + k];
    }
    const auto f = square_relation_in_squares(p[0], p[1], p[2]);
    return {static_cast<double>(f.real()), static_cast<double>(f.imag())};
}

ProportionalityFit proportionality(const std::vector<SiegelPoint>& points, double tol, double noise_floor) {
    std::vector<Complex> fl, ft;
    for (const auto& p : points) {
        const auto series = F_lattice_series(p, tol);
        if (series.magnitude == 0 || std::abs(series.value) < noise_floor * series.magnitude) continue;
        fl.push_back(series.value);
        ft.push_back(F_theta(p));
    }
    if (fl.empty()) throw DegenerateError("every point is numerically on the Schottky locus");
    Complex num = 0;
    double den = 0;
    for (std::size_t k = 0; k < fl.size(); ++k) {
        num += std::conj(fl[k]) * ft[k];
        den += std::norm(fl[k]);
    }
    ProportionalityFit fit;
    fit.constant = num / den;
    fit.points_used = fl.size();
    for (std::size_t k = 0; k < fl.size(); ++k) {
        const Complex model = fit.constant * fl[k];
        fit.max_rel_deviation = std::max(fit.max_rel_deviation, std::abs(ft[k] - model) / std::abs(model));
    }
    return fit;
}

double schottky_indicator(const SiegelPoint& tau, double tol) {
    const auto series = F_lattice_series(tau, tol);
    if (series.magnitude == 0) throw DegenerateError("no nonzero coefficient contributes at this cutoff");
    return std::abs(series.value) / series.magnitude;
}

}  // namespace siegel::schottky
