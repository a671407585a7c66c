#pragma once

#include <cstdint>
#include <vector>

#include "siegel/lattice.hpp"
#include "siegel/siegel_point.hpp"
#include "siegel/theta.hpp"

/// The genus-4 Schottky form F in two constructions: the difference of the
/// theta series of E8+E8 and D16+, and the substitution of genus-4 theta
/// products into the quartic relation among genus-3 theta constants.
namespace siegel::schottky {

/// Exact Fourier coefficients c(T) = N(E8+E8, T) - N(D16+, T) of F for all
/// genus-4 targets in a truncation region.
struct SchottkyCoefficients {
    lattice::TargetRegion region;
    std::vector<lattice::EvenSymMatrix> targets;
    std::vector<std::int64_t> diffs;

    std::size_t nonzero_count() const;
};

/// Computes the coefficients from scratch (minutes for the default region).
SchottkyCoefficients schottky_coefficients(const lattice::TargetRegion& region);
SchottkyCoefficients from_table(const lattice::CoefficientTable& table);
/// Coefficients for the region {max_diag 6, trace_free_diag 4, max_trace 12},
/// expanded from the class table shipped with the library. Built on first use and shared afterwards.
const SchottkyCoefficients& default_coefficients();
/// The shipped class table in the canonical text format.
std::string_view default_class_table();

struct LatticeSeriesValue {
    Complex value;
    double tail = 0.0;       ///< bound on the discarded terms
    double magnitude = 0.0;  ///< sum of |c(T) exp(pi i Tr(T tau))| over the included terms
};

/// Bound on the terms of F outside the region at a point whose Im(tau) has
/// smallest eigenvalue lambda. Uses Tr(T Im tau) >= lambda Tr(T) and the
/// vanishing of c(T) unless every column of T is nonzero.
double region_tail(const lattice::TargetRegion& region, double lambda);

/// Sum of c(T) exp(pi i Tr(T tau)) over the nonzero coefficients;
/// CutoffInfeasibleError when the tail bound is not below tol.
LatticeSeriesValue F_lattice_series(const SchottkyCoefficients& coeffs, const SiegelPoint& tau, double tol);
LatticeSeriesValue F_lattice_series(const SiegelPoint& tau, double tol);
inline Complex F_lattice(const SiegelPoint& tau, double tol) { return F_lattice_series(tau, tol).value; }

/// Bound on sum over nonzero v in a rank-16 even unimodular lattice with
/// norm >= min_norm of exp(-pi lambda |v|^2).
double rank16_shell_tail(double lambda, Int min_norm);

/// The three quadruple products of genus-3 theta constants in the relation
/// r1 - r2 - r3 = 0.
struct ThetaRelationTerms {
    Complex r1, r2, r3;
    /// |r1 - r2 - r3| / (|r1| + |r2| + |r3|).
    double residual() const;
};

/// Characteristics of r1, r2, r3 (four each), genus 3.
const std::vector<std::vector<theta::Characteristic>>& relation_characteristics();

ThetaRelationTerms relation_terms(const SiegelPoint& tau, double tol);

/// p1^2 + p2^2 + p3^2 - 2 p1 p2 - 2 p1 p3 - 2 p2 p3: the relation between
/// squares written in p_i = r_i^2.
template <class T>
T square_relation_in_squares(const T& p1, const T& p2, const T& p3) {
    return p1 * p1 + p2 * p2 + p3 * p3 - T(2) * (p1 * p2 + p1 * p3 + p2 * p3);
}

/// r1^4 + r2^4 + r3^4 - 2 r1^2 r2^2 - 2 r1^2 r3^2 - 2 r2^2 r3^2.
template <class T>
T square_relation_value(const T& r1, const T& r2, const T& r3) {
    return square_relation_in_squares<T>(r1 * r1, r2 * r2, r3 * r3);
}

/// Squared even genus-3 theta constants in even_characteristics(3) order,
/// scaled so the entry of largest modulus is 1.
std::vector<Complex> sq_coordinates(const SiegelPoint& tau, double tol);

/// The relation between squares evaluated on projective coordinates in
/// even_characteristics(3) order.
Complex square_relation_on_coordinates(const std::vector<Complex>& coords);

/// The quartic relation with each theta^2[e; e'] replaced by
/// theta[e 0; e' 0] theta[e 0; e' 1], evaluated in binary128 arithmetic
/// (the value is many orders of magnitude below its individual terms).
Complex F_theta(const SiegelPoint& tau, double tol = 1e-28);

struct ProportionalityFit {
    Complex constant;
    double max_rel_deviation = 0.0;
    std::size_t points_used = 0;
};

/// Least-squares constant c with F_theta = c F_lattice over the points whose
/// indicator is at least noise_floor; DegenerateError if there are none.
ProportionalityFit proportionality(const std::vector<SiegelPoint>& points, double tol, double noise_floor = 1e-6);

/// |F_lattice(tau)| / sum_T |c(T)| exp(-pi Tr(T Im tau)).
double schottky_indicator(const SiegelPoint& tau, double tol);

}  // namespace siegel::schottky
