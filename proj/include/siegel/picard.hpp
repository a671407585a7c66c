#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

/// Divisor classes in Pic (x) Q of the partial, Igusa and Voronoi
/// compactifications of A_4, in the bases (L, D) and (L, D, E). L is the
/// bundle of modular forms of weight 1, D the boundary divisor of the space
/// and E the exceptional divisor of the Voronoi blow-up.
namespace siegel::picard {

using Rational = boost::rational<std::int64_t>;

enum class Space { partial, igusa, voronoi };

std::string_view to_string(Space s);
/// "partial", "igusa" or "voronoi"; ValidationError otherwise.
Space parse_space(std::string_view name);

class DivisorClass {
public:
    /// coeff_e must be zero unless space is Voronoi.
    DivisorClass(Space space, Rational l, Rational d, Rational e = 0);

    static DivisorClass zero(Space s) { return {s, 0, 0, 0}; }
    static DivisorClass L(Space s) { return {s, 1, 0, 0}; }
    static DivisorClass D(Space s) { return {s, 0, 1, 0}; }
    static DivisorClass E() { return {Space::voronoi, 0, 0, 1}; }

    Space space() const { return space_; }
    const Rational& coeff_l() const { return l_; }
    const Rational& coeff_d() const { return d_; }
    const Rational& coeff_e() const { return e_; }

    /// Canonical form such as "8L - D - 4E"; fractions as "(1/2)L".
    std::string to_string() const;

private:
    Space space_;
    Rational l_, d_, e_;
};

/// Componentwise arithmetic; ValidationError when the spaces differ.
DivisorClass add(const DivisorClass& a, const DivisorClass& b);
DivisorClass scale(const Rational& q, const DivisorClass& a);
bool equal(const DivisorClass& a, const DivisorClass& b);

inline DivisorClass operator+(const DivisorClass& a, const DivisorClass& b) { return add(a, b); }
inline DivisorClass operator-(const DivisorClass& a, const DivisorClass& b) { return add(a, scale(-1, b)); }
inline DivisorClass operator*(const Rational& q, const DivisorClass& a) { return scale(q, a); }
inline bool operator==(const DivisorClass& a, const DivisorClass& b) { return equal(a, b); }

/// Pullback from the Igusa to the Voronoi compactification:
/// L -> L, D -> D + 4E.
DivisorClass pullback(const DivisorClass& a);

/// Class of the closure of the Jacobian locus J_4.
DivisorClass class_of_schottky(Space s);

/// Divisor of the Schottky form: J + D on the partial and Igusa spaces,
/// J + D + 4E on the Voronoi space.
DivisorClass divisor_of_F(Space s);

}  // namespace siegel::picard
