#include "siegel/picard.hpp"

#include <sstream>

#include "siegel/error.hpp"

namespace siegel::picard {

namespace {

void same_space(const DivisorClass& a, const DivisorClass& b) {
    if (a.space() != b.space())
        throw ValidationError("divisor classes live on different spaces: " + std::string(to_string(a.space())) + " and " +
                              std::string(to_string(b.space())));
}

// Appends "+ 3L", "- D", "+ (1/2)E" and so on; the leading sign of the
// first term is written as a bare "-".
void append_term(std::ostringstream& os, bool& first, const Rational& q, char symbol) {
    if (q == Rational(0)) return;
    const Rational mag = q < 0 ? -q : q;
    if (first)
        os << (q < 0 ? "-" : "");
    else
        os << (q < 0 ? " - " : " + ");
    if (mag.denominator() != 1)
        os << '(' << mag.numerator() << '/' << mag.denominator() << ')';
    else if (mag != Rational(1))
        os << mag.numerator();
    os << symbol;
    first = false;
}

}  // namespace

std::string_view to_string(Space s) {
    switch (s) {
        case Space::partial: return "partial";
        case Space::igusa: return "igusa";
        case Space::voronoi: return "voronoi";
    }
    return "unknown";
}

Space parse_space(std::string_view name) {
    if (name == "partial") return Space::partial;
    if (name == "igusa") return Space::igusa;
    if (name == "voronoi") return Space::voronoi;
    throw ValidationError("unknown space '" + std::string(name) + "' (expected partial, igusa or voronoi)");
}

DivisorClass::DivisorClass(Space space, Rational l, Rational d, Rational e) : space_(space), l_(l), d_(d), e_(e) {
    if (space_ != Space::voronoi && e_ != Rational(0)) throw ValidationError("E exists only on the Voronoi compactification");
}

std::string DivisorClass::to_string() const {
    std::ostringstream os;
    bool first = true;
    append_term(os, first, l_, 'L');
    append_term(os, first, d_, 'D');
    append_term(os, first, e_, 'E');
    if (first) os << '0';
    return os.str();
}

DivisorClass add(const DivisorClass& a, const DivisorClass& b) {
    same_space(a, b);
    return {a.space(), a.coeff_l() + b.coeff_l(), a.coeff_d() + b.coeff_d(), a.coeff_e() + b.coeff_e()};
}

DivisorClass scale(const Rational& q, const DivisorClass& a) {
    return {a.space(), q * a.coeff_l(), q * a.coeff_d(), q * a.coeff_e()};
}

bool equal(const DivisorClass& a, const DivisorClass& b) {
    same_space(a, b);
    return a.coeff_l() == b.coeff_l() && a.coeff_d() == b.coeff_d() && a.coeff_e() == b.coeff_e();
}

DivisorClass pullback(const DivisorClass& a) {
    if (a.space() != Space::igusa) throw ValidationError("pullback is defined on the Igusa compactification");
    return {Space::voronoi, a.coeff_l(), a.coeff_d(), 4 * a.coeff_d()};
}

DivisorClass class_of_schottky(Space s) {
    const DivisorClass j = 8 * DivisorClass::L(Space::igusa) - DivisorClass::D(Space::igusa);
    switch (s) {
        case Space::partial: return 8 * DivisorClass::L(s) - DivisorClass::D(s);
        case Space::igusa: return j;
        case Space::voronoi: return pullback(j);
    }
    throw ValidationError("unknown space");
}

DivisorClass divisor_of_F(Space s) {
    DivisorClass f = class_of_schottky(s) + DivisorClass::D(s);
    if (s == Space::voronoi) f = f + 4 * DivisorClass::E();
    return f;
}

}  // namespace siegel::picard
