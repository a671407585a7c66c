#include "siegel/theta.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <map>

#include <boost/math/constants/constants.hpp>

#include "siegel/error.hpp"

namespace siegel::theta {

namespace {

std::vector<std::uint8_t> bits_of(unsigned value, int h) {
    std::vector<std::uint8_t> bits(h);
    for (int i = 0; i < h; ++i) bits[i] = static_cast<std::uint8_t>((value >> (h - 1 - i)) & 1u);
    return bits;
}

std::vector<std::uint8_t> parse_bits(std::string_view s) {
    std::vector<std::uint8_t> bits;
    for (char ch : s) {
        if (ch != '0' && ch != '1') throw ValidationError("characteristic bits must be 0 or 1");
        bits.push_back(static_cast<std::uint8_t>(ch - '0'));
    }
    return bits;
}

template <class Real>
struct Cx {
    Real re{0};
    Real im{0};
};

// Sum over the box |x_i| <= r, x = m + eps/2, of
// exp(pi i (x^t tau x + 2 x^t z)) * exp(pi i x^t eps') for every eps' in
// the list. The eps' factor is i^(sum_i (2 x_i mod 4) eps'_i).
template <class Real>
std::vector<Cx<Real>> box_sums(const std::vector<std::uint8_t>& eps, const std::vector<std::vector<std::uint8_t>>& eps_primes,
                               const Eigen::MatrixXcd& tau, const Eigen::VectorXcd& z, int r) {
    using std::cos;
    using std::exp;
    using std::sin;
    const int g = static_cast<int>(eps.size());
    const Real pi = boost::math::constants::pi<Real>();
    std::vector<std::array<Cx<Real>, 4>> buckets(eps_primes.size());

    // Twice the coordinates: 2x = 2m + eps, |2x| <= 2r.
    std::vector<int> lo(g), hi(g), two_x(g);
    for (int i = 0; i < g; ++i) {
        hi[i] = 2 * r - eps[i];
        lo[i] = -hi[i];
        two_x[i] = lo[i];
    }
    std::vector<Real> xr(g);
    const auto re_tau = tau.real();
    const auto im_tau = tau.imag();
    while (true) {
        for (int i = 0; i < g; ++i) xr[i] = Real(two_x[i]) / 2;
        Real phase = 0, decay = 0;
        for (int i = 0; i < g; ++i) {
            Real row_re = 0, row_im = 0;
            for (int j = 0; j < g; ++j) {
                row_re += Real(re_tau(i, j)) * xr[j];
                row_im += Real(im_tau(i, j)) * xr[j];
            }
            phase += xr[i] * (row_re + 2 * Real(z(i).real()));
            decay += xr[i] * (row_im + 2 * Real(z(i).imag()));
        }
        const Real mag = exp(-pi * decay);
        const Cx<Real> term{mag * cos(pi * phase), mag * sin(pi * phase)};
        for (std::size_t k = 0; k < eps_primes.size(); ++k) {
            int quarter = 0;
            for (int i = 0; i < g; ++i)
                if (eps_primes[k][i]) quarter += ((two_x[i] % 4) + 4) % 4;
            auto& b = buckets[k][quarter % 4];
            b.re += term.re;
            b.im += term.im;
        }
        int i = 0;
        while (i < g && two_x[i] == hi[i]) {
            two_x[i] = lo[i];
            ++i;
        }
        if (i == g) break;
        two_x[i] += 2;
    }
    std::vector<Cx<Real>> out(eps_primes.size());
    for (std::size_t k = 0; k < eps_primes.size(); ++k) {
        const auto& b = buckets[k];
        // b0 + i b1 - b2 - i b3
        out[k].re = b[0].re - b[1].im - b[2].re + b[3].im;
        out[k].im = b[0].im + b[1].re - b[2].im - b[3].re;
    }
    return out;
}

void check_point(const SiegelPoint& tau, const ThetaOptions& opts) {
    if (tau.min_imag_eigenvalue() < opts.lambda_floor)
        throw DomainError("Im(tau) is too close to singular for the truncation bound");
}

template <class Real>
std::vector<Cx<Real>> constants_impl(const std::vector<Characteristic>& cs, const SiegelPoint& tau, double tol,
                                     const ThetaOptions& opts) {
    const int g = tau.genus();
    for (const auto& c : cs)
        if (c.size() != g) throw ValidationError("characteristic length must equal the genus");
    check_point(tau, opts);
    const int r = truncation_radius(tau.imag(), tol, 0.0, opts);
    std::map<std::vector<std::uint8_t>, std::vector<std::size_t>> groups;
    for (std::size_t k = 0; k < cs.size(); ++k) groups[cs[k].eps()].push_back(k);
    std::vector<Cx<Real>> out(cs.size());
    const Eigen::VectorXcd z = Eigen::VectorXcd::Zero(g);
    for (const auto& [eps, members] : groups) {
        std::vector<std::vector<std::uint8_t>> eps_primes;
        for (auto k : members) eps_primes.push_back(cs[k].eps_prime());
        const auto sums = box_sums<Real>(eps, eps_primes, tau.matrix(), z, r);
        for (std::size_t n = 0; n < members.size(); ++n) out[members[n]] = sums[n];
    }
    return out;
}

}  // namespace

Characteristic::Characteristic(std::vector<std::uint8_t> eps, std::vector<std::uint8_t> eps_prime)
    : eps_(std::move(eps)), eps_prime_(std::move(eps_prime)) {
    if (eps_.size() != eps_prime_.size()) throw ValidationError("characteristic rows must have equal length");
    if (eps_.empty() || eps_.size() > 8) throw ValidationError("characteristic length must be 1..8");
    unsigned dot = 0;
    for (std::size_t i = 0; i < eps_.size(); ++i) {
        if (eps_[i] > 1 || eps_prime_[i] > 1) throw ValidationError("characteristic bits must be 0 or 1");
        dot += eps_[i] * eps_prime_[i];
    }
    parity_ = dot % 2 == 0 ? Parity::even : Parity::odd;
}

Characteristic Characteristic::parse(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) throw ValidationError("characteristic must look like eps/eps'");
    return Characteristic(parse_bits(text.substr(0, slash)), parse_bits(text.substr(slash + 1)));
}

std::string Characteristic::to_string() const {
    std::string s;
    for (auto b : eps_) s += char('0' + b);
    s += '/';
    for (auto b : eps_prime_) s += char('0' + b);
    return s;
}

Characteristic Characteristic::concat(const Characteristic& other) const {
    auto e = eps_;
    auto ep = eps_prime_;
    e.insert(e.end(), other.eps_.begin(), other.eps_.end());
    ep.insert(ep.end(), other.eps_prime_.begin(), other.eps_prime_.end());
    return Characteristic(std::move(e), std::move(ep));
}

std::vector<Characteristic> all_characteristics(int h) {
    if (h < 1 || h > 4) throw ValidationError("characteristic length must be 1..4");
    std::vector<Characteristic> out;
    for (unsigned e = 0; e < (1u << h); ++e)
        for (unsigned ep = 0; ep < (1u << h); ++ep) out.emplace_back(bits_of(e, h), bits_of(ep, h));
    return out;
}

std::vector<Characteristic> even_characteristics(int h) {
    std::vector<Characteristic> out;
    for (auto& c : all_characteristics(h))
        if (c.parity() == Parity::even) out.push_back(std::move(c));
    return out;
}

double tail_bound(int g, double lambda, int r, double w) {
    // Shell k holds the points with r + k < |x|_inf <= r + k + 1: at most
    // (2(r+k+1)+1)^g of them, each with |x|_2 > r + k. Past w / lambda the
    // ratio of consecutive shell bounds decreases, so once it drops to rho
    // <= 1/2 the remainder is at most term * rho / (1 - rho).
    using std::numbers::pi;
    auto term = [&](double s) {
        // Below w / lambda the exponent is bounded by its maximum instead.
        const double e = s < w / lambda ? pi * w * w / lambda : -pi * lambda * s * s + 2 * pi * w * s;
        return std::pow(2.0 * s + 3, g) * std::exp(e);
    };
    double total = 0.0;
    for (int k = 0; k < 1'000'000; ++k) {
        const double s = r + k;
        const double t = term(s);
        total += t;
        if (s < w / lambda) continue;
        const double rho = std::pow((2 * s + 5) / (2 * s + 3), g) * std::exp(-pi * lambda * (2 * s + 1) + 2 * pi * w);
        if (rho <= 0.5) return total + t * rho / (1 - rho);
    }
    return std::numeric_limits<double>::infinity();
}

int truncation_radius(const Eigen::MatrixXd& im_tau, double tol, double z_imag_norm, const ThetaOptions& opts) {
    if (!(tol > 0)) throw ValidationError("tolerance must be positive");
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(im_tau, Eigen::EigenvaluesOnly);
    const double lambda = es.eigenvalues()(0);
    if (lambda < opts.lambda_floor) throw DomainError("Im(tau) is too close to singular for the truncation bound");
    const int g = static_cast<int>(im_tau.rows());
    int r = static_cast<int>(std::ceil(z_imag_norm / lambda));
    while (tail_bound(g, lambda, r, z_imag_norm) >= tol) ++r;
    return r;
}

Complex theta_function(const Characteristic& c, const SiegelPoint& tau, const Eigen::VectorXcd& z, double tol,
                       const ThetaOptions& opts) {
    if (c.size() != tau.genus() || z.size() != tau.genus())
        throw ValidationError("characteristic, point and z must have the same dimension");
    if (tol < kToleranceFloor) throw ValidationError("tolerance below the double-precision floor");
    check_point(tau, opts);
    const double w = z.imag().norm();
    if (w > opts.z_imag_bound) throw DomainError("|Im z| outside the supported range");
    const int r = truncation_radius(tau.imag(), tol, w, opts);
    const auto sums = box_sums<double>(c.eps(), {c.eps_prime()}, tau.matrix(), z, r);
    return {sums[0].re, sums[0].im};
}

Complex theta_constant(const Characteristic& c, const SiegelPoint& tau, double tol, const ThetaOptions& opts) {
    return theta_function(c, tau, Eigen::VectorXcd::Zero(tau.genus()), tol, opts);
}

std::vector<Complex> theta_constants(const std::vector<Characteristic>& cs, const SiegelPoint& tau, double tol,
                                     const ThetaOptions& opts) {
    if (tol < kToleranceFloor) throw ValidationError("tolerance below the double-precision floor");
    const auto raw = constants_impl<double>(cs, tau, tol, opts);
    std::vector<Complex> out;
    out.reserve(raw.size());
    for (const auto& v : raw) out.emplace_back(v.re, v.im);
    return out;
}

std::vector<QuadComplex> theta_constants_quad(const std::vector<Characteristic>& cs, const SiegelPoint& tau,
                                              double tol, const ThetaOptions& opts) {
    if (tol < kQuadToleranceFloor) throw ValidationError("tolerance below the quad-precision floor");
    const auto raw = constants_impl<Quad>(cs, tau, tol, opts);
    std::vector<QuadComplex> out;
    out.reserve(raw.size());
    for (const auto& v : raw) out.emplace_back(v.re, v.im);
    return out;
}

}  // namespace siegel::theta
