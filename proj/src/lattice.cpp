#include "siegel/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include "siegel/error.hpp"

namespace siegel::lattice {

GramMatrix::GramMatrix(IntMatrix entries) : m_(std::move(entries)) {
    if (m_.rows() == 0 || !m_.is_symmetric()) throw ValidationError("Gram matrix must be non-empty and symmetric");
    for (int i = 0; i < m_.rows(); ++i)
        if (m_(i, i) % 2 != 0) throw ValidationError("Gram matrix must have even diagonal");
    if (!is_positive_definite(m_)) throw ValidationError("Gram matrix must be positive definite");
}

Int GramMatrix::determinant() const { return siegel::determinant(m_); }

EvenSymMatrix::EvenSymMatrix(IntMatrix entries) : m_(std::move(entries)) {
    if (m_.rows() == 0 || !m_.is_symmetric()) throw ValidationError("target must be non-empty and symmetric");
    for (int i = 0; i < m_.rows(); ++i)
        if (m_(i, i) % 2 != 0) throw ValidationError("target must have even diagonal");
    if (!is_positive_semidefinite(m_)) throw ValidationError("target must be positive semidefinite");
}

Int EvenSymMatrix::trace() const {
    Int t = 0;
    for (int i = 0; i < size(); ++i) t += m_(i, i);
    return t;
}

Int EvenSymMatrix::max_diagonal() const {
    Int t = 0;
    for (int i = 0; i < size(); ++i) t = std::max(t, m_(i, i));
    return t;
}

EvenSymMatrix reduced_canonical_form(const EvenSymMatrix& t) {
    std::vector<int> keep;
    for (int i = 0; i < t.size(); ++i)
        if (t(i, i) != 0) keep.push_back(i);
    const int g = static_cast<int>(keep.size());
    if (g == 0) return EvenSymMatrix{{0}};
    std::vector<Int> best;
    std::vector<Int> cur(static_cast<std::size_t>(g) * g);
    std::vector<int> perm(keep);
    do {
        // The global sign acts trivially, so fix the first sign.
        for (unsigned signs = 0; signs < (1u << (g - 1)); ++signs) {
            auto sgn = [&](int i) { return i == 0 ? 1 : ((signs >> (i - 1)) & 1 ? -1 : 1); };
            for (int i = 0; i < g; ++i)
                for (int j = 0; j < g; ++j) cur[i * g + j] = sgn(i) * sgn(j) * t(perm[i], perm[j]);
            if (best.empty() || cur < best) best = cur;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    IntMatrix m(g, g);
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) m(i, j) = best[i * g + j];
    return EvenSymMatrix(std::move(m));
}

// ---------------------------------------------------------------------------
// VectorTable

std::span<const std::int32_t> VectorTable::representatives(Int norm) const {
    auto it = by_norm_.find(norm);
    if (it == by_norm_.end()) return {};
    return it->second;
}

std::size_t VectorTable::representative_count(Int norm) const {
    return representatives(norm).size() / static_cast<std::size_t>(std::max(dim_, 1));
}

std::size_t VectorTable::total_count() const {
    std::size_t n = 0;
    for (const auto& [norm, v] : by_norm_) n += 2 * v.size() / static_cast<std::size_t>(dim_);
    return n;
}

std::vector<Int> VectorTable::norms() const {
    std::vector<Int> out;
    for (const auto& [norm, v] : by_norm_) out.push_back(norm);
    return out;
}

std::vector<std::vector<std::int32_t>> VectorTable::vectors(Int norm, bool expand_signs) const {
    std::vector<std::vector<std::int32_t>> out;
    const auto reps = representatives(norm);
    for (std::size_t k = 0; k < reps.size(); k += dim_) {
        std::vector<std::int32_t> v(reps.begin() + k, reps.begin() + k + dim_);
        out.push_back(v);
        if (expand_signs) {
            for (auto& x : v) x = -x;
            out.push_back(std::move(v));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Standard lattices

GramMatrix gram_e8() { return DnPlusLattice::e8().gram(); }

GramMatrix gram_d16_plus() { return DnPlusLattice::d16_plus().gram(); }

GramMatrix direct_sum(const GramMatrix& a, const GramMatrix& b) {
    const int m = a.dim();
    const int n = b.dim();
    IntMatrix s(m + n, m + n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) s(i, j) = a(i, j);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s(m + i, m + j) = b(i, j);
    return GramMatrix(std::move(s));
}

// ---------------------------------------------------------------------------
// Short vectors

namespace {

// x^t S x = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2, stored row-major.
std::vector<double> quadratic_decomposition(const GramMatrix& s) {
    const int m = s.dim();
    std::vector<double> q(static_cast<std::size_t>(m) * m, 0.0);
    auto at = [&](int i, int j) -> double& { return q[static_cast<std::size_t>(i) * m + j]; };
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) at(i, j) = static_cast<double>(s(i, j));
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            at(j, i) = at(i, j);
            at(i, j) /= at(i, i);
        }
        for (int k = i + 1; k < m; ++k)
            for (int l = k; l < m; ++l) at(k, l) -= at(k, i) * at(i, l);
    }
    return q;
}

Int exact_norm(const GramMatrix& s, std::span<const std::int32_t> v) {
    const int m = s.dim();
    __int128 acc = 0;
    for (int i = 0; i < m; ++i) {
        if (v[i] == 0) continue;
        __int128 row = 0;
        for (int j = 0; j < m; ++j) row += static_cast<__int128>(s(i, j)) * v[j];
        acc += row * v[i];
    }
    return static_cast<Int>(acc);
}

}  // namespace

VectorTable short_vectors(const GramMatrix& s, Int max_norm, const Limits& limits) {
    if (max_norm < 0) throw ValidationError("max_norm must be non-negative");
    const int m = s.dim();
    VectorTable table;
    table.dim_ = m;
    table.max_norm_ = max_norm;
    if (max_norm == 0) return table;

    const std::vector<double> q = quadratic_decomposition(s);
    auto qa = [&](int i, int j) { return q[static_cast<std::size_t>(i) * m + j]; };

    std::vector<std::int32_t> x(m, 0);
    std::vector<double> budget(m + 1, 0.0);
    std::vector<double> center(m, 0.0);
    std::vector<std::int32_t> upper(m, 0);
    std::size_t stored = 0;
    budget[m] = static_cast<double>(max_norm) + 0.5;

    // Depth-first from the last coordinate down. Representatives: the last
    // nonzero coordinate in enumeration order (highest index) is positive.
    int i = m - 1;
    auto enter = [&](int level) {
        double c = 0.0;
        for (int j = level + 1; j < m; ++j) c -= qa(level, j) * x[j];
        center[level] = c;
        const double r = std::sqrt(std::max(budget[level + 1], 0.0) / qa(level, level));
        bool leading_zero = true;
        for (int j = level + 1; j < m; ++j)
            if (x[j] != 0) {
                leading_zero = false;
                break;
            }
        auto lo = static_cast<std::int32_t>(std::ceil(c - r - 1e-9));
        if (leading_zero) lo = std::max<std::int32_t>(lo, 0);
        x[level] = lo;
        upper[level] = static_cast<std::int32_t>(std::floor(c + r + 1e-9));
    };
    enter(i);
    while (true) {
        if (x[i] > upper[i]) {
            if (++i >= m) break;
            ++x[i];
            continue;
        }
        const double d = x[i] - center[i];
        budget[i] = budget[i + 1] - qa(i, i) * d * d;
        if (budget[i] < -1e-9) {
            // Past the right edge of the ellipsoid slice; the interval test
            // guarantees this only happens through rounding.
            ++x[i];
            continue;
        }
        if (i > 0) {
            --i;
            enter(i);
            continue;
        }
        bool zero = std::all_of(x.begin(), x.end(), [](std::int32_t v) { return v == 0; });
        if (!zero) {
            const Int n = exact_norm(s, x);
            if (n > 0 && n <= max_norm) {
                auto& bucket = table.by_norm_[n];
                bucket.insert(bucket.end(), x.begin(), x.end());
                if (2 * ++stored > limits.max_vectors)
                    throw ResourceLimitError("short-vector table exceeds " + std::to_string(limits.max_vectors) +
                                             " vectors at max_norm " + std::to_string(max_norm));
            }
        }
        ++x[i];
    }
    return table;
}

// ---------------------------------------------------------------------------
// Representation numbers by column extension

namespace {

struct VectorPool {
    int dim = 0;
    std::vector<std::int32_t> coords;  // expanded: v, -v, ...
    std::vector<Int> images;           // S v
    std::size_t size() const { return dim ? coords.size() / dim : 0; }
    std::span<const std::int32_t> coord(std::size_t k) const { return {coords.data() + k * dim, std::size_t(dim)}; }
    std::span<const Int> image(std::size_t k) const { return {images.data() + k * dim, std::size_t(dim)}; }
};

VectorPool make_pool(const GramMatrix& s, const VectorTable& table, Int norm) {
    VectorPool pool;
    pool.dim = s.dim();
    for (const auto& v : table.vectors(norm, true)) {
        pool.coords.insert(pool.coords.end(), v.begin(), v.end());
        for (int i = 0; i < s.dim(); ++i) {
            Int acc = 0;
            for (int j = 0; j < s.dim(); ++j) acc += s(i, j) * v[j];
            pool.images.push_back(acc);
        }
    }
    return pool;
}

Int dot(std::span<const std::int32_t> a, std::span<const Int> b) {
    Int acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

class ColumnExtension {
public:
    ColumnExtension(const EvenSymMatrix& t, std::vector<const VectorPool*> pools) : t_(t), pools_(std::move(pools)) {}

    // Candidates[j] holds indices into pools_[j] consistent with every
    // inner product prescribed so far.
    std::uint64_t extend(int level, std::span<const std::int32_t> chosen,
                         const std::vector<std::vector<std::uint32_t>>& candidates) const {
        const int g = t_.size();
        // Inner-product profile index of the later columns against the new
        // vector: keep only the bucket matching the prescribed value.
        std::vector<std::vector<std::uint32_t>> next(g);
        for (int j = level + 1; j < g; ++j) {
            const Int want = t_(level, j);
            for (std::uint32_t k : candidates[j])
                if (dot(chosen, pools_[j]->image(k)) == want) next[j].push_back(k);
            if (next[j].empty()) return 0;
        }
        if (level + 2 == g) return next[g - 1].size();
        std::uint64_t total = 0;
        for (std::uint32_t k : next[level + 1]) total += extend(level + 1, pools_[level + 1]->coord(k), next);
        return total;
    }

private:
    const EvenSymMatrix& t_;
    std::vector<const VectorPool*> pools_;
};

}  // namespace

std::uint64_t representation_count(const GramMatrix& s, const EvenSymMatrix& t_in, const Limits& limits) {
    if (t_in.size() > 4) throw ValidationError("representation counts are supported for g <= 4");
    const EvenSymMatrix t = reduced_canonical_form(t_in);
    if (t.max_diagonal() == 0) return 1;
    const int g = t.size();
    const VectorTable table = short_vectors(s, t.max_diagonal(), limits);

    std::map<Int, VectorPool> pools;
    for (int j = 0; j < g; ++j)
        if (!pools.count(t(j, j))) pools.emplace(t(j, j), make_pool(s, table, t(j, j)));
    std::vector<const VectorPool*> column_pool(g);
    for (int j = 0; j < g; ++j) column_pool[j] = &pools.at(t(j, j));

    const VectorPool& first = *column_pool[0];
    if (g == 1) return first.size();

    std::vector<std::vector<std::uint32_t>> all(g);
    for (int j = 1; j < g; ++j) {
        all[j].resize(column_pool[j]->size());
        for (std::uint32_t k = 0; k < all[j].size(); ++k) all[j][k] = k;
    }
    ColumnExtension ext(t, column_pool);
    std::uint64_t total = 0;
    // G -> -G preserves G^t S G: count first columns up to sign.
    for (std::size_t k = 0; k < first.size(); k += 2) total += ext.extend(0, first.coord(k), all);
    return 2 * total;
}

// ---------------------------------------------------------------------------
// Targets

bool TargetRegion::contains(const EvenSymMatrix& t) const {
    if (t.max_diagonal() > max_diag) return false;
    return t.max_diagonal() <= trace_free_diag || t.trace() <= max_trace;
}

void TargetRegion::validate() const {
    if (max_diag < 0 || max_diag % 2 != 0) throw ValidationError("max_diag must be a non-negative even integer");
    if (is_box()) return;
    if (trace_free_diag < 0 || trace_free_diag % 2 != 0 || max_trace < 0 || max_trace % 2 != 0)
        throw ValidationError("trace cap bounds must be non-negative even integers");
}

std::string TargetRegion::describe() const {
    std::string s = "max_diag " + std::to_string(max_diag);
    if (!is_box()) s += " trace_free_diag " + std::to_string(trace_free_diag) + " max_trace " + std::to_string(max_trace);
    return s;
}

std::vector<EvenSymMatrix> enumerate_targets(int g, const TargetRegion& region) {
    if (g < 1 || g > 4) throw ValidationError("genus must be in 1..4");
    region.validate();
    const Int max_diag = region.max_diag;
    auto diagonal_ok = [&](const IntMatrix& m) {
        Int top = 0, trace = 0;
        for (int i = 0; i < m.rows(); ++i) {
            top = std::max(top, m(i, i));
            trace += m(i, i);
        }
        return top <= region.trace_free_diag || trace <= region.max_trace;
    };
    std::vector<EvenSymMatrix> out;
    IntMatrix m(g, g);

    // Principal minors containing column j among indices <= j.
    auto column_ok = [&](int j) {
        std::vector<int> idx;
        for (unsigned mask = 0; mask < (1u << j); ++mask) {
            idx.clear();
            for (int i = 0; i < j; ++i)
                if (mask & (1u << i)) idx.push_back(i);
            idx.push_back(j);
            if (idx.size() >= 3 && determinant(m.principal(idx)) < 0) return false;
        }
        return true;
    };

    std::function<void(int, int)> fill_off = [&](int j, int i) {
        if (j == g) {
            out.emplace_back(m);
            return;
        }
        if (i == j) {
            if (column_ok(j)) fill_off(j + 1, 0);
            return;
        }
        const auto b = static_cast<Int>(std::floor(std::sqrt(double(m(i, i)) * double(m(j, j))) + 1e-9));
        for (Int v = -b; v <= b; ++v) {
            m(i, j) = m(j, i) = v;
            fill_off(j, i + 1);
        }
        m(i, j) = m(j, i) = 0;
    };
    std::function<void(int)> fill_diag = [&](int i) {
        if (i == g) {
            if (diagonal_ok(m)) fill_off(1, 0);
            return;
        }
        for (Int d = 0; d <= max_diag; d += 2) {
            m(i, i) = d;
            fill_diag(i + 1);
        }
    };
    if (g == 1) {
        for (Int d = 0; d <= max_diag; d += 2)
            if (diagonal_ok(IntMatrix{{d}})) out.push_back(EvenSymMatrix{{d}});
        return out;
    }
    fill_diag(0);
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Theta series

Complex fourier_term(const EvenSymMatrix& t, const SiegelPoint& tau) {
    if (t.size() != tau.genus()) throw ValidationError("target size differs from genus of the point");
    Complex tr = 0.0;
    for (int i = 0; i < t.size(); ++i)
        for (int j = 0; j < t.size(); ++j)
            if (t(i, j) != 0) tr += static_cast<double>(t(i, j)) * tau(i, j);
    return std::exp(Complex(0.0, std::numbers::pi) * tr);
}

namespace {

// sum_{x in Z^m} exp(-pi mu x^t S x) <= prod_i (1 + 1/sqrt(mu q_ii)).
double box_theta_bound(const std::vector<double>& qdiag, double mu) {
    double b = 1.0;
    for (double d : qdiag) b *= 1.0 + 1.0 / std::sqrt(mu * d);
    return b;
}

// sum over lattice vectors of norm > h of exp(-pi lambda norm).
double crude_tail(const std::vector<double>& qdiag, double lambda, Int h) {
    double best = INFINITY;
    for (int k = 1; k < 20; ++k) {
        const double mu = lambda * k / 20.0;
        const double v = std::exp(-std::numbers::pi * (lambda - mu) * static_cast<double>(h + 2)) *
                         box_theta_bound(qdiag, mu);
        best = std::min(best, v);
    }
    return best;
}

using ShellFn = std::function<std::optional<std::uint64_t>(Int)>;
using CountFn = std::function<std::vector<std::uint64_t>(const std::vector<EvenSymMatrix>&)>;

ThetaSeriesValue theta_series_impl(const GramMatrix& gram, const ShellFn& shell, const CountFn& counts,
                                   const SiegelPoint& tau, double tol, const ThetaSeriesOptions& opts) {
    const int g = tau.genus();
    if (g < 1 || g > 4) throw ValidationError("theta series supports genus 1..4");
    if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
    const double lambda = tau.min_imag_eigenvalue();
    if (lambda < opts.lambda_floor)
        throw DomainError("Im(tau) has minimal eigenvalue " + sci(lambda) + " below the floor " +
                          sci(opts.lambda_floor));
    const Int ceiling = opts.max_diag_ceiling[g];

    const std::vector<double> q = quadratic_decomposition(gram);
    std::vector<double> qdiag;
    for (int i = 0; i < gram.dim(); ++i) qdiag.push_back(q[static_cast<std::size_t>(i) * gram.dim() + i]);

    std::vector<double> weighted;  // a(n) exp(-pi lambda n) at index n/2
    auto weight = [&](Int n) -> std::optional<double> {
        const auto k = static_cast<std::size_t>(n / 2);
        while (weighted.size() <= k) {
            const Int norm = 2 * static_cast<Int>(weighted.size());
            const auto a = norm == 0 ? std::optional<std::uint64_t>(1) : shell(norm);
            if (!a) return std::nullopt;
            weighted.push_back(static_cast<double>(*a) * std::exp(-std::numbers::pi * lambda * double(norm)));
        }
        return weighted[k];
    };

    for (Int d = 0; d <= ceiling; d += 2) {
        double head = 0.0;
        for (Int n = 0; n <= d; n += 2) {
            auto w = weight(n);
            if (!w) throw ResourceLimitError("cannot enumerate the norm shells needed for the theta series");
            head += *w;
        }
        double mid = 0.0;
        Int h = d;
        while (crude_tail(qdiag, lambda, h) > 1e-3 * tol && h < d + 80) {
            auto w = weight(h + 2);
            if (!w) break;
            mid += *w;
            h += 2;
        }
        const double crude = crude_tail(qdiag, lambda, h);
        const double tail = g * (mid + crude) * std::pow(head + mid + crude, g - 1);
        if (tail < tol) {
            const auto targets = enumerate_targets(g, d);
            const auto n = counts(targets);
            Complex sum = 0.0;
            // Smallest terms first.
            std::vector<std::size_t> order(targets.size());
            for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return targets[a].trace() > targets[b].trace(); });
            for (std::size_t k : order)
                if (n[k] != 0) sum += static_cast<double>(n[k]) * fourier_term(targets[k], tau);
            return {sum, d, tail};
        }
    }
    throw CutoffInfeasibleError("tolerance " + sci(tol) + " not reachable with diagonal ceiling " +
                                std::to_string(ceiling) + " at minimal eigenvalue " + sci(lambda));
}

std::vector<std::uint64_t> generic_counts(const GramMatrix& s, const std::vector<EvenSymMatrix>& targets,
                                          const Limits& limits) {
    std::vector<std::uint64_t> out(targets.size(), 0);
    if (targets.empty()) return out;
    const int g = targets.front().size();
    Int d = 0;
    for (const auto& t : targets) d = std::max(d, t.max_diagonal());
    if (g <= 2) {
        const VectorTable table = short_vectors(s, d, limits);
        // Histogram of (norm, norm, inner product) over ordered pairs,
        // including the zero vector.
        std::vector<std::pair<Int, VectorPool>> pools;
        pools.emplace_back(0, VectorPool{s.dim(), std::vector<std::int32_t>(s.dim(), 0), std::vector<Int>(s.dim(), 0)});
        for (Int n : table.norms()) pools.emplace_back(n, make_pool(s, table, n));
        std::map<std::vector<Int>, std::uint64_t> hist;
        if (g == 1) {
            for (const auto& [n, pool] : pools) hist[{n}] += pool.size();
        } else {
            for (const auto& [n1, p1] : pools)
                for (const auto& [n2, p2] : pools) {
                    const auto b = static_cast<Int>(std::floor(std::sqrt(double(n1) * double(n2)) + 1e-9));
                    std::vector<std::uint64_t> dense(static_cast<std::size_t>(2 * b + 1), 0);
                    // (v, w) and (-v, -w) share their key: pools store v, -v adjacently.
                    const std::size_t step = n1 == 0 ? 1 : 2;
                    const std::uint64_t mult = n1 == 0 ? 1 : 2;
                    for (std::size_t a = 0; a < p1.size(); a += step)
                        for (std::size_t c = 0; c < p2.size(); ++c) dense[dot(p1.coord(a), p2.image(c)) + b] += mult;
                    for (Int ip = -b; ip <= b; ++ip)
                        if (dense[ip + b]) hist[{n1, ip, n2}] += dense[ip + b];
                }
        }
        for (std::size_t k = 0; k < targets.size(); ++k) {
            const auto& t = targets[k];
            const std::vector<Int> key = g == 1 ? std::vector<Int>{t(0, 0)} : std::vector<Int>{t(0, 0), t(0, 1), t(1, 1)};
            auto it = hist.find(key);
            out[k] = it == hist.end() ? 0 : it->second;
        }
        return out;
    }
    std::map<EvenSymMatrix, std::uint64_t> cache;
    for (std::size_t k = 0; k < targets.size(); ++k) {
        const auto key = reduced_canonical_form(targets[k]);
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, representation_count(s, key, limits)).first;
        out[k] = it->second;
    }
    return out;
}

}  // namespace

ThetaSeriesValue lattice_theta_series(const GramMatrix& s, const SiegelPoint& tau, double tol,
                                      const ThetaSeriesOptions& opts) {
    std::optional<VectorTable> table;
    ShellFn shell = [&](Int n) -> std::optional<std::uint64_t> {
        if (!table || table->max_norm() < n) {
            try {
                table = short_vectors(s, std::max<Int>(n, table ? table->max_norm() + 8 : n), opts.limits);
            } catch (const ResourceLimitError&) {
                return std::nullopt;
            }
        }
        return table->count(n);
    };
    CountFn counts = [&](const std::vector<EvenSymMatrix>& targets) { return generic_counts(s, targets, opts.limits); };
    return theta_series_impl(s, shell, counts, tau, tol, opts);
}

ThetaSeriesValue lattice_theta_series(const DnPlusLattice& l, const SiegelPoint& tau, double tol,
                                      const ThetaSeriesOptions& opts) {
    ShellFn shell = [&](Int n) -> std::optional<std::uint64_t> { return l.count(EvenSymMatrix{{n}}); };
    CountFn counts = [&](const std::vector<EvenSymMatrix>& targets) {
        std::map<EvenSymMatrix, std::uint64_t> cache;
        std::vector<std::uint64_t> out;
        out.reserve(targets.size());
        for (const auto& t : targets) {
            const auto key = reduced_canonical_form(t);
            auto it = cache.find(key);
            if (it == cache.end()) it = cache.emplace(key, l.count(key)).first;
            out.push_back(it->second);
        }
        return out;
    };
    return theta_series_impl(l.gram(), shell, counts, tau, tol, opts);
}

// ---------------------------------------------------------------------------
// Coefficient tables

CoefficientTable coefficient_classes(int g, const TargetRegion& region) {
    const DnPlusLattice e8e8 = DnPlusLattice::e8_e8();
    const DnPlusLattice d16 = DnPlusLattice::d16_plus();
    std::set<EvenSymMatrix> keys;
    for (const auto& t : enumerate_targets(g, region)) keys.insert(reduced_canonical_form(t));
    CoefficientTable classes;
    classes.genus = g;
    classes.region = region;
    for (const auto& key : keys) classes.rows.push_back({key, e8e8.count(key), d16.count(key)});
    return classes;
}

CoefficientTable expand_classes(const CoefficientTable& classes) {
    std::map<EvenSymMatrix, const CoefficientRow*> by_key;
    for (const auto& row : classes.rows) by_key.emplace(row.target, &row);
    CoefficientTable table;
    table.genus = classes.genus;
    table.region = classes.region;
    const auto targets = enumerate_targets(classes.genus, classes.region);
    table.rows.reserve(targets.size());
    for (const auto& t : targets) {
        auto it = by_key.find(reduced_canonical_form(t));
        if (it == by_key.end()) throw ValidationError("class table has no entry for " + t.entries().to_string());
        table.rows.push_back({t, it->second->n_e8e8, it->second->n_d16});
    }
    return table;
}

CoefficientTable coefficient_table(int g, const TargetRegion& region) {
    return expand_classes(coefficient_classes(g, region));
}

std::string to_csv(const CoefficientTable& table) {
    std::ostringstream os;
    for (int i = 0; i < table.genus; ++i)
        for (int j = 0; j < table.genus; ++j) os << 't' << i + 1 << j + 1 << ',';
    os << "n_e8e8,n_d16plus,difference\n";
    for (const auto& row : table.rows) {
        for (Int v : row.target.flattened()) os << v << ',';
        os << row.n_e8e8 << ',' << row.n_d16 << ',' << row.difference() << '\n';
    }
    return os.str();
}

std::string to_text(const CoefficientTable& table) {
    std::vector<const CoefficientRow*> rows;
    for (const auto& r : table.rows) rows.push_back(&r);
    std::sort(rows.begin(), rows.end(), [](auto* a, auto* b) { return a->target < b->target; });
    std::ostringstream os;
    os << "# genus " << table.genus << ' ' << table.region.describe() << '\n';
    for (const auto* r : rows)
        os << r->target.entries().to_string() << ' ' << r->n_e8e8 << ' ' << r->n_d16 << ' ' << r->difference() << '\n';
    return os.str();
}

}  // namespace siegel::lattice

namespace siegel::lattice {

CoefficientTable parse_text(std::string_view text) {
    CoefficientTable table;
    std::istringstream in{std::string(text)};
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream hs(line.substr(1));
            std::string key;
            std::map<std::string, Int> fields;
            Int value = 0;
            while (hs >> key >> value) fields[key] = value;
            if (!hs.eof() || !fields.contains("genus") || !fields.contains("max_diag"))
                throw ValidationError("bad coefficient table header: " + line);
            table.genus = static_cast<int>(fields["genus"]);
            table.region = TargetRegion::box(fields["max_diag"]);
            if (fields.contains("trace_free_diag")) {
                table.region.trace_free_diag = fields["trace_free_diag"];
                table.region.max_trace = fields.contains("max_trace") ? fields["max_trace"] : 0;
            }
            table.region.validate();
            header = true;
            continue;
        }
        if (!header) throw ValidationError("coefficient table lacks a header");
        std::istringstream ls(line);
        std::string matrix;
        std::int64_t diff = 0;
        CoefficientRow row{EvenSymMatrix{{0}}, 0, 0};
        if (!(ls >> matrix >> row.n_e8e8 >> row.n_d16 >> diff)) throw ValidationError("bad coefficient row: " + line);
        row.target = EvenSymMatrix(IntMatrix::parse(matrix));
        if (row.difference() != diff) throw ValidationError("inconsistent difference in row: " + line);
        table.rows.push_back(std::move(row));
    }
    if (!header) throw ValidationError("coefficient table lacks a header");
    return table;
}

}  // namespace siegel::lattice
