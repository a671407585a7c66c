#include <absl/container/flat_hash_map.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "siegel/error.hpp"
#include "siegel/lattice.hpp"

namespace siegel::lattice {

namespace {

constexpr int kMaxGenus = 4;
constexpr int kMaxEntries = kMaxGenus * (kMaxGenus + 1) / 2;
constexpr std::uint8_t kUnsetParity = 0xFF;

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out;
    if (__builtin_add_overflow(a, b, &out)) throw ResourceLimitError("representation count overflows 64 bits");
    return out;
}

// One coordinate row of G in doubled coordinates, with its outer product
// r r^t in packed upper-triangular order.
struct Row {
    std::array<std::int16_t, kMaxEntries> outer{};
    std::uint64_t key_delta = 0;
    std::uint8_t parity = 0;  // bit j: r_j odd
    std::uint8_t flip = 0;    // bit j: contributes to the column-sum parity bit
};

struct State {
    std::array<std::int16_t, kMaxEntries> p{};
    std::uint64_t key_p = 0;
    std::uint8_t parity = kUnsetParity;
    std::uint8_t bits = 0;
    std::uint64_t count = 0;
};

struct Key {
    std::uint64_t p;
    std::uint16_t aux;
    bool operator==(const Key&) const = default;
    template <typename H>
    friend H AbslHashValue(H h, const Key& k) {
        return H::combine(std::move(h), k.p, k.aux);
    }
};

std::uint16_t aux_of(std::uint8_t parity, std::uint8_t bits) {
    return static_cast<std::uint16_t>((parity == kUnsetParity ? 0x100 : parity) << 4 | bits);
}

}  // namespace

DnPlusLattice::DnPlusLattice(std::vector<int> block_sizes) : blocks_(std::move(block_sizes)) {
    if (blocks_.empty()) throw ValidationError("lattice needs at least one block");
    for (int n : blocks_) {
        if (n <= 0 || n % 8 != 0) throw ValidationError("D_n^+ blocks need n divisible by 8");
        rank_ += n;
    }
}

IntMatrix DnPlusLattice::basis_doubled() const {
    IntMatrix b(rank_, rank_);
    int offset = 0;
    for (int n : blocks_) {
        // (1/2)(1,-1,...,-1,1), e1+e2, e_{i+1}-e_i for i = 1..n-2.
        int row = offset;
        for (int k = 0; k < n; ++k) b(row, offset + k) = (k == 0 || k == n - 1) ? 1 : -1;
        ++row;
        b(row, offset) = 2;
        b(row, offset + 1) = 2;
        ++row;
        for (int i = 0; i < n - 2; ++i, ++row) {
            b(row, offset + i + 1) = 2;
            b(row, offset + i) = -2;
        }
        offset += n;
    }
    return b;
}

GramMatrix DnPlusLattice::gram() const {
    const IntMatrix b = basis_doubled();
    IntMatrix g = b * b.transpose();
    for (int i = 0; i < g.rows(); ++i)
        for (int j = 0; j < g.cols(); ++j) g(i, j) /= 4;
    return GramMatrix(std::move(g));
}

bool DnPlusLattice::contains_doubled(std::span<const Int> y) const {
    if (static_cast<int>(y.size()) != rank_) return false;
    int offset = 0;
    for (int n : blocks_) {
        const bool odd = (y[offset] & 1) != 0;
        Int sum = 0;
        for (int k = 0; k < n; ++k) {
            if (((y[offset + k] & 1) != 0) != odd) return false;
            sum += y[offset + k];
        }
        if (((sum % 4) + 4) % 4 != 0) return false;
        offset += n;
    }
    return true;
}

namespace {

// Partial Gram sums reachable by ordered sequences of coordinate rows. A
// g-tuple of lattice vectors is an n x g matrix Y in doubled coordinates
// whose Gram matrix is (1/4) sum_k r_k r_k^t over its rows r_k. Inside one
// D_n^+ block every column is either all-even or all-odd (the parity
// pattern) and has coordinate sum divisible by 4. For all-even columns that
// is the parity of sum(y/2); for all-odd columns, since the block length is
// divisible by 4, it is the parity of the number of entries congruent to 3
// mod 4. A state is the partial Gram sum, the parity pattern and those g
// parity bits.
class RowProgram {
public:
    explicit RowProgram(const IntMatrix& t) : g_(t.rows()), ne_(g_ * (g_ + 1) / 2) {
        int e = 0;
        for (int i = 0; i < g_; ++i)
            for (int j = i; j < g_; ++j, ++e) {
                ei_[e] = i;
                ej_[e] = j;
                eidx_[i][j] = eidx_[j][i] = e;
            }
        for (int k = 0; k < ne_; ++k) q_[k] = static_cast<int>(4 * t(ei_[k], ej_[k]));
        for (int i = 0; i < g_; ++i) qd_[i] = q_[eidx_[i][i]];
        init_packing();
        init_rows();
    }

    const std::array<int, kMaxEntries>& target() const { return q_; }

    std::uint64_t key_of(const std::array<std::int16_t, kMaxEntries>& p) const {
        std::uint64_t k = 0;
        for (int e = 0; e < ne_; ++e) k += coef_[e] * static_cast<std::uint64_t>(p[e] - lo_[e]);
        return k;
    }

    std::array<std::int16_t, kMaxEntries> complement(const std::array<std::int16_t, kMaxEntries>& p) const {
        std::array<std::int16_t, kMaxEntries> c{};
        for (int e = 0; e < ne_; ++e) c[e] = static_cast<std::int16_t>(q_[e] - p[e]);
        return c;
    }

    bool is_target(const std::array<std::int16_t, kMaxEntries>& p) const {
        for (int e = 0; e < ne_; ++e)
            if (p[e] != q_[e]) return false;
        return true;
    }

    // Runs `steps` coordinates of one block starting from the empty state.
    // With `close`, keeps only states whose column sums are admissible and
    // forgets the block pattern. `reserve` is the number of coordinates of
    // the block that follow the run (all-odd columns need 1 each).
    std::vector<State> run(int steps, int reserve, bool close) const {
        std::vector<State> states(1);
        states[0].key_p = key_of(states[0].p);
        states[0].count = 1;
        absl::flat_hash_map<Key, std::uint32_t> index;
        std::vector<State> next;
        for (int c = 0; c < steps; ++c) {
            const int remaining = steps - 1 - c + reserve;
            next.clear();
            index.clear();
            for (const State& s : states) {
                const auto& alphabet = s.parity == kUnsetParity ? all_rows_ : by_parity_[s.parity];
                for (const Row* row : alphabet) {
                    std::array<std::int16_t, kMaxEntries> p;
                    for (int e = 0; e < ne_; ++e) p[e] = static_cast<std::int16_t>(s.p[e] + row->outer[e]);
                    if (!feasible(p, row->parity, remaining)) continue;
                    const std::uint8_t bits = s.bits ^ row->flip;
                    const Key key{s.key_p + row->key_delta, aux_of(row->parity, bits)};
                    auto [it, inserted] = index.try_emplace(key, static_cast<std::uint32_t>(next.size()));
                    if (inserted) {
                        State ns;
                        ns.p = p;
                        ns.key_p = key.p;
                        ns.parity = row->parity;
                        ns.bits = bits;
                        ns.count = s.count;
                        next.push_back(ns);
                    } else {
                        next[it->second].count = checked_add(next[it->second].count, s.count);
                    }
                }
            }
            states.swap(next);
        }
        if (!close) return states;
        next.clear();
        index.clear();
        for (const State& s : states) {
            if (s.bits != 0) continue;
            const Key key{s.key_p, aux_of(kUnsetParity, 0)};
            auto [it, inserted] = index.try_emplace(key, static_cast<std::uint32_t>(next.size()));
            if (inserted) {
                State ns = s;
                ns.parity = kUnsetParity;
                next.push_back(ns);
            } else {
                next[it->second].count = checked_add(next[it->second].count, s.count);
            }
        }
        return next;
    }

private:
    void init_packing() {
        unsigned __int128 radix = 1;
        for (int e = 0; e < ne_; ++e) {
            std::int64_t hi;
            if (ei_[e] == ej_[e]) {
                lo_[e] = 0;
                hi = q_[e];
            } else {
                const auto b = static_cast<std::int64_t>(std::floor(std::sqrt(double(qd_[ei_[e]]) * qd_[ej_[e]])));
                lo_[e] = -b;
                hi = b;
            }
            coef_[e] = static_cast<std::uint64_t>(radix);
            radix *= static_cast<unsigned __int128>(hi - lo_[e] + 1);
            if (radix > static_cast<unsigned __int128>(UINT64_MAX))
                throw ResourceLimitError("target too large for coordinate counting");
        }
    }

    void init_rows() {
        std::array<int, kMaxGenus> bound{};
        for (int i = 0; i < g_; ++i) bound[i] = static_cast<int>(std::floor(std::sqrt(double(qd_[i]))));
        std::array<int, kMaxGenus> r{};
        for (int i = 0; i < g_; ++i) r[i] = -bound[i];
        while (true) {
            std::array<std::int16_t, kMaxEntries> outer{};
            for (int e = 0; e < ne_; ++e) outer[e] = static_cast<std::int16_t>(r[ei_[e]] * r[ej_[e]]);
            if (feasible(outer, 0, 0)) {
                Row row;
                row.outer = outer;
                for (int e = 0; e < ne_; ++e)
                    row.key_delta += coef_[e] * static_cast<std::uint64_t>(static_cast<std::int64_t>(outer[e]));
                for (int i = 0; i < g_; ++i) {
                    const int m4 = ((r[i] % 4) + 4) % 4;
                    if (m4 & 1) row.parity |= std::uint8_t(1u << i);
                    if (m4 == 2 || m4 == 3) row.flip |= std::uint8_t(1u << i);
                }
                rows_.push_back(row);
            }
            int i = 0;
            while (i < g_ && r[i] == bound[i]) {
                r[i] = -bound[i];
                ++i;
            }
            if (i == g_) break;
            ++r[i];
        }
        by_parity_.assign(1u << g_, {});
        for (const auto& row : rows_) {
            by_parity_[row.parity].push_back(&row);
            all_rows_.push_back(&row);
        }
    }

public:
    // Q - p must stay positive semidefinite, with room for the all-odd
    // columns of the rest of the block.
    bool feasible(const std::array<std::int16_t, kMaxEntries>& p, std::uint8_t parity, int remaining) const {
        std::array<std::array<std::int64_t, kMaxGenus>, kMaxGenus> s{};
        for (int e = 0; e < ne_; ++e) s[ei_[e]][ej_[e]] = s[ej_[e]][ei_[e]] = q_[e] - p[e];
        for (int i = 0; i < g_; ++i) {
            const auto d = s[i][i];
            if (d < 0 || (((parity >> i) & 1) && d < remaining)) return false;
        }
        for (int i = 0; i < g_; ++i)
            for (int j = i + 1; j < g_; ++j)
                if (s[i][i] * s[j][j] < s[i][j] * s[i][j]) return false;
        if (g_ < 3) return true;
        auto det3 = [&](int a, int b, int c) {
            return s[a][a] * (s[b][b] * s[c][c] - s[b][c] * s[c][b]) - s[a][b] * (s[b][a] * s[c][c] - s[b][c] * s[c][a]) +
                   s[a][c] * (s[b][a] * s[c][b] - s[b][b] * s[c][a]);
        };
        if (g_ == 3) return det3(0, 1, 2) >= 0;
        if (det3(0, 1, 2) < 0 || det3(0, 1, 3) < 0 || det3(0, 2, 3) < 0 || det3(1, 2, 3) < 0) return false;
        // 4x4 determinant by cofactor expansion along the first row.
        const std::int64_t d4 = s[0][0] * det3_minor(s, 0) - s[0][1] * det3_minor(s, 1) + s[0][2] * det3_minor(s, 2) -
                                s[0][3] * det3_minor(s, 3);
        return d4 >= 0;
    }

private:

    static std::int64_t det3_minor(const std::array<std::array<std::int64_t, kMaxGenus>, kMaxGenus>& s, int skip) {
        int c[3];
        for (int k = 0, n = 0; k < 4; ++k)
            if (k != skip) c[n++] = k;
        return s[1][c[0]] * (s[2][c[1]] * s[3][c[2]] - s[2][c[2]] * s[3][c[1]]) -
               s[1][c[1]] * (s[2][c[0]] * s[3][c[2]] - s[2][c[2]] * s[3][c[0]]) +
               s[1][c[2]] * (s[2][c[0]] * s[3][c[1]] - s[2][c[1]] * s[3][c[0]]);
    }

    int g_;
    int ne_;
    std::array<int, kMaxEntries> ei_{}, ej_{};
    std::array<std::array<int, kMaxGenus>, kMaxGenus> eidx_{};
    std::array<int, kMaxEntries> q_{};
    std::array<int, kMaxGenus> qd_{};
    std::array<std::int64_t, kMaxEntries> lo_{};
    std::array<std::uint64_t, kMaxEntries> coef_{};
    std::vector<Row> rows_;
    std::vector<std::vector<const Row*>> by_parity_;
    std::vector<const Row*> all_rows_;
};

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out;
    if (__builtin_mul_overflow(a, b, &out)) throw ResourceLimitError("representation count overflows 64 bits");
    return out;
}

}  // namespace

std::uint64_t DnPlusLattice::count(const EvenSymMatrix& t_in) const {
    std::vector<int> keep;
    for (int i = 0; i < t_in.size(); ++i)
        if (t_in(i, i) != 0) keep.push_back(i);
    const int g = static_cast<int>(keep.size());
    if (g == 0) return 1;
    if (g > kMaxGenus) throw ValidationError("coordinate counting supports at most 4 nonzero columns");
    const RowProgram program(t_in.entries().principal(keep));

    // Rank 16 splits into two identical runs over 8 coordinates that meet in
    // the middle: Gram sums P and Q - P with matching block data.
    const bool split_blocks = blocks_ == std::vector<int>{8, 8};
    const bool split_single = blocks_ == std::vector<int>{16};
    if (split_blocks || split_single) {
        const auto half = program.run(8, 0, split_blocks);
        absl::flat_hash_map<Key, std::uint64_t> lookup;
        lookup.reserve(half.size());
        for (const State& s : half) lookup.emplace(Key{s.key_p, aux_of(s.parity, s.bits)}, s.count);
        std::uint64_t total = 0;
        for (const State& s : half) {
            const auto other = program.complement(s.p);
            auto it = lookup.find(Key{program.key_of(other), aux_of(s.parity, s.bits)});
            if (it != lookup.end()) total = checked_add(total, checked_mul(s.count, it->second));
        }
        return total;
    }

    // General case: run the blocks in sequence.
    std::vector<State> states(1);
    states[0].key_p = program.key_of(states[0].p);
    states[0].count = 1;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        const auto block = program.run(blocks_[b], 0, true);
        if (b == 0) {
            states = block;
            continue;
        }
        // Convolve accumulated sums with one more block.
        absl::flat_hash_map<std::uint64_t, std::uint32_t> index;
        std::vector<State> next;
        for (const State& a : states)
            for (const State& c : block) {
                std::array<std::int16_t, kMaxEntries> p{};
                for (int e = 0; e < kMaxEntries; ++e) p[e] = static_cast<std::int16_t>(a.p[e] + c.p[e]);
                if (!program.feasible(p, 0, 0)) continue;
                const std::uint64_t key = program.key_of(p);
                auto [it, inserted] = index.try_emplace(key, static_cast<std::uint32_t>(next.size()));
                const std::uint64_t w = checked_mul(a.count, c.count);
                if (inserted) {
                    State ns;
                    ns.p = p;
                    ns.key_p = key;
                    ns.count = w;
                    next.push_back(ns);
                } else {
                    next[it->second].count = checked_add(next[it->second].count, w);
                }
            }
        states.swap(next);
    }
    for (const State& s : states)
        if (program.is_target(s.p)) return s.count;
    return 0;
}

}  // namespace siegel::lattice
