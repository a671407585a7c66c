#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace siegel {

using Int = std::int64_t;

/// Dense row-major integer matrix with exact arithmetic helpers.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(int rows, int cols, Int fill = 0);
    IntMatrix(std::initializer_list<std::initializer_list<Int>> rows);

    static IntMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Int& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    Int operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

    std::span<const Int> row(int r) const {
        return {data_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)};
    }
    std::span<const Int> data() const { return data_; }

    IntMatrix transpose() const;
    bool is_symmetric() const;
    bool is_square() const { return rows_ == cols_; }

    /// Principal submatrix on the given (sorted) index set.
    IntMatrix principal(std::span<const int> idx) const;

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
    friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
    friend IntMatrix operator*(Int s, const IntMatrix& a);

    bool operator==(const IntMatrix&) const = default;
    /// Lexicographic by shape, then by row-major entries.
    std::strong_ordering operator<=>(const IntMatrix& other) const;

    std::string to_string() const;
    /// Inverse of to_string: "[[a,b],[c,d]]"; "[]" is the empty matrix.
    static IntMatrix parse(std::string_view text);

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Int> data_;
};

/// Exact determinant (fraction-free Bareiss elimination, 128-bit intermediates).
Int determinant(const IntMatrix& m);

/// Exact rank over the rationals.
int rank(const IntMatrix& m);

/// All leading principal minors strictly positive.
bool is_positive_definite(const IntMatrix& m);

/// All principal minors non-negative.
bool is_positive_semidefinite(const IntMatrix& m);

}  // namespace siegel
