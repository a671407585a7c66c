#include "siegel/int_matrix.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

#include "siegel/error.hpp"

namespace siegel {

namespace {

using Wide = __int128;

Wide wide_gcd(Wide a, Wide b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        const Wide t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Int narrow(Wide v) {
    if (v > static_cast<Wide>(INT64_MAX) || v < static_cast<Wide>(INT64_MIN)) {
        throw ResourceLimitError("integer overflow in exact matrix arithmetic");
    }
    return static_cast<Int>(v);
}

}  // namespace

IntMatrix::IntMatrix(int rows, int cols, Int fill)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
    if (rows < 0 || cols < 0) throw ValidationError("negative matrix dimension");
}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<Int>> rows) {
    rows_ = static_cast<int>(rows.size());
    cols_ = rows_ == 0 ? 0 : static_cast<int>(rows.begin()->size());
    data_.reserve(static_cast<std::size_t>(rows_) * cols_);
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != cols_) throw ValidationError("ragged matrix literal");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

IntMatrix IntMatrix::identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix t(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

bool IntMatrix::is_symmetric() const {
    if (!is_square()) return false;
    for (int r = 0; r < rows_; ++r)
        for (int c = r + 1; c < cols_; ++c)
            if ((*this)(r, c) != (*this)(c, r)) return false;
    return true;
}

IntMatrix IntMatrix::principal(std::span<const int> idx) const {
    const int k = static_cast<int>(idx.size());
    IntMatrix p(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) p(i, j) = (*this)(idx[i], idx[j]);
    return p;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw ValidationError("matrix product shape mismatch");
    IntMatrix out(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
        for (int j = 0; j < b.cols_; ++j) {
            Wide acc = 0;
            for (int k = 0; k < a.cols_; ++k) acc += static_cast<Wide>(a(i, k)) * b(k, j);
            out(i, j) = narrow(acc);
        }
    return out;
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw ValidationError("matrix sum shape mismatch");
    IntMatrix out(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) out.data_[i] = a.data_[i] + b.data_[i];
    return out;
}

IntMatrix operator*(Int s, const IntMatrix& a) {
    IntMatrix out = a;
    for (auto& v : out.data_) v *= s;
    return out;
}

std::strong_ordering IntMatrix::operator<=>(const IntMatrix& other) const {
    if (auto c = rows_ <=> other.rows_; c != 0) return c;
    if (auto c = cols_ <=> other.cols_; c != 0) return c;
    return std::lexicographical_compare_three_way(data_.begin(), data_.end(), other.data_.begin(),
                                                  other.data_.end());
}

std::string IntMatrix::to_string() const {
    std::ostringstream os;
    os << '[';
    for (int r = 0; r < rows_; ++r) {
        os << (r ? ",[" : "[");
        for (int c = 0; c < cols_; ++c) os << (c ? "," : "") << (*this)(r, c);
        os << ']';
    }
    os << ']';
    return os.str();
}

IntMatrix IntMatrix::parse(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("malformed matrix: " + std::string(text));
    }
    if (!j.is_array()) throw ValidationError("matrix must be a list of rows");
    const int rows = static_cast<int>(j.size());
    const int cols = rows ? static_cast<int>(j[0].size()) : 0;
    IntMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols) throw ValidationError("ragged matrix rows");
        for (int c = 0; c < cols; ++c) {
            if (!j[r][c].is_number_integer()) throw ValidationError("matrix entries must be integers");
            m(r, c) = j[r][c].get<Int>();
        }
    }
    return m;
}

Int determinant(const IntMatrix& m) {
    if (!m.is_square()) throw ValidationError("determinant of non-square matrix");
    const int n = m.rows();
    if (n == 0) return 1;
    std::vector<Wide> a(m.data().begin(), m.data().end());
    auto at = [&](int r, int c) -> Wide& { return a[static_cast<std::size_t>(r) * n + c]; };
    Wide prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (at(k, k) == 0) {
            int swap = -1;
            for (int r = k + 1; r < n; ++r)
                if (at(r, k) != 0) {
                    swap = r;
                    break;
                }
            if (swap < 0) return 0;
            for (int c = 0; c < n; ++c) std::swap(at(k, c), at(swap, c));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
        prev = at(k, k);
    }
    return narrow(sign * at(n - 1, n - 1));
}

int rank(const IntMatrix& m) {
    std::vector<Wide> a(m.data().begin(), m.data().end());
    const int rows = m.rows();
    const int cols = m.cols();
    auto at = [&](int r, int c) -> Wide& { return a[static_cast<std::size_t>(r) * cols + c]; };
    int rk = 0;
    for (int c = 0; c < cols && rk < rows; ++c) {
        int piv = -1;
        for (int r = rk; r < rows; ++r)
            if (at(r, c) != 0) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        for (int j = 0; j < cols; ++j) std::swap(at(rk, j), at(piv, j));
        for (int r = rk + 1; r < rows; ++r) {
            if (at(r, c) == 0) continue;
            const Wide f = at(r, c);
            const Wide p = at(rk, c);
            Wide g = 0;
            for (int j = 0; j < cols; ++j) {
                at(r, j) = at(r, j) * p - at(rk, j) * f;
                g = wide_gcd(g, at(r, j));
            }
            if (g > 1)
                for (int j = 0; j < cols; ++j) at(r, j) /= g;
        }
        ++rk;
    }
    return rk;
}

bool is_positive_definite(const IntMatrix& m) {
    if (!m.is_symmetric()) return false;
    std::vector<int> idx;
    for (int k = 0; k < m.rows(); ++k) {
        idx.push_back(k);
        if (determinant(m.principal(idx)) <= 0) return false;
    }
    return true;
}

bool is_positive_semidefinite(const IntMatrix& m) {
    if (!m.is_symmetric()) return false;
    const int n = m.rows();
    if (n > 20) throw ValidationError("semidefiniteness test limited to size 20");
    std::vector<int> idx;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        idx.clear();
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) idx.push_back(i);
        if (determinant(m.principal(idx)) < 0) return false;
    }
    return true;
}

}  // namespace siegel
