#include "padicrot/matrix.hpp"

#include <algorithm>
#include <sstream>

namespace padicrot {

PMatrix::PMatrix(std::size_t rows, std::size_t cols, const PAdic& fill)
    : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

PMatrix PMatrix::identity(unsigned p, std::size_t n, int prec) {
    PMatrix m(n, n, PAdic::zero(p, prec));
    for (std::size_t i = 0; i < n; ++i) m(i, i) = PAdic::one(p, prec);
    return m;
}

PMatrix PMatrix::diagonal(const std::vector<PAdic>& d) {
    if (d.empty()) return {};
    PMatrix m(d.size(), d.size(), PAdic::zero(d[0].prime(), d[0].precision()));
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

PMatrix PMatrix::from_rows(const std::vector<std::vector<PAdic>>& rows) {
    if (rows.empty()) return {};
    PMatrix m(rows.size(), rows[0].size(), PAdic());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols_) throw DimensionMismatch("ragged matrix rows");
        for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

unsigned PMatrix::prime() const {
    for (const auto& x : a_)
        if (x.prime()) return x.prime();
    return 0;
}

PMatrix PMatrix::transpose() const {
    PMatrix t(cols_, rows_, PAdic());
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

PMatrix operator*(const PMatrix& x, const PMatrix& y) {
    if (x.cols_ != y.rows_) throw DimensionMismatch("matrix product shape mismatch");
    PMatrix r(x.rows_, y.cols_, PAdic());
    for (std::size_t i = 0; i < x.rows_; ++i)
        for (std::size_t j = 0; j < y.cols_; ++j) {
            PAdic s;
            for (std::size_t k = 0; k < x.cols_; ++k) s += x(i, k) * y(k, j);
            r(i, j) = s;
        }
    return r;
}

PMatrix operator+(const PMatrix& x, const PMatrix& y) {
    if (x.rows_ != y.rows_ || x.cols_ != y.cols_) throw DimensionMismatch("matrix sum shape mismatch");
    PMatrix r = x;
    for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] = x.a_[i] + y.a_[i];
    return r;
}

PMatrix operator-(const PMatrix& x, const PMatrix& y) {
    if (x.rows_ != y.rows_ || x.cols_ != y.cols_) throw DimensionMismatch("matrix difference shape mismatch");
    PMatrix r = x;
    for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] = x.a_[i] - y.a_[i];
    return r;
}

PMatrix PMatrix::scaled(const PAdic& s) const {
    PMatrix r = *this;
    for (auto& x : r.a_) x = x * s;
    return r;
}

std::vector<PAdic> PMatrix::apply(const std::vector<PAdic>& v) const {
    if (v.size() != cols_) throw DimensionMismatch("vector length does not match matrix");
    std::vector<PAdic> r(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        PAdic s;
        for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

namespace {

PAdic laplace(const PMatrix& m, std::vector<std::size_t>& cols, std::size_t row) {
    std::size_t n = cols.size();
    if (n == 1) return m(row, cols[0]);
    PAdic det;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t col = cols[c];
        if (m(row, col).is_exact_zero()) continue;
        cols.erase(cols.begin() + static_cast<long>(c));
        PAdic minor = laplace(m, cols, row + 1);
        cols.insert(cols.begin() + static_cast<long>(c), col);
        PAdic term = m(row, col) * minor;
        det = (c % 2 == 0) ? det + term : det - term;
    }
    return det;
}

int entry_valuation(const PAdic& x) {
    if (x.is_exact_zero()) return kInfiniteValuation;
    if (x.is_zero()) return x.absprec();
    return x.valuation();
}

}  // namespace

PAdic determinant(const PMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("determinant of a non-square matrix");
    std::size_t n = m.rows();
    if (n == 0) return PAdic();
    if (n <= 4) {
        std::vector<std::size_t> cols(n);
        for (std::size_t i = 0; i < n; ++i) cols[i] = i;
        PAdic d = laplace(m, cols, 0);
        if (d.prime() == 0) return PAdic::zero(m.prime());
        return d;
    }
    // Gaussian elimination with pivots of least valuation, which is the
    // numerically stable choice in an ultrametric field.
    PMatrix a = m;
    PAdic det = PAdic::one(m.prime(), m(0, 0).precision());
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = n;
        int best = kInfiniteValuation;
        for (std::size_t i = k; i < n; ++i) {
            if (a(i, k).is_zero()) continue;
            int v = a(i, k).valuation();
            if (piv == n || v < best) { piv = i; best = v; }
        }
        if (piv == n) {
            bool exact = true;
            for (std::size_t i = k; i < n; ++i) exact = exact && a(i, k).is_exact_zero();
            if (exact) return PAdic::zero(m.prime());
            int lb = kInfiniteValuation;
            for (std::size_t i = k; i < n; ++i) lb = std::min(lb, entry_valuation(a(i, k)));
            return PAdic::inexact_zero(m.prime(), lb);
        }
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            det = -det;
        }
        det = det * a(k, k);
        PAdic inv = a(k, k).inv();
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a(i, k).is_exact_zero()) continue;
            PAdic f = a(i, k) * inv;
            for (std::size_t j = k; j < n; ++j) a(i, j) = a(i, j) - f * a(k, j);
        }
    }
    return det;
}

int min_entry_valuation(const PMatrix& m) {
    int v = kInfiniteValuation;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) v = std::min(v, entry_valuation(m(i, j)));
    return v;
}

std::size_t ResidueMatrixHash::operator()(const ResidueMatrix& m) const noexcept {
    std::uint64_t h = 1469598103934665603ull ^ m.n;
    for (int i = 0; i < m.n * m.n; ++i) {
        h ^= m.e[static_cast<std::size_t>(i)];
        h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h ^ (h >> 29));
}

ResidueMatrix residue_product(const ResidueMatrix& a, const ResidueMatrix& b, std::uint64_t modulus) {
    ResidueMatrix r;
    r.n = a.n;
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j) {
            unsigned __int128 s = 0;
            for (int k = 0; k < a.n; ++k) s += static_cast<unsigned __int128>(a.at(i, k)) * b.at(k, j);
            r.at(i, j) = static_cast<std::uint32_t>(s % modulus);
        }
    return r;
}

ResidueMatrix residue_identity(int n) {
    ResidueMatrix r;
    r.n = static_cast<std::uint8_t>(n);
    for (int i = 0; i < n; ++i) r.at(i, i) = 1;
    return r;
}

ResidueMatrix reduce(const PMatrix& m, int k) {
    if (m.rows() != m.cols() || m.rows() > 4) throw DimensionMismatch("residue matrices are at most 4x4");
    ResidueMatrix r;
    r.n = static_cast<std::uint8_t>(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (!m(i, j).is_integral())
                throw ChartDomainExceeded("matrix entry " + m(i, j).to_string() + " is not in Z_p");
            r.at(static_cast<int>(i), static_cast<int>(j)) = static_cast<std::uint32_t>(m(i, j).residue_u64(k));
        }
    return r;
}

std::string residue_key(const ResidueMatrix& m) {
    std::string s;
    for (int i = 0; i < m.n * m.n; ++i) {
        if (i) s += ',';
        s += std::to_string(m.e[static_cast<std::size_t>(i)]);
    }
    return s;
}

ResidueMatrix parse_residue_key(const std::string& key, int n, std::uint64_t modulus) {
    ResidueMatrix m;
    m.n = static_cast<std::uint8_t>(n);
    std::stringstream ss(key);
    std::string item;
    int i = 0;
    while (std::getline(ss, item, ',')) {
        if (i >= n * n) throw DimensionMismatch("too many entries in residue key '" + key + "'");
        long long v = std::stoll(item);
        long long mm = static_cast<long long>(modulus);
        m.e[static_cast<std::size_t>(i++)] = static_cast<std::uint32_t>(((v % mm) + mm) % mm);
    }
    if (i != n * n) throw DimensionMismatch("residue key '" + key + "' needs " + std::to_string(n * n) + " entries");
    return m;
}

}  // namespace padicrot
