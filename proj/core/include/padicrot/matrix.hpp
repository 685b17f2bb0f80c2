#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "padicrot/padic.hpp"

namespace padicrot {

// Dense row-major matrix of p-adic numbers, sized for the 2x2 to 7x7 cases
// that appear in the rotation groups and chart Jacobians.
class PMatrix {
public:
    PMatrix() = default;
    PMatrix(std::size_t rows, std::size_t cols, const PAdic& fill);

    static PMatrix identity(unsigned p, std::size_t n, int prec = kDefaultPrecision);
    static PMatrix diagonal(const std::vector<PAdic>& d);
    static PMatrix from_rows(const std::vector<std::vector<PAdic>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    PAdic& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const PAdic& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
    unsigned prime() const;

    PMatrix transpose() const;
    friend PMatrix operator*(const PMatrix& x, const PMatrix& y);
    friend PMatrix operator+(const PMatrix& x, const PMatrix& y);
    friend PMatrix operator-(const PMatrix& x, const PMatrix& y);
    PMatrix scaled(const PAdic& s) const;

    std::vector<PAdic> apply(const std::vector<PAdic>& v) const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<PAdic> a_;
};

PAdic determinant(const PMatrix& m);

// Smallest valuation over the entries, kInfiniteValuation when every entry is
// an exact zero. Inexact zeros contribute their absolute precision.
int min_entry_valuation(const PMatrix& m);

// A matrix with entries in Z/p^k, used as the key of exact histograms on the
// rotation groups. Entries are stored reduced into [0, p^k).
struct ResidueMatrix {
    std::uint8_t n = 0;
    std::array<std::uint32_t, 16> e{};

    std::uint32_t& at(int i, int j) { return e[static_cast<std::size_t>(i * n + j)]; }
    std::uint32_t at(int i, int j) const { return e[static_cast<std::size_t>(i * n + j)]; }

    friend bool operator==(const ResidueMatrix&, const ResidueMatrix&) = default;
    friend bool operator<(const ResidueMatrix& a, const ResidueMatrix& b) {
        return a.n != b.n ? a.n < b.n : a.e < b.e;
    }
};

struct ResidueMatrixHash {
    std::size_t operator()(const ResidueMatrix& m) const noexcept;
};

ResidueMatrix residue_product(const ResidueMatrix& a, const ResidueMatrix& b, std::uint64_t modulus);
ResidueMatrix residue_identity(int n);
// Reduction of an integral p-adic matrix modulo p^k.
ResidueMatrix reduce(const PMatrix& m, int k);
std::string residue_key(const ResidueMatrix& m);
ResidueMatrix parse_residue_key(const std::string& key, int n, std::uint64_t modulus);

}  // namespace padicrot
