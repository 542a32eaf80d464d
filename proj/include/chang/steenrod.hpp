#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace chang {

class F2Matrix {
public:
    F2Matrix() = default;
    F2Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), 0) {}
    static F2Matrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool get(int i, int j) const { return data_[static_cast<std::size_t>(i * cols_ + j)] != 0; }
    void set(int i, int j, bool v) { data_[static_cast<std::size_t>(i * cols_ + j)] = v ? 1 : 0; }
    void flip(int i, int j) { data_[static_cast<std::size_t>(i * cols_ + j)] ^= 1; }

    F2Matrix operator*(const F2Matrix& rhs) const;
    F2Matrix operator+(const F2Matrix& rhs) const;
    bool operator==(const F2Matrix& rhs) const = default;
    bool is_zero() const;
    int rank() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<std::uint8_t> data_;
};

// Mod-2 cohomology with the action of Sq^1, Sq^2 and Sq^4.
// sq[k] maps degree d to degree d + k; a missing entry means the zero map.
// Sq^3 is always computed as Sq^1 Sq^2.
class SqModule {
public:
    std::map<int, std::vector<std::string>> basis;

    int dim(int degree) const;
    // Matrix of Sq^k out of the given degree (rows: degree + k, cols: degree).
    F2Matrix op(int k, int degree) const;
    void set_op(int k, int degree, const F2Matrix& m);
    // Composite of operations applied right to left, e.g. {1, 2} is Sq^1 Sq^2.
    F2Matrix composite(const std::vector<int>& ops, int degree) const;

    // Basis labels of Sq^k applied to a basis element.
    std::vector<std::string> apply(int k, const std::string& label) const;
    std::pair<int, int> locate(const std::string& label) const;

    std::map<int, int> poincare() const;
    SqModule shifted(int by) const;
    SqModule relabeled(const std::string& prefix, const std::string& suffix) const;

private:
    std::map<int, std::map<int, F2Matrix>> ops_;
};

SqModule direct_sum(const SqModule& a, const SqModule& b);
// Cartan formula on the tensor product; labels become "x⊗y".
SqModule cartan(const SqModule& a, const SqModule& b);

}  // namespace chang
