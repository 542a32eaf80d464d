#include "chang/steenrod.hpp"

#include <algorithm>
#include <stdexcept>

namespace chang {

F2Matrix F2Matrix::identity(int n) {
    F2Matrix m(n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, true);
    return m;
}

F2Matrix F2Matrix::operator*(const F2Matrix& rhs) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("F2Matrix: shape mismatch in product");
    F2Matrix out(rows_, rhs.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k)
            if (get(i, k))
                for (int j = 0; j < rhs.cols_; ++j)
                    if (rhs.get(k, j)) out.flip(i, j);
    return out;
}

F2Matrix F2Matrix::operator+(const F2Matrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw std::invalid_argument("F2Matrix: shape mismatch in sum");
    F2Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] ^= rhs.data_[i];
    return out;
}

bool F2Matrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](auto v) { return v == 0; });
}

int F2Matrix::rank() const {
    F2Matrix m = *this;
    int rank = 0;
    for (int c = 0; c < cols_ && rank < rows_; ++c) {
        int pivot = -1;
        for (int r = rank; r < rows_; ++r)
            if (m.get(r, c)) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        for (int j = 0; j < cols_; ++j) {
            bool t = m.get(rank, j);
            m.set(rank, j, m.get(pivot, j));
            m.set(pivot, j, t);
        }
        for (int r = 0; r < rows_; ++r)
            if (r != rank && m.get(r, c))
                for (int j = 0; j < cols_; ++j)
                    if (m.get(rank, j)) m.flip(r, j);
        ++rank;
    }
    return rank;
}

int SqModule::dim(int degree) const {
    auto it = basis.find(degree);
    return it == basis.end() ? 0 : static_cast<int>(it->second.size());
}

F2Matrix SqModule::op(int k, int degree) const {
    if (k == 3) return composite({1, 2}, degree);
    auto it = ops_.find(k);
    if (it != ops_.end()) {
        auto jt = it->second.find(degree);
        if (jt != it->second.end()) return jt->second;
    }
    return F2Matrix(dim(degree + k), dim(degree));
}

void SqModule::set_op(int k, int degree, const F2Matrix& m) {
    if (k != 1 && k != 2 && k != 4) throw std::invalid_argument("only Sq^1, Sq^2, Sq^4 are stored");
    if (m.rows() != dim(degree + k) || m.cols() != dim(degree))
        throw std::invalid_argument("Sq matrix shape does not match the basis");
    ops_[k][degree] = m;
}

F2Matrix SqModule::composite(const std::vector<int>& ops, int degree) const {
    F2Matrix acc = F2Matrix::identity(dim(degree));
    int d = degree;
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        acc = op(*it, d) * acc;
        d += *it;
    }
    return acc;
}

std::pair<int, int> SqModule::locate(const std::string& label) const {
    for (const auto& [d, names] : basis)
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == label) return {d, static_cast<int>(i)};
    throw std::invalid_argument("no basis element named '" + label + "'");
}

std::vector<std::string> SqModule::apply(int k, const std::string& label) const {
    auto [d, i] = locate(label);
    F2Matrix m = op(k, d);
    std::vector<std::string> out;
    auto it = basis.find(d + k);
    for (int r = 0; r < m.rows(); ++r)
        if (m.get(r, i)) out.push_back(it->second[static_cast<std::size_t>(r)]);
    std::sort(out.begin(), out.end());
    return out;
}

std::map<int, int> SqModule::poincare() const {
    std::map<int, int> out;
    for (const auto& [d, names] : basis)
        if (!names.empty()) out[d] = static_cast<int>(names.size());
    return out;
}

SqModule SqModule::shifted(int by) const {
    SqModule out;
    for (const auto& [d, names] : basis) out.basis[d + by] = names;
    for (const auto& [k, per] : ops_)
        for (const auto& [d, m] : per) out.ops_[k][d + by] = m;
    return out;
}

SqModule SqModule::relabeled(const std::string& prefix, const std::string& suffix) const {
    SqModule out = *this;
    for (auto& [d, names] : out.basis)
        for (auto& n : names) n = prefix + n + suffix;
    return out;
}

SqModule direct_sum(const SqModule& a, const SqModule& b) {
    SqModule out;
    std::map<int, int> offset;
    for (const auto& [d, names] : a.basis) out.basis[d] = names;
    for (const auto& [d, names] : b.basis) {
        offset[d] = out.dim(d);
        auto& slot = out.basis[d];
        slot.insert(slot.end(), names.begin(), names.end());
    }
    for (int k : {1, 2, 4}) {
        for (const auto& [d, names] : out.basis) {
            (void)names;
            if (out.dim(d + k) == 0 || out.dim(d) == 0) continue;
            F2Matrix m(out.dim(d + k), out.dim(d));
            F2Matrix ma = a.op(k, d);
            for (int i = 0; i < ma.rows(); ++i)
                for (int j = 0; j < ma.cols(); ++j) m.set(i, j, ma.get(i, j));
            F2Matrix mb = b.op(k, d);
            int ro = a.dim(d + k), co = a.dim(d);
            for (int i = 0; i < mb.rows(); ++i)
                for (int j = 0; j < mb.cols(); ++j) m.set(ro + i, co + j, mb.get(i, j));
            if (!m.is_zero()) out.set_op(k, d, m);
        }
    }
    return out;
}

namespace {

// Index of (i, j) inside the tensor basis of degree d = di + dj.
struct TensorIndex {
    std::map<std::pair<std::pair<int, int>, std::pair<int, int>>, int> pos;
};

}  // namespace

SqModule cartan(const SqModule& a, const SqModule& b) {
    SqModule out;
    TensorIndex idx;
    for (const auto& [da, na] : a.basis)
        for (const auto& [db, nb] : b.basis)
            for (std::size_t i = 0; i < na.size(); ++i)
                for (std::size_t j = 0; j < nb.size(); ++j) {
                    auto& slot = out.basis[da + db];
                    idx.pos[{{da, static_cast<int>(i)}, {db, static_cast<int>(j)}}] = static_cast<int>(slot.size());
                    slot.push_back(na[i] + "\xE2\x8A\x97" + nb[j]);
                }

    // Sq^n(x ⊗ y) = Σ_{i+j=n} Sq^i x ⊗ Sq^j y.
    auto factor_op = [](const SqModule& m, int k, int d) {
        return k == 0 ? F2Matrix::identity(m.dim(d)) : m.op(k, d);
    };
    for (int n : {1, 2, 4}) {
        for (const auto& [d, names] : out.basis) {
            (void)names;
            if (out.dim(d + n) == 0) continue;
            F2Matrix m(out.dim(d + n), out.dim(d));
            for (const auto& [da, na] : a.basis)
                for (const auto& [db, nb] : b.basis) {
                    if (da + db != d) continue;
                    for (int i = 0; i <= n; ++i) {
                        int j = n - i;
                        if (a.dim(da + i) == 0 || b.dim(db + j) == 0) continue;
                        F2Matrix sa = factor_op(a, i, da);
                        F2Matrix sb = factor_op(b, j, db);
                        for (int x = 0; x < static_cast<int>(na.size()); ++x)
                            for (int y = 0; y < static_cast<int>(nb.size()); ++y) {
                                int col = idx.pos.at({{da, x}, {db, y}});
                                for (int xr = 0; xr < sa.rows(); ++xr) {
                                    if (!sa.get(xr, x)) continue;
                                    for (int yr = 0; yr < sb.rows(); ++yr) {
                                        if (!sb.get(yr, y)) continue;
                                        int row = idx.pos.at({{da + i, xr}, {db + j, yr}});
                                        m.flip(row, col);
                                    }
                                }
                            }
                    }
                }
            if (!m.is_zero()) out.set_op(n, d, m);
        }
    }
    return out;
}

}  // namespace chang
