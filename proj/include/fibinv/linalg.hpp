#pragma once

#include "ratfun.hpp"

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

namespace fibinv {

// ---- dense matrix over an exact field/ring ----

template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(size_t rows, size_t cols, const T& fill = T())
        : rows_(rows), cols_(cols), data_(rows * cols, fill)
    {
    }

    static Matrix identity(size_t n)
    {
        Matrix m(n, n, T(0));
        for (size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    static Matrix fromRows(const std::vector<std::vector<T>>& rows)
    {
        size_t r = rows.size();
        size_t c = r ? rows[0].size() : 0;
        Matrix m(r, c);
        for (size_t i = 0; i < r; ++i) {
            if (rows[i].size() != c) throw ValidationError("ragged matrix rows");
            for (size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    T& operator()(size_t i, size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(size_t i, size_t j) const { return data_[i * cols_ + j]; }

    bool operator==(const Matrix& o) const
    {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    Matrix operator-() const
    {
        Matrix r = *this;
        for (auto& x : r.data_) x = -x;
        return r;
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b)
    {
        a.checkSameShape(b, "+");
        Matrix r = a;
        for (size_t k = 0; k < r.data_.size(); ++k) r.data_[k] = r.data_[k] + b.data_[k];
        return r;
    }

    friend Matrix operator-(const Matrix& a, const Matrix& b)
    {
        a.checkSameShape(b, "-");
        Matrix r = a;
        for (size_t k = 0; k < r.data_.size(); ++k) r.data_[k] = r.data_[k] - b.data_[k];
        return r;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b)
    {
        if (a.cols_ != b.rows_)
            throw ValidationError("matrix product dimension mismatch: " + a.shape() + " * " + b.shape());
        Matrix r(a.rows_, b.cols_, T(0));
        for (size_t i = 0; i < a.rows_; ++i)
            for (size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                if (aik == T(0)) continue;
                for (size_t j = 0; j < b.cols_; ++j) r(i, j) = r(i, j) + aik * b(k, j);
            }
        return r;
    }

    Matrix scaled(const T& c) const
    {
        Matrix r = *this;
        for (auto& x : r.data_) x = x * c;
        return r;
    }

    Matrix transposed() const
    {
        Matrix r(cols_, rows_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    bool isZero() const
    {
        for (const auto& x : data_)
            if (!(x == T(0))) return false;
        return true;
    }

    bool isSquare() const { return rows_ == cols_; }

    T trace() const
    {
        if (!isSquare()) throw ValidationError("trace of non-square matrix");
        T s(0);
        for (size_t i = 0; i < rows_; ++i) s = s + (*this)(i, i);
        return s;
    }

    Matrix pow(unsigned e) const
    {
        if (!isSquare()) throw ValidationError("power of non-square matrix");
        Matrix r = identity(rows_), b = *this;
        while (e) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }

    void swapRows(size_t i, size_t j)
    {
        if (i == j) return;
        for (size_t k = 0; k < cols_; ++k) std::swap((*this)(i, k), (*this)(j, k));
    }

    void swapCols(size_t i, size_t j)
    {
        if (i == j) return;
        for (size_t k = 0; k < rows_; ++k) std::swap((*this)(k, i), (*this)(k, j));
    }

    std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

private:
    size_t rows_ = 0, cols_ = 0;
    std::vector<T> data_;

    void checkSameShape(const Matrix& o, const char* op) const
    {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw ValidationError(std::string("matrix ") + op + " dimension mismatch: " + shape() + " vs " + o.shape());
    }
};

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;
using RatFunMatrix = Matrix<RatFun>;

inline RatMatrix toRational(const IntMatrix& m)
{
    RatMatrix r(m.rows(), m.cols());
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) r(i, j) = Rational(m(i, j));
    return r;
}

inline RatFunMatrix toRatFun(const IntMatrix& m)
{
    RatFunMatrix r(m.rows(), m.cols());
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) r(i, j) = RatFun(Rational(m(i, j)));
    return r;
}

// ---- field elimination (Q or Q(t)) ----

// Gauss-Jordan inverse; names the failing pivot column when singular.
template <class T>
Matrix<T> inverse(const Matrix<T>& m)
{
    if (!m.isSquare()) throw ValidationError("inverse of non-square matrix " + m.shape());
    size_t n = m.rows();
    Matrix<T> a = m, inv = Matrix<T>::identity(n);
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && a(piv, col) == T(0)) ++piv;
        if (piv == n)
            throw ComputeError("singular matrix: no nonzero pivot in column " + std::to_string(col + 1));
        a.swapRows(col, piv);
        inv.swapRows(col, piv);
        T d = a(col, col);
        for (size_t j = 0; j < n; ++j) {
            a(col, j) = a(col, j) / d;
            inv(col, j) = inv(col, j) / d;
        }
        for (size_t i = 0; i < n; ++i) {
            if (i == col) continue;
            T f = a(i, col);
            if (f == T(0)) continue;
            for (size_t j = 0; j < n; ++j) {
                a(i, j) = a(i, j) - f * a(col, j);
                inv(i, j) = inv(i, j) - f * inv(col, j);
            }
        }
    }
    return inv;
}

// Bareiss fraction-free determinant; all divisions are exact.
inline Integer determinant(const IntMatrix& m)
{
    if (!m.isSquare()) throw ValidationError("determinant of non-square matrix " + m.shape());
    size_t n = m.rows();
    if (n == 0) return Integer(1);
    IntMatrix a = m;
    Integer prev(1);
    int sign = 1;
    for (size_t col = 0; col + 1 < n; ++col) {
        size_t piv = col;
        while (piv < n && a(piv, col) == 0) ++piv;
        if (piv == n) return Integer(0);
        if (piv != col) {
            a.swapRows(col, piv);
            sign = -sign;
        }
        for (size_t i = col + 1; i < n; ++i)
            for (size_t j = col + 1; j < n; ++j)
                a(i, j) = (a(i, j) * a(col, col) - a(i, col) * a(col, j)) / prev;
        prev = a(col, col);
    }
    return sign > 0 ? a(n - 1, n - 1) : Integer(-a(n - 1, n - 1));
}

template <class T>
T determinant(const Matrix<T>& m)
{
    if (!m.isSquare()) throw ValidationError("determinant of non-square matrix " + m.shape());
    size_t n = m.rows();
    if (n == 0) return T(1);
    Matrix<T> a = m;
    T det(1);
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && a(piv, col) == T(0)) ++piv;
        if (piv == n) return T(0);
        if (piv != col) {
            a.swapRows(col, piv);
            det = -det;
        }
        det = det * a(col, col);
        T d = a(col, col);
        for (size_t i = col + 1; i < n; ++i) {
            T f = a(i, col) / d;
            if (f == T(0)) continue;
            for (size_t j = col; j < n; ++j) a(i, j) = a(i, j) - f * a(col, j);
        }
    }
    return det;
}

// Reduced row echelon over a field; returns pivot column per row rank.
template <class T>
size_t rowReduce(Matrix<T>& a, std::vector<size_t>* pivots = nullptr)
{
    size_t r = 0;
    for (size_t col = 0; col < a.cols() && r < a.rows(); ++col) {
        size_t piv = r;
        while (piv < a.rows() && a(piv, col) == T(0)) ++piv;
        if (piv == a.rows()) continue;
        a.swapRows(r, piv);
        T d = a(r, col);
        for (size_t j = col; j < a.cols(); ++j) a(r, j) = a(r, j) / d;
        for (size_t i = 0; i < a.rows(); ++i) {
            if (i == r) continue;
            T f = a(i, col);
            if (f == T(0)) continue;
            for (size_t j = col; j < a.cols(); ++j) a(i, j) = a(i, j) - f * a(r, j);
        }
        if (pivots) pivots->push_back(col);
        ++r;
    }
    return r;
}

// ---- integer normal forms ----

// Smith normal form: returns min(rows,cols) invariant factors d1 | d2 | ...,
// nonnegative, zeros trailing.
inline std::vector<Integer> smithNormalForm(IntMatrix a)
{
    size_t n = std::min(a.rows(), a.cols());
    std::vector<Integer> factors;
    size_t top = 0;
    while (top < n) {
        // locate smallest nonzero entry in the remaining block
        bool found = false;
        size_t pi = top, pj = top;
        Integer best = 0;
        for (size_t i = top; i < a.rows(); ++i)
            for (size_t j = top; j < a.cols(); ++j) {
                Integer v = abs(a(i, j));
                if (v != 0 && (!found || v < best)) {
                    found = true;
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        if (!found) break;
        a.swapRows(top, pi);
        a.swapCols(top, pj);

        bool again = true;
        while (again) {
            again = false;
            for (size_t i = top + 1; i < a.rows(); ++i) {
                if (a(i, top) == 0) continue;
                Integer q = a(i, top) / a(top, top);
                for (size_t j = top; j < a.cols(); ++j) a(i, j) -= q * a(top, j);
                if (a(i, top) != 0) {
                    a.swapRows(top, i);
                    again = true;
                }
            }
            for (size_t j = top + 1; j < a.cols(); ++j) {
                if (a(top, j) == 0) continue;
                Integer q = a(top, j) / a(top, top);
                for (size_t i = top; i < a.rows(); ++i) a(i, j) -= q * a(i, top);
                if (a(top, j) != 0) {
                    a.swapCols(top, j);
                    again = true;
                }
            }
        }
        // pivot must divide the rest of the block
        bool clean = true;
        for (size_t i = top + 1; i < a.rows() && clean; ++i)
            for (size_t j = top + 1; j < a.cols() && clean; ++j)
                if (a(i, j) % a(top, top) != 0) {
                    for (size_t k = top; k < a.cols(); ++k) a(top, k) += a(i, k);
                    clean = false;
                }
        if (!clean) continue;
        factors.push_back(abs(a(top, top)));
        ++top;
    }
    factors.resize(n, Integer(0));
    return factors;
}

// Column-style Hermite reduction of the lattice spanned by the columns of a.
// Returns the list of (pivot row, basis column) in increasing pivot row order;
// basis columns are stored back into the first columns of a.
struct ColumnLattice {
    IntMatrix basis;             // cols = lattice basis vectors
    std::vector<size_t> pivotRow; // pivotRow[k] = row of the k-th pivot
};

inline ColumnLattice columnHermite(IntMatrix a)
{
    size_t rows = a.rows(), cols = a.cols();
    size_t k = 0; // next basis column slot
    for (size_t row = 0; row < rows && k < cols; ++row) {
        // gcd out the row among columns k..cols-1
        while (true) {
            size_t nz = cols;
            Integer best = 0;
            for (size_t j = k; j < cols; ++j) {
                Integer v = abs(a(row, j));
                if (v != 0 && (nz == cols || v < best)) {
                    nz = j;
                    best = v;
                }
            }
            if (nz == cols) break;
            a.swapCols(k, nz);
            bool done = true;
            for (size_t j = k + 1; j < cols; ++j) {
                if (a(row, j) == 0) continue;
                Integer q = a(row, j) / a(row, k);
                for (size_t i = 0; i < rows; ++i) a(i, j) -= q * a(i, k);
                if (a(row, j) != 0) done = false;
            }
            if (done) break;
        }
        if (a(row, k) == 0) continue;
        if (a(row, k) < 0)
            for (size_t i = 0; i < rows; ++i) a(i, k) = -a(i, k);
        ++k;
    }
    ColumnLattice out;
    out.basis = IntMatrix(rows, k);
    size_t col = 0;
    for (size_t j = 0; j < k; ++j) {
        size_t pr = 0;
        while (pr < rows && a(pr, j) == 0) ++pr;
        out.pivotRow.push_back(pr);
        for (size_t i = 0; i < rows; ++i) out.basis(i, col) = a(i, j);
        ++col;
    }
    return out;
}

// Canonical coset representative of v modulo the column lattice: pivot
// components are reduced into [0, pivot).
inline std::vector<Integer> latticeReduce(const ColumnLattice& lat, std::vector<Integer> v)
{
    for (size_t kcol = 0; kcol < lat.pivotRow.size(); ++kcol) {
        size_t r = lat.pivotRow[kcol];
        Integer p = lat.basis(r, kcol);
        Integer q;
        if (v[r] >= 0)
            q = v[r] / p;
        else
            q = -((-v[r] + p - 1) / p); // floor division
        if (q != 0)
            for (size_t i = 0; i < v.size(); ++i) v[i] -= q * lat.basis(i, kcol);
    }
    return v;
}

// ---- minimal polynomial over Q ----

// Smallest monic m with m(A) = 0, found by the first linear dependency among
// vectorized powers of A.
inline LaurentPoly minimalPolynomial(const RatMatrix& a)
{
    if (!a.isSquare()) throw ValidationError("minimal polynomial of non-square matrix");
    size_t n = a.rows();
    if (n == 0) return LaurentPoly::one();
    size_t dim = n * n;
    std::vector<std::vector<Rational>> powersVec;
    RatMatrix p = RatMatrix::identity(n);
    for (size_t k = 0; k <= n; ++k) {
        std::vector<Rational> v(dim);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) v[i * n + j] = p(i, j);
        powersVec.push_back(v);

        // try to solve powers[k] = sum_{i<k} c_i powers[i]
        if (k >= 1) {
            RatMatrix sys(dim, k + 1);
            for (size_t col = 0; col < k; ++col)
                for (size_t row = 0; row < dim; ++row) sys(row, col) = powersVec[col][row];
            for (size_t row = 0; row < dim; ++row) sys(row, k) = powersVec[k][row];
            std::vector<size_t> pivots;
            rowReduce(sys, &pivots);
            bool solvable = true;
            for (size_t c : pivots)
                if (c == k) solvable = false;
            if (solvable) {
                // read back coefficients from the reduced system
                std::vector<Rational> coeff(k, Rational(0));
                for (size_t r = 0; r < pivots.size(); ++r) coeff[pivots[r]] = sys(r, k);
                LaurentPoly m = LaurentPoly::t(static_cast<int>(k));
                for (size_t i = 0; i < k; ++i) m -= LaurentPoly::monomial(coeff[i], static_cast<int>(i));
                return m;
            }
        }
        p = p * a;
    }
    throw ComputeError("minimal polynomial search exceeded matrix size");
}

inline LaurentPoly minimalPolynomial(const IntMatrix& a) { return minimalPolynomial(toRational(a)); }

// ---- rendering ----

template <class T, class Fn>
std::string matrixToString(const Matrix<T>& m, Fn&& entry)
{
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < m.rows(); ++i) {
        if (i) os << ",\n ";
        os << "[";
        for (size_t j = 0; j < m.cols(); ++j) {
            if (j) os << ", ";
            os << entry(m(i, j));
        }
        os << "]";
    }
    os << "]";
    return os.str();
}

inline std::string str(const RatFunMatrix& m)
{
    return matrixToString(m, [](const RatFun& f) { return f.str(); });
}

inline std::string str(const IntMatrix& m)
{
    return matrixToString(m, [](const Integer& v) { return v.str(); });
}

} // namespace fibinv
