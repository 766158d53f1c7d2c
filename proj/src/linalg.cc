// Copyright 2026 The CMM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "cmm/linalg.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cmm/errors.h"

namespace cmm {

namespace {

void require_same_shape(const CMatrix &a, const CMatrix &b, const char *op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeError(std::string(op) + ": " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                         " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    }
}

void require_square(const CMatrix &m, const char *op) {
    if (!m.is_square()) {
        throw ShapeError(std::string(op) + " needs a square matrix, got " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
    }
}

void require_hermitian(const CMatrix &m, double tol, const char *op) {
    require_square(m, op);
    double scale = std::max(1.0, max_norm(m));
    double r = hermitian_residual(m);
    if (!(r <= tol * scale)) {
        throw DomainError(std::string(op) + ": matrix is not Hermitian (residual " + std::to_string(r) + ")");
    }
}

}  // namespace

CMatrix::CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {
}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows * cols) {
        throw ShapeError("CMatrix: " + std::to_string(entries_.size()) + " entries for " + std::to_string(rows) +
                         "x" + std::to_string(cols));
    }
    for (const auto &z : entries_) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw DomainError("CMatrix: non-finite entry");
        }
    }
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    entries_.reserve(rows_ * cols_);
    for (const auto &row : rows) {
        if (row.size() != cols_) {
            throw ShapeError("CMatrix: ragged initializer");
        }
        entries_.insert(entries_.end(), row.begin(), row.end());
    }
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

CMatrix CMatrix::diagonal(std::span<const double> values) {
    CMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        m(i, i) = values[i];
    }
    return m;
}

CMatrix CMatrix::diagonal(std::initializer_list<double> values) {
    return diagonal(std::span<const double>(values.begin(), values.size()));
}

CMatrix CMatrix::outer(std::span<const Complex> ket, std::span<const Complex> bra) {
    CMatrix m(ket.size(), bra.size());
    for (std::size_t r = 0; r < ket.size(); ++r) {
        for (std::size_t c = 0; c < bra.size(); ++c) {
            m(r, c) = ket[r] * std::conj(bra[c]);
        }
    }
    return m;
}

CMatrix CMatrix::projector(std::span<const Complex> ket) {
    return outer(ket, ket);
}

CMatrix CMatrix::adjoint() const {
    CMatrix m(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            m(c, r) = std::conj((*this)(r, c));
        }
    }
    return m;
}

CMatrix CMatrix::transpose() const {
    CMatrix m(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            m(c, r) = (*this)(r, c);
        }
    }
    return m;
}

CMatrix CMatrix::conj() const {
    CMatrix m = *this;
    for (auto &z : m.entries_) {
        z = std::conj(z);
    }
    return m;
}

Complex CMatrix::trace() const {
    require_square(*this, "trace");
    Complex t = 0;
    for (std::size_t i = 0; i < rows_; ++i) {
        t += (*this)(i, i);
    }
    return t;
}

CMatrix CMatrix::hermitian_part() const {
    require_square(*this, "hermitian_part");
    CMatrix m(rows_, cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            m(r, c) = 0.5 * ((*this)(r, c) + std::conj((*this)(c, r)));
        }
    }
    return m;
}

CMatrix &CMatrix::operator+=(const CMatrix &other) {
    require_same_shape(*this, other, "add");
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        entries_[k] += other.entries_[k];
    }
    return *this;
}

CMatrix &CMatrix::operator-=(const CMatrix &other) {
    require_same_shape(*this, other, "subtract");
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        entries_[k] -= other.entries_[k];
    }
    return *this;
}

CMatrix &CMatrix::operator*=(Complex scalar) {
    for (auto &z : entries_) {
        z *= scalar;
    }
    return *this;
}

CMatrix operator+(CMatrix a, const CMatrix &b) {
    a += b;
    return a;
}

CMatrix operator-(CMatrix a, const CMatrix &b) {
    a -= b;
    return a;
}

CMatrix operator*(const CMatrix &a, const CMatrix &b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("multiply: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " by " +
                         std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    }
    CMatrix m(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            Complex f = a(r, k);
            if (f == Complex(0)) {
                continue;
            }
            for (std::size_t c = 0; c < b.cols(); ++c) {
                m(r, c) += f * b(k, c);
            }
        }
    }
    return m;
}

CMatrix operator*(Complex scalar, CMatrix m) {
    m *= scalar;
    return m;
}

CMatrix operator*(CMatrix m, Complex scalar) {
    m *= scalar;
    return m;
}

std::vector<Complex> operator*(const CMatrix &m, std::span<const Complex> v) {
    if (m.cols() != v.size()) {
        throw ShapeError("matrix-vector: " + std::to_string(m.cols()) + " columns vs length " +
                         std::to_string(v.size()));
    }
    std::vector<Complex> out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Complex acc = 0;
        for (std::size_t c = 0; c < m.cols(); ++c) {
            acc += m(r, c) * v[c];
        }
        out[r] = acc;
    }
    return out;
}

CMatrix kron(const CMatrix &a, const CMatrix &b) {
    CMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ar = 0; ar < a.rows(); ++ar) {
        for (std::size_t ac = 0; ac < a.cols(); ++ac) {
            Complex f = a(ar, ac);
            for (std::size_t br = 0; br < b.rows(); ++br) {
                for (std::size_t bc = 0; bc < b.cols(); ++bc) {
                    m(ar * b.rows() + br, ac * b.cols() + bc) = f * b(br, bc);
                }
            }
        }
    }
    return m;
}

double max_norm(const CMatrix &m) {
    double best = 0;
    for (const auto &z : m.entries()) {
        best = std::max(best, std::abs(z));
    }
    return best;
}

double max_abs_diff(const CMatrix &a, const CMatrix &b) {
    require_same_shape(a, b, "max_abs_diff");
    double best = 0;
    for (std::size_t k = 0; k < a.entries().size(); ++k) {
        best = std::max(best, std::abs(a.entries()[k] - b.entries()[k]));
    }
    return best;
}

Complex trace_of_product(const CMatrix &a, const CMatrix &b) {
    if (a.cols() != b.rows() || a.rows() != b.cols()) {
        throw ShapeError("trace_of_product: incompatible shapes");
    }
    Complex t = 0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            t += a(i, k) * b(k, i);
        }
    }
    return t;
}

double hermitian_residual(const CMatrix &m) {
    require_square(m, "hermitian_residual");
    double best = 0;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = r; c < m.cols(); ++c) {
            best = std::max(best, std::abs(m(r, c) - std::conj(m(c, r))));
        }
    }
    return best;
}

std::vector<Complex> vectorize(const CMatrix &m) {
    std::vector<Complex> v(m.rows() * m.cols());
    for (std::size_t c = 0; c < m.cols(); ++c) {
        for (std::size_t r = 0; r < m.rows(); ++r) {
            v[r + m.rows() * c] = m(r, c);
        }
    }
    return v;
}

CMatrix unvectorize(std::span<const Complex> v, std::size_t n) {
    if (v.size() != n * n) {
        throw ShapeError("unvectorize: length " + std::to_string(v.size()) + " is not " + std::to_string(n) + "^2");
    }
    CMatrix m(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t r = 0; r < n; ++r) {
            m(r, c) = v[r + n * c];
        }
    }
    return m;
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) {
        throw ShapeError("inner: length mismatch");
    }
    Complex acc = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        acc += std::conj(a[k]) * b[k];
    }
    return acc;
}

double norm(std::span<const Complex> v) {
    double acc = 0;
    for (const auto &z : v) {
        acc += std::norm(z);
    }
    return std::sqrt(acc);
}

std::vector<Complex> normalized(std::vector<Complex> v) {
    double n = norm(v);
    if (!(n > 0)) {
        throw DomainError("normalized: zero vector");
    }
    for (auto &z : v) {
        z /= n;
    }
    return v;
}

EigenSystem jacobi_eigensystem(const CMatrix &m, double hermitian_tol) {
    require_hermitian(m, hermitian_tol, "hermitian_eig");
    const std::size_t n = m.rows();
    CMatrix a = m.hermitian_part();
    CMatrix v = CMatrix::identity(n);

    auto off_norm = [&]() {
        double s = 0;
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = r + 1; c < n; ++c) {
                s += std::norm(a(r, c));
            }
        }
        return std::sqrt(s);
    };
    double scale = 0;
    for (const auto &z : a.entries()) {
        scale += std::norm(z);
    }
    scale = std::sqrt(scale);
    const double target = 1e-15 * std::max(scale, 1e-300);

    for (int sweep = 0; sweep < 100 && off_norm() > target; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double mag = std::abs(a(p, q));
                if (mag <= 1e-300) {
                    continue;
                }
                // Phase the (p,q) entry real, then apply a real Givens rotation.
                Complex phase = std::conj(a(p, q)) / mag;
                double app = a(p, p).real();
                double aqq = a(q, q).real();
                double theta = 0.5 * std::atan2(2.0 * mag, aqq - app);
                double c = std::cos(theta);
                double s = std::sin(theta);
                // Column action of G restricted to (p,q): new_p = g00 col_p + g10 col_q, new_q = g01 col_p + g11 col_q.
                Complex g00 = c, g01 = s, g10 = -s * phase, g11 = c * phase;
                for (std::size_t k = 0; k < n; ++k) {
                    Complex kp = a(k, p), kq = a(k, q);
                    a(k, p) = g00 * kp + g10 * kq;
                    a(k, q) = g01 * kp + g11 * kq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    Complex pk = a(p, k), qk = a(q, k);
                    a(p, k) = std::conj(g00) * pk + std::conj(g10) * qk;
                    a(q, k) = std::conj(g01) * pk + std::conj(g11) * qk;
                }
                a(p, q) = 0;
                a(q, p) = 0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (std::size_t k = 0; k < n; ++k) {
                    Complex kp = v(k, p), kq = v(k, q);
                    v(k, p) = g00 * kp + g10 * kq;
                    v(k, q) = g01 * kp + g11 * kq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
    EigenSystem out;
    out.values.resize(n);
    out.vectors = CMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; ++r) {
            out.vectors(r, k) = v(r, order[k]);
        }
    }
    return out;
}

CMatrix SpectralDecomposition::reconstruct() const {
    if (projectors.empty()) {
        return {};
    }
    CMatrix m(projectors.front().rows(), projectors.front().cols());
    for (std::size_t k = 0; k < projectors.size(); ++k) {
        m += eigenvalues[k] * projectors[k];
    }
    return m;
}

SpectralDecomposition hermitian_eig(const CMatrix &m, double cluster_tol, double hermitian_tol) {
    EigenSystem es = jacobi_eigensystem(m, hermitian_tol);
    const std::size_t n = es.values.size();
    SpectralDecomposition out;
    if (n == 0) {
        return out;
    }
    double radius = std::max(std::abs(es.values.front()), std::abs(es.values.back()));
    double gap = cluster_tol * std::max(1.0, radius);

    // Walk from the top of the spectrum so outcomes come out in descending order.
    std::size_t k = n;
    while (k > 0) {
        std::size_t hi = k - 1;
        std::size_t lo = hi;
        while (lo > 0 && es.values[hi] - es.values[lo - 1] <= gap) {
            --lo;
        }
        double sum = 0;
        CMatrix proj(n, n);
        for (std::size_t j = lo; j <= hi; ++j) {
            sum += es.values[j];
            for (std::size_t r = 0; r < n; ++r) {
                Complex vr = es.vectors(r, j);
                for (std::size_t c = 0; c < n; ++c) {
                    proj(r, c) += vr * std::conj(es.vectors(c, j));
                }
            }
        }
        out.eigenvalues.push_back(sum / static_cast<double>(hi - lo + 1));
        out.projectors.push_back(proj.hermitian_part());
        k = lo;
    }
    return out;
}

double min_eigenvalue(const CMatrix &m, double hermitian_tol) {
    EigenSystem es = jacobi_eigensystem(m, hermitian_tol);
    return es.values.empty() ? 0.0 : es.values.front();
}

bool psd_check(const CMatrix &m, double tol, double hermitian_tol) {
    return min_eigenvalue(m, hermitian_tol) >= -tol;
}

CMatrix psd_sqrt(const CMatrix &m, double hermitian_tol) {
    EigenSystem es = jacobi_eigensystem(m, hermitian_tol);
    const std::size_t n = es.values.size();
    CMatrix out(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = std::sqrt(std::max(0.0, es.values[j]));
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                out(r, c) += s * es.vectors(r, j) * std::conj(es.vectors(c, j));
            }
        }
    }
    return out.hermitian_part();
}

}  // namespace cmm
