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
#ifndef CMM_LINALG_H
#define CMM_LINALG_H

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace cmm {

using Complex = std::complex<double>;

/// Dense complex matrix stored row-major.
class CMatrix {
   public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols);
    CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
    CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static CMatrix identity(std::size_t n);
    static CMatrix diagonal(std::span<const double> values);
    static CMatrix diagonal(std::initializer_list<double> values);
    /// |ket><bra|
    static CMatrix outer(std::span<const Complex> ket, std::span<const Complex> bra);
    static CMatrix projector(std::span<const Complex> ket);

    std::size_t rows() const {
        return rows_;
    }
    std::size_t cols() const {
        return cols_;
    }
    bool is_square() const {
        return rows_ == cols_;
    }
    bool empty() const {
        return entries_.empty();
    }

    Complex &operator()(std::size_t r, std::size_t c) {
        return entries_[r * cols_ + c];
    }
    const Complex &operator()(std::size_t r, std::size_t c) const {
        return entries_[r * cols_ + c];
    }
    std::span<const Complex> entries() const {
        return entries_;
    }

    CMatrix adjoint() const;
    CMatrix transpose() const;
    CMatrix conj() const;
    Complex trace() const;
    /// (M + M^dagger) / 2
    CMatrix hermitian_part() const;

    CMatrix &operator+=(const CMatrix &other);
    CMatrix &operator-=(const CMatrix &other);
    CMatrix &operator*=(Complex scalar);

   private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> entries_;
};

CMatrix operator+(CMatrix a, const CMatrix &b);
CMatrix operator-(CMatrix a, const CMatrix &b);
CMatrix operator*(const CMatrix &a, const CMatrix &b);
CMatrix operator*(Complex scalar, CMatrix m);
CMatrix operator*(CMatrix m, Complex scalar);
std::vector<Complex> operator*(const CMatrix &m, std::span<const Complex> v);

/// Kronecker product a (x) b.
CMatrix kron(const CMatrix &a, const CMatrix &b);
/// Largest entry modulus.
double max_norm(const CMatrix &m);
double max_abs_diff(const CMatrix &a, const CMatrix &b);
/// Tr(a b) without forming the product.
Complex trace_of_product(const CMatrix &a, const CMatrix &b);
/// max |M - M^dagger|
double hermitian_residual(const CMatrix &m);

/// Column-stacking vectorization: vec(M)[i + n*j] = M(i, j).
std::vector<Complex> vectorize(const CMatrix &m);
CMatrix unvectorize(std::span<const Complex> v, std::size_t n);

Complex inner(std::span<const Complex> a, std::span<const Complex> b);
double norm(std::span<const Complex> v);
std::vector<Complex> normalized(std::vector<Complex> v);

/// Raw eigenpairs of a Hermitian matrix, ascending; eigenvectors are the columns of vectors.
struct EigenSystem {
    std::vector<double> values;
    CMatrix vectors;
};

/// Cyclic complex Jacobi diagonalization. Throws DomainError on non-Hermitian input.
EigenSystem jacobi_eigensystem(const CMatrix &m, double hermitian_tol = 1e-12);

/// Distinct (clustered) eigenvalues in descending order with their eigenspace projectors.
struct SpectralDecomposition {
    std::vector<double> eigenvalues;
    std::vector<CMatrix> projectors;

    std::size_t size() const {
        return eigenvalues.size();
    }
    /// Sum of x * E(x).
    CMatrix reconstruct() const;
};

/// Spectral decomposition with eigenvalues closer than cluster_tol * max(1, spectral radius) merged.
SpectralDecomposition hermitian_eig(const CMatrix &m, double cluster_tol = 1e-8, double hermitian_tol = 1e-12);

double min_eigenvalue(const CMatrix &m, double hermitian_tol = 1e-12);
/// True iff the smallest eigenvalue is >= -tol. Throws DomainError on non-Hermitian input.
bool psd_check(const CMatrix &m, double tol = 1e-9, double hermitian_tol = 1e-12);

/// Principal square root of a PSD matrix (negative eigenvalues from rounding are clipped).
CMatrix psd_sqrt(const CMatrix &m, double hermitian_tol = 1e-12);

}  // namespace cmm

#endif
