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
#ifndef CMM_TESTS_ORACLE_H
#define CMM_TESTS_ORACLE_H

// Small independent reference computations for tests. Uses plain nested vectors so it does not
// depend on the library's matrix kernel.

#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using Mat = std::vector<std::vector<C>>;
using Vec = std::vector<C>;

inline Mat zeros(std::size_t n) {
    return Mat(n, std::vector<C>(n));
}

inline Mat mul(const Mat &a, const Mat &b) {
    Mat out = zeros(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < a.size(); ++k)
            for (std::size_t j = 0; j < a.size(); ++j) out[i][j] += a[i][k] * b[k][j];
    return out;
}

inline Mat dagger(const Mat &a) {
    Mat out = zeros(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) out[i][j] = std::conj(a[j][i]);
    return out;
}

inline C trace(const Mat &a) {
    C t = 0;
    for (std::size_t i = 0; i < a.size(); ++i) t += a[i][i];
    return t;
}

inline Mat ket_bra(const Vec &k, const Vec &b) {
    Mat out = zeros(k.size());
    for (std::size_t i = 0; i < k.size(); ++i)
        for (std::size_t j = 0; j < k.size(); ++j) out[i][j] = k[i] * std::conj(b[j]);
    return out;
}

inline Mat kron(const Mat &a, const Mat &b) {
    const std::size_t n = a.size(), m = b.size();
    Mat out = zeros(n * m);
    for (std::size_t i = 0; i < n * m; ++i)
        for (std::size_t j = 0; j < n * m; ++j) out[i][j] = a[i / m][j / m] * b[i % m][j % m];
    return out;
}

/// Projector onto the +1 or -1 eigenspace of n . sigma.
inline Mat bloch_projector(double nx, double ny, double nz, int sign) {
    double s = sign;
    return {{C(0.5 * (1 + s * nz)), C(0.5 * s * nx, -0.5 * s * ny)},
            {C(0.5 * s * nx, 0.5 * s * ny), C(0.5 * (1 - s * nz))}};
}

inline double born(const Mat &p, const Mat &rho) {
    return trace(mul(p, rho)).real();
}

/// Tr(P_B P_A rho P_A P_B): probability of A then B with Lüders updates.
inline double sequential2(const Mat &pa, const Mat &pb, const Mat &rho) {
    return trace(mul(mul(mul(pb, pa), rho), mul(pa, pb))).real();
}

/// Tr(P3 P2 P1 rho P1 P2 P3).
inline double sequential3(const Mat &p1, const Mat &p2, const Mat &p3, const Mat &rho) {
    Mat k = mul(p3, mul(p2, p1));
    return trace(mul(mul(k, rho), dagger(k))).real();
}

inline Mat pure(const Vec &psi) {
    return ket_bra(psi, psi);
}

}  // namespace oracle

#endif
