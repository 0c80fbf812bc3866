// dense_eig.hpp - cyclic Jacobi eigensolver for small real symmetric
// matrices (column-walk Hamiltonians are at most ~30x30).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace weldlab {

struct SymmetricEigen {
    std::vector<double> values;          // ascending
    std::vector<std::vector<double>> vectors; // vectors[j] = eigenvector for values[j]
};

// a is row-major n*n, symmetric. Throws if the matrix is not symmetric.
inline SymmetricEigen jacobi_eigen(std::vector<double> a, std::size_t n,
                                   double tol = 1e-14, int max_sweeps = 100) {
    if (a.size() != n * n) throw std::invalid_argument("jacobi_eigen: size mismatch");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::fabs(a[i * n + j] - a[j * n + i]) > 1e-12)
                throw std::invalid_argument("jacobi_eigen: matrix not symmetric");

    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a[i * n + j] * a[i * n + j];
        if (off < tol * tol) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (std::fabs(apq) < 1e-300) continue;
                const double app = a[p * n + p], aqq = a[q * n + q];
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = a[i * n + p], aiq = a[i * n + q];
                    a[i * n + p] = c * aip - s * aiq;
                    a[i * n + q] = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double api = a[p * n + i], aqi = a[q * n + i];
                    a[p * n + i] = c * api - s * aqi;
                    a[q * n + i] = s * api + c * aqi;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = v[i * n + p], viq = v[i * n + q];
                    v[i * n + p] = c * vip - s * viq;
                    v[i * n + q] = s * vip + c * viq;
                }
            }
        }
    }

    SymmetricEigen out;
    out.values.resize(n);
    out.vectors.assign(n, std::vector<double>(n));
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < n; ++i) out.values[i] = a[i * n + i];
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
        return out.values[x] < out.values[y];
    });
    std::vector<double> sorted(n);
    for (std::size_t j = 0; j < n; ++j) sorted[j] = out.values[idx[j]];
    out.values = sorted;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) out.vectors[j][i] = v[i * n + idx[j]];
    return out;
}

} // namespace weldlab
