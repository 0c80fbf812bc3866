// sparse_evolve.hpp - Chebyshev propagation of exp(-iAt) for sparse
// symmetric 0/1 adjacency matrices (the full welded-tree components).
//
// exp(-iAt) psi = sum_m c_m(t) T_m(A/s) psi with c_m = (2-delta_m0) (-i)^m J_m(s t),
// where s bounds the spectral radius (max degree suffices). Bessel values
// come from Miller's downward recurrence, which is stable for the orders the
// truncated series needs.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace weldlab {

using Complex = std::complex<double>;

struct SparseSym {
    std::uint32_t n = 0;
    std::vector<std::uint32_t> row_ptr; // size n+1
    std::vector<std::uint32_t> col;     // neighbor indices

    static SparseSym from_adjacency(const std::vector<std::vector<std::uint32_t>>& adj) {
        SparseSym m;
        m.n = static_cast<std::uint32_t>(adj.size());
        m.row_ptr.resize(m.n + 1, 0);
        for (std::uint32_t i = 0; i < m.n; ++i)
            m.row_ptr[i + 1] = m.row_ptr[i] + static_cast<std::uint32_t>(adj[i].size());
        m.col.reserve(m.row_ptr[m.n]);
        for (const auto& row : adj)
            for (std::uint32_t j : row) m.col.push_back(j);
        return m;
    }

    int max_degree() const {
        int d = 0;
        for (std::uint32_t i = 0; i < n; ++i)
            d = std::max<int>(d, static_cast<int>(row_ptr[i + 1] - row_ptr[i]));
        return d;
    }

    void apply(const std::vector<Complex>& x, std::vector<Complex>& y) const {
        y.assign(n, Complex{0.0, 0.0});
        for (std::uint32_t i = 0; i < n; ++i) {
            Complex acc{0.0, 0.0};
            for (std::uint32_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p) acc += x[col[p]];
            y[i] = acc;
        }
    }
};

// J_0..J_m at x via Miller's algorithm (downward recurrence, normalized by
// J_0 + 2*sum J_2i = 1).
inline std::vector<double> bessel_j_table(int m, double x) {
    if (m < 0) throw std::invalid_argument("bessel_j_table: negative order");
    if (x < 0.0) throw std::invalid_argument("bessel_j_table: negative argument");
    std::vector<double> j(static_cast<std::size_t>(m) + 1, 0.0);
    if (x == 0.0) {
        j[0] = 1.0;
        return j;
    }
    const int start = m + 20 + static_cast<int>(std::sqrt(40.0 * m + x * x));
    double jp = 0.0, jc = 1e-30, norm = 0.0;
    for (int i = start; i >= 1; --i) {
        const double jm = 2.0 * i / x * jc - jp;
        jp = jc;
        jc = jm;
        if (std::fabs(jc) > 1e100) { // rescale to avoid overflow
            jc *= 1e-100;
            jp *= 1e-100;
            norm *= 1e-100;
            for (double& v : j) v *= 1e-100;
        }
        if (i - 1 <= m) j[static_cast<std::size_t>(i - 1)] = jc;
        if (((i - 1) & 1) == 0) norm += (i == 1 ? 1.0 : 2.0) * jc;
    }
    for (double& v : j) v /= norm;
    return j;
}

// exp(-iAt) psi0 by Chebyshev series. Throws on norm drift beyond 1e-9.
inline std::vector<Complex> chebyshev_evolve(const SparseSym& a, double t,
                                             const std::vector<Complex>& psi0) {
    if (psi0.size() != a.n) throw std::invalid_argument("chebyshev_evolve: dimension mismatch");
    if (t < 0.0) throw std::invalid_argument("chebyshev_evolve: negative time");
    const double scale = std::max(1.0, static_cast<double>(a.max_degree()));
    const double tau = scale * t;
    int terms = static_cast<int>(tau + 40.0 + 12.0 * std::cbrt(tau + 1.0));

    const std::vector<double> bes = bessel_j_table(terms, tau);

    // T_0 = psi, T_1 = (A/scale) psi, T_{m+1} = 2 (A/scale) T_m - T_{m-1}
    std::vector<Complex> tm_prev = psi0;
    std::vector<Complex> tm_cur(a.n), scratch(a.n);
    a.apply(psi0, tm_cur);
    for (auto& v : tm_cur) v /= scale;

    const Complex phases[4] = {{1.0, 0.0}, {0.0, -1.0}, {-1.0, 0.0}, {0.0, 1.0}};
    std::vector<Complex> out(a.n);
    for (std::uint32_t i = 0; i < a.n; ++i) out[i] = bes[0] * psi0[i];
    for (int m = 1; m <= terms; ++m) {
        const Complex cm = 2.0 * bes[static_cast<std::size_t>(m)] * phases[m & 3];
        for (std::uint32_t i = 0; i < a.n; ++i) out[i] += cm * tm_cur[i];
        if (m == terms) break;
        a.apply(tm_cur, scratch);
        for (std::uint32_t i = 0; i < a.n; ++i)
            scratch[i] = 2.0 * scratch[i] / scale - tm_prev[i];
        tm_prev.swap(tm_cur);
        tm_cur.swap(scratch);
    }

    double norm0 = 0.0, norm1 = 0.0;
    for (std::uint32_t i = 0; i < a.n; ++i) {
        norm0 += std::norm(psi0[i]);
        norm1 += std::norm(out[i]);
    }
    if (std::fabs(std::sqrt(norm1) - std::sqrt(norm0)) > 1e-9)
        throw std::runtime_error("chebyshev_evolve: norm drift exceeds 1e-9");
    return out;
}

} // namespace weldlab
