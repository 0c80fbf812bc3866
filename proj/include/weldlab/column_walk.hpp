// column_walk.hpp - the (2k+2)-dimensional reduction of the welded-tree
// continuous-time quantum walk. The walk-invariant subspace is spanned by
// uniform superpositions over tree layers; on that basis the adjacency
// matrix is tridiagonal with coupling sqrt(2) between successive layers and
// coupling 2 across the weld. Evolution uses the dense eigendecomposition.
#pragma once

#include "weldlab/dense_eig.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace weldlab {

using Complex = std::complex<double>;

class ColumnWalk {
public:
    explicit ColumnWalk(int k) : k_(k) {
        if (k < 1) throw std::invalid_argument("ColumnWalk: k must be >= 1");
        dim_ = 2 * k + 2;
        couplings_.assign(static_cast<std::size_t>(dim_) - 1, std::sqrt(2.0));
        couplings_[static_cast<std::size_t>(k)] = 2.0; // the weld coupling
        std::vector<double> h(static_cast<std::size_t>(dim_) * dim_, 0.0);
        for (int j = 0; j + 1 < dim_; ++j) {
            h[static_cast<std::size_t>(j) * dim_ + j + 1] = couplings_[static_cast<std::size_t>(j)];
            h[static_cast<std::size_t>(j + 1) * dim_ + j] = couplings_[static_cast<std::size_t>(j)];
        }
        eig_ = jacobi_eigen(h, static_cast<std::size_t>(dim_));
    }

    int k() const { return k_; }
    int dim() const { return dim_; }
    const std::vector<double>& couplings() const { return couplings_; }
    const SymmetricEigen& eigen() const { return eig_; }

    // Number of vertices in layer j of the welded tree (1,2,...,2^k,2^k,...,1).
    std::uint64_t layer_size(int j) const {
        if (j < 0 || j >= dim_) throw std::out_of_range("layer index");
        const int d = j <= k_ ? j : 2 * k_ + 1 - j;
        return std::uint64_t{1} << d;
    }

    // exp(-iHt) applied to a column-space state.
    std::vector<Complex> evolve(double t, const std::vector<Complex>& psi0) const {
        if (static_cast<int>(psi0.size()) != dim_)
            throw std::invalid_argument("ColumnWalk::evolve: dimension mismatch");
        const std::size_t n = static_cast<std::size_t>(dim_);
        std::vector<Complex> coeff(n), out(n, Complex{0.0, 0.0});
        for (std::size_t j = 0; j < n; ++j) {
            Complex c{0.0, 0.0};
            for (std::size_t i = 0; i < n; ++i) c += eig_.vectors[j][i] * psi0[i];
            const double phase = -eig_.values[j] * t;
            coeff[j] = c * Complex{std::cos(phase), std::sin(phase)};
        }
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) out[i] += eig_.vectors[j][i] * coeff[j];
        return out;
    }

    // Amplitude <column j | exp(-iHt) | entrance column>.
    Complex entrance_amplitude(double t, int j) const {
        if (j < 0 || j >= dim_) throw std::out_of_range("column index");
        Complex a{0.0, 0.0};
        for (std::size_t m = 0; m < static_cast<std::size_t>(dim_); ++m) {
            const double phase = -eig_.values[m] * t;
            a += eig_.vectors[m][0] * eig_.vectors[m][static_cast<std::size_t>(j)] *
                 Complex{std::cos(phase), std::sin(phase)};
        }
        return a;
    }

    // Probability of measuring the exit root at time t when starting at the
    // entrance root. Entrance/exit layers are singletons, so this equals the
    // full-graph exit-vertex probability.
    double exit_probability(double t) const {
        const Complex a = entrance_amplitude(t, dim_ - 1);
        return std::norm(a);
    }

private:
    int k_;
    int dim_;
    std::vector<double> couplings_;
    SymmetricEigen eig_;
};

struct ExitSweepPoint {
    double t;
    double p_entrance;
    double p_exit;
};

struct ExitSweepResult {
    std::vector<ExitSweepPoint> points;
    double t_star = 0.0; // argmax of exit probability over the grid
    double p_star = 0.0; // the maximum itself
};

// Scans t in [0, t_max] with step dt and records entrance/exit probabilities.
inline ExitSweepResult exit_probability_sweep(const ColumnWalk& walk, double t_max, double dt) {
    if (walk.k() < 2) throw std::invalid_argument("exit sweep requires k >= 2");
    if (dt <= 0.0 || t_max <= 0.0) throw std::invalid_argument("bad sweep grid");
    ExitSweepResult res;
    const int steps = static_cast<int>(t_max / dt);
    res.points.reserve(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i) {
        const double t = i * dt;
        const double pe = std::norm(walk.entrance_amplitude(t, 0));
        const double px = walk.exit_probability(t);
        res.points.push_back({t, pe, px});
        if (px > res.p_star) {
            res.p_star = px;
            res.t_star = t;
        }
    }
    return res;
}

// Default sweep grid: t in [0, 50k], dt = 0.05.
inline ExitSweepResult default_exit_sweep(int k) {
    ColumnWalk walk(k);
    return exit_probability_sweep(walk, 50.0 * k, 0.05);
}

} // namespace weldlab
