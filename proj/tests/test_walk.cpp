#include "doctest.h"

#include "weldlab/column_walk.hpp"
#include "weldlab/dense_eig.hpp"
#include "weldlab/marker.hpp"
#include "weldlab/sparse_evolve.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>

using namespace weldlab;

namespace {

// Independent oracle for the column couplings: build the full welded-tree
// adjacency, project onto normalized layer-indicator states, and read the
// matrix elements off the projection.
std::vector<std::vector<double>> project_onto_columns(int k, std::uint64_t seed) {
    const std::uint64_t per_tree = (std::uint64_t{2} << k) - 1;
    const std::uint64_t n = 2 * per_tree;
    auto at = [&](int tree, int d, std::uint64_t i) {
        return static_cast<std::uint64_t>(tree) * per_tree + ((std::uint64_t{1} << d) - 1 + i);
    };
    std::vector<std::vector<std::uint8_t>> adj(n, std::vector<std::uint8_t>(n, 0));
    auto connect = [&](std::uint64_t a, std::uint64_t b) { adj[a][b] = adj[b][a] = 1; };
    for (int tree = 0; tree < 2; ++tree)
        for (int d = 0; d < k; ++d)
            for (std::uint64_t i = 0; i < (std::uint64_t{1} << d); ++i)
                for (int b = 0; b < 2; ++b) connect(at(tree, d, i), at(tree, d + 1, 2 * i + b));
    // random alternating weld cycle
    Rng rng = make_rng(seed, "proj-weld");
    std::vector<std::uint64_t> left, right;
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << k); ++i) {
        left.push_back(at(0, k, i));
        right.push_back(at(1, k, i));
    }
    std::shuffle(left.begin(), left.end(), rng);
    std::shuffle(right.begin(), right.end(), rng);
    for (std::size_t i = 0; i < left.size(); ++i) {
        connect(left[i], right[i]);
        connect(right[i], left[(i + 1) % left.size()]);
    }
    // layer of every vertex
    const int dim = 2 * k + 2;
    std::vector<int> layer(n);
    std::vector<double> norm(dim, 0.0);
    for (std::uint64_t v = 0; v < n; ++v) {
        const int tree = v < per_tree ? 0 : 1;
        const std::uint64_t local = v - static_cast<std::uint64_t>(tree) * per_tree;
        int d = 0;
        while (((std::uint64_t{2} << d) - 1) <= local) ++d;
        layer[v] = tree == 0 ? d : 2 * k + 1 - d;
        norm[layer[v]] += 1.0;
    }
    std::vector<std::vector<double>> h(dim, std::vector<double>(dim, 0.0));
    for (std::uint64_t u = 0; u < n; ++u)
        for (std::uint64_t v = 0; v < n; ++v)
            if (adj[u][v])
                h[layer[u]][layer[v]] += 1.0 / std::sqrt(norm[layer[u]] * norm[layer[v]]);
    return h;
}

} // namespace

TEST_CASE("column couplings match the projection oracle") {
    for (int k : {1, 3}) {
        ColumnWalk walk(k);
        CHECK(walk.dim() == 2 * k + 2);
        auto projected = project_onto_columns(k, 1234 + k);
        for (int i = 0; i < walk.dim(); ++i)
            for (int j = 0; j < walk.dim(); ++j) {
                double expected = 0.0;
                if (std::abs(i - j) == 1)
                    expected = walk.couplings()[static_cast<std::size_t>(std::min(i, j))];
                CHECK(std::fabs(projected[i][j] - expected) < 1e-12);
            }
    }
    // explicit coupling values
    ColumnWalk w1(1);
    CHECK(w1.couplings()[0] == doctest::Approx(std::sqrt(2.0)));
    CHECK(w1.couplings()[1] == doctest::Approx(2.0));
    CHECK(w1.couplings()[2] == doctest::Approx(std::sqrt(2.0)));
    ColumnWalk w3(3);
    CHECK(w3.couplings().size() == 7);
    CHECK(w3.couplings()[3] == doctest::Approx(2.0));
    for (std::size_t j : {0u, 1u, 2u, 4u, 5u, 6u})
        CHECK(w3.couplings()[j] == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("column Hamiltonian is reflection symmetric") {
    ColumnWalk walk(4);
    const auto& c = walk.couplings();
    for (std::size_t j = 0; j < c.size(); ++j)
        CHECK(c[j] == doctest::Approx(c[c.size() - 1 - j]));
    for (int j = 0; j < walk.dim(); ++j)
        CHECK(walk.layer_size(j) == walk.layer_size(2 * walk.k() + 1 - j));
}

TEST_CASE("jacobi eigensolver reconstructs symmetric matrices") {
    const std::size_t n = 8;
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) a[i * n + j] = a[j * n + i] = unit(rng);
    SymmetricEigen eig = jacobi_eigen(a, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double rebuilt = 0.0, dot = 0.0;
            for (std::size_t m = 0; m < n; ++m) {
                rebuilt += eig.values[m] * eig.vectors[m][i] * eig.vectors[m][j];
                dot += eig.vectors[m][i] * eig.vectors[m][j];
            }
            CHECK(std::fabs(rebuilt - a[i * n + j]) < 1e-10);
            CHECK(std::fabs(dot - (i == j ? 1.0 : 0.0)) < 1e-10);
        }
    }
    // 2x2 Pauli-X has eigenvalues -1, 1
    SymmetricEigen x = jacobi_eigen({0, 1, 1, 0}, 2);
    CHECK(x.values[0] == doctest::Approx(-1.0));
    CHECK(x.values[1] == doctest::Approx(1.0));

    CHECK_THROWS_AS(jacobi_eigen({0, 1, 2, 0}, 2), std::invalid_argument); // not symmetric
}

TEST_CASE("column evolution is unitary and conserves energy") {
    ColumnWalk walk(4);
    std::vector<Complex> psi0(walk.dim(), Complex{0.0, 0.0});
    psi0[0] = 1.0;
    CHECK(std::abs(walk.evolve(0.0, psi0)[0] - Complex{1.0, 0.0}) < 1e-14);

    auto energy = [&](const std::vector<Complex>& psi) {
        double e = 0.0;
        for (int j = 0; j + 1 < walk.dim(); ++j)
            e += 2.0 * walk.couplings()[static_cast<std::size_t>(j)] *
                 (psi[j] * std::conj(psi[j + 1])).real();
        return e;
    };
    std::vector<Complex> start = walk.evolve(0.7, psi0);
    const double e0 = energy(start);
    for (double t : {1.0, 5.0, 17.5, 60.0}) {
        std::vector<Complex> psi = walk.evolve(t, psi0);
        double norm = 0.0;
        for (const Complex& c : psi) norm += std::norm(c);
        CHECK(std::fabs(std::sqrt(norm) - 1.0) < 1e-12);
        CHECK(std::fabs(energy(psi) - e0) < 1e-9);
    }
}

TEST_CASE("chebyshev propagation matches the analytic 2x2 flip") {
    // adjacency of a single edge: exp(-iXt) = cos t - i sin t X
    SparseSym x = SparseSym::from_adjacency({{1}, {0}});
    for (double t : {0.3, 1.7, 9.2}) {
        std::vector<Complex> psi = chebyshev_evolve(x, t, {Complex{1.0, 0.0}, Complex{0.0, 0.0}});
        CHECK(std::abs(psi[0] - Complex{std::cos(t), 0.0}) < 1e-12);
        CHECK(std::abs(psi[1] - Complex{0.0, -std::sin(t)}) < 1e-12);
    }
    CHECK_THROWS(chebyshev_evolve(x, -1.0, {Complex{1.0, 0.0}, Complex{0.0, 0.0}}));
}

TEST_CASE("bessel table agrees with the standard library") {
    auto table = bessel_j_table(24, 7.5);
    for (int m = 0; m <= 24; ++m)
        CHECK(std::fabs(table[static_cast<std::size_t>(m)] - std::cyl_bessel_j(m, 7.5)) < 1e-12);
}

TEST_CASE("sweep results match the committed table") {
    std::ifstream table(std::string(WELDLAB_SOURCE_DIR) + "/data/exit_probability.csv");
    REQUIRE(table.good());
    std::string line;
    std::getline(table, line); // header
    int rows = 0;
    while (std::getline(table, line)) {
        int k;
        double p_star, t_star, p_hit, t_hit;
        unsigned long long charge;
        REQUIRE(std::sscanf(line.c_str(), "%d,%lf,%lf,%lf,%lf,%llu", &k, &p_star, &t_star, &p_hit,
                            &t_hit, &charge) == 6);
        const WalkCostModel& m = walk_cost_model(k);
        CHECK(m.p_star == doctest::Approx(p_star).epsilon(1e-9));
        CHECK(m.t_star == doctest::Approx(t_star).epsilon(1e-9));
        CHECK(m.p_hit == doctest::Approx(p_hit).epsilon(1e-9));
        CHECK(m.t_hit == doctest::Approx(t_hit).epsilon(1e-9));
        CHECK(m.walk_charge() == charge);
        ++rows;
    }
    CHECK(rows == 11); // k = 2..12
}

TEST_CASE("exit probability starts at zero and clears the 1/(2k) floor") {
    for (int k : {2, 3, 4}) {
        ColumnWalk walk(k);
        CHECK(walk.exit_probability(0.0) == doctest::Approx(0.0));
        const WalkCostModel& m = walk_cost_model(k);
        CHECK(m.p_star >= 1.0 / (2.0 * k));
        CHECK(m.p_hit >= 1.0 / (2.0 * k));
        CHECK(m.t_hit <= m.t_star + 1e-12);
        CHECK(m.walk_charge() > 0);
    }
}

TEST_CASE("full-graph amplitudes reproduce the column reduction") {
    const int k = 4;
    const std::uint64_t per_tree = (std::uint64_t{2} << k) - 1;
    // build adjacency lists with a seeded alternating cycle
    auto at = [&](int tree, int d, std::uint64_t i) {
        return static_cast<std::uint32_t>(tree * per_tree + ((std::uint64_t{1} << d) - 1 + i));
    };
    std::vector<std::vector<std::uint32_t>> adj(2 * per_tree);
    auto connect = [&](std::uint32_t a, std::uint32_t b) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    };
    for (int tree = 0; tree < 2; ++tree)
        for (int d = 0; d < k; ++d)
            for (std::uint64_t i = 0; i < (std::uint64_t{1} << d); ++i)
                for (int b = 0; b < 2; ++b) connect(at(tree, d, i), at(tree, d + 1, 2 * i + b));
    Rng rng = make_rng(4242, "xweld");
    std::vector<std::uint32_t> left, right;
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << k); ++i) {
        left.push_back(at(0, k, i));
        right.push_back(at(1, k, i));
    }
    std::shuffle(left.begin(), left.end(), rng);
    std::shuffle(right.begin(), right.end(), rng);
    for (std::size_t i = 0; i < left.size(); ++i) {
        connect(left[i], right[i]);
        connect(right[i], left[(i + 1) % left.size()]);
    }

    SparseSym a = SparseSym::from_adjacency(adj);
    ColumnWalk walk(k);
    std::vector<Complex> psi0(a.n, Complex{0.0, 0.0});
    psi0[at(0, 0, 0)] = 1.0;
    const WalkCostModel& m = walk_cost_model(k);
    for (double t : {1.0, m.t_hit, m.t_star}) {
        std::vector<Complex> full = chebyshev_evolve(a, t, psi0);
        // the exit layer is a single vertex, so amplitudes compare directly
        CHECK(std::abs(std::norm(full[at(1, 0, 0)]) - walk.exit_probability(t)) < 1e-9);
        CHECK(std::abs(full[at(0, 0, 0)] - walk.entrance_amplitude(t, 0)) < 1e-9);
    }
}
