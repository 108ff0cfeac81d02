#include <doctest.h>

#include <cmath>

#include "injnorm/chaining.hpp"
#include "injnorm/errors.hpp"
#include "injnorm/metric_space.hpp"
#include "injnorm/rng.hpp"

using namespace injnorm;

namespace {

FiniteMetricSpace line_space(const std::vector<double>& points) {
    const std::size_t n = points.size();
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) dist[i][j] = std::abs(points[i] - points[j]);
    return FiniteMetricSpace(std::move(dist));
}

FiniteMetricSpace random_cloud(int n, int ambient, RngStream& rng) {
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < n; ++i) {
        std::vector<double> p(static_cast<std::size_t>(ambient));
        for (auto& v : p) v = rng.gaussian();
        pts.push_back(std::move(p));
    }
    std::vector<std::vector<double>> dist(static_cast<std::size_t>(n),
                                          std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (int c = 0; c < ambient; ++c)
                s += (pts[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] -
                      pts[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)]) *
                     (pts[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] -
                      pts[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)]);
            dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = std::sqrt(s);
            dist[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = std::sqrt(s);
        }
    return FiniteMetricSpace(std::move(dist));
}

bool covers(const FiniteMetricSpace& space, const std::vector<int>& centers, double eps) {
    for (int i = 0; i < space.size(); ++i) {
        double best = 1e300;
        for (const int c : centers) best = std::min(best, space.dist(i, c));
        if (best > eps) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("metric space validation") {
    using Matrix = std::vector<std::vector<double>>;
    CHECK_THROWS_AS(FiniteMetricSpace(Matrix{{0.0, 1.0}, {2.0, 0.0}}), DimensionError);  // asymmetric
    CHECK_THROWS_AS(FiniteMetricSpace(Matrix{{1.0}}), DimensionError);  // nonzero diagonal
    CHECK_THROWS_AS(FiniteMetricSpace(Matrix{{0.0, -1.0}, {-1.0, 0.0}}), DimensionError);
    const FiniteMetricSpace bad({{0.0, 1.0, 3.0}, {1.0, 0.0, 1.0}, {3.0, 1.0, 0.0}});
    CHECK(bad.max_triangle_violation() == doctest::Approx(1.0));
    CHECK_THROWS_AS(bad.validate_metric(), DimensionError);
}

TEST_CASE("greedy cover on a line") {
    const FiniteMetricSpace space = line_space({0.0, 0.5, 1.0});
    const GreedyCover c1 = greedy_cover(space, 0.5);
    CHECK(c1.size() <= 3);
    CHECK(covers(space, c1.centers, 0.5));

    const GreedyCover c2 = greedy_cover(space, 0.4);
    CHECK(c2.size() == 3);
    CHECK(covers(space, c2.centers, 0.4));
    // Exhaustive check: no 2-point subset covers at 0.4.
    for (int a = 0; a < 3; ++a)
        for (int b = a; b < 3; ++b) CHECK_FALSE(covers(space, {a, b}, 0.4));

    const FiniteMetricSpace zeros(std::vector<std::vector<double>>(4, std::vector<double>(4, 0.0)));
    CHECK(greedy_cover(zeros, 0.1).size() == 1);
    CHECK_THROWS_AS(greedy_cover(space, 0.0), InputError);
}

TEST_CASE("dudley estimate") {
    const FiniteMetricSpace zeros(std::vector<std::vector<double>>(3, std::vector<double>(3, 0.0)));
    CHECK(dudley_estimate(zeros, dyadic_eps_grid(1.0)) == 0.0);

    const FiniteMetricSpace two({{0.0, 1.0}, {1.0, 0.0}});
    const std::vector<double> grid = dyadic_eps_grid(1.0, 14);
    REQUIRE(grid.size() == 15);
    const double expected = (1.0 - std::ldexp(1.0, -14)) * std::sqrt(std::log(2.0));
    CHECK(dudley_estimate(two, grid) == doctest::Approx(expected).epsilon(1e-12));

    // Sampled profile space stays under a generous envelope.
    const CoeffTensor ones(2, 8, std::vector<double>(64, 1.0));
    const FiniteMetricSpace space = profile_sample_space(ones, 1, 400, {73, 0});
    const double est = dudley_estimate(space, dyadic_eps_grid(std::max(space.diameter(), 1e-12)));
    CHECK(est >= 0.0);
    CHECK(est <= 50.0 * std::sqrt(2.0) * std::pow(std::log(8.0), 2.0) * 1.0);

    CHECK_THROWS_AS(dudley_estimate(two, std::vector<double>{0.5, 0.25}), InputError);
    CHECK_THROWS_AS(dudley_estimate(two, std::vector<double>{}), InputError);
    const std::vector<double> nondec{8, 7, 6, 5, 4, 3, 2, 2};
    CHECK_THROWS_AS(dudley_estimate(two, nondec), InputError);
}

TEST_CASE("admissible sequences") {
    const FiniteMetricSpace single(std::vector<std::vector<double>>(1, std::vector<double>(1, 0.0)));
    const AdmissibleResult s = build_admissible_sequence(single);
    CHECK(s.functional == 0.0);
    CHECK(s.tree.depth() == 1);

    const FiniteMetricSpace two({{0.0, 1.0}, {1.0, 0.0}});
    const AdmissibleResult t = build_admissible_sequence(two);
    CHECK(t.functional == doctest::Approx(1.0));
    REQUIRE(t.tree.depth() >= 2);
    CHECK(t.tree.levels[1].size() == 2);

    const FiniteMetricSpace zeros(std::vector<std::vector<double>>(5, std::vector<double>(5, 0.0)));
    CHECK(build_admissible_sequence(zeros).functional == 0.0);

    // Structural invariants on random clouds: refinement and level caps.
    RngStream rng(79, 0);
    const FiniteMetricSpace cloud = random_cloud(40, 3, rng);
    const AdmissibleResult adm = build_admissible_sequence(cloud);
    for (int m = 0; m < adm.tree.depth(); ++m) {
        const auto& level = adm.tree.levels[static_cast<std::size_t>(m)];
        if (m <= 4) {
            const std::int64_t cap = static_cast<std::int64_t>(1) << (1 << m);
            CHECK(static_cast<std::int64_t>(level.size()) <= cap);
        }
        if (m > 0) {
            // Every block is inside one parent block.
            std::vector<int> parent_of(40, -1);
            const auto& prev = adm.tree.levels[static_cast<std::size_t>(m - 1)];
            for (std::size_t pb = 0; pb < prev.size(); ++pb)
                for (const int p : prev[pb]) parent_of[static_cast<std::size_t>(p)] = static_cast<int>(pb);
            for (const auto& block : level) {
                for (std::size_t i = 1; i < block.size(); ++i)
                    CHECK(parent_of[static_cast<std::size_t>(block[i])] ==
                          parent_of[static_cast<std::size_t>(block[0])]);
            }
        }
    }
    CHECK(adm.functional > 0.0);
    CHECK(adm.functional == doctest::Approx(chaining_functional(cloud, adm.tree)));
}

TEST_CASE("ultrametric construction") {
    const FiniteMetricSpace two({{0.0, 1.0}, {1.0, 0.0}});
    PartitionTree tree;
    tree.levels = {{{0, 1}}, {{0}, {1}}};
    const UltrametricResult u = ultrametric_construct(two, tree);
    CHECK(u.dist_hat[0][1] == doctest::Approx(1.0));

    // Three collinear points 0, 1, 2 with level-1 blocks {0,1} and {2}.
    const FiniteMetricSpace line = line_space({0.0, 1.0, 2.0});
    PartitionTree t2;
    t2.levels = {{{0, 1, 2}}, {{0, 1}, {2}}};
    const UltrametricResult u2 = ultrametric_construct(line, t2);
    CHECK(u2.dist_hat[0][1] == doctest::Approx(1.0));
    CHECK(u2.dist_hat[0][2] == doctest::Approx(2.0));
    CHECK(u2.dist_hat[1][2] == doctest::Approx(2.0));
    CHECK(u2.dist_hat[0][2] <= std::max(u2.dist_hat[0][1], u2.dist_hat[1][2]) + 1e-9);

    const FiniteMetricSpace zeros(std::vector<std::vector<double>>(3, std::vector<double>(3, 0.0)));
    PartitionTree t3;
    t3.levels = {{{0, 1, 2}}};
    for (const auto& row : ultrametric_construct(zeros, t3).dist_hat)
        for (const double v : row) CHECK(v == 0.0);

    PartitionTree broken;
    broken.levels = {{{0}}};
    CHECK_THROWS_AS(ultrametric_construct(two, broken), DimensionError);
}

TEST_CASE("ultrametric properties on random spaces") {
    RngStream rng(83, 0);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 24;
        const FiniteMetricSpace space = random_cloud(n, 4, rng);
        const AdmissibleResult adm = build_admissible_sequence(space);
        const UltrametricResult u = ultrametric_construct(space, adm.tree);

        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) CHECK(u.dist_hat[i][j] >= space.dist(i, j) - 1e-9);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    CHECK(u.dist_hat[i][k] <= std::max(u.dist_hat[i][j], u.dist_hat[j][k]) + 1e-9);

        // Per-block diameters never grow, so the functional cannot either.
        const FiniteMetricSpace hat(u.dist_hat);
        for (const auto& level : adm.tree.levels)
            for (const auto& block : level) {
                double orig = 0.0, ultra = 0.0;
                for (std::size_t a = 0; a < block.size(); ++a)
                    for (std::size_t b2 = a + 1; b2 < block.size(); ++b2) {
                        orig = std::max(orig, space.dist(block[a], block[b2]));
                        ultra = std::max(ultra, hat.dist(block[a], block[b2]));
                    }
                CHECK(ultra <= orig + 1e-9);
            }
        CHECK(chaining_functional(hat, adm.tree) <= chaining_functional(space, adm.tree) + 1e-9);
    }
}

TEST_CASE("hilbert embedding") {
    const FiniteMetricSpace two({{0.0, 1.0}, {1.0, 0.0}});
    const auto e2 = hilbert_embed(two);
    double s = 0.0;
    for (std::size_t c = 0; c < e2[0].size(); ++c) s += (e2[0][c] - e2[1][c]) * (e2[0][c] - e2[1][c]);
    CHECK(std::sqrt(s) == doctest::Approx(1.0).epsilon(1e-10));

    // Equilateral triangle embeds exactly.
    const FiniteMetricSpace tri({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
    const auto e3 = hilbert_embed(tri);
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            double d = 0.0;
            for (std::size_t c = 0; c < e3[0].size(); ++c)
                d += (e3[static_cast<std::size_t>(i)][c] - e3[static_cast<std::size_t>(j)][c]) *
                     (e3[static_cast<std::size_t>(i)][c] - e3[static_cast<std::size_t>(j)][c]);
            CHECK(std::sqrt(d) == doctest::Approx(1.0).epsilon(1e-8));
        }

    // Star graph shortest-path metric: center at 1, leaves pairwise 2.
    const FiniteMetricSpace star({{0, 1, 1, 1}, {1, 0, 2, 2}, {1, 2, 0, 2}, {1, 2, 2, 0}});
    CHECK_THROWS_AS(hilbert_embed(star), NotEmbeddableError);

    // Ultrametrics always embed isometrically.
    RngStream rng(89, 0);
    const FiniteMetricSpace cloud = random_cloud(20, 3, rng);
    const UltrametricResult u = ultrametric_construct(cloud, build_admissible_sequence(cloud).tree);
    const FiniteMetricSpace hat(u.dist_hat);
    const auto emb = hilbert_embed(hat);
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j) {
            double d = 0.0;
            for (std::size_t c = 0; c < emb[0].size(); ++c)
                d += (emb[static_cast<std::size_t>(i)][c] - emb[static_cast<std::size_t>(j)][c]) *
                     (emb[static_cast<std::size_t>(i)][c] - emb[static_cast<std::size_t>(j)][c]);
            CHECK(std::abs(std::sqrt(d) - hat.dist(i, j)) <= 1e-8);
        }
}
