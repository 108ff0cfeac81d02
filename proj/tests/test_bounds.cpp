#include <doctest.h>

#include <cmath>

#include "injnorm/bounds.hpp"
#include "injnorm/errors.hpp"
#include "test_helpers.hpp"

using namespace injnorm;

TEST_CASE("gaussian tensor upper bound hand evaluations") {
    const CoeffTensor b(2, 2, {3, 4, 0, 5});
    const BoundBreakdown bd = tensor_upper_bound(coeff_stats(b), 2, 2, 1.0);
    CHECK(bd.slice_term == doctest::Approx(2.0 * (std::sqrt(41.0) + 5.0)).epsilon(1e-12));
    CHECK(bd.log_term == doctest::Approx(8.0 * std::log(2.0) * std::log(2.0) * 5.0).epsilon(1e-12));
    CHECK(bd.total == doctest::Approx(bd.slice_term + bd.log_term).epsilon(1e-12));
    CHECK(bd.slice_term == doctest::Approx(22.8062).epsilon(1e-4));
    CHECK(bd.log_term == doctest::Approx(19.2181).epsilon(1e-4));

    const BoundBreakdown ones = tensor_upper_bound(coeff_stats(CoeffTensor::constant(3, 10, 1.0)), 3, 10, 1.0);
    CHECK(ones.slice_term == doctest::Approx(std::sqrt(6.0) * 3.0 * std::sqrt(10.0)).epsilon(1e-12));
    CHECK(ones.log_term == doctest::Approx(27.0 * std::pow(std::log(10.0), 2.0)).epsilon(1e-12));
    CHECK(ones.slice_term == doctest::Approx(23.2379).epsilon(1e-4));

    CHECK(tensor_upper_bound(coeff_stats(CoeffTensor::zeros(2, 3)), 2, 3, 1.0).total == 0.0);
    // One-dimensional axes: the log term vanishes.
    CHECK(tensor_upper_bound(coeff_stats(CoeffTensor::constant(2, 1, 2.0)), 2, 1, 1.0).log_term == 0.0);
    CHECK_THROWS_AS(tensor_upper_bound(coeff_stats(b), 2, 2, 0.0), InputError);
}

TEST_CASE("slice lower bound") {
    CHECK(slice_lower_bound(coeff_stats(CoeffTensor(2, 2, {3, 4, 0, 5}))) ==
          doctest::Approx(std::sqrt(41.0)).epsilon(1e-12));
    CHECK(slice_lower_bound(coeff_stats(CoeffTensor::constant(2, 9, 1.0))) == doctest::Approx(3.0));
    CHECK(slice_lower_bound(coeff_stats(CoeffTensor::zeros(3, 2))) == 0.0);
}

TEST_CASE("matrix epsilon bound hand evaluations") {
    std::vector<double> eye(9, 0.0);
    eye[0] = eye[4] = eye[8] = 1.0;
    const CoeffTensor i3(2, 3, eye);
    const BoundBreakdown bd = bvh_matrix_bound(coeff_stats(i3), 3, 0.5);
    const double expected = 1.5 * (2.0 + 5.0 * std::sqrt(std::log(3.0)) / std::sqrt(std::log(1.5)));
    CHECK(bd.total == doctest::Approx(expected).epsilon(1e-12));
    CHECK(bd.total == doctest::Approx(15.35).epsilon(1e-3));

    const CoeffTensor b(2, 2, {3, 4, 0, 5});
    const BoundBreakdown bd2 = bvh_matrix_bound(coeff_stats(b), 2, 0.5);
    const double expected2 =
        1.5 * (5.0 + std::sqrt(41.0) + 5.0 * std::sqrt(std::log(2.0)) / std::sqrt(std::log(1.5)) * 5.0);
    CHECK(bd2.total == doctest::Approx(expected2).epsilon(1e-12));
    CHECK(bd2.total == doctest::Approx(66.14).epsilon(1e-3));

    CHECK(bvh_matrix_bound(coeff_stats(CoeffTensor::zeros(2, 2)), 2, 0.5).total == 0.0);
    CHECK_THROWS_AS(bvh_matrix_bound(coeff_stats(CoeffTensor::zeros(3, 2)), 2, 0.5), DimensionError);
    CHECK_THROWS_AS(bvh_matrix_bound(coeff_stats(b), 2, 0.0), InputError);
    CHECK_THROWS_AS(bvh_matrix_bound(coeff_stats(b), 2, 0.6), InputError);
}

TEST_CASE("fourth-moment matrix terms") {
    std::vector<double> eye(9, 0.0);
    eye[0] = eye[4] = eye[8] = 1.0;
    const LatalaTerms t1 = latala_matrix_terms(CoeffTensor(2, 3, eye));
    CHECK(t1.row == doctest::Approx(1.0));
    CHECK(t1.col == doctest::Approx(1.0));
    CHECK(t1.fourth == doctest::Approx(std::pow(3.0, 0.25)).epsilon(1e-12));

    const LatalaTerms t2 = latala_matrix_terms(CoeffTensor(2, 2, {3, 4, 0, 5}));
    CHECK(t2.row == doctest::Approx(5.0));
    CHECK(t2.col == doctest::Approx(std::sqrt(41.0)));
    CHECK(t2.fourth == doctest::Approx(std::pow(962.0, 0.25)).epsilon(1e-12));

    const LatalaTerms z = latala_matrix_terms(CoeffTensor::zeros(2, 4));
    CHECK(z.row == 0.0);
    CHECK(z.col == 0.0);
    CHECK(z.fourth == 0.0);
    CHECK_THROWS_AS(latala_matrix_terms(CoeffTensor::zeros(3, 2)), DimensionError);
}

TEST_CASE("variance-slice bound for bounded and bernoulli models") {
    // p = 1/2, r = 2, d = 4: each variance slice sums to 1.
    const CoeffTensor stddev_half = CoeffTensor::constant(2, 4, 0.5);
    const BoundBreakdown bd = bounded_model_upper_bound(coeff_stats(stddev_half), 2, 4, 1.0, 1.0);
    CHECK(bd.slice_term == doctest::Approx(4.0 * std::sqrt(2.0) * 2.0).epsilon(1e-12));
    CHECK(bd.log_term == doctest::Approx(8.0 * std::pow(std::log(4.0), 2.0)).epsilon(1e-12));
    CHECK(bd.slice_term == doctest::Approx(11.3137).epsilon(1e-4));

    // Degenerate probabilities have zero variance slices.
    CHECK(bounded_model_upper_bound(coeff_stats(CoeffTensor::zeros(2, 4)), 2, 4, 1.0, 1.0).slice_term == 0.0);

    // K = 2, unit shape, d = 9: per-entry E X^2 = 4.
    const CoeffTensor stddev2 = CoeffTensor::constant(2, 9, 2.0);
    const BoundBreakdown bd2 = bounded_model_upper_bound(coeff_stats(stddev2), 2, 9, 2.0, 1.0);
    CHECK(bd2.slice_term == doctest::Approx(4.0 * std::sqrt(2.0) * 12.0).epsilon(1e-12));
    CHECK(bd2.slice_term == doctest::Approx(67.88).epsilon(1e-3));

    CHECK_THROWS_AS(bounded_model_upper_bound(coeff_stats(stddev2), 2, 9, 0.0, 1.0), InputError);
}

TEST_CASE("tail bounds") {
    CHECK(gaussian_tail_bound(1.0, 0.0) == 1.0);
    CHECK(gaussian_tail_bound(1.0, 2.0) == doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-12));
    CHECK(gaussian_tail_bound(1.0, 2.0) == doctest::Approx(0.27067).epsilon(1e-4));
    CHECK(gaussian_tail_bound(1.0, 20.0) < 1e-80);
    CHECK_THROWS_AS(gaussian_tail_bound(0.0, 1.0), InputError);
    CHECK_THROWS_AS(gaussian_tail_bound(1.0, -1.0), InputError);

    CHECK(subgaussian_tail_bound(1.0, 2.0) == doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-12));
    CHECK(subgaussian_tail_bound(2.0, 1.0, 3.0, 0.25) == 1.0);  // capped
    CHECK(subgaussian_tail_bound(1.0, 3.0, 3.0, 0.5) == doctest::Approx(3.0 * std::exp(-4.5)).epsilon(1e-12));
}

TEST_CASE("scaling covariance and monotonicity") {
    RngStream rng(23, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const int r = 1 + static_cast<int>(rng.next_u64() % 3);
        const int d = 2 + static_cast<int>(rng.next_u64() % 4);
        const CoeffTensor b = test_helpers::random_tensor(r, d, rng);
        const double lambda = 2.5;
        std::vector<double> scaled(b.entries().begin(), b.entries().end());
        for (auto& v : scaled) v *= lambda;
        const CoeffTensor lb(r, d, scaled);

        const BoundBreakdown u1 = tensor_upper_bound(coeff_stats(b), r, d, 1.0);
        const BoundBreakdown u2 = tensor_upper_bound(coeff_stats(lb), r, d, 1.0);
        if (u1.total > 0.0) CHECK(u2.total == doctest::Approx(lambda * u1.total).epsilon(1e-12));
        CHECK(slice_lower_bound(coeff_stats(lb)) ==
              doctest::Approx(lambda * slice_lower_bound(coeff_stats(b))).epsilon(1e-12));
        if (r == 2) {
            const LatalaTerms t1 = latala_matrix_terms(b);
            const LatalaTerms t2 = latala_matrix_terms(lb);
            CHECK(t2.row == doctest::Approx(lambda * t1.row).epsilon(1e-12));
            CHECK(t2.col == doctest::Approx(lambda * t1.col).epsilon(1e-12));
            CHECK(t2.fourth == doctest::Approx(lambda * t1.fourth).epsilon(1e-12));
        }

        // Strictly increasing in C when b_max > 0 and d >= 2.
        const BoundBreakdown uc = tensor_upper_bound(coeff_stats(b), r, d, 2.0);
        if (coeff_stats(b).b_max > 0.0) CHECK(uc.total > u1.total);

        // max_k sigma_k <= sqrt(2r) * sum_k sigma_k.
        const SliceStats s = coeff_stats(b);
        CHECK(slice_lower_bound(s) <= std::sqrt(2.0 * r) * s.sigma_sum() + 1e-12);
    }
}

TEST_CASE("matrix bracket terms coincide across the two matrix bounds") {
    RngStream rng(29, 0);
    for (int trial = 0; trial < 10; ++trial) {
        const CoeffTensor b = test_helpers::random_tensor(2, 4, rng);
        const BoundBreakdown bvh = bvh_matrix_bound(coeff_stats(b), 4, 0.5);
        const LatalaTerms lat = latala_matrix_terms(b);
        CHECK(bvh.extra.at("row_term") == lat.row);
        CHECK(bvh.extra.at("col_term") == lat.col);
    }
}
