#include <doctest.h>

#include <cmath>
#include <json.hpp>

#include "injnorm/errors.hpp"
#include "injnorm/experiments.hpp"
#include "injnorm/serialize.hpp"

using namespace injnorm;

TEST_CASE("double formatting round-trips exactly") {
    for (const double v : {1.0 / 3.0, 0.1, std::sqrt(2.0), 2.5e-308, 12345.6789, -7.0710678118654755}) {
        const std::string s = format_double17(v);
        CHECK(std::stod(s) == v);
    }
    CHECK_THROWS_AS(format_double17(std::nan("")), InputError);
}

TEST_CASE("tensor json round trip and errors") {
    const CoeffTensor t(2, 2, {3.0, 4.0, 0.0, 5.0});
    const std::string text = tensor_to_json(t);
    const CoeffTensor back = tensor_from_json_text(text);
    CHECK(back.order() == 2);
    CHECK(back.dim() == 2);
    CHECK(std::equal(back.entries().begin(), back.entries().end(), t.entries().begin()));

    CHECK_THROWS_WITH_AS(tensor_from_json_text(R"({"d":2,"entries":[]})"), doctest::Contains("\"r\""),
                         InputError);
    CHECK_THROWS_WITH_AS(tensor_from_json_text(R"({"r":2,"entries":[]})"), doctest::Contains("\"d\""),
                         InputError);
    CHECK_THROWS_WITH_AS(tensor_from_json_text(R"({"r":2,"d":2})"), doctest::Contains("\"entries\""),
                         InputError);
    CHECK_THROWS_WITH_AS(tensor_from_json_text(R"({"r":2,"d":2,"entries":[1,2,3]})"),
                         doctest::Contains("entries"), InputError);
    CHECK_THROWS_AS(tensor_from_json_text("not json"), InputError);
}

TEST_CASE("model json round trip") {
    const ModelSpec bounded = ModelSpec::bounded(2.0, CoeffTensor::constant(2, 2, 0.5));
    const ModelSpec back = model_from_json_text(model_to_json(bounded));
    CHECK(back.kind() == ModelKind::bounded);
    CHECK(back.bound_K() == 2.0);
    CHECK(back.tensor().entries()[0] == 0.5);

    CHECK_THROWS_WITH_AS(model_from_json_text(R"({"tensor":{"r":1,"d":1,"entries":[1]}})"),
                         doctest::Contains("\"variant\""), InputError);
    CHECK_THROWS_WITH_AS(
        model_from_json_text(R"({"variant":"bounded","tensor":{"r":1,"d":1,"entries":[1]}})"),
        doctest::Contains("\"K\""), InputError);
    CHECK_THROWS_AS(model_from_json_text(R"({"variant":"poisson","tensor":{"r":1,"d":1,"entries":[1]}})"),
                    InputError);
}

TEST_CASE("metric space and partition tree json") {
    const FiniteMetricSpace space({{0.0, 1.0}, {1.0, 0.0}}, {"a", "b"});
    const FiniteMetricSpace back = space_from_json_text(space_to_json(space));
    CHECK(back.size() == 2);
    CHECK(back.dist(0, 1) == 1.0);
    CHECK(back.labels()[1] == "b");

    CHECK_THROWS_WITH_AS(space_from_json_text(R"({"dist":[[0]]})"), doctest::Contains("\"n\""), InputError);
    CHECK_THROWS_WITH_AS(space_from_json_text(R"({"n":2,"dist":[[0,1]]})"), doctest::Contains("dist"),
                         InputError);

    PartitionTree tree;
    tree.levels = {{{0, 1}}, {{0}, {1}}};
    const PartitionTree tback = tree_from_json_text(tree_to_json(tree));
    REQUIRE(tback.depth() == 2);
    CHECK(tback.levels[1][1][0] == 1);
}

TEST_CASE("report serialization carries every section with 17-digit floats") {
    RunConfig cfg(ModelSpec::gaussian(CoeffTensor::constant(2, 3, 1.0)));
    cfg.trials = 4;
    cfg.master_seed = 9;
    const ExperimentReport rep = run_monte_carlo(cfg);
    const std::string text = report_to_json(rep);

    const auto j = nlohmann::json::parse(text);
    CHECK(j.contains("config"));
    CHECK(j.contains("trials"));
    CHECK(j.contains("aggregates"));
    CHECK(j.contains("verdicts"));
    CHECK(j.at("trials").size() == 4);
    CHECK_FALSE(j.at("config").contains("workers"));
    for (const auto& t : j.at("trials")) CHECK_FALSE(t.contains("wall_time"));
    CHECK(j.at("aggregates").at("mean_estimate").get<double>() == rep.mean_estimate);
    CHECK(j.at("trials")[2].at("norm_estimate").get<double>() == rep.trials[2].norm_estimate);

    const std::string again = report_to_json(run_monte_carlo(cfg));
    CHECK(text == again);
}

TEST_CASE("bound breakdown serialization") {
    const CoeffTensor b(2, 2, {3, 4, 0, 5});
    const std::string text = bound_to_json(tensor_upper_bound(coeff_stats(b), 2, 2, 1.0));
    const auto j = nlohmann::json::parse(text);
    CHECK(j.at("total").get<double>() ==
          doctest::Approx(j.at("slice_term").get<double>() + j.at("log_term").get<double>()).epsilon(1e-12));
    CHECK(j.at("constant_C").get<double>() == 1.0);
    CHECK(j.at("extra").contains("b_max"));
}
