// Python bindings for the injective-norm toolkit core: tensors, random
// models, the certificate estimator, closed-form bounds and the chaining
// laboratory. Mirrors the C++ surface with plain lists for vectors.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "injnorm/bounds.hpp"
#include "injnorm/chaining.hpp"
#include "injnorm/errors.hpp"
#include "injnorm/estimator.hpp"
#include "injnorm/experiments.hpp"
#include "injnorm/metric_space.hpp"
#include "injnorm/models.hpp"
#include "injnorm/serialize.hpp"
#include "injnorm/tensor.hpp"

namespace py = pybind11;
using namespace injnorm;

namespace {

UnitVectorTuple tuple_from_lists(const std::vector<std::vector<double>>& vectors) {
    return UnitVectorTuple(vectors);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "injective norms of random tensors: bounds, certificates, chaining experiments";

    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<GuardError>(m, "GuardError", PyExc_ValueError);
    py::register_exception<NotEmbeddableError>(m, "NotEmbeddableError", PyExc_ValueError);

    py::class_<CoeffTensor>(m, "CoeffTensor")
        .def(py::init<int, int, std::vector<double>>(), py::arg("r"), py::arg("d"), py::arg("entries"))
        .def_static("zeros", &CoeffTensor::zeros, py::arg("r"), py::arg("d"))
        .def_static("constant", &CoeffTensor::constant, py::arg("r"), py::arg("d"), py::arg("value"))
        .def_property_readonly("r", &CoeffTensor::order)
        .def_property_readonly("d", &CoeffTensor::dim)
        .def("entries", [](const CoeffTensor& t) {
            return std::vector<double>(t.entries().begin(), t.entries().end());
        })
        .def("at", [](const CoeffTensor& t, const std::vector<int>& idx) { return t.at(idx); })
        .def("frobenius_norm", &CoeffTensor::frobenius_norm)
        .def("max_abs_entry", &CoeffTensor::max_abs_entry);

    py::class_<SliceStats>(m, "SliceStats")
        .def_readonly("sigma", &SliceStats::sigma)
        .def_readonly("b_max", &SliceStats::b_max)
        .def_readonly("frobenius", &SliceStats::frobenius);

    py::class_<SampleSeed>(m, "SampleSeed")
        .def(py::init([](std::uint64_t master, std::uint64_t trial) {
                 return SampleSeed{master, trial};
             }),
             py::arg("master_seed") = 0, py::arg("trial_index") = 0)
        .def_readwrite("master_seed", &SampleSeed::master_seed)
        .def_readwrite("trial_index", &SampleSeed::trial_index);

    py::class_<TensorSample>(m, "TensorSample")
        .def_readonly("values", &TensorSample::values)
        .def_readonly("provenance", &TensorSample::provenance);

    py::class_<ModelSpec>(m, "ModelSpec")
        .def_static("gaussian", &ModelSpec::gaussian, py::arg("b"))
        .def_static("bounded", &ModelSpec::bounded, py::arg("K"), py::arg("shape"))
        .def_static("bernoulli", &ModelSpec::bernoulli, py::arg("p"))
        .def_property_readonly("variant", [](const ModelSpec& s) { return model_kind_name(s.kind()); })
        .def("stddev_tensor", &ModelSpec::stddev_tensor);

    m.def("rank1_inner", [](const CoeffTensor& t, const std::vector<std::vector<double>>& xs) {
        return rank1_inner(t, tuple_from_lists(xs));
    });
    m.def("rank1_stddev", [](const CoeffTensor& b, const std::vector<std::vector<double>>& xs) {
        return rank1_stddev(b, tuple_from_lists(xs));
    });
    m.def("diag_slice", [](const CoeffTensor& b, int axis, const std::vector<std::vector<double>>& off) {
        return diag_slice_matrix(b, axis, off).diag;
    });
    m.def("coeff_stats", &coeff_stats);

    m.def("sample_gaussian", &sample_gaussian, py::arg("b"), py::arg("seed"));
    m.def("sample_bernoulli_centered", &sample_bernoulli_centered, py::arg("p"), py::arg("seed"));
    m.def("sample_bounded", &sample_bounded, py::arg("K"), py::arg("shape"), py::arg("seed"));
    m.def("symmetrize_sample", &symmetrize_sample, py::arg("sample"), py::arg("seed"));

    py::class_<EstimatorConfig>(m, "EstimatorConfig")
        .def(py::init<>())
        .def_readwrite("num_starts", &EstimatorConfig::num_starts)
        .def_readwrite("max_iterations", &EstimatorConfig::max_iterations)
        .def_readwrite("convergence_tol", &EstimatorConfig::convergence_tol)
        .def_readwrite("include_slice_witness_starts", &EstimatorConfig::include_slice_witness_starts);

    py::class_<EstimateResult>(m, "EstimateResult")
        .def_readonly("value", &EstimateResult::value)
        .def_readonly("starts_used", &EstimateResult::starts_used)
        .def_readonly("iterations", &EstimateResult::iterations)
        .def_readonly("converged", &EstimateResult::converged)
        .def_property_readonly("witness",
                               [](const EstimateResult& r) { return r.witness.vectors(); });

    m.def(
        "alt_max_estimate",
        [](const CoeffTensor& t, const EstimatorConfig& cfg, const SampleSeed& seed) {
            return alt_max_estimate(t, cfg, seed);
        },
        py::arg("tensor"), py::arg("config") = EstimatorConfig{}, py::arg("seed") = SampleSeed{});
    m.def("grid_oracle", &grid_oracle, py::arg("tensor"), py::arg("resolution"));

    py::class_<SliceWitness>(m, "SliceWitness")
        .def_readonly("value", &SliceWitness::value)
        .def_readonly("axis", &SliceWitness::axis)
        .def_readonly("off_indices", &SliceWitness::off_indices);
    m.def("slice_witness", [](const CoeffTensor& t) { return slice_witness(t); });

    py::class_<BoundBreakdown>(m, "BoundBreakdown")
        .def_readonly("name", &BoundBreakdown::name)
        .def_readonly("total", &BoundBreakdown::total)
        .def_readonly("slice_term", &BoundBreakdown::slice_term)
        .def_readonly("log_term", &BoundBreakdown::log_term)
        .def_readonly("constant_C", &BoundBreakdown::constant_C)
        .def_readonly("extra", &BoundBreakdown::extra);

    m.def("tensor_upper_bound", &tensor_upper_bound, py::arg("stats"), py::arg("r"), py::arg("d"),
          py::arg("C") = 1.0);
    m.def("slice_lower_bound", &slice_lower_bound);
    m.def("bvh_matrix_bound", &bvh_matrix_bound, py::arg("stats"), py::arg("d"), py::arg("epsilon"));
    m.def("latala_matrix_terms", [](const CoeffTensor& b) {
        const LatalaTerms t = latala_matrix_terms(b);
        return py::make_tuple(t.row, t.col, t.fourth);
    });
    m.def("bounded_model_upper_bound", &bounded_model_upper_bound, py::arg("stddev_stats"), py::arg("r"),
          py::arg("d"), py::arg("K"), py::arg("C") = 1.0);
    m.def("gaussian_tail_bound", &gaussian_tail_bound, py::arg("scale"), py::arg("t"));
    m.def("subgaussian_tail_bound", &subgaussian_tail_bound, py::arg("K"), py::arg("t"),
          py::arg("tail_C") = 2.0, py::arg("tail_c") = 0.5);

    m.def("fiber_profile", [](const CoeffTensor& b, int axis, const std::vector<double>& x) {
        return fiber_profile(b, axis, x).values;
    });
    m.def("profile_distance", [](const CoeffTensor& b, int axis, const std::vector<double>& x,
                                 const std::vector<double>& y) { return profile_distance(b, axis, x, y); });
    m.def("stddev_lipschitz_residual",
          [](const CoeffTensor& b, const std::vector<std::vector<double>>& xs,
             const std::vector<std::vector<double>>& ys) {
              return stddev_lipschitz_residual(b, tuple_from_lists(xs), tuple_from_lists(ys));
          });
    m.def("sqrt_gap_holds", &sqrt_gap_holds, py::arg("alpha"), py::arg("beta"), py::arg("t0"));
    m.def("maurey_sample_count", &maurey_sample_count, py::arg("d0"), py::arg("epsilon"));
    m.def(
        "maurey_sparsify",
        [](const std::vector<std::vector<double>>& S, const std::vector<double>& weights,
           const std::vector<double>& z, double epsilon, const SampleSeed& seed) {
            const MaureyResult r = maurey_sparsify(S, weights, z, epsilon, seed);
            return py::make_tuple(r.chosen, r.approx, r.attempts, r.sample_count);
        },
        py::arg("S"), py::arg("weights"), py::arg("z"), py::arg("epsilon"), py::arg("seed") = SampleSeed{});

    py::class_<FiniteMetricSpace>(m, "FiniteMetricSpace")
        .def(py::init<std::vector<std::vector<double>>, std::vector<std::string>>(), py::arg("dist"),
             py::arg("labels") = std::vector<std::string>{})
        .def_property_readonly("n", &FiniteMetricSpace::size)
        .def("dist", &FiniteMetricSpace::dist)
        .def("diameter", &FiniteMetricSpace::diameter)
        .def("validate_metric", &FiniteMetricSpace::validate_metric, py::arg("tol") = 1e-9);

    m.def("profile_sample_space", &profile_sample_space, py::arg("b"), py::arg("axis"),
          py::arg("n_points"), py::arg("seed"));
    m.def("greedy_cover", [](const FiniteMetricSpace& space, double epsilon) {
        return greedy_cover(space, epsilon).centers;
    });
    m.def("dyadic_eps_grid", &dyadic_eps_grid, py::arg("diameter"), py::arg("octaves") = 14);
    m.def("dudley_estimate", [](const FiniteMetricSpace& space, const std::vector<double>& grid) {
        return dudley_estimate(space, grid);
    });

    py::class_<PartitionTree>(m, "PartitionTree").def_readonly("levels", &PartitionTree::levels);
    py::class_<AdmissibleResult>(m, "AdmissibleResult")
        .def_readonly("tree", &AdmissibleResult::tree)
        .def_readonly("functional", &AdmissibleResult::functional);
    m.def("build_admissible_sequence", &build_admissible_sequence);
    m.def("chaining_functional", &chaining_functional);
    py::class_<UltrametricResult>(m, "UltrametricResult")
        .def_readonly("dist_hat", &UltrametricResult::dist_hat);
    m.def("ultrametric_construct", &ultrametric_construct);
    m.def("hilbert_embed", &hilbert_embed);

    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init<ModelSpec>(), py::arg("model"))
        .def_readwrite("trials", &RunConfig::trials)
        .def_readwrite("estimator", &RunConfig::estimator)
        .def_readwrite("master_seed", &RunConfig::master_seed)
        .def_readwrite("bound_constant_C", &RunConfig::bound_constant_C)
        .def_readwrite("tail_grid", &RunConfig::tail_grid)
        .def_readwrite("tail_C", &RunConfig::tail_C)
        .def_readwrite("tail_c", &RunConfig::tail_c)
        .def_readwrite("workers", &RunConfig::workers);

    py::class_<Verdict>(m, "Verdict")
        .def_readonly("holds", &Verdict::holds)
        .def_readonly("margin", &Verdict::margin);

    py::class_<TrialRecord>(m, "TrialRecord")
        .def_readonly("trial_index", &TrialRecord::trial_index)
        .def_readonly("norm_estimate", &TrialRecord::norm_estimate)
        .def_readonly("witness_value", &TrialRecord::witness_value);

    py::class_<ExperimentReport>(m, "ExperimentReport")
        .def_readonly("trials", &ExperimentReport::trials)
        .def_readonly("mean_estimate", &ExperimentReport::mean_estimate)
        .def_readonly("mean_square_estimate", &ExperimentReport::mean_square_estimate)
        .def_readonly("witness_rms", &ExperimentReport::witness_rms)
        .def_readonly("tail_frequency", &ExperimentReport::tail_frequency)
        .def_readonly("tail_bound", &ExperimentReport::tail_bound)
        .def_readonly("upper_bound", &ExperimentReport::upper_bound)
        .def_readonly("lower_bound", &ExperimentReport::lower_bound)
        .def_readonly("upper_holds", &ExperimentReport::upper_holds)
        .def_readonly("lower_holds", &ExperimentReport::lower_holds)
        .def_readonly("concentration_holds", &ExperimentReport::concentration_holds)
        .def("to_json", &report_to_json);

    m.def("run_monte_carlo", &run_monte_carlo, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
}
