#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "injnorm/bounds.hpp"
#include "injnorm/experiments.hpp"
#include "injnorm/metric_space.hpp"
#include "injnorm/models.hpp"
#include "injnorm/tensor.hpp"

namespace injnorm {

/// Doubles rendered with 17 significant digits (round-trips exactly).
std::string format_double17(double v);

/// Deterministic incremental JSON writer; keys are emitted in call order
/// and all floating-point values carry 17 significant digits.
class JsonWriter {
public:
    void begin_object();
    void end_object();
    void begin_array();
    void end_array();
    void key(std::string_view name);
    void value(double v);
    void value(bool v);
    void value(int v);
    void value(std::int64_t v);
    void value(std::uint64_t v);
    void value(std::string_view v);
    void value(const char* v) { value(std::string_view(v)); }
    void kv(std::string_view name, double v) { key(name); value(v); }
    void kv(std::string_view name, bool v) { key(name); value(v); }
    void kv(std::string_view name, int v) { key(name); value(v); }
    void kv(std::string_view name, std::int64_t v) { key(name); value(v); }
    void kv(std::string_view name, std::uint64_t v) { key(name); value(v); }
    void kv(std::string_view name, std::string_view v) { key(name); value(v); }
    void kv(std::string_view name, const char* v) { key(name); value(std::string_view(v)); }

    std::string take();

private:
    void prepare_value();

    std::string out_;
    std::vector<bool> first_;  // per open scope
};

// Coefficient tensor file: {"r": int, "d": int, "entries": [...]},
// entries row-major of length d^r. Shared by every module.
CoeffTensor tensor_from_json_text(const std::string& text);
CoeffTensor load_tensor(const std::string& path);
std::string tensor_to_json(const CoeffTensor& t);

// Model file: {"variant": "gaussian"|"bounded"|"bernoulli",
//              "K": real?, "tensor": <tensor JSON>}.
ModelSpec model_from_json_text(const std::string& text);
ModelSpec load_model(const std::string& path);
std::string model_to_json(const ModelSpec& spec);

// Metric space file: {"n": int, "dist": [[...], ...], "labels": [...]?}.
FiniteMetricSpace space_from_json_text(const std::string& text);
FiniteMetricSpace load_space(const std::string& path);
std::string space_to_json(const FiniteMetricSpace& space);

// Partition tree file: {"levels": [[[indices], ...], ...]}.
PartitionTree tree_from_json_text(const std::string& text);
std::string tree_to_json(const PartitionTree& tree);

std::string bound_to_json(const BoundBreakdown& bound);
void write_bound(JsonWriter& w, const BoundBreakdown& bound);

/// Report schema: {"config": ..., "trials": [...], "aggregates": ...,
/// "verdicts": ...}. Worker counts and wall times are omitted so reruns
/// with the same seeds are byte-identical.
std::string report_to_json(const ExperimentReport& report);

std::string comparison_to_json(const ComparisonReport& report);

/// CSV with a header row; one row per sweep cell.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace injnorm
