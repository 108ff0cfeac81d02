#include "injnorm/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "injnorm/errors.hpp"

namespace injnorm {

using nlohmann::json;

std::string format_double17(double v) {
    if (!std::isfinite(v)) throw InputError("cannot serialize a non-finite number");
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void JsonWriter::prepare_value() {
    if (!first_.empty()) {
        if (!first_.back() && (out_.empty() || out_.back() != ':')) out_ += ',';
        first_.back() = false;
    }
}

void JsonWriter::begin_object() {
    prepare_value();
    out_ += '{';
    first_.push_back(true);
}

void JsonWriter::end_object() {
    out_ += '}';
    first_.pop_back();
}

void JsonWriter::begin_array() {
    prepare_value();
    out_ += '[';
    first_.push_back(true);
}

void JsonWriter::end_array() {
    out_ += ']';
    first_.pop_back();
}

void JsonWriter::key(std::string_view name) {
    prepare_value();
    out_ += '"';
    out_ += name;
    out_ += "\":";
}

void JsonWriter::value(double v) {
    prepare_value();
    out_ += format_double17(v);
}

void JsonWriter::value(bool v) {
    prepare_value();
    out_ += v ? "true" : "false";
}

void JsonWriter::value(int v) {
    prepare_value();
    out_ += std::to_string(v);
}

void JsonWriter::value(std::int64_t v) {
    prepare_value();
    out_ += std::to_string(v);
}

void JsonWriter::value(std::uint64_t v) {
    prepare_value();
    out_ += std::to_string(v);
}

void JsonWriter::value(std::string_view v) {
    prepare_value();
    out_ += '"';
    for (const char c : v) {
        switch (c) {
            case '"': out_ += "\\\""; break;
            case '\\': out_ += "\\\\"; break;
            case '\n': out_ += "\\n"; break;
            case '\t': out_ += "\\t"; break;
            default: out_ += c;
        }
    }
    out_ += '"';
}

std::string JsonWriter::take() { return std::move(out_); }

namespace {

json parse_or_throw(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw InputError("malformed JSON document");
    return j;
}

const json& require_field(const json& j, const char* field) {
    if (!j.is_object() || !j.contains(field))
        throw InputError(std::string("missing required field \"") + field + "\"");
    return j.at(field);
}

int require_int(const json& j, const char* field) {
    const json& v = require_field(j, field);
    if (!v.is_number_integer()) throw InputError(std::string("field \"") + field + "\" must be an integer");
    return v.get<int>();
}

}  // namespace

CoeffTensor tensor_from_json_text(const std::string& text) {
    const json j = parse_or_throw(text);
    const int r = require_int(j, "r");
    const int d = require_int(j, "d");
    const json& entries = require_field(j, "entries");
    if (!entries.is_array()) throw InputError("field \"entries\" must be an array of numbers");
    std::vector<double> values;
    values.reserve(entries.size());
    for (const auto& e : entries) {
        if (!e.is_number()) throw InputError("field \"entries\" must contain only numbers");
        values.push_back(e.get<double>());
    }
    try {
        return CoeffTensor(r, d, std::move(values));
    } catch (const std::invalid_argument& err) {
        throw InputError(std::string("invalid tensor: ") + err.what());
    }
}

CoeffTensor load_tensor(const std::string& path) { return tensor_from_json_text(read_text_file(path)); }

std::string tensor_to_json(const CoeffTensor& t) {
    JsonWriter w;
    w.begin_object();
    w.kv("r", t.order());
    w.kv("d", t.dim());
    w.key("entries");
    w.begin_array();
    for (const double v : t.entries()) w.value(v);
    w.end_array();
    w.end_object();
    return w.take();
}

ModelSpec model_from_json_text(const std::string& text) {
    const json j = parse_or_throw(text);
    const json& variant = require_field(j, "variant");
    if (!variant.is_string()) throw InputError("field \"variant\" must be a string");
    const ModelKind kind = model_kind_from_name(variant.get<std::string>());
    CoeffTensor tensor = tensor_from_json_text(require_field(j, "tensor").dump());
    switch (kind) {
        case ModelKind::gaussian: return ModelSpec::gaussian(std::move(tensor));
        case ModelKind::bounded: {
            if (!j.contains("K") || !j.at("K").is_number())
                throw InputError("bounded model requires a numeric field \"K\"");
            return ModelSpec::bounded(j.at("K").get<double>(), std::move(tensor));
        }
        case ModelKind::bernoulli: return ModelSpec::bernoulli(std::move(tensor));
    }
    throw InputError("unknown model variant");
}

ModelSpec load_model(const std::string& path) { return model_from_json_text(read_text_file(path)); }

std::string model_to_json(const ModelSpec& spec) {
    JsonWriter w;
    w.begin_object();
    w.kv("variant", model_kind_name(spec.kind()));
    if (spec.kind() == ModelKind::bounded) w.kv("K", spec.bound_K());
    w.key("tensor");
    w.begin_object();
    w.kv("r", spec.order());
    w.kv("d", spec.dim());
    w.key("entries");
    w.begin_array();
    for (const double v : spec.tensor().entries()) w.value(v);
    w.end_array();
    w.end_object();
    w.end_object();
    return w.take();
}

FiniteMetricSpace space_from_json_text(const std::string& text) {
    const json j = parse_or_throw(text);
    const int n = require_int(j, "n");
    const json& dist = require_field(j, "dist");
    if (!dist.is_array() || static_cast<int>(dist.size()) != n)
        throw InputError("field \"dist\" must be an n x n array");
    std::vector<std::vector<double>> matrix;
    matrix.reserve(dist.size());
    for (const auto& row : dist) {
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw InputError("field \"dist\" must be an n x n array");
        std::vector<double> r;
        r.reserve(row.size());
        for (const auto& v : row) {
            if (!v.is_number()) throw InputError("field \"dist\" must contain only numbers");
            r.push_back(v.get<double>());
        }
        matrix.push_back(std::move(r));
    }
    std::vector<std::string> labels;
    if (j.contains("labels")) {
        const json& ls = j.at("labels");
        if (!ls.is_array()) throw InputError("field \"labels\" must be an array of strings");
        for (const auto& l : ls) {
            if (!l.is_string()) throw InputError("field \"labels\" must be an array of strings");
            labels.push_back(l.get<std::string>());
        }
    }
    try {
        return FiniteMetricSpace(std::move(matrix), std::move(labels));
    } catch (const DimensionError& err) {
        throw InputError(std::string("invalid metric space: ") + err.what());
    }
}

FiniteMetricSpace load_space(const std::string& path) { return space_from_json_text(read_text_file(path)); }

std::string space_to_json(const FiniteMetricSpace& space) {
    JsonWriter w;
    w.begin_object();
    w.kv("n", space.size());
    w.key("dist");
    w.begin_array();
    for (int i = 0; i < space.size(); ++i) {
        w.begin_array();
        for (int j2 = 0; j2 < space.size(); ++j2) w.value(space.dist(i, j2));
        w.end_array();
    }
    w.end_array();
    if (!space.labels().empty()) {
        w.key("labels");
        w.begin_array();
        for (const auto& l : space.labels()) w.value(l);
        w.end_array();
    }
    w.end_object();
    return w.take();
}

PartitionTree tree_from_json_text(const std::string& text) {
    const json j = parse_or_throw(text);
    const json& levels = require_field(j, "levels");
    if (!levels.is_array()) throw InputError("field \"levels\" must be an array");
    PartitionTree tree;
    for (const auto& level : levels) {
        if (!level.is_array()) throw InputError("each level must be an array of blocks");
        std::vector<std::vector<int>> blocks;
        for (const auto& block : level) {
            if (!block.is_array()) throw InputError("each block must be an array of indices");
            std::vector<int> ids;
            for (const auto& v : block) {
                if (!v.is_number_integer()) throw InputError("block indices must be integers");
                ids.push_back(v.get<int>());
            }
            blocks.push_back(std::move(ids));
        }
        tree.levels.push_back(std::move(blocks));
    }
    return tree;
}

std::string tree_to_json(const PartitionTree& tree) {
    JsonWriter w;
    w.begin_object();
    w.key("levels");
    w.begin_array();
    for (const auto& level : tree.levels) {
        w.begin_array();
        for (const auto& block : level) {
            w.begin_array();
            for (const int p : block) w.value(p);
            w.end_array();
        }
        w.end_array();
    }
    w.end_array();
    w.end_object();
    return w.take();
}

void write_bound(JsonWriter& w, const BoundBreakdown& bound) {
    w.begin_object();
    w.kv("name", bound.name);
    w.kv("total", bound.total);
    w.kv("slice_term", bound.slice_term);
    w.kv("log_term", bound.log_term);
    w.kv("constant_C", bound.constant_C);
    w.key("extra");
    w.begin_object();
    for (const auto& [k, v] : bound.extra) w.kv(k, v);
    w.end_object();
    w.end_object();
}

std::string bound_to_json(const BoundBreakdown& bound) {
    JsonWriter w;
    write_bound(w, bound);
    return w.take();
}

namespace {

// FNV-1a over the raw entry bytes: identifies the exact input tensor in
// config echoes without repeating up to d^r values.
std::uint64_t tensor_content_hash(const CoeffTensor& t) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const double v : t.entries()) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        for (int b = 0; b < 8; ++b) {
            h ^= (bits >> (8 * b)) & 0xffu;
            h *= 0x100000001b3ull;
        }
    }
    return h;
}

void write_config(JsonWriter& w, const RunConfig& cfg) {
    w.begin_object();
    w.key("model");
    w.begin_object();
    w.kv("variant", model_kind_name(cfg.model.kind()));
    if (cfg.model.kind() == ModelKind::bounded) w.kv("K", cfg.model.bound_K());
    w.kv("r", cfg.model.order());
    w.kv("d", cfg.model.dim());
    w.kv("tensor_hash", tensor_content_hash(cfg.model.tensor()));
    w.end_object();
    w.kv("trials", cfg.trials);
    w.key("estimator");
    w.begin_object();
    w.kv("num_starts", cfg.estimator.num_starts);
    w.kv("max_iterations", cfg.estimator.max_iterations);
    w.kv("convergence_tol", cfg.estimator.convergence_tol);
    w.kv("include_slice_witness_starts", cfg.estimator.include_slice_witness_starts);
    w.end_object();
    w.kv("master_seed", cfg.master_seed);
    w.kv("bound_constant_C", cfg.bound_constant_C);
    w.key("tail_grid");
    w.begin_array();
    for (const double t : cfg.tail_grid) w.value(t);
    w.end_array();
    w.kv("tail_C", cfg.tail_C);
    w.kv("tail_c", cfg.tail_c);
    w.end_object();
}

}  // namespace

std::string report_to_json(const ExperimentReport& report) {
    JsonWriter w;
    w.begin_object();
    w.key("config");
    write_config(w, report.config);

    w.key("trials");
    w.begin_array();
    for (const TrialRecord& rec : report.trials) {
        w.begin_object();
        w.kv("trial_index", rec.trial_index);
        w.kv("norm_estimate", rec.norm_estimate);
        w.kv("witness_value", rec.witness_value);
        if (report.has_symmetrized) w.kv("symmetrized_estimate", rec.symmetrized_estimate);
        w.end_object();
    }
    w.end_array();

    w.key("aggregates");
    w.begin_object();
    w.kv("mean_estimate", report.mean_estimate);
    w.kv("mean_square_estimate", report.mean_square_estimate);
    w.kv("witness_rms", report.witness_rms);
    w.kv("witness_rms_ratio", report.witness_rms_ratio);
    w.kv("witness_side_ok", report.witness_side_ok);
    if (report.has_symmetrized) w.kv("symmetrized_mean", report.symmetrized_mean);
    w.key("tail_grid");
    w.begin_array();
    for (const double t : report.config.tail_grid) w.value(t);
    w.end_array();
    w.key("tail_frequency");
    w.begin_array();
    for (const double t : report.tail_frequency) w.value(t);
    w.end_array();
    w.key("tail_bound");
    w.begin_array();
    for (const double t : report.tail_bound) w.value(t);
    w.end_array();
    w.key("tail_allowance");
    w.begin_array();
    for (const double t : report.tail_allowance) w.value(t);
    w.end_array();
    w.key("upper_bound");
    write_bound(w, report.upper_bound);
    w.kv("lower_bound", report.lower_bound);
    w.end_object();

    w.key("verdicts");
    w.begin_object();
    w.key("upper_holds");
    w.begin_object();
    w.kv("holds", report.upper_holds.holds);
    w.kv("margin", report.upper_holds.margin);
    w.end_object();
    w.key("lower_holds");
    w.begin_object();
    w.kv("holds", report.lower_holds.holds);
    w.kv("margin", report.lower_holds.margin);
    w.end_object();
    w.key("concentration_holds");
    w.begin_object();
    w.kv("holds", report.concentration_holds.holds);
    w.kv("margin", report.concentration_holds.margin);
    w.end_object();
    w.end_object();

    w.end_object();
    return w.take();
}

std::string comparison_to_json(const ComparisonReport& report) {
    JsonWriter w;
    w.begin_object();
    w.kv("trials", report.trials);
    w.kv("mean_sup_z", report.mean_sup_z);
    w.kv("mean_sup_w", report.mean_sup_w);
    w.kv("gap", report.gap);
    w.kv("sd_sup_z", report.sd_sup_z);
    w.kv("sd_sup_w", report.sd_sup_w);
    w.kv("dudley", report.dudley);
    w.kv("c_check", report.c_check);
    w.kv("max_increment_excess", report.max_increment_excess);
    w.key("within_bound");
    w.begin_object();
    w.kv("holds", report.within_bound.holds);
    w.kv("margin", report.within_bound.margin);
    w.end_object();
    w.end_object();
    return w.take();
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::string out = "r,d,trials,mean_estimate,ratio_mean_over_sqrt_d,upper_bound_c1,lower_bound\n";
    for (const SweepRow& row : rows) {
        out += std::to_string(row.order) + ',' + std::to_string(row.dim) + ',' + std::to_string(row.trials);
        out += ',' + format_double17(row.mean_estimate);
        out += ',' + format_double17(row.ratio_sqrt_d);
        out += ',' + format_double17(row.upper_bound_c1);
        out += ',' + format_double17(row.lower_bound);
        out += '\n';
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write file: " + path);
    out << content;
    if (!out) throw InputError("write failed: " + path);
}

}  // namespace injnorm
