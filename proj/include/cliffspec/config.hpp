#pragma once

// Job configuration: a single structured text file (key-value pairs under
// [section] tables, TOML-style) selects an operator preset, a boundary
// spec and a task. Everything a run needs is in the file, so jobs are
// reproducible artifacts; every emitted output embeds the resolved
// configuration with all defaults made explicit.

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "cliffspec/operators_zoo.hpp"
#include "cliffspec/serialize.hpp"

namespace cliffspec {

/// Value of the configuration language: scalars, arrays and tables.
class TomlValue {
public:
    using Array = std::vector<TomlValue>;
    using Table = std::map<std::string, TomlValue>;
    using Storage = std::variant<bool, std::int64_t, double, std::string, Array, Table>;

    TomlValue() : v_(Table{}) {}
    explicit TomlValue(Storage v) : v_(std::move(v)) {}

    bool is_table() const { return std::holds_alternative<Table>(v_); }
    bool is_array() const { return std::holds_alternative<Array>(v_); }
    bool is_string() const { return std::holds_alternative<std::string>(v_); }
    bool is_number() const {
        return std::holds_alternative<std::int64_t>(v_) || std::holds_alternative<double>(v_);
    }

    bool as_bool() const;
    std::int64_t as_int() const;
    double as_double() const;
    const std::string& as_string() const;
    const Array& as_array() const;
    const Table& as_table() const;
    Table& table();

private:
    Storage v_;
};

/// Parses the TOML subset: comments, [table] headers (dotted paths
/// allowed), bare keys, strings, integers, floats, booleans and (nested)
/// arrays. Throws ConfigError with a line number on malformed input.
TomlValue parse_toml(const std::string& text);

struct OperatorConfig {
    std::string preset = "gradient_1d";
    int n = 2;
    int m = 12;
    int nx = 6;
    int ny = 5;
    double h = 0;   // 0 means 1/(nodes-1)
    std::string coefficient = "constant";
    double coeff_c = 1.0;
    double coeff_a = 1.0;
    double coeff_b = 0.5;
    double bump_center = 0.5;
    double bump_width = 0.25;
    std::vector<double> p;    // mult / block_mult first paravector
    std::vector<double> p2;   // block_mult second paravector
    std::uint64_t entries_seed = 1;  // dense_random
};

struct BoundaryConfig {
    std::string kind = "none";  // none | dirichlet | robin
    double alpha = 1.0;
};

struct GridConfig {
    double x_lo = 0.0;
    double x_hi = 2.0;
    double y_hi = 2.0;
    int nx = 41;
    int ny = 41;
    std::vector<double> j;  // imaginary components of J; empty means e_1
    double threshold = 1e-6;
};

struct VerifyConfig {
    std::vector<std::vector<double>> points;
    int vectors = 5;
    double tol_algebraic = 1e-10;
    double tol_boundary = 1e-9;
    double kernel_angle_tol = 1e-7;
};

struct SeriesConfig {
    std::vector<double> center;
    std::vector<std::vector<double>> targets;
    std::vector<double> ds_fractions;
    int terms = 40;
};

struct KernelConfig {
    std::vector<std::vector<double>> points;
    double angle_tol = 1e-7;
};

struct JobConfig {
    std::string task = "verify";
    std::uint64_t seed = 42;
    int threads = 1;
    std::string out_dir = "out";
    std::string prefix = "job";
    OperatorConfig op;
    BoundaryConfig boundary;
    GridConfig grid;
    VerifyConfig verify;
    SeriesConfig series;
    KernelConfig kernel;
};

JobConfig job_config_from_toml(const TomlValue& root);
JobConfig load_job_config(const std::string& path);

/// Full resolved configuration, defaults explicit; embedded in every
/// artifact.
Json resolved_config_json(const JobConfig& cfg);

struct BuiltModel {
    CliffordOperator T;
    BoundarySpec spec;
    std::string description;
};

/// Instantiates the configured operator preset and boundary spec.
BuiltModel build_model(const JobConfig& cfg);

Paravector paravector_from_components(int n, const std::vector<double>& comp);

} // namespace cliffspec
