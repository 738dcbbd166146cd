#pragma once

// Experiment configuration: a TOML-style file (tables, arrays of tables,
// key = value with strings/numbers/bools/single-line arrays, # comments)
// describing a sweep grid. Grid points enumerate deterministically in
// declaration order: codes x distances x p values x decoders.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qbp/harness.hpp"

namespace qbp {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TomlValue {
    enum class Kind { str, integer, real, boolean, array };
    Kind kind = Kind::str;
    std::string s;
    long long i = 0;
    double f = 0.0;
    bool b = false;
    std::vector<TomlValue> arr;
    int line = 0;

    std::string as_string() const;
    long long as_int() const;
    double as_double() const;
    bool as_bool() const;
    const std::vector<TomlValue>& as_array() const;
};

using TomlTable = std::map<std::string, TomlValue>;

struct TomlDoc {
    std::string source;  // file name used in error messages
    TomlTable root;
    std::map<std::string, TomlTable> tables;
    std::map<std::string, std::vector<TomlTable>> table_arrays;
};

TomlDoc parse_toml_string(const std::string& text, const std::string& source);
TomlDoc parse_toml_file(const std::string& path);

struct DecoderSpec {
    std::string name = "bp";
    Policy policy = Policy::none;
    Placement placement = Placement::single_round;
    std::size_t skip_iters = 4;
    std::size_t max_iter = 0;  // 0: use default_max_iter(d)
    bool use_osd = true;
    std::optional<FixedPointFormat> quant;
};

struct CodeSpec {
    std::string family;  // surface | toric | bb | file
    std::vector<std::size_t> distances;
    // bb
    std::size_t l = 0, m = 0;
    std::vector<std::pair<std::size_t, std::size_t>> a_terms, b_terms;
    std::string name;
    // file
    std::string path;
    CodeFileFormat format = CodeFileFormat::alist;
};

struct ExperimentSpec {
    char sector = 'X';
    std::uint64_t seed = 1;
    StopRule stop;
    std::size_t batch_size = 4096;
    std::string out_dir = "out";
    int workers = 1;

    std::vector<double> ps;
    std::optional<double> p_meas;  // unset: track p
    std::string rounds = "1";      // integer or "d"
    DataErrorMode mode = DataErrorMode::static_data;

    std::vector<CodeSpec> codes;
    std::vector<DecoderSpec> decoders;
};

ExperimentSpec parse_experiment(const TomlDoc& doc);

// "fp" or "intX.Y".
std::optional<FixedPointFormat> quant_from_string(const std::string& s);
std::string quant_to_string(const std::optional<FixedPointFormat>& q);

struct GridPoint {
    std::shared_ptr<const CssCode> code;
    std::string family;
    double p = 0.0;
    double p_meas = 0.0;
    std::size_t rounds = 1;
    DataErrorMode mode = DataErrorMode::static_data;
    DecoderSpec decoder;

    RunConfig to_run_config(char sector, std::uint64_t seed, const StopRule& stop,
                            std::size_t batch_size) const;
    std::string label() const;  // decoder/code label used in file names
};

// Builds each referenced code once; preset bb/file specs resolve relative to
// base_dir when their path is relative.
std::vector<GridPoint> enumerate_grid(const ExperimentSpec& spec, const std::string& base_dir);

// Shared "surface:D" / "toric:D" / "bb:<preset.toml>" / "file:<stem>[:format]"
// code descriptors used by the validate and code-info subcommands.
std::shared_ptr<const CssCode> code_from_descriptor(const std::string& descriptor,
                                                    std::size_t declared_d,
                                                    std::optional<CodeFamily>* family_out);

// Reads a bb preset file: [code] l, m, a, b, d, name.
CodeSpec parse_bb_preset(const std::string& path);

} // namespace qbp
