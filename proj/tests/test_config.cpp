#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "qbp/config.hpp"
#include "qbp/report_io.hpp"

using namespace qbp;

TEST_SUITE_BEGIN("config");

namespace {

const char* sample_config = R"(# sample sweep
[run]
sector = "X"
seed = 42
min_failures = 10
max_trials = 1000
batch_size = 64

[sweep]
p = [0.01, 0.03]
rounds = 1
mode = "static"

[[codes]]
family = "surface"
d = [3, 5]

[[decoders]]
name = "bp"
policy = "none"
use_osd = false

[[decoders]]
name = "lottery"
policy = "proposed"
skip_iters = 4
quant = "int5.3"
)";

} // namespace

TEST_CASE("parses a full sweep and enumerates the grid in declaration order") {
    ExperimentSpec spec = parse_experiment(parse_toml_string(sample_config, "sample"));
    CHECK(spec.seed == 42);
    CHECK(spec.stop.min_failures == 10);
    CHECK(spec.ps.size() == 2);
    CHECK(spec.codes.size() == 1);
    CHECK(spec.decoders.size() == 2);
    REQUIRE(spec.decoders[1].quant.has_value());
    CHECK(spec.decoders[1].quant->int_bits == 5);

    auto grid = enumerate_grid(spec, "");
    REQUIRE(grid.size() == 2 * 2 * 2);  // d x p x decoder
    CHECK(grid[0].code->d == 3);
    CHECK(grid[0].p == 0.01);
    CHECK(grid[0].decoder.name == "bp");
    CHECK(grid[1].decoder.name == "lottery");
    CHECK(grid[2].p == 0.03);
    CHECK(grid[4].code->d == 5);

    RunConfig cfg = grid[0].to_run_config(spec.sector, spec.seed, spec.stop, spec.batch_size);
    CHECK(cfg.bp.max_iter == default_max_iter(3));
    CHECK(cfg.noise.p_meas == 0.01);  // tracks p when unset
}

TEST_CASE("empty p list yields an empty grid") {
    std::string text = sample_config;
    auto pos = text.find("p = [0.01, 0.03]");
    text.replace(pos, 16, "p = []");
    auto grid = enumerate_grid(parse_experiment(parse_toml_string(text, "s")), "");
    CHECK(grid.empty());
}

TEST_CASE("config errors carry the line number") {
    CHECK_THROWS_WITH_AS(parse_toml_string("[run]\nkey value\n", "cfg"),
                         doctest::Contains("cfg:2"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_toml_string("x = [1, 2\n", "cfg"), doctest::Contains("cfg:1"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_toml_string("x = 1\nx = 2\n", "cfg"), doctest::Contains("cfg:2"),
                         ConfigError);
}

TEST_CASE("quant strings") {
    CHECK_FALSE(quant_from_string("fp").has_value());
    auto q = quant_from_string("int6.2");
    REQUIRE(q.has_value());
    CHECK(q->int_bits == 6);
    CHECK(q->frac_bits == 2);
    CHECK(quant_to_string(q) == "int6.2");
    CHECK_THROWS_AS(quant_from_string("int8"), ConfigError);
    CHECK_THROWS_AS(quant_from_string("float"), ConfigError);
}

TEST_CASE("rounds may track the code distance") {
    std::string text = sample_config;
    auto pos = text.find("rounds = 1");
    text.replace(pos, 10, "rounds = \"d\"");
    auto grid = enumerate_grid(parse_experiment(parse_toml_string(text, "s")), "");
    CHECK(grid[0].rounds == 3);
    CHECK(grid[4].rounds == 5);
}

TEST_CASE("csv schema is stable") {
    CHECK(csv_header() ==
          "family,d,p,policy,placement,quant,trials,failures,ler,ler_ci_low,ler_ci_high,"
          "invoke_rate,mean_iters,max_iter_frac,seed");
}

TEST_CASE("report json embeds a config echo that round-trips") {
    ExperimentSpec spec = parse_experiment(parse_toml_string(sample_config, "sample"));
    auto grid = enumerate_grid(spec, "");
    const GridPoint& point = grid[1];
    RunConfig cfg = point.to_run_config(spec.sector, spec.seed, spec.stop, spec.batch_size);
    cfg.stop.max_trials = 64;
    cfg.stop.min_failures = 1;
    MetricsReport rep = run_trials(cfg);
    nlohmann::json j = report_to_json(rep, cfg, point);

    ReportLabels labels = labels_from_json(j);
    CHECK(labels.family == point.family);
    CHECK(labels.d == point.code->d);
    CHECK(labels.p == point.p);
    CHECK(labels.policy == to_string(point.decoder.policy));
    CHECK(labels.placement == to_string(point.decoder.placement));
    CHECK(labels.quant == quant_to_string(point.decoder.quant));
    CHECK(labels.seed == spec.seed);
    CHECK(j.at("config_echo").get<std::string>() == cfg.config_echo());
}

TEST_CASE("bb preset file") {
    auto dir = std::filesystem::temp_directory_path() / "qbp_config_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "bb.toml");
        out << "[code]\nl = 6\nm = 6\na = [[3,0],[0,1],[0,2]]\nb = [[0,3],[1,0],[2,0]]\n"
               "d = 6\nname = \"bb_72_12_6\"\n";
    }
    CodeSpec c = parse_bb_preset((dir / "bb.toml").string());
    CHECK(c.l == 6);
    CHECK(c.a_terms.size() == 3);
    CHECK(c.distances == std::vector<std::size_t>{6});

    std::optional<CodeFamily> fam;
    auto code = code_from_descriptor("bb:" + (dir / "bb.toml").string(), 0, &fam);
    CHECK(code->n == 72);
    CHECK(code->k == 12);
    CHECK_FALSE(fam.has_value());
}

TEST_CASE("code descriptors") {
    std::optional<CodeFamily> fam;
    auto surf = code_from_descriptor("surface:3", 0, &fam);
    CHECK(surf->n == 13);
    CHECK(fam == CodeFamily::surface);
    auto toric = code_from_descriptor("toric:3", 0, &fam);
    CHECK(toric->n == 18);
    CHECK(fam == CodeFamily::toric);
    CHECK_THROWS_AS(code_from_descriptor("steane:7", 0, nullptr), ConfigError);
}

TEST_SUITE_END();
