#include <filesystem>
#include <fstream>
#include <string>

#include "crc/io.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace crc;
namespace fs = std::filesystem;

TEST_SUITE_BEGIN("io");

namespace {

fs::path temp_file(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "crcsim_io_tests";
    fs::create_directories(dir);
    return dir / name;
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

PathEnsemble small_ensemble(std::uint64_t seed) {
    SimConfig cfg;
    cfg.model = ModelKind::Vasicek;
    cfg.delta = 1.0 / 60.0;
    cfg.n_steps = 30;
    cfg.n_paths = 8;
    cfg.param_spec.kind = ParamProcessSpec::Kind::Constant;
    cfg.param_spec.vol0 = 1e-4;
    cfg.param_spec.beta0 = -0.8;
    cfg.seed = seed;
    cfg.initial_curve = oracles::AnalyticCurve{}.sample(TimeGrid(cfg.delta, 160));
    cfg.report_taus = {0.25, 1.0};
    return simulate_paths(cfg);
}

}  // namespace

TEST_CASE("load_yield_panel") {
    SUBCASE("small valid panel") {
        const auto p = temp_file("ok.csv");
        write_text(p,
                   "date,tau_0.25,tau_2\n"
                   "2020-01-02,0.012,0.015\n"
                   "2020-01-03,0.013,0.016\n");
        const YieldPanel panel = load_yield_panel(p);
        CHECK(panel.rows() == 2);
        CHECK(panel.maturities == std::vector<double>{0.25, 2.0});
        CHECK(panel.at(1, 1) == 0.016);
    }
    SUBCASE("header parsing failure points to the line") {
        const auto p = temp_file("badheader.csv");
        write_text(p, "date,maturity_1\n2020-01-02,0.01\n");
        CHECK_THROWS_WITH_AS((void)load_yield_panel(p),
                             doctest::Contains(":1:"), std::runtime_error);
    }
    SUBCASE("bad cell reports its line number") {
        const auto p = temp_file("badcell.csv");
        write_text(p, "date,tau_1\n2020-01-02,0.01\n2020-01-03,oops\n");
        CHECK_THROWS_WITH_AS((void)load_yield_panel(p),
                             doctest::Contains(":3:"), std::runtime_error);
    }
    SUBCASE("duplicated date is rejected") {
        const auto p = temp_file("dup.csv");
        write_text(p, "date,tau_1\n2020-01-02,0.01\n2020-01-02,0.02\n");
        CHECK_THROWS_WITH_AS((void)load_yield_panel(p),
                             doctest::Contains("duplicated date"), std::runtime_error);
    }
    SUBCASE("missing cells become gaps") {
        const auto p = temp_file("gap.csv");
        write_text(p, "date,tau_1,tau_2\n2020-01-02,,0.015\n2020-01-03,0.013,0.016\n");
        const YieldPanel panel = load_yield_panel(p);
        CHECK(!std::isfinite(panel.at(0, 0)));
        CHECK(panel.at(0, 1) == 0.015);
    }
    SUBCASE("round trip through write_yield_panel") {
        const auto p = temp_file("rt.csv");
        YieldPanel panel;
        panel.dates = {"2021-03-01", "2021-03-02"};
        panel.maturities = {0.25, 2.0, 10.0};
        panel.yields = {0.01, 0.012, 0.0151, 0.0102, 0.0125, 0.0149};
        write_yield_panel(panel, p);
        const YieldPanel back = load_yield_panel(p);
        CHECK(back.dates == panel.dates);
        CHECK(back.maturities == panel.maturities);
        CHECK(back.yields == panel.yields);
    }
}

TEST_CASE("ensemble outputs are deterministic") {
    const PathEnsemble a = small_ensemble(7);
    const PathEnsemble b = small_ensemble(7);

    const auto csv_a = temp_file("ens_a.csv");
    const auto csv_b = temp_file("ens_b.csv");
    write_ensemble_csv(a, csv_a);
    write_ensemble_csv(b, csv_b);
    CHECK(read_bytes(csv_a) == read_bytes(csv_b));
    CHECK(file_checksum(csv_a) == file_checksum(csv_b));

    const auto bin_a = temp_file("ens_a.bin");
    const auto bin_b = temp_file("ens_b.bin");
    write_ensemble_binary(a, bin_a);
    write_ensemble_binary(b, bin_b);
    CHECK(read_bytes(bin_a) == read_bytes(bin_b));

    // header sanity
    const std::string bytes = read_bytes(bin_a);
    CHECK(bytes.substr(0, 8) == "CRCENS01");

    // schema header on the csv
    std::ifstream in(csv_a);
    std::string first;
    std::getline(in, first);
    CHECK(first == std::string(kCsvSchemaHeader));
}

TEST_CASE("manifest round trip") {
    const auto p = temp_file("manifest.json");
    RunManifest m;
    m.command = "simulate";
    m.config_json = R"({"model":"vasicek","paths":8,"delta":0.0166})";
    m.seed = 77;
    m.build = "test";
    m.inputs["curve.csv"] = "fnv1a64:deadbeef";
    m.outputs["ensemble.csv"] = "fnv1a64:12345678";
    m.write(p);

    const RunManifest back = RunManifest::load(p);
    CHECK(back.command == m.command);
    CHECK(back.seed == m.seed);
    CHECK(back.inputs == m.inputs);
    CHECK(back.outputs == m.outputs);
}

TEST_SUITE_END();
