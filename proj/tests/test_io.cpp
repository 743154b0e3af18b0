#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <filesystem>

#include "csqpt/io.hpp"
#include "csqpt/pipeline.hpp"
#include "doctest.h"

using namespace csqpt;

namespace {

std::filesystem::path temp_dir() {
    auto dir = std::filesystem::temp_directory_path() / "csqpt_io_test";
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("density matrix JSON round-trip") {
    DensityMatrix rho =
        coherent_state(CoherentAmplitude{Complex(0.8, -0.3)}, FockDim{7});
    std::string text = io::density_matrix_to_json(rho);
    DensityMatrix back = io::density_matrix_from_json(text);
    CHECK(back.dim == rho.dim);
    CHECK((back.rho - rho.rho).cwiseAbs().maxCoeff() == 0.0);
    CHECK(back.discarded_tail == rho.discarded_tail);
}

TEST_CASE("process tensor JSON round-trip") {
    ProcessTensor t = oracle_tensor(ChannelParams{1.1, 0.4}, FockDim{5});
    std::string text = io::process_tensor_to_json(t);
    ProcessTensor back = io::process_tensor_from_json(text);
    CHECK(back.dim() == t.dim());
    CHECK((back.jamiolkowski() - t.jamiolkowski()).cwiseAbs().maxCoeff() ==
          0.0);
}

TEST_CASE("quadrature record CSV round-trip") {
    std::vector<QuadratureRecord> records{
        {0, 0.0, 0.123456789012345}, {1, 3.14, -2.5}, {2, 6.28, 1e-17}};
    std::string csv = io::records_to_csv(records);
    auto back = io::records_from_csv(csv);
    REQUIRE(back.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(back[i].pulse_id == records[i].pulse_id);
        CHECK(back[i].phase == records[i].phase);
        CHECK(back[i].value == records[i].value);
    }
    CHECK_THROWS(io::records_from_csv("not,a,header\n1,2,3\n"));
}

TEST_CASE("histogram JSON round-trip") {
    std::vector<QuadratureRecord> records;
    RandomStream rng(5, 5);
    for (int i = 0; i < 500; ++i)
        records.push_back(QuadratureRecord{
            i, 6.28 * rng.uniform(2 * i), 3 * (rng.uniform(2 * i + 1) - 0.5)});
    BinnedHistogram h = bin_records(records, BinSpec{10, 12, 2.0});
    BinnedHistogram back = io::histogram_from_json(io::histogram_to_json(h));
    CHECK(back.phase_edges == h.phase_edges);
    CHECK(back.quad_edges == h.quad_edges);
    CHECK((back.counts - h.counts).cwiseAbs().maxCoeff() == 0.0);
    CHECK(back.rejected == h.rejected);
}

TEST_CASE("signal power map JSON round-trip") {
    SignalPowerMap map = default_signal_power_map();
    SignalPowerMap back =
        io::signal_power_map_from_json(io::signal_power_map_to_json(map));
    REQUIRE(back.size() == map.size());
    for (std::size_t i = 0; i < map.size(); ++i) {
        CHECK(back[i].signal_power_mw == map[i].signal_power_mw);
        CHECK(back[i].params.phase_shift == map[i].params.phase_shift);
        CHECK(back[i].params.transmission == map[i].params.transmission);
        CHECK(back[i].params.label == map[i].params.label);
    }
}

TEST_CASE("phase slice CSV shape") {
    ProcessTensor t = oracle_tensor(ChannelParams{0.67, 0.035}, FockDim{3});
    std::string csv = io::phase_slice_to_csv(phase_slice(t));
    CHECK(csv.rfind("m,n,value,defined\n", 0) == 0);
    // 4x4 entries + header
    int lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    CHECK(lines == 17);
}

TEST_CASE("probe set manifest loading") {
    auto dir = temp_dir();
    DensityMatrix rho = coherent_state(CoherentAmplitude{0.5}, FockDim{6});
    std::vector<QuadratureRecord> seed{{0, 0.0, 0.0}};
    BinnedHistogram tmpl = bin_records(seed, BinSpec{8, 8, 4.0});
    BinnedHistogram hist = expected_histogram(rho, tmpl, 1.0, 1000.0);
    io::write_file(dir / "probe0.json", io::histogram_to_json(hist));

    std::string manifest = R"({
      "eta": 0.9,
      "probes": [{"alpha_re": 0.5, "alpha_im": 0.0,
                  "output_hist_path": "probe0.json"}]
    })";
    ProbeSet set = io::probe_set_from_manifest(manifest, dir);
    CHECK(set.eta == 0.9);
    REQUIRE(set.probes.size() == 1);
    CHECK(set.probes[0].alpha.alpha == Complex(0.5, 0.0));
    CHECK(set.probes[0].output_hist.total() == doctest::Approx(1000.0));
    CHECK_FALSE(set.probes[0].input_hist.has_value());
}

TEST_CASE("sha256 known vectors") {
    CHECK(io::sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(io::sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    // Multi-block input (> 64 bytes)
    std::string long_msg(1000, 'a');
    CHECK(io::sha256_hex(long_msg) ==
          "41edece42d63e8d9bf515a9ba6932e1c20cbc9f5a5d134645adb5db1b9737ea3");
}

TEST_CASE("file round-trip") {
    auto path = temp_dir() / "roundtrip.txt";
    io::write_file(path, "hello\n");
    CHECK(io::read_file(path) == "hello\n");
    CHECK_THROWS(io::read_file(temp_dir() / "missing.txt"));
}

TEST_CASE("config parse, serialize, re-parse") {
    std::string text = R"({
      "experiment": "csqpt",
      "seed": 42,
      "output_dir": "/tmp/run",
      "detection": {"efficiency": 0.85, "samples": 1000},
      "process_mle": {"n_max": 5, "working_n_max": 8, "iterations": 50}
    })";
    RunConfig cfg = parse_config(text);
    CHECK(cfg.experiment == Experiment::csqpt);
    CHECK(cfg.seed == 42);
    CHECK(cfg.detection.efficiency == 0.85);
    CHECK(cfg.process_mle.dim.n_max == 5);
    CHECK(cfg.process_mle.working_dim.n_max == 8);

    RunConfig back = parse_config(config_to_json(cfg));
    CHECK(config_to_json(back) == config_to_json(cfg));
}

TEST_CASE("config validation failures") {
    CHECK_THROWS_AS(parse_config("{"), ConfigError);
    CHECK_THROWS_AS(parse_config("{}"), ConfigError);  // seed missing
    CHECK_THROWS_AS(parse_config(R"({"seed": 1, "bogus": true})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"seed": 1, "experiment": "nope"})"),
                    ConfigError);
    CHECK_THROWS_AS(
        parse_config(R"({"seed": 1, "detection": {"efficiency": 1.5}})"),
        ConfigError);
    CHECK_THROWS_AS(
        parse_config(
            R"({"seed": 1, "process_mle": {"n_max": 8, "working_n_max": 5}})"),
        ConfigError);
}
