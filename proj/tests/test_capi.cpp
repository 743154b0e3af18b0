#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "csqpt.h"
#include "doctest.h"

namespace {

std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

void write(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

}  // namespace

TEST_CASE("version string") {
    REQUIRE(csqpt_version() != nullptr);
    CHECK(std::strlen(csqpt_version()) > 0);
}

TEST_CASE("config load and validate") {
    auto dir = temp_dir("csqpt_capi_cfg");
    auto good = dir / "good.json";
    write(good, R"({"seed": 7, "experiment": "squeezed-predict"})");
    auto bad = dir / "bad.json";
    write(bad, R"({"experiment": "squeezed-predict"})");

    char err[256] = {0};
    CHECK(csqpt_config_validate(good.string().c_str(), err, sizeof(err)) ==
          CSQPT_OK);
    CHECK(csqpt_config_validate(bad.string().c_str(), err, sizeof(err)) ==
          CSQPT_ERR_CONFIG);
    CHECK(std::strlen(err) > 0);
    CHECK(csqpt_config_validate((dir / "missing.json").string().c_str(), err,
                                sizeof(err)) == CSQPT_ERR_CONFIG);

    csqpt_config* cfg = nullptr;
    REQUIRE(csqpt_config_load(good.string().c_str(), &cfg, err, sizeof(err)) ==
            CSQPT_OK);
    REQUIRE(cfg != nullptr);
    CHECK(csqpt_config_set_seed(cfg, 99) == CSQPT_OK);
    CHECK(csqpt_config_set_threads(cfg, 2) == CSQPT_OK);
    CHECK(csqpt_config_set_threads(cfg, 0) == CSQPT_ERR_CONFIG);
    CHECK(csqpt_config_set_experiment(cfg, "bootstrap") == CSQPT_OK);
    CHECK(csqpt_config_set_experiment(cfg, "nope") == CSQPT_ERR_CONFIG);
    csqpt_config_free(cfg);
}

TEST_CASE("squeezed-predict run produces a manifest and artifacts") {
    auto dir = temp_dir("csqpt_capi_run");
    auto cfg_path = dir / "config.json";
    write(cfg_path, R"({"seed": 11, "experiment": "squeezed-predict"})");

    char err[256] = {0};
    csqpt_config* cfg = nullptr;
    REQUIRE(csqpt_config_load(cfg_path.string().c_str(), &cfg, err,
                              sizeof(err)) == CSQPT_OK);
    auto out_dir = dir / "out";
    CHECK(csqpt_config_set_output_dir(cfg, out_dir.string().c_str()) ==
          CSQPT_OK);

    char* manifest = nullptr;
    REQUIRE(csqpt_run(cfg, &manifest, err, sizeof(err)) == CSQPT_OK);
    REQUIRE(manifest != nullptr);
    std::string m(manifest);
    csqpt_string_free(manifest);
    CHECK(m.find("\"artifacts\"") != std::string::npos);
    CHECK(m.find("\"sha256\"") != std::string::npos);
    CHECK(std::filesystem::exists(out_dir / "manifest.json"));
    CHECK(std::filesystem::exists(out_dir / "summary.json"));
    CHECK(std::filesystem::exists(out_dir / "variance_vs_phase_eit.csv"));
    csqpt_config_free(cfg);
}

TEST_CASE("run without an output dir is a config error") {
    auto dir = temp_dir("csqpt_capi_noout");
    auto cfg_path = dir / "config.json";
    write(cfg_path, R"({"seed": 11, "experiment": "squeezed-predict"})");
    char err[256] = {0};
    csqpt_config* cfg = nullptr;
    REQUIRE(csqpt_config_load(cfg_path.string().c_str(), &cfg, err,
                              sizeof(err)) == CSQPT_OK);
    CHECK(csqpt_run(cfg, nullptr, err, sizeof(err)) == CSQPT_ERR_CONFIG);
    CHECK(std::strlen(err) > 0);
    csqpt_config_free(cfg);
}

TEST_CASE("export plot data") {
    auto dir = temp_dir("csqpt_capi_export");
    auto cfg_path = dir / "config.json";
    write(cfg_path, R"({"seed": 3, "experiment": "squeezed-predict"})");
    char err[256] = {0};
    csqpt_config* cfg = nullptr;
    REQUIRE(csqpt_config_load(cfg_path.string().c_str(), &cfg, err,
                              sizeof(err)) == CSQPT_OK);
    auto out_dir = dir / "out";
    csqpt_config_set_output_dir(cfg, out_dir.string().c_str());
    REQUIRE(csqpt_run(cfg, nullptr, err, sizeof(err)) == CSQPT_OK);
    csqpt_config_free(cfg);

    // no artifact to export from the run itself here; exercise error paths
    auto out_csv = dir / "export.csv";
    CHECK(csqpt_export((out_dir / "summary.json").string().c_str(),
                       "no-such-kind", out_csv.string().c_str(), err,
                       sizeof(err)) == CSQPT_ERR_CONFIG);
    CHECK(csqpt_export((dir / "missing.json").string().c_str(), "wigner",
                       out_csv.string().c_str(), err,
                       sizeof(err)) == CSQPT_ERR_CONFIG);
    CHECK(csqpt_export(nullptr, "wigner", out_csv.string().c_str(), err,
                       sizeof(err)) == CSQPT_ERR_CONFIG);
}
