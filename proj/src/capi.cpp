#include "csqpt.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "csqpt/pipeline.hpp"

struct csqpt_config {
    csqpt::RunConfig cfg;
};

namespace {

void fill_errbuf(char* errbuf, size_t errbuf_len, const std::string& msg) {
    if (!errbuf || errbuf_len == 0) return;
    size_t n = std::min(msg.size(), errbuf_len - 1);
    std::memcpy(errbuf, msg.data(), n);
    errbuf[n] = '\0';
}

int map_exception(char* errbuf, size_t errbuf_len) {
    try {
        throw;
    } catch (const csqpt::ConfigError& e) {
        fill_errbuf(errbuf, errbuf_len, e.what());
        return CSQPT_ERR_CONFIG;
    } catch (const csqpt::NumericError& e) {
        fill_errbuf(errbuf, errbuf_len, e.what());
        return CSQPT_ERR_NUMERIC;
    } catch (const std::invalid_argument& e) {
        fill_errbuf(errbuf, errbuf_len, e.what());
        return CSQPT_ERR_CONFIG;
    } catch (const std::exception& e) {
        fill_errbuf(errbuf, errbuf_len, e.what());
        return CSQPT_ERR_INTERNAL;
    } catch (...) {
        fill_errbuf(errbuf, errbuf_len, "unknown error");
        return CSQPT_ERR_INTERNAL;
    }
}

}  // namespace

extern "C" {

const char* csqpt_version(void) {
    static std::string v = csqpt::toolkit_version();
    return v.c_str();
}

int csqpt_config_load(const char* path, csqpt_config** out, char* errbuf,
                      size_t errbuf_len) {
    if (!path || !out) {
        fill_errbuf(errbuf, errbuf_len, "null argument");
        return CSQPT_ERR_CONFIG;
    }
    try {
        auto* handle = new csqpt_config{csqpt::load_config_file(path)};
        *out = handle;
        return CSQPT_OK;
    } catch (...) {
        return map_exception(errbuf, errbuf_len);
    }
}

int csqpt_config_validate(const char* path, char* errbuf, size_t errbuf_len) {
    if (!path) {
        fill_errbuf(errbuf, errbuf_len, "null path");
        return CSQPT_ERR_CONFIG;
    }
    try {
        (void)csqpt::load_config_file(path);
        return CSQPT_OK;
    } catch (...) {
        return map_exception(errbuf, errbuf_len);
    }
}

int csqpt_config_set_seed(csqpt_config* cfg, uint64_t seed) {
    if (!cfg) return CSQPT_ERR_CONFIG;
    cfg->cfg.seed = seed;
    cfg->cfg.seed_set = true;
    return CSQPT_OK;
}

int csqpt_config_set_output_dir(csqpt_config* cfg, const char* dir) {
    if (!cfg || !dir) return CSQPT_ERR_CONFIG;
    cfg->cfg.output_dir = dir;
    return CSQPT_OK;
}

int csqpt_config_set_threads(csqpt_config* cfg, int threads) {
    if (!cfg || threads < 1) return CSQPT_ERR_CONFIG;
    cfg->cfg.threads = threads;
    return CSQPT_OK;
}

int csqpt_config_set_experiment(csqpt_config* cfg, const char* name) {
    if (!cfg || !name) return CSQPT_ERR_CONFIG;
    try {
        // Route through the config parser's name mapping by patching a tiny
        // config; keeps the accepted names in one place.
        std::string probe = std::string("{\"seed\":0,\"experiment\":\"") +
                            name + "\"}";
        cfg->cfg.experiment = csqpt::parse_config(probe).experiment;
        return CSQPT_OK;
    } catch (...) {
        return CSQPT_ERR_CONFIG;
    }
}

void csqpt_config_free(csqpt_config* cfg) { delete cfg; }

int csqpt_run(csqpt_config* cfg, char** manifest_json, char* errbuf,
              size_t errbuf_len) {
    if (!cfg) {
        fill_errbuf(errbuf, errbuf_len, "null config");
        return CSQPT_ERR_CONFIG;
    }
    try {
        csqpt::RunManifest manifest = csqpt::run_experiment(cfg->cfg);
        if (manifest_json) {
            char* copy =
                static_cast<char*>(std::malloc(manifest.json.size() + 1));
            if (!copy) throw std::bad_alloc();
            std::memcpy(copy, manifest.json.c_str(), manifest.json.size() + 1);
            *manifest_json = copy;
        }
        return CSQPT_OK;
    } catch (...) {
        return map_exception(errbuf, errbuf_len);
    }
}

int csqpt_export(const char* artifact_path, const char* kind,
                 const char* out_path, char* errbuf, size_t errbuf_len) {
    if (!artifact_path || !kind || !out_path) {
        fill_errbuf(errbuf, errbuf_len, "null argument");
        return CSQPT_ERR_CONFIG;
    }
    try {
        csqpt::export_plotdata(artifact_path, kind, out_path);
        return CSQPT_OK;
    } catch (...) {
        return map_exception(errbuf, errbuf_len);
    }
}

void csqpt_string_free(char* s) { std::free(s); }

}  // extern "C"
