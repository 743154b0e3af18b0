/* C API for the csqpt toolkit: configuration loading, experiment runs,
 * and plot-data export behind opaque handles and integer status codes.
 */
#ifndef CSQPT_H
#define CSQPT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes (match the CLI exit codes). */
enum {
    CSQPT_OK = 0,
    CSQPT_ERR_CONFIG = 2,  /* bad config / bad arguments / missing files */
    CSQPT_ERR_NUMERIC = 3, /* numeric failure (non-PSD drift etc.)       */
    CSQPT_ERR_INTERNAL = 4
};

typedef struct csqpt_config csqpt_config;

const char* csqpt_version(void);

/* Loads and validates a config file. On failure returns a status code and,
 * if errbuf is non-NULL, a diagnostic message. */
int csqpt_config_load(const char* path, csqpt_config** out, char* errbuf,
                      size_t errbuf_len);

/* Validation-only parse; no handle is kept. */
int csqpt_config_validate(const char* path, char* errbuf, size_t errbuf_len);

int csqpt_config_set_seed(csqpt_config* cfg, uint64_t seed);
int csqpt_config_set_output_dir(csqpt_config* cfg, const char* dir);
int csqpt_config_set_threads(csqpt_config* cfg, int threads);
/* One of: state-demo, csqpt, squeezed-predict, bootstrap, sweep-signal-power */
int csqpt_config_set_experiment(csqpt_config* cfg, const char* name);

void csqpt_config_free(csqpt_config* cfg);

/* Runs the experiment selected in the config. On success *manifest_json
 * (if non-NULL) receives a malloc'd copy of the run manifest; free it with
 * csqpt_string_free. */
int csqpt_run(csqpt_config* cfg, char** manifest_json, char* errbuf,
              size_t errbuf_len);

/* Plot-data export from an artifact file.
 * kind: quad-vs-phase | wigner | phase-vs-power | phase-slice | variance-vs-phase */
int csqpt_export(const char* artifact_path, const char* kind,
                 const char* out_path, char* errbuf, size_t errbuf_len);

void csqpt_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* CSQPT_H */
