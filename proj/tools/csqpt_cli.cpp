// Command-line front end; all functionality goes through the C API.
#include <cstdint>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "csqpt.h"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "Config JSON path")
        ->required();
    cmd->add_option("--out", opts.out_dir, "Output directory override");
    cmd->add_option("--seed", opts.seed, "Seed override")
        ->each([&opts](const std::string&) { opts.seed_given = true; });
    cmd->add_option("--threads", opts.threads, "Thread count override");
}

int run_verb(const CommonOpts& opts, const char* experiment) {
    char err[512] = {0};
    csqpt_config* cfg = nullptr;
    int rc = csqpt_config_load(opts.config_path.c_str(), &cfg, err, sizeof(err));
    if (rc != CSQPT_OK) {
        std::fprintf(stderr, "config error: %s\n", err);
        return rc;
    }
    csqpt_config_set_experiment(cfg, experiment);
    if (opts.seed_given) csqpt_config_set_seed(cfg, opts.seed);
    if (!opts.out_dir.empty())
        csqpt_config_set_output_dir(cfg, opts.out_dir.c_str());
    if (opts.threads > 0) csqpt_config_set_threads(cfg, opts.threads);

    char* manifest = nullptr;
    rc = csqpt_run(cfg, &manifest, err, sizeof(err));
    if (rc != CSQPT_OK) {
        std::fprintf(stderr, "run failed: %s\n", err);
    } else if (manifest) {
        std::fputs(manifest, stdout);
        csqpt_string_free(manifest);
    }
    csqpt_config_free(cfg);
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kerr phase-shift channel simulation and coherent-state "
                 "process tomography"};
    app.set_version_flag("--version", std::string(csqpt_version()));
    app.require_subcommand(1);

    struct Verb {
        const char* name;
        const char* experiment;
        const char* help;
    };
    const Verb verbs[] = {
        {"state-demo", "state-demo",
         "Simulate probe states through both channels, fit phases, "
         "reconstruct states and Wigner functions"},
        {"csqpt", "csqpt",
         "Reconstruct the process tensor at each configured signal power"},
        {"squeezed-predict", "squeezed-predict",
         "Predict squeezed-vacuum transmission through a tensor"},
        {"bootstrap", "bootstrap",
         "Bootstrap error bars for a reconstructed tensor"},
        {"sweep-signal-power", "sweep-signal-power",
         "Phase-shift vs signal power sweep"},
    };

    CommonOpts opts[5];
    const char* chosen = nullptr;
    for (int i = 0; i < 5; ++i) {
        CLI::App* cmd = app.add_subcommand(verbs[i].name, verbs[i].help);
        add_common(cmd, opts[i]);
        cmd->callback([&chosen, i, &verbs]() { chosen = verbs[i].experiment; });
    }

    std::string validate_path;
    CLI::App* validate =
        app.add_subcommand("validate-config", "Parse and validate a config");
    validate->add_option("--config", validate_path, "Config JSON path")
        ->required();

    std::string artifact, kind, export_out;
    CLI::App* exp = app.add_subcommand("export", "Plot-data export");
    exp->add_option("artifact", artifact, "Artifact file")->required();
    exp->add_option("kind", kind,
                    "quad-vs-phase | wigner | phase-vs-power | phase-slice | "
                    "variance-vs-phase")
        ->required();
    exp->add_option("--out", export_out, "Output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : CSQPT_ERR_CONFIG;
    }

    char err[512] = {0};
    if (validate->parsed()) {
        int rc = csqpt_config_validate(validate_path.c_str(), err, sizeof(err));
        if (rc != CSQPT_OK)
            std::fprintf(stderr, "config error: %s\n", err);
        else
            std::printf("ok\n");
        return rc;
    }
    if (exp->parsed()) {
        int rc = csqpt_export(artifact.c_str(), kind.c_str(),
                              export_out.c_str(), err, sizeof(err));
        if (rc != CSQPT_OK) std::fprintf(stderr, "export failed: %s\n", err);
        return rc;
    }
    for (int i = 0; i < 5; ++i) {
        if (chosen == verbs[i].experiment) return run_verb(opts[i], chosen);
    }
    return CSQPT_ERR_CONFIG;
}
