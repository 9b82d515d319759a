#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fpmech/commands.hpp"
#include "fpmech/errors.hpp"
#include "fpmech/feature_table.hpp"

using namespace fpmech;

int main(int argc, char** argv) {
    CLI::App app{"Chromophore-centred mechanism-graph pipeline for fluorescent-protein "
                 "quantum-yield prediction"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_file;
    std::string condition;
    std::string bucket;
    std::vector<uint64_t> seeds;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--metadata", cfg.metadata_path, "metadata CSV (id,sequence,emission_nm,qy,structure_path)");
        sub->add_option("--structures", cfg.structures_dir, "directory holding the structure files");
        sub->add_option("--out", cfg.out_dir, "output directory");
        sub->add_option("--config", config_file, "JSON config file applied before other flags");
        sub->add_option("--seeds", seeds, "evaluation seeds (default 0..4)");
        sub->add_option("--seed-table", cfg.seed_table_path, "seed-signal table file (default: built-in)");
    };

    auto* featurize = app.add_subcommand("featurize", "parse structures and emit the feature table");
    add_common(featurize);
    auto* split = app.add_subcommand("split", "fixed 5-mer-Jaccard homology split from sequences");
    add_common(split);
    auto* eval_random = app.add_subcommand("eval-random", "seeded stratified cross-validation");
    add_common(eval_random);
    eval_random->add_option("--condition", condition, "condition name (default: full)");
    auto* eval_hom = app.add_subcommand("eval-homology", "fixed homology-controlled evaluation");
    add_common(eval_hom);
    eval_hom->add_option("--condition", condition, "condition name (default: full)");
    eval_hom->add_option("--bucket", bucket, "restrict metric rows to one bucket label");
    auto* ablate = app.add_subcommand("ablate", "run the audited condition matrix");
    add_common(ablate);
    ablate->add_option("--condition", condition, "run a single named condition");
    auto* stress = app.add_subcommand("stress", "held-out enrichment perturbation stress test");
    add_common(stress);
    auto* report = app.add_subcommand("report", "render frontier tables and static plots");
    add_common(report);

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_file.empty()) {
            RunConfig base;
            base.merge_json(read_text_file(config_file));
            // flags already parsed into cfg win over the file
            const RunConfig flags = cfg;
            cfg = base;
            if (!flags.metadata_path.empty()) cfg.metadata_path = flags.metadata_path;
            if (!flags.structures_dir.empty()) cfg.structures_dir = flags.structures_dir;
            if (flags.out_dir != "out") cfg.out_dir = flags.out_dir;
            if (!flags.seed_table_path.empty()) cfg.seed_table_path = flags.seed_table_path;
        }
        if (!seeds.empty()) cfg.seeds = seeds;

        if (featurize->parsed()) return cmd_featurize(cfg);
        if (split->parsed()) return cmd_split(cfg);
        if (eval_random->parsed()) return cmd_eval_random(cfg, condition);
        if (eval_hom->parsed()) return cmd_eval_homology(cfg, condition, bucket);
        if (ablate->parsed()) return cmd_ablate(cfg, condition);
        if (stress->parsed()) return cmd_stress(cfg);
        if (report->parsed()) return cmd_report(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
