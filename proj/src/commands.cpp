#include "fpmech/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fpmech/errors.hpp"
#include "fpmech/eval.hpp"
#include "fpmech/feature_table.hpp"
#include "fpmech/metadata.hpp"
#include "fpmech/util.hpp"

namespace fs = std::filesystem;

namespace fpmech {

namespace {

void ensure_out(const RunConfig& cfg) { fs::create_directories(cfg.out_dir); }

std::string out_path(const RunConfig& cfg, const std::string& name) {
    return (fs::path(cfg.out_dir) / name).string();
}

SeedTable load_seed_table(const RunConfig& cfg) {
    return cfg.seed_table_path.empty() ? SeedTable::builtin() : SeedTable::load(cfg.seed_table_path);
}

nlohmann::json base_sidecar(const RunConfig& cfg) {
    nlohmann::json j;
    j["config"] = nlohmann::json::parse(cfg.to_json());
    j["config_hash"] = cfg.content_hash();
    j["schema_hash"] = FeatureSchema::instance().schema_hash();
    return j;
}

void write_sidecar(const RunConfig& cfg, const std::string& name, const nlohmann::json& j) {
    write_text_file(out_path(cfg, name), j.dump(2) + "\n");
}

std::string resolve_structure_path(const RunConfig& cfg, const std::string& rel) {
    const fs::path p(rel);
    if (p.is_absolute() || cfg.structures_dir.empty()) return rel;
    return (fs::path(cfg.structures_dir) / p).string();
}

std::string reason_code(const Error& e) {
    if (dynamic_cast<const NoChromophore*>(&e)) return "NoChromophore";
    if (dynamic_cast<const EmptyStructure*>(&e)) return "EmptyStructure";
    if (dynamic_cast<const MalformedRecord*>(&e)) return "MalformedRecord";
    if (dynamic_cast<const EmptyLocalNeighbourhood*>(&e)) return "EmptyLocalNeighbourhood";
    return "Error";
}

FeatureTable load_checked_features(const RunConfig& cfg) {
    const std::string csv_path = out_path(cfg, "features.csv");
    if (!fs::exists(csv_path)) throw MissingFeatureTable("missing " + csv_path + "; run featurize first");
    FeatureTable t = feature_table_from_csv(read_text_file(csv_path));

    const std::string meta_path = out_path(cfg, "features_meta.json");
    if (fs::exists(meta_path)) {
        const auto meta = nlohmann::json::parse(read_text_file(meta_path));
        const std::string recorded = meta.value("schema_hash", "");
        const std::string current = FeatureSchema::instance().schema_hash();
        if (recorded != current) {
            throw ConfigMismatch("feature table schema hash " + recorded +
                                 " does not match current schema " + current);
        }
    }
    return t;
}

Dataset load_dataset(const RunConfig& cfg) {
    return make_dataset(load_metadata(cfg.metadata_path), load_checked_features(cfg));
}

std::string metric_cell(double v) { return fmt_double(v); }

std::string screening_header(const RunConfig& cfg) {
    std::string h;
    for (int k : cfg.screening_k) h += ",bright_p@" + std::to_string(k);
    for (int k : cfg.screening_k) h += ",dark_p@" + std::to_string(k);
    return h;
}

std::string screening_cells(const SeedMetricsRow& row, const RunConfig& cfg) {
    std::string s;
    for (int k : cfg.screening_k) {
        s += ",";
        const auto it = row.bright_p.find(k);
        if (it != row.bright_p.end()) s += metric_cell(it->second);
    }
    for (int k : cfg.screening_k) {
        s += ",";
        const auto it = row.dark_p.find(k);
        if (it != row.dark_p.end()) s += metric_cell(it->second);
    }
    return s;
}

std::string metrics_csv(const std::string& condition, const std::vector<SeedMetricsRow>& rows,
                        const RunConfig& cfg) {
    std::ostringstream out;
    out << "condition,seed,scope,n,r,r_defined,mae,compression" << screening_header(cfg) << "\n";
    for (const auto& row : rows) {
        out << condition << "," << row.seed << "," << row.scope << "," << row.reg.n << ","
            << metric_cell(row.reg.pearson_r) << "," << (row.reg.r_defined ? 1 : 0) << ","
            << metric_cell(row.reg.mae) << "," << metric_cell(row.reg.compression)
            << screening_cells(row, cfg) << "\n";
    }
    return out.str();
}

// mean +/- sd rows over the per-seed pooled metrics of one scope
std::string summary_rows(const std::string& condition, const std::vector<SeedMetricsRow>& rows,
                         const std::string& scope) {
    std::vector<const SeedMetricsRow*> in_scope;
    for (const auto& r : rows) {
        if (r.scope == scope) in_scope.push_back(&r);
    }
    if (in_scope.empty()) return "";
    auto agg = [&](auto get) {
        double sum = 0.0;
        for (const auto* r : in_scope) sum += get(*r);
        const double mean = sum / in_scope.size();
        double ss = 0.0;
        for (const auto* r : in_scope) ss += (get(*r) - mean) * (get(*r) - mean);
        const double sd = in_scope.size() > 1 ? std::sqrt(ss / (in_scope.size() - 1)) : 0.0;
        return std::pair<double, double>(mean, sd);
    };
    const auto [rm, rs] = agg([](const SeedMetricsRow& r) { return r.reg.pearson_r; });
    const auto [mm, ms] = agg([](const SeedMetricsRow& r) { return r.reg.mae; });
    const auto [cm, cs] = agg([](const SeedMetricsRow& r) { return r.reg.compression; });
    std::ostringstream out;
    out << "condition,scope,stat,r,mae,compression\n";
    out << condition << "," << scope << ",mean," << metric_cell(rm) << "," << metric_cell(mm) << ","
        << metric_cell(cm) << "\n";
    out << condition << "," << scope << ",sd," << metric_cell(rs) << "," << metric_cell(ms) << ","
        << metric_cell(cs) << "\n";
    return out.str();
}

std::string predictions_csv(const std::string& condition, const std::vector<OofPrediction>& preds) {
    std::ostringstream out;
    out << "condition,seed,fold,id,band,y,yhat,bright,dark\n";
    for (const auto& p : preds) {
        out << condition << "," << p.seed << "," << p.fold << "," << p.id << ","
            << band_name(p.band) << "," << fmt_double(p.y) << "," << fmt_double(p.yhat) << ","
            << int(p.bright) << "," << int(p.dark) << "\n";
    }
    return out.str();
}

std::string skips_csv(const std::string& condition, const std::vector<SkipRecord>& skips) {
    std::ostringstream out;
    out << "condition,seed,fold,scope,reason\n";
    for (const auto& s : skips) {
        out << condition << "," << s.seed << "," << s.fold << "," << s.scope << ",\"" << s.reason
            << "\"\n";
    }
    return out.str();
}

std::string recurrence_csv(const CvResult& result) {
    // sorted by band, then count descending, then column name
    std::vector<std::tuple<std::string, int, std::string>> rows;
    for (const auto& [key, count] : result.recurrence) {
        rows.emplace_back(key.first, -count, key.second);
    }
    std::sort(rows.begin(), rows.end());
    std::ostringstream out;
    out << "band,column,count\n";
    for (const auto& [band, neg, col] : rows) out << band << "," << col << "," << -neg << "\n";
    return out.str();
}

}  // namespace

int cmd_featurize(const RunConfig& cfg) {
    ensure_out(cfg);
    const auto records = load_metadata(cfg.metadata_path);
    const SeedTable table = load_seed_table(cfg);
    const PropagateConfig pcfg = cfg.propagate_config();

    FeatureTable out = FeatureTable::with_schema_columns();
    std::vector<std::tuple<std::string, std::string, std::string>> skips;  // id, code, detail
    std::vector<std::string> degenerate_ids, fallback_ids;

    for (const auto& rec : records) {
        try {
            Structure s = parse_structure(resolve_structure_path(cfg, rec.structure_path));
            s.id = rec.id;
            CroAnchor anchor = register_chromophore(s);
            decompose_regions(s, anchor);
            const FeatureVector fv = featurize(s, anchor, table, pcfg);
            out.ids.push_back(rec.id);
            out.rows.emplace_back(fv.values.begin(), fv.values.end());
            if (fv.degenerate_neighbourhood) degenerate_ids.push_back(rec.id);
            if (fv.region_fallback) fallback_ids.push_back(rec.id);
        } catch (const Error& e) {
            skips.emplace_back(rec.id, reason_code(e), e.what());
            std::cerr << "skip " << rec.id << " [" << reason_code(e) << "]: " << e.what() << "\n";
        }
    }

    write_text_file(out_path(cfg, "features.csv"), feature_table_to_csv(out));
    nlohmann::json meta = base_sidecar(cfg);
    meta["seed_table_hash"] = table.content_hash();
    meta["n_rows"] = out.ids.size();
    meta["degenerate_neighbourhood_ids"] = degenerate_ids;
    meta["region_fallback_ids"] = fallback_ids;
    auto& jskips = meta["skips"] = nlohmann::json::array();
    for (const auto& [id, code, why] : skips) {
        jskips.push_back({{"id", id}, {"code", code}, {"reason", why}});
    }
    write_sidecar(cfg, "features_meta.json", meta);

    if (out.ids.empty()) return 1;
    return skips.empty() ? 0 : 2;
}

int cmd_split(const RunConfig& cfg) {
    ensure_out(cfg);
    const auto records = load_metadata(cfg.metadata_path);
    const SplitPlan plan = homology_split(records, cfg.jaccard_tau);

    std::ostringstream out;
    out << "id,partition,m,bucket\n";
    for (const auto& rec : records) {
        const bool train =
            std::find(plan.train_ids.begin(), plan.train_ids.end(), rec.id) != plan.train_ids.end();
        if (train) {
            out << rec.id << ",train,,\n";
        } else {
            out << rec.id << ",test," << fmt_double(plan.m.at(rec.id)) << ","
                << bucket_name(plan.bucket.at(rec.id)) << "\n";
        }
    }
    write_text_file(out_path(cfg, "split.csv"), out.str());

    nlohmann::json meta = base_sidecar(cfg);
    meta["n_train"] = plan.train_ids.size();
    meta["n_test"] = plan.test_ids.size();
    write_sidecar(cfg, "split_meta.json", meta);
    return 0;
}

int cmd_eval_random(const RunConfig& cfg, const std::string& condition) {
    ensure_out(cfg);
    const Dataset ds = load_dataset(cfg);
    const AblationCondition cond = condition_by_name(condition.empty() ? "full" : condition);
    const CvResult result = run_random_cv(ds, cfg, cond);

    write_text_file(out_path(cfg, "random_cv_metrics.csv"), metrics_csv(cond.name, result.per_seed, cfg));
    write_text_file(out_path(cfg, "random_cv_summary.csv"),
                    summary_rows(cond.name, result.per_seed, "pooled"));
    write_text_file(out_path(cfg, "random_cv_predictions.csv"),
                    predictions_csv(cond.name, result.predictions));
    write_text_file(out_path(cfg, "recurrence.csv"), recurrence_csv(result));
    write_text_file(out_path(cfg, "random_cv_skips.csv"), skips_csv(cond.name, result.skips));

    nlohmann::json meta = base_sidecar(cfg);
    meta["condition"] = cond.name;
    meta["n_features"] = cond.feature_count();
    meta["n_oof_predictions"] = result.predictions.size();
    meta["n_skipped_cells"] = result.skips.size();
    write_sidecar(cfg, "eval_random_meta.json", meta);
    return 0;
}

int cmd_eval_homology(const RunConfig& cfg, const std::string& condition,
                      const std::string& bucket_filter) {
    ensure_out(cfg);
    const auto records = load_metadata(cfg.metadata_path);
    const Dataset ds = make_dataset(records, load_checked_features(cfg));
    const SplitPlan plan = homology_split(records, cfg.jaccard_tau);
    const AblationCondition cond = condition_by_name(condition.empty() ? "full" : condition);
    HomologyResult result = run_homology_eval(ds, plan, cfg, cond);

    if (!bucket_filter.empty()) {
        std::erase_if(result.rows,
                      [&](const SeedMetricsRow& r) { return r.scope != bucket_filter; });
    }
    write_text_file(out_path(cfg, "homology_metrics.csv"), metrics_csv(cond.name, result.rows, cfg));
    write_text_file(out_path(cfg, "homology_predictions.csv"),
                    predictions_csv(cond.name, result.predictions));
    write_text_file(out_path(cfg, "homology_skips.csv"), skips_csv(cond.name, result.skips));
    // self-describing model files for the first seed
    const std::string first = result.models.empty()
                                  ? ""
                                  : "seed" + std::to_string(cfg.seeds.empty() ? 0 : cfg.seeds[0]);
    for (const auto& [label, json] : result.models) {
        if (label.rfind(first, 0) != 0) continue;
        write_text_file(out_path(cfg, "model_" + label + ".json"), json + "\n");
    }

    nlohmann::json meta = base_sidecar(cfg);
    meta["condition"] = cond.name;
    meta["n_train"] = plan.train_ids.size();
    meta["n_test"] = plan.test_ids.size();
    write_sidecar(cfg, "eval_homology_meta.json", meta);
    return 0;
}

int cmd_ablate(const RunConfig& cfg, const std::string& condition) {
    ensure_out(cfg);
    const Dataset ds = load_dataset(cfg);

    std::vector<AblationCondition> conds;
    if (condition.empty()) {
        conds = standard_conditions();
    } else {
        conds.push_back(condition_by_name(condition));
    }

    std::ostringstream metrics, summary, skips;
    metrics << "condition,n_features,seed,scope,n,r,r_defined,mae,compression"
            << screening_header(cfg) << "\n";
    summary << "condition,n_features,n_oof_total,r_mean,r_sd,mae_mean,mae_sd\n";
    skips << "condition,seed,fold,scope,reason\n";

    for (const auto& cond : conds) {
        const CvResult result = run_random_cv(ds, cfg, cond);
        for (const auto& row : result.per_seed) {
            metrics << cond.name << "," << cond.feature_count() << "," << row.seed << ","
                    << row.scope << "," << row.reg.n << "," << metric_cell(row.reg.pearson_r) << ","
                    << (row.reg.r_defined ? 1 : 0) << "," << metric_cell(row.reg.mae) << ","
                    << metric_cell(row.reg.compression) << screening_cells(row, cfg) << "\n";
        }
        double r_sum = 0.0, mae_sum = 0.0;
        for (const auto& row : result.per_seed) {
            r_sum += row.reg.pearson_r;
            mae_sum += row.reg.mae;
        }
        const size_t ns = result.per_seed.size();
        const double r_mean = ns ? r_sum / ns : 0.0;
        const double mae_mean = ns ? mae_sum / ns : 0.0;
        double r_ss = 0.0, mae_ss = 0.0;
        for (const auto& row : result.per_seed) {
            r_ss += (row.reg.pearson_r - r_mean) * (row.reg.pearson_r - r_mean);
            mae_ss += (row.reg.mae - mae_mean) * (row.reg.mae - mae_mean);
        }
        summary << cond.name << "," << cond.feature_count() << "," << result.predictions.size()
                << "," << metric_cell(r_mean) << ","
                << metric_cell(ns > 1 ? std::sqrt(r_ss / (ns - 1)) : 0.0) << ","
                << metric_cell(mae_mean) << ","
                << metric_cell(ns > 1 ? std::sqrt(mae_ss / (ns - 1)) : 0.0) << "\n";
        for (const auto& s : result.skips) {
            skips << cond.name << "," << s.seed << "," << s.fold << "," << s.scope << ",\""
                  << s.reason << "\"\n";
        }
    }
    write_text_file(out_path(cfg, "ablation_metrics.csv"), metrics.str());
    write_text_file(out_path(cfg, "ablation_summary.csv"), summary.str());
    write_text_file(out_path(cfg, "ablation_skips.csv"), skips.str());

    nlohmann::json meta = base_sidecar(cfg);
    auto& jc = meta["conditions"] = nlohmann::json::array();
    for (const auto& c : conds) jc.push_back({{"name", c.name}, {"n_features", c.feature_count()}});
    write_sidecar(cfg, "ablate_meta.json", meta);
    return 0;
}

int cmd_stress(const RunConfig& cfg) {
    ensure_out(cfg);
    const Dataset ds = load_dataset(cfg);
    const StressResult result = v54_stress(ds, cfg);

    std::ostringstream out;
    out << "setting,r_enrichment_only,r_full,r_v54_only,buffer_r,ci_lo,ci_hi\n";
    for (const auto& row : result.rows) {
        out << row.setting << "," << metric_cell(row.r_enrichment) << ","
            << metric_cell(row.r_full) << "," << metric_cell(row.r_v54) << ",";
        if (row.has_buffer) {
            out << metric_cell(row.buffer_r) << "," << metric_cell(row.ci_lo) << ","
                << metric_cell(row.ci_hi);
        } else {
            out << ",,";
        }
        out << "\n";
    }
    write_text_file(out_path(cfg, "stress.csv"), out.str());
    write_sidecar(cfg, "stress_meta.json", base_sidecar(cfg));
    return 0;
}

namespace {

// Minimal deterministic SVG line plot: one polyline per series over integer
// x ticks, y in [0,1].
std::string svg_lines(const std::string& title, const std::vector<int>& xs,
                      const std::vector<std::pair<std::string, std::vector<double>>>& series) {
    constexpr int W = 640, H = 440, ML = 70, MR = 30, MT = 50, MB = 60;
    const double plot_w = W - ML - MR, plot_h = H - MT - MB;
    auto sx = [&](size_t i) {
        return ML + (xs.size() < 2 ? 0.5 : static_cast<double>(i) / (xs.size() - 1)) * plot_w;
    };
    auto sy = [&](double v) { return MT + (1.0 - v) * plot_h; };
    const std::vector<std::string> colors = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\">\n";
    s << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    s << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title
      << "</text>\n";
    // axes
    s << "<line x1=\"" << ML << "\" y1=\"" << MT << "\" x2=\"" << ML << "\" y2=\"" << MT + plot_h
      << "\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << ML << "\" y1=\"" << MT + plot_h << "\" x2=\"" << ML + plot_w << "\" y2=\""
      << MT + plot_h << "\" stroke=\"black\"/>\n";
    for (int g = 0; g <= 5; ++g) {
        const double v = g / 5.0;
        s << "<line x1=\"" << ML - 4 << "\" y1=\"" << sy(v) << "\" x2=\"" << ML + plot_w
          << "\" y2=\"" << sy(v) << "\" stroke=\"#dddddd\"/>\n";
        s << "<text x=\"" << ML - 8 << "\" y=\"" << sy(v) + 4
          << "\" text-anchor=\"end\" font-size=\"11\">" << fmt_double(v) << "</text>\n";
    }
    for (size_t i = 0; i < xs.size(); ++i) {
        s << "<text x=\"" << sx(i) << "\" y=\"" << MT + plot_h + 18
          << "\" text-anchor=\"middle\" font-size=\"11\">" << xs[i] << "</text>\n";
    }
    s << "<text x=\"" << ML + plot_w / 2 << "\" y=\"" << H - 14
      << "\" text-anchor=\"middle\" font-size=\"12\">K</text>\n";
    for (size_t k = 0; k < series.size(); ++k) {
        const auto& [name, vals] = series[k];
        s << "<polyline fill=\"none\" stroke=\"" << colors[k % colors.size()]
          << "\" stroke-width=\"2\" points=\"";
        for (size_t i = 0; i < vals.size(); ++i) s << sx(i) << "," << sy(vals[i]) << " ";
        s << "\"/>\n";
        for (size_t i = 0; i < vals.size(); ++i) {
            s << "<circle cx=\"" << sx(i) << "\" cy=\"" << sy(vals[i]) << "\" r=\"3\" fill=\""
              << colors[k % colors.size()] << "\"/>\n";
        }
        s << "<text x=\"" << ML + plot_w - 4 << "\" y=\"" << MT + 16 + 16 * k
          << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << colors[k % colors.size()] << "\">"
          << name << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

struct MetricsRowLite {
    std::string condition, seed, scope;
    std::map<std::string, double> cells;  // header name -> value
};

std::vector<MetricsRowLite> read_metrics(const std::string& path) {
    std::vector<MetricsRowLite> rows;
    std::istringstream in(read_text_file(path));
    std::string line;
    if (!std::getline(in, line)) return rows;
    const auto header = split_csv_line(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        MetricsRowLite r;
        for (size_t i = 0; i < header.size() && i < f.size(); ++i) {
            if (header[i] == "condition") {
                r.condition = f[i];
            } else if (header[i] == "seed") {
                r.seed = f[i];
            } else if (header[i] == "scope") {
                r.scope = f[i];
            } else if (!f[i].empty()) {
                r.cells[header[i]] = parse_double(f[i]);
            }
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace

int cmd_report(const RunConfig& cfg) {
    ensure_out(cfg);
    const std::string random_path = out_path(cfg, "random_cv_metrics.csv");
    if (!fs::exists(random_path)) {
        throw MissingFeatureTable("missing " + random_path + "; run eval-random first");
    }
    const auto rows = read_metrics(random_path);

    // P@K frontier table: mean over seeds per scope and K
    std::ostringstream frontier;
    frontier << "protocol,scope,K,bright_p_mean,dark_p_mean\n";
    auto frontier_for = [&](const std::vector<MetricsRowLite>& in, const std::string& protocol,
                            const std::string& scope) {
        std::vector<double> bright, dark;
        for (int k : cfg.screening_k) {
            double bs = 0.0, dsum = 0.0;
            int n = 0;
            for (const auto& r : in) {
                if (r.scope != scope) continue;
                const auto b = r.cells.find("bright_p@" + std::to_string(k));
                const auto d = r.cells.find("dark_p@" + std::to_string(k));
                if (b == r.cells.end() || d == r.cells.end()) continue;
                bs += b->second;
                dsum += d->second;
                ++n;
            }
            if (n == 0) continue;
            bright.push_back(bs / n);
            dark.push_back(dsum / n);
            frontier << protocol << "," << scope << "," << k << "," << fmt_double(bs / n) << ","
                     << fmt_double(dsum / n) << "\n";
        }
        return std::pair(bright, dark);
    };

    const auto [rb, rd] = frontier_for(rows, "random_cv", "pooled");
    if (!rb.empty()) {
        write_text_file(out_path(cfg, "report_topk_random.svg"),
                        svg_lines("Top-K screening precision (random CV)", cfg.screening_k,
                                  {{"bright P@K", rb}, {"dark P@K", rd}}));
    }

    const std::string hom_path = out_path(cfg, "homology_metrics.csv");
    if (fs::exists(hom_path)) {
        const auto hrows = read_metrics(hom_path);
        const auto [hb, hd] = frontier_for(hrows, "homology", "<50");
        if (!hb.empty()) {
            write_text_file(out_path(cfg, "report_topk_remote.svg"),
                            svg_lines("Top-K screening precision (remote bucket)", cfg.screening_k,
                                      {{"bright P@K", hb}, {"dark P@K", hd}}));
        }
    }
    write_text_file(out_path(cfg, "topk_frontier.csv"), frontier.str());

    // recurrence bubble chart: columns x bands, area ~ count
    const std::string rec_path = out_path(cfg, "recurrence.csv");
    if (fs::exists(rec_path)) {
        std::istringstream in(read_text_file(rec_path));
        std::string line;
        std::getline(in, line);
        std::map<std::string, std::map<std::string, int>> counts;  // column -> band -> count
        std::vector<std::string> bands;
        int max_count = 1;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto f = split_csv_line(line);
            if (f.size() != 3) continue;
            counts[f[1]][f[0]] = static_cast<int>(parse_double(f[2]));
            if (std::find(bands.begin(), bands.end(), f[0]) == bands.end()) bands.push_back(f[0]);
            max_count = std::max(max_count, static_cast<int>(parse_double(f[2])));
        }
        std::sort(bands.begin(), bands.end());
        // order columns by total recurrence, strongest first
        std::vector<std::pair<int, std::string>> order;
        for (const auto& [col, per_band] : counts) {
            int tot = 0;
            for (const auto& [b, c] : per_band) tot += c;
            order.push_back({-tot, col});
        }
        std::sort(order.begin(), order.end());
        if (order.size() > 30) order.resize(30);

        const int row_h = 18, header_h = 60, left_w = 330, col_w = 110;
        const int W = left_w + col_w * static_cast<int>(bands.size()) + 30;
        const int H = header_h + row_h * static_cast<int>(order.size()) + 30;
        std::ostringstream s;
        s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
          << "\" font-family=\"sans-serif\">\n<rect width=\"" << W << "\" height=\"" << H
          << "\" fill=\"white\"/>\n";
        s << "<text x=\"" << W / 2
          << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">Recurrently selected features "
             "(top-10 appearances)</text>\n";
        for (size_t b = 0; b < bands.size(); ++b) {
            s << "<text x=\"" << left_w + col_w * b + col_w / 2 << "\" y=\"" << header_h - 12
              << "\" text-anchor=\"middle\" font-size=\"12\">" << bands[b] << "</text>\n";
        }
        for (size_t i = 0; i < order.size(); ++i) {
            const std::string& col = order[i].second;
            const double cy = header_h + row_h * i + row_h / 2.0;
            s << "<text x=\"" << left_w - 8 << "\" y=\"" << cy + 4
              << "\" text-anchor=\"end\" font-size=\"10\">" << col << "</text>\n";
            for (size_t b = 0; b < bands.size(); ++b) {
                const auto it = counts[col].find(bands[b]);
                if (it == counts[col].end() || it->second == 0) continue;
                const double r =
                    2.0 + 6.5 * std::sqrt(static_cast<double>(it->second) / max_count);
                s << "<circle cx=\"" << left_w + col_w * b + col_w / 2 << "\" cy=\"" << cy
                  << "\" r=\"" << fmt_double(r) << "\" fill=\"#1f77b4\" fill-opacity=\"0.75\"/>\n";
            }
        }
        s << "</svg>\n";
        write_text_file(out_path(cfg, "recurrence_bubble.svg"), s.str());
    }

    // human-readable summary
    std::ostringstream sum;
    sum << "Report\n======\n";
    for (const auto& r : rows) {
        if (r.scope != "pooled") continue;
        const auto rit = r.cells.find("r");
        const auto mit = r.cells.find("mae");
        if (rit == r.cells.end() || mit == r.cells.end()) continue;
        sum << r.condition << " seed " << r.seed << ": R=" << fmt_double(rit->second)
            << " MAE=" << fmt_double(mit->second) << "\n";
    }
    write_text_file(out_path(cfg, "summary.txt"), sum.str());
    write_sidecar(cfg, "report_meta.json", base_sidecar(cfg));
    return 0;
}

}  // namespace fpmech
