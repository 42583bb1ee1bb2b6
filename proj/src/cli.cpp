#include <CLI11.hpp>

#include <fstream>
#include <ostream>
#include <sstream>

#include "facet/cli.hpp"
#include "facet/error.hpp"
#include "facet/pipeline.hpp"
#include "facet/report.hpp"
#include "facet/rng.hpp"
#include "facet/text.hpp"

namespace facet::cli {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

template <class Fn>
void write_text(const fs::path& path, Fn&& fn) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    fn(out);
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

std::string file_token(const std::string& name) {
    std::string out;
    for (const char c : name) {
        const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                          c == '_' || c == '.';
        out += keep ? c : '_';
    }
    return out;
}

std::uint64_t parse_seed_env(const std::string& value) {
    const auto seed = text::parse_uint(value);
    if (!seed) throw Error(ErrorKind::Config, "FACET_SEED '" + value + "' is not an unsigned integer");
    return *seed;
}

void log_run(std::ostream& err, std::uint64_t hash, std::uint64_t seed, const std::string& source) {
    err << "facet: config hash " << text::hex64(hash) << ", seed " << seed << " (" << source << ")\n";
}

ExperimentConfig load_config(const fs::path& path, const std::optional<std::string>& seed_env, std::ostream& err) {
    ExperimentConfig config = load_experiment_config(path);
    apply_seed_override(config, seed_env ? seed_env->c_str() : nullptr);
    if (seed_env) err << "facet: FACET_SEED overrides the config seed\n";
    log_run(err, config.config_hash, config.seed, config.seed_source);
    return config;
}

// ---------------------------------------------------------------------------

struct GeomArgs {
    std::string landmarks;
    std::string images_dir;
    std::string geom_config;
    std::string out;
};

int cmd_geom(const GeomArgs& a, std::ostream& out, std::ostream& err) {
    const std::string config_text = a.geom_config.empty() ? default_geom_config_text() : read_bytes(a.geom_config);
    const GeomConfig config = a.geom_config.empty() ? default_geom_config() : load_geom_config(a.geom_config);
    std::optional<fs::path> images;
    if (!a.images_dir.empty()) images = fs::path(a.images_dir);
    const std::uint64_t hash = fnv1a64(config_text);
    log_run(err, hash, 0, "none");

    const GeomExtraction g = extract_geom_embeddings(load_landmarks(a.landmarks), images, config);
    save_embeddings(g.features, a.out);
    for (const auto& [id, reason] : g.excluded) err << "facet: warning: excluded face " << id << ": " << reason << '\n';
    write_text(a.out + ".excluded.txt", [&](std::ostream& s) {
        for (const auto& [id, reason] : g.excluded) s << id << ',' << csv_field(reason) << '\n';
    });
    if (!g.flags.empty()) {
        write_text(a.out + ".flags.txt", [&](std::ostream& s) {
            for (const auto& f : g.flags) s << f << '\n';
        });
    }
    Provenance p = base_provenance(hash, 0, "none");
    p.add("geom_version", config.version);
    p.add("canny_low", text::format_shortest(config.canny.low));
    p.add("canny_high", text::format_shortest(config.canny.high));
    p.add("windows", g.windows_used ? "enabled" : "disabled");
    p.add("faces", std::to_string(g.features.rows()));
    p.add("features", std::to_string(g.features.cols()));
    p.add("excluded", std::to_string(g.excluded.size()));
    write_provenance_sidecar(p, a.out);
    out << "wrote " << g.features.rows() << " x " << g.features.cols() << " geometric features to " << a.out << '\n';
    return kExitOk;
}

struct ConsistencyArgs {
    std::string ratings;
    std::string attribute;
    bool all = false;
    std::size_t repeats = 50;
    std::optional<std::uint64_t> seed;
    std::string out;
};

int cmd_consistency(const ConsistencyArgs& a, const std::optional<std::string>& seed_env, std::ostream& out,
                    std::ostream& err) {
    if (a.all == !a.attribute.empty()) throw UsageError("give exactly one of --attribute or --all");
    if (a.repeats == 0) throw UsageError("--repeats must be positive");
    std::uint64_t seed = 0;
    std::string source = "default";
    if (a.seed) {
        seed = *a.seed;
        source = "--seed";
    } else if (seed_env) {
        seed = parse_seed_env(*seed_env);
        source = "FACET_SEED";
        err << "facet: FACET_SEED sets the seed\n";
    }
    const std::string bytes = read_bytes(a.ratings);
    const std::uint64_t hash = fnv1a64(bytes);
    log_run(err, hash, seed, source);

    const RatingsTable table = load_ratings(a.ratings);
    const std::vector<AttributeName> attributes =
        a.all ? table.attributes() : std::vector<AttributeName>{a.attribute};
    std::vector<ConsistencyResult> results;
    for (const auto& attribute : attributes) {
        results.push_back(split_half_consistency(table, attribute, a.repeats, consistency_seed(seed, attribute)));
    }
    write_text(a.out, [&](std::ostream& s) { write_consistency_csv(results, s); });
    Provenance p = base_provenance(hash, seed, source);
    p.add("hash_of", "ratings file");
    p.add("repeats", std::to_string(a.repeats));
    write_provenance_sidecar(p, a.out);
    out << "wrote split-half consistency for " << results.size() << " attribute(s) to " << a.out << '\n';
    return kExitOk;
}

struct ExperimentArgs {
    std::string config;
    std::string out_dir;
    std::size_t jobs = 1;
};

int cmd_train(const ExperimentArgs& a, const std::optional<std::string>& seed_env, std::ostream& out,
              std::ostream& err) {
    const ExperimentConfig config = load_config(a.config, seed_env, err);
    const ExperimentData data = load_experiment_data(config);
    std::vector<std::string> failures;
    const auto predictors = train_final(config, data, failures, a.jobs);
    fs::create_directories(a.out_dir);
    const fs::path dir(a.out_dir);
    for (const auto& p : predictors) {
        save_predictor(p, dir / (file_token(p.attribute) + "__" + file_token(p.feature_source) + ".fprd"));
    }
    write_text(dir / "failures.csv", [&](std::ostream& s) {
        s << "attribute,source,error\n";
        for (const auto& f : failures) s << f << '\n';
    });
    Provenance p = experiment_provenance(config, data.geom);
    p.add("predictors", std::to_string(predictors.size()));
    write_text(dir / "provenance.txt", [&](std::ostream& s) { write_provenance(p, s); });
    for (const auto& f : failures) err << "facet: warning: training failed: " << f << '\n';
    out << "wrote " << predictors.size() << " predictor(s) to " << a.out_dir << '\n';
    return kExitOk;
}

int cmd_eval(const ExperimentArgs& a, const std::optional<std::string>& seed_env, std::ostream& out,
             std::ostream& err) {
    const ExperimentConfig config = load_config(a.config, seed_env, err);
    const ExperimentData data = load_experiment_data(config);
    for (const auto& [id, reason] : data.geom_excluded) {
        err << "facet: warning: excluded face " << id << ": " << reason << '\n';
    }
    const EvalReport report = evaluate_repeats(config, data, a.jobs);
    const fs::path dir(a.out_dir);
    const auto files = write_eval_outputs(report, experiment_provenance(config, data.geom), dir);
    if (!data.geom_excluded.empty()) {
        write_text(dir / "geom_excluded.csv", [&](std::ostream& s) {
            s << "face_id,reason\n";
            for (const auto& [id, reason] : data.geom_excluded) s << id << ',' << csv_field(reason) << '\n';
        });
    }
    std::size_t failed = 0;
    for (const auto& c : report.cells) failed += c.failed ? 1 : 0;
    for (const auto& h : report.human) failed += h.failed ? 1 : 0;
    if (failed > 0) err << "facet: warning: " << failed << " cell(s) failed; see failures.csv\n";
    if (!report.heatmaps) err << "facet: heatmaps skipped: " << report.heatmap_note << '\n';
    out << "wrote " << files.size() << " report file(s) to " << a.out_dir << '\n';
    return kExitOk;
}

struct PredictArgs {
    std::string predictor;
    std::string features;
    std::string out;
};

int cmd_predict(const PredictArgs& a, std::ostream& out, std::ostream& err) {
    const std::uint64_t hash = fnv1a64(read_bytes(a.predictor));
    const TrainedPredictor p = load_predictor(a.predictor);
    log_run(err, hash, p.selection.split_seed, "predictor");
    const auto scores = predict_scores(p, load_embeddings(a.features));
    write_text(a.out, [&](std::ostream& s) {
        s << "face_id,prediction\n";
        for (const auto& [id, v] : scores) s << id << ',' << text::format_shortest(v) << '\n';
    });
    Provenance prov = base_provenance(hash, p.selection.split_seed, "predictor");
    prov.add("hash_of", "predictor file");
    prov.add("attribute", p.attribute);
    prov.add("feature_source", p.feature_source);
    write_provenance_sidecar(prov, a.out);
    out << "wrote " << scores.size() << " prediction(s) to " << a.out << '\n';
    return kExitOk;
}

struct AttributionArgs {
    std::string predictor;
    std::string activations;
    std::size_t k = 9;
    std::size_t channels = 0;
    std::string out;
};

int cmd_attribution(const AttributionArgs& a, std::ostream& out, std::ostream& err) {
    const std::uint64_t hash = fnv1a64(read_bytes(a.predictor));
    const TrainedPredictor p = load_predictor(a.predictor);
    log_run(err, hash, p.selection.split_seed, "predictor");
    const EmbeddingMatrix acts = load_embeddings(a.activations);
    Eigen::MatrixXd x = acts.data().cast<double>();
    if (a.channels > 0) x = spatial_average(x, a.channels);
    const Eigen::VectorXd w = p.effective_weights();
    if (static_cast<std::size_t>(x.cols()) != static_cast<std::size_t>(w.size())) {
        throw Error(ErrorKind::Shape, "activations have " + std::to_string(x.cols()) + " units but the predictor has " +
                                          std::to_string(w.size()) + " inputs");
    }
    if (a.k > static_cast<std::size_t>(w.size())) {
        throw UsageError("--k " + std::to_string(a.k) + " exceeds the " + std::to_string(w.size()) + " units");
    }
    const AttributionRanking ranking = attribution_top_k(x, w, a.k);
    write_text(a.out, [&](std::ostream& s) {
        s << "rank,unit,score\n";
        const auto top = ranking.top();
        for (std::size_t i = 0; i < top.size(); ++i) {
            s << i + 1 << ',' << top[i].unit << ',' << text::format_shortest(top[i].score) << '\n';
        }
    });
    Provenance prov = base_provenance(hash, p.selection.split_seed, "predictor");
    prov.add("hash_of", "predictor file");
    prov.add("attribute", p.attribute);
    prov.add("k", std::to_string(a.k));
    prov.add("channels", a.channels ? std::to_string(a.channels) : "none");
    write_provenance_sidecar(prov, a.out);
    out << "wrote top " << a.k << " unit(s) to " << a.out << '\n';
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const std::optional<std::string>& seed_env) {
    CLI::App app{"Social-attribute prediction from face features", "facet"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    GeomArgs geom;
    auto* g = app.add_subcommand("geom", "Compute geometric features from landmarks");
    g->add_option("--landmarks", geom.landmarks, "Landmarks CSV")->required()->check(CLI::ExistingFile);
    g->add_option("--images-dir", geom.images_dir, "Directory of <face_id>.ppm images")->check(CLI::ExistingDirectory);
    g->add_option("--geom-config", geom.geom_config, "Geometric feature config")->check(CLI::ExistingFile);
    g->add_option("--out", geom.out, "Output FEMB file")->required();

    ConsistencyArgs cons;
    auto* c = app.add_subcommand("consistency", "Split-half human consistency (Baseline I)");
    c->add_option("--ratings", cons.ratings, "Ratings CSV")->required()->check(CLI::ExistingFile);
    auto* attr = c->add_option("--attribute", cons.attribute, "One attribute");
    auto* all = c->add_flag("--all", cons.all, "Every attribute in the ratings file");
    attr->excludes(all);
    c->add_option("--repeats", cons.repeats, "Number of random rater splits")->capture_default_str();
    c->add_option("--seed", cons.seed, "Master seed (overrides FACET_SEED)");
    c->add_option("--out", cons.out, "Output CSV")->required();

    ExperimentArgs train;
    auto* t = app.add_subcommand("train", "Train one predictor per attribute and feature source");
    t->add_option("--config", train.config, "Experiment config")->required();
    t->add_option("--out-dir", train.out_dir, "Output directory")->required();
    t->add_option("--jobs", train.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);

    ExperimentArgs eval;
    auto* e = app.add_subcommand("eval", "Repeated-split evaluation with report and heatmaps");
    e->add_option("--config", eval.config, "Experiment config")->required();
    e->add_option("--out-dir", eval.out_dir, "Output directory")->required();
    e->add_option("--jobs", eval.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);

    PredictArgs pred;
    auto* p = app.add_subcommand("predict", "Apply a saved predictor to a feature file");
    p->add_option("--predictor", pred.predictor, "Predictor file")->required()->check(CLI::ExistingFile);
    p->add_option("--features", pred.features, "FEMB feature file")->required()->check(CLI::ExistingFile);
    p->add_option("--out", pred.out, "Output CSV")->required();

    AttributionArgs attrib;
    auto* at = app.add_subcommand("attribution", "Rank source units by contribution to a predictor");
    at->add_option("--predictor", attrib.predictor, "Predictor file")->required()->check(CLI::ExistingFile);
    at->add_option("--activations", attrib.activations, "FEMB activations")->required()->check(CLI::ExistingFile);
    at->add_option("--k", attrib.k, "Number of units to report")->capture_default_str();
    at->add_option("--channels", attrib.channels, "Spatially average channel-major maps with this many channels");
    at->add_option("--out", attrib.out, "Output CSV")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& ex) {
        const int code = app.exit(ex, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (g->parsed()) return cmd_geom(geom, out, err);
        if (c->parsed()) return cmd_consistency(cons, seed_env, out, err);
        if (t->parsed()) return cmd_train(train, seed_env, out, err);
        if (e->parsed()) return cmd_eval(eval, seed_env, out, err);
        if (p->parsed()) return cmd_predict(pred, out, err);
        if (at->parsed()) return cmd_attribution(attrib, out, err);
    } catch (const UsageError& ex) {
        err << "facet: error: " << ex.what() << '\n';
        return kExitUsage;
    } catch (const Error& ex) {
        err << "facet: error: " << ex.what() << '\n';
        return ex.kind() == ErrorKind::Config || ex.kind() == ErrorKind::Usage ? kExitUsage : kExitData;
    } catch (const std::exception& ex) {
        err << "facet: error: " << ex.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

}  // namespace facet::cli
