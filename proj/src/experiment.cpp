#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "facet/error.hpp"
#include "facet/kvconfig.hpp"
#include "facet/pipeline.hpp"
#include "facet/rng.hpp"
#include "facet/text.hpp"

namespace facet {

namespace {

[[noreturn]] void bad_value(const KvConfig::Entry& e, const std::string& what) {
    throw Error(ErrorKind::Config, "config key '" + e.key + "' (line " + std::to_string(e.line) + "): " + what);
}

std::vector<std::string> list_value(const KvConfig::Entry& e) {
    std::vector<std::string> out;
    for (const auto part : text::split(e.value, ',')) {
        const auto item = text::trim(part);
        if (item.empty()) bad_value(e, "empty list item");
        out.emplace_back(item);
    }
    return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
    const std::filesystem::path p(value);
    return p.is_absolute() ? p : base / p;
}

LambdaGrid lambda_value(const KvConfig::Entry& e) {
    const std::string_view v = e.value;
    constexpr std::string_view prefix = "logspace(";
    if (v.substr(0, prefix.size()) == prefix && v.back() == ')') {
        const auto args = text::split(v.substr(prefix.size(), v.size() - prefix.size() - 1), ',');
        if (args.size() != 3) bad_value(e, "logspace takes (lo, hi, count)");
        const auto lo = text::parse_double(text::trim(args[0]));
        const auto hi = text::parse_double(text::trim(args[1]));
        const auto count = text::parse_uint(text::trim(args[2]));
        if (!lo || !hi || !count) bad_value(e, "bad logspace arguments");
        try {
            return LambdaGrid::log_spaced(*lo, *hi, static_cast<std::size_t>(*count));
        } catch (const Error& err) {
            bad_value(e, err.what());
        }
    }
    LambdaGrid grid;
    for (const auto& item : list_value(e)) {
        const auto x = text::parse_double(item);
        if (!x) bad_value(e, "'" + item + "' is not a number");
        grid.values.push_back(*x);
    }
    try {
        grid.validate();
    } catch (const Error& err) {
        bad_value(e, err.what());
    }
    return grid;
}

}  // namespace

const std::vector<std::string>& experiment_config_keys() {
    static const std::vector<std::string> keys{
        "ratings", "landmarks",   "images_dir",      "geom_config", "embeddings",  "attributes",
        "pca_dims", "lambda_grid", "repeats", "split_fractions", "seed", "standardize",
    };
    return keys;
}

ExperimentConfig parse_experiment_config(const KvConfig& kv, const std::filesystem::path& base_dir) {
    kv.reject_unknown(experiment_config_keys());
    ExperimentConfig config;
    const auto require = [&kv](const std::string& key) -> const KvConfig::Entry& {
        const auto* e = kv.find(key);
        if (e == nullptr) throw Error(ErrorKind::Config, "missing required config key '" + key + "'");
        return *e;
    };

    config.ratings = resolve(base_dir, require("ratings").value);
    {
        const auto& e = require("seed");
        const auto seed = text::parse_uint(e.value);
        if (!seed) bad_value(e, "seed must be an unsigned 64-bit integer");
        config.seed = *seed;
    }
    if (const auto* e = kv.find("landmarks")) config.landmarks = resolve(base_dir, e->value);
    if (const auto* e = kv.find("images_dir")) config.images_dir = resolve(base_dir, e->value);
    if (const auto* e = kv.find("geom_config")) config.geom_config = resolve(base_dir, e->value);
    if (const auto* e = kv.find("embeddings")) {
        for (const auto& item : list_value(*e)) config.embeddings.push_back(resolve(base_dir, item));
    }
    if (config.embeddings.empty() && !config.landmarks) {
        throw Error(ErrorKind::Config, "missing required config key 'embeddings' (or 'landmarks')");
    }
    if (const auto* e = kv.find("attributes")) {
        config.attributes = list_value(*e);
        std::set<std::string> seen;
        for (const auto& a : config.attributes) {
            if (!seen.insert(a).second) bad_value(*e, "duplicate attribute '" + a + "'");
        }
    }
    if (const auto* e = kv.find("pca_dims")) {
        config.selection.pca_dims.clear();
        for (const auto& item : list_value(*e)) {
            const auto v = text::parse_uint(item);
            if (!v || *v == 0) bad_value(*e, "'" + item + "' is not a positive integer");
            config.selection.pca_dims.push_back(static_cast<std::size_t>(*v));
        }
    }
    if (const auto* e = kv.find("lambda_grid")) config.selection.lambdas = lambda_value(*e);
    if (const auto* e = kv.find("repeats")) {
        const auto v = text::parse_uint(e->value);
        if (!v || *v == 0) bad_value(*e, "repeats must be a positive integer");
        config.repeats = static_cast<std::size_t>(*v);
    }
    if (const auto* e = kv.find("split_fractions")) {
        const auto items = list_value(*e);
        if (items.size() != 3) bad_value(*e, "expected train,validation,test");
        double f[3];
        for (std::size_t i = 0; i < 3; ++i) {
            const auto v = text::parse_double(items[i]);
            if (!v) bad_value(*e, "'" + items[i] + "' is not a number");
            f[i] = *v;
        }
        config.fractions = {f[0], f[1], f[2]};
        try {
            validate_fractions(config.fractions);
        } catch (const Error& err) {
            bad_value(*e, err.what());
        }
    }
    if (const auto* e = kv.find("standardize")) {
        if (e->value == "true") {
            config.selection.standardize = true;
        } else if (e->value == "false") {
            config.selection.standardize = false;
        } else {
            bad_value(*e, "expected true or false");
        }
    }
    return config;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Config, "cannot open config file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string bytes = buffer.str();
    ExperimentConfig config = parse_experiment_config(KvConfig::parse_string(bytes), path.parent_path());
    config.config_hash = fnv1a64(bytes);

    const auto must_exist = [](const std::filesystem::path& p, const char* key) {
        if (!std::filesystem::exists(p)) {
            throw Error(ErrorKind::Config, std::string("config key '") + key + "': file not found: " + p.string());
        }
    };
    must_exist(config.ratings, "ratings");
    for (const auto& p : config.embeddings) must_exist(p, "embeddings");
    if (config.landmarks) must_exist(*config.landmarks, "landmarks");
    if (config.images_dir) must_exist(*config.images_dir, "images_dir");
    if (config.geom_config) must_exist(*config.geom_config, "geom_config");
    return config;
}

void apply_seed_override(ExperimentConfig& config, const char* env_value) {
    if (env_value == nullptr) return;
    const auto seed = text::parse_uint(env_value);
    if (!seed) throw Error(ErrorKind::Config, std::string("FACET_SEED '") + env_value + "' is not an unsigned integer");
    config.seed = *seed;
    config.seed_source = "FACET_SEED";
}

// ---------------------------------------------------------------------------

GeomExtraction extract_geom_embeddings(const LandmarkMap& landmarks,
                                       const std::optional<std::filesystem::path>& images_dir,
                                       const GeomConfig& config) {
    GeomExtraction out;
    out.windows_used = images_dir.has_value() && !config.windows.empty();
    std::vector<FaceId> ids;
    std::vector<std::vector<double>> rows;
    for (const auto& [id, set] : landmarks) {
        try {
            std::optional<ImagePatch> image;
            if (out.windows_used) {
                const auto path = *images_dir / (id + ".ppm");
                if (!std::filesystem::exists(path)) {
                    out.excluded.emplace_back(id, "missing image " + path.string());
                    continue;
                }
                image = load_ppm(path);
            }
            GeomFeatureVector v =
                assemble_geom_features(set, image ? &*image : nullptr, config, out.windows_used);
            for (const auto& flag : v.flags) out.flags.push_back(id + ":" + flag);
            ids.push_back(id);
            rows.push_back(std::move(v.values));
        } catch (const Error& e) {
            out.excluded.emplace_back(id, e.what());
        }
    }
    if (rows.empty()) throw Error(ErrorKind::Data, "no face produced geometric features");
    FloatMatrix data(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = static_cast<float>(rows[i][j]);
        }
    }
    out.features = EmbeddingMatrix(kGeomLayerName, std::move(ids), std::move(data));
    return out;
}

ExperimentData load_experiment_data(const ExperimentConfig& config) {
    ExperimentData data;
    data.ratings = load_ratings(config.ratings);
    data.geom = config.geom_config ? load_geom_config(*config.geom_config) : default_geom_config();
    if (config.landmarks) {
        GeomExtraction geom = extract_geom_embeddings(load_landmarks(*config.landmarks), config.images_dir, data.geom);
        data.geom_excluded = std::move(geom.excluded);
        data.sources.push_back(std::move(geom.features));
    }
    for (const auto& path : config.embeddings) data.sources.push_back(load_embeddings(path));
    std::set<std::string> names;
    for (const auto& s : data.sources) {
        if (!names.insert(s.layer_name()).second) {
            throw Error(ErrorKind::Config, "two feature sources share the layer name '" + s.layer_name() + "'");
        }
    }
    return data;
}

}  // namespace facet
