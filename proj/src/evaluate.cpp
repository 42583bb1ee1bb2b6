#include <algorithm>

#include "facet/error.hpp"
#include "facet/pipeline.hpp"
#include "facet/rng.hpp"
#include "parallel.hpp"

namespace facet {

namespace {

constexpr std::uint64_t kSplitStream = 0x73706c6974ULL;     // "split"
constexpr std::uint64_t kConsistencyStream = 0x68756d616eULL;  // "human"
constexpr std::uint64_t kHeatmapStream = 0x686d6170ULL;        // "hmap"

std::vector<double> values_at(const std::map<FaceId, double>& scores, std::span<const FaceId> faces) {
    std::vector<double> out;
    out.reserve(faces.size());
    for (const auto& f : faces) out.push_back(scores.at(f));
    return out;
}

struct AttributeOutcome {
    HumanResult human;
    std::vector<CellResult> cells;
};

AttributeOutcome evaluate_attribute(const ExperimentConfig& config, const ExperimentData& data,
                                    const AttributeName& attribute) {
    AttributeOutcome out;
    out.human.attribute = attribute;
    try {
        out.human.consistency = split_half_consistency(data.ratings, attribute, config.repeats,
                                                       consistency_seed(config.seed, attribute));
        out.human.summary = summarize(out.human.consistency.per_repeat);
    } catch (const Error& e) {
        out.human.failed = true;
        out.human.error = e.what();
    }

    for (const auto& source : data.sources) {
        CellResult cell;
        cell.attribute = attribute;
        cell.source = source.layer_name();
        out.cells.push_back(std::move(cell));
    }
    const auto fail_all = [&out](const std::string& message) {
        for (auto& cell : out.cells) {
            if (!cell.failed) {
                cell.failed = true;
                cell.error = message;
            }
        }
    };

    std::map<FaceId, double> targets;
    std::vector<FaceId> faces;
    try {
        targets = average_ratings(data.ratings, attribute);
        faces = common_faces(targets, data.sources);
    } catch (const Error& e) {
        fail_all(e.what());
        return out;
    }

    for (std::size_t rep = 0; rep < config.repeats; ++rep) {
        const SplitSpec spec{split_seed(config.seed, attribute), config.fractions, rep};
        Split split;
        try {
            split = make_split(faces, spec);
        } catch (const Error& e) {
            fail_all(e.what());
            break;
        }
        const auto y_test = values_at(targets, split.test);
        for (std::size_t s = 0; s < data.sources.size(); ++s) {
            CellResult& cell = out.cells[s];
            if (cell.failed) continue;
            try {
                const TrainedPredictor p =
                    train_one(data.sources[s], targets, attribute, config.selection, split, spec);
                const auto predicted = values_at(predict_scores(p, data.sources[s], split.test), split.test);
                cell.test_pearson.push_back(pearson(predicted, y_test).value);
                cell.out_of_range.push_back(out_of_range_fraction(predicted));
            } catch (const Error& e) {
                cell.failed = true;
                cell.error = e.what();
            }
        }
    }
    for (auto& cell : out.cells) {
        if (cell.failed) {
            cell.test_pearson.clear();
            cell.out_of_range.clear();
        } else {
            cell.summary = summarize(cell.test_pearson);
        }
    }
    return out;
}

std::optional<HeatmapComparison> compare_heatmaps(const ExperimentConfig& config, const ExperimentData& data,
                                                  const EmbeddingMatrix& model, std::size_t jobs, std::string& note) {
    std::vector<AttributeName> attributes;
    std::vector<std::map<FaceId, double>> targets;
    for (const auto& a : config.attributes) {
        try {
            targets.push_back(average_ratings(data.ratings, a));
            attributes.push_back(a);
        } catch (const Error&) {
            note += "dropped '" + a + "' (no ratings); ";
        }
    }
    if (attributes.size() < 2) {
        note += "fewer than 2 attributes available";
        return std::nullopt;
    }
    std::vector<FaceId> faces = common_faces(targets.front(), std::span<const EmbeddingMatrix>(&model, 1));
    for (std::size_t a = 1; a < targets.size(); ++a) {
        std::erase_if(faces, [&](const FaceId& f) { return !targets[a].contains(f); });
    }
    Split split;
    try {
        split = make_split(faces, {heatmap_seed(config.seed), config.fractions, 0});
    } catch (const Error& e) {
        note += e.what();
        return std::nullopt;
    }
    if (split.test.size() < 3) {
        note += "fewer than 3 held-out faces";
        return std::nullopt;
    }

    std::vector<std::optional<std::vector<double>>> predictions(attributes.size());
    std::vector<std::string> errors(attributes.size());
    detail::parallel_for(attributes.size(), jobs, [&](std::size_t a) {
        try {
            const TrainedPredictor p = train_one(model, targets[a], attributes[a], config.selection, split);
            predictions[a] = values_at(predict_scores(p, model, split.test), split.test);
        } catch (const Error& e) {
            errors[a] = e.what();
        }
    });

    AttributeScores human;
    AttributeScores predicted;
    for (std::size_t a = 0; a < attributes.size(); ++a) {
        if (!predictions[a]) {
            note += "dropped '" + attributes[a] + "' (" + errors[a] + "); ";
            continue;
        }
        human.emplace_back(attributes[a], values_at(targets[a], split.test));
        predicted.emplace_back(attributes[a], std::move(*predictions[a]));
    }
    if (human.size() < 2) {
        note += "fewer than 2 attributes could be modelled";
        return std::nullopt;
    }
    HeatmapComparison cmp;
    cmp.faces = split.test.size();
    cmp.human = attribute_heatmap(human);
    cmp.model = attribute_heatmap(predicted);
    if (human.size() >= 3) {
        try {
            cmp.similarity = heatmap_similarity(cmp.human, cmp.model);
        } catch (const Error& e) {
            note += std::string("similarity undefined: ") + e.what();
        }
    }
    return cmp;
}

}  // namespace

std::uint64_t split_seed(std::uint64_t master, const AttributeName& attribute) {
    return combine_seed(combine_seed(master, kSplitStream), attribute);
}

std::uint64_t consistency_seed(std::uint64_t master, const AttributeName& attribute) {
    return combine_seed(combine_seed(master, kConsistencyStream), attribute);
}

std::uint64_t heatmap_seed(std::uint64_t master) { return combine_seed(master, kHeatmapStream); }

std::vector<FaceId> common_faces(const std::map<FaceId, double>& targets, std::span<const EmbeddingMatrix> sources) {
    std::vector<FaceId> faces;
    for (const auto& [id, _] : targets) {
        const bool everywhere = std::all_of(sources.begin(), sources.end(),
                                            [&id](const EmbeddingMatrix& m) { return m.row_of(id).has_value(); });
        if (everywhere) faces.push_back(id);
    }
    return faces;
}

const CellResult* EvalReport::cell(const AttributeName& attribute, const std::string& source) const {
    const auto it = std::find_if(cells.begin(), cells.end(), [&](const CellResult& c) {
        return c.attribute == attribute && c.source == source;
    });
    return it == cells.end() ? nullptr : &*it;
}

const HumanResult* EvalReport::human_for(const AttributeName& attribute) const {
    const auto it = std::find_if(human.begin(), human.end(), [&](const HumanResult& h) { return h.attribute == attribute; });
    return it == human.end() ? nullptr : &*it;
}

EvalReport evaluate_repeats(const ExperimentConfig& config, const ExperimentData& data, std::size_t jobs) {
    if (config.repeats == 0) throw Error(ErrorKind::Config, "repeats must be positive");
    validate_fractions(config.fractions);
    config.selection.lambdas.validate();

    EvalReport report;
    report.attributes = config.attributes;
    report.repeats = config.repeats;
    for (const auto& s : data.sources) {
        report.sources.push_back(s.layer_name());
        if (s.layer_name() == kGeomLayerName) {
            if (!report.baseline_source) report.baseline_source = s.layer_name();
        } else if (!report.model_source) {
            report.model_source = s.layer_name();
        }
    }

    std::vector<AttributeOutcome> outcomes(config.attributes.size());
    detail::parallel_for(config.attributes.size(), jobs, [&](std::size_t a) {
        outcomes[a] = evaluate_attribute(config, data, config.attributes[a]);
    });
    for (auto& o : outcomes) {
        report.human.push_back(std::move(o.human));
        for (auto& c : o.cells) report.cells.push_back(std::move(c));
    }

    if (report.model_source) {
        const auto it = std::find_if(data.sources.begin(), data.sources.end(),
                                     [&](const EmbeddingMatrix& m) { return m.layer_name() == *report.model_source; });
        report.heatmaps = compare_heatmaps(config, data, *it, jobs, report.heatmap_note);
    } else {
        report.heatmap_note = "no model feature source";
    }
    return report;
}

EvalReport evaluate_repeats(const ExperimentConfig& config, std::size_t jobs) {
    return evaluate_repeats(config, load_experiment_data(config), jobs);
}

std::vector<TrainedPredictor> train_final(const ExperimentConfig& config, const ExperimentData& data,
                                          std::vector<std::string>& failures, std::size_t jobs) {
    struct Slot {
        std::vector<TrainedPredictor> predictors;
        std::vector<std::string> failures;
    };
    std::vector<Slot> slots(config.attributes.size());
    detail::parallel_for(config.attributes.size(), jobs, [&](std::size_t a) {
        const AttributeName& attribute = config.attributes[a];
        Slot& slot = slots[a];
        try {
            const auto targets = average_ratings(data.ratings, attribute);
            const auto faces = common_faces(targets, data.sources);
            const SplitSpec spec{heatmap_seed(config.seed), config.fractions, 0};
            const Split split = make_split(faces, spec);
            for (const auto& source : data.sources) {
                try {
                    slot.predictors.push_back(train_one(source, targets, attribute, config.selection, split, spec));
                } catch (const Error& e) {
                    slot.failures.push_back(attribute + "," + source.layer_name() + "," + e.what());
                }
            }
        } catch (const Error& e) {
            slot.failures.push_back(attribute + ",*," + e.what());
        }
    });
    std::vector<TrainedPredictor> out;
    for (auto& slot : slots) {
        for (auto& p : slot.predictors) out.push_back(std::move(p));
        for (auto& f : slot.failures) failures.push_back(std::move(f));
    }
    return out;
}

}  // namespace facet
