#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "facet/error.hpp"
#include "facet/report.hpp"
#include "facet/text.hpp"

namespace facet {

using text::format_fixed;

namespace {

constexpr int kDigits = 6;

std::string number_or_na(const std::optional<double>& v) { return v ? format_fixed(*v, kDigits) : "NA"; }

void summary_row(std::ostream& out, const std::string& attribute, const std::string& source, const char* metric,
                 const Summary* s) {
    out << csv_field(attribute) << ',' << csv_field(source) << ',' << metric << ',';
    if (s == nullptr) {
        out << "NA,NA,0\n";
    } else {
        out << format_fixed(s->mean, kDigits) << ',' << format_fixed(s->stddev, kDigits) << ',' << s->count << '\n';
    }
}

std::optional<double> cell_mean(const EvalReport& report, const AttributeName& attribute,
                                const std::optional<std::string>& source) {
    if (!source) return std::nullopt;
    const CellResult* c = report.cell(attribute, *source);
    if (c == nullptr || c->failed) return std::nullopt;
    return c->summary.mean;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (const char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << bytes;
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

template <class Fn>
std::string render(Fn&& fn) {
    std::ostringstream s;
    fn(s);
    return s.str();
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ',';
        out += items[i];
    }
    return out;
}

std::string join(const std::vector<double>& values) {
    std::vector<std::string> items;
    for (const double v : values) items.push_back(text::format_shortest(v));
    return join(items);
}

}  // namespace

void Provenance::add(std::string key, std::string value) { entries.emplace_back(std::move(key), std::move(value)); }

Provenance base_provenance(std::uint64_t config_hash, std::uint64_t seed, const std::string& seed_source) {
    Provenance p;
    p.add("tool_version", kToolVersion);
    p.add("config_hash", text::hex64(config_hash));
    p.add("seed", std::to_string(seed));
    p.add("seed_source", seed_source);
    return p;
}

Provenance experiment_provenance(const ExperimentConfig& config, const GeomConfig& geom) {
    Provenance p = base_provenance(config.config_hash, config.seed, config.seed_source);
    p.add("repeats", std::to_string(config.repeats));
    p.add("split_fractions", join(std::vector<double>{config.fractions.train, config.fractions.validation,
                                                      config.fractions.test}));
    std::vector<std::string> dims;
    for (const auto d : config.selection.pca_dims) dims.push_back(std::to_string(d));
    p.add("pca_dims", join(dims));
    p.add("lambda_grid", join(config.selection.lambdas.values));
    p.add("standardize", config.selection.standardize ? "true" : "false");
    p.add("attributes", join(config.attributes));
    if (config.landmarks) {
        p.add("geom_version", geom.version);
        p.add("canny_low", text::format_shortest(geom.canny.low));
        p.add("canny_high", text::format_shortest(geom.canny.high));
        p.add("geom_windows", config.images_dir ? "enabled" : "disabled (no images_dir)");
    }
    return p;
}

void write_provenance(const Provenance& provenance, std::ostream& out) {
    for (const auto& [k, v] : provenance.entries) out << k << ": " << v << '\n';
}

void write_provenance_sidecar(const Provenance& provenance, const std::filesystem::path& path) {
    write_file(path.string() + ".provenance.txt", render([&](std::ostream& s) { write_provenance(provenance, s); }));
}

std::string csv_field(const std::string& value) {
    if (value.find_first_of(",\"\n\r") == std::string::npos) return value;
    std::string out = "\"";
    for (const char c : value) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_report_csv(const EvalReport& report, std::ostream& out) {
    out << kReportHeader << '\n';
    for (const auto& attribute : report.attributes) {
        const HumanResult* h = report.human_for(attribute);
        summary_row(out, attribute, "human", "split_half_pearson", h && !h->failed ? &h->summary : nullptr);
        for (const auto& source : report.sources) {
            const CellResult* c = report.cell(attribute, source);
            const bool ok = c != nullptr && !c->failed;
            Summary range;
            if (ok) range = summarize(c->out_of_range);
            summary_row(out, attribute, source, "test_pearson", ok ? &c->summary : nullptr);
            summary_row(out, attribute, source, "test_out_of_range_fraction", ok ? &range : nullptr);
        }
    }
}

void write_table1_csv(const EvalReport& report, std::ostream& out) {
    out << "attribute,baseline1,baseline2,model\n";
    for (const auto& attribute : report.attributes) {
        const HumanResult* h = report.human_for(attribute);
        std::optional<double> b1;
        if (h != nullptr && !h->failed) b1 = h->summary.mean;
        out << csv_field(attribute) << ',' << number_or_na(b1) << ','
            << number_or_na(cell_mean(report, attribute, report.baseline_source)) << ','
            << number_or_na(cell_mean(report, attribute, report.model_source)) << '\n';
    }
}

void write_failures_csv(const EvalReport& report, std::ostream& out) {
    out << "attribute,source,error\n";
    for (const auto& h : report.human) {
        if (h.failed) out << csv_field(h.attribute) << ",human," << csv_field(h.error) << '\n';
    }
    for (const auto& c : report.cells) {
        if (c.failed) out << csv_field(c.attribute) << ',' << csv_field(c.source) << ',' << csv_field(c.error) << '\n';
    }
}

void write_consistency_csv(const std::vector<ConsistencyResult>& results, std::ostream& out) {
    out << kReportHeader << '\n';
    for (const auto& r : results) {
        const Summary s = summarize(r.per_repeat);
        summary_row(out, r.attribute, "human", "split_half_pearson", &s);
    }
}

void write_heatmap_csv(const AttributeHeatmap& heatmap, std::ostream& out) {
    out << "attribute";
    for (const auto& a : heatmap.attributes) out << ',' << csv_field(a);
    out << '\n';
    for (Eigen::Index i = 0; i < heatmap.matrix.rows(); ++i) {
        out << csv_field(heatmap.attributes[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < heatmap.matrix.cols(); ++j) out << ',' << format_fixed(heatmap.matrix(i, j), kDigits);
        out << '\n';
    }
}

std::string diverging_color(double value) {
    constexpr int negative[3] = {0x21, 0x66, 0xac};
    constexpr int positive[3] = {0xb2, 0x18, 0x2b};
    const double v = std::isnan(value) ? 0.0 : std::clamp(value, -1.0, 1.0);
    const int* end = v < 0 ? negative : positive;
    const double t = std::abs(v);
    char buf[8];
    int rgb[3];
    for (int c = 0; c < 3; ++c) rgb[c] = static_cast<int>(std::lround(255.0 + t * (end[c] - 255.0)));
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
    return buf;
}

void write_heatmap_svg(const AttributeHeatmap& heatmap, const std::string& title, const Provenance& provenance,
                       std::ostream& out) {
    constexpr int cell = 20;
    constexpr int char_width = 7;
    constexpr int legend_width = 16;
    constexpr int legend_steps = 20;
    const int m = static_cast<int>(heatmap.attributes.size());
    std::size_t longest = 0;
    for (const auto& a : heatmap.attributes) longest = std::max(longest, a.size());
    const int label = static_cast<int>(longest) * char_width + 10;
    const int left = label;
    const int top = label + 30;
    const int grid = m * cell;
    const int title_width = static_cast<int>(title.size()) * 8 + 8;
    const int width = std::max(left + grid + 30 + legend_width + 50, title_width);
    const int height = top + std::max(grid, 200) + 20;

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"monospace\" font-size=\"11\">\n";
    out << "<title>" << xml_escape(title) << "</title>\n<desc>";
    for (const auto& [k, v] : provenance.entries) out << xml_escape(k) << '=' << xml_escape(v) << ';';
    out << "</desc>\n";
    out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"#ffffff\"/>\n";
    out << "<text x=\"4\" y=\"16\" font-size=\"13\">" << xml_escape(title) << "</text>\n";

    for (int i = 0; i < m; ++i) {
        const std::string name = xml_escape(heatmap.attributes[static_cast<std::size_t>(i)]);
        const int cy = top + i * cell + cell / 2 + 4;
        const int cx = left + i * cell + cell / 2 + 4;
        out << "<text x=\"" << left - 4 << "\" y=\"" << cy << "\" text-anchor=\"end\">" << name << "</text>\n";
        out << "<text transform=\"translate(" << cx << ',' << top - 4 << ") rotate(-90)\">" << name << "</text>\n";
    }
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const double v = heatmap.matrix(i, j);
            out << "<rect x=\"" << left + j * cell << "\" y=\"" << top + i * cell << "\" width=\"" << cell
                << "\" height=\"" << cell << "\" fill=\"" << diverging_color(v) << "\" stroke=\"#cccccc\"><title>"
                << format_fixed(v, 3) << "</title></rect>\n";
        }
    }

    const int lx = left + grid + 30;
    const int step = 200 / legend_steps;
    for (int s = 0; s < legend_steps; ++s) {
        const double v = 1.0 - 2.0 * (s + 0.5) / legend_steps;
        out << "<rect x=\"" << lx << "\" y=\"" << top + s * step << "\" width=\"" << legend_width << "\" height=\""
            << step << "\" fill=\"" << diverging_color(v) << "\"/>\n";
    }
    out << "<text x=\"" << lx + legend_width + 4 << "\" y=\"" << top + 8 << "\">+1</text>\n";
    out << "<text x=\"" << lx + legend_width + 4 << "\" y=\"" << top + 104 << "\">0</text>\n";
    out << "<text x=\"" << lx + legend_width + 4 << "\" y=\"" << top + 200 << "\">-1</text>\n";
    out << "</svg>\n";
}

std::vector<std::string> write_eval_outputs(const EvalReport& report, const Provenance& provenance,
                                            const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> written;
    const auto emit = [&](const std::string& name, const std::string& bytes) {
        write_file(dir / name, bytes);
        written.push_back(name);
    };
    emit("report.csv", render([&](std::ostream& s) { write_report_csv(report, s); }));
    emit("table1.csv", render([&](std::ostream& s) { write_table1_csv(report, s); }));
    emit("failures.csv", render([&](std::ostream& s) { write_failures_csv(report, s); }));
    if (report.heatmaps) {
        const HeatmapComparison& h = *report.heatmaps;
        emit("heatmap_human.csv", render([&](std::ostream& s) { write_heatmap_csv(h.human, s); }));
        emit("heatmap_model.csv", render([&](std::ostream& s) { write_heatmap_csv(h.model, s); }));
        emit("heatmap_human.svg", render([&](std::ostream& s) {
                 write_heatmap_svg(h.human, "Spearman correlation between attributes (human ratings)", provenance, s);
             }));
        emit("heatmap_model.svg", render([&](std::ostream& s) {
                 write_heatmap_svg(h.model, "Spearman correlation between attributes (model predictions)",
                                   provenance, s);
             }));
        emit("heatmap_similarity.csv", render([&](std::ostream& s) {
                 s << "faces,attributes,similarity\n"
                   << h.faces << ',' << h.human.attributes.size() << ',' << number_or_na(h.similarity) << '\n';
             }));
    }
    Provenance full = provenance;
    full.add("heatmap", report.heatmaps ? "written" : "skipped: " + report.heatmap_note);
    if (report.heatmaps && !report.heatmap_note.empty()) full.add("heatmap_note", report.heatmap_note);
    emit("provenance.txt", render([&](std::ostream& s) { write_provenance(full, s); }));
    return written;
}

}  // namespace facet
