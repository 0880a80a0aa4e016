#include "fcpca/dataset_io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace fcpca {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::string> split_csv_line(std::string line) {
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return cells;
}

double parse_cell(const std::string& cell, const fs::path& file, std::size_t line_no) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw std::invalid_argument("non-numeric cell '" + cell + "' in " + file.string() +
                                    " line " + std::to_string(line_no));
    }
    return value;
}

Series read_series_csv(const fs::path& file, const std::string& id) {
    std::ifstream in(file);
    if (!in) {
        throw std::invalid_argument("cannot open series file " + file.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("series file " + file.string() + " is empty");
    }
    const std::size_t columns = split_csv_line(line).size();
    if (columns == 0) {
        throw std::invalid_argument("series file " + file.string() + " has an empty header");
    }

    std::vector<double> values;
    std::size_t rows = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != columns) {
            throw std::invalid_argument("ragged row in " + file.string() + " line " +
                                        std::to_string(line_no) + ": got " +
                                        std::to_string(cells.size()) + " cells, expected " +
                                        std::to_string(columns));
        }
        for (const std::string& cell : cells) {
            values.push_back(parse_cell(cell, file, line_no));
        }
        ++rows;
    }
    if (rows == 0) {
        throw std::invalid_argument("series file " + file.string() + " has no data rows");
    }

    Series out;
    out.id = id;
    out.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(columns));
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns; ++c) {
            out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                values[r * columns + c];
        }
    }
    return out;
}

void write_series_csv(const fs::path& file, const Series& series) {
    std::ofstream out(file);
    if (!out) {
        throw std::runtime_error("cannot write " + file.string());
    }
    for (Eigen::Index c = 0; c < series.values.cols(); ++c) {
        out << (c ? "," : "") << "v" << c + 1;
    }
    out << "\n";
    char buf[40];
    for (Eigen::Index r = 0; r < series.values.rows(); ++r) {
        for (Eigen::Index c = 0; c < series.values.cols(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", series.values(r, c));
            out << (c ? "," : "") << buf;
        }
        out << "\n";
    }
}

struct ManifestEntry {
    std::string id;
    fs::path path;
    std::optional<std::string> label;
};

std::vector<ManifestEntry> read_manifest(const fs::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) {
        throw std::invalid_argument("cannot open manifest " + manifest_path.string());
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw std::invalid_argument("manifest " + manifest_path.string() +
                                    " is not valid JSON: " + e.what());
    }
    if (!doc.contains("series") || !doc["series"].is_array()) {
        throw std::invalid_argument("manifest " + manifest_path.string() +
                                    " lacks a 'series' array");
    }
    std::vector<ManifestEntry> entries;
    const fs::path base = manifest_path.parent_path();
    for (const auto& item : doc["series"]) {
        ManifestEntry entry;
        entry.id = item.at("id").get<std::string>();
        entry.path = base / item.at("path").get<std::string>();
        if (item.contains("label") && !item["label"].is_null()) {
            entry.label = item["label"].get<std::string>();
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

}  // namespace

LoadedDataset load_dataset(const fs::path& path) {
    std::vector<ManifestEntry> entries;
    fs::path labels_path;

    if (fs::is_directory(path)) {
        const fs::path manifest = path / "manifest.json";
        if (fs::exists(manifest)) {
            entries = read_manifest(manifest);
        } else {
            std::vector<fs::path> files;
            for (const auto& item : fs::directory_iterator(path)) {
                if (!item.is_regular_file() || item.path().extension() != ".csv") {
                    continue;
                }
                if (item.path().filename() == "labels.csv") {
                    continue;
                }
                files.push_back(item.path());
            }
            std::sort(files.begin(), files.end());
            for (const fs::path& file : files) {
                entries.push_back({file.stem().string(), file, std::nullopt});
            }
        }
        labels_path = path / "labels.csv";
    } else if (fs::is_regular_file(path)) {
        entries = read_manifest(path);
        labels_path = path.parent_path() / "labels.csv";
    } else {
        throw std::invalid_argument("dataset path " + path.string() + " does not exist");
    }

    if (entries.empty()) {
        throw std::invalid_argument("no series found under " + path.string());
    }

    std::set<std::string> seen;
    LoadedDataset out;
    for (const ManifestEntry& entry : entries) {
        if (!seen.insert(entry.id).second) {
            throw std::invalid_argument("duplicate series id '" + entry.id + "'");
        }
        out.dataset.series.push_back(read_series_csv(entry.path, entry.id));
        const Eigen::Index p = out.dataset.series.front().dim();
        if (out.dataset.series.back().dim() != p) {
            throw std::invalid_argument(
                "series file " + entry.path.string() + " has " +
                std::to_string(out.dataset.series.back().dim()) + " columns, expected " +
                std::to_string(p));
        }
    }

    // labels from the manifest take precedence over a sibling labels.csv
    std::map<std::string, std::string> labels;
    bool manifest_labels = false;
    for (const ManifestEntry& entry : entries) {
        if (entry.label) {
            labels[entry.id] = *entry.label;
            manifest_labels = true;
        }
    }
    if (!manifest_labels && !labels_path.empty() && fs::exists(labels_path)) {
        for (const auto& [id, label] : read_labels_csv(labels_path)) {
            labels[id] = label;
        }
    }
    if (!labels.empty()) {
        Partition truth;
        std::string missing;
        for (const Series& s : out.dataset.series) {
            const auto it = labels.find(s.id);
            if (it == labels.end()) {
                missing += missing.empty() ? s.id : ", " + s.id;
            } else {
                truth.labels.push_back(it->second);
            }
        }
        if (!missing.empty()) {
            throw std::invalid_argument("labels missing for series: " + missing);
        }
        out.truth = std::move(truth);
    }
    return out;
}

void save_dataset(const MtsDataset& data, const fs::path& dir,
                  const std::vector<std::string>* labels, const std::string& notes) {
    if (labels && labels->size() != data.size()) {
        throw std::invalid_argument("save_dataset: label count mismatch");
    }
    fs::create_directories(dir);

    json manifest;
    manifest["version"] = "1";
    manifest["dimension"] = data.dim();
    manifest["notes"] = notes;
    manifest["series"] = json::array();

    std::vector<std::string> ids;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const Series& series = data.series[i];
        std::string name = series.id;
        std::replace(name.begin(), name.end(), '/', '_');
        const std::string filename = name + ".csv";
        write_series_csv(dir / filename, series);
        json item;
        item["id"] = series.id;
        item["path"] = filename;
        if (labels) {
            item["label"] = (*labels)[i];
        }
        manifest["series"].push_back(std::move(item));
        ids.push_back(series.id);
    }

    std::ofstream mout(dir / "manifest.json");
    mout << manifest.dump(2) << "\n";

    if (labels) {
        write_labels_csv(dir / "labels.csv", ids, *labels);
    }
}

void write_labels_csv(const fs::path& path, const std::vector<std::string>& ids,
                      const std::vector<std::string>& labels) {
    if (ids.size() != labels.size()) {
        throw std::invalid_argument("write_labels_csv: size mismatch");
    }
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << "id,label\n";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        out << ids[i] << "," << labels[i] << "\n";
    }
}

std::vector<std::pair<std::string, std::string>> read_labels_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open labels file " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("labels file " + path.string() + " is empty");
    }
    std::vector<std::pair<std::string, std::string>> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != 2) {
            throw std::invalid_argument("labels file " + path.string() + " line " +
                                        std::to_string(line_no) + " needs exactly id,label");
        }
        out.emplace_back(cells[0], cells[1]);
    }
    return out;
}

void write_memberships_csv(const fs::path& path, const std::vector<std::string>& ids,
                           const MembershipMatrix& memberships) {
    if (static_cast<Eigen::Index>(ids.size()) != memberships.rows()) {
        throw std::invalid_argument("write_memberships_csv: id count mismatch");
    }
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << "id";
    for (Eigen::Index s = 0; s < memberships.cols(); ++s) {
        out << ",cluster_" << s + 1;
    }
    out << "\n";
    char buf[32];
    for (Eigen::Index i = 0; i < memberships.rows(); ++i) {
        out << ids[static_cast<std::size_t>(i)];
        for (Eigen::Index s = 0; s < memberships.cols(); ++s) {
            std::snprintf(buf, sizeof(buf), "%.6f", memberships(i, s));
            out << "," << buf;
        }
        out << "\n";
    }
}

std::pair<std::vector<std::string>, MembershipMatrix> read_memberships_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open memberships file " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("memberships file " + path.string() + " is empty");
    }
    const std::size_t columns = split_csv_line(line).size();
    if (columns < 2) {
        throw std::invalid_argument("memberships file " + path.string() +
                                    " needs id plus at least one cluster column");
    }
    std::vector<std::string> ids;
    std::vector<double> values;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != columns) {
            throw std::invalid_argument("ragged row in " + path.string() + " line " +
                                        std::to_string(line_no));
        }
        ids.push_back(cells[0]);
        for (std::size_t c = 1; c < columns; ++c) {
            values.push_back(parse_cell(cells[c], path, line_no));
        }
    }
    const auto n = static_cast<Eigen::Index>(ids.size());
    const auto s = static_cast<Eigen::Index>(columns - 1);
    MembershipMatrix u(n, s);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < s; ++j) {
            u(i, j) = values[static_cast<std::size_t>(i * s + j)];
        }
    }
    return {std::move(ids), std::move(u)};
}

}  // namespace fcpca
