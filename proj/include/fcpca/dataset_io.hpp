#pragma once

#include "fcpca/clustering.hpp"
#include "fcpca/eval.hpp"

#include <filesystem>
#include <optional>

namespace fcpca {

struct LoadedDataset {
    MtsDataset dataset;
    std::optional<Partition> truth;  // aligned with dataset order when present
};

/// Reads a dataset from a manifest file or from a directory of per-series
/// CSV files (one header row of variable names, comma delimited). Series
/// order follows the manifest, or lexicographic file names otherwise.
/// Labels come from the manifest or a sibling labels.csv.
LoadedDataset load_dataset(const std::filesystem::path& path);

/// Writes one CSV per series plus manifest.json, and labels.csv when labels
/// are given. Values keep full double precision.
void save_dataset(const MtsDataset& data, const std::filesystem::path& dir,
                  const std::vector<std::string>* labels = nullptr,
                  const std::string& notes = {});

void write_labels_csv(const std::filesystem::path& path, const std::vector<std::string>& ids,
                      const std::vector<std::string>& labels);

/// id,label rows in file order.
std::vector<std::pair<std::string, std::string>> read_labels_csv(
    const std::filesystem::path& path);

/// Header id,cluster_1..cluster_S; memberships rendered with six decimals.
void write_memberships_csv(const std::filesystem::path& path,
                           const std::vector<std::string>& ids,
                           const MembershipMatrix& memberships);

std::pair<std::vector<std::string>, MembershipMatrix> read_memberships_csv(
    const std::filesystem::path& path);

}  // namespace fcpca
