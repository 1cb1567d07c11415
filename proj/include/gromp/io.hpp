#pragma once

// Plain-text, line-oriented file formats. Lines starting with '#' are
// comments; doubles are written with 17 significant digits so every value
// reads back bit-identical.
//
// Dataset:   `episode <id> <length>` followed by <length> records
//            `<step> <a_st 3x4 row-major> <a_to 3x4 row-major>`;
//            a_so is rebuilt as a_st * a_to on load.
// Manifold:  `mean <12>`, `scales <s_omega> <s_v>`, `singular_values <6>`,
//            `basis <36 row-major>`, `dim <0..6|none>`, optional `losses <7>`.
// Config:    `key = value` lines, see format_config() for the key set.
// Results:   CSV with the header returned by results_header().

#include "gromp/dataset.hpp"
#include "gromp/experiment.hpp"
#include "gromp/manifold.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace gromp {

/// Shortest-roundtrip-safe decimal form ("%.17g").
std::string format_double(double value);

void save_dataset(const DemonstrationDataset& dataset, const std::filesystem::path& path);
DemonstrationDataset load_dataset(const std::filesystem::path& path);
std::string format_dataset(const DemonstrationDataset& dataset);
DemonstrationDataset parse_dataset(const std::string& text);

struct ManifoldFile {
  TaskManifold manifold;
  std::optional<LossVector> losses;
};

void save_manifold(const TaskManifold& manifold, const std::filesystem::path& path,
                   const std::optional<LossVector>& losses = std::nullopt);
ManifoldFile load_manifold_file(const std::filesystem::path& path);
TaskManifold load_manifold(const std::filesystem::path& path);
std::string format_manifold(const TaskManifold& manifold,
                            const std::optional<LossVector>& losses = std::nullopt);
ManifoldFile parse_manifold(const std::string& text);

ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& text);
std::string format_config(const ExperimentConfig& config);

std::string results_header();
std::string format_result_row(const ResultRow& row);
ResultRow parse_result_row(const std::string& line, std::size_t line_number = 0);

/// Writes the header first if the file is missing or empty; each row is a
/// single write of one complete line.
void append_result_row(const ResultRow& row, const std::filesystem::path& path);
/// Header plus rows, written to a temporary file and renamed into place.
void write_results_csv(const ResultsTable& rows, const std::filesystem::path& path);
ResultsTable read_results_csv(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
/// Temporary file plus rename.
void write_text_file_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace gromp
