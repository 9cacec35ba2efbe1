#pragma once

#include <filesystem>

#include "urbanlens/config.hpp"
#include "urbanlens/workspace.hpp"

namespace urbanlens {

/// Loads every input file named by the config into a fresh workspace.
Workspace ingest(const Config& config);

/// Each stage checks its prerequisite, replaces its own outputs and drops
/// the outputs of every later stage.
void build(Workspace& w, const Config& config);
void synthesize_trips(Workspace& w, const Config& config);
void train_model(Workspace& w, const Config& config);
void analyze(Workspace& w, const Config& config);

/// Writes grid.csv, correlation_full.csv, correlation_reduced.csv,
/// shapley.csv and trips.csv (whichever stages exist) into `dir`.
/// Returns the number of files written.
std::size_t export_csv(const Workspace& w, const std::filesystem::path& dir);

std::string grid_to_csv(const Workspace& w);

}  // namespace urbanlens
