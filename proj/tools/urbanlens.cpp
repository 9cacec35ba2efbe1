// urbanlens: drives the pipeline stage by stage and serves the workspace.

#include <csignal>
#include <cstdio>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "urbanlens/config.hpp"
#include "urbanlens/error.hpp"
#include "urbanlens/pipeline.hpp"
#include "urbanlens/sample_city.hpp"
#include "urbanlens/service.hpp"
#include "urbanlens/workspace.hpp"

namespace ul = urbanlens;

namespace {

enum Exit : int {
  ok = 0,
  other = 1,
  usage = 2,
  config_error = 3,
  input_error = 4,
  prerequisite = 5,
  workspace_error = 6,
};

int exit_code(ul::ErrorCode code) {
  switch (code) {
    case ul::ErrorCode::config: return config_error;
    case ul::ErrorCode::invalid_argument:
    case ul::ErrorCode::ingest:
    case ul::ErrorCode::missing_layer:
    case ul::ErrorCode::unsupported_layer: return input_error;
    case ul::ErrorCode::prerequisite: return prerequisite;
    case ul::ErrorCode::version_mismatch:
    case ul::ErrorCode::corrupt_workspace: return workspace_error;
    case ul::ErrorCode::not_found:
    case ul::ErrorCode::io: return other;
  }
  return other;
}

void report_warnings(const ul::Warnings& warnings, std::size_t from) {
  for (std::size_t i = from; i < warnings.size(); ++i) {
    std::cerr << "warning: " << warnings[i] << "\n";
  }
}

ul::Workspace open(const ul::Config& c) { return ul::load_workspace(c.workspace); }

void summary(const ul::Workspace& w, ul::Stage s) {
  switch (s) {
    case ul::Stage::ingested:
      std::printf("ingested %zu street lines, %zu crimes, %zu facilities, %zu favelas, %zu tracts, %zu stations\n",
                  w.streets.size(), w.crimes.size(), w.facilities.size(), w.favelas.size(),
                  w.tracts.size(), w.stations.size());
      break;
    case ul::Stage::built:
      std::printf("graph: %zu nodes, %zu edges; %zu hotspots\n", w.graph.node_count(),
                  w.graph.edges().size(), w.hotspot_nodes().size());
      break;
    case ul::Stage::trips: {
      std::size_t occ = 0;
      for (const auto& t : w.trips) occ += t.label == ul::TripLabel::occurrence;
      std::printf("trips: %zu (%zu occurrences); near-hotspot share %.4f, p = %.4f\n",
                  w.trips.size(), occ, w.near_hotspot_share, w.occurrence_probability);
      break;
    }
    case ul::Stage::trained: {
      const auto& e = *w.evaluation;
      std::printf("held-out G-mean %.4f (sensitivity %.4f, specificity %.4f) on %zu trips; "
                  "label-shuffled control %.4f\n",
                  e.g_mean, e.confusion.sensitivity(), e.confusion.specificity(),
                  e.test_indices.size(), e.shuffled_g_mean);
      break;
    }
    case ul::Stage::analyzed: {
      const auto& s = *w.shapley;
      std::printf("correlation over %zu trips; shapley over %zu trips\n", w.correlation->rows,
                  s.sample_size);
      for (std::size_t g = 0; g < s.layer_percent.size(); ++g) {
        std::printf("  %-14s %6.2f%%\n", ul::kThematicLayerNames[g].data(), s.layer_percent[g]);
      }
      break;
    }
  }
}

using StageFn = void (*)(ul::Workspace&, const ul::Config&);

void run_stage(const ul::Config& c, ul::Stage s, StageFn fn) {
  auto w = open(c);
  const auto before = w.warnings.size();
  fn(w, c);
  report_warnings(w.warnings, before);
  ul::save_workspace(w, c.workspace);
  summary(w, s);
}

void run_ingest(const ul::Config& c) {
  auto w = ul::ingest(c);
  report_warnings(w.warnings, 0);
  ul::save_workspace(w, c.workspace);
  summary(w, ul::Stage::ingested);
}

std::sig_atomic_t volatile g_stop = 0;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Urban data exploration engine"};
  app.require_subcommand(1);
  std::string config_path;
  int port = -1;
  std::string out_dir = "data/sample";
  std::size_t trips = 20000;
  std::uint64_t seed = ul::SampleCityOptions{}.seed;

  const auto with_config = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
    return sub;
  };
  auto* ingest = with_config(app.add_subcommand("ingest", "Load input files into a new workspace"));
  auto* build = with_config(app.add_subcommand("build", "Build the street graph and detect hotspots"));
  auto* synth = with_config(app.add_subcommand("synth-trips", "Synthesize trips and aggregate node features"));
  auto* train = with_config(app.add_subcommand("train", "Train and evaluate the trip classifier"));
  auto* analyze = with_config(app.add_subcommand("analyze", "Correlation matrices and Shapley report"));
  auto* run = with_config(app.add_subcommand("run", "Run every stage from ingest to analyze"));
  auto* serve = with_config(app.add_subcommand("serve", "Serve the workspace over HTTP"));
  serve->add_option("-p,--port", port, "Override the configured port");
  auto* exporter = with_config(app.add_subcommand("export", "Write grid and analytics CSVs"));
  auto* sample = app.add_subcommand("sample", "Generate the synthetic sample city");
  sample->add_option("-o,--out", out_dir, "Output directory")->capture_default_str();
  sample->add_option("-n,--trips", trips, "trips.count written to config.json")->capture_default_str();
  sample->add_option("-s,--seed", seed, "Generator seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? ok : usage;
  }

  try {
    if (sample->parsed()) {
      ul::SampleCityOptions options;
      options.seed = seed;
      ul::write_sample_city(ul::make_sample_city(options), out_dir, trips);
      std::printf("wrote sample city to %s\n", out_dir.c_str());
      return ok;
    }
    const auto config = ul::load_config(config_path);
    if (ingest->parsed()) run_ingest(config);
    if (build->parsed()) run_stage(config, ul::Stage::built, ul::build);
    if (synth->parsed()) run_stage(config, ul::Stage::trips, ul::synthesize_trips);
    if (train->parsed()) run_stage(config, ul::Stage::trained, ul::train_model);
    if (analyze->parsed()) run_stage(config, ul::Stage::analyzed, ul::analyze);
    if (run->parsed()) {
      run_ingest(config);
      run_stage(config, ul::Stage::built, ul::build);
      run_stage(config, ul::Stage::trips, ul::synthesize_trips);
      run_stage(config, ul::Stage::trained, ul::train_model);
      run_stage(config, ul::Stage::analyzed, ul::analyze);
    }
    if (exporter->parsed()) {
      const auto w = open(config);
      const auto n = ul::export_csv(w, config.export_dir);
      std::printf("wrote %zu files to %s\n", n, config.export_dir.string().c_str());
    }
    if (serve->parsed()) {
      auto server_config = config.server;
      if (port >= 0) server_config.port = port;
      auto w = std::make_shared<const ul::Workspace>(open(config));
      auto api = std::make_shared<const ul::Api>(w, config.index);
      ul::HttpServer server(api, server_config);
      const int bound = server.start();
      std::printf("serving %s on http://%s:%d (stage %s)\n", config.workspace.string().c_str(),
                  server_config.host.c_str(), bound,
                  w->stage > 0 ? ul::to_string(static_cast<ul::Stage>(w->stage)) : "none");
      std::fflush(stdout);
      std::signal(SIGINT, [](int) { g_stop = 1; });
      std::signal(SIGTERM, [](int) { g_stop = 1; });
      while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
      server.stop();
    }
  } catch (const ul::Error& e) {
    std::cerr << "error [" << ul::to_string(e.code()) << "]: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return other;
  }
  return ok;
}
