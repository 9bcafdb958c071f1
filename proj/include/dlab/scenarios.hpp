#pragma once
#include "dlab/emit.hpp"

namespace dlab {

// build the scenario's initial data on its grid (pre-normalization knobs
// applied); exposed for tests
Field build_data(const ExperimentConfig& cfg, GridPtr g);

GridPtr grid_from(const ExperimentConfig& cfg);

EquationSpec equation_from(const ExperimentConfig& cfg);

// executes cfg.scenario, writes CSV/JSON artifacts into cfg.outdir, and
// returns the manifest (also written as manifest.json)
RunManifest run_scenario(const ExperimentConfig& cfg);

}  // namespace dlab
