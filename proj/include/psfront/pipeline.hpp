#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "psfront/config.hpp"
#include "psfront/frames.hpp"
#include "psfront/mesh_io.hpp"
#include "psfront/singular.hpp"
#include "psfront/verify.hpp"

namespace psfront {

// In-memory result of a pipeline run; the CLI writes files from it.
struct RunResult {
    std::shared_ptr<const PotentialPair> pair;
    std::shared_ptr<FrameGrid> frames;
    SurfaceGrid surface;
    SingularReport singular;
    std::optional<CheckReport> report;  // verify mode
    MeshView mesh;
    std::optional<UvEmbedding> uv;
    nlohmann::json resolved;  // the run.json document
};

// Build the potential, frames, surface, and singular set for a validated
// config (all modes except classify, which re-runs a stored config).
RunResult run_pipeline(const JobConfig& cfg);

// Full CLI entry: runs the pipeline (reloading the stored run for classify)
// and writes the requested outputs under output.dir. Returns the file paths
// written.
std::vector<std::string> run_job(const JobConfig& cfg);

}  // namespace psfront
