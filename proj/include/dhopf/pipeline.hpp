#pragma once

// End-to-end run: mesh and map, arrangement, image triangulation, induced
// triangulation, complex of f-neighbors, antipodal witness, level sets.
// Stage errors are recorded in the report instead of propagating.

#include "dhopf/cdt.hpp"
#include "dhopf/hopf.hpp"
#include "dhopf/levelset.hpp"
#include "dhopf/oracle.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace dhopf {

/// Absolute distance, or a multiple of D_hat when relative ("0.5D").
struct DeltaSpec {
  double value = 0.0;
  bool relative = false;

  std::string str() const;
};
/// "0.5", "0.5D", "0.5d". Throws std::invalid_argument.
DeltaSpec parse_delta(const std::string& text);

enum class Stage { Validate, Triangulate, Complex, Hopf, Levelset, All };
std::string to_string(Stage s);
/// Throws std::invalid_argument.
Stage parse_stage(const std::string& name);

struct RunConfig {
  Stage stage = Stage::All;
  std::optional<std::filesystem::path> mesh_path;
  std::optional<std::filesystem::path> map_path;
  std::string generator;          // "projection" | "random-images" when there is no map file
  std::size_t hull_points = 20;   // random hull size when there is no mesh file
  std::uint64_t seed = 0;
  std::vector<DeltaSpec> deltas;
  double tol_residual = 1e-6;
  double tol_level = 0.0;         // 0 selects 1e-4 * D_hat
  std::size_t max_depth = 8;      // level-set subdivision cap
  std::size_t oracle_samples = 0; // 0 skips the brute-force check

  std::optional<std::filesystem::path> out_dir;
  bool svg = false, obj = false, report = false;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  nlohmann::json to_json() const;
};

enum class FailureKind { Validation, Pipeline, Io };

struct StageFailure {
  std::string stage;
  FailureKind kind;
  std::string message;
};

struct LevelSetRun {
  DeltaSpec spec;
  LevelSetResult result;
  double max_distance = 0.0;  // of the lifted distance on the base component
};

struct RunReport {
  RunConfig config;
  std::vector<std::string> completed;  // stage names in order
  std::optional<StageFailure> failure;
  std::vector<std::pair<std::string, double>> timings;  // seconds per stage
  std::string timestamp;

  SurfaceMesh mesh;
  PlanarMap map;
  ValidationReport mesh_validation, map_validation, induced_validation;
  ImagePSLG pslg;
  ImageTriangulation tri;
  InducedTriangulation ind;
  NeighborComplex cx;
  ManifoldReport manifold;
  ResolvedComplex rc;
  std::size_t expected_pair_triangles = 0;  // sum over image triangles of m (m - 1)
  bool swap_involution = false;
  std::optional<OracleReport> oracle;
  std::optional<BaseComponent> base;
  std::optional<CenterResult> center;
  std::optional<HopfWitness> witness;
  std::vector<LevelSetRun> level_sets;

  bool ok() const { return !failure.has_value(); }
  bool reached(const std::string& stage) const;
};

/// Runs the stages selected by config.stage. Throws std::invalid_argument for
/// an invalid config; every other error ends up in report.failure.
RunReport run_pipeline(const RunConfig& config);

/// The report as JSON. Wall-clock data lives under "timestamps" only.
nlohmann::json report_json(const RunReport& report);

/// Writes the enabled artifacts into config.out_dir and returns their paths.
/// Throws IoError naming the path that could not be written.
std::vector<std::filesystem::path> export_artifacts(const RunReport& report, const RunConfig& config);

/// Process exit code for a finished run: 0, 1 (validation), 2 (pipeline), 3 (I/O).
int exit_code(const RunReport& report);

}  // namespace dhopf
