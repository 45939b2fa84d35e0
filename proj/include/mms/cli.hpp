#pragma once

#include "mms/assembly.hpp"
#include "mms/boundary.hpp"
#include "mms/constraints.hpp"
#include "mms/fields.hpp"
#include "mms/mesh.hpp"
#include "mms/surfaces.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mms {

class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Workflow { ValidateCorner, Blend, Reconstruct, Report };

const char* workflow_name(Workflow w);

/// How a domain side is constrained: by the boundary data source (surface or
/// table), clamped at zero, or left free.
enum class SideKind { Data, Clamped, Free };

struct RunConfig {
  std::filesystem::path source;  // config file, for messages
  Workflow workflow = Workflow::Blend;

  std::optional<Rect> domain;
  int nx = 0;
  int ny = 0;
  std::optional<BoundaryScaling> scaling;

  Material material;
  double q = 0;

  std::optional<std::string> surface;
  std::optional<std::filesystem::path> boundary_table;
  BoundaryDataKind data = BoundaryDataKind::Kinematic;
  std::map<Side, SideKind> sides;
  std::optional<CornerVariant> corner;

  std::optional<std::string> reference;  // defaults to `surface`

  std::optional<std::filesystem::path> constraints_file;
  std::optional<double> zeta;
  std::optional<double> cutoff;

  std::filesystem::path output = "out";
  int resolution = 3;
  std::vector<std::pair<Axis, double>> lines;  // (orientation, transverse coordinate)
  std::vector<Point> probes;
  bool write_matrix = false;
  bool write_mesh_summary = false;
};

/// Plain-text `key = value` lines grouped under `[section]` headers; `#`
/// starts a comment. Relative file paths are resolved against the config
/// file's directory.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base = ".",
                            const std::string& name = "<config>");

/// CSV rows `x,y,target`; an optional non-numeric header line is skipped.
std::vector<PointConstraint> read_constraints(const std::filesystem::path& path);
std::vector<PointConstraint> parse_constraints(const std::string& text, const std::string& name = "<constraints>");

/// CSV rows `side,s,w,d1,d2`.
BoundaryTable read_boundary_table(const std::filesystem::path& path);
BoundaryTable parse_boundary_table(const std::string& text, const std::string& name = "<table>");

/// Boundary specification described by a config on a given mesh.
BoundarySpec build_boundary(const RunConfig& config, const Mesh& mesh);

struct ProbeResult {
  Point requested;
  PointSample sample;
  std::optional<SurfaceJet> reference;
};

/// Corner-plate sample normalized as D W / (q lx^4) and M / (q lx^2), moments
/// in the plate sign convention (positive when sagging).
struct CornerRowResult {
  CornerTableRow exact;
  double deflection = 0;
  double moment_x = 0;
  double moment_y = 0;
  double offset_x = 0;  // transverse offset of the X-line used for moment_x
  double offset_y = 0;
};

struct RunResult {
  explicit RunResult(Mesh m) : mesh(std::move(m)) {}

  RunConfig config;
  Mesh mesh;
  std::optional<AnalyticSurface> reference;
  std::vector<PointConstraint> constraints;
  std::optional<GlobalSystem> system;  // kept only when a matrix dump was requested
  std::optional<Solution> solution;
  EnergyReport energy;
  std::vector<ProbeResult> probes;
  std::vector<LineSamples> lines;
  std::vector<CornerRowResult> corner_rows;
  std::optional<ErrorNorms> norms;
};

/// Builds the mesh and boundary, solves and samples. No files are written.
RunResult execute(const RunConfig& config);

std::string format_report(const RunResult& result);
std::string format_energy(const RunResult& result);

/// solution_lines/*.csv, grid.csv, energy.txt, report.txt and the optional
/// matrix.txt / mesh.txt.
void write_outputs(const RunResult& result, const std::filesystem::path& dir);

}  // namespace mms
