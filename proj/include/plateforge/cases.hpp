#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "plateforge/analysis.hpp"
#include "plateforge/assembly.hpp"
#include "plateforge/io.hpp"
#include "plateforge/mesh.hpp"

namespace plateforge {

enum class MeshKind { Quad, Tri, Poly };
enum class SupportKind { Hard, Soft };

std::string to_string(MeshKind k);
std::string to_string(SupportKind k);
MeshKind parse_mesh_kind(const std::string& s);
SupportKind parse_support(const std::string& s);
Formulation parse_formulation(const std::string& s);
QuadratureScheme parse_quadrature(const std::string& s);
MaterialLaw parse_law(const std::string& s);
ThicknessMode parse_thickness_mode(const std::string& s);
ScalingCenterPolicy parse_sc_policy(const std::string& s);

// Overrides of a benchmark's default configuration. Unset members keep the default.
struct CaseParams {
    std::string id;
    std::vector<double> thicknesses;
    std::optional<MeshKind> mesh;
    std::vector<int> sizes;
    std::optional<Formulation> formulation;
    std::optional<QuadratureScheme> quadrature;
    std::optional<MaterialLaw> law;
    std::optional<ThicknessMode> thickness_mode;
    std::optional<ScalingCenterPolicy> sc;
    std::optional<SupportKind> support;
    std::optional<double> length;
    std::optional<double> nu;
    std::uint64_t seed = 42;
    int lloyd_iterations = 100;
    int threads = 1;
    bool write_fields = true;

    Json to_json() const;
    // Members of a benchmark config document override the current values.
    void apply_json(const Json& doc);
};

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct NamedTable {
    std::string name;
    Table table;
};

struct NamedChart {
    std::string name;
    ChartSpec spec;
    std::vector<ChartSeries> series;
};

struct FieldSnapshot {
    std::string name;
    PolyMesh mesh;
    FieldResult solution;
    std::vector<StressResultants> cell_resultants;
};

struct RunReport {
    std::string case_id;
    Json parameters;
    std::vector<NamedTable> tables;
    std::vector<NamedChart> charts;
    std::vector<FieldSnapshot> fields;
    std::vector<CheckResult> checks;
    Json results = Json::object();
    double wall_seconds = 0.0;

    bool passed() const;
    const CheckResult& check(const std::string& name) const;
    Json to_json() const;
};

const std::vector<std::string>& case_ids();

// Runs one benchmark with its default configuration adjusted by params. When
// out_dir is given, CSV tables, SVG charts, VTK fields and report.json are written.
RunReport run_benchmark(const CaseParams& params, const std::optional<std::filesystem::path>& out_dir = std::nullopt);

// One series per (formulation, quadrature) pair over the case's sweep, with the
// pointwise ordering claim checked for the first entry against the others.
RunReport compare_formulations(const CaseParams& params,
                               const std::vector<std::pair<Formulation, QuadratureScheme>>& variants,
                               const std::optional<std::filesystem::path>& out_dir = std::nullopt);

void write_report(const RunReport& report, const std::filesystem::path& out_dir);

// Six-polygon cantilever mesh on [0,2]x[0,1] with 3..7-node elements.
PolyMesh cantilever_six_polygon_mesh();

}  // namespace plateforge
