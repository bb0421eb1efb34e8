#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "plateforge/analysis.hpp"
#include "plateforge/domain.hpp"
#include "plateforge/mesh.hpp"

namespace plateforge {

using Json = nlohmann::json;

// Mesh document: {"version":1, "nodes":[[x,y],...], "elements":[[i0,i1,...],...],
// "scaling_centers":[[x,y],...]} with 0-based indices.
Json mesh_to_json(const PolyMesh& mesh);
PolyMesh mesh_from_json(const Json& doc);
void write_mesh_json(const std::filesystem::path& path, const PolyMesh& mesh);
PolyMesh read_mesh_json(const std::filesystem::path& path);

// Domain document, e.g. {"type":"rectangle","lo":[0,0],"hi":[1,1]},
// {"type":"circle","center":[0,0],"radius":1}, {"type":"l_bracket","fillet":0.25,
// "holes":[{"center":[0.5,0.5],"radius":0.25}]}. An optional "density" member
// {"background":b,"attractors":[[x,y,sigma],...]} describes mesh grading.
struct DomainDocument {
    DomainSpec domain;
    DensityField density;
};
DomainDocument domain_from_json(const Json& doc);
DomainDocument read_domain_json(const std::filesystem::path& path);

Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& doc);

// Plain table written as comma-separated values. Numbers use 17 significant digits.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row);
    static std::string num(double v);
};
void write_csv(const std::filesystem::path& path, const Table& table);
std::string to_csv(const Table& table);

// Legacy ASCII VTK unstructured grid: polygons as cells, per-node (w, beta_x, beta_y),
// per-cell (m_xx, m_yy, m_xy, q_x, q_y).
void write_vtk(const std::filesystem::path& path, const PolyMesh& mesh, const FieldResult& sol,
               const std::vector<StressResultants>& cell_resultants);

struct ChartSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};
struct ChartSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
};
// Line chart as a standalone SVG document.
std::string svg_line_chart(const ChartSpec& spec, const std::vector<ChartSeries>& series);
void write_svg_line_chart(const std::filesystem::path& path, const ChartSpec& spec,
                          const std::vector<ChartSeries>& series);

// Versioned reference constants. The path is taken from PLATEFORGE_REF_DATA when
// set, otherwise from the data directory configured at build time.
class ReferenceData {
public:
    static const ReferenceData& instance();
    static ReferenceData load(const std::filesystem::path& path);
    static std::filesystem::path default_path();

    // Dotted lookup, e.g. value("clamped_square.w_ref"). Throws IoError when missing.
    const Json& at(const std::string& dotted) const;
    double value(const std::string& dotted) const { return at(dotted).get<double>(); }
    std::vector<double> values(const std::string& dotted) const { return at(dotted).get<std::vector<double>>(); }
    const Json& document() const { return doc_; }

private:
    Json doc_;
};

}  // namespace plateforge
