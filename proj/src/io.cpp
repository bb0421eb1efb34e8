#include "plateforge/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "plateforge/errors.hpp"

#ifndef PLATEFORGE_DATA_DIR
#define PLATEFORGE_DATA_DIR "data"
#endif

namespace plateforge {

namespace {

Vec2 vec2_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2) throw IoError("expected a coordinate pair [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

}  // namespace

Json mesh_to_json(const PolyMesh& mesh) {
    Json doc;
    doc["version"] = 1;
    Json nodes = Json::array();
    for (const Vec2& p : mesh.nodes) nodes.push_back({p.x(), p.y()});
    doc["nodes"] = std::move(nodes);
    doc["elements"] = mesh.elements;
    if (mesh.scaling_centers) {
        Json sc = Json::array();
        for (const Vec2& p : *mesh.scaling_centers) sc.push_back({p.x(), p.y()});
        doc["scaling_centers"] = std::move(sc);
    }
    return doc;
}

PolyMesh mesh_from_json(const Json& doc) {
    try {
        if (doc.at("version").get<int>() != 1) throw IoError("unsupported mesh version");
        PolyMesh mesh;
        for (const auto& p : doc.at("nodes")) mesh.nodes.push_back(vec2_from_json(p));
        mesh.elements = doc.at("elements").get<std::vector<std::vector<int>>>();
        if (doc.contains("scaling_centers")) {
            std::vector<Vec2> sc;
            for (const auto& p : doc["scaling_centers"]) sc.push_back(vec2_from_json(p));
            mesh.scaling_centers = std::move(sc);
        }
        const MeshReport report = validate_mesh(mesh);
        if (!report.ok()) throw IoError("mesh document is invalid: " + report.summary());
        return mesh;
    } catch (const Json::exception& e) {
        throw IoError(std::string("malformed mesh document: ") + e.what());
    }
}

Json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

void write_json(const std::filesystem::path& path, const Json& doc) {
    auto out = open_out(path);
    out << doc.dump(2) << '\n';
}

void write_mesh_json(const std::filesystem::path& path, const PolyMesh& mesh) { write_json(path, mesh_to_json(mesh)); }

PolyMesh read_mesh_json(const std::filesystem::path& path) { return mesh_from_json(read_json(path)); }

DomainDocument domain_from_json(const Json& doc) {
    try {
        const std::string type = doc.at("type").get<std::string>();
        DomainDocument out;
        if (type == "rectangle") {
            out.domain = DomainSpec::rectangle(vec2_from_json(doc.at("lo")), vec2_from_json(doc.at("hi")));
        } else if (type == "circle") {
            out.domain = DomainSpec::circle(vec2_from_json(doc.at("center")), doc.at("radius").get<double>());
        } else if (type == "l_bracket") {
            out.domain = DomainSpec::l_bracket(doc.value("width", 4.0), doc.value("height", 6.0), doc.value("arm", 1.0),
                                               doc.value("fillet", 0.25));
        } else {
            throw IoError("unknown domain type '" + type + "'");
        }
        if (doc.contains("holes"))
            for (const auto& h : doc["holes"])
                out.domain.add_hole(vec2_from_json(h.at("center")), h.at("radius").get<double>());
        if (doc.contains("density")) {
            const Json& d = doc["density"];
            out.density.background = d.value("background", 1.0);
            if (d.contains("attractors"))
                for (const auto& a : d["attractors"]) {
                    if (!a.is_array() || a.size() != 3) throw IoError("attractor must be [x, y, sigma]");
                    out.density.attractors.push_back({{a[0].get<double>(), a[1].get<double>()}, a[2].get<double>()});
                }
            out.density.validate();
        }
        return out;
    } catch (const Json::exception& e) {
        throw IoError(std::string("malformed domain document: ") + e.what());
    }
}

DomainDocument read_domain_json(const std::filesystem::path& path) { return domain_from_json(read_json(path)); }

// CSV ---------------------------------------------------------------------------

void Table::add_row(std::vector<std::string> row) {
    if (row.size() != columns.size()) throw ArgumentError("table row width does not match the header");
    rows.push_back(std::move(row));
}

std::string Table::num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream s;
    s << std::setprecision(17) << v;
    return s.str();
}

std::string to_csv(const Table& table) {
    auto quote = [](const std::string& cell) {
        if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
        std::string q = "\"";
        for (char c : cell) {
            if (c == '"') q += '"';
            q += c;
        }
        return q + "\"";
    };
    std::ostringstream out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << quote(table.columns[i]);
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << quote(row[i]);
        out << '\n';
    }
    return out.str();
}

void write_csv(const std::filesystem::path& path, const Table& table) {
    auto out = open_out(path);
    out << to_csv(table);
}

// VTK ---------------------------------------------------------------------------

void write_vtk(const std::filesystem::path& path, const PolyMesh& mesh, const FieldResult& sol,
               const std::vector<StressResultants>& cell_resultants) {
    if (static_cast<int>(cell_resultants.size()) != mesh.num_elements())
        throw ArgumentError("one resultant set per element is required");
    auto out = open_out(path);
    out << std::setprecision(12);
    out << "# vtk DataFile Version 3.0\nplateforge\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.num_nodes() << " double\n";
    for (const Vec2& p : mesh.nodes) out << p.x() << ' ' << p.y() << " 0\n";
    std::size_t total = 0;
    for (const auto& e : mesh.elements) total += e.size() + 1;
    out << "CELLS " << mesh.num_elements() << ' ' << total << '\n';
    for (const auto& e : mesh.elements) {
        out << e.size();
        for (int n : e) out << ' ' << n;
        out << '\n';
    }
    out << "CELL_TYPES " << mesh.num_elements() << '\n';
    for (int e = 0; e < mesh.num_elements(); ++e) out << "7\n";
    out << "POINT_DATA " << mesh.num_nodes() << '\n';
    for (const auto& [name, dof] : {std::pair{"w", Dof::W}, {"beta_x", Dof::BetaX}, {"beta_y", Dof::BetaY}}) {
        out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
        for (int n = 0; n < mesh.num_nodes(); ++n) out << sol.node_value(n, dof) << '\n';
    }
    out << "CELL_DATA " << mesh.num_elements() << '\n';
    const char* names[5] = {"m_xx", "m_yy", "m_xy", "q_x", "q_y"};
    for (int c = 0; c < 5; ++c) {
        out << "SCALARS " << names[c] << " double 1\nLOOKUP_TABLE default\n";
        for (const auto& r : cell_resultants) out << (c < 3 ? r.m(c) : r.q(c - 3)) << '\n';
    }
}

// SVG ---------------------------------------------------------------------------

std::string svg_line_chart(const ChartSpec& spec, const std::vector<ChartSeries>& series) {
    constexpr double W = 640, H = 420, L = 70, R = 160, T = 40, B = 55;
    auto tx = [&](double v) { return spec.log_x ? std::log10(v) : v; };
    auto ty = [&](double v) { return spec.log_y ? std::log10(v) : v; };
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if ((spec.log_x && !(s.x[i] > 0)) || (spec.log_y && !(s.y[i] > 0))) continue;
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            x0 = std::min(x0, tx(s.x[i]));
            x1 = std::max(x1, tx(s.x[i]));
            y0 = std::min(y0, ty(s.y[i]));
            y1 = std::max(y1, ty(s.y[i]));
        }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 - x0 < 1e-300) x0 -= 0.5, x1 += 0.5;
    if (y1 - y0 < 1e-300) y0 -= 0.5, y1 += 0.5;
    const double py = 0.05 * (y1 - y0);
    y0 -= py;
    y1 += py;
    auto px = [&](double v) { return L + (tx(v) - x0) / (x1 - x0) * (W - L - R); };
    auto pyf = [&](double v) { return H - B - (ty(v) - y0) / (y1 - y0) * (H - T - B); };
    auto fmt = [](double v) {
        std::ostringstream s;
        s << std::setprecision(4) << v;
        return s.str();
    };
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << spec.title << "</text>\n";
    o << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double fx = x0 + (x1 - x0) * k / 4.0, fy = y0 + (y1 - y0) * k / 4.0;
        const double sx = L + (W - L - R) * k / 4.0, sy = H - B - (H - T - B) * k / 4.0;
        o << "<text x=\"" << sx << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">"
          << fmt(spec.log_x ? std::pow(10.0, fx) : fx) << "</text>\n";
        o << "<text x=\"" << L - 6 << "\" y=\"" << sy + 4 << "\" text-anchor=\"end\">"
          << fmt(spec.log_y ? std::pow(10.0, fy) : fy) << "</text>\n";
    }
    o << "<text x=\"" << L + (W - L - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << spec.x_label
      << "</text>\n";
    o << "<text transform=\"translate(16," << T + (H - T - B) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << spec.y_label << "</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* c = colors[k % 8];
        o << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if ((spec.log_x && !(s.x[i] > 0)) || (spec.log_y && !(s.y[i] > 0))) continue;
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            o << px(s.x[i]) << ',' << pyf(s.y[i]) << ' ';
        }
        o << "\"/>\n";
        const double ly = T + 14 + 18.0 * static_cast<double>(k);
        o << "<line x1=\"" << W - R + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << W - R + 32 << "\" y2=\"" << ly - 4
          << "\" stroke=\"" << c << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << W - R + 38 << "\" y=\"" << ly << "\">" << s.label << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

void write_svg_line_chart(const std::filesystem::path& path, const ChartSpec& spec,
                          const std::vector<ChartSeries>& series) {
    auto out = open_out(path);
    out << svg_line_chart(spec, series);
}

// Reference data ----------------------------------------------------------------

std::filesystem::path ReferenceData::default_path() {
    if (const char* env = std::getenv("PLATEFORGE_REF_DATA"); env && *env) return env;
    return std::filesystem::path(PLATEFORGE_DATA_DIR) / "reference_values.json";
}

ReferenceData ReferenceData::load(const std::filesystem::path& path) {
    ReferenceData r;
    r.doc_ = read_json(path);
    if (!r.doc_.contains("version")) throw IoError(path.string() + ": reference data has no version");
    return r;
}

const ReferenceData& ReferenceData::instance() {
    static const ReferenceData data = load(default_path());
    return data;
}

const Json& ReferenceData::at(const std::string& dotted) const {
    const Json* node = &doc_;
    std::size_t start = 0;
    while (start <= dotted.size()) {
        const std::size_t dot = dotted.find('.', start);
        const std::string key = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (!node->is_object() || !node->contains(key)) throw IoError("reference value '" + dotted + "' not found");
        node = &(*node)[key];
        if (node->is_object() && node->contains("value") && dot == std::string::npos) return (*node)["value"];
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    return *node;
}

}  // namespace plateforge
