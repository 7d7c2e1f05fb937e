#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "speclab/mesh.hpp"

namespace speclab {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string mesh_to_json_string(const Mesh& mesh) {
  // Hand-rolled writer: the schema pins 17 significant digits for coordinates.
  std::ostringstream os;
  os << "{\n  \"vertices\": [";
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    os << (i ? ",\n    " : "\n    ") << "[" << fmt17(mesh.vertices[i].x()) << ", "
       << fmt17(mesh.vertices[i].y()) << "]";
  }
  os << "\n  ],\n  \"triangles\": [";
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    const auto& t = mesh.triangles[i];
    os << (i ? ",\n    " : "\n    ") << "[" << t[0] << ", " << t[1] << ", " << t[2] << "]";
  }
  os << "\n  ],\n  \"boundary_edges\": [";
  for (std::size_t i = 0; i < mesh.boundary_edges.size(); ++i) {
    const auto& e = mesh.boundary_edges[i];
    os << (i ? ",\n    " : "\n    ") << "[" << e.a << ", " << e.b << "]";
  }
  os << "\n  ]\n}\n";
  return os.str();
}

Mesh mesh_from_json_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw MeshError(std::string("mesh JSON parse error: ") + e.what());
  }
  if (!j.contains("vertices") || !j.contains("triangles")) {
    throw MeshError("mesh JSON: missing \"vertices\" or \"triangles\"");
  }
  Mesh m;
  for (const auto& v : j["vertices"]) {
    if (!v.is_array() || v.size() != 2) throw MeshError("mesh JSON: vertex is not [x,y]");
    m.vertices.emplace_back(v[0].get<double>(), v[1].get<double>());
  }
  const int nv = m.vertex_count();
  for (const auto& t : j["triangles"]) {
    if (!t.is_array() || t.size() != 3) throw MeshError("mesh JSON: triangle is not [i,j,k]");
    std::array<int, 3> tri{t[0].get<int>(), t[1].get<int>(), t[2].get<int>()};
    for (int v : tri) {
      if (v < 0 || v >= nv) throw MeshError("mesh JSON: triangle index out of range");
    }
    m.triangles.push_back(tri);
  }
  for (auto& tri : m.triangles) {
    // enforce counterclockwise orientation
    const Vec2 a = m.vertices[tri[0]], b = m.vertices[tri[1]], c = m.vertices[tri[2]];
    if ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x() < 0) std::swap(tri[1], tri[2]);
  }
  // Boundary edges are reconstructed from adjacency; an explicit list, when
  // present, is cross-checked against it.
  rebuild_boundary(m);
  if (j.contains("boundary_edges")) {
    std::set<std::pair<int, int>> expected;
    for (const auto& e : m.boundary_edges) {
      expected.insert({std::min(e.a, e.b), std::max(e.a, e.b)});
    }
    for (const auto& e : j["boundary_edges"]) {
      if (!e.is_array() || e.size() != 2) throw MeshError("mesh JSON: boundary edge is not [a,b]");
      const int a = e[0].get<int>(), b = e[1].get<int>();
      if (!expected.count({std::min(a, b), std::max(a, b)})) {
        throw MeshError("mesh JSON: listed boundary edge (" + std::to_string(a) + "," +
                        std::to_string(b) + ") is not a boundary edge of the triangulation");
      }
    }
  }
  return m;
}

Mesh mesh_from_msh_string(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  Mesh m;
  std::vector<std::pair<int, int>> line_elements;
  std::map<int, int> node_id_to_index;
  bool saw_nodes = false, saw_elements = false;
  int lineno = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(is, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  };
  auto fail = [&lineno](const std::string& msg) -> MeshError {
    return MeshError("MSH line " + std::to_string(lineno) + ": " + msg);
  };

  while (next_line()) {
    if (line == "$MeshFormat") {
      if (!next_line()) throw fail("truncated $MeshFormat");
      std::istringstream ls(line);
      std::string ver;
      int file_type = -1, data_size = -1;
      ls >> ver >> file_type >> data_size;
      if (ver.rfind("2.2", 0) != 0 || file_type != 0) {
        throw fail("unsupported mesh format '" + line + "' (need MSH 2.2 ASCII)");
      }
      if (!next_line() || line != "$EndMeshFormat") throw fail("missing $EndMeshFormat");
    } else if (line == "$Nodes") {
      saw_nodes = true;
      if (!next_line()) throw fail("truncated $Nodes");
      const int n = std::stoi(line);
      for (int i = 0; i < n; ++i) {
        if (!next_line()) throw fail("truncated node list");
        std::istringstream ls(line);
        int id;
        double x, y, z;
        if (!(ls >> id >> x >> y >> z)) throw fail("malformed node record");
        node_id_to_index[id] = m.vertex_count();
        m.vertices.emplace_back(x, y);
      }
      if (!next_line() || line != "$EndNodes") throw fail("missing $EndNodes");
    } else if (line == "$Elements") {
      saw_elements = true;
      if (!next_line()) throw fail("truncated $Elements");
      const int n = std::stoi(line);
      for (int i = 0; i < n; ++i) {
        if (!next_line()) throw fail("truncated element list");
        std::istringstream ls(line);
        int id, type, ntags;
        if (!(ls >> id >> type >> ntags)) throw fail("malformed element record");
        for (int t = 0; t < ntags; ++t) {
          int dummy;
          ls >> dummy;
        }
        auto node = [&](int raw) {
          auto it = node_id_to_index.find(raw);
          if (it == node_id_to_index.end()) {
            throw fail("element " + std::to_string(id) + " references unknown node " +
                       std::to_string(raw));
          }
          return it->second;
        };
        if (type == 1) {
          int a, b;
          if (!(ls >> a >> b)) throw fail("malformed 2-node line element");
          line_elements.emplace_back(node(a), node(b));
        } else if (type == 2) {
          int a, b, c;
          if (!(ls >> a >> b >> c)) throw fail("malformed 3-node triangle element");
          m.triangles.push_back({node(a), node(b), node(c)});
        } else {
          throw fail("unsupported element type " + std::to_string(type) + " in element " +
                     std::to_string(id) + " (only 2-node lines and 3-node triangles)");
        }
      }
      if (!next_line() || line != "$EndElements") throw fail("missing $EndElements");
    }
    // other sections ($PhysicalNames, ...) are skipped silently
  }
  if (!saw_nodes || !saw_elements) throw MeshError("MSH: missing $Nodes or $Elements section");
  if (m.triangles.empty()) throw MeshError("MSH: no triangles");
  for (auto& tri : m.triangles) {
    const Vec2 a = m.vertices[tri[0]], b = m.vertices[tri[1]], c = m.vertices[tri[2]];
    if ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x() < 0) std::swap(tri[1], tri[2]);
  }
  rebuild_boundary(m);
  std::set<std::pair<int, int>> boundary;
  for (const auto& e : m.boundary_edges) {
    boundary.insert({std::min(e.a, e.b), std::max(e.a, e.b)});
  }
  for (const auto& [a, b] : line_elements) {
    if (!boundary.count({std::min(a, b), std::max(a, b)})) {
      throw MeshError("MSH: line element (" + std::to_string(a) + "," + std::to_string(b) +
                      ") is not a boundary edge of the triangulation");
    }
  }
  return m;
}

Mesh import_mesh(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw MeshError("cannot open mesh file: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  const std::string text = buf.str();
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".msh") {
    return mesh_from_msh_string(text);
  }
  return mesh_from_json_string(text);
}

void export_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw MeshError("cannot open mesh file for writing: " + path);
  f << mesh_to_json_string(mesh);
}

}  // namespace speclab
