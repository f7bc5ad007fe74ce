#include "fracpow/geometry.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>
#include <utility>

#include "fracpow/error.hpp"

namespace fracpow {

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double signed_area(const Mesh& mesh, std::size_t triangle) {
  const auto& t = mesh.triangles[triangle];
  return signed_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
}

std::string to_string(BoundaryLabel label) {
  switch (label) {
    case BoundaryLabel::G1: return "G1";
    case BoundaryLabel::G2: return "G2";
    case BoundaryLabel::G3: return "G3";
  }
  return "?";
}

// --- Generation ----------------------------------------------------------------

std::size_t quarter_disk_rings(int level) {
  switch (level) {
    case 1: return 10;
    case 2: return 20;
    case 3: return 40;
    default: throw ParameterError("mesh level must be 1, 2 or 3");
  }
}

Mesh quarter_disk_mesh(int level) { return quarter_disk_mesh_with_rings(quarter_disk_rings(level)); }

Mesh quarter_disk_mesh_with_rings(std::size_t rings) {
  if (rings == 0) throw ParameterError("quarter disk mesh needs at least one ring");
  const std::size_t R = rings;
  // Ring i holds 2i + 1 nodes starting at index i^2; node 0 is the centre.
  auto index = [](std::size_t ring, std::size_t j) { return ring * ring + j; };

  Mesh mesh;
  mesh.vertices.reserve((R + 1) * (R + 1));
  mesh.vertices.push_back({0.0, 0.0});
  for (std::size_t i = 1; i <= R; ++i) {
    const double r = static_cast<double>(i) / static_cast<double>(R);
    const std::size_t segs = 2 * i;
    for (std::size_t j = 0; j <= segs; ++j) {
      if (j == 0) {
        mesh.vertices.push_back({r, 0.0});
      } else if (j == segs) {
        mesh.vertices.push_back({0.0, r});
      } else {
        const double theta = 0.5 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(segs);
        mesh.vertices.push_back({r * std::cos(theta), r * std::sin(theta)});
      }
    }
  }

  auto add_triangle = [&mesh](std::size_t a, std::size_t b, std::size_t c) {
    if (signed_area(mesh.vertices[a], mesh.vertices[b], mesh.vertices[c]) < 0.0) std::swap(b, c);
    mesh.triangles.push_back({a, b, c});
  };

  for (std::size_t i = 1; i <= R; ++i) {
    const std::size_t inner_segs = 2 * (i - 1);
    const std::size_t outer_segs = 2 * i;
    std::size_t a = 0;
    std::size_t b = 0;
    while (a < inner_segs || b < outer_segs) {
      // Advance along whichever ring has the smaller next angle:
      // a+1 on ring i-1 sits at (a+1)/(i-1), b+1 on ring i at (b+1)/i (units of pi/4).
      const bool advance_outer =
          a == inner_segs || (b < outer_segs && (b + 1) * (i - 1) <= (a + 1) * i);
      if (advance_outer) {
        add_triangle(index(i - 1, a), index(i, b), index(i, b + 1));
        ++b;
      } else {
        add_triangle(index(i - 1, a), index(i, b), index(i - 1, a + 1));
        ++a;
      }
    }
  }

  // Boundary loop: along x2 = 0 outwards, the arc counterclockwise, x1 = 0 inwards.
  for (std::size_t i = 0; i < R; ++i)
    mesh.boundary_edges.push_back({{index(i, 0), index(i + 1, 0)}, BoundaryLabel::G1});
  for (std::size_t j = 0; j < 2 * R; ++j)
    mesh.boundary_edges.push_back({{index(R, j), index(R, j + 1)}, BoundaryLabel::G3});
  for (std::size_t i = R; i >= 1; --i)
    mesh.boundary_edges.push_back(
        {{index(i, 2 * i), index(i - 1, 2 * (i - 1))}, BoundaryLabel::G2});
  return mesh;
}

// --- Validation ----------------------------------------------------------------

void validate_quarter_disk(const Mesh& mesh) {
  constexpr double kTol = 1e-12;
  const std::size_t nv = mesh.vertices.size();
  if (nv == 0) throw ValidationError("mesh has no vertices");
  if (mesh.triangles.empty()) throw ValidationError("mesh has no triangles");

  for (std::size_t v = 0; v < nv; ++v) {
    const auto& p = mesh.vertices[v];
    if (!(p.x >= 0.0 && p.y >= 0.0 && p.x * p.x + p.y * p.y <= 1.0 + kTol))
      throw ValidationError("vertex " + std::to_string(v) + " outside the quarter disk");
  }

  std::map<std::pair<std::size_t, std::size_t>, int> edge_use;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (std::size_t v : tri)
      if (v >= nv) throw ValidationError("triangle " + std::to_string(t) + " index out of range");
    if (!(signed_area(mesh, t) > 0.0))
      throw ValidationError("negative area in triangle " + std::to_string(t));
    for (int k = 0; k < 3; ++k) {
      std::size_t a = tri[k];
      std::size_t b = tri[(k + 1) % 3];
      if (a > b) std::swap(a, b);
      ++edge_use[{a, b}];
    }
  }

  std::map<std::size_t, int> loop_balance;
  std::map<std::pair<std::size_t, std::size_t>, int> boundary_set;
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    const auto& be = mesh.boundary_edges[e];
    const auto [a, b] = be.vertices;
    if (a >= nv || b >= nv) throw ValidationError("boundary edge " + std::to_string(e) + " index out of range");
    const Point& p = mesh.vertices[a];
    const Point& q = mesh.vertices[b];
    bool on_piece = false;
    switch (be.label) {
      case BoundaryLabel::G1: on_piece = p.y == 0.0 && q.y == 0.0; break;
      case BoundaryLabel::G2: on_piece = p.x == 0.0 && q.x == 0.0; break;
      case BoundaryLabel::G3:
        on_piece = std::abs(p.x * p.x + p.y * p.y - 1.0) <= kTol &&
                   std::abs(q.x * q.x + q.y * q.y - 1.0) <= kTol;
        break;
    }
    if (!on_piece)
      throw ValidationError("boundary edge " + std::to_string(e) + " does not lie on " +
                            to_string(be.label));
    ++loop_balance[a];
    --loop_balance[b];
    ++boundary_set[{std::min(a, b), std::max(a, b)}];
  }
  for (const auto& [v, balance] : loop_balance)
    if (balance != 0) throw ValidationError("boundary edges do not form closed loops");

  for (const auto& [edge, uses] : edge_use) {
    if (uses > 2) throw ValidationError("nonconforming mesh: edge shared by more than two triangles");
    const bool marked = boundary_set.contains(edge);
    if (uses == 1 && !marked) throw ValidationError("unlabeled boundary edge");
    if (uses == 2 && marked) throw ValidationError("interior edge labeled as boundary");
  }
  for (const auto& [edge, count] : boundary_set)
    if (count != 1 || !edge_use.contains(edge))
      throw ValidationError("boundary edge is not a triangle edge");
}

// --- Text IO -------------------------------------------------------------------

void write_mesh(const Mesh& mesh, std::ostream& out) {
  out << "vertices " << mesh.vertices.size() << " / triangles " << mesh.triangles.size()
      << " / edges " << mesh.boundary_edges.size() << '\n';
  out << std::setprecision(17);
  for (const auto& p : mesh.vertices) out << p.x << ' ' << p.y << '\n';
  for (const auto& t : mesh.triangles) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (const auto& e : mesh.boundary_edges)
    out << e.vertices[0] << ' ' << e.vertices[1] << ' ' << to_string(e.label) << '\n';
}

void write_mesh(const Mesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_mesh(mesh, out);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

namespace {

std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string tok; ss >> tok;) out.push_back(tok);
  return out;
}

template <class T>
T parse_number(const std::string& tok, std::size_t line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("malformed number '" + tok + "'", line);
  return value;
}

}  // namespace

Mesh read_mesh(std::istream& in) {
  std::size_t line_no = 0;
  std::string line;
  auto next_tokens = [&]() -> std::vector<std::string> {
    while (std::getline(in, line)) {
      ++line_no;
      auto toks = tokens_of(line);
      if (!toks.empty()) return toks;
    }
    throw ParseError("unexpected end of file", line_no + 1);
  };

  std::vector<std::string> header;
  try {
    header = next_tokens();
  } catch (const ParseError&) {
    throw ParseError("missing header (empty file)", 1);
  }
  std::erase(header, std::string("/"));
  if (header.size() != 6 || header[0] != "vertices" || header[2] != "triangles" ||
      header[4] != "edges")
    throw ParseError("header must read 'vertices N / triangles T / edges E'", line_no);
  const auto nv = parse_number<std::size_t>(header[1], line_no);
  const auto nt = parse_number<std::size_t>(header[3], line_no);
  const auto ne = parse_number<std::size_t>(header[5], line_no);

  Mesh mesh;
  mesh.vertices.reserve(nv);
  for (std::size_t k = 0; k < nv; ++k) {
    const auto t = next_tokens();
    if (t.size() != 2) throw ParseError("vertex line needs 2 coordinates", line_no);
    mesh.vertices.push_back({parse_number<double>(t[0], line_no), parse_number<double>(t[1], line_no)});
  }
  mesh.triangles.reserve(nt);
  for (std::size_t k = 0; k < nt; ++k) {
    const auto t = next_tokens();
    if (t.size() != 3) throw ParseError("triangle line needs 3 indices", line_no);
    mesh.triangles.push_back({parse_number<std::size_t>(t[0], line_no),
                              parse_number<std::size_t>(t[1], line_no),
                              parse_number<std::size_t>(t[2], line_no)});
  }
  mesh.boundary_edges.reserve(ne);
  for (std::size_t k = 0; k < ne; ++k) {
    const auto t = next_tokens();
    if (t.size() != 3) throw ParseError("edge line needs 2 indices and a label", line_no);
    BoundaryLabel label;
    if (t[2] == "G1")
      label = BoundaryLabel::G1;
    else if (t[2] == "G2")
      label = BoundaryLabel::G2;
    else if (t[2] == "G3")
      label = BoundaryLabel::G3;
    else
      throw ParseError("unknown boundary label '" + t[2] + "'", line_no);
    mesh.boundary_edges.push_back(
        {{parse_number<std::size_t>(t[0], line_no), parse_number<std::size_t>(t[1], line_no)}, label});
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!tokens_of(line).empty()) throw ParseError("trailing content after mesh", line_no);
  }

  validate_quarter_disk(mesh);
  return mesh;
}

Mesh read_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_mesh(in);
}

}  // namespace fracpow
