#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace fracpow {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

// Boundary pieces of the quarter disk: G1 on x2 = 0, G2 on x1 = 0, G3 the arc.
enum class BoundaryLabel { G1 = 1, G2 = 2, G3 = 3 };

struct BoundaryEdge {
  std::array<std::size_t, 2> vertices{};
  BoundaryLabel label = BoundaryLabel::G1;

  friend bool operator==(const BoundaryEdge&, const BoundaryEdge&) = default;
};

struct Mesh {
  std::vector<Point> vertices;
  std::vector<std::array<std::size_t, 3>> triangles;  // counterclockwise
  std::vector<BoundaryEdge> boundary_edges;           // oriented along the boundary loop

  friend bool operator==(const Mesh&, const Mesh&) = default;
};

double signed_area(const Point& a, const Point& b, const Point& c);
double signed_area(const Mesh& mesh, std::size_t triangle);

// Structured radial-angular triangulation of the quarter unit disk. Level 1, 2
// and 3 use 10, 20 and 40 rings; ring i carries 2 i angular segments.
Mesh quarter_disk_mesh(int level);

// Ring count behind a refinement level (throws ParameterError outside 1..3).
std::size_t quarter_disk_rings(int level);
Mesh quarter_disk_mesh_with_rings(std::size_t rings);

// Checks the quarter-disk invariants; throws ValidationError naming the first
// one that fails.
void validate_quarter_disk(const Mesh& mesh);

// Plain-text format:
//   vertices N / triangles T / edges E
//   N lines "x y", T lines "i j k", E lines "i j G<label>"   (0-based indices)
void write_mesh(const Mesh& mesh, std::ostream& out);
void write_mesh(const Mesh& mesh, const std::filesystem::path& path);

// Parses the text format (ParseError with line number on malformed input) and
// validates the result (ValidationError).
Mesh read_mesh(std::istream& in);
Mesh read_mesh(const std::filesystem::path& path);

std::string to_string(BoundaryLabel label);

}  // namespace fracpow
