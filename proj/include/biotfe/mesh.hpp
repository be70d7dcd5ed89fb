// Simplicial meshes with a fixed global orientation for every face.

#ifndef BIOTFE_MESH_HPP
#define BIOTFE_MESH_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace biotfe {

using Index = std::int64_t;

inline constexpr Index kNoIndex = -1;

/// Essential/natural condition for the displacement on a boundary face.
enum class DisplacementBc { clamped, traction };

/// Essential/natural condition for the Darcy flux on a boundary face.
enum class FlowBc { no_flow, pressure };

/// Condition attached to one boundary face. The two classical pieces of the
/// boundary are Gamma_c = {clamped, no_flow} and Gamma_t = {traction, pressure};
/// other combinations (e.g. clamped displacement with prescribed pressure) are
/// allowed.
struct BoundaryCondition {
  DisplacementBc displacement = DisplacementBc::clamped;
  FlowBc flow = FlowBc::no_flow;

  static constexpr BoundaryCondition gamma_c() { return {DisplacementBc::clamped, FlowBc::no_flow}; }
  static constexpr BoundaryCondition gamma_t() { return {DisplacementBc::traction, FlowBc::pressure}; }
  /// u = 0 and p prescribed, used by the locking experiment.
  static constexpr BoundaryCondition full_dirichlet() { return {DisplacementBc::clamped, FlowBc::pressure}; }

  friend bool operator==(const BoundaryCondition&, const BoundaryCondition&) = default;
};

enum class Diagonal { right_down, right_up };

inline Diagonal parse_diagonal(const std::string& s) {
  if (s == "right-down") return Diagonal::right_down;
  if (s == "right-up") return Diagonal::right_up;
  throw std::invalid_argument("unknown diagonal direction '" + s + "' (expected right-down or right-up)");
}

inline std::string to_string(Diagonal d) { return d == Diagonal::right_down ? "right-down" : "right-up"; }

template <int Dim>
class Mesh {
  static_assert(Dim == 2 || Dim == 3, "only triangles and tetrahedra are supported");

 public:
  static constexpr int dim = Dim;
  static constexpr int kCellVertices = Dim + 1;
  static constexpr int kFaceVertices = Dim;

  using Point = Eigen::Matrix<double, Dim, 1>;
  using CellVertices = std::array<Index, Dim + 1>;
  using FaceVertices = std::array<Index, Dim>;
  using CellFaces = std::array<Index, Dim + 1>;

  struct Face {
    FaceVertices vertices;  // sorted ascending
    Index owner = kNoIndex;     // T+, the lower adjacent cell id
    Index neighbor = kNoIndex;  // T-, kNoIndex on the boundary
    Point normal;               // n_e, outward from the owner
    double measure = 0.0;
    Point centroid;
    BoundaryCondition bc;  // meaningful on boundary faces only
    bool tagged = false;

    bool is_boundary() const { return neighbor == kNoIndex; }
  };

  Mesh(std::vector<Point> vertices, std::vector<CellVertices> cells)
      : vertices_(std::move(vertices)), cells_(std::move(cells)) {
    validate_cells();
    compute_cell_measures();
    enumerate_faces();
  }

  Index num_vertices() const { return static_cast<Index>(vertices_.size()); }
  Index num_cells() const { return static_cast<Index>(cells_.size()); }
  Index num_faces() const { return static_cast<Index>(faces_.size()); }

  const Point& vertex(Index v) const { return vertices_[v]; }
  const std::vector<Point>& vertices() const { return vertices_; }
  const CellVertices& cell(Index c) const { return cells_[c]; }
  const std::vector<CellVertices>& cells() const { return cells_; }
  const Face& face(Index f) const { return faces_[f]; }
  const std::vector<Face>& faces() const { return faces_; }

  /// Local face k of a cell is the face opposite local vertex k.
  const CellFaces& cell_faces(Index c) const { return cell_faces_[c]; }

  /// +1 if the cell owns the face (n_e is its outward normal), -1 otherwise.
  double face_sign(Index c, int local_face) const {
    return faces_[cell_faces_[c][local_face]].owner == c ? 1.0 : -1.0;
  }

  double cell_measure(Index c) const { return cell_measures_[c]; }
  double total_measure() const {
    double s = 0.0;
    for (double m : cell_measures_) s += m;
    return s;
  }

  Point cell_centroid(Index c) const {
    Point x = Point::Zero();
    for (Index v : cells_[c]) x += vertices_[v];
    return x / static_cast<double>(Dim + 1);
  }

  /// Diameter h_T (longest edge).
  double cell_diameter(Index c) const {
    double h = 0.0;
    const auto& cv = cells_[c];
    for (int i = 0; i < Dim + 1; ++i)
      for (int j = i + 1; j < Dim + 1; ++j) h = std::max(h, (vertices_[cv[i]] - vertices_[cv[j]]).norm());
    return h;
  }

  /// Inradius rho_T = d |T| / |dT|.
  double cell_inradius(Index c) const {
    double boundary = 0.0;
    for (Index f : cell_faces_[c]) boundary += faces_[f].measure;
    return Dim * cell_measures_[c] / boundary;
  }

  double max_diameter() const {
    double h = 0.0;
    for (Index c = 0; c < num_cells(); ++c) h = std::max(h, cell_diameter(c));
    return h;
  }

  /// max_T h_T / rho_T.
  double shape_regularity() const {
    double r = 0.0;
    for (Index c = 0; c < num_cells(); ++c) r = std::max(r, cell_diameter(c) / cell_inradius(c));
    return r;
  }

  static constexpr double kShapeRegularityWarning = 20.0;

  Index num_boundary_faces() const {
    return std::count_if(faces_.begin(), faces_.end(), [](const Face& f) { return f.is_boundary(); });
  }
  Index num_interior_faces() const { return num_faces() - num_boundary_faces(); }

  bool boundary_tagged() const {
    return std::all_of(faces_.begin(), faces_.end(), [](const Face& f) { return !f.is_boundary() || f.tagged; });
  }

  /// Faces that carry a bubble: interior faces plus traction boundary faces.
  bool carries_bubble(Index f) const {
    const Face& face = faces_[f];
    if (!face.is_boundary()) return true;
    return face.tagged && face.bc.displacement == DisplacementBc::traction;
  }

  /// Applies a boundary condition to every boundary face; the only mutation
  /// allowed, used by classify_boundary on a private copy.
  void set_boundary_condition(Index f, BoundaryCondition bc) {
    if (!faces_[f].is_boundary()) throw std::invalid_argument("cannot tag an interior face");
    faces_[f].bc = bc;
    faces_[f].tagged = true;
  }

  /// Vertices lying on at least one boundary face.
  std::vector<bool> boundary_vertex_mask() const {
    std::vector<bool> mask(vertices_.size(), false);
    for (const Face& f : faces_)
      if (f.is_boundary())
        for (Index v : f.vertices) mask[v] = true;
    return mask;
  }

 private:
  void validate_cells() {
    if (cells_.empty()) throw std::invalid_argument("mesh has no cells");
    for (const auto& c : cells_) {
      for (Index v : c)
        if (v < 0 || v >= num_vertices()) throw std::invalid_argument("cell references vertex out of range");
      auto sorted = c;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("cell with repeated vertex");
    }
  }

  void compute_cell_measures() {
    double factorial = 1.0;
    for (int k = 2; k <= Dim; ++k) factorial *= k;
    cell_measures_.resize(cells_.size());
    for (std::size_t c = 0; c < cells_.size(); ++c) {
      Eigen::Matrix<double, Dim, Dim> J;
      for (int k = 0; k < Dim; ++k) J.col(k) = vertices_[cells_[c][k + 1]] - vertices_[cells_[c][0]];
      const double vol = std::abs(J.determinant()) / factorial;
      if (!(vol > 0.0)) throw std::invalid_argument("degenerate cell " + std::to_string(c));
      cell_measures_[c] = vol;
    }
  }

  void enumerate_faces() {
    std::map<FaceVertices, Index> lookup;
    cell_faces_.resize(cells_.size());
    for (Index c = 0; c < num_cells(); ++c) {
      for (int k = 0; k < Dim + 1; ++k) {
        FaceVertices fv;
        int m = 0;
        for (int j = 0; j < Dim + 1; ++j)
          if (j != k) fv[m++] = cells_[c][j];
        std::sort(fv.begin(), fv.end());
        auto [it, inserted] = lookup.try_emplace(fv, num_faces());
        if (inserted) {
          Face f;
          f.vertices = fv;
          f.owner = c;
          faces_.push_back(f);
        } else {
          Face& f = faces_[it->second];
          if (f.neighbor != kNoIndex)
            throw std::invalid_argument("non-manifold connectivity: face shared by more than two cells");
          f.neighbor = c;
        }
        cell_faces_[c][k] = it->second;
      }
    }
    for (Index fi = 0; fi < num_faces(); ++fi) {
      Face& f = faces_[fi];
      f.centroid = Point::Zero();
      for (Index v : f.vertices) f.centroid += vertices_[v];
      f.centroid /= static_cast<double>(Dim);
      Point n;
      if constexpr (Dim == 2) {
        const Point t = vertices_[f.vertices[1]] - vertices_[f.vertices[0]];
        f.measure = t.norm();
        n = Point(t.y(), -t.x()) / f.measure;
      } else {
        const Eigen::Vector3d a = vertices_[f.vertices[1]] - vertices_[f.vertices[0]];
        const Eigen::Vector3d b = vertices_[f.vertices[2]] - vertices_[f.vertices[0]];
        const Eigen::Vector3d cr = a.cross(b);
        f.measure = 0.5 * cr.norm();
        n = cr.normalized();
      }
      // Orient away from the owner's vertex opposite the face.
      const auto& oc = cells_[f.owner];
      Index opposite = kNoIndex;
      for (Index v : oc)
        if (std::find(f.vertices.begin(), f.vertices.end(), v) == f.vertices.end()) opposite = v;
      if (n.dot(f.centroid - vertices_[opposite]) < 0.0) n = -n;
      f.normal = n;
    }
  }

  std::vector<Point> vertices_;
  std::vector<CellVertices> cells_;
  std::vector<double> cell_measures_;
  std::vector<Face> faces_;
  std::vector<CellFaces> cell_faces_;
};

using Mesh2 = Mesh<2>;
using Mesh3 = Mesh<3>;

/// (N x N) squares on the unit square, each split into two right triangles.
inline Mesh2 build_structured_unit_square(Index n, Diagonal diagonal = Diagonal::right_down) {
  if (n < 1) throw std::invalid_argument("structured grid needs N >= 1");
  std::vector<Mesh2::Point> vertices;
  vertices.reserve((n + 1) * (n + 1));
  for (Index j = 0; j <= n; ++j)
    for (Index i = 0; i <= n; ++i)
      vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
  auto id = [n](Index i, Index j) { return j * (n + 1) + i; };
  std::vector<Mesh2::CellVertices> cells;
  cells.reserve(2 * n * n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (diagonal == Diagonal::right_down) {
        cells.push_back({id(i, j), id(i + 1, j), id(i, j + 1)});
        cells.push_back({id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
      } else {
        cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
        cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
      }
    }
  }
  return Mesh2(std::move(vertices), std::move(cells));
}

/// Unit cube split into N^3 cubes of six tetrahedra each (Kuhn subdivision).
inline Mesh3 build_structured_unit_cube(Index n) {
  if (n < 1) throw std::invalid_argument("structured grid needs N >= 1");
  std::vector<Mesh3::Point> vertices;
  for (Index k = 0; k <= n; ++k)
    for (Index j = 0; j <= n; ++j)
      for (Index i = 0; i <= n; ++i)
        vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n, static_cast<double>(k) / n);
  auto id = [n](Index i, Index j, Index k) { return (k * (n + 1) + j) * (n + 1) + i; };
  std::vector<Mesh3::CellVertices> cells;
  std::array<int, 3> axes{0, 1, 2};
  for (Index k = 0; k < n; ++k)
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i) {
        std::array<int, 3> perm = axes;
        do {
          std::array<Index, 3> p{i, j, k};
          Mesh3::CellVertices tet;
          tet[0] = id(p[0], p[1], p[2]);
          for (int s = 0; s < 3; ++s) {
            ++p[perm[s]];
            tet[s + 1] = id(p[0], p[1], p[2]);
          }
          cells.push_back(tet);
        } while (std::next_permutation(perm.begin(), perm.end()));
      }
  return Mesh3(std::move(vertices), std::move(cells));
}

/// Moves every interior vertex by a uniform random offset of at most
/// `amplitude` times the local spacing in each coordinate.
template <int Dim>
Mesh<Dim> perturb_interior_vertices(const Mesh<Dim>& mesh, double amplitude, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-amplitude, amplitude);
  const auto on_boundary = mesh.boundary_vertex_mask();
  std::vector<double> spacing(mesh.num_vertices(), std::numeric_limits<double>::max());
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const auto& cv = mesh.cell(c);
    for (int i = 0; i < Dim + 1; ++i)
      for (int j = 0; j < Dim + 1; ++j)
        if (i != j) {
          const double len = (mesh.vertex(cv[i]) - mesh.vertex(cv[j])).norm();
          spacing[cv[i]] = std::min(spacing[cv[i]], len);
        }
  }
  auto vertices = mesh.vertices();
  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    typename Mesh<Dim>::Point offset;
    for (int k = 0; k < Dim; ++k) offset[k] = dist(rng);
    if (!on_boundary[v]) vertices[v] += spacing[v] * offset;
  }
  return Mesh<Dim>(std::move(vertices), mesh.cells());
}

/// Boundary tagging rules, matched in order against each boundary face centroid.
template <int Dim>
struct BoundarySpec {
  using Point = typename Mesh<Dim>::Point;
  struct Rule {
    std::function<bool(const Point&)> where;
    BoundaryCondition bc;
  };
  std::vector<Rule> rules;

  BoundarySpec& add(std::function<bool(const Point&)> where, BoundaryCondition bc) {
    rules.push_back({std::move(where), bc});
    return *this;
  }

  /// The same condition on all of the boundary.
  static BoundarySpec everywhere(BoundaryCondition bc) {
    BoundarySpec s;
    s.add([](const Point&) { return true; }, bc);
    return s;
  }
};

/// Returns a copy of the mesh with every boundary face tagged; throws if a
/// boundary face matches no rule.
template <int Dim>
Mesh<Dim> classify_boundary(const Mesh<Dim>& mesh, const BoundarySpec<Dim>& spec) {
  Mesh<Dim> tagged = mesh;
  for (Index f = 0; f < tagged.num_faces(); ++f) {
    const auto& face = tagged.face(f);
    if (!face.is_boundary()) continue;
    bool matched = false;
    for (const auto& rule : spec.rules) {
      if (rule.where(face.centroid)) {
        tagged.set_boundary_condition(f, rule.bc);
        matched = true;
        break;
      }
    }
    if (!matched) {
      std::ostringstream msg;
      msg << "boundary face " << f << " at (" << face.centroid.transpose() << ") matches no boundary rule";
      throw std::invalid_argument(msg.str());
    }
  }
  return tagged;
}

/// Number of faces carrying a bubble (interior plus traction faces).
template <int Dim>
Index count_bubble_faces(const Mesh<Dim>& mesh) {
  Index n = 0;
  for (Index f = 0; f < mesh.num_faces(); ++f) n += mesh.carries_bubble(f) ? 1 : 0;
  return n;
}

// Plain-text mesh file: "dim ncells nverts", then one vertex per line, then
// one cell per line with 0-based vertex ids.

template <int Dim>
void write_mesh(std::ostream& os, const Mesh<Dim>& mesh) {
  os << Dim << ' ' << mesh.num_cells() << ' ' << mesh.num_vertices() << '\n';
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& p : mesh.vertices()) {
    for (int k = 0; k < Dim; ++k) os << (k ? " " : "") << p[k];
    os << '\n';
  }
  for (const auto& c : mesh.cells()) {
    for (int k = 0; k < Dim + 1; ++k) os << (k ? " " : "") << c[k];
    os << '\n';
  }
}

inline int peek_mesh_dimension(std::istream& is) {
  const auto pos = is.tellg();
  int dim = 0;
  if (!(is >> dim)) throw std::runtime_error("mesh file: missing header");
  is.seekg(pos);
  return dim;
}

template <int Dim>
Mesh<Dim> read_mesh(std::istream& is) {
  int dim = 0;
  Index ncells = 0, nverts = 0;
  if (!(is >> dim >> ncells >> nverts)) throw std::runtime_error("mesh file: malformed header");
  if (dim != Dim) throw std::runtime_error("mesh file: dimension " + std::to_string(dim) + " does not match");
  if (ncells <= 0 || nverts <= 0) throw std::runtime_error("mesh file: empty mesh");
  std::vector<typename Mesh<Dim>::Point> vertices(nverts);
  for (auto& p : vertices)
    for (int k = 0; k < Dim; ++k)
      if (!(is >> p[k])) throw std::runtime_error("mesh file: truncated vertex list");
  std::vector<typename Mesh<Dim>::CellVertices> cells(ncells);
  for (auto& c : cells)
    for (int k = 0; k < Dim + 1; ++k)
      if (!(is >> c[k])) throw std::runtime_error("mesh file: truncated cell list");
  return Mesh<Dim>(std::move(vertices), std::move(cells));
}

template <int Dim>
Mesh<Dim> read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file " + path);
  return read_mesh<Dim>(in);
}

}  // namespace biotfe

#endif  // BIOTFE_MESH_HPP
