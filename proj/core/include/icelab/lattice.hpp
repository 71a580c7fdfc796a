#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace icelab {

// Face of Z^2 centred at (i, j).
struct Face {
    int i = 0;
    int j = 0;
    friend auto operator<=>(const Face&, const Face&) = default;
    Face operator+(Face o) const { return {i + o.i, j + o.j}; }
    Face operator-(Face o) const { return {i - o.i, j - o.j}; }
};

inline bool is_even(Face f) { return ((f.i + f.j) & 1) == 0; }

// Vertex of Z^2 in doubled coordinates; both components are odd.
struct Vertex {
    int x2 = 1;
    int y2 = 1;
    friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

// Faces around a vertex, in the order NW, NE, SE, SW.
enum Slot : int { NW = 0, NE = 1, SE = 2, SW = 3 };

inline Face face_at(Vertex z, int slot) {
    const int l = (z.x2 - 1) / 2, r = (z.x2 + 1) / 2;
    const int d = (z.y2 - 1) / 2, u = (z.y2 + 1) / 2;
    switch (slot) {
        case NW: return {l, u};
        case NE: return {r, u};
        case SE: return {r, d};
        default: return {l, d};
    }
}

// Corners of a face, in the order NE, NW, SW, SE (counter-clockwise).
inline std::array<Vertex, 4> corners(Face f) {
    return {Vertex{2 * f.i + 1, 2 * f.j + 1}, Vertex{2 * f.i - 1, 2 * f.j + 1},
            Vertex{2 * f.i - 1, 2 * f.j - 1}, Vertex{2 * f.i + 1, 2 * f.j - 1}};
}

// Edge-neighbours in the order E, N, W, S.
inline std::array<Face, 4> neighbours(Face f) {
    return {Face{f.i + 1, f.j}, Face{f.i, f.j + 1}, Face{f.i - 1, f.j}, Face{f.i, f.j - 1}};
}

enum class Parity { even, odd, mixed };
std::string to_string(Parity p);

class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Finite simply connected set of faces bounded by a simple cycle.
class Domain {
public:
    static Domain from_faces(std::vector<Face> faces);
    static Domain diamond(int N, Face center = {});
    static Domain rectangle(int width, int height, Face origin = {});
    // Faces with max(|i|,|j|) <= k around the centre.
    static Domain square(int k, Face center = {});

    // Raster order: rows from top (largest j) down, left to right within a row.
    const std::vector<Face>& faces() const { return faces_; }
    std::size_t size() const { return faces_.size(); }
    bool contains(Face f) const;
    std::optional<int> index_of(Face f) const;

    // Counter-clockwise boundary cycle (domain on the left).
    const std::vector<Vertex>& boundary_cycle() const { return cycle_; }
    Parity parity() const { return parity_; }

    std::vector<Vertex> vertices() const;           // every vertex of a face of D, sorted
    std::vector<Vertex> boundary_vertices() const;  // vertices belonging to exactly one face of D
    std::vector<Face> external_boundary() const;    // outside faces sharing an edge with D
    bool on_boundary(Vertex z) const;

    Domain translated(Face d) const;

    int min_i() const { return lo_.i; }
    int min_j() const { return lo_.j; }
    int max_i() const { return hi_.i; }
    int max_j() const { return hi_.j; }

    friend bool operator==(const Domain& a, const Domain& b) { return a.faces_ == b.faces_; }

private:
    Domain() = default;
    std::vector<Face> faces_;
    std::vector<Vertex> cycle_;
    Parity parity_ = Parity::mixed;
    Face lo_{}, hi_{};
    std::vector<int> grid_;  // bounding-box lookup, -1 outside

    int count_faces_at(Vertex z) const;
};

// Minimal graph used by the random-cluster code: edges may be loops or parallel.
struct Graph {
    int n = 0;
    std::vector<std::array<int, 2>> edges;
    std::vector<std::uint8_t> boundary;    // per vertex
    std::vector<std::uint8_t> edge_class;  // per edge: 0 = class A, 1 = class B

    int edge_count() const { return static_cast<int>(edges.size()); }
    bool connected() const;
};

// One of the two corner graphs. Edge k of either graph belongs to vertex k of D,
// so e_z and e_z* share an index and the pairing is its own inverse.
struct CornerGraph {
    Graph graph;
    std::vector<int> face_index;  // graph vertex -> geometry face index, -1 for corner classes / root
    std::vector<Face> corner_face;  // outside face owning a corner class (or {} for inner vertices)
    int root = -1;                  // D∘ only: the vertex standing for every outside odd face
};

struct VertexRecord {
    Vertex z;
    std::array<int, 4> face;  // geometry face indices at NW, NE, SE, SW
    std::array<int, 4> node;  // per slot: D• vertex for even faces, D∘ vertex for odd faces
    bool boundary = false;    // in ∂_V D
    bool class_a = false;     // NW face odd: the even pair sits on NE–SW
    // even pair / odd pair as slot indices
    std::array<int, 2> even_slots() const { return class_a ? std::array<int, 2>{NE, SW} : std::array<int, 2>{NW, SE}; }
    std::array<int, 2> odd_slots() const { return class_a ? std::array<int, 2>{NW, SE} : std::array<int, 2>{NE, SW}; }
};

// Index tables shared by configurations, samplers and the oracle. Immutable.
class Geometry {
public:
    explicit Geometry(Domain d);

    const Domain& domain() const { return domain_; }
    int inner_count() const { return n_inner_; }
    int face_count() const { return static_cast<int>(faces_.size()); }
    const Face& face(int k) const { return faces_[k]; }
    bool inner(int k) const { return k < n_inner_; }
    int face_index(Face f) const;  // -1 when the face is not tabulated

    const std::vector<VertexRecord>& vertices() const { return vertices_; }
    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int vertex_index(Vertex z) const;

    // For inner faces: neighbour face indices (E, N, W, S) and corner vertex indices (NE, NW, SW, SE).
    const std::array<int, 4>& face_neighbours(int k) const { return nbr_[k]; }
    const std::array<int, 4>& face_corners(int k) const { return corner_[k]; }

    const CornerGraph& primal() const { return primal_; }  // D•
    const CornerGraph& dual() const { return dual_; }      // D∘

private:
    Domain domain_;
    int n_inner_ = 0;
    std::vector<Face> faces_;
    std::vector<VertexRecord> vertices_;
    std::vector<std::array<int, 4>> nbr_;
    std::vector<std::array<int, 4>> corner_;
    CornerGraph primal_, dual_;
    Face lo_{}, hi_{};
    std::vector<int> face_grid_;
    std::vector<int> vertex_grid_;
};

using GeometryPtr = std::shared_ptr<const Geometry>;
GeometryPtr make_geometry(Domain d);

// Triangular connectivity on faces of one parity.
std::array<Face, 6> t_neighbours(Face u);
bool t_adjacent(Face u, Face v);

struct TCircuit {
    std::vector<Face> faces;  // cyclic; first face not repeated at the end
};

// Winding number of the straight-segment embedding around the point (x, y).
int winding_number(const TCircuit& c, double x, double y);
bool surrounds(const TCircuit& c, Face target);

// Exterior-most T-circuit of faces with the given parity that satisfy the predicate,
// lies inside the box and surrounds the target.
std::optional<TCircuit> exteriormost_t_circuit(const std::function<bool(Face)>& level, bool even_parity,
                                               const Domain& box, Face target);

// Domain snapshot text format.
void write_domain(std::ostream& os, const Domain& d);
Domain read_domain(std::istream& is);

}  // namespace icelab
