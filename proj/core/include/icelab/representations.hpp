#pragma once

#include "icelab/lattice.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace icelab {

class RepresentationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ModelParams {
    double a = 1.0;
    double b = 1.0;
    double c = 2.0;
    double c_b = 1.0;  // only read in boundary_cb mode; may be +inf

    double delta() const { return (a * a + b * b - c * c) / (2 * a * b); }
    void validate() const;
};

enum class VertexType { a1, a2, b1, b2, c1, c2 };
const char* to_string(VertexType t);
inline bool is_c_type(VertexType t) { return t == VertexType::c1 || t == VertexType::c2; }

// Heights around a vertex in slot order NW, NE, SE, SW. nullopt if the pattern is not a
// valid local height configuration.
std::optional<VertexType> classify(int nw, int ne, int se, int sw);

// plain: every vertex of D weighted by its type.
// boundary_cb: vertices off ∂_V D weighted by type, ∂_V vertices weigh c_b if c-type, else 1.
// stripped: only vertices off ∂_V D carry weight (the D \ ∂_V D measures).
enum class WeightMode { plain, boundary_cb, stripped };

// Height values on the faces outside D: face of the parity of n gets n, the other n+1,
// unless overridden.
struct BoundaryCondition {
    int n = 0;
    std::vector<std::pair<Face, int>> overrides;

    static BoundaryCondition flat(int n) { return {n, {}}; }
    int value(Face f) const;
};

// Height function on D together with its values on every outside face touching D.
struct HeightFunction {
    GeometryPtr geo;
    std::vector<int> h;  // indexed by geometry face index

    HeightFunction() = default;
    HeightFunction(GeometryPtr g, const BoundaryCondition& bc);  // interior set flat as well

    int at(Face f) const;
    bool valid() const;
    void validate() const;  // throws RepresentationError naming the first defect
};

struct TypeCounts {
    int a = 0, b = 0, c = 0;  // weighted vertices by type
    int cb = 0;               // c-type vertices of ∂_V D (boundary_cb mode only)
    friend bool operator==(const TypeCounts&, const TypeCounts&) = default;
};

VertexType classify_vertex(const HeightFunction& h, Vertex z);
TypeCounts type_counts(const Geometry& g, const std::vector<int>& h, WeightMode mode);
double weight_from_counts(const TypeCounts& n, const ModelParams& p);
double height_weight(const HeightFunction& h, const ModelParams& p, WeightMode mode);

// Spins: +1 where h mod 4 is 0 or 1.
struct SpinConfig {
    GeometryPtr geo;
    std::vector<std::int8_t> s;  // indexed by geometry face index

    bool ice_rule() const;
};

inline int spin_of_height(int h) {
    const int m = ((h % 4) + 4) % 4;
    return m <= 1 ? 1 : -1;
}

SpinConfig height_to_spin(const HeightFunction& h);
HeightFunction spin_to_height(const SpinConfig& s, Face anchor, int anchor_value);
TypeCounts spin_type_counts(const SpinConfig& s, WeightMode mode);
double spin_weight(const SpinConfig& s, const ModelParams& p, WeightMode mode);

// Edge orientation between two adjacent tabulated faces u, v:
// omega = h(odd face) - h(even face); +1 means the even face lies to the left of the arrow.
struct ArrowConfig {
    GeometryPtr geo;
    std::vector<std::int8_t> east;   // edge between face k and its east neighbour, 0 if absent
    std::vector<std::int8_t> north;  // edge between face k and its north neighbour

    int omega(Face u, Face v) const;
    bool ice_rule() const;  // two in, two out at every vertex of D
};

ArrowConfig height_to_arrows(const HeightFunction& h);
HeightFunction arrows_to_height(const ArrowConfig& a, Face anchor, int anchor_value);
bool arrow_event_A(const ArrowConfig& a, Face u, Face v);

void write_heights(std::ostream& os, const HeightFunction& h);
void write_spins(std::ostream& os, const SpinConfig& s);
// Read the grids back; the geometry fixes the layout. Throw RepresentationError with line numbers.
HeightFunction read_heights(std::istream& is, GeometryPtr geo);
SpinConfig read_spins(std::istream& is, GeometryPtr geo);

}  // namespace icelab
