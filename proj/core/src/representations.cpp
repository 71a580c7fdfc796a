#include "icelab/representations.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace icelab {

void ModelParams::validate() const {
    if (!(a > 0) || !(b > 0) || !(c > 0)) throw RepresentationError("vertex weights a, b, c must be positive");
    if (!(c_b >= 0)) throw RepresentationError("c_b must be nonnegative");
}

const char* to_string(VertexType t) {
    switch (t) {
        case VertexType::a1: return "a1";
        case VertexType::a2: return "a2";
        case VertexType::b1: return "b1";
        case VertexType::b2: return "b2";
        case VertexType::c1: return "c1";
        default: return "c2";
    }
}

std::optional<VertexType> classify(int nw, int ne, int se, int sw) {
    if (std::abs(nw - ne) != 1 || std::abs(ne - se) != 1 || std::abs(se - sw) != 1 || std::abs(sw - nw) != 1)
        return std::nullopt;
    if (nw == se && ne == sw) return ne > nw ? VertexType::c1 : VertexType::c2;
    if (ne == sw) return nw == ne + 1 ? VertexType::a1 : VertexType::a2;
    return ne == nw + 1 ? VertexType::b1 : VertexType::b2;
}

int BoundaryCondition::value(Face f) const {
    for (const auto& [g, v] : overrides)
        if (g == f) return v;
    const bool same = (((f.i + f.j) & 1) == (n & 1));
    return same ? n : n + 1;
}

HeightFunction::HeightFunction(GeometryPtr g, const BoundaryCondition& bc) : geo(std::move(g)) {
    h.resize(geo->face_count());
    for (int k = 0; k < geo->face_count(); ++k) h[k] = bc.value(geo->face(k));
}

int HeightFunction::at(Face f) const {
    const int k = geo->face_index(f);
    if (k < 0) throw RepresentationError("face outside the tabulated region");
    return h[k];
}

namespace {

// Each tabulated face with its tabulated east and north neighbours.
template <class F>
void for_each_adjacent_pair(const Geometry& g, F&& f) {
    for (int k = 0; k < g.face_count(); ++k) {
        const Face u = g.face(k);
        const int e = g.face_index({u.i + 1, u.j}), n = g.face_index({u.i, u.j + 1});
        if (e >= 0) f(k, e);
        if (n >= 0) f(k, n);
    }
}

}  // namespace

void HeightFunction::validate() const {
    if (!geo) throw RepresentationError("height function without a domain");
    if (static_cast<int>(h.size()) != geo->face_count()) throw RepresentationError("height vector has the wrong size");
    for (int k = 0; k < geo->face_count(); ++k)
        if (((h[k] & 1) != 0) == is_even(geo->face(k)))
            throw RepresentationError("height parity differs from face parity");
    for_each_adjacent_pair(*geo, [&](int u, int v) {
        if (std::abs(h[u] - h[v]) != 1) throw RepresentationError("adjacent heights do not differ by one");
    });
}

bool HeightFunction::valid() const {
    try {
        validate();
        return true;
    } catch (const RepresentationError&) {
        return false;
    }
}

VertexType classify_vertex(const HeightFunction& h, Vertex z) {
    const int v = h.geo->vertex_index(z);
    if (v < 0) throw RepresentationError("vertex has fewer than four faces with defined heights");
    const auto& r = h.geo->vertices()[v];
    auto t = classify(h.h[r.face[NW]], h.h[r.face[NE]], h.h[r.face[SE]], h.h[r.face[SW]]);
    if (!t) throw RepresentationError("invalid local height pattern");
    return *t;
}

TypeCounts type_counts(const Geometry& g, const std::vector<int>& h, WeightMode mode) {
    TypeCounts n;
    for (const auto& r : g.vertices()) {
        auto t = classify(h[r.face[NW]], h[r.face[NE]], h[r.face[SE]], h[r.face[SW]]);
        if (!t) throw RepresentationError("invalid local height pattern");
        if (r.boundary && mode != WeightMode::plain) {
            if (mode == WeightMode::boundary_cb && is_c_type(*t)) ++n.cb;
            continue;
        }
        if (is_c_type(*t))
            ++n.c;
        else if (*t == VertexType::a1 || *t == VertexType::a2)
            ++n.a;
        else
            ++n.b;
    }
    return n;
}

double weight_from_counts(const TypeCounts& n, const ModelParams& p) {
    double w = std::pow(p.a, n.a) * std::pow(p.b, n.b) * std::pow(p.c, n.c);
    if (n.cb > 0) w *= std::pow(p.c_b, n.cb);
    return w;
}

double height_weight(const HeightFunction& h, const ModelParams& p, WeightMode mode) {
    h.validate();
    if (mode != WeightMode::plain && h.geo->domain().parity() == Parity::mixed)
        throw RepresentationError("boundary weights need a domain of fixed parity");
    return weight_from_counts(type_counts(*h.geo, h.h, mode), p);
}

bool SpinConfig::ice_rule() const {
    for (const auto& r : geo->vertices())
        if (s[r.face[NW]] != s[r.face[SE]] && s[r.face[NE]] != s[r.face[SW]]) return false;
    return true;
}

SpinConfig height_to_spin(const HeightFunction& h) {
    SpinConfig s{h.geo, std::vector<std::int8_t>(h.h.size())};
    for (std::size_t k = 0; k < h.h.size(); ++k) s.s[k] = static_cast<std::int8_t>(spin_of_height(h.h[k]));
    return s;
}

namespace {

// Breadth-first lift from the anchor; step(u, v, hu) returns h(v) given h(u).
template <class Step>
HeightFunction lift(const GeometryPtr& geo, Face anchor, int anchor_value, Step step) {
    const int a = geo->face_index(anchor);
    if (a < 0) throw RepresentationError("anchor face outside the tabulated region");
    if (((anchor_value & 1) != 0) == is_even(anchor)) throw RepresentationError("anchor value has the wrong parity");
    HeightFunction out;
    out.geo = geo;
    out.h.assign(geo->face_count(), 0);
    std::vector<char> seen(geo->face_count(), 0);
    std::deque<int> q{a};
    seen[a] = 1;
    out.h[a] = anchor_value;
    while (!q.empty()) {
        const int u = q.front();
        q.pop_front();
        for (Face f : neighbours(geo->face(u))) {
            const int v = geo->face_index(f);
            if (v < 0 || seen[v]) continue;
            seen[v] = 1;
            out.h[v] = step(u, v, out.h[u]);
            q.push_back(v);
        }
    }
    return out;
}

}  // namespace

HeightFunction spin_to_height(const SpinConfig& s, Face anchor, int anchor_value) {
    const int a = s.geo->face_index(anchor);
    if (a >= 0 && spin_of_height(anchor_value) != s.s[a]) throw RepresentationError("anchor value disagrees with the spin");
    auto h = lift(s.geo, anchor, anchor_value, [&](int, int v, int hu) {
        return spin_of_height(hu + 1) == s.s[v] ? hu + 1 : hu - 1;
    });
    if (!h.valid()) throw RepresentationError("spin configuration violates the ice rule");
    return h;
}

TypeCounts spin_type_counts(const SpinConfig& s, WeightMode mode) {
    TypeCounts n;
    for (const auto& r : s.geo->vertices()) {
        const bool d1 = s.s[r.face[NW]] == s.s[r.face[SE]];
        const bool d2 = s.s[r.face[NE]] == s.s[r.face[SW]];
        if (!d1 && !d2) throw RepresentationError("spin configuration violates the ice rule");
        if (r.boundary && mode != WeightMode::plain) {
            if (mode == WeightMode::boundary_cb && d1 && d2) ++n.cb;
            continue;
        }
        if (d1 && d2)
            ++n.c;
        else if (!d1)
            ++n.a;
        else
            ++n.b;
    }
    return n;
}

double spin_weight(const SpinConfig& s, const ModelParams& p, WeightMode mode) {
    return weight_from_counts(spin_type_counts(s, mode), p);
}

int ArrowConfig::omega(Face u, Face v) const {
    auto pick = [&](Face lo, Face hi) -> int {
        const int k = geo->face_index(lo);
        if (k < 0) throw RepresentationError("edge outside the tabulated region");
        if (hi.i == lo.i + 1 && hi.j == lo.j) return east[k];
        return north[k];
    };
    int w = 0;
    if (v.i == u.i + 1 && v.j == u.j)
        w = pick(u, v);
    else if (u.i == v.i + 1 && u.j == v.j)
        w = pick(v, u);
    else if (v.j == u.j + 1 && v.i == u.i)
        w = pick(u, v);
    else if (u.j == v.j + 1 && u.i == v.i)
        w = pick(v, u);
    else
        throw RepresentationError("faces are not adjacent");
    if (w == 0) throw RepresentationError("edge outside the tabulated region");
    return w;
}

namespace {
// h(v) - h(u) across the edge, from its orientation
int difference(Face v, int omega) { return is_even(v) ? -omega : omega; }
}  // namespace

bool ArrowConfig::ice_rule() const {
    for (const auto& r : geo->vertices()) {
        const int order[4] = {NW, NE, SE, SW};
        int total = 0, out = 0;
        for (int s = 0; s < 4; ++s) {
            const Face u = geo->face(r.face[order[s]]), v = geo->face(r.face[order[(s + 1) % 4]]);
            const int d = difference(v, omega(u, v));
            total += d;
            out += d > 0;
        }
        if (total != 0 || out != 2) return false;
    }
    return true;
}

ArrowConfig height_to_arrows(const HeightFunction& h) {
    h.validate();
    const Geometry& g = *h.geo;
    ArrowConfig a{h.geo, std::vector<std::int8_t>(g.face_count(), 0), std::vector<std::int8_t>(g.face_count(), 0)};
    for (int k = 0; k < g.face_count(); ++k) {
        const Face u = g.face(k);
        for (int dir = 0; dir < 2; ++dir) {
            const Face v = dir == 0 ? Face{u.i + 1, u.j} : Face{u.i, u.j + 1};
            const int m = g.face_index(v);
            if (m < 0) continue;
            const int w = is_even(u) ? h.h[m] - h.h[k] : h.h[k] - h.h[m];
            (dir == 0 ? a.east : a.north)[k] = static_cast<std::int8_t>(w);
        }
    }
    return a;
}

HeightFunction arrows_to_height(const ArrowConfig& a, Face anchor, int anchor_value) {
    auto h = lift(a.geo, anchor, anchor_value, [&](int u, int v, int hu) {
        const Face fv = a.geo->face(v);
        return hu + difference(fv, a.omega(a.geo->face(u), fv));
    });
    if (!h.valid()) throw RepresentationError("arrow configuration violates the ice rule");
    return h;
}

bool arrow_event_A(const ArrowConfig& a, Face u, Face v) { return a.omega(u, v) == 1; }

namespace {

struct Box {
    int i0, i1, j0, j1;
};

Box bounding_box(const Geometry& g) {
    Box b{g.face(0).i, g.face(0).i, g.face(0).j, g.face(0).j};
    for (int k = 0; k < g.face_count(); ++k) {
        b.i0 = std::min(b.i0, g.face(k).i);
        b.i1 = std::max(b.i1, g.face(k).i);
        b.j0 = std::min(b.j0, g.face(k).j);
        b.j1 = std::max(b.j1, g.face(k).j);
    }
    return b;
}

template <class Cell>
void write_grid(std::ostream& os, const Geometry& g, Cell cell) {
    const auto [i0, i1, j0, j1] = bounding_box(g);
    for (int j = j1; j >= j0; --j) {
        for (int i = i0; i <= i1; ++i) {
            if (i > i0) os << ' ';
            const int k = g.face_index({i, j});
            if (k < 0)
                os << '*';
            else
                cell(os, k);
        }
        os << '\n';
    }
}

// Inverse of write_grid; cell(k, token) parses one entry or returns false.
template <class Cell>
void read_grid(std::istream& is, const Geometry& g, Cell cell) {
    const auto [i0, i1, j0, j1] = bounding_box(g);
    auto fail = [](int lineno, const std::string& what) {
        throw RepresentationError("line " + std::to_string(lineno) + ": " + what);
    };
    std::string line, tok;
    int lineno = 0, j = j1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (j < j0) fail(lineno, "more rows than the domain has");
        std::istringstream ls(line);
        for (int i = i0; i <= i1; ++i) {
            if (!(ls >> tok)) fail(lineno, "row has too few entries");
            const int k = g.face_index({i, j});
            if ((k < 0) != (tok == "*")) fail(lineno, "'*' must mark exactly the faces outside the grid");
            if (k >= 0 && !cell(k, tok)) fail(lineno, "bad entry '" + tok + "'");
        }
        if (ls >> tok) fail(lineno, "row has too many entries");
        --j;
    }
    if (j >= j0) throw RepresentationError("grid ends after " + std::to_string(j1 - j) + " rows");
}

}  // namespace

HeightFunction read_heights(std::istream& is, GeometryPtr geo) {
    HeightFunction h;
    h.geo = geo;
    h.h.assign(geo->face_count(), 0);
    read_grid(is, *geo, [&](int k, const std::string& t) {
        std::size_t used = 0;
        try {
            h.h[k] = std::stoi(t, &used);
        } catch (const std::exception&) {
            return false;
        }
        return used == t.size();
    });
    h.validate();
    return h;
}

SpinConfig read_spins(std::istream& is, GeometryPtr geo) {
    SpinConfig s{geo, std::vector<std::int8_t>(geo->face_count(), 1)};
    read_grid(is, *geo, [&](int k, const std::string& t) {
        if (t != "+" && t != "-") return false;
        s.s[k] = t == "+" ? 1 : -1;
        return true;
    });
    if (!s.ice_rule()) throw RepresentationError("spin configuration violates the ice rule");
    return s;
}

void write_heights(std::ostream& os, const HeightFunction& h) {
    write_grid(os, *h.geo, [&](std::ostream& o, int k) { o << h.h[k]; });
}

void write_spins(std::ostream& os, const SpinConfig& s) {
    write_grid(os, *s.geo, [&](std::ostream& o, int k) { o << (s.s[k] > 0 ? '+' : '-'); });
}

}  // namespace icelab
