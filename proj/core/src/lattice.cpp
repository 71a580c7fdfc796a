#include "icelab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

namespace icelab {

namespace {

bool raster_less(Face a, Face b) { return a.j != b.j ? a.j > b.j : a.i < b.i; }

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

std::string to_string(Parity p) {
    switch (p) {
        case Parity::even: return "even";
        case Parity::odd: return "odd";
        default: return "mixed";
    }
}

Domain Domain::from_faces(std::vector<Face> faces) {
    if (faces.empty()) throw DomainError("domain has no faces");
    std::sort(faces.begin(), faces.end(), raster_less);
    faces.erase(std::unique(faces.begin(), faces.end()), faces.end());

    Domain d;
    d.faces_ = std::move(faces);
    d.lo_ = d.hi_ = d.faces_.front();
    for (Face f : d.faces_) {
        d.lo_.i = std::min(d.lo_.i, f.i);
        d.lo_.j = std::min(d.lo_.j, f.j);
        d.hi_.i = std::max(d.hi_.i, f.i);
        d.hi_.j = std::max(d.hi_.j, f.j);
    }
    const int w = d.hi_.i - d.lo_.i + 1, h = d.hi_.j - d.lo_.j + 1;
    d.grid_.assign(static_cast<std::size_t>(w) * h, -1);
    for (std::size_t k = 0; k < d.faces_.size(); ++k) {
        Face f = d.faces_[k];
        d.grid_[static_cast<std::size_t>(f.j - d.lo_.j) * w + (f.i - d.lo_.i)] = static_cast<int>(k);
    }

    // edge-connected
    {
        std::vector<char> seen(d.faces_.size(), 0);
        std::deque<int> q{0};
        seen[0] = 1;
        std::size_t reached = 1;
        while (!q.empty()) {
            Face f = d.faces_[q.front()];
            q.pop_front();
            for (Face g : neighbours(f)) {
                auto k = d.index_of(g);
                if (k && !seen[*k]) {
                    seen[*k] = 1;
                    ++reached;
                    q.push_back(*k);
                }
            }
        }
        if (reached != d.faces_.size()) throw DomainError("domain is not edge-connected");
    }
    // complement connected inside the box grown by one
    {
        const int W = w + 2, H = h + 2;
        std::vector<char> seen(static_cast<std::size_t>(W) * H, 0);
        auto at = [&](int i, int j) -> char& { return seen[static_cast<std::size_t>(j) * W + i]; };
        std::deque<std::pair<int, int>> q{{0, 0}};
        at(0, 0) = 1;
        while (!q.empty()) {
            auto [i, j] = q.front();
            q.pop_front();
            const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
            for (int r = 0; r < 4; ++r) {
                int a = i + di[r], b = j + dj[r];
                if (a < 0 || b < 0 || a >= W || b >= H || at(a, b)) continue;
                if (d.contains({a - 1 + d.lo_.i, b - 1 + d.lo_.j})) continue;
                at(a, b) = 1;
                q.push_back({a, b});
            }
        }
        for (int j = 0; j < H; ++j)
            for (int i = 0; i < W; ++i)
                if (!at(i, j) && !d.contains({i - 1 + d.lo_.i, j - 1 + d.lo_.j}))
                    throw DomainError("domain has a hole");
    }
    // no pinch vertices
    for (Vertex z : d.vertices()) {
        bool in[4];
        for (int s = 0; s < 4; ++s) in[s] = d.contains(face_at(z, s));
        if ((in[NW] && in[SE] && !in[NE] && !in[SW]) || (in[NE] && in[SW] && !in[NW] && !in[SE]))
            throw DomainError("domain boundary touches itself at a vertex");
    }

    // boundary cycle, domain on the left
    std::map<Vertex, Vertex> next;
    for (Face f : d.faces_) {
        auto c = corners(f);  // NE, NW, SW, SE
        auto nb = neighbours(f);  // E, N, W, S
        if (!d.contains(nb[0])) next[c[3]] = c[0];
        if (!d.contains(nb[1])) next[c[0]] = c[1];
        if (!d.contains(nb[2])) next[c[1]] = c[2];
        if (!d.contains(nb[3])) next[c[2]] = c[3];
    }
    Vertex start = next.begin()->first, z = start;
    do {
        d.cycle_.push_back(z);
        z = next.at(z);
    } while (z != start);
    if (d.cycle_.size() != next.size()) throw DomainError("boundary is not a single cycle");

    bool any_even = false, any_odd = false;
    for (Face f : d.external_boundary()) (is_even(f) ? any_even : any_odd) = true;
    d.parity_ = any_even && any_odd ? Parity::mixed : (any_even ? Parity::even : Parity::odd);
    return d;
}

Domain Domain::diamond(int N, Face center) {
    if (N < 1) throw DomainError("diamond size must be positive");
    std::vector<Face> f;
    for (int j = -(N - 1); j <= N - 1; ++j)
        for (int i = -(N - 1); i <= N - 1; ++i)
            if (std::abs(i) + std::abs(j) <= N - 1) f.push_back(Face{i, j} + center);
    return from_faces(std::move(f));
}

Domain Domain::rectangle(int width, int height, Face origin) {
    if (width < 1 || height < 1) throw DomainError("rectangle sides must be positive");
    std::vector<Face> f;
    for (int j = 0; j < height; ++j)
        for (int i = 0; i < width; ++i) f.push_back(Face{i, j} + origin);
    return from_faces(std::move(f));
}

Domain Domain::square(int k, Face center) {
    if (k < 0) throw DomainError("square half-width must be nonnegative");
    std::vector<Face> f;
    for (int j = -k; j <= k; ++j)
        for (int i = -k; i <= k; ++i) f.push_back(Face{i, j} + center);
    return from_faces(std::move(f));
}

bool Domain::contains(Face f) const { return index_of(f).has_value(); }

std::optional<int> Domain::index_of(Face f) const {
    if (f.i < lo_.i || f.i > hi_.i || f.j < lo_.j || f.j > hi_.j) return std::nullopt;
    const int w = hi_.i - lo_.i + 1;
    int k = grid_[static_cast<std::size_t>(f.j - lo_.j) * w + (f.i - lo_.i)];
    if (k < 0) return std::nullopt;
    return k;
}

int Domain::count_faces_at(Vertex z) const {
    int n = 0;
    for (int s = 0; s < 4; ++s) n += contains(face_at(z, s));
    return n;
}

std::vector<Vertex> Domain::vertices() const {
    std::vector<Vertex> v;
    v.reserve(faces_.size() * 2 + 4);
    for (Face f : faces_)
        for (Vertex z : corners(f)) v.push_back(z);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::vector<Vertex> Domain::boundary_vertices() const {
    std::vector<Vertex> v;
    for (Vertex z : vertices())
        if (count_faces_at(z) == 1) v.push_back(z);
    return v;
}

bool Domain::on_boundary(Vertex z) const { return count_faces_at(z) == 1; }

std::vector<Face> Domain::external_boundary() const {
    std::vector<Face> out;
    for (Face f : faces_)
        for (Face g : neighbours(f))
            if (!contains(g)) out.push_back(g);
    std::sort(out.begin(), out.end(), raster_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Domain Domain::translated(Face d) const {
    std::vector<Face> f = faces_;
    for (Face& g : f) g = g + d;
    return from_faces(std::move(f));
}

bool Graph::connected() const {
    if (n == 0) return true;
    UnionFind uf(n);
    for (auto [a, b] : edges) uf.unite(a, b);
    int r = uf.find(0);
    for (int v = 1; v < n; ++v)
        if (uf.find(v) != r) return false;
    return true;
}

Geometry::Geometry(Domain d) : domain_(std::move(d)) {
    faces_ = domain_.faces();
    n_inner_ = static_cast<int>(faces_.size());
    const auto verts = domain_.vertices();

    std::vector<Face> halo;
    for (Vertex z : verts)
        for (int s = 0; s < 4; ++s)
            if (!domain_.contains(face_at(z, s))) halo.push_back(face_at(z, s));
    std::sort(halo.begin(), halo.end(), raster_less);
    halo.erase(std::unique(halo.begin(), halo.end()), halo.end());
    faces_.insert(faces_.end(), halo.begin(), halo.end());

    lo_ = {domain_.min_i() - 1, domain_.min_j() - 1};
    hi_ = {domain_.max_i() + 1, domain_.max_j() + 1};
    const int W = hi_.i - lo_.i + 1, H = hi_.j - lo_.j + 1;
    face_grid_.assign(static_cast<std::size_t>(W) * H, -1);
    for (int k = 0; k < face_count(); ++k)
        face_grid_[static_cast<std::size_t>(faces_[k].j - lo_.j) * W + (faces_[k].i - lo_.i)] = k;
    // vertex (x2, y2) with x2 in [2 lo.i + 1, 2 hi.i - 1]
    vertex_grid_.assign(static_cast<std::size_t>(W) * H, -1);

    vertices_.resize(verts.size());
    for (std::size_t v = 0; v < verts.size(); ++v) {
        VertexRecord& r = vertices_[v];
        r.z = verts[v];
        int inside = 0;
        for (int s = 0; s < 4; ++s) {
            r.face[s] = face_index(face_at(r.z, s));
            inside += inner(r.face[s]);
        }
        r.boundary = inside == 1;
        r.class_a = !is_even(face_at(r.z, NW));
        const int xi = (r.z.x2 - 2 * lo_.i - 1) / 2, yi = (r.z.y2 - 2 * lo_.j - 1) / 2;
        vertex_grid_[static_cast<std::size_t>(yi) * W + xi] = static_cast<int>(v);
    }

    nbr_.resize(n_inner_);
    corner_.resize(n_inner_);
    for (int k = 0; k < n_inner_; ++k) {
        auto nb = neighbours(faces_[k]);
        auto cs = corners(faces_[k]);
        for (int s = 0; s < 4; ++s) {
            nbr_[k][s] = face_index(nb[s]);
            corner_[k][s] = vertex_index(cs[s]);
        }
    }

    // D• vertices: inner even faces, then corner classes.
    std::vector<int> node_of_face(face_count(), -1);
    int n_primal = 0, n_dual = 0;
    for (int k = 0; k < n_inner_; ++k) {
        if (is_even(faces_[k])) {
            node_of_face[k] = n_primal++;
            primal_.face_index.push_back(k);
            primal_.corner_face.push_back(faces_[k]);
        } else {
            node_of_face[k] = n_dual++;
            dual_.face_index.push_back(k);
            dual_.corner_face.push_back(faces_[k]);
        }
    }
    const int n_inner_even = n_primal;
    // corner keys (outside even face, vertex of D)
    std::map<std::pair<int, int>, int> corner_key;
    for (int v = 0; v < vertex_count(); ++v)
        for (int s = 0; s < 4; ++s) {
            int f = vertices_[v].face[s];
            if (!inner(f) && is_even(faces_[f])) corner_key.emplace(std::pair{f, v}, 0);
        }
    {
        int id = 0;
        for (auto& [key, val] : corner_key) val = id++;
    }
    UnionFind uf(static_cast<int>(corner_key.size()));
    for (auto& [key, id] : corner_key) {
        const int f = key.first;
        auto cs = corners(faces_[f]);     // NE, NW, SW, SE
        auto nb = neighbours(faces_[f]);  // E, N, W, S
        // side between consecutive corners: NE-NW north, NW-SW west, SW-SE south, SE-NE east
        const int side_nbr[4] = {1, 2, 3, 0};
        for (int s = 0; s < 4; ++s) {
            int across = face_index(nb[side_nbr[s]]);
            if (across < 0 || !inner(across)) continue;
            int z0 = vertex_index(cs[s]), z1 = vertex_index(cs[(s + 1) % 4]);
            auto a = corner_key.find({f, z0}), b = corner_key.find({f, z1});
            if (a != corner_key.end() && b != corner_key.end()) uf.unite(a->second, b->second);
        }
    }
    std::map<int, int> class_node;
    for (auto& [key, id] : corner_key) {
        int r = uf.find(id);
        if (!class_node.count(r)) {
            class_node[r] = n_primal++;
            primal_.face_index.push_back(-1);
            primal_.corner_face.push_back(faces_[key.first]);
        }
    }
    dual_.root = n_dual++;
    dual_.face_index.push_back(-1);
    dual_.corner_face.push_back(Face{});

    primal_.graph.n = n_primal;
    primal_.graph.boundary.assign(n_primal, 0);
    for (int u = n_inner_even; u < n_primal; ++u) primal_.graph.boundary[u] = 1;
    dual_.graph.n = n_dual;
    dual_.graph.boundary.assign(n_dual, 0);
    dual_.graph.boundary[dual_.root] = 1;

    for (int v = 0; v < vertex_count(); ++v) {
        VertexRecord& r = vertices_[v];
        for (int s = 0; s < 4; ++s) {
            int f = r.face[s];
            if (is_even(faces_[f]))
                r.node[s] = inner(f) ? node_of_face[f] : class_node.at(uf.find(corner_key.at({f, v})));
            else
                r.node[s] = inner(f) ? node_of_face[f] : dual_.root;
        }
        auto e = r.even_slots(), o = r.odd_slots();
        primal_.graph.edges.push_back({r.node[e[0]], r.node[e[1]]});
        dual_.graph.edges.push_back({r.node[o[0]], r.node[o[1]]});
        const std::uint8_t cls = r.class_a ? 0 : 1;
        primal_.graph.edge_class.push_back(cls);
        dual_.graph.edge_class.push_back(cls);
    }

    if (!primal_.graph.connected() || !dual_.graph.connected())
        throw DomainError("corner graphs are not connected");
    if (primal_.graph.n + dual_.graph.n != vertex_count() + 2)
        throw DomainError("corner graphs violate Euler's formula");
}

int Geometry::face_index(Face f) const {
    if (f.i < lo_.i || f.i > hi_.i || f.j < lo_.j || f.j > hi_.j) return -1;
    const int W = hi_.i - lo_.i + 1;
    return face_grid_[static_cast<std::size_t>(f.j - lo_.j) * W + (f.i - lo_.i)];
}

int Geometry::vertex_index(Vertex z) const {
    const int W = hi_.i - lo_.i + 1, H = hi_.j - lo_.j + 1;
    const int xi = (z.x2 - 2 * lo_.i - 1) / 2, yi = (z.y2 - 2 * lo_.j - 1) / 2;
    if ((z.x2 & 1) == 0 || (z.y2 & 1) == 0 || xi < 0 || yi < 0 || xi >= W || yi >= H) return -1;
    return vertex_grid_[static_cast<std::size_t>(yi) * W + xi];
}

GeometryPtr make_geometry(Domain d) { return std::make_shared<const Geometry>(std::move(d)); }

std::array<Face, 6> t_neighbours(Face u) {
    return {Face{u.i + 1, u.j + 1}, Face{u.i + 1, u.j - 1}, Face{u.i - 1, u.j + 1},
            Face{u.i - 1, u.j - 1}, Face{u.i + 2, u.j},     Face{u.i - 2, u.j}};
}

bool t_adjacent(Face u, Face v) {
    const int di = std::abs(u.i - v.i), dj = std::abs(u.j - v.j);
    return (di == 1 && dj == 1) || (di == 2 && dj == 0);
}

int winding_number(const TCircuit& c, double x, double y) {
    int w = 0;
    const std::size_t n = c.faces.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double x0 = c.faces[k].i, y0 = c.faces[k].j;
        const double x1 = c.faces[(k + 1) % n].i, y1 = c.faces[(k + 1) % n].j;
        const double cross = (x1 - x0) * (y - y0) - (x - x0) * (y1 - y0);
        if (y0 <= y) {
            if (y1 > y && cross > 0) ++w;
        } else if (y1 <= y && cross < 0) {
            --w;
        }
    }
    return w;
}

namespace {
// The face centre sits on a T-edge of the other parity, so "surrounds" is decided at a
// point nudged off every lattice line.
constexpr double kNudgeX = 0.0131, kNudgeY = 0.0071;
}  // namespace

bool surrounds(const TCircuit& c, Face target) {
    if (std::find(c.faces.begin(), c.faces.end(), target) != c.faces.end()) return false;
    return winding_number(c, target.i + kNudgeX, target.j + kNudgeY) != 0;
}

std::optional<TCircuit> exteriormost_t_circuit(const std::function<bool(Face)>& level, bool even_parity,
                                               const Domain& box, Face target) {
    const int p = even_parity ? 0 : 1;
    auto parity_ok = [&](Face f) { return ((f.i + f.j) & 1) == p; };
    auto open = [&](Face f) { return parity_ok(f) && box.contains(f) && !(f == target) && level(f); };

    // triangles indexed by their left base vertex (parity p) and orientation
    const int m = 4;
    const int i0 = box.min_i() - m, i1 = box.max_i() + m, j0 = box.min_j() - m, j1 = box.max_j() + m;
    const int W = i1 - i0 + 1, H = j1 - j0 + 1;
    auto tid = [&](int i, int j, int up) { return ((j - j0) * W + (i - i0)) * 2 + up; };
    auto valid = [&](int i, int j) { return i >= i0 && i + 2 <= i1 && j - 1 >= j0 && j + 1 <= j1 && parity_ok({i, j}); };
    auto verts = [](int i, int j, int up) -> std::array<Face, 3> {
        if (up) return {Face{i, j}, Face{i + 2, j}, Face{i + 1, j + 1}};
        return {Face{i, j}, Face{i + 1, j - 1}, Face{i + 2, j}};
    };
    // neighbour across edge k (edge k joins vertex k and k+1)
    auto across = [](int i, int j, int up, int k) -> std::array<int, 3> {
        if (up) {
            if (k == 0) return {i, j, 0};
            if (k == 1) return {i + 1, j + 1, 0};
            return {i - 1, j + 1, 0};
        }
        if (k == 0) return {i - 1, j - 1, 1};
        if (k == 1) return {i + 1, j - 1, 1};
        return {i, j, 1};
    };

    std::vector<char> ext(static_cast<std::size_t>(W) * H * 2, 0);
    std::deque<std::array<int, 3>> q;
    for (int j = j0; j <= j1; ++j)
        for (int i = i0; i <= i1; ++i)
            for (int up = 0; up < 2; ++up) {
                if (!valid(i, j)) continue;
                bool outside = false;
                for (Face f : verts(i, j, up)) outside |= !box.contains(f);
                if (outside) {
                    ext[tid(i, j, up)] = 1;
                    q.push_back({i, j, up});
                }
            }
    while (!q.empty()) {
        auto [i, j, up] = q.front();
        q.pop_front();
        auto vs = verts(i, j, up);
        for (int k = 0; k < 3; ++k) {
            if (open(vs[k]) && open(vs[(k + 1) % 3])) continue;
            auto [a, b, u] = across(i, j, up, k);
            if (!valid(a, b) || ext[tid(a, b, u)]) continue;
            ext[tid(a, b, u)] = 1;
            q.push_back({a, b, u});
        }
    }

    const double px = target.i + kNudgeX, py = target.j + kNudgeY;
    std::optional<std::array<int, 3>> start;
    for (int j = target.j - 2; j <= target.j + 2 && !start; ++j)
        for (int i = target.i - 3; i <= target.i + 3 && !start; ++i)
            for (int up = 0; up < 2 && !start; ++up) {
                if (!valid(i, j)) continue;
                auto vs = verts(i, j, up);
                bool inside = true;
                for (int k = 0; k < 3; ++k) {
                    const double x0 = vs[k].i, y0 = vs[k].j, x1 = vs[(k + 1) % 3].i, y1 = vs[(k + 1) % 3].j;
                    if ((x1 - x0) * (py - y0) - (px - x0) * (y1 - y0) <= 0) inside = false;
                }
                if (inside) start = std::array<int, 3>{i, j, up};
            }
    if (!start || ext[tid((*start)[0], (*start)[1], (*start)[2])]) return std::nullopt;

    // component of non-exterior triangles around the target, then its outer boundary
    std::vector<char> comp(ext.size(), 0);
    q.push_back(*start);
    comp[tid((*start)[0], (*start)[1], (*start)[2])] = 1;
    std::map<Face, std::vector<Face>> out;
    while (!q.empty()) {
        auto [i, j, up] = q.front();
        q.pop_front();
        auto vs = verts(i, j, up);
        for (int k = 0; k < 3; ++k) {
            auto [a, b, u] = across(i, j, up, k);
            if (!valid(a, b)) continue;
            const int t = tid(a, b, u);
            if (ext[t]) {
                out[vs[k]].push_back(vs[(k + 1) % 3]);
            } else if (!comp[t]) {
                comp[t] = 1;
                q.push_back({a, b, u});
            }
        }
    }
    if (out.empty()) return std::nullopt;

    // Euler circuit of the boundary, split at repeated sites into simple loops
    std::vector<Face> stack, loop_sites;
    std::vector<std::vector<Face>> loops;
    {
        std::vector<Face> circuit;
        std::vector<Face> st{out.begin()->first};
        while (!st.empty()) {
            Face v = st.back();
            auto& o = out[v];
            if (!o.empty()) {
                st.push_back(o.back());
                o.pop_back();
            } else {
                circuit.push_back(v);
                st.pop_back();
            }
        }
        std::reverse(circuit.begin(), circuit.end());
        circuit.pop_back();  // closing repeat
        for (Face v : circuit) {
            auto it = std::find(stack.begin(), stack.end(), v);
            if (it != stack.end()) {
                loops.emplace_back(it, stack.end());
                stack.erase(it, stack.end());
            }
            stack.push_back(v);
        }
        if (!stack.empty()) loops.push_back(stack);
    }
    for (auto& l : loops) {
        TCircuit c{l};
        if (c.faces.size() >= 3 && winding_number(c, px, py) != 0) return c;
    }
    return std::nullopt;
}

void write_domain(std::ostream& os, const Domain& d) {
    os << "D " << d.size() << '\n';
    for (Face f : d.faces()) os << "F " << f.i << ' ' << f.j << '\n';
    for (Vertex z : d.boundary_cycle()) os << "B " << z.x2 << ' ' << z.y2 << '\n';
}

Domain read_domain(std::istream& is) {
    std::string line, tag;
    std::size_t declared = 0;
    bool header = false;
    std::vector<Face> faces;
    std::vector<Vertex> cycle;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        ls >> tag;
        if (tag == "D") {
            if (!(ls >> declared)) throw DomainError("line " + std::to_string(lineno) + ": bad D record");
            header = true;
        } else if (tag == "F") {
            Face f;
            if (!(ls >> f.i >> f.j)) throw DomainError("line " + std::to_string(lineno) + ": bad F record");
            faces.push_back(f);
        } else if (tag == "B") {
            Vertex z;
            if (!(ls >> z.x2 >> z.y2)) throw DomainError("line " + std::to_string(lineno) + ": bad B record");
            cycle.push_back(z);
        } else {
            throw DomainError("line " + std::to_string(lineno) + ": unknown record '" + tag + "'");
        }
    }
    if (!header) throw DomainError("missing D header");
    if (faces.size() != declared) throw DomainError("face count does not match D header");
    Domain d = Domain::from_faces(std::move(faces));
    if (!cycle.empty()) {
        const auto& c = d.boundary_cycle();
        auto it = std::find(c.begin(), c.end(), cycle.front());
        bool ok = cycle.size() == c.size() && it != c.end();
        if (ok) {
            std::size_t off = static_cast<std::size_t>(it - c.begin());
            for (std::size_t k = 0; k < c.size() && ok; ++k) ok = c[(off + k) % c.size()] == cycle[k];
        }
        if (!ok) throw DomainError("boundary cycle does not match the faces");
    }
    return d;
}

}  // namespace icelab
