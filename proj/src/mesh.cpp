#include "fbms/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "fbms/ambient.hpp"

namespace fbms {

const char* to_string(MeshErrorKind kind) {
    switch (kind) {
        case MeshErrorKind::empty_faces: return "empty_faces";
        case MeshErrorKind::index_out_of_range: return "index_out_of_range";
        case MeshErrorKind::repeated_index: return "repeated_index";
        case MeshErrorKind::unreferenced_vertex: return "unreferenced_vertex";
        case MeshErrorKind::non_manifold_edge: return "non_manifold_edge";
        case MeshErrorKind::inconsistent_orientation: return "inconsistent_orientation";
        case MeshErrorKind::degenerate_face: return "degenerate_face";
        case MeshErrorKind::open_boundary: return "open_boundary";
        case MeshErrorKind::pinched_boundary: return "pinched_boundary";
        case MeshErrorKind::corrupt_topology: return "corrupt_topology";
        case MeshErrorKind::closed_surface: return "closed_surface";
        case MeshErrorKind::io: return "io";
    }
    return "unknown";
}

MeshError::MeshError(MeshErrorKind kind, const std::string& what)
    : std::runtime_error(what), kind_(kind) {}

namespace {

std::uint64_t edge_key(int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

double raw_face_area(const Vec3& a, const Vec3& b, const Vec3& c) {
    return 0.5 * (b - a).cross(c - a).norm();
}

int find_root(std::vector<int>& parent, int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
        parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        x = parent[static_cast<std::size_t>(x)];
    }
    return x;
}

}  // namespace

void TriMesh::check_faces_nondegenerate(const std::vector<Vec3>& vertices, const std::vector<Face>& faces) {
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const auto& [a, b, c] = faces[f];
        const Vec3& pa = vertices[static_cast<std::size_t>(a)];
        const Vec3& pb = vertices[static_cast<std::size_t>(b)];
        const Vec3& pc = vertices[static_cast<std::size_t>(c)];
        const double longest = std::max({(pb - pa).squaredNorm(), (pc - pb).squaredNorm(), (pa - pc).squaredNorm()});
        const double a2 = raw_face_area(pa, pb, pc);
        if (!(a2 > 1e-14 * longest) || !std::isfinite(a2)) {
            std::ostringstream msg;
            msg << "degenerate face " << f << " (" << a << ", " << b << ", " << c << "), area " << a2;
            throw MeshError(MeshErrorKind::degenerate_face, msg.str());
        }
    }
}

TriMesh TriMesh::build(std::vector<Vec3> vertices, std::vector<Face> faces) {
    if (faces.empty()) throw MeshError(MeshErrorKind::empty_faces, "mesh has no faces");
    const int nv = static_cast<int>(vertices.size());

    std::vector<int> valence(vertices.size(), 0);
    for (std::size_t f = 0; f < faces.size(); ++f) {
        for (int v : faces[f]) {
            if (v < 0 || v >= nv) {
                throw MeshError(MeshErrorKind::index_out_of_range,
                                "face " + std::to_string(f) + " references vertex " + std::to_string(v));
            }
            ++valence[static_cast<std::size_t>(v)];
        }
        const auto& [a, b, c] = faces[f];
        if (a == b || b == c || c == a) {
            throw MeshError(MeshErrorKind::repeated_index, "face " + std::to_string(f) + " repeats a vertex");
        }
    }
    for (int v = 0; v < nv; ++v) {
        if (valence[static_cast<std::size_t>(v)] == 0) {
            throw MeshError(MeshErrorKind::unreferenced_vertex, "vertex " + std::to_string(v) + " is not used by any face");
        }
    }
    check_faces_nondegenerate(vertices, faces);

    auto conn = std::make_shared<Connectivity>();

    // Directed half-edges: each may occur once; its twin at most once.
    std::unordered_map<std::uint64_t, int> half_edge_face;
    half_edge_face.reserve(faces.size() * 3);
    for (std::size_t f = 0; f < faces.size(); ++f) {
        for (int k = 0; k < 3; ++k) {
            const int a = faces[f][static_cast<std::size_t>(k)];
            const int b = faces[f][static_cast<std::size_t>((k + 1) % 3)];
            auto [it, inserted] = half_edge_face.emplace(edge_key(a, b), static_cast<int>(f));
            if (!inserted) {
                // Same direction twice: either a third face on the edge or a
                // neighbour with flipped winding.
                const bool twin = half_edge_face.count(edge_key(b, a)) > 0;
                std::ostringstream msg;
                if (twin) {
                    msg << "edge (" << a << ", " << b << ") is shared by more than two faces";
                    throw MeshError(MeshErrorKind::non_manifold_edge, msg.str());
                }
                msg << "faces " << it->second << " and " << f << " traverse edge (" << a << ", " << b
                    << ") in the same direction; non-orientable or inconsistently oriented meshes are not supported";
                throw MeshError(MeshErrorKind::inconsistent_orientation, msg.str());
            }
        }
    }

    // Undirected edges in (min, max) lexicographic order.
    std::map<std::pair<int, int>, std::size_t> edge_index;
    for (std::size_t f = 0; f < faces.size(); ++f) {
        for (int k = 0; k < 3; ++k) {
            const int a = faces[f][static_cast<std::size_t>(k)];
            const int b = faces[f][static_cast<std::size_t>((k + 1) % 3)];
            edge_index.try_emplace({std::min(a, b), std::max(a, b)}, 0);
        }
    }
    conn->edges.reserve(edge_index.size());
    for (auto& [key, idx] : edge_index) {
        idx = conn->edges.size();
        Edge e;
        e.v0 = key.first;
        e.v1 = key.second;
        conn->edges.push_back(e);
    }
    for (std::size_t f = 0; f < faces.size(); ++f) {
        for (int k = 0; k < 3; ++k) {
            const int a = faces[f][static_cast<std::size_t>(k)];
            const int b = faces[f][static_cast<std::size_t>((k + 1) % 3)];
            Edge& e = conn->edges[edge_index.at({std::min(a, b), std::max(a, b)})];
            if (e.faces[0] < 0) {
                e.faces[0] = static_cast<int>(f);
            } else if (e.faces[1] < 0) {
                e.faces[1] = static_cast<int>(f);
            } else {
                throw MeshError(MeshErrorKind::non_manifold_edge,
                                "edge (" + std::to_string(a) + ", " + std::to_string(b) + ") has three or more faces");
            }
        }
    }

    // Boundary half-edges a->b with no twin b->a.
    std::vector<int> next(vertices.size(), -1);
    std::vector<int> in_count(vertices.size(), 0);
    for (const auto& [key, f] : half_edge_face) {
        const int a = static_cast<int>(key >> 32);
        const int b = static_cast<int>(key & 0xffffffffu);
        if (half_edge_face.count(edge_key(b, a)) == 0) {
            if (next[static_cast<std::size_t>(a)] >= 0) {
                throw MeshError(MeshErrorKind::pinched_boundary,
                                "vertex " + std::to_string(a) + " starts two boundary edges");
            }
            next[static_cast<std::size_t>(a)] = b;
            ++in_count[static_cast<std::size_t>(b)];
        }
    }
    for (int v = 0; v < nv; ++v) {
        const bool has_out = next[static_cast<std::size_t>(v)] >= 0;
        const int ins = in_count[static_cast<std::size_t>(v)];
        if (ins > 1) {
            throw MeshError(MeshErrorKind::pinched_boundary, "vertex " + std::to_string(v) + " ends two boundary edges");
        }
        if (has_out != (ins == 1)) {
            throw MeshError(MeshErrorKind::open_boundary,
                            "boundary chain through vertex " + std::to_string(v) + " does not close");
        }
    }

    conn->boundary_slot.assign(vertices.size(), -1);
    std::vector<bool> visited(vertices.size(), false);
    for (int start = 0; start < nv; ++start) {
        if (next[static_cast<std::size_t>(start)] < 0 || visited[static_cast<std::size_t>(start)]) continue;
        std::vector<int> loop;
        int v = start;
        do {
            visited[static_cast<std::size_t>(v)] = true;
            loop.push_back(v);
            v = next[static_cast<std::size_t>(v)];
        } while (v != start && !visited[static_cast<std::size_t>(v)]);
        if (v != start) {
            throw MeshError(MeshErrorKind::open_boundary, "boundary loop starting at " + std::to_string(start) + " does not close");
        }
        conn->loops.push_back(std::move(loop));
    }
    conn->loop_neighbors.assign(vertices.size(), {-1, -1});
    for (const auto& loop : conn->loops) {
        const std::size_t n = loop.size();
        for (std::size_t i = 0; i < n; ++i) {
            const int v = loop[i];
            conn->boundary_slot[static_cast<std::size_t>(v)] = static_cast<int>(conn->boundary_vertices.size());
            conn->boundary_vertices.push_back(v);
            conn->loop_neighbors[static_cast<std::size_t>(v)] = {loop[(i + n - 1) % n], loop[(i + 1) % n]};
        }
    }
    for (int v = 0; v < nv; ++v) {
        if (conn->boundary_slot[static_cast<std::size_t>(v)] < 0) conn->interior_vertices.push_back(v);
    }

    // One-rings (sorted) and vertex-face incidence in CSR form.
    std::vector<std::vector<int>> ring(vertices.size());
    for (const Edge& e : conn->edges) {
        ring[static_cast<std::size_t>(e.v0)].push_back(e.v1);
        ring[static_cast<std::size_t>(e.v1)].push_back(e.v0);
    }
    conn->ring_offsets.assign(vertices.size() + 1, 0);
    for (std::size_t v = 0; v < vertices.size(); ++v) {
        std::sort(ring[v].begin(), ring[v].end());
        conn->ring_offsets[v + 1] = conn->ring_offsets[v] + static_cast<int>(ring[v].size());
        conn->rings.insert(conn->rings.end(), ring[v].begin(), ring[v].end());
    }
    conn->face_offsets.assign(vertices.size() + 1, 0);
    for (const Face& f : faces) {
        for (int v : f) ++conn->face_offsets[static_cast<std::size_t>(v) + 1];
    }
    std::partial_sum(conn->face_offsets.begin(), conn->face_offsets.end(), conn->face_offsets.begin());
    conn->incident_faces.assign(static_cast<std::size_t>(conn->face_offsets.back()), -1);
    {
        std::vector<int> fill(conn->face_offsets.begin(), conn->face_offsets.end() - 1);
        for (std::size_t f = 0; f < faces.size(); ++f) {
            for (int v : faces[f]) conn->incident_faces[static_cast<std::size_t>(fill[static_cast<std::size_t>(v)]++)] = static_cast<int>(f);
        }
    }

    std::vector<int> parent(vertices.size());
    std::iota(parent.begin(), parent.end(), 0);
    for (const Edge& e : conn->edges) {
        const int ra = find_root(parent, e.v0);
        const int rb = find_root(parent, e.v1);
        if (ra != rb) parent[static_cast<std::size_t>(std::max(ra, rb))] = std::min(ra, rb);
    }
    for (int v = 0; v < nv; ++v) {
        if (find_root(parent, v) == v) ++conn->num_components;
    }

    conn->faces = std::move(faces);
    return TriMesh(std::move(vertices), std::move(conn));
}

std::span<const int> TriMesh::vertex_neighbors(int v) const {
    const auto b = static_cast<std::size_t>(conn_->ring_offsets[static_cast<std::size_t>(v)]);
    const auto e = static_cast<std::size_t>(conn_->ring_offsets[static_cast<std::size_t>(v) + 1]);
    return std::span<const int>(conn_->rings).subspan(b, e - b);
}

std::span<const int> TriMesh::vertex_faces(int v) const {
    const auto b = static_cast<std::size_t>(conn_->face_offsets[static_cast<std::size_t>(v)]);
    const auto e = static_cast<std::size_t>(conn_->face_offsets[static_cast<std::size_t>(v) + 1]);
    return std::span<const int>(conn_->incident_faces).subspan(b, e - b);
}

std::array<int, 2> TriMesh::boundary_neighbors(int v) const {
    return conn_->loop_neighbors[static_cast<std::size_t>(v)];
}

TriMesh TriMesh::with_vertices(std::vector<Vec3> vertices) const {
    if (vertices.size() != vertices_.size()) {
        throw std::invalid_argument("with_vertices: vertex count mismatch");
    }
    check_faces_nondegenerate(vertices, conn_->faces);
    return TriMesh(std::move(vertices), conn_);
}

TriMesh TriMesh::scaled(double factor) const {
    std::vector<Vec3> v = vertices_;
    for (Vec3& p : v) p *= factor;
    return with_vertices(std::move(v));
}

TriMesh TriMesh::transformed(const Eigen::Matrix3d& rotation, const Vec3& translation) const {
    std::vector<Vec3> v = vertices_;
    for (Vec3& p : v) p = rotation * p + translation;
    return with_vertices(std::move(v));
}

double face_area(const TriMesh& mesh, int f) {
    const Face& t = mesh.faces()[static_cast<std::size_t>(f)];
    return raw_face_area(mesh.vertex(t[0]), mesh.vertex(t[1]), mesh.vertex(t[2]));
}

Vec3 face_normal(const TriMesh& mesh, int f) {
    const Face& t = mesh.faces()[static_cast<std::size_t>(f)];
    const Vec3& a = mesh.vertex(t[0]);
    return (mesh.vertex(t[1]) - a).cross(mesh.vertex(t[2]) - a).normalized();
}

Topology topology(const TriMesh& mesh) {
    Topology t;
    t.euler_characteristic = static_cast<int>(mesh.num_vertices()) - static_cast<int>(mesh.num_edges()) +
                             static_cast<int>(mesh.num_faces());
    t.boundary_components = static_cast<int>(mesh.boundary_loops().size());
    const int twice_genus = 2 - t.euler_characteristic - t.boundary_components;
    if (twice_genus < 0 || twice_genus % 2 != 0) {
        std::ostringstream msg;
        msg << "chi = " << t.euler_characteristic << " with " << t.boundary_components
            << " boundary loops is not an orientable connected surface";
        throw MeshError(MeshErrorKind::corrupt_topology, msg.str());
    }
    t.genus = twice_genus / 2;
    return t;
}

double area(const TriMesh& mesh) {
    double total = 0.0;
    for (std::size_t f = 0; f < mesh.num_faces(); ++f) total += face_area(mesh, static_cast<int>(f));
    return total;
}

double boundary_length(const TriMesh& mesh) {
    if (mesh.boundary_loops().empty()) {
        throw MeshError(MeshErrorKind::closed_surface, "closed surface rejected: mesh has no boundary");
    }
    double total = 0.0;
    for (const auto& loop : mesh.boundary_loops()) {
        for (std::size_t i = 0; i < loop.size(); ++i) {
            total += (mesh.vertex(loop[(i + 1) % loop.size()]) - mesh.vertex(loop[i])).norm();
        }
    }
    return total;
}

TriMesh refine(const TriMesh& mesh, const ConvexAmbient& ambient) {
    std::vector<Vec3> vertices = mesh.vertices();
    const auto& edges = mesh.edges();
    std::map<std::pair<int, int>, int> midpoint;
    for (const Edge& e : edges) {
        Vec3 m = 0.5 * (mesh.vertex(e.v0) + mesh.vertex(e.v1));
        if (e.is_boundary()) m = ambient.project_to_boundary(m);
        midpoint[{e.v0, e.v1}] = static_cast<int>(vertices.size());
        vertices.push_back(m);
    }
    auto mid = [&](int a, int b) { return midpoint.at({std::min(a, b), std::max(a, b)}); };

    std::vector<Face> faces;
    faces.reserve(mesh.num_faces() * 4);
    for (const Face& t : mesh.faces()) {
        const int a = t[0], b = t[1], c = t[2];
        const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
        faces.push_back({a, ab, ca});
        faces.push_back({b, bc, ab});
        faces.push_back({c, ca, bc});
        faces.push_back({ab, bc, ca});
    }
    return TriMesh::build(std::move(vertices), std::move(faces));
}

TriMesh refine(const TriMesh& mesh, const ConvexAmbient& ambient, int levels) {
    TriMesh out = mesh;
    for (int i = 0; i < levels; ++i) out = refine(out, ambient);
    return out;
}

}  // namespace fbms
