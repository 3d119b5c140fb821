#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fbms {

using Vec3 = Eigen::Vector3d;
using Face = std::array<int, 3>;

class ConvexAmbient;

enum class MeshErrorKind {
    empty_faces,
    index_out_of_range,
    repeated_index,
    unreferenced_vertex,
    non_manifold_edge,
    inconsistent_orientation,
    degenerate_face,
    open_boundary,
    pinched_boundary,
    corrupt_topology,
    closed_surface,
    io,
};

const char* to_string(MeshErrorKind kind);

class MeshError : public std::runtime_error {
public:
    MeshError(MeshErrorKind kind, const std::string& what);
    MeshErrorKind kind() const noexcept { return kind_; }

private:
    MeshErrorKind kind_;
};

struct Topology {
    int genus = 0;
    int boundary_components = 0;
    int euler_characteristic = 0;

    bool operator==(const Topology&) const = default;
};

/// Undirected edge with its one or two incident faces. For a boundary edge
/// `faces[1] == -1`.
struct Edge {
    int v0 = -1;
    int v1 = -1;
    std::array<int, 2> faces{-1, -1};

    bool is_boundary() const { return faces[1] < 0; }
};

/// Immutable oriented triangle mesh with boundary.
///
/// Connectivity (edges, one-rings, boundary loops) is computed once by
/// `build` and shared between meshes produced by `with_vertices`, so moving
/// vertices in an inner loop does not re-derive it. Boundary loops follow the
/// face orientation: each loop lists vertices in the direction of its
/// boundary half-edges, starting at the smallest vertex index of the loop;
/// loops are ordered by that starting index.
class TriMesh {
public:
    static TriMesh build(std::vector<Vec3> vertices, std::vector<Face> faces);

    const std::vector<Vec3>& vertices() const { return vertices_; }
    const std::vector<Face>& faces() const { return conn_->faces; }
    const std::vector<Edge>& edges() const { return conn_->edges; }
    const std::vector<std::vector<int>>& boundary_loops() const { return conn_->loops; }

    std::size_t num_vertices() const { return vertices_.size(); }
    std::size_t num_faces() const { return conn_->faces.size(); }
    std::size_t num_edges() const { return conn_->edges.size(); }

    const Vec3& vertex(int v) const { return vertices_[static_cast<std::size_t>(v)]; }

    bool is_boundary_vertex(int v) const { return conn_->boundary_slot[static_cast<std::size_t>(v)] >= 0; }
    /// Position of `v` in `boundary_vertices()`, or -1 for interior vertices.
    int boundary_slot(int v) const { return conn_->boundary_slot[static_cast<std::size_t>(v)]; }
    /// Concatenation of the boundary loops; fixes the boundary-node ordering.
    const std::vector<int>& boundary_vertices() const { return conn_->boundary_vertices; }
    const std::vector<int>& interior_vertices() const { return conn_->interior_vertices; }

    std::span<const int> vertex_neighbors(int v) const;
    std::span<const int> vertex_faces(int v) const;

    /// Previous and next vertex along the boundary loop containing `v`.
    std::array<int, 2> boundary_neighbors(int v) const;

    /// Same connectivity, new positions. Faces are re-checked for degeneracy.
    TriMesh with_vertices(std::vector<Vec3> vertices) const;

    TriMesh scaled(double factor) const;
    TriMesh transformed(const Eigen::Matrix3d& rotation, const Vec3& translation) const;

    int num_components() const { return conn_->num_components; }

private:
    struct Connectivity {
        std::vector<Face> faces;
        std::vector<Edge> edges;
        std::vector<std::vector<int>> loops;
        std::vector<int> boundary_vertices;
        std::vector<int> interior_vertices;
        std::vector<int> boundary_slot;
        std::vector<std::array<int, 2>> loop_neighbors;
        std::vector<int> ring_offsets;
        std::vector<int> rings;
        std::vector<int> face_offsets;
        std::vector<int> incident_faces;
        int num_components = 0;
    };

    TriMesh(std::vector<Vec3> vertices, std::shared_ptr<const Connectivity> conn)
        : vertices_(std::move(vertices)), conn_(std::move(conn)) {}

    static void check_faces_nondegenerate(const std::vector<Vec3>& vertices, const std::vector<Face>& faces);

    std::vector<Vec3> vertices_;
    std::shared_ptr<const Connectivity> conn_;
};

double face_area(const TriMesh& mesh, int f);
/// Unit normal of face `f` following its orientation.
Vec3 face_normal(const TriMesh& mesh, int f);

Topology topology(const TriMesh& mesh);
double area(const TriMesh& mesh);
/// Total length of all boundary loops. Throws for a closed mesh.
double boundary_length(const TriMesh& mesh);

/// Uniform 1-to-4 subdivision. Midpoints of boundary edges are projected
/// back onto the ambient boundary.
TriMesh refine(const TriMesh& mesh, const ConvexAmbient& ambient);
TriMesh refine(const TriMesh& mesh, const ConvexAmbient& ambient, int levels);

// Mesh files: positions and triangles only. Format chosen by extension
// (.off or .obj).
TriMesh read_mesh(const std::filesystem::path& path);
void write_mesh(const TriMesh& mesh, const std::filesystem::path& path);
TriMesh read_off(std::istream& in);
TriMesh read_obj(std::istream& in);
void write_off(const TriMesh& mesh, std::ostream& out);
void write_obj(const TriMesh& mesh, std::ostream& out);

}  // namespace fbms
