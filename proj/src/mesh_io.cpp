#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "fbms/mesh.hpp"

namespace fbms {

namespace {

std::string lower_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

[[noreturn]] void io_error(const std::string& what) { throw MeshError(MeshErrorKind::io, what); }

// Next non-empty, non-comment line of an OFF stream.
bool next_off_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
}

int parse_obj_index(const std::string& token, int num_vertices) {
    const std::string head = token.substr(0, token.find('/'));
    int idx = 0;
    try {
        idx = std::stoi(head);
    } catch (const std::exception&) {
        io_error("OBJ: bad face index '" + token + "'");
    }
    if (idx > 0) return idx - 1;
    if (idx < 0) return num_vertices + idx;
    io_error("OBJ: face index 0 is invalid");
}

}  // namespace

TriMesh read_off(std::istream& in) {
    std::string line;
    if (!next_off_line(in, line)) io_error("OFF: empty input");
    std::istringstream header(line);
    std::string magic;
    header >> magic;
    if (magic != "OFF") io_error("OFF: missing OFF header");
    long nv = -1, nf = -1, ne = 0;
    if (!(header >> nv)) {
        if (!next_off_line(in, line)) io_error("OFF: missing counts");
        std::istringstream counts(line);
        counts >> nv >> nf >> ne;
    } else {
        header >> nf >> ne;
    }
    if (nv < 0 || nf < 0) io_error("OFF: bad element counts");

    std::vector<Vec3> vertices(static_cast<std::size_t>(nv));
    for (auto& p : vertices) {
        if (!next_off_line(in, line)) io_error("OFF: truncated vertex list");
        std::istringstream ls(line);
        if (!(ls >> p.x() >> p.y() >> p.z())) io_error("OFF: bad vertex line '" + line + "'");
    }
    std::vector<Face> faces(static_cast<std::size_t>(nf));
    for (auto& f : faces) {
        if (!next_off_line(in, line)) io_error("OFF: truncated face list");
        std::istringstream ls(line);
        int n = 0;
        if (!(ls >> n) || n != 3) io_error("OFF: only triangles are supported, got '" + line + "'");
        if (!(ls >> f[0] >> f[1] >> f[2])) io_error("OFF: bad face line '" + line + "'");
    }
    return TriMesh::build(std::move(vertices), std::move(faces));
}

TriMesh read_obj(std::istream& in) {
    std::vector<Vec3> vertices;
    std::vector<Face> faces;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#') continue;
        if (tag == "v") {
            Vec3 p;
            if (!(ls >> p.x() >> p.y() >> p.z())) io_error("OBJ: bad vertex line '" + line + "'");
            vertices.push_back(p);
        } else if (tag == "f") {
            std::vector<int> idx;
            std::string tok;
            while (ls >> tok) idx.push_back(parse_obj_index(tok, static_cast<int>(vertices.size())));
            if (idx.size() != 3) io_error("OBJ: only triangles are supported, got '" + line + "'");
            faces.push_back({idx[0], idx[1], idx[2]});
        }
    }
    return TriMesh::build(std::move(vertices), std::move(faces));
}

void write_off(const TriMesh& mesh, std::ostream& out) {
    out << "OFF\n" << mesh.num_vertices() << ' ' << mesh.num_faces() << " 0\n";
    out << std::setprecision(17);
    for (const Vec3& p : mesh.vertices()) out << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
    for (const Face& f : mesh.faces()) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

void write_obj(const TriMesh& mesh, std::ostream& out) {
    out << std::setprecision(17);
    for (const Vec3& p : mesh.vertices()) out << "v " << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
    for (const Face& f : mesh.faces()) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

TriMesh read_mesh(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) io_error("cannot open mesh file " + path.string());
    const std::string ext = lower_extension(path);
    if (ext == ".off") return read_off(in);
    if (ext == ".obj") return read_obj(in);
    io_error("unsupported mesh extension '" + ext + "' (expected .off or .obj)");
}

void write_mesh(const TriMesh& mesh, const std::filesystem::path& path) {
    const std::string ext = lower_extension(path);
    if (ext != ".off" && ext != ".obj") io_error("unsupported mesh extension '" + ext + "' (expected .off or .obj)");
    std::ofstream out(path, std::ios::binary);
    if (!out) io_error("cannot write mesh file " + path.string());
    if (ext == ".off") {
        write_off(mesh, out);
    } else {
        write_obj(mesh, out);
    }
    if (!out) io_error("write failed for " + path.string());
}

}  // namespace fbms
