#include "sqmap/mesh_io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace sqmap {

namespace {

std::string lowercase_extension(const std::string& path) {
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos) return "";
    std::string ext = path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

Mesh build_mesh(const std::vector<Vec3>& vertices, const std::vector<std::array<int, 3>>& faces) {
    Eigen::MatrixX3d V(static_cast<Eigen::Index>(vertices.size()), 3);
    for (size_t i = 0; i < vertices.size(); ++i) V.row(static_cast<Eigen::Index>(i)) = vertices[i];
    Eigen::MatrixX3i F(static_cast<Eigen::Index>(faces.size()), 3);
    for (size_t i = 0; i < faces.size(); ++i)
        F.row(static_cast<Eigen::Index>(i)) << faces[i][0], faces[i][1], faces[i][2];
    return Mesh(std::move(V), std::move(F));
}

// "i", "i/t", "i//n", "i/t/n" -> vertex index (1-based; negative = relative).
int parse_obj_vertex_ref(const std::string& token, int vertex_count, int line_no) {
    const std::string head = token.substr(0, token.find('/'));
    int idx = 0;
    try {
        idx = std::stoi(head);
    } catch (const std::exception&) {
        throw ParseError("OBJ line " + std::to_string(line_no) + ": bad face token '" + token + "'");
    }
    if (idx < 0) idx = vertex_count + idx + 1;  // relative reference
    if (idx < 1 || idx > vertex_count)
        throw ParseError("OBJ line " + std::to_string(line_no) + ": vertex reference " + token +
                         " out of range");
    return idx - 1;
}

}  // namespace

Mesh parse_obj(std::istream& in) {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> faces;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#') continue;
        if (tag == "v") {
            Vec3 p;
            if (!(ls >> p.x() >> p.y() >> p.z()))
                throw ParseError("OBJ line " + std::to_string(line_no) + ": malformed vertex");
            vertices.push_back(p);
        } else if (tag == "f") {
            std::vector<int> refs;
            std::string token;
            while (ls >> token)
                refs.push_back(parse_obj_vertex_ref(token, static_cast<int>(vertices.size()), line_no));
            if (refs.size() != 3)
                throw ParseError("OBJ line " + std::to_string(line_no) + ": face has " +
                                 std::to_string(refs.size()) + " vertices; only triangles are supported");
            faces.push_back({refs[0], refs[1], refs[2]});
        }
        // vt/vn/usemtl/o/g/s and other records are ignored.
    }
    if (vertices.empty()) throw ParseError("OBJ contains no vertices");
    return build_mesh(vertices, faces);
}

Mesh parse_off(std::istream& in) {
    auto next_content_line = [&in](std::string& line) -> bool {
        while (std::getline(in, line)) {
            const auto pos = line.find_first_not_of(" \t\r");
            if (pos == std::string::npos || line[pos] == '#') continue;
            return true;
        }
        return false;
    };

    std::string line;
    if (!next_content_line(line)) throw ParseError("OFF: empty file");
    std::istringstream header(line);
    std::string magic;
    header >> magic;
    if (magic != "OFF") throw ParseError("OFF: missing OFF header");

    long n = 0, m = 0, e = 0;
    if (!(header >> n >> m >> e)) {
        if (!next_content_line(line)) throw ParseError("OFF: missing counts line");
        std::istringstream counts(line);
        if (!(counts >> n >> m >> e)) throw ParseError("OFF: malformed counts line");
    }
    if (n < 0 || m < 0) throw ParseError("OFF: negative counts");

    std::vector<Vec3> vertices;
    vertices.reserve(static_cast<size_t>(n));
    for (long i = 0; i < n; ++i) {
        if (!next_content_line(line)) throw ParseError("OFF: unexpected end of file in vertex list");
        std::istringstream vs(line);
        Vec3 p;
        if (!(vs >> p.x() >> p.y() >> p.z()))
            throw ParseError("OFF: malformed vertex " + std::to_string(i));
        vertices.push_back(p);
    }
    std::vector<std::array<int, 3>> faces;
    faces.reserve(static_cast<size_t>(m));
    for (long f = 0; f < m; ++f) {
        if (!next_content_line(line)) throw ParseError("OFF: unexpected end of file in face list");
        std::istringstream fs(line);
        int count = 0;
        if (!(fs >> count)) throw ParseError("OFF: malformed face " + std::to_string(f));
        if (count != 3)
            throw ParseError("OFF: face " + std::to_string(f) + " has " + std::to_string(count) +
                             " vertices; only triangles are supported");
        int i = 0, j = 0, k = 0;
        if (!(fs >> i >> j >> k)) throw ParseError("OFF: malformed face " + std::to_string(f));
        faces.push_back({i, j, k});
    }
    return build_mesh(vertices, faces);
}

Mesh load_mesh(const std::string& path, MeshFormat format) {
    if (format == MeshFormat::Auto) {
        const std::string ext = lowercase_extension(path);
        if (ext == "obj")
            format = MeshFormat::Obj;
        else if (ext == "off")
            format = MeshFormat::Off;
        else
            throw ParseError("cannot infer mesh format from '" + path + "'; pass it explicitly");
    }
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return format == MeshFormat::Obj ? parse_obj(in) : parse_off(in);
}

namespace {

void append_number(std::string& out, double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    out += buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw ParseError("failed writing '" + path + "'");
}

std::string obj_text(const Mesh& mesh, const Mapping* uv) {
    std::string out;
    out.reserve(static_cast<size_t>(mesh.vertex_count()) * 64);
    for (int i = 0; i < mesh.vertex_count(); ++i) {
        out += "v ";
        append_number(out, mesh.vertices()(i, 0));
        out += ' ';
        append_number(out, mesh.vertices()(i, 1));
        out += ' ';
        append_number(out, mesh.vertices()(i, 2));
        out += '\n';
    }
    if (uv) {
        for (int i = 0; i < mesh.vertex_count(); ++i) {
            out += "vt ";
            append_number(out, (*uv)(i, 0));
            out += ' ';
            append_number(out, (*uv)(i, 1));
            out += '\n';
        }
    }
    for (int f = 0; f < mesh.face_count(); ++f) {
        out += 'f';
        for (int e = 0; e < 3; ++e) {
            const int v = mesh.faces()(f, e) + 1;
            out += ' ';
            out += std::to_string(v);
            if (uv) {
                out += '/';
                out += std::to_string(v);
            }
        }
        out += '\n';
    }
    return out;
}

}  // namespace

void save_obj(const Mesh& mesh, const std::string& path) {
    write_file(path, obj_text(mesh, nullptr));
}

void save_obj_with_uv(const Mesh& mesh, const Mapping& uv, const std::string& path) {
    check_mapping(mesh, uv);
    write_file(path, obj_text(mesh, &uv));
}

Mapping load_obj_uv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::vector<Vec2> uv;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag != "vt") continue;
        Vec2 t;
        if (!(ls >> t.x() >> t.y()))
            throw ParseError("OBJ line " + std::to_string(line_no) + ": malformed vt record");
        uv.push_back(t);
    }
    Mapping result(static_cast<Eigen::Index>(uv.size()), 2);
    for (size_t i = 0; i < uv.size(); ++i) result.row(static_cast<Eigen::Index>(i)) = uv[i];
    return result;
}

}  // namespace sqmap
