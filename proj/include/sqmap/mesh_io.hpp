#pragma once

#include <iosfwd>
#include <string>

#include "sqmap/mesh.hpp"

namespace sqmap {

enum class MeshFormat { Auto, Obj, Off };

// Reads an indexed triangle mesh; Auto picks the format from the file
// extension. Indices are 1-based in OBJ, 0-based in OFF, 0-based internally.
// Throws ParseError on malformed input and ValidationError when the parsed
// mesh violates a Mesh invariant.
Mesh load_mesh(const std::string& path, MeshFormat format = MeshFormat::Auto);

Mesh parse_obj(std::istream& in);
Mesh parse_off(std::istream& in);

// Writes v records (17 significant digits) and f records.
void save_obj(const Mesh& mesh, const std::string& path);

// Same, plus one vt record per vertex; faces reference matching v/vt
// indices, so a reload recovers the mapping from the vt records.
void save_obj_with_uv(const Mesh& mesh, const Mapping& uv, const std::string& path);

// Reads the vt records of an OBJ written by save_obj_with_uv (one row per
// record, in file order).
Mapping load_obj_uv(const std::string& path);

}  // namespace sqmap
