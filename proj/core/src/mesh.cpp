#include "linedraw/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>
#include <unordered_map>

namespace linedraw {

std::string MeshDiagnostics::to_string() const {
    std::ostringstream out;
    out << "parsed_vertices=" << parsed_vertices << '\n'
        << "parsed_faces=" << parsed_faces << '\n'
        << "welded_vertices=" << welded_vertices << '\n'
        << "degenerate_faces_removed=" << degenerate_faces_removed << '\n'
        << "boundary_edges=" << boundary_edges << '\n'
        << "non_manifold_edges=" << non_manifold_edges << '\n'
        << "non_manifold=" << (non_manifold() ? "true" : "false") << '\n'
        << "components=" << components << '\n'
        << "flipped_faces=" << flipped_faces << '\n'
        << "isolated_vertices=" << isolated_vertices << '\n'
        << "normals_from_file=" << (normals_from_file ? "true" : "false") << '\n';
    return out.str();
}

namespace {

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) { return 0.5 * (b - a).cross(c - a).norm(); }

std::uint64_t edge_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

bool parse_double(std::string_view token, double& value) {
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    return ec == std::errc{} && ptr == last;
}

bool parse_int(std::string_view token, long& value) {
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    return ec == std::errc{} && ptr == last;
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) tokens.push_back(line.substr(i, j - i));
        i = j;
    }
    return tokens;
}

// OBJ indices are 1-based; negative values count back from the current end.
int resolve_index(long raw, std::size_t count, std::size_t line_no) {
    long index = raw > 0 ? raw - 1 : static_cast<long>(count) + raw;
    if (raw == 0 || index < 0 || index >= static_cast<long>(count))
        throw MeshError("obj parse error at line " + std::to_string(line_no) + ": index out of range");
    return static_cast<int>(index);
}

struct Corner {
    int vertex;
    int normal;  // -1 if absent
};

void count_topology(const TriangleMesh& mesh, MeshDiagnostics& diag) {
    diag.boundary_edges = 0;
    diag.non_manifold_edges = 0;
    for (const Edge& e : build_edges(mesh)) {
        if (e.face_count == 1) ++diag.boundary_edges;
        if (e.face_count > 2) ++diag.non_manifold_edges;
    }
    std::vector<char> used(mesh.vertices.size(), 0);
    for (const Face& f : mesh.faces)
        for (int v : f) used[v] = 1;
    diag.isolated_vertices = static_cast<std::size_t>(std::count(used.begin(), used.end(), 0));
}

}  // namespace

double default_weld_tolerance(const TriangleMesh& mesh) {
    if (mesh.vertices.empty()) return 0.0;
    return 1e-6 * bounding_box(mesh).extent().norm();
}

BoundingBox bounding_box(const TriangleMesh& mesh) {
    if (mesh.vertices.empty()) return {Vec3::Zero(), Vec3::Zero()};
    BoundingBox box{mesh.vertices.front(), mesh.vertices.front()};
    for (const Vec3& v : mesh.vertices) {
        box.min = box.min.cwiseMin(v);
        box.max = box.max.cwiseMax(v);
    }
    return box;
}

std::vector<Vec3> area_weighted_normals(const std::vector<Vec3>& vertices, const std::vector<Face>& faces) {
    std::vector<Vec3> normals(vertices.size(), Vec3::Zero());
    for (const Face& f : faces) {
        // Cross product length is twice the area, so this is area weighting.
        const Vec3 n = (vertices[f[1]] - vertices[f[0]]).cross(vertices[f[2]] - vertices[f[0]]);
        for (int v : f) normals[v] += n;
    }
    for (Vec3& n : normals) {
        const double len = n.norm();
        n = len > 0.0 ? Vec3(n / len) : Vec3(0.0, 0.0, 1.0);
    }
    return normals;
}

std::vector<Edge> build_edges(const TriangleMesh& mesh) {
    std::unordered_map<std::uint64_t, std::size_t> lookup;
    lookup.reserve(mesh.faces.size() * 2);
    std::vector<Edge> edges;
    edges.reserve(mesh.faces.size() * 3 / 2 + 3);
    for (std::size_t fi = 0; fi < mesh.faces.size(); ++fi) {
        const Face& f = mesh.faces[fi];
        for (int k = 0; k < 3; ++k) {
            int a = f[k], b = f[(k + 1) % 3];
            if (a > b) std::swap(a, b);
            auto [it, inserted] = lookup.try_emplace(edge_key(a, b), edges.size());
            if (inserted) edges.push_back(Edge{a, b, -1, -1, 0});
            Edge& e = edges[it->second];
            if (e.face0 < 0)
                e.face0 = static_cast<int>(fi);
            else if (e.face1 < 0)
                e.face1 = static_cast<int>(fi);
            ++e.face_count;
        }
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
        return x.a != y.a ? x.a < y.a : x.b < y.b;
    });
    return edges;
}

std::vector<std::vector<int>> vertex_neighbors(const TriangleMesh& mesh) {
    std::vector<std::vector<int>> ring(mesh.vertices.size());
    for (const Face& f : mesh.faces) {
        for (int k = 0; k < 3; ++k) {
            ring[f[k]].push_back(f[(k + 1) % 3]);
            ring[f[k]].push_back(f[(k + 2) % 3]);
        }
    }
    for (auto& r : ring) {
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
    }
    return ring;
}

std::vector<std::vector<int>> vertex_faces(const TriangleMesh& mesh) {
    std::vector<std::vector<int>> adjacent(mesh.vertices.size());
    for (std::size_t fi = 0; fi < mesh.faces.size(); ++fi)
        for (int v : mesh.faces[fi]) adjacent[v].push_back(static_cast<int>(fi));
    return adjacent;
}

TriangleMesh weld_vertices(const TriangleMesh& mesh, double tolerance, MeshDiagnostics* diagnostics,
                           std::vector<int>* remap_out) {
    TriangleMesh out;
    out.up_axis = mesh.up_axis;
    const std::size_t n = mesh.vertices.size();
    std::vector<int> remap(n, -1);

    if (tolerance <= 0.0) {
        std::iota(remap.begin(), remap.end(), 0);
        out.vertices = mesh.vertices;
    } else {
        // Hash grid with cell size == tolerance; a match can only live in the
        // 27 cells around the query point.
        struct CellHash {
            std::size_t operator()(const std::array<long long, 3>& c) const {
                std::size_t h = 1469598103934665603ull;
                for (long long v : c) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ull;
                return h;
            }
        };
        std::unordered_map<std::array<long long, 3>, std::vector<int>, CellHash> grid;
        auto cell_of = [&](const Vec3& p) {
            return std::array<long long, 3>{static_cast<long long>(std::floor(p.x() / tolerance)),
                                            static_cast<long long>(std::floor(p.y() / tolerance)),
                                            static_cast<long long>(std::floor(p.z() / tolerance))};
        };
        const double tol2 = tolerance * tolerance;
        for (std::size_t i = 0; i < n; ++i) {
            const Vec3& p = mesh.vertices[i];
            const auto c = cell_of(p);
            int found = -1;
            for (long long dx = -1; dx <= 1 && found < 0; ++dx)
                for (long long dy = -1; dy <= 1 && found < 0; ++dy)
                    for (long long dz = -1; dz <= 1 && found < 0; ++dz) {
                        auto it = grid.find({c[0] + dx, c[1] + dy, c[2] + dz});
                        if (it == grid.end()) continue;
                        for (int cand : it->second) {
                            if ((out.vertices[cand] - p).squaredNorm() <= tol2) {
                                found = cand;
                                break;
                            }
                        }
                    }
            if (found < 0) {
                found = static_cast<int>(out.vertices.size());
                out.vertices.push_back(p);
                grid[c].push_back(found);
            }
            remap[i] = found;
        }
    }

    std::size_t removed = 0;
    for (const Face& f : mesh.faces) {
        Face g{remap[f[0]], remap[f[1]], remap[f[2]]};
        if (g[0] == g[1] || g[1] == g[2] || g[0] == g[2] ||
            triangle_area(out.vertices[g[0]], out.vertices[g[1]], out.vertices[g[2]]) <= 0.0) {
            ++removed;
            continue;
        }
        out.faces.push_back(g);
    }

    if (out.vertices.size() == mesh.vertices.size() && mesh.normals.size() == mesh.vertices.size()) {
        out.normals = mesh.normals;
    } else {
        out.normals = area_weighted_normals(out.vertices, out.faces);
    }

    if (remap_out) *remap_out = remap;
    if (diagnostics) {
        diagnostics->welded_vertices = out.vertices.size();
        diagnostics->degenerate_faces_removed += removed;
    }
    return out;
}

TriangleMesh orient_faces(const TriangleMesh& mesh, MeshDiagnostics* diagnostics) {
    TriangleMesh out = mesh;
    const std::size_t nf = mesh.faces.size();
    const auto edges = build_edges(mesh);

    // Directed-edge lookup of the face list, rebuilt lazily as faces flip.
    auto has_directed = [&](const Face& f, int a, int b) {
        for (int k = 0; k < 3; ++k)
            if (f[k] == a && f[(k + 1) % 3] == b) return true;
        return false;
    };

    std::vector<std::vector<std::pair<int, std::size_t>>> face_edges(nf);  // (neighbour face, edge index)
    for (std::size_t ei = 0; ei < edges.size(); ++ei) {
        const Edge& e = edges[ei];
        if (e.face_count != 2) continue;
        face_edges[e.face0].push_back({e.face1, ei});
        face_edges[e.face1].push_back({e.face0, ei});
    }

    std::vector<int> component(nf, -1);
    std::size_t flipped = 0;
    int component_count = 0;
    for (std::size_t seed = 0; seed < nf; ++seed) {
        if (component[seed] >= 0) continue;
        const int cid = component_count++;
        std::vector<std::size_t> members;
        std::queue<std::size_t> queue;
        component[seed] = cid;
        queue.push(seed);
        while (!queue.empty()) {
            const std::size_t f = queue.front();
            queue.pop();
            members.push_back(f);
            for (auto [g, ei] : face_edges[f]) {
                if (component[g] >= 0) continue;
                const Edge& e = edges[ei];
                // Consistent neighbours traverse the shared edge in opposite directions.
                const bool f_ab = has_directed(out.faces[f], e.a, e.b);
                const bool g_ab = has_directed(out.faces[g], e.a, e.b);
                if (f_ab == g_ab) {
                    std::swap(out.faces[g][1], out.faces[g][2]);
                    ++flipped;
                }
                component[g] = cid;
                queue.push(g);
            }
        }

        // Closed components are turned outward using the signed volume.
        bool closed = true;
        for (std::size_t f : members) {
            for (int k = 0; k < 3 && closed; ++k) {
                int a = out.faces[f][k], b = out.faces[f][(k + 1) % 3];
                if (a > b) std::swap(a, b);
                auto it = std::lower_bound(edges.begin(), edges.end(), std::pair{a, b},
                                           [](const Edge& e, const std::pair<int, int>& key) {
                                               return e.a != key.first ? e.a < key.first : e.b < key.second;
                                           });
                if (it == edges.end() || it->face_count != 2) closed = false;
            }
        }
        if (closed) {
            double volume = 0.0;
            for (std::size_t f : members) {
                const Face& t = out.faces[f];
                volume += out.vertices[t[0]].dot(out.vertices[t[1]].cross(out.vertices[t[2]]));
            }
            if (volume < 0.0) {
                for (std::size_t f : members) std::swap(out.faces[f][1], out.faces[f][2]);
                flipped += members.size();
            }
        }
    }

    if (diagnostics) {
        diagnostics->components = static_cast<std::size_t>(component_count);
        diagnostics->flipped_faces += flipped;
    }
    return out;
}

LoadedMesh parse_obj(std::istream& in) {
    std::vector<Vec3> positions;
    std::vector<Vec3> file_normals;
    std::vector<std::array<Corner, 3>> triangles;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const auto tokens = split_ws(line);
        if (tokens.empty()) continue;
        const std::string_view tag = tokens[0];
        if (tag == "v" || tag == "vn") {
            if (tokens.size() < 4) throw MeshError("obj parse error at line " + std::to_string(line_no));
            Vec3 p;
            for (int k = 0; k < 3; ++k)
                if (!parse_double(tokens[k + 1], p[k]))
                    throw MeshError("obj parse error at line " + std::to_string(line_no) + ": bad number");
            (tag == "v" ? positions : file_normals).push_back(p);
        } else if (tag == "f") {
            if (tokens.size() < 4) throw MeshError("obj parse error at line " + std::to_string(line_no));
            std::vector<Corner> polygon;
            for (std::size_t t = 1; t < tokens.size(); ++t) {
                const std::string_view tok = tokens[t];
                const auto s1 = tok.find('/');
                long vi = 0;
                if (!parse_int(tok.substr(0, s1), vi))
                    throw MeshError("obj parse error at line " + std::to_string(line_no) + ": bad index");
                Corner c{resolve_index(vi, positions.size(), line_no), -1};
                if (s1 != std::string_view::npos) {
                    const auto s2 = tok.find('/', s1 + 1);
                    if (s2 != std::string_view::npos && s2 + 1 < tok.size()) {
                        long ni = 0;
                        if (!parse_int(tok.substr(s2 + 1), ni))
                            throw MeshError("obj parse error at line " + std::to_string(line_no) + ": bad index");
                        c.normal = resolve_index(ni, file_normals.size(), line_no);
                    }
                }
                polygon.push_back(c);
            }
            for (std::size_t k = 1; k + 1 < polygon.size(); ++k)
                triangles.push_back({polygon[0], polygon[k], polygon[k + 1]});
        }
        // Other records (vt, g, o, s, usemtl, mtllib, l, p) carry nothing we use.
    }

    if (triangles.empty()) throw MeshError("no faces");

    LoadedMesh result;
    MeshDiagnostics& diag = result.diagnostics;
    diag.parsed_vertices = positions.size();
    diag.parsed_faces = triangles.size();

    TriangleMesh raw;
    raw.vertices = positions;
    raw.faces.reserve(triangles.size());
    for (const auto& t : triangles) raw.faces.push_back({t[0].vertex, t[1].vertex, t[2].vertex});

    // Per-vertex normals from the file, averaged over the corners that use them.
    bool all_corners_have_normals = !file_normals.empty();
    for (const auto& t : triangles)
        for (const Corner& c : t)
            if (c.normal < 0) all_corners_have_normals = false;

    const double tolerance = default_weld_tolerance(raw);
    std::vector<int> remap;
    TriangleMesh welded = weld_vertices(raw, tolerance, &diag, &remap);

    // Carry file normals across the weld, averaged over the corners that use them.
    std::vector<Vec3> welded_normals;
    if (all_corners_have_normals) {
        welded_normals.assign(welded.vertices.size(), Vec3::Zero());
        for (const auto& t : triangles)
            for (const Corner& c : t)
                if (remap[c.vertex] >= 0) welded_normals[remap[c.vertex]] += file_normals[c.normal].normalized();
        bool usable = true;
        for (Vec3& n : welded_normals) {
            if (n.norm() <= 0.0) {
                usable = false;
                break;
            }
            n.normalize();
        }
        if (!usable) welded_normals.clear();
    }

    result.mesh = orient_faces(welded, &diag);
    if (!welded_normals.empty()) {
        result.mesh.normals = std::move(welded_normals);
        diag.normals_from_file = true;
    } else {
        result.mesh.normals = area_weighted_normals(result.mesh.vertices, result.mesh.faces);
    }
    if (result.mesh.faces.empty()) throw MeshError("no faces");
    count_topology(result.mesh, diag);
    return result;
}

LoadedMesh load_mesh(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw MeshError("mesh not found: " + path.string());
    std::ifstream in(path);
    if (!in) throw MeshError("cannot open mesh: " + path.string());
    return parse_obj(in);
}

void write_obj(const std::filesystem::path& path, const TriangleMesh& mesh) {
    std::ofstream out(path);
    if (!out) throw MeshError("cannot write mesh: " + path.string());
    out.precision(17);
    for (const Vec3& v : mesh.vertices) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
    const bool with_normals = mesh.normals.size() == mesh.vertices.size();
    if (with_normals)
        for (const Vec3& n : mesh.normals) out << "vn " << n.x() << ' ' << n.y() << ' ' << n.z() << '\n';
    for (const Face& f : mesh.faces) {
        out << 'f';
        for (int v : f) {
            out << ' ' << v + 1;
            if (with_normals) out << "//" << v + 1;
        }
        out << '\n';
    }
}

TriangleMesh normalize_size(const TriangleMesh& mesh) {
    if (mesh.vertices.empty()) throw MeshError("cannot normalize an empty mesh");
    const BoundingBox box = bounding_box(mesh);
    const double longest = box.extent().maxCoeff();
    if (!(longest > 0.0)) throw MeshError("zero-extent mesh");
    TriangleMesh out = mesh;
    const Vec3 center = box.center();
    for (Vec3& v : out.vertices) v = (v - center) / longest;
    return out;
}

Vec3 surface_centroid(const TriangleMesh& mesh) {
    Vec3 acc = Vec3::Zero();
    double total = 0.0;
    for (const Face& f : mesh.faces) {
        const Vec3& a = mesh.vertices[f[0]];
        const Vec3& b = mesh.vertices[f[1]];
        const Vec3& c = mesh.vertices[f[2]];
        const double area = triangle_area(a, b, c);
        acc += area * (a + b + c) / 3.0;
        total += area;
    }
    if (total > 0.0) return acc / total;
    Vec3 mean = Vec3::Zero();
    for (const Vec3& v : mesh.vertices) mean += v;
    return mesh.vertices.empty() ? mean : Vec3(mean / static_cast<double>(mesh.vertices.size()));
}

double bounding_radius(const TriangleMesh& mesh, const Vec3& center) {
    double r = 0.0;
    for (const Vec3& v : mesh.vertices) r = std::max(r, (v - center).norm());
    return r;
}

double mean_edge_length(const TriangleMesh& mesh) {
    const auto edges = build_edges(mesh);
    if (edges.empty()) return 0.0;
    double total = 0.0;
    for (const Edge& e : edges) total += (mesh.vertices[e.a] - mesh.vertices[e.b]).norm();
    return total / static_cast<double>(edges.size());
}

NormalField smooth_normals(const TriangleMesh& mesh, double sigma) {
    if (sigma < 0.0) throw std::invalid_argument("smoothing sigma must be non-negative");
    NormalField field{mesh.normals, sigma};
    if (sigma == 0.0) return field;

    const auto ring = vertex_neighbors(mesh);
    const double unit = normal_smoothing_unit * mean_edge_length(mesh);
    if (!(unit > 0.0)) return field;
    const double denom = 2.0 * sigma * sigma * unit * unit;
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        Vec3 acc = mesh.normals[i];
        for (int j : ring[i]) {
            const double d2 = (mesh.vertices[j] - mesh.vertices[i]).squaredNorm();
            acc += std::exp(-d2 / denom) * mesh.normals[j];
        }
        const double len = acc.norm();
        field.normals[i] = len > 0.0 ? Vec3(acc / len) : mesh.normals[i];
    }
    return field;
}

}  // namespace linedraw
