#include "psfront/mesh_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "psfront/errors.hpp"

namespace psfront {

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    return out;
}

// Singular-collapse nodes are finite points and stay in the mesh; NaNs and
// out-of-range faces mean an upstream bug.
void validate_mesh(const SurfaceGrid& s, const MeshView& mesh) {
    for (std::size_t vi : mesh.vertex_nodes) {
        if (vi >= s.nodes.size() || !s.nodes[vi].f.allFinite()) {
            throw NumericalError("mesh export: non-finite or out-of-range vertex");
        }
    }
    const std::int32_t n = static_cast<std::int32_t>(mesh.vertex_nodes.size());
    for (const auto& q : mesh.quads) {
        for (int k = 0; k < 4; ++k) {
            if (q[k] < 0 || q[k] >= n) throw NumericalError("mesh export: face index out of range");
        }
    }
}

}  // namespace

MeshView full_grid_mesh(const SurfaceGrid& s) {
    MeshView mesh;
    const int nx = s.nx(), ny = s.ny();
    mesh.vertex_nodes.resize(s.nodes.size());
    for (std::size_t k = 0; k < s.nodes.size(); ++k) mesh.vertex_nodes[k] = k;
    mesh.quads.reserve(static_cast<std::size_t>(nx - 1) * static_cast<std::size_t>(ny - 1));
    for (int iy = 0; iy + 1 < ny; ++iy) {
        for (int ix = 0; ix + 1 < nx; ++ix) {
            mesh.quads.push_back({static_cast<std::int32_t>(s.idx(ix, iy)),
                                  static_cast<std::int32_t>(s.idx(ix + 1, iy)),
                                  static_cast<std::int32_t>(s.idx(ix + 1, iy + 1)),
                                  static_cast<std::int32_t>(s.idx(ix, iy + 1))});
        }
    }
    return mesh;
}

MeshView uv_sublattice_mesh(const SurfaceGrid& s, const UvEmbedding& uv) {
    MeshView mesh;
    const int nu = uv.nu, nv = uv.nv;
    auto node_of = [&](int iu, int iv) {
        const int ix = iu + iv;
        const int iy = (uv.epsilon == 1) ? (iu - iv + (nv - 1)) : (iv - iu + (nu - 1));
        return s.idx(ix, iy);
    };
    mesh.vertex_nodes.resize(static_cast<std::size_t>(nu) * static_cast<std::size_t>(nv));
    for (int iv = 0; iv < nv; ++iv) {
        for (int iu = 0; iu < nu; ++iu) {
            mesh.vertex_nodes[static_cast<std::size_t>(iv) * nu + iu] = node_of(iu, iv);
        }
    }
    for (int iv = 0; iv + 1 < nv; ++iv) {
        for (int iu = 0; iu + 1 < nu; ++iu) {
            const std::int32_t a = static_cast<std::int32_t>(iv * nu + iu);
            mesh.quads.push_back({a, a + 1, a + 1 + nu, a + nu});
        }
    }
    return mesh;
}

double clipped_mean_curvature(double H, double hmax) {
    if (std::isnan(H)) return hmax;
    if (H > hmax) return hmax;
    if (H < -hmax) return -hmax;
    return H;
}

std::array<std::uint8_t, 3> curvature_color(double H, double hmax) {
    const double hc = clipped_mean_curvature(H, hmax);
    const double s = (hc >= 0 ? 1.0 : -1.0) * std::log1p(std::abs(hc)) / std::log1p(hmax);
    auto channel = [](double v) {
        const long r = std::lround(v);
        return static_cast<std::uint8_t>(std::max(0L, std::min(255L, r)));
    };
    return {channel(127.5 * (1.0 + s)), channel(255.0 * (1.0 - std::abs(s))),
            channel(127.5 * (1.0 - s))};
}

void write_obj(const SurfaceGrid& s, const MeshView& mesh, const std::string& path) {
    validate_mesh(s, mesh);
    std::ofstream out = open_out(path);
    out << "# pseudospherical frontal mesh\n";
    for (std::size_t vi : mesh.vertex_nodes) {
        const SurfaceNode& n = s.nodes[vi];
        out << "v " << g17(n.f[0]) << ' ' << g17(n.f[1]) << ' ' << g17(n.f[2]) << '\n';
    }
    for (std::size_t vi : mesh.vertex_nodes) {
        const SurfaceNode& n = s.nodes[vi];
        out << "vn " << g17(n.nrm[0]) << ' ' << g17(n.nrm[1]) << ' ' << g17(n.nrm[2]) << '\n';
    }
    for (const auto& q : mesh.quads) {
        out << "f";
        for (int k = 0; k < 4; ++k) out << ' ' << q[k] + 1 << "//" << q[k] + 1;
        out << '\n';
    }
    if (!out) throw ConfigError("failed writing " + path);
}

void write_ply(const SurfaceGrid& s, const MeshView& mesh, const std::string& path) {
    validate_mesh(s, mesh);
    std::ofstream out = open_out(path);
    out << "ply\nformat ascii 1.0\n";
    out << "element vertex " << mesh.vertex_nodes.size() << '\n';
    out << "property double x\nproperty double y\nproperty double z\n";
    out << "property double nx\nproperty double ny\nproperty double nz\n";
    out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
    out << "property double quality\n";
    out << "element face " << mesh.quads.size() << '\n';
    out << "property list uchar int vertex_indices\nend_header\n";
    for (std::size_t vi : mesh.vertex_nodes) {
        const SurfaceNode& n = s.nodes[vi];
        const auto rgb = curvature_color(n.H);
        out << g17(n.f[0]) << ' ' << g17(n.f[1]) << ' ' << g17(n.f[2]) << ' ' << g17(n.nrm[0])
            << ' ' << g17(n.nrm[1]) << ' ' << g17(n.nrm[2]) << ' ' << int(rgb[0]) << ' '
            << int(rgb[1]) << ' ' << int(rgb[2]) << ' ' << g17(clipped_mean_curvature(n.H))
            << '\n';
    }
    for (const auto& q : mesh.quads) {
        out << "4 " << q[0] << ' ' << q[1] << ' ' << q[2] << ' ' << q[3] << '\n';
    }
    if (!out) throw ConfigError("failed writing " + path);
}

void write_csv(const SurfaceGrid& s, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "x,y,fx,fy,fz,nx,ny,nz,A,B,phi,mu,H\n";
    for (int iy = 0; iy < s.ny(); ++iy) {
        for (int ix = 0; ix < s.nx(); ++ix) {
            const SurfaceNode& n = s.nodes[s.idx(ix, iy)];
            out << g17(s.xaxis.value(ix)) << ',' << g17(s.yaxis.value(iy)) << ',' << g17(n.f[0])
                << ',' << g17(n.f[1]) << ',' << g17(n.f[2]) << ',' << g17(n.nrm[0]) << ','
                << g17(n.nrm[1]) << ',' << g17(n.nrm[2]) << ',' << g17(n.A) << ',' << g17(n.B)
                << ',' << g17(n.phi) << ',' << g17(n.mu) << ',' << g17(n.H) << '\n';
        }
    }
    if (!out) throw ConfigError("failed writing " + path);
}

void write_singular_json(const SingularReport& report, const std::string& path) {
    nlohmann::ordered_json doc;
    doc["degenerate_region"] = report.degenerate_region;
    doc["zero_fraction"] = report.zero_fraction;
    doc["curves"] = nlohmann::ordered_json::array();
    for (const auto& curve : report.curves) {
        nlohmann::ordered_json jc;
        jc["characteristic"] = curve.characteristic;
        jc["closed"] = curve.closed;
        jc["points"] = nlohmann::ordered_json::array();
        for (const auto& p : curve.points) {
            nlohmann::ordered_json jp;
            jp["x"] = p.x;
            jp["y"] = p.y;
            jp["arc"] = p.arc;
            jp["f"] = {p.f[0], p.f[1], p.f[2]};
            jp["type"] = to_string(p.type);
            jp["eta"] = {p.eta[0], p.eta[1]};
            jp["weakly_regular"] = p.weakly_regular;
            jp["det_tangent_eta"] = p.detD;
            jc["points"].push_back(std::move(jp));
        }
        doc["curves"].push_back(std::move(jc));
    }
    std::ofstream out = open_out(path);
    out << doc.dump(2) << '\n';
    if (!out) throw ConfigError("failed writing " + path);
}

NodeTable node_table(const SurfaceGrid& s) {
    NodeTable t;
    const std::size_t n = s.nodes.size();
    t.x.reserve(n);
    for (int iy = 0; iy < s.ny(); ++iy) {
        for (int ix = 0; ix < s.nx(); ++ix) {
            const SurfaceNode& node = s.nodes[s.idx(ix, iy)];
            t.x.push_back(s.xaxis.value(ix));
            t.y.push_back(s.yaxis.value(iy));
            t.f.push_back(node.f);
            t.nrm.push_back(node.nrm);
            t.A.push_back(node.A);
            t.B.push_back(node.B);
            t.phi.push_back(node.phi);
            t.mu.push_back(node.mu);
            t.H.push_back(node.H);
        }
    }
    return t;
}

NodeTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty CSV: " + path);
    NodeTable t;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::array<double, 13> vals{};
        std::size_t pos = 0;
        for (int col = 0; col < 13; ++col) {
            const std::size_t next = line.find(',', pos);
            const std::string tok =
                line.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
            vals[static_cast<std::size_t>(col)] = std::strtod(tok.c_str(), nullptr);
            if (next == std::string::npos) {
                if (col != 12) throw ConfigError("short CSV row in " + path);
                break;
            }
            pos = next + 1;
        }
        t.x.push_back(vals[0]);
        t.y.push_back(vals[1]);
        t.f.emplace_back(vals[2], vals[3], vals[4]);
        t.nrm.emplace_back(vals[5], vals[6], vals[7]);
        t.A.push_back(vals[8]);
        t.B.push_back(vals[9]);
        t.phi.push_back(vals[10]);
        t.mu.push_back(vals[11]);
        t.H.push_back(vals[12]);
    }
    return t;
}

bool bitwise_equal(const NodeTable& a, const NodeTable& b) {
    if (a.size() != b.size()) return false;
    auto eq = [](double x, double y) {
        return std::memcmp(&x, &y, sizeof(double)) == 0 || (std::isnan(x) && std::isnan(y));
    };
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (!eq(a.x[k], b.x[k]) || !eq(a.y[k], b.y[k])) return false;
        for (int c = 0; c < 3; ++c) {
            if (!eq(a.f[k][c], b.f[k][c]) || !eq(a.nrm[k][c], b.nrm[k][c])) return false;
        }
        if (!eq(a.A[k], b.A[k]) || !eq(a.B[k], b.B[k]) || !eq(a.phi[k], b.phi[k]) ||
            !eq(a.mu[k], b.mu[k]) || !eq(a.H[k], b.H[k])) {
            return false;
        }
    }
    return true;
}

}  // namespace psfront
