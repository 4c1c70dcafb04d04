#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "psfront/frames.hpp"
#include "psfront/singular.hpp"

namespace psfront {

// Vertex->node mapping plus quad faces; either the full (x,y) lattice or the
// (u,v) sub-lattice of a null-coordinate job.
struct MeshView {
    std::vector<std::size_t> vertex_nodes;
    std::vector<std::array<std::int32_t, 4>> quads;
};

MeshView full_grid_mesh(const SurfaceGrid& s);

// (u,v) lattice embedded in the internal grid: ix = iu+iv and
// iy = iu-iv+(nv-1) (epsilon=+1) or iy = iv-iu+(nu-1) (epsilon=-1).
struct UvEmbedding {
    int nu = 0, nv = 0;
    int epsilon = +1;
};
MeshView uv_sublattice_mesh(const SurfaceGrid& s, const UvEmbedding& uv);

// Symmetric log color map on the clipped mean curvature:
//   s = sign(Hc) * log1p(|Hc|) / log1p(Hmax),  Hc = clamp(H, -Hmax, Hmax)
//   r = round(127.5 (1+s)), g = round(255 (1-|s|)), b = round(127.5 (1-s)).
std::array<std::uint8_t, 3> curvature_color(double H, double hmax = 1e4);
double clipped_mean_curvature(double H, double hmax = 1e4);

void write_obj(const SurfaceGrid& s, const MeshView& mesh, const std::string& path);
void write_ply(const SurfaceGrid& s, const MeshView& mesh, const std::string& path);
void write_csv(const SurfaceGrid& s, const std::string& path);
void write_singular_json(const SingularReport& report, const std::string& path);

// Node table as exported by write_csv (17 significant digits; lossless).
struct NodeTable {
    std::vector<double> x, y;
    std::vector<Vec3> f, nrm;
    std::vector<double> A, B, phi, mu, H;
    std::size_t size() const { return x.size(); }
};
NodeTable read_csv(const std::string& path);
NodeTable node_table(const SurfaceGrid& s);
bool bitwise_equal(const NodeTable& a, const NodeTable& b);

}  // namespace psfront
