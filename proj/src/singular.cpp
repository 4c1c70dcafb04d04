#include "psfront/singular.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "psfront/errors.hpp"

namespace psfront {

namespace {

struct DetectedPoint {
    double x, y;
    SurfacePointSample sample;
    bool junction = false;
};

struct EdgeKey {
    int axis;  // 0: x-edge, 1: y-edge, 2: node
    int ix, iy;
    bool operator<(const EdgeKey& o) const {
        if (axis != o.axis) return axis < o.axis;
        if (ix != o.ix) return ix < o.ix;
        return iy < o.iy;
    }
};

double bisect_mu(const PointEvaluator& ev, double ax, double ay, double bx, double by, double fa,
                 double tol) {
    // Returns parameter w in [0,1] along the edge a->b.
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 80; ++it) {
        const double w = 0.5 * (lo + hi);
        const double mu = ev.at(ax + w * (bx - ax), ay + w * (by - ay)).mu;
        if (std::abs(mu) <= tol) return w;
        if ((mu < 0) == (fa < 0)) {
            lo = w;
        } else {
            hi = w;
        }
    }
    return 0.5 * (lo + hi);
}

struct GradField {
    std::vector<double> gpx, gpy, gmx, gmy;  // grad phi, grad mu on nodes
};

GradField node_gradients(const SurfaceGrid& s) {
    const int nx = s.nx(), ny = s.ny();
    GradField g;
    const std::size_t total = s.nodes.size();
    g.gpx.assign(total, 0.0);
    g.gpy.assign(total, 0.0);
    g.gmx.assign(total, 0.0);
    g.gmy.assign(total, 0.0);
    auto sival = [&](std::size_t k) { return std::sin(s.nodes[k].phi); };
    auto coval = [&](std::size_t k) { return std::cos(s.nodes[k].phi); };
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const std::size_t k = s.idx(ix, iy);
            auto dx = [&](auto&& f) {
                if (ix > 0 && ix + 1 < nx) {
                    return (f(s.idx(ix + 1, iy)) - f(s.idx(ix - 1, iy))) / (2 * s.xaxis.h);
                }
                if (ix == 0) return (f(s.idx(1, iy)) - f(s.idx(0, iy))) / s.xaxis.h;
                return (f(s.idx(nx - 1, iy)) - f(s.idx(nx - 2, iy))) / s.xaxis.h;
            };
            auto dy = [&](auto&& f) {
                if (iy > 0 && iy + 1 < ny) {
                    return (f(s.idx(ix, iy + 1)) - f(s.idx(ix, iy - 1))) / (2 * s.yaxis.h);
                }
                if (iy == 0) return (f(s.idx(ix, 1)) - f(s.idx(ix, 0))) / s.yaxis.h;
                return (f(s.idx(ix, ny - 1)) - f(s.idx(ix, ny - 2))) / s.yaxis.h;
            };
            const double si = sival(k), co = coval(k);
            // phi_x = s_x c - c_x s from the smooth sin/cos fields.
            g.gpx[k] = dx(sival) * co - dx(coval) * si;
            g.gpy[k] = dy(sival) * co - dy(coval) * si;
            auto muval = [&](std::size_t q) { return s.nodes[q].mu; };
            g.gmx[k] = dx(muval);
            g.gmy[k] = dy(muval);
        }
    }
    return g;
}

double bilinear(const SurfaceGrid& s, const std::vector<double>& field, double x, double y) {
    const double fx = (x - s.xaxis.origin) / s.xaxis.h + s.xaxis.basepoint;
    const double fy = (y - s.yaxis.origin) / s.yaxis.h + s.yaxis.basepoint;
    int ix = static_cast<int>(std::floor(fx));
    int iy = static_cast<int>(std::floor(fy));
    ix = std::max(0, std::min(s.nx() - 2, ix));
    iy = std::max(0, std::min(s.ny() - 2, iy));
    const double u = std::max(0.0, std::min(1.0, fx - ix));
    const double v = std::max(0.0, std::min(1.0, fy - iy));
    const double f00 = field[s.idx(ix, iy)], f10 = field[s.idx(ix + 1, iy)];
    const double f01 = field[s.idx(ix, iy + 1)], f11 = field[s.idx(ix + 1, iy + 1)];
    return (1 - u) * (1 - v) * f00 + u * (1 - v) * f10 + (1 - u) * v * f01 + u * v * f11;
}

}  // namespace

std::string to_string(SingularType t) {
    switch (t) {
        case SingularType::CuspidalEdge: return "cuspidal_edge";
        case SingularType::Swallowtail: return "swallowtail";
        case SingularType::ConeArc: return "cone";
        case SingularType::HigherOrderCuspidalEdge: return "higher_order_cuspidal_edge";
        case SingularType::Degenerate: return "degenerate";
        case SingularType::Unclassified: return "unclassified";
    }
    return "unclassified";
}

SingularReport detect_singular_set(const SurfaceGrid& surface, const FrameGrid& frames,
                                   const SingularOptions& opts) {
    SingularReport report;
    const int nx = surface.nx(), ny = surface.ny();
    const std::size_t total = surface.nodes.size();

    std::size_t zero_count = 0;
    for (const auto& node : surface.nodes) {
        if (std::abs(node.mu) <= opts.node_zero_tol) ++zero_count;
    }
    report.zero_fraction = static_cast<double>(zero_count) / static_cast<double>(total);
    if (report.zero_fraction > opts.degenerate_region_fraction) {
        report.degenerate_region = true;
        return report;
    }

    const PointEvaluator ev(frames, surface.lambda0);
    auto mu_at = [&](int ix, int iy) { return surface.nodes[surface.idx(ix, iy)].mu; };
    auto is_zero = [&](int ix, int iy) { return std::abs(mu_at(ix, iy)) <= opts.node_zero_tol; };

    std::map<EdgeKey, int> point_ids;
    std::vector<DetectedPoint> points;
    auto intern = [&](const EdgeKey& key, double x, double y) {
        const auto it = point_ids.find(key);
        if (it != point_ids.end()) return it->second;
        DetectedPoint p;
        p.x = x;
        p.y = y;
        p.sample = ev.at(x, y);
        const int id = static_cast<int>(points.size());
        points.push_back(std::move(p));
        point_ids.emplace(key, id);
        return id;
    };

    // Crossing points on edges; node-zeros are shared by their incident edges.
    auto edge_point = [&](int axis, int ix, int iy) -> int {
        const int jx = (axis == 0) ? ix + 1 : ix;
        const int jy = (axis == 0) ? iy : iy + 1;
        const bool za = is_zero(ix, iy), zb = is_zero(jx, jy);
        if (za || zb) return -2;  // handled through node points
        const double ma = mu_at(ix, iy), mb = mu_at(jx, jy);
        if ((ma < 0) == (mb < 0)) return -1;
        const EdgeKey key{axis, ix, iy};
        const auto it = point_ids.find(key);
        if (it != point_ids.end()) return it->second;
        const double ax = surface.xaxis.value(ix), ay = surface.yaxis.value(iy);
        const double bx = surface.xaxis.value(jx), by = surface.yaxis.value(jy);
        const double w = bisect_mu(ev, ax, ay, bx, by, ma, opts.refine_tol);
        return intern(key, ax + w * (bx - ax), ay + w * (by - ay));
    };
    auto node_point = [&](int ix, int iy) -> int {
        if (!is_zero(ix, iy)) return -1;
        return intern(EdgeKey{2, ix, iy}, surface.xaxis.value(ix), surface.yaxis.value(iy));
    };

    // Cell pass: collect the distinct singular points on each cell boundary
    // and connect them, disambiguating 4-crossing saddles by the center value.
    // Segments are deduplicated: cells on both sides of a node-zero row would
    // otherwise emit the same segment twice and fake junctions.
    std::vector<std::pair<int, int>> segments;
    std::set<std::pair<int, int>> seen;
    auto add_segment = [&](int a, int b) {
        if (a == b) return;
        const auto key = std::minmax(a, b);
        if (seen.insert(key).second) segments.emplace_back(a, b);
    };
    for (int iy = 0; iy + 1 < ny; ++iy) {
        for (int ix = 0; ix + 1 < nx; ++ix) {
            int ids[8];
            int count = 0;
            auto push = [&](int id) {
                if (id < 0) return;
                for (int k = 0; k < count; ++k) {
                    if (ids[k] == id) return;
                }
                ids[count++] = id;
            };
            const int b = edge_point(0, ix, iy);
            const int t = edge_point(0, ix, iy + 1);
            const int l = edge_point(1, ix, iy);
            const int r = edge_point(1, ix + 1, iy);
            push(node_point(ix, iy));
            push(node_point(ix + 1, iy));
            push(node_point(ix, iy + 1));
            push(node_point(ix + 1, iy + 1));
            push(b);
            push(t);
            push(l);
            push(r);
            if (count == 2) {
                add_segment(ids[0], ids[1]);
            } else if (count == 4 && b >= 0 && t >= 0 && l >= 0 && r >= 0) {
                const double cx = 0.5 * (surface.xaxis.value(ix) + surface.xaxis.value(ix + 1));
                const double cy = 0.5 * (surface.yaxis.value(iy) + surface.yaxis.value(iy + 1));
                const double mc = ev.at(cx, cy).mu;
                const double m00 = mu_at(ix, iy);
                if ((mc < 0) == (m00 < 0)) {
                    add_segment(b, r);
                    add_segment(t, l);
                } else {
                    add_segment(b, l);
                    add_segment(t, r);
                }
            } else if (count > 2) {
                // Mixed node/edge contact (curves meeting a node-zero line):
                // connect nearest pairs; shared points become junctions.
                for (int k = 1; k < count; ++k) add_segment(ids[0], ids[k]);
            }
        }
    }

    // Chain segments into polylines; junctions (degree >= 3) break chains.
    std::vector<std::vector<std::pair<int, int>>> adj(points.size());
    for (std::size_t sidx = 0; sidx < segments.size(); ++sidx) {
        const auto [a, bb] = segments[sidx];
        if (a == bb) continue;
        adj[static_cast<std::size_t>(a)].emplace_back(bb, static_cast<int>(sidx));
        adj[static_cast<std::size_t>(bb)].emplace_back(a, static_cast<int>(sidx));
    }
    for (std::size_t pid = 0; pid < points.size(); ++pid) {
        if (adj[pid].size() >= 3) points[pid].junction = true;
    }
    std::vector<bool> used(segments.size(), false);
    std::vector<std::vector<int>> chains;
    auto walk = [&](int start, int seg_idx) {
        std::vector<int> chain{start};
        int prev = start;
        int seg = seg_idx;
        for (;;) {
            used[static_cast<std::size_t>(seg)] = true;
            const auto [a, b] = segments[static_cast<std::size_t>(seg)];
            const int next = (a == prev) ? b : a;
            chain.push_back(next);
            if (points[static_cast<std::size_t>(next)].junction) break;
            int next_seg = -1;
            for (const auto& [nb, si] : adj[static_cast<std::size_t>(next)]) {
                (void)nb;
                if (!used[static_cast<std::size_t>(si)]) {
                    next_seg = si;
                    break;
                }
            }
            if (next_seg < 0) break;
            prev = next;
            seg = next_seg;
        }
        return chain;
    };
    // Open chains first (endpoints and junctions), then remaining loops.
    for (std::size_t pid = 0; pid < points.size(); ++pid) {
        const bool endpoint = adj[pid].size() == 1 || points[pid].junction;
        if (!endpoint) continue;
        for (const auto& [nb, si] : adj[pid]) {
            (void)nb;
            if (!used[static_cast<std::size_t>(si)]) {
                chains.push_back(walk(static_cast<int>(pid), si));
            }
        }
    }
    std::vector<bool> in_loop(points.size(), false);
    for (std::size_t sidx = 0; sidx < segments.size(); ++sidx) {
        if (used[sidx]) continue;
        chains.push_back(walk(segments[sidx].first, static_cast<int>(sidx)));
    }
    (void)in_loop;

    const GradField grads = node_gradients(surface);
    const double hmax = std::max(surface.xaxis.h, surface.yaxis.h);
    const double flag_radius = (opts.flag_radius > 0) ? opts.flag_radius : 2.0 * hmax;

    // Domain locations of the potential's flagged parameters.
    std::vector<std::pair<double, double>> flagged;
    if (frames.pair && frames.pair->expected == SingularSetKind::Diagonal) {
        const double eps = frames.pair->epsilon;
        for (double tstar : frames.pair->degenerate_params) flagged.emplace_back(tstar, eps * tstar);
        for (double tstar : frames.pair->chi_top_zero_params) flagged.emplace_back(tstar, eps * tstar);
        for (double tstar : frames.pair->psi_bottom_zero_params) {
            flagged.emplace_back(tstar, eps * tstar);
        }
    }

    for (const auto& chain : chains) {
        if (chain.size() < 2) continue;
        SingularCurve curve;
        curve.closed = chain.front() == chain.back() && chain.size() > 3;
        curve.points.reserve(chain.size());
        double arc = 0.0;
        for (std::size_t k = 0; k < chain.size(); ++k) {
            const DetectedPoint& dp = points[static_cast<std::size_t>(chain[k])];
            SingularPoint p;
            p.x = dp.x;
            p.y = dp.y;
            if (k > 0) {
                const SingularPoint& q = curve.points.back();
                arc += std::hypot(p.x - q.x, p.y - q.y);
            }
            p.arc = arc;
            p.f = dp.sample.f;
            p.A = dp.sample.A;
            p.B = dp.sample.B;
            p.weakly_regular =
                dp.sample.Up.norm() > opts.weak_tol && dp.sample.Vp.norm() > opts.weak_tol;
            const double cosdir = std::cos(dp.sample.phi) >= 0 ? 1.0 : -1.0;
            Eigen::Vector2d eta(dp.sample.B * cosdir, -dp.sample.A);
            const double en = eta.norm();
            p.eta = en > 0 ? Eigen::Vector2d(eta / en) : Eigen::Vector2d(0, -1);
            p.grad_phi = std::hypot(bilinear(surface, grads.gpx, p.x, p.y),
                                    bilinear(surface, grads.gpy, p.x, p.y));
            p.grad_mu = std::hypot(bilinear(surface, grads.gmx, p.x, p.y),
                                   bilinear(surface, grads.gmy, p.x, p.y));
            if (points[static_cast<std::size_t>(chain[k])].junction) {
                p.type = SingularType::Degenerate;
            }
            curve.points.push_back(std::move(p));
        }

        // Tangents and det(sigma', eta).
        const std::size_t m = curve.points.size();
        std::vector<Eigen::Vector2d> tangent(m);
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t ka = (k == 0) ? 0 : k - 1;
            const std::size_t kb = (k + 1 == m) ? m - 1 : k + 1;
            Eigen::Vector2d d(curve.points[kb].x - curve.points[ka].x,
                              curve.points[kb].y - curve.points[ka].y);
            const double dn = d.norm();
            tangent[k] = dn > 0 ? Eigen::Vector2d(d / dn) : Eigen::Vector2d(1, 0);
            curve.points[k].detD =
                tangent[k][0] * curve.points[k].eta[1] - tangent[k][1] * curve.points[k].eta[0];
        }

        bool char_x = true, char_y = true;
        for (std::size_t k = 0; k < m; ++k) {
            if (std::abs(tangent[k][1]) > opts.characteristic_angle) char_x = false;
            if (std::abs(tangent[k][0]) > opts.characteristic_angle) char_y = false;
        }
        curve.characteristic = char_x || char_y;

        // Pointwise labels.
        for (auto& p : curve.points) {
            if (p.type == SingularType::Degenerate) continue;  // junction
            bool near_flag = false;
            for (const auto& [fx, fy] : flagged) {
                if (std::hypot(p.x - fx, p.y - fy) <= flag_radius) {
                    near_flag = true;
                    break;
                }
            }
            if (near_flag) {
                p.type = SingularType::Degenerate;
                continue;
            }
            if (p.weakly_regular) {
                if (p.grad_phi <= opts.degeneracy_tol) {
                    p.type = SingularType::Degenerate;
                } else {
                    p.type = SingularType::Unclassified;  // resolved by the arc pass
                }
            } else {
                p.type = (p.grad_mu > opts.mu_degeneracy_tol)
                             ? SingularType::HigherOrderCuspidalEdge
                             : SingularType::Degenerate;
            }
        }

        // Arc pass for the weakly regular stretch: cone when det(sigma', eta)
        // vanishes along the whole arc, swallowtails at its sign changes,
        // cuspidal edges elsewhere.
        const double arc_len = curve.points.back().arc;
        const double cone_tol = opts.zero_tol_scale * std::max(arc_len, 1.0);
        bool all_small = true;
        for (const auto& p : curve.points) {
            if (p.type != SingularType::Unclassified) continue;
            if (std::abs(p.detD) > cone_tol) all_small = false;
        }
        bool any_deferred = false;
        for (const auto& p : curve.points) {
            if (p.type == SingularType::Unclassified) any_deferred = true;
        }
        if (any_deferred && all_small) {
            for (auto& p : curve.points) {
                if (p.type == SingularType::Unclassified) p.type = SingularType::ConeArc;
            }
        } else if (any_deferred) {
            std::vector<SingularPoint> augmented;
            augmented.reserve(curve.points.size() + 4);
            for (std::size_t k = 0; k < m; ++k) {
                SingularPoint p = curve.points[k];
                const bool deferred = p.type == SingularType::Unclassified;
                if (deferred) {
                    p.type = SingularType::CuspidalEdge;
                }
                augmented.push_back(p);
                if (k + 1 < m && deferred &&
                    curve.points[k + 1].type == SingularType::Unclassified) {
                    const double da = curve.points[k].detD, db = curve.points[k + 1].detD;
                    if ((da < 0) != (db < 0) && std::abs(da - db) > 0.0) {
                        const double w = da / (da - db);
                        const double sx =
                            curve.points[k].x + w * (curve.points[k + 1].x - curve.points[k].x);
                        const double sy =
                            curve.points[k].y + w * (curve.points[k + 1].y - curve.points[k].y);
                        SingularPoint sw;
                        const SurfacePointSample smp = ev.at(sx, sy);
                        sw.x = sx;
                        sw.y = sy;
                        sw.arc = curve.points[k].arc +
                                 w * (curve.points[k + 1].arc - curve.points[k].arc);
                        sw.f = smp.f;
                        sw.A = smp.A;
                        sw.B = smp.B;
                        sw.weakly_regular = true;
                        sw.eta = 0.5 * (curve.points[k].eta + curve.points[k + 1].eta);
                        sw.detD = 0.0;
                        sw.grad_phi = std::hypot(bilinear(surface, grads.gpx, sx, sy),
                                                 bilinear(surface, grads.gpy, sx, sy));
                        sw.grad_mu = std::hypot(bilinear(surface, grads.gmx, sx, sy),
                                                bilinear(surface, grads.gmy, sx, sy));
                        sw.type = SingularType::Swallowtail;
                        augmented.push_back(std::move(sw));
                    }
                }
            }
            curve.points = std::move(augmented);
        }
        report.curves.push_back(std::move(curve));
    }

    std::sort(report.curves.begin(), report.curves.end(),
              [](const SingularCurve& a, const SingularCurve& b) {
                  if (a.points.empty() || b.points.empty()) return a.points.size() > b.points.size();
                  if (a.points.size() != b.points.size()) return a.points.size() > b.points.size();
                  return std::make_pair(a.points.front().x, a.points.front().y) <
                         std::make_pair(b.points.front().x, b.points.front().y);
              });
    return report;
}

SingularType classify(const SingularReport& report, double x, double y,
                      const SurfaceGrid& surface, double locate_tol) {
    const double tol =
        locate_tol > 0 ? locate_tol : 2.0 * std::max(surface.xaxis.h, surface.yaxis.h);
    double best = tol;
    const SingularPoint* found = nullptr;
    for (const auto& curve : report.curves) {
        for (const auto& p : curve.points) {
            const double d = std::hypot(p.x - x, p.y - y);
            if (d <= best) {
                best = d;
                found = &p;
            }
        }
    }
    if (!found) {
        throw NotOnSingularSet("no detected singular point within " + std::to_string(tol) +
                               " of (" + std::to_string(x) + ", " + std::to_string(y) + ")");
    }
    return found->type;
}

CharacteristicDiagnostics characteristic_diagnostics(const SurfaceGrid& surface,
                                                     const SingularCurve& curve, double mu_tol) {
    CharacteristicDiagnostics diag;
    const std::size_t m = curve.points.size();
    if (m < 5) throw NotOnSingularSet("curve too short for image diagnostics");

    // Sanity: the points must sit on the singular set of this surface.
    std::vector<double> mu_field(surface.nodes.size());
    for (std::size_t k = 0; k < surface.nodes.size(); ++k) mu_field[k] = surface.nodes[k].mu;
    double mu_scale = 0.0;
    for (double v : mu_field) mu_scale = std::max(mu_scale, std::abs(v));
    for (const auto& p : curve.points) {
        const double fx = (p.x - surface.xaxis.origin) / surface.xaxis.h + surface.xaxis.basepoint;
        const double fy = (p.y - surface.yaxis.origin) / surface.yaxis.h + surface.yaxis.basepoint;
        const int ix = std::max(0, std::min(surface.nx() - 1, static_cast<int>(std::lround(fx))));
        const int iy = std::max(0, std::min(surface.ny() - 1, static_cast<int>(std::lround(fy))));
        // Node mu within a grid cell of the point; a cusp crossing keeps it small.
        const double near_mu = std::abs(surface.nodes[surface.idx(ix, iy)].mu);
        const double local_bound =
            std::max(mu_tol * std::max(1.0, mu_scale),
                     2.0 * std::max(surface.xaxis.h, surface.yaxis.h) *
                         (std::abs(p.grad_mu) + 1e-12) * 2.0);
        if (near_mu > local_bound) {
            throw NotOnSingularSet("curve point (" + std::to_string(p.x) + ", " +
                                   std::to_string(p.y) + ") has |mu| = " +
                                   std::to_string(near_mu) + " at the nearest node");
        }
    }

    // Curvature and torsion of the image polyline (parametrization-invariant
    // formulas; uniform point spacing along grid-aligned curves).
    std::vector<double> kappas, taus;
    for (std::size_t k = 2; k + 2 < m; ++k) {
        const Vec3& pm2 = curve.points[k - 2].f;
        const Vec3& pm1 = curve.points[k - 1].f;
        const Vec3& p0 = curve.points[k].f;
        const Vec3& pp1 = curve.points[k + 1].f;
        const Vec3& pp2 = curve.points[k + 2].f;
        const Vec3 d1 = 0.5 * (pp1 - pm1);
        const Vec3 d2 = pp1 - 2.0 * p0 + pm1;
        const Vec3 d3 = 0.5 * (pp2 - 2.0 * pp1 + 2.0 * pm1 - pm2);
        const double sp = d1.norm();
        const Vec3 cr = d1.cross(d2);
        const double crn = cr.norm();
        if (sp < 1e-12) continue;
        const double kappa = crn / (sp * sp * sp);
        kappas.push_back(kappa);
        if (crn > 1e-9) taus.push_back(cr.dot(d3) / (crn * crn));
    }
    if (kappas.empty()) throw NotOnSingularSet("no interior samples for image diagnostics");
    double ksum = 0.0;
    for (double k : kappas) {
        diag.max_kappa = std::max(diag.max_kappa, k);
        ksum += k;
    }
    diag.mean_kappa = ksum / static_cast<double>(kappas.size());
    if (!taus.empty()) {
        double tsum = 0.0;
        for (double t : taus) tsum += std::abs(t);
        diag.mean_abs_tau = tsum / static_cast<double>(taus.size());
    }
    diag.straight_line = diag.max_kappa < 1e-4;
    diag.unit_torsion =
        !diag.straight_line && std::abs(diag.mean_abs_tau - 1.0) < 1e-3 && diag.mean_kappa > 0;
    return diag;
}

}  // namespace psfront
