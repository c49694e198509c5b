#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gradlab/measure.hpp"

namespace gradlab {

/// Node-sampled conformal exponent u on a uniform grid; the metric is
/// g = e^{2u} g_euc. Domain is the full rectangle or the inscribed disk.
class ConformalField {
public:
    enum class Domain { Rectangle, Disk };

    ConformalField(int nx, int ny, double h, Vec2 origin, std::vector<double> u,
                   Domain domain = Domain::Rectangle);

    static ConformalField sample(int nx, int ny, double h, Vec2 origin,
                                 const std::function<double(Vec2)>& u,
                                 Domain domain = Domain::Rectangle);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double h() const { return h_; }
    Vec2 origin() const { return origin_; }
    Domain domain() const { return domain_; }

    Vec2 node_pos(int ix, int iy) const { return {origin_.x + ix * h_, origin_.y + iy * h_}; }
    double u_at(int ix, int iy) const { return u_[static_cast<size_t>(iy) * nx_ + ix]; }
    bool in_domain(int ix, int iy) const;
    bool boundary_node(int ix, int iy) const;

    /// Nearest in-domain node to p. Throws if p is outside the domain.
    std::pair<int, int> nearest_node(Vec2 p) const;

private:
    int nx_, ny_;
    double h_;
    Vec2 origin_;
    std::vector<double> u_;
    Domain domain_;
};

struct BallReport {
    Vec2 center;
    double radius = 0.0;   // g-distance
    double area = 0.0;     // g-area
    double ratio = 0.0;    // area / (pi r^2), meaningful only when !clipped
    bool clipped = false;
};

/// Shortest-path distance on the 16-neighbor grid graph with edge weight
/// (Euclidean edge length) x (trapezoidal average of e^u at the endpoints).
double conformal_distance(const ConformalField& f, Vec2 x, Vec2 y);

/// Single-source sweep from x; area sums e^{2u} h^2 over nodes with d <= r.
BallReport geodesic_ball(const ConformalField& f, Vec2 x, double r);

/// Distances from the node nearest to x to every node (infinity outside
/// the domain). Exposed so sweeps can reuse one Dijkstra pass.
std::vector<double> distance_field(const ConformalField& f, Vec2 x);

/// T(theta) = log(1 + R cos(theta)) / cos(theta), the g_0 = e^{2x^1} radial
/// extent of a curve of metric length R.
double blowup_T(double theta, double R);

struct BlowupArea {
    double closed = 0.0;      // 1-D quadrature of the exact antiderivative in theta
    double quadrature = 0.0;  // 2-D polar quadrature of e^{2 r cos(theta)} r
};

/// Area of Omega(R) = {(r,theta): r in (0,T(theta)), |theta| < pi/2 - a}
/// in the metric e^{2 x^1} g_euc, via two independent routes.
BlowupArea blowup_area(double R, double a, int n_theta = 4096, int n_r = 4096);

struct AreaBoundSample {
    Vec2 center;
    double radius = 0.0;
    double ratio = 0.0;
    double bound = 0.0;
    bool clipped = false;
    bool pass = false;
};

struct AreaBoundReport {
    std::vector<AreaBoundSample> samples;
    double worst_ratio = 0.0;
    double bound = 0.0;
    int unclipped = 0;
    bool all_pass = false;
    bool conclusive = false;  // false when every sample was clipped
};

/// Checks Area(B_r)/(pi r^2) <= 1 + tv(mu^-)/(2 pi) + margin for each
/// unclipped sample, where curvature is the Gauss curvature measure of f.
AreaBoundReport area_bound_audit(const ConformalField& f, const SignedMeasure& curvature,
                                 const std::vector<std::pair<Vec2, double>>& samples,
                                 double margin = 0.05);

/// Reads a field from CSV: header line "nx, ny, h" then row-major u values.
ConformalField load_field_csv(const std::string& path,
                              ConformalField::Domain domain = ConformalField::Domain::Rectangle);
void save_field_csv(const ConformalField& f, const std::string& path);

}  // namespace gradlab
