#include "gradlab/disk_geometry.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "gradlab/log_potential.hpp"

namespace gradlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Offset {
    int dx, dy;
    double len;
};

// 16-neighbor stencil: axis, diagonal, and knight moves.
const std::vector<Offset>& stencil() {
    static const std::vector<Offset> s = [] {
        std::vector<Offset> v;
        const int moves[16][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1}, {1, 1},  {1, -1},
                                  {-1, 1}, {-1, -1}, {1, 2},  {1, -2}, {-1, 2}, {-1, -2},
                                  {2, 1},  {2, -1}, {-2, 1}, {-2, -1}};
        for (auto& m : moves)
            v.push_back({m[0], m[1], std::sqrt(double(m[0] * m[0] + m[1] * m[1]))});
        return v;
    }();
    return s;
}

}  // namespace

ConformalField::ConformalField(int nx, int ny, double h, Vec2 origin, std::vector<double> u,
                               Domain domain)
    : nx_(nx), ny_(ny), h_(h), origin_(origin), u_(std::move(u)), domain_(domain) {
    if (nx < 2 || ny < 2) throw std::invalid_argument("ConformalField: grid too small");
    if (h <= 0.0) throw std::invalid_argument("ConformalField: spacing must be positive");
    if (u_.size() != static_cast<size_t>(nx) * ny)
        throw std::invalid_argument("ConformalField: value count mismatch");
    for (double v : u_)
        if (!std::isfinite(v)) throw std::invalid_argument("ConformalField: u must be finite");
}

ConformalField ConformalField::sample(int nx, int ny, double h, Vec2 origin,
                                      const std::function<double(Vec2)>& u, Domain domain) {
    std::vector<double> vals(static_cast<size_t>(nx) * ny);
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix)
            vals[static_cast<size_t>(iy) * nx + ix] =
                u({origin.x + ix * h, origin.y + iy * h});
    return ConformalField(nx, ny, h, origin, std::move(vals), domain);
}

bool ConformalField::in_domain(int ix, int iy) const {
    if (ix < 0 || iy < 0 || ix >= nx_ || iy >= ny_) return false;
    if (domain_ == Domain::Rectangle) return true;
    const double cx = origin_.x + 0.5 * (nx_ - 1) * h_;
    const double cy = origin_.y + 0.5 * (ny_ - 1) * h_;
    const double rad = 0.5 * h_ * std::min(nx_ - 1, ny_ - 1);
    const Vec2 p = node_pos(ix, iy);
    return dist(p, {cx, cy}) <= rad;
}

bool ConformalField::boundary_node(int ix, int iy) const {
    if (!in_domain(ix, iy)) return false;
    return !in_domain(ix + 1, iy) || !in_domain(ix - 1, iy) || !in_domain(ix, iy + 1) ||
           !in_domain(ix, iy - 1);
}

std::pair<int, int> ConformalField::nearest_node(Vec2 p) const {
    int ix = static_cast<int>(std::lround((p.x - origin_.x) / h_));
    int iy = static_cast<int>(std::lround((p.y - origin_.y) / h_));
    ix = std::max(0, std::min(nx_ - 1, ix));
    iy = std::max(0, std::min(ny_ - 1, iy));
    if (!in_domain(ix, iy)) throw std::invalid_argument("point outside field domain");
    return {ix, iy};
}

namespace {

std::vector<double> dijkstra(const ConformalField& f, int sx, int sy, double stop_beyond,
                             int tx = -1, int ty = -1) {
    const int nx = f.nx(), ny = f.ny();
    std::vector<double> dist(static_cast<size_t>(nx) * ny, kInf);
    auto idx = [nx](int x, int y) { return static_cast<size_t>(y) * nx + x; };

    std::vector<double> conf(static_cast<size_t>(nx) * ny);
    for (int y = 0; y < ny; ++y)
        for (int x = 0; x < nx; ++x) conf[idx(x, y)] = std::exp(f.u_at(x, y));

    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[idx(sx, sy)] = 0.0;
    pq.push({0.0, static_cast<int>(idx(sx, sy))});
    while (!pq.empty()) {
        auto [d, i] = pq.top();
        pq.pop();
        if (d > dist[i]) continue;
        const int x = i % nx, y = i / nx;
        if (tx == x && ty == y) break;
        if (d > stop_beyond) continue;
        for (const auto& o : stencil()) {
            const int nxp = x + o.dx, nyp = y + o.dy;
            if (!f.in_domain(nxp, nyp)) continue;
            const double w = o.len * f.h() * 0.5 * (conf[i] + conf[idx(nxp, nyp)]);
            const double nd = d + w;
            if (nd < dist[idx(nxp, nyp)]) {
                dist[idx(nxp, nyp)] = nd;
                pq.push({nd, static_cast<int>(idx(nxp, nyp))});
            }
        }
    }
    return dist;
}

}  // namespace

std::vector<double> distance_field(const ConformalField& f, Vec2 x) {
    auto [sx, sy] = f.nearest_node(x);
    return dijkstra(f, sx, sy, kInf);
}

double conformal_distance(const ConformalField& f, Vec2 x, Vec2 y) {
    auto [sx, sy] = f.nearest_node(x);
    auto [tx, ty] = f.nearest_node(y);
    auto d = dijkstra(f, sx, sy, kInf, tx, ty);
    return d[static_cast<size_t>(ty) * f.nx() + tx];
}

BallReport geodesic_ball(const ConformalField& f, Vec2 x, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("geodesic_ball: r must be positive");
    auto [sx, sy] = f.nearest_node(x);
    auto d = dijkstra(f, sx, sy, r);
    BallReport rep;
    rep.center = x;
    rep.radius = r;
    const double h2 = f.h() * f.h();
    for (int iy = 0; iy < f.ny(); ++iy) {
        for (int ix = 0; ix < f.nx(); ++ix) {
            if (!f.in_domain(ix, iy)) continue;
            const double di = d[static_cast<size_t>(iy) * f.nx() + ix];
            if (di <= r) {
                rep.area += std::exp(2.0 * f.u_at(ix, iy)) * h2;
                if (f.boundary_node(ix, iy)) rep.clipped = true;
            }
        }
    }
    if (!rep.clipped) rep.ratio = rep.area / (M_PI * r * r);
    return rep;
}

double blowup_T(double theta, double R) {
    if (!(R > 0.0)) throw std::invalid_argument("blowup_T: R must be positive");
    const double c = std::cos(theta);
    if (!(c > 0.0)) throw std::invalid_argument("blowup_T: cos(theta) must be positive");
    return std::log1p(R * c) / c;
}

BlowupArea blowup_area(double R, double a, int n_theta, int n_r) {
    if (!(R > 0.0)) throw std::invalid_argument("blowup_area: R must be positive");
    if (!(a > 0.0 && a < M_PI / 2)) throw std::invalid_argument("blowup_area: a in (0, pi/2)");
    const double lo = -M_PI / 2 + a, hi = M_PI / 2 - a;
    const double dth = (hi - lo) / n_theta;
    BlowupArea out;
    for (int i = 0; i < n_theta; ++i) {
        const double th = lo + (i + 0.5) * dth;
        const double c = std::cos(th);
        const double T = std::log1p(R * c) / c;
        const double e = R * c + 1.0;  // = e^{T cos(theta)}
        out.closed += (e * e * T / (2.0 * c) - (e * e - 1.0) / (4.0 * c * c)) * dth;
        double radial = 0.0;
        const double dr = T / n_r;
        for (int j = 0; j < n_r; ++j) {
            const double r = (j + 0.5) * dr;
            radial += std::exp(2.0 * r * c) * r * dr;
        }
        out.quadrature += radial * dth;
    }
    return out;
}

AreaBoundReport area_bound_audit(const ConformalField& f, const SignedMeasure& curvature,
                                 const std::vector<std::pair<Vec2, double>>& samples,
                                 double margin) {
    auto [plus, minus] = jordan_decompose(curvature);
    (void)plus;
    const double bound = 1.0 + total_variation(minus) / (2.0 * M_PI) + margin;
    AreaBoundReport rep;
    rep.bound = bound;
    for (const auto& [center, r] : samples) {
        BallReport b = geodesic_ball(f, center, r);
        AreaBoundSample s;
        s.center = center;
        s.radius = r;
        s.clipped = b.clipped;
        if (!b.clipped) {
            s.ratio = b.ratio;
            s.bound = bound;
            s.pass = b.ratio <= bound;
            rep.worst_ratio = std::max(rep.worst_ratio, b.ratio);
            ++rep.unclipped;
        }
        rep.samples.push_back(s);
    }
    rep.conclusive = rep.unclipped > 0;
    rep.all_pass = rep.conclusive;
    for (const auto& s : rep.samples)
        if (!s.clipped && !s.pass) rep.all_pass = false;
    return rep;
}

ConformalField load_field_csv(const std::string& path, ConformalField::Domain domain) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open field CSV: " + path);
    std::string header;
    std::getline(in, header);
    for (char& ch : header)
        if (ch == ',') ch = ' ';
    std::istringstream hs(header);
    int nx = 0, ny = 0;
    double h = 0.0;
    if (!(hs >> nx >> ny >> h)) throw std::runtime_error("bad field CSV header: " + path);
    std::vector<double> u;
    u.reserve(static_cast<size_t>(nx) * ny);
    std::string line;
    while (std::getline(in, line)) {
        for (char& ch : line)
            if (ch == ',') ch = ' ';
        std::istringstream ls(line);
        double v;
        while (ls >> v) u.push_back(v);
    }
    const Vec2 origin{-0.5 * (nx - 1) * h, -0.5 * (ny - 1) * h};
    return ConformalField(nx, ny, h, origin, std::move(u), domain);
}

void save_field_csv(const ConformalField& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write field CSV: " + path);
    out.precision(17);
    out << f.nx() << "," << f.ny() << "," << f.h() << "\n";
    for (int iy = 0; iy < f.ny(); ++iy) {
        for (int ix = 0; ix < f.nx(); ++ix) {
            if (ix) out << ",";
            out << f.u_at(ix, iy);
        }
        out << "\n";
    }
}

}  // namespace gradlab
