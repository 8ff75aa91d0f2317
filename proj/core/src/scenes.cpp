#include "paraconvex/scenes.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "paraconvex/parallel.hpp"

namespace paraconvex {

namespace {

using nlohmann::json;

constexpr double kPi = 3.14159265358979323846;

constexpr std::pair<Generator, std::string_view> kGeneratorNames[] = {
    {Generator::segment, "segment"},
    {Generator::convex_polygon, "convex_polygon"},
    {Generator::disk_sample, "disk_sample"},
    {Generator::circle_arc, "circle_arc"},
    {Generator::semicircle, "semicircle"},
    {Generator::sin_reciprocal, "sin_reciprocal"},
    {Generator::spiral, "spiral"},
    {Generator::two_points, "two_points"},
    {Generator::custom_points, "custom_points"},
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::invalid_argument, "scene: " + what);
}

// `count` parameter values spaced at equal arc length along curve(u),
// u in [u0, u1], measured on a fine polyline.
template <class Curve>
std::vector<Point> equal_arc_length(Curve&& curve, double u0, double u1, std::size_t count) {
  const std::size_t fine = std::max<std::size_t>(20000, 200 * count);
  std::vector<double> cum(fine + 1, 0.0);
  Point prev = curve(u0);
  for (std::size_t i = 1; i <= fine; ++i) {
    const double u = u0 + (u1 - u0) * static_cast<double>(i) / static_cast<double>(fine);
    const Point p = curve(u);
    cum[i] = cum[i - 1] + distance(prev, p);
    prev = p;
  }
  std::vector<Point> out;
  out.reserve(count);
  const double total = cum.back();
  std::size_t j = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const double target = total * static_cast<double>(k) / static_cast<double>(count - 1);
    while (j + 1 < fine && cum[j + 1] < target) ++j;
    const double span = cum[j + 1] - cum[j];
    const double frac = span > 0.0 ? std::clamp((target - cum[j]) / span, 0.0, 1.0) : 0.0;
    const double u = u0 + (u1 - u0) * (static_cast<double>(j) + frac) / static_cast<double>(fine);
    out.push_back(curve(k + 1 == count ? u1 : u));
  }
  return out;
}

// Boundary samples of a convex polygon at spacing close to h, plus a square
// lattice of step h kept at least h/2 inside every edge.
std::vector<Point> filled_polygon(const std::vector<Point>& verts, double h) {
  std::vector<Point> out;
  const std::size_t n = verts.size();
  for (std::size_t j = 0; j < n; ++j) {
    const Point& a = verts[j];
    const Point& b = verts[(j + 1) % n];
    const std::size_t m = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(distance(a, b) / h)));
    for (std::size_t k = 0; k < m; ++k) out.push_back(a + (b - a) * (static_cast<double>(k) / static_cast<double>(m)));
  }
  double lo_x = verts[0].x(), hi_x = lo_x, lo_y = verts[0].y(), hi_y = lo_y;
  for (const Point& v : verts) {
    lo_x = std::min(lo_x, v.x());
    hi_x = std::max(hi_x, v.x());
    lo_y = std::min(lo_y, v.y());
    hi_y = std::max(hi_y, v.y());
  }
  const long long i0 = static_cast<long long>(std::ceil(lo_x / h));
  const long long i1 = static_cast<long long>(std::floor(hi_x / h));
  const long long j0 = static_cast<long long>(std::ceil(lo_y / h));
  const long long j1 = static_cast<long long>(std::floor(hi_y / h));
  for (long long i = i0; i <= i1; ++i) {
    for (long long j = j0; j <= j1; ++j) {
      const Point q(static_cast<double>(i) * h, static_cast<double>(j) * h);
      bool inside = true;
      for (std::size_t e = 0; e < n && inside; ++e) {
        const Point& a = verts[e];
        const Point& b = verts[(e + 1) % n];
        const Point d = b - a;
        const double cross = d.x() * (q.y() - a.y()) - d.y() * (q.x() - a.x());
        inside = cross / norm(d) >= 0.5 * h;
      }
      if (inside) out.push_back(q);
    }
  }
  return out;
}

std::vector<Point> raw_points(const Scene& s) {
  const std::size_t n = s.density;
  switch (s.generator) {
    case Generator::segment: {
      require(n >= 2, "segment needs density >= 2");
      const Point a(s.param("x0", -1.0), s.param("y0", 0.0));
      const Point b(s.param("x1", 1.0), s.param("y1", 0.0));
      require(distance(a, b) > 0.0, "segment endpoints coincide");
      std::vector<Point> out;
      for (std::size_t k = 0; k < n; ++k) {
        out.push_back(a + (b - a) * (static_cast<double>(k) / static_cast<double>(n - 1)));
      }
      return out;
    }
    case Generator::convex_polygon: {
      const double sides = s.param("sides", 4.0);
      const double radius = s.param("radius", 1.0);
      const double phase = s.param("phase", kPi / 4.0);
      require(sides >= 3.0 && sides == std::floor(sides), "convex_polygon needs an integer number of sides >= 3");
      require(radius > 0.0, "convex_polygon radius must be positive");
      require(n >= 3, "convex_polygon needs density >= 3");
      const auto k = static_cast<std::size_t>(sides);
      std::vector<Point> verts;
      for (std::size_t j = 0; j < k; ++j) {
        const double a = phase + 2.0 * kPi * static_cast<double>(j) / sides;
        verts.emplace_back(radius * std::cos(a), radius * std::sin(a));
      }
      const double perimeter = sides * 2.0 * radius * std::sin(kPi / sides);
      return filled_polygon(verts, perimeter / static_cast<double>(n));
    }
    case Generator::disk_sample: {
      const double radius = s.param("radius", 1.0);
      require(radius > 0.0, "disk radius must be positive");
      require(n >= 3, "disk_sample needs density >= 3");
      const double h = 2.0 * kPi * radius / static_cast<double>(n);
      std::vector<Point> out;
      for (std::size_t k = 0; k < n; ++k) {
        const double a = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
        out.emplace_back(radius * std::cos(a), radius * std::sin(a));
      }
      const auto m = static_cast<long long>(std::floor(radius / h));
      for (long long i = -m; i <= m; ++i) {
        for (long long j = -m; j <= m; ++j) {
          const Point q(static_cast<double>(i) * h, static_cast<double>(j) * h);
          if (norm(q) <= radius - 0.5 * h) out.push_back(q);
        }
      }
      return out;
    }
    case Generator::circle_arc:
    case Generator::semicircle: {
      const double angle = s.generator == Generator::semicircle ? kPi : s.param("angle", kPi);
      const double radius = s.param("radius", 1.0);
      const double start = s.param("start", 0.0);
      require(angle > 0.0 && angle < 2.0 * kPi, "arc angle must lie in (0, 2 pi)");
      require(radius > 0.0, "arc radius must be positive");
      require(n >= 2, "arc needs density >= 2");
      std::vector<Point> out;
      for (std::size_t k = 0; k < n; ++k) {
        const double t = start + angle * static_cast<double>(k) / static_cast<double>(n - 1);
        out.emplace_back(radius * std::cos(t), radius * std::sin(t));
      }
      return out;
    }
    case Generator::sin_reciprocal: {
      const double x_min = s.param("x_min", 0.05);
      const double x_max = s.param("x_max", 1.0);
      require(x_min > 0.0, "sin_reciprocal needs x_min > 0");
      require(x_max > x_min, "sin_reciprocal needs x_max > x_min");
      require(n >= 2, "sin_reciprocal needs density >= 2");
      // Parametrize by s = 1/x so the fine polyline resolves the oscillations.
      return equal_arc_length(
          [](double u) { return Point(1.0 / u, std::sin(u)); }, 1.0 / x_max, 1.0 / x_min, n);
    }
    case Generator::spiral: {
      const double turns = s.param("turns", 2.0);
      const double r0 = s.param("r0", 0.2);
      const double r1 = s.param("r1", 1.0);
      require(turns > 0.0, "spiral turns must be positive");
      require(r0 >= 0.0 && r1 > r0, "spiral needs 0 <= r0 < r1");
      require(n >= 2, "spiral needs density >= 2");
      const double span = 2.0 * kPi * turns;
      return equal_arc_length(
          [&](double t) {
            const double r = r0 + (r1 - r0) * t / span;
            return Point(r * std::cos(t), r * std::sin(t));
          },
          0.0, span, n);
    }
    case Generator::two_points:
      return {Point(-1.0, 0.0), Point(1.0, 0.0)};
    case Generator::custom_points:
      require(!s.points.empty(), "custom_points needs points");
      return s.points;
  }
  throw Error(ErrorKind::invalid_argument, "scene: unknown generator");
}

double& sweep_field(RigidMotion& m, const std::string& name) {
  if (name == "angle") return m.angle;
  if (name == "scale") return m.scale;
  if (name == "tx") return m.tx;
  if (name == "ty") return m.ty;
  if (name == "tz") return m.tz;
  throw Error(ErrorKind::invalid_argument, "scene: unknown sweep parameter '" + name + "'");
}

Point point_from_json(const json& j) {
  require(j.is_array() && (j.size() == 2 || j.size() == 3), "points must be [x, y] or [x, y, z]");
  if (j.size() == 2) return Point(j[0].get<double>(), j[1].get<double>());
  return Point(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

}  // namespace

std::string_view to_string(Generator g) noexcept {
  for (const auto& [gen, name] : kGeneratorNames) {
    if (gen == g) return name;
  }
  return "unknown";
}

Generator generator_from_string(std::string_view name) {
  for (const auto& [gen, n] : kGeneratorNames) {
    if (n == name) return gen;
  }
  throw Error(ErrorKind::invalid_argument, "scene: unknown generator '" + std::string(name) + "'");
}

Point RigidMotion::apply(const Point& p) const {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  if (p.dim() == 3) {
    return Point(scale * (c * p.x() - s * p.y()) + tx, scale * (s * p.x() + c * p.y()) + ty, scale * p.z() + tz);
  }
  return Point(scale * (c * p.x() - s * p.y()) + tx, scale * (s * p.x() + c * p.y()) + ty);
}

double Scene::param(const std::string& key, double fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

PointCloud generate_scene(const Scene& scene) {
  std::vector<Point> pts = raw_points(scene);
  if (scene.transform) {
    require(scene.transform->scale > 0.0, "transform scale must be positive");
    for (Point& p : pts) p = scene.transform->apply(p);
  }
  return PointCloud(std::move(pts), scene.name.empty() ? std::string(to_string(scene.generator)) : scene.name);
}

FamilyOfSets generate_family(const Scene& scene) {
  require(scene.family_sweep.has_value(), "scene has no family_sweep");
  const FamilySweep& sw = *scene.family_sweep;
  require(sw.steps >= 1, "family_sweep needs steps >= 1");
  require(sw.to > sw.from, "family_sweep needs to > from");
  std::vector<double> params;
  std::vector<PointCloud> sets;
  for (std::size_t k = 0; k <= sw.steps; ++k) {
    const double v = sw.from + (sw.to - sw.from) * static_cast<double>(k) / static_cast<double>(sw.steps);
    Scene member = scene;
    member.family_sweep.reset();
    RigidMotion m = scene.transform.value_or(RigidMotion{});
    sweep_field(m, sw.parameter) = v;
    member.transform = m;
    params.push_back(v);
    sets.push_back(generate_scene(member));
  }
  return FamilyOfSets::from_sets(std::move(params), std::move(sets));
}

Scene scene_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::invalid_argument, std::string("scene: malformed JSON: ") + e.what());
  }
  require(j.is_object(), "scene file must hold an object");
  try {
    Scene s;
    s.name = j.value("name", std::string{});
    s.generator = generator_from_string(j.at("generator").get<std::string>());
    if (j.contains("params")) {
      for (const auto& [k, v] : j.at("params").items()) s.params[k] = v.get<double>();
    }
    if (j.contains("density")) {
      const auto d = j.at("density").get<long long>();
      require(d > 0, "density must be positive");
      s.density = static_cast<std::size_t>(d);
    }
    if (j.contains("points")) {
      for (const auto& p : j.at("points")) s.points.push_back(point_from_json(p));
    }
    if (j.contains("transform") && !j.at("transform").is_null()) {
      const json& t = j.at("transform");
      RigidMotion m;
      m.angle = t.value("angle", 0.0);
      m.scale = t.value("scale", 1.0);
      m.tx = t.value("tx", 0.0);
      m.ty = t.value("ty", 0.0);
      m.tz = t.value("tz", 0.0);
      s.transform = m;
    }
    if (j.contains("family_sweep") && !j.at("family_sweep").is_null()) {
      const json& f = j.at("family_sweep");
      FamilySweep sw;
      sw.parameter = f.value("parameter", std::string("angle"));
      sw.from = f.at("from").get<double>();
      sw.to = f.at("to").get<double>();
      const auto steps = f.at("steps").get<long long>();
      require(steps > 0, "family_sweep steps must be positive");
      sw.steps = static_cast<std::size_t>(steps);
      s.family_sweep = sw;
    }
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::invalid_argument, std::string("scene: ") + e.what());
  }
}

std::string scene_to_json_text(const Scene& s) {
  json j;
  j["name"] = s.name;
  j["generator"] = std::string(to_string(s.generator));
  j["params"] = json::object();
  for (const auto& [k, v] : s.params) j["params"][k] = v;
  j["density"] = s.density;
  if (!s.points.empty()) {
    j["points"] = json::array();
    for (const Point& p : s.points) {
      json row = json::array({p.x(), p.y()});
      if (p.dim() == 3) row.push_back(p.z());
      j["points"].push_back(row);
    }
  }
  if (s.transform) {
    j["transform"] = {{"angle", s.transform->angle}, {"scale", s.transform->scale}, {"tx", s.transform->tx},
                      {"ty", s.transform->ty},       {"tz", s.transform->tz}};
  }
  if (s.family_sweep) {
    j["family_sweep"] = {{"parameter", s.family_sweep->parameter},
                         {"from", s.family_sweep->from},
                         {"to", s.family_sweep->to},
                         {"steps", s.family_sweep->steps}};
  }
  return j.dump(2);
}

Scene load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot read scene file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return scene_from_json_text(buf.str());
}

Scene resolve_scene(const std::string& name_or_path) {
  Scene s;
  s.name = name_or_path;
  if (name_or_path == "semicircle") {
    s.generator = Generator::semicircle;
    s.density = 100;
  } else if (name_or_path == "two_points") {
    s.generator = Generator::two_points;
    s.density = 2;
  } else if (name_or_path == "convex_polygon") {
    s.generator = Generator::convex_polygon;
    s.density = 1000;
  } else if (name_or_path == "sin_reciprocal") {
    s.generator = Generator::sin_reciprocal;
    s.params = {{"x_min", 0.05}, {"x_max", 1.0}};
    s.density = 2000;
  } else if (name_or_path == "segment") {
    s.generator = Generator::segment;
    s.density = 200;
  } else if (name_or_path == "disk") {
    s.generator = Generator::disk_sample;
    s.density = 400;
  } else if (name_or_path == "arc") {
    s.generator = Generator::circle_arc;
    s.params = {{"angle", 1.5 * kPi}};
    s.density = 150;
  } else if (name_or_path == "spiral") {
    s.generator = Generator::spiral;
    s.density = 400;
  } else if (std::filesystem::exists(name_or_path)) {
    s = load_scene(name_or_path);
    if (s.name.empty()) s.name = std::filesystem::path(name_or_path).stem().string();
  } else {
    throw Error(ErrorKind::invalid_argument, "unknown scene '" + name_or_path + "' (not a built-in name or a file)");
  }
  return s;
}

double brute_force_alpha_oracle(const PointCloud& cloud, double r, double grid_step) {
  if (cloud.dim() != 2) throw Error(ErrorKind::dimension_mismatch, "brute_force_alpha_oracle: planar clouds only");
  if (!(r > 0.0) || !(grid_step > 0.0) || grid_step > r / 20.0 * (1.0 + 1e-12)) {
    throw Error(ErrorKind::invalid_argument, "brute_force_alpha_oracle: need 0 < grid_step <= r / 20");
  }
  const BoundingBox& box = cloud.bounds();
  const double lo_x = box.lo.x() - r;
  const double lo_y = box.lo.y() - r;
  const auto nx = static_cast<std::size_t>(std::floor((box.hi.x() + r - lo_x) / grid_step)) + 1;
  const auto ny = static_cast<std::size_t>(std::floor((box.hi.y() + r - lo_y) / grid_step)) + 1;
  std::vector<double> best(nx, 0.0);
  parallel_for(nx, [&](std::size_t ix) {
    std::vector<std::size_t> members;
    std::vector<Point> pts;
    std::vector<Point> poly;
    double local = 0.0;
    auto score = [&](const Point& q) { local = std::max(local, cloud.index().nearest(q).distance / r); };
    for (std::size_t iy = 0; iy < ny; ++iy) {
      const Point c(lo_x + static_cast<double>(ix) * grid_step, lo_y + static_cast<double>(iy) * grid_step);
      cloud.index().within(Ball(c, r), members);
      if (members.size() < 2) continue;
      pts.clear();
      for (std::size_t m : members) pts.push_back(cloud[m]);
      const auto hull = convex_hull_2d(pts);
      if (hull.size() < 2) continue;
      poly.clear();
      for (std::size_t h : hull) poly.push_back(pts[h]);
      const std::size_t edges = poly.size() == 2 ? 1 : poly.size();
      for (std::size_t e = 0; e < edges; ++e) {
        const Point& a = poly[e];
        const Point& b = poly[(e + 1) % poly.size()];
        const auto pieces = 2 * static_cast<std::size_t>(std::ceil(distance(a, b) / (2.0 * grid_step)));
        for (std::size_t k = 1; k < pieces; ++k) {
          score(a + (b - a) * (static_cast<double>(k) / static_cast<double>(pieces)));
        }
      }
      if (poly.size() < 3) continue;
      double px0 = poly[0].x(), px1 = px0, py0 = poly[0].y(), py1 = py0;
      for (const Point& v : poly) {
        px0 = std::min(px0, v.x());
        px1 = std::max(px1, v.x());
        py0 = std::min(py0, v.y());
        py1 = std::max(py1, v.y());
      }
      const auto i0 = static_cast<long long>(std::ceil((px0 - lo_x) / grid_step));
      const auto i1 = static_cast<long long>(std::floor((px1 - lo_x) / grid_step));
      const auto j0 = static_cast<long long>(std::ceil((py0 - lo_y) / grid_step));
      const auto j1 = static_cast<long long>(std::floor((py1 - lo_y) / grid_step));
      for (long long i = i0; i <= i1; ++i) {
        for (long long j = j0; j <= j1; ++j) {
          const Point q(lo_x + static_cast<double>(i) * grid_step, lo_y + static_cast<double>(j) * grid_step);
          if (in_convex_polygon(q, poly)) score(q);
        }
      }
    }
    best[ix] = local;
  });
  return *std::max_element(best.begin(), best.end());
}

}  // namespace paraconvex
