#include "ncafem/polynomial.hpp"
#include "ncafem/problems.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace ncafem {

namespace {

Vec2 to_point(const nlohmann::json &j) {
  if (!j.is_array() || j.size() != 2) throw ProblemError("point must be [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<Vec2> to_polygon(const nlohmann::json &j) {
  std::vector<Vec2> out;
  for (const auto &p : j) out.push_back(to_point(p));
  return out;
}

BoundaryTag to_tag(const std::string &s) {
  if (s == "D") return BoundaryTag::dirichlet;
  if (s == "N") return BoundaryTag::neumann;
  throw ProblemError("boundary type must be D or N, got '" + s + "'");
}

struct Segment {
  BoundarySegment seg;
  std::optional<Polynomial> g;
};

const Segment *find_segment(const std::vector<Segment> &segs, const Vec2 &p, BoundaryTag tag) {
  for (const auto &s : segs)
    if (s.seg.tag == tag && point_on_segment(p, s.seg.from, s.seg.to)) return &s;
  return nullptr;
}

} // namespace

ProblemSpec parse_problem(const nlohmann::json &config, const std::string &base_dir) {
  try {
    ProblemSpec spec;
    spec.source = config;
    spec.name = config.value("name", "custom");

    for (const auto &s : config.at("subdomains")) {
      Subdomain sd;
      sd.id = s.at("id").get<int>();
      sd.alpha = s.at("alpha").get<double>();
      if (!(sd.alpha > 0.0)) throw ProblemError("alpha must be positive on subdomain " + std::to_string(sd.id));
      sd.label = s.value("label", "");
      if (s.contains("polygon")) sd.polygon = to_polygon(s.at("polygon"));
      spec.subdomains.push_back(std::move(sd));
    }
    if (spec.subdomains.empty()) throw ProblemError("no subdomains");

    std::map<int, Polynomial> f;
    for (const auto &s : config.at("subdomains"))
      f[s.at("id").get<int>()] = s.contains("f") ? Polynomial::from_json(s.at("f")) : Polynomial::constant(0.0);
    spec.f_is_zero = true;
    for (const auto &[id, p] : f) spec.f_is_zero = spec.f_is_zero && p.is_zero();
    spec.f = [f](const Vec2 &p, int subdomain) {
      auto it = f.find(subdomain);
      return it == f.end() ? 0.0 : it->second(p);
    };

    std::vector<Segment> segs;
    bool has_dirichlet = false;
    for (const auto &b : config.at("boundary")) {
      Segment s;
      s.seg = {to_point(b.at("from")), to_point(b.at("to")), to_tag(b.at("type").get<std::string>())};
      if (b.contains("g")) s.g = Polynomial::from_json(b.at("g"));
      has_dirichlet = has_dirichlet || s.seg.tag == BoundaryTag::dirichlet;
      spec.boundary_segments.push_back(s.seg);
      segs.push_back(std::move(s));
    }
    if (!has_dirichlet) throw ProblemError("Dirichlet boundary is empty");
    spec.domain.clear();
    for (const auto &s : spec.boundary_segments) spec.domain.push_back(s.from);

    if (config.contains("exact")) {
      const Polynomial u = Polynomial::from_json(config.at("exact").at("u"));
      ExactSolution ex;
      ex.value = [u](const Vec2 &p, const Vec2 &) { return u(p); };
      ex.gradient = [u](const Vec2 &p, const Vec2 &) { return u.gradient(p); };
      ex.energy_norm = config.at("exact").value("energy_norm", 0.0);
      if (ex.energy_norm > 0.0) ex.energy_norm_note = "given in configuration";
      spec.exact = std::move(ex);
    }
    if (config.contains("singular_points")) spec.singular_points = to_polygon(config.at("singular_points"));

    std::optional<Polynomial> exact_u;
    if (config.contains("exact")) exact_u = Polynomial::from_json(config.at("exact").at("u"));
    spec.g_dirichlet = [segs, exact_u](const Vec2 &p) {
      const Segment *s = find_segment(segs, p, BoundaryTag::dirichlet);
      if (s && s->g) return (*s->g)(p);
      if (exact_u) return (*exact_u)(p);
      return 0.0;
    };
    spec.g_neumann = [segs](const Vec2 &p) {
      const Segment *s = find_segment(segs, p, BoundaryTag::neumann);
      return s && s->g ? (*s->g)(p) : 0.0;
    };
    spec.boundary = [segs](const Vec2 &a, const Vec2 &b) {
      for (const auto &s : segs)
        if (point_on_segment(a, s.seg.from, s.seg.to) && point_on_segment(b, s.seg.from, s.seg.to))
          return s.seg.tag;
      return BoundaryTag::interior;
    };

    std::string text;
    if (config.contains("mesh_text")) {
      text = config.at("mesh_text").get<std::string>();
    } else {
      const std::filesystem::path path = std::filesystem::path(base_dir) / config.at("mesh").get<std::string>();
      std::ifstream in(path);
      if (!in) throw ProblemError("cannot open mesh file " + path.string());
      std::ostringstream ss;
      ss << in.rdbuf();
      text = ss.str();
    }
    std::istringstream is(text);
    spec.initial_mesh = read_mesh_input(is);
    return spec;
  } catch (const nlohmann::json::exception &e) {
    throw ProblemError(std::string("malformed problem file: ") + e.what());
  } catch (const MeshError &e) {
    throw ProblemError(std::string("malformed problem file: ") + e.what());
  }
}

ProblemSpec load_problem_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ProblemError("cannot open problem file " + path);
  nlohmann::json config;
  try {
    in >> config;
  } catch (const nlohmann::json::exception &e) {
    throw ProblemError(std::string("malformed problem file: ") + e.what());
  }
  return parse_problem(config, std::filesystem::path(path).parent_path().string());
}

} // namespace ncafem
