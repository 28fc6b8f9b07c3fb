#include "ofifs/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "ofifs/error.hpp"

namespace ofifs::io {

using nlohmann::json;

namespace {

const json& field(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw ConfigError(std::string("missing field \"") + key + "\"");
  }
  return doc.at(key);
}

template <typename T>
T get(const json& doc, const char* key) {
  try {
    return field(doc, key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field \"") + key + "\": " + e.what());
  }
}

template <typename T>
T get_or(const json& doc, const char* key, T fallback) {
  return doc.contains(key) ? get<T>(doc, key) : fallback;
}

SpacePtr parse_space(const json& doc) {
  const auto kind = get<std::string>(doc, "kind");
  if (kind == "grid") {
    const auto origin = get_or<std::vector<double>>(doc, "origin", {0.0, 0.0});
    if (origin.size() != 2) throw ConfigError("grid origin needs two coordinates");
    return Space::grid(Eigen::Vector2d(origin[0], origin[1]), get_or(doc, "spacing", 1.0),
                       get<int>(doc, "width"), get<int>(doc, "height"));
  }
  if (kind == "finite") {
    auto labels = get<std::vector<std::string>>(doc, "labels");
    if (doc.contains("coordinates")) {
      const auto coords = get<std::vector<std::vector<double>>>(doc, "coordinates");
      if (coords.size() != labels.size()) throw ConfigError("one coordinate pair per label");
      std::vector<Eigen::Vector2d> pts;
      for (const auto& c : coords) {
        if (c.size() != 2) throw ConfigError("coordinates are pairs");
        pts.emplace_back(c[0], c[1]);
      }
      return Space::finite_euclidean(std::move(labels), pts);
    }
    const auto n = static_cast<Eigen::Index>(labels.size());
    if (doc.contains("lower_triangular")) {
      // Row i lists d(i, 0), ..., d(i, i - 1).
      const auto rows = get<std::vector<std::vector<double>>>(doc, "lower_triangular");
      if (rows.size() != labels.size()) throw ConfigError("lower_triangular needs one row per label");
      Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        if (rows[i].size() != static_cast<std::size_t>(i)) {
          throw ConfigError("row " + std::to_string(i) + " of lower_triangular needs " +
                            std::to_string(i) + " entries");
        }
        for (Eigen::Index j = 0; j < i; ++j) dist(i, j) = dist(j, i) = rows[i][j];
      }
      return Space::finite(std::move(labels), std::move(dist));
    }
    const auto rows = get<std::vector<std::vector<double>>>(doc, "distances");
    if (rows.size() != labels.size()) throw ConfigError("distance matrix must be n x n");
    Eigen::MatrixXd dist(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (rows[i].size() != labels.size()) throw ConfigError("distance matrix must be n x n");
      for (Eigen::Index j = 0; j < n; ++j) dist(i, j) = rows[i][j];
    }
    return Space::finite(std::move(labels), std::move(dist));
  }
  throw ConfigError("unknown space kind \"" + kind + "\"");
}

PointId parse_point(const Space& space, const json& p) {
  if (p.is_string()) return space.point_named(p.get<std::string>());
  if (p.is_array() && p.size() == 2 && space.is_grid()) {
    return space.grid_point(p[0].get<int>(), p[1].get<int>());
  }
  if (p.is_number_integer()) {
    const auto id = p.get<PointId>();
    space.check_point(id);
    return id;
  }
  throw ConfigError("cannot read point " + p.dump());
}

SpaceMap parse_map(const Space& space, const json& doc) {
  if (doc.contains("table")) {
    std::vector<PointId> image;
    for (const json& p : field(doc, "table")) image.push_back(parse_point(space, p));
    return TableMap{std::move(image)};
  }
  const auto m = get<std::vector<std::vector<double>>>(doc, "matrix");
  const auto b = get_or<std::vector<double>>(doc, "offset", {0.0, 0.0});
  if (m.size() != 2 || m[0].size() != 2 || m[1].size() != 2 || b.size() != 2) {
    throw ConfigError("affine maps need a 2x2 matrix and a 2-vector offset");
  }
  AffineMap f;
  f.matrix << m[0][0], m[0][1], m[1][0], m[1][1];
  f.offset = Eigen::Vector2d(b[0], b[1]);
  return f;
}

GreyLevelMap parse_grey(const json& doc, int quantization) {
  const auto kind = get<std::string>(doc, "kind");
  if (kind == "identity") return GreyLevelMap::identity();
  if (kind == "scale") return GreyLevelMap::scale(get<double>(doc, "factor"));
  if (kind == "step") {
    return GreyLevelMap::step(get<double>(doc, "threshold"), get_or(doc, "high", 1.0));
  }
  if (kind == "piecewise_linear") {
    return GreyLevelMap::piecewise_linear(
        get<std::vector<double>>(doc, "breakpoints"), get<std::vector<double>>(doc, "left"),
        get<std::vector<double>>(doc, "right"), get_or(doc, "at_one", 1.0));
  }
  if (kind == "table") return GreyLevelMap::lookup(quantization, get<std::vector<int>>(doc, "table"));
  throw ConfigError("unknown grey kind \"" + kind + "\"");
}

FuzzySet parse_seed(const SpacePtr& space, const json& doc, int quantization) {
  if (!doc.is_array() || doc.empty()) throw ConfigError("seed must be a non-empty list");
  FuzzySet u = FuzzySet::zero(space, quantization);
  for (const json& part : doc) {
    const auto kind = get<std::string>(part, "kind");
    FuzzySet piece = FuzzySet::zero(space, quantization);
    if (kind == "delta") {
      piece = delta(space, parse_point(*space, field(part, "at")), quantization);
    } else if (kind == "indicator") {
      std::vector<PointId> members;
      if (part.contains("rect")) {
        const auto r = get<std::vector<int>>(part, "rect");
        if (r.size() != 4) throw ConfigError("rect is [col0, row0, col1, row1]");
        for (int row = r[1]; row <= r[3]; ++row) {
          for (int col = r[0]; col <= r[2]; ++col) members.push_back(space->grid_point(col, row));
        }
      } else {
        for (const json& p : field(part, "points")) members.push_back(parse_point(*space, p));
      }
      if (members.empty()) throw ConfigError("empty indicator");
      piece = FuzzySet::indicator(CompactSet(space, std::move(members)), quantization);
    } else if (kind == "ramp") {
      const PointId c = parse_point(*space, field(part, "center"));
      const double radius = get<double>(part, "radius");
      if (!(radius > 0.0)) throw ConfigError("ramp radius must be positive");
      LevelArray levels = LevelArray::Zero(static_cast<Eigen::Index>(space->size()));
      for (PointId p = 0; p < static_cast<PointId>(space->size()); ++p) {
        const double t = std::clamp(1.0 - space->distance(c, p) / radius, 0.0, 1.0);
        levels[p] = quantize(t, quantization);
      }
      piece = FuzzySet(space, quantization, std::move(levels));
    } else {
      throw ConfigError("unknown seed kind \"" + kind + "\"");
    }
    u = join(u, piece);
  }
  return u;
}

}  // namespace

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be an object");
  SpacePtr space = parse_space(field(doc, "space"));
  const int quantization = get_or(doc, "quantization", kDefaultQuantization);

  std::vector<SpaceMap> maps;
  for (const json& m : field(doc, "maps")) maps.push_back(parse_map(*space, m));
  if (maps.empty()) throw ConfigError("at least one map is required");
  std::vector<GreyLevelMap> greys;
  for (const json& g : field(doc, "greys")) greys.push_back(parse_grey(g, quantization));

  double factor = 0.0;
  if (doc.contains("orbital_factor")) {
    factor = get<double>(doc, "orbital_factor");
  } else {
    const OrbitalCertificate cert = check_orbital_condition(space, maps, 1.0 - 1e-9);
    if (!cert.passed) throw InvalidArgument("system does not satisfy the orbital condition");
    factor = cert.certified_factor;
  }
  OrbitalFuzzySystem system(IfsSystem(space, std::move(maps), factor), std::move(greys));
  FuzzySet initial = parse_seed(space, field(doc, "seed"), quantization);
  if (!initial.is_normal()) throw ConfigError("seed is not normal");

  RunConfig cfg{space, std::move(system), std::move(initial), std::nullopt, 10000};
  if (doc.contains("eps")) cfg.eps = get<double>(doc, "eps");
  cfg.budget = get_or<std::size_t>(doc, "budget", cfg.budget);
  return cfg;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config(read_json(path)); }

void write_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

json certificate_to_json(const OrbitalCertificate& cert, const Space& space) {
  json out = {{"passed", cert.passed},
              {"certified_factor", cert.certified_factor},
              {"declared_factor", cert.declared_factor},
              {"method", cert.method}};
  if (cert.witness) {
    const auto& w = *cert.witness;
    out["witness"] = {{"map", w.map_index},
                      {"orbit_of", space.label(w.orbit_of)},
                      {"y", space.label(w.y)},
                      {"z", space.label(w.z)},
                      {"ratio", w.ratio}};
  }
  return out;
}

json certificate_to_json(const ConvergenceCertificate& cert) {
  return {{"steps", cert.steps},
          {"terminal", to_string(cert.terminal)},
          {"factor", cert.factor},
          {"spread", cert.spread},
          {"eps", cert.eps},
          {"apriori_steps", cert.apriori_steps},
          {"per_step_distance", cert.per_step_distance},
          {"apriori_bound", cert.apriori_bound}};
}

json instance_to_json(const oracle::OracleInstance& inst) {
  return {{"id", inst.id},
          {"seed", inst.seed},
          {"labels", inst.labels},
          {"distances", inst.dist},
          {"maps", inst.maps},
          {"greys", inst.greys},
          {"quantization", inst.quantization},
          {"initial", inst.initial},
          {"orbital_factor", inst.orbital_factor},
          {"targeted", inst.targeted}};
}

oracle::OracleInstance instance_from_json(const json& doc) {
  oracle::OracleInstance inst;
  inst.id = get<std::string>(doc, "id");
  inst.seed = get_or<std::uint64_t>(doc, "seed", 0);
  inst.labels = get<std::vector<std::string>>(doc, "labels");
  inst.dist = get<std::vector<std::vector<double>>>(doc, "distances");
  inst.maps = get<std::vector<std::vector<int>>>(doc, "maps");
  inst.greys = get<std::vector<std::vector<int>>>(doc, "greys");
  inst.quantization = get<int>(doc, "quantization");
  inst.initial = get<std::vector<int>>(doc, "initial");
  inst.orbital_factor = get<double>(doc, "orbital_factor");
  inst.targeted = get_or(doc, "targeted", false);
  try {
    oracle::validate(inst);
  } catch (const InvalidArgument& e) {
    throw ConfigError("instance " + inst.id + ": " + e.what());
  }
  return inst;
}

json fixture_to_json(const Fixture& fixture) {
  return {{"instance", instance_to_json(fixture.instance)},
          {"limit", fixture.limit},
          {"extra", fixture.extra}};
}

Fixture fixture_from_json(const json& doc) {
  Fixture f;
  f.instance = instance_from_json(field(doc, "instance"));
  f.limit = get<std::vector<int>>(doc, "limit");
  if (f.limit.size() != f.instance.labels.size()) throw ConfigError("fixture limit has wrong size");
  f.extra = get_or(doc, "extra", json::object());
  return f;
}

GreyImage render(const FuzzySet& u) {
  if (!u.space().is_grid()) throw Unsupported("only grid fuzzy sets render to images");
  const GridGeometry& g = u.space().grid_geometry();
  GreyImage img{g.width, g.height,
                std::vector<std::uint8_t>(static_cast<std::size_t>(g.width) * g.height)};
  const int L = u.quantization();
  for (int row = 0; row < g.height; ++row) {
    for (int col = 0; col < g.width; ++col) {
      const int level = u.level(u.space().grid_point(col, row));
      const auto px = static_cast<std::uint8_t>((255 * level + L / 2) / L);
      img.pixels[static_cast<std::size_t>(g.height - 1 - row) * g.width + col] = px;
    }
  }
  return img;
}

void write_pgm(const std::filesystem::path& path, const GreyImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size()));
}

GreyImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::string magic;
  GreyImage img;
  int maxval = 0;
  in >> magic >> img.width >> img.height >> maxval;
  if (magic != "P5" || maxval != 255 || img.width <= 0 || img.height <= 0) {
    throw Error(path.string() + " is not an 8-bit binary PGM");
  }
  in.get();
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
  in.read(reinterpret_cast<char*>(img.pixels.data()),
          static_cast<std::streamsize>(img.pixels.size()));
  if (!in) throw Error(path.string() + " is truncated");
  return img;
}

FuzzySet from_image(const SpacePtr& grid, const GreyImage& image) {
  const GridGeometry& g = grid->grid_geometry();
  if (g.width != image.width || g.height != image.height) {
    throw SpaceMismatch("image size does not match the grid");
  }
  LevelArray levels(static_cast<Eigen::Index>(grid->size()));
  for (int row = 0; row < g.height; ++row) {
    for (int col = 0; col < g.width; ++col) {
      levels[grid->grid_point(col, row)] =
          image.pixels[static_cast<std::size_t>(g.height - 1 - row) * g.width + col];
    }
  }
  return FuzzySet(grid, 255, std::move(levels));
}

}  // namespace ofifs::io
