#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "ofifs/oracle.hpp"
#include "ofifs/picard.hpp"

namespace ofifs::io {

/// A system together with its starting set and run settings, as read from a
/// JSON config.
struct RunConfig {
  SpacePtr space;
  OrbitalFuzzySystem system;
  FuzzySet initial;
  std::optional<double> eps;
  std::size_t budget = 10000;
};

/// Parses a config document. Throws ConfigError on malformed input and
/// InvalidArgument when the system fails certification.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

nlohmann::json read_json(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

nlohmann::json certificate_to_json(const OrbitalCertificate& cert, const Space& space);
nlohmann::json certificate_to_json(const ConvergenceCertificate& cert);

nlohmann::json instance_to_json(const oracle::OracleInstance& inst);
oracle::OracleInstance instance_from_json(const nlohmann::json& doc);

/// An oracle instance plus its oracle limit, as checked into tests/fixtures.
struct Fixture {
  oracle::OracleInstance instance;
  oracle::Levels limit;
  nlohmann::json extra = nlohmann::json::object();
};

nlohmann::json fixture_to_json(const Fixture& fixture);
Fixture fixture_from_json(const nlohmann::json& doc);

/// 8-bit greyscale image of a grid fuzzy set, pixel = round(255 * u). The
/// top line of the image is the grid's last row, so world y points up.
struct GreyImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

GreyImage render(const FuzzySet& u);
void write_pgm(const std::filesystem::path& path, const GreyImage& image);
GreyImage read_pgm(const std::filesystem::path& path);
/// Quantization-255 fuzzy set on the given grid from image pixels.
FuzzySet from_image(const SpacePtr& grid, const GreyImage& image);

}  // namespace ofifs::io
