#pragma once

// Brute-force ground truth on small finite spaces. Everything here is
// reimplemented from the definitions with plain loops over std::vector; the
// only engine types used are in to_engine(), which builds (but does not
// evaluate) an engine instance.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ofifs/error.hpp"
#include "ofifs/fuzzy.hpp"

namespace ofifs::oracle {

using Levels = std::vector<int>;

inline constexpr std::size_t kMaxOraclePoints = 12;
inline constexpr std::size_t kMaxOracleMaps = 3;
inline constexpr int kMaxOracleQuantization = 16;

/// A desk-scale orbital fuzzy system: finite space, table maps, lookup greys.
struct OracleInstance {
  std::string id;
  std::uint64_t seed = 0;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> dist;
  std::vector<std::vector<int>> maps;
  std::vector<std::vector<int>> greys;
  int quantization = 16;
  Levels initial;
  double orbital_factor = 0.0;
  bool targeted = false;
};

/// Raised when an oracle trace closes a cycle longer than one: Picard
/// iteration failed to converge on an instance claimed to be orbital.
class OracleCycleError : public Error {
 public:
  using Error::Error;
};

/// Structural validation against the size limits and the grey-map axioms.
void validate(const OracleInstance& inst);

/// Z(u) from the literal definition.
Levels oracle_z(const OracleInstance& inst, const Levels& u);

struct FixedPointTrace {
  Levels limit;
  /// u, Z(u), Z^2(u), ... up to and including the limit.
  std::vector<Levels> trace;
};

/// Iterates Z until a state repeats; a repeat other than Z(v) = v throws OracleCycleError.
FixedPointTrace oracle_fixed_points(const OracleInstance& inst, const Levels& start);
FixedPointTrace oracle_fixed_points(const OracleInstance& inst);

/// Orbit membership flags of x, by repeated closure sweeps.
std::vector<bool> oracle_orbit(const OracleInstance& inst, int x);

/// Largest ratio d(f y, f z) / d(y, z) over maps and orbit-mate pairs.
double oracle_orbital_scan(const OracleInstance& inst);

/// Largest ratio over all pairs (global Lipschitz constant).
double oracle_global_lipschitz(const OracleInstance& inst);

double oracle_hausdorff(const OracleInstance& inst, const std::vector<bool>& a,
                        const std::vector<bool>& b);
double oracle_dinf(const OracleInstance& inst, const Levels& u, const Levels& v);

/// True when every x with u(x) > 0 has a root w whose orbit holds x and a peak.
bool oracle_in_class(const OracleInstance& inst, const Levels& u);

/// u^x: u on the orbit closure of the first root found for x (closure = orbit
/// on a finite space), zero elsewhere.
Levels oracle_restrict(const OracleInstance& inst, const Levels& u, int x);

Levels oracle_delta(const OracleInstance& inst, int x);
Levels oracle_max(const Levels& a, const Levels& b);

struct GenerateOptions {
  /// Search only for orbital systems that are not globally contractive and
  /// have at least two distinct fuzzy fractals.
  bool targeted = false;
  std::size_t attempt_budget = 20000;
};

/// Deterministic pseudo-random valid instances. In targeted mode the list may
/// come back shorter than `count` when the attempt budget runs out.
std::vector<OracleInstance> generate_instances(std::uint64_t seed, std::size_t count,
                                               const GenerateOptions& options = {});

/// Two points whose delta starts reach different fixed points, if any.
std::optional<std::pair<int, int>> distinct_fractal_pair(const OracleInstance& inst);

struct EngineInstance {
  SpacePtr space;
  OrbitalFuzzySystem system;
  FuzzySet initial;
};

EngineInstance to_engine(const OracleInstance& inst);
Levels from_engine(const FuzzySet& u);

}  // namespace ofifs::oracle
