#ifndef ABELGEN_SCENE_HPP
#define ABELGEN_SCENE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "abelgen/fujita.hpp"
#include "abelgen/gg.hpp"
#include "abelgen/mukai.hpp"

namespace abelgen {

struct RunOptions {
  double tail_bound = 1e-12;
  int radius = 0;                    // 0 = adaptive
  std::optional<int> grid_override;
  std::optional<int> torsion_override;
  int threads = 1;
};

// Named tori, bundles, isogenies, pushforwards plus a list of suite
// invocations, resolved from a TOML/JSON document.
class SceneDocument {
 public:
  static SceneDocument from_json(const nlohmann::json& doc);
  static SceneDocument load(const std::string& path);
  // The corpus behind `selftest`: every acceptance suite with its pinned
  // parameters.
  static SceneDocument builtin();
  static const char* builtin_text();  // TOML source of the built-in corpus

  const nlohmann::json& raw() const { return raw_; }
  const std::vector<nlohmann::json>& suites() const { return suites_; }

  const TorusPtr& torus(const std::string& name) const;
  const LineBundleData& bundle(const std::string& name) const;
  const std::shared_ptr<const Isogeny>& isogeny(const std::string& name) const;
  const SHBundle& pushforward(const std::string& name) const;

 private:
  nlohmann::json raw_;
  std::map<std::string, TorusPtr> tori_;
  std::map<std::string, LineBundleData> bundles_;
  std::map<std::string, std::shared_ptr<const Isogeny>> isogenies_;
  std::map<std::string, SHBundle> pushforwards_;
  std::vector<nlohmann::json> suites_;
};

struct SuiteOutcome {
  std::string name;
  std::string kind;
  bool ok = false;
  double wall_ms = 0.0;  // console information; never serialized into reports
};

struct RunResult {
  nlohmann::ordered_json report;  // deterministic
  bool ok = false;
  std::vector<SuiteOutcome> outcomes;
};

RunResult run_scene(const SceneDocument& scene, const RunOptions& opt);
RunResult selftest(const RunOptions& opt);
std::vector<std::string> selftest_suite_names();

// Deterministic serialization: floats with 17 significant digits.
std::string report_to_string(const nlohmann::ordered_json& report);
std::string sha256_hex(const std::string& data);

const char* version_string();

}  // namespace abelgen

#endif
