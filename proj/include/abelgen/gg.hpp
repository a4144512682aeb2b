#ifndef ABELGEN_GG_HPP
#define ABELGEN_GG_HPP

#include "abelgen/sh.hpp"

namespace abelgen {

struct SampleStrategy {
  int grid_n = 8;            // grid of grid_n^{2g} fundamental-domain points
  int torsion_order = 0;     // add all torsion points of order <= this
  std::vector<cvec> extra_points;
  bool refinement = true;
};

struct GGThresholds {
  double full_rank = 1e-6;   // normalized sigma above this counts as full rank
  double base_point = 1e-10; // refined margin below this certifies a base point
  int refine_budget = 200;   // golden-section iterations
  int max_witnesses = 8;
};

enum class GGVerdict { generated_at_all_samples, base_point_found, inconclusive };

const char* gg_verdict_name(GGVerdict v);

struct GGWitness {
  rvec coords;           // lattice coordinates in [0,1)
  cvec point;            // ambient representative
  double margin;         // normalized margin at the sample
  double refined_margin; // after local descent (equals margin when skipped)
  rvec refined_coords;
};

struct EvaluationReport {
  int64_t samples = 0;
  int64_t sections = 0;
  int64_t fiber_rank = 0;
  double min_margin = 0.0;
  double median_margin = 0.0;
  double normalizer = 0.0;   // largest leading singular value over the samples
  double cert_floor = 0.0;   // normalized uncertainty floor from the tail bound
  bool exact_dimension_deficiency = false;
  GGVerdict verdict = GGVerdict::inconclusive;
  std::vector<GGWitness> witnesses;
};

EvaluationReport check_gg_line(const LineBundleData& l, const SampleStrategy& s,
                               const TruncationParams& tp, const GGThresholds& th = {},
                               int threads = 1);

EvaluationReport check_gg_bundle(const SHBundle& e, int power, const SampleStrategy& s,
                                 const TruncationParams& tp, const GGThresholds& th = {},
                                 int threads = 1);

struct LefschetzReport {
  EvaluationReport base;    // expected: base point found
  EvaluationReport square;  // expected: generated at all samples
  EvaluationReport cube;    // expected: generated at all samples
  bool pass = false;
};

LefschetzReport lefschetz_suite(const LineBundleData& l, const SampleStrategy& s,
                                const TruncationParams& tp, const GGThresholds& th = {},
                                int threads = 1);

// Canonically ordered sample coordinates for a strategy (exposed for tests).
std::vector<rvec> sample_coords(const Torus& t, const SampleStrategy& s);

}  // namespace abelgen

#endif
