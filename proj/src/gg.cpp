#include "abelgen/gg.hpp"

#include <algorithm>
#include <cmath>
#include <atomic>
#include <functional>
#include <thread>

namespace abelgen {

namespace {

// Raw margin data at one sample: (sigma needed for surjectivity, leading sigma).
using MarginFn = std::function<std::pair<double, double>(const rvec&)>;

std::pair<double, double> svd_margins(const cmat& m, int needed) {
  if (m.rows() < needed) return {0.0, m.rows() ? m.jacobiSvd().singularValues()(0) : 0.0};
  Eigen::JacobiSVD<cmat> svd(m);
  const auto& sv = svd.singularValues();
  return {sv(needed - 1), sv(0)};
}

std::vector<std::pair<double, double>> evaluate_samples(const std::vector<rvec>& coords,
                                                        const MarginFn& fn, int threads) {
  std::vector<std::pair<double, double>> out(coords.size());
  if (threads <= 1 || coords.size() < 16) {
    for (size_t i = 0; i < coords.size(); ++i) out[i] = fn(coords[i]);
    return out;
  }
  std::vector<std::thread> pool;
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= coords.size()) return;
      out[i] = fn(coords[i]);
    }
  };
  int n = std::min<int>(threads, static_cast<int>(std::thread::hardware_concurrency()));
  n = std::max(n, 1);
  for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return out;
}

// Coordinate-wise golden-section descent on the raw margin.
std::pair<rvec, double> refine_point(const MarginFn& fn, rvec coords, double span,
                                     int budget) {
  const int dim = static_cast<int>(coords.size());
  constexpr double invphi = 0.6180339887498949;
  double best = fn(coords).first;
  const int sweeps = 2;
  int per_coord = std::max(10, budget / (sweeps * dim));
  std::vector<double> width(dim, span);
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (int c = 0; c < dim; ++c) {
      double a = coords(c) - width[c];
      double b = coords(c) + width[c];
      auto value = [&](double x) {
        rvec p = coords;
        p(c) = x;
        return fn(p).first;
      };
      double x1 = b - invphi * (b - a);
      double x2 = a + invphi * (b - a);
      double f1 = value(x1), f2 = value(x2);
      for (int it = 0; it < per_coord; ++it) {
        if (f1 < f2) {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = b - invphi * (b - a);
          f1 = value(x1);
        } else {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + invphi * (b - a);
          f2 = value(x2);
        }
      }
      double xm = 0.5 * (a + b);
      double fm = value(xm);
      if (fm < best) {
        best = fm;
        coords(c) = xm;
      }
      width[c] = std::max(b - a, 1e-15);
    }
  }
  return {coords, best};
}

EvaluationReport run_certifier(const Torus& t, const MarginFn& fn, int64_t sections,
                               int64_t fiber_rank, bool exact_deficiency,
                               const SampleStrategy& s, const TruncationParams& tp,
                               const GGThresholds& th, int threads) {
  EvaluationReport rep;
  rep.sections = sections;
  rep.fiber_rank = fiber_rank;
  rep.exact_dimension_deficiency = exact_deficiency;

  std::vector<rvec> coords = sample_coords(t, s);
  rep.samples = static_cast<int64_t>(coords.size());

  if (exact_deficiency) {
    // The section count already rules out surjectivity; margins are exactly 0.
    rep.verdict = GGVerdict::base_point_found;
    rep.min_margin = 0.0;
    rep.median_margin = 0.0;
    int count = std::min<int>(th.max_witnesses, static_cast<int>(coords.size()));
    for (int i = 0; i < count; ++i) {
      GGWitness w;
      w.coords = coords[i];
      w.point = t.from_lattice_coords(coords[i]);
      w.margin = 0.0;
      w.refined_margin = 0.0;
      w.refined_coords = coords[i];
      rep.witnesses.push_back(std::move(w));
    }
    return rep;
  }

  auto raw = evaluate_samples(coords, fn, threads);
  double normalizer = 0.0;
  for (const auto& pr : raw) normalizer = std::max(normalizer, pr.second);
  rep.normalizer = normalizer;
  if (normalizer <= 0.0) {
    rep.verdict = GGVerdict::base_point_found;
    return rep;
  }

  std::vector<double> margins(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) margins[i] = raw[i].first / normalizer;
  std::vector<double> sorted = margins;
  std::sort(sorted.begin(), sorted.end());
  rep.min_margin = sorted.front();
  rep.median_margin = sorted[sorted.size() / 2];

  // Normalized uncertainty of the margins induced by the certified tail bound.
  double entry_err = tp.tail_bound * std::sqrt(static_cast<double>(sections * fiber_rank));
  rep.cert_floor = 10.0 * entry_err / normalizer;
  double full_gate = std::max(th.full_rank, rep.cert_floor);

  if (rep.min_margin > full_gate) {
    rep.verdict = GGVerdict::generated_at_all_samples;
    return rep;
  }

  std::vector<size_t> order(margins.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (margins[a] != margins[b]) return margins[a] < margins[b];
    return a < b;
  });

  double span = 0.5 / std::max(1, s.grid_n);
  bool zero_certifiable = th.base_point >= rep.cert_floor;
  bool found_zero = false;
  for (size_t oi = 0; oi < order.size() && static_cast<int>(rep.witnesses.size()) < th.max_witnesses;
       ++oi) {
    size_t idx = order[oi];
    if (margins[idx] > full_gate) break;
    GGWitness w;
    w.coords = coords[idx];
    w.point = t.from_lattice_coords(coords[idx]);
    w.margin = margins[idx];
    if (s.refinement) {
      auto [rc, rm] = refine_point(fn, coords[idx], span, th.refine_budget);
      w.refined_coords = rc;
      w.refined_margin = rm / normalizer;
    } else {
      w.refined_coords = coords[idx];
      w.refined_margin = margins[idx];
    }
    if (zero_certifiable && w.refined_margin < th.base_point) found_zero = true;
    rep.witnesses.push_back(std::move(w));
  }
  rep.verdict = found_zero ? GGVerdict::base_point_found : GGVerdict::inconclusive;
  return rep;
}

}  // namespace

const char* gg_verdict_name(GGVerdict v) {
  switch (v) {
    case GGVerdict::generated_at_all_samples: return "GENERATED_AT_ALL_SAMPLES";
    case GGVerdict::base_point_found: return "BASE_POINT_FOUND";
    case GGVerdict::inconclusive: return "INCONCLUSIVE";
  }
  return "UNKNOWN";
}

std::vector<rvec> sample_coords(const Torus& t, const SampleStrategy& s) {
  require(s.grid_n >= 1, errc::invalid_argument, "grid_n must be >= 1");
  const int dim = 2 * t.dim();
  std::vector<rvec> coords;

  ivec k = ivec::Zero(dim);
  while (true) {
    rvec x(dim);
    for (int i = 0; i < dim; ++i) x(i) = static_cast<double>(k(i)) / s.grid_n;
    coords.push_back(std::move(x));
    int i = dim - 1;
    while (i >= 0) {
      if (++k(i) < s.grid_n) break;
      k(i) = 0;
      --i;
    }
    if (i < 0) break;
  }
  for (int order = 1; order <= s.torsion_order; ++order) {
    ivec j = ivec::Zero(dim);
    while (true) {
      rvec x(dim);
      for (int i = 0; i < dim; ++i) x(i) = static_cast<double>(j(i)) / order;
      coords.push_back(std::move(x));
      int i = dim - 1;
      while (i >= 0) {
        if (++j(i) < order) break;
        j(i) = 0;
        --i;
      }
      if (i < 0) break;
    }
  }
  for (const cvec& p : s.extra_points) {
    rvec x = t.lattice_coords(p);
    for (int i = 0; i < dim; ++i) {
      double f = x(i) - std::floor(x(i));
      if (f >= 1.0) f -= 1.0;
      x(i) = f;
    }
    coords.push_back(std::move(x));
  }

  auto lex_less = [](const rvec& a, const rvec& b) {
    for (int i = 0; i < a.size(); ++i) {
      if (a(i) != b(i)) return a(i) < b(i);
    }
    return false;
  };
  std::sort(coords.begin(), coords.end(), lex_less);
  coords.erase(std::unique(coords.begin(), coords.end(),
                           [](const rvec& a, const rvec& b) { return a == b; }),
               coords.end());
  return coords;
}

EvaluationReport check_gg_line(const LineBundleData& l, const SampleStrategy& s,
                               const TruncationParams& tp, const GGThresholds& th, int threads) {
  require(is_ample(l), errc::not_ample, "global generation check needs an ample bundle");
  ThetaBasis basis = ThetaBasis::build(l);
  const Torus& t = *l.torus;
  MarginFn fn = [&basis, &t, &tp](const rvec& coords) {
    cvec v = t.from_lattice_coords(coords);
    ThetaBasis::Eval e = basis.eval_reduced(v, tp);
    double norm = e.reduced.norm();
    return std::make_pair(norm, norm);
  };
  return run_certifier(t, fn, basis.h0(), 1, false, s, tp, th, threads);
}

EvaluationReport check_gg_bundle(const SHBundle& e, int power, const SampleStrategy& s,
                                 const TruncationParams& tp, const GGThresholds& th, int threads) {
  require(e.is_pushforward(), errc::realization_mismatch,
          "bundle check needs a pushforward realization");
  require(e.is_ample(), errc::not_ample, "global generation check needs an ample bundle");
  const Torus& t = *e.base();
  const int r = e.rank();
  auto summands = tensor_power_sections(e, power);

  int64_t sections = 0;
  bool deficient = false;
  std::vector<SHBundle> blocks;
  blocks.reserve(summands.size());
  for (const auto& sm : summands) {
    sections += sm.basis.h0();
    if (sm.basis.h0() < r) deficient = true;
    blocks.push_back(
        SHBundle::from_pushforward(std::make_shared<Isogeny>(e.isogeny()), sm.bundle));
  }
  int64_t fiber_rank = 1;
  for (int i = 0; i < power; ++i) fiber_rank *= r;

  MarginFn fn = [&](const rvec& coords) {
    cvec a = t.from_lattice_coords(coords);
    double sig_min = -1.0, sig_max = 0.0;
    for (size_t bi = 0; bi < summands.size(); ++bi) {
      cmat m = fiber_eval_reduced(blocks[bi], summands[bi].basis, a, tp);
      auto [lo, hi] = svd_margins(m, r);
      sig_min = (sig_min < 0) ? lo : std::min(sig_min, lo);
      sig_max = std::max(sig_max, hi);
    }
    return std::make_pair(sig_min, sig_max);
  };
  return run_certifier(t, fn, sections, fiber_rank, deficient, s, tp, th, threads);
}

LefschetzReport lefschetz_suite(const LineBundleData& l, const SampleStrategy& s,
                                const TruncationParams& tp, const GGThresholds& th, int threads) {
  require(l.torus->dim() <= 2, errc::invalid_argument, "lefschetz suite runs at g <= 2");
  ivec type = bundle_type(l);
  for (int i = 0; i < type.size(); ++i)
    require(type(i) == 1, errc::invalid_argument, "lefschetz suite expects a principal type");

  LefschetzReport rep;
  rep.base = check_gg_line(l, s, tp, th, threads);
  rep.square = check_gg_line(tensor_power(l, 2), s, tp, th, threads);
  rep.cube = check_gg_line(tensor_power(l, 3), s, tp, th, threads);
  rep.pass = rep.base.verdict == GGVerdict::base_point_found &&
             rep.square.verdict == GGVerdict::generated_at_all_samples &&
             rep.cube.verdict == GGVerdict::generated_at_all_samples;
  return rep;
}

}  // namespace abelgen
