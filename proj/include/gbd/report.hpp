#pragma once

#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "gbd/circlemodel.hpp"
#include "gbd/classify.hpp"
#include "gbd/io.hpp"
#include "gbd/ktheory.hpp"
#include "gbd/tracesim.hpp"

namespace gbd {

/// What to run and on what. Identical configs produce byte-identical reports.
struct AnalysisConfig {
  std::optional<Family> family;      // family descriptor input
  std::optional<GbdSkeleton> input;  // document input
  std::string input_name;            // file path or family name
  std::string input_text;            // raw document (hashed for provenance)
  std::set<std::string> commands;    // validate data ktheory classify model-check traces
  int horizon = 16;
  int depth = 3;
  std::uint64_t seed = 0;
  bool dump_model = false;  // append the generator tables to model-check
};

struct Report {
  std::string text;
  bool any_command_failed = false;
};

namespace detail {

inline std::string mat_str(const IntMat& m) { return m.to_string(); }

inline void print_verdict(std::ostringstream& os, const std::string& name, const Verdict& v) {
  os << name << ":\n  status: " << status_name(v.status) << "\n  certificate: " << v.certificate
     << "\n  horizon: " << v.horizon << "\n";
}

}  // namespace detail

/// Runs the requested analyses in dependency order. Per-command failures are
/// recorded in the report and flagged, never fatal for the other commands.
inline Report run(const AnalysisConfig& cfg) {
  Report out;
  std::ostringstream os;
  require(cfg.family.has_value() || cfg.input.has_value(), "no input given");
  os << "gbd-report v1\n";
  os << "tool-version: " << kVersion << "\n";
  os << "input: " << cfg.input_name << "\n";
  os << "input-hash: "
     << fnv1a_hex(cfg.input_text.empty() ? cfg.input_name : cfg.input_text) << "\n";
  os << "depth: " << cfg.depth << "\n";
  os << "horizon: " << cfg.horizon << "\n";
  os << "seed: " << cfg.seed << "\n";

  // materialise the truncation once; families know how deep they can go
  Family fam = cfg.family.has_value()
                   ? *cfg.family
                   : Family::from_data(extract_data(*cfg.input));
  int depth = std::min(cfg.depth, max_levels(fam));
  std::optional<GbdSkeleton> skel;
  std::string skel_error;
  try {
    if (cfg.input.has_value())
      skel = cfg.input->truncate(std::min(cfg.depth, cfg.input->depth()));
    else
      skel = fam.skeleton(depth);
  } catch (const Error& e) {
    skel_error = e.what();
  }

  auto wants = [&](const std::string& c) { return cfg.commands.count(c) > 0; };
  auto section = [&](const std::string& name, auto&& body) {
    os << "\n[" << name << "]\n";
    try {
      body();
    } catch (const Error& e) {
      os << "error: " << e.what() << "\n";
      out.any_command_failed = true;
    }
  };

  if (wants("validate")) {
    section("validate", [&] {
      if (!skel.has_value()) throw Error(skel_error);
      ValidationReport rep = validate_gbd(*skel);
      os << "status: " << (rep.ok() ? "valid" : "invalid") << "\n";
      for (const auto& v : rep.violations) os << "violation: " << v.message << "\n";
      if (!rep.ok()) out.any_command_failed = true;
    });
  }

  LevelData data;
  bool have_data = false;
  if (wants("data") || wants("ktheory") || wants("classify")) {
    try {
      data = skel.has_value() ? extract_data(*skel) : fam.data(depth);
      have_data = true;
    } catch (const Error&) {
    }
  }

  if (wants("data")) {
    section("data", [&] {
      if (!have_data) throw Error("no data: " + skel_error);
      os << "levels: " << data.depth() << "\n";
      for (int n = 0; n <= data.depth(); ++n) {
        os << "c_" << n << ": " << data.c[n] << "\n";
        os << "T_" << n << ": " << detail::mat_str(data.T[n]) << "\n";
      }
      for (int n = 0; n < data.depth(); ++n) {
        os << "A_" << n << ": " << detail::mat_str(data.A[n]) << "\n";
        os << "B_" << n << ": " << detail::mat_str(data.B[n]) << "\n";
      }
      CompatibilityReport comp = check_compatibility(data);
      os << "compatibility: " << (comp.ok() ? "ok" : comp.summary()) << "\n";
    });
  }

  if (wants("classify")) {
    section("classify", [&] {
      if (cfg.input.has_value()) {
        // document input: evidence verdicts off the actual truncation, whose
        // orders come from its own square map
        if (!skel.has_value()) throw Error(skel_error);
        detail::print_verdict(os, "cofinality", cofinality(*skel, cfg.horizon));
        detail::print_verdict(os, "simplicity", simplicity(*skel, cfg.horizon));
        detail::print_verdict(os, "large-permutation-factorisations", lpf(*skel, cfg.horizon));
        os << "real-rank: unknown\n";
        detail::print_verdict(
            os, "real-rank-verdict",
            verdict(Status::Evidence, "finite truncation carries no tail certificates",
                    cfg.horizon));
        return;
      }
      detail::print_verdict(os, "cofinality", cofinality(fam, cfg.horizon));
      detail::print_verdict(os, "simplicity", simplicity(fam, cfg.horizon));
      detail::print_verdict(os, "large-permutation-factorisations", lpf(fam, cfg.horizon));
      RankVerdict rk = real_rank(fam, cfg.horizon);
      os << "real-rank: " << rank_name(rk.rank) << "\n";
      detail::print_verdict(os, "real-rank-verdict", rk.verdict);
    });
  }

  if (wants("ktheory")) {
    section("ktheory", [&] {
      if (!have_data) throw Error("no data: " + skel_error);
      LimitGroup k0(fam, KGroup::K0);
      LimitGroup k1(fam, KGroup::K1);
      LimitElement u = unit_class(k0);
      os << "k0: direct limit of Z^c along A\n";
      os << "k1: direct limit of Z^c along B\n";
      os << "unit_class: " << u.to_string() << "\n";
      os << "unit_pushed: " << push(k0, u, depth).to_string() << "\n";
      PositivityVerdict pos = positive(k0, u, cfg.horizon);
      os << "unit_positive: " << status_name(pos.verdict.status) << "\n";
      TorsionWitness w = torsion_quotient_witness(k0, push(k0, u, depth));
      os << "torsion_witness_t_at_depth: " << w.t << "\n";
      (void)k1;
      IdealLattice lat = order_ideal_lattice(data, depth);
      os << "ideal_lattice:\n";
      for (const auto& ideal : lat.ideals) {
        os << "  ideal:";
        if (ideal.markers.empty()) os << " (empty)";
        for (const auto& [n, j] : ideal.markers) os << " (" << n << "," << j << ")";
        os << (ideal.persistent ? " [persistent]" : " [truncation-artifact]") << "\n";
      }
    });
  }

  if (wants("model-check")) {
    section("model-check", [&] {
      if (!skel.has_value()) throw Error(skel_error);
      int model_depth = std::min(depth, skel->depth());
      Rng rng(cfg.seed);
      CircleModel model(*skel, model_depth, false);
      CkReport ck = verify_ck(model, rng, 40);
      os << "relations: " << (ck.ok() ? "pass" : "fail") << " (" << ck.checks << " checks)\n";
      for (const auto& f : ck.failures) os << "  " << f.relation << ": " << f.witness << "\n";
      if (!ck.ok()) out.any_command_failed = true;
      if (model_depth >= 1) {
        int N = model_depth - 1;
        CornerInclusion inc(*skel, N);
        LevelData d = extract_data(*skel);
        bool rank_ok = true, wind_ok = true;
        for (int j = 0; j < inc.domain().block_count(); ++j) {
          CircleElement proj = inc.domain().zero();
          proj.blocks[j](0, 0) = LaurentPoly::one();
          CircleElement pi = inc.apply(proj);
          CircleElement ui = inc.apply(inc.domain().generator_unitary(j, 0));
          for (int i = 0; i < inc.codomain().block_count(); ++i) {
            rank_ok = rank_ok && constant_rank(pi, i) == d.A[N](i, j);
            wind_ok = wind_ok && Int(k1_winding(ui, i)) == d.B[N](i, j);
          }
        }
        os << "k0-multiplicities: " << (rank_ok ? "pass" : "fail") << "\n";
        os << "k1-windings: " << (wind_ok ? "pass" : "fail") << "\n";
        if (!rank_ok || !wind_ok) out.any_command_failed = true;
      }
      if (cfg.dump_model) os << model_dump(model);
    });
  }

  if (wants("traces")) {
    section("traces", [&] {
      if (!skel.has_value()) throw Error(skel_error);
      PermutationSystem sys;
      try {
        sys = permutation_system_from_skeleton(*skel);
      } catch (const Error&) {
        os << "not-applicable: red cycles longer than 1\n";
        return;
      }
      int levels = sys.depth();
      for (long long N = 1; N <= 4; ++N) {
        AlphaSeries a = alpha_series(sys, N, levels);
        os << "alpha[N=" << N << "] lower:";
        for (const Rat& r : a.lower_partial) os << " " << r;
        os << "\n";
        os << "alpha[N=" << N << "] upper:";
        for (const Rat& r : a.upper_partial) os << " " << r;
        os << "\n";
      }
      long long N = 2;
      CircleMeasure mu = markov_apply(N, CircleMeasure::point(Rat(0)));
      std::vector<Rat> top(sys.summands(levels), Rat(1, sys.summands(levels)));
      LiftResult lift = trace_lift(sys, top, mu, N, levels);
      os << "lift measure: " << mu.to_string() << "\n";
      for (size_t i = 0; i < lift.distances.size(); ++i)
        os << "lift level " << i << ": distance " << lift.distances[i] << " <= bound "
           << lift.bounds[i] << "\n";
    });
  }

  out.text = os.str();
  return out;
}

}  // namespace gbd
