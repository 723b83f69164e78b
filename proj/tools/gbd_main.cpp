// Command-line front end: parse skeleton documents or family descriptors,
// dispatch the analyses, and emit reports, documents, or DOT renderings.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gbd/io.hpp"
#include "gbd/report.hpp"

namespace {

struct CommonOpts {
  std::string input_file;
  std::string family;
  std::string primes;
  std::string terms;
  std::string perm_table;
  long long cycle = 4;
  long long letters = 2;
  int horizon = 16;
  int depth = 3;
  std::uint64_t seed = 0;
  std::string out;
  bool dump_model = false;
};

std::vector<long long> parse_list(const std::string& csv) {
  std::vector<long long> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stoll(tok));
  }
  return out;
}

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_input) {
  if (needs_input) {
    cmd->add_option("input", o.input_file, "skeleton document (omit when --family is given)");
    cmd->add_option("--family", o.family,
                    "family descriptor: bunce-deddens | irrational-rotation | perm-ncycle | "
                    "perm-identity | perm-constant-cycle | perm-explicit");
    cmd->add_option("--primes", o.primes, "prime list for bunce-deddens, e.g. 2,2,2");
    cmd->add_option("--terms", o.terms, "continued-fraction terms for irrational-rotation");
    cmd->add_option("--cycle", o.cycle, "cycle length for perm-constant-cycle");
    cmd->add_option("--letters", o.letters, "letters for perm-identity");
    cmd->add_option("--perm-table", o.perm_table,
                    "explicit single-summand tower for perm-explicit: one permutation image "
                    "list per level, e.g. '1,0;1,2,0'");
  }
  cmd->add_option("--horizon", o.horizon, "verdict search horizon");
  cmd->add_option("--depth", o.depth, "truncation depth");
  cmd->add_option("--seed", o.seed, "seed for sampled checks");
  cmd->add_flag("--dump-model", o.dump_model, "model-check: also dump the generator tables");
  cmd->add_option("--out", o.out, "write output to this file instead of stdout");
}

gbd::AnalysisConfig make_config(const CommonOpts& o) {
  gbd::AnalysisConfig cfg;
  cfg.horizon = o.horizon;
  cfg.depth = o.depth;
  cfg.seed = o.seed;
  cfg.dump_model = o.dump_model;
  if (!o.family.empty()) {
    if (o.family == "bunce-deddens") {
      auto primes = parse_list(o.primes.empty() ? "2" : o.primes);
      cfg.family = gbd::Family::bunce_deddens(primes);
    } else if (o.family == "irrational-rotation") {
      auto terms = parse_list(o.terms.empty() ? "1" : o.terms);
      cfg.family = gbd::Family::irrational_rotation(terms);
    } else if (o.family == "perm-ncycle") {
      cfg.family = gbd::Family::perm_ncycle();
    } else if (o.family == "perm-identity") {
      cfg.family = gbd::Family::perm_identity(o.letters);
    } else if (o.family == "perm-constant-cycle") {
      cfg.family = gbd::Family::perm_constant_cycle(o.cycle);
    } else if (o.family == "perm-explicit") {
      gbd::PermutationSystem sys;
      sys.sizes.push_back({gbd::Int(1)});
      std::stringstream ss(o.perm_table);
      std::string level_tok;
      while (std::getline(ss, level_tok, ';')) {
        gbd::Perm p;
        for (long long v : parse_list(level_tok)) p.image.push_back(static_cast<int>(v));
        if (!p.valid()) throw gbd::Error("'" + level_tok + "' is not a permutation image list");
        sys.blocks.push_back({gbd::PermBlock{0, 0, p}});
        sys.sizes.push_back({sys.sizes.back()[0] * p.size()});
      }
      cfg.family = gbd::Family::perm_explicit(std::move(sys));
    } else {
      throw gbd::Error("unknown family '" + o.family + "'");
    }
    cfg.input_name = cfg.family->name();
  } else if (!o.input_file.empty()) {
    std::ifstream in(o.input_file);
    if (!in) throw gbd::Error("cannot open " + o.input_file);
    std::stringstream buf;
    buf << in.rdbuf();
    cfg.input_text = buf.str();
    cfg.input = gbd::parse_skeleton(cfg.input_text);
    cfg.input_name = o.input_file;
  } else {
    throw gbd::Error("no input: give a document path or --family");
  }
  return cfg;
}

int write_out(const CommonOpts& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(o.out);
  if (!out) throw gbd::Error("cannot write " + o.out);
  out << text;
  return 0;
}

int run_command(const CommonOpts& o, const std::string& command) {
  gbd::AnalysisConfig cfg = make_config(o);
  cfg.commands = {command};
  gbd::Report rep = gbd::run(cfg);
  return write_out(o, rep.text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"analyses of layered cycle diagrams and their circle-algebra invariants"};
  app.require_subcommand(1);

  CommonOpts o;
  struct Sub {
    const char* name;
    const char* desc;
  };
  std::vector<Sub> analysis_subs{
      {"validate", "check the diagram axioms"},
      {"data", "extract incidence data and check the exchange identity"},
      {"ktheory", "direct-limit invariants, unit class, ideal lattice"},
      {"classify", "cofinality, simplicity, factorisation growth, real rank"},
      {"model-check", "exact relation and multiplicity checks in the matrix model"},
      {"traces", "orbit statistics, alpha series, trace tower bounds"},
  };
  for (const Sub& sub : analysis_subs) add_common(app.add_subcommand(sub.name, sub.desc), o, true);
  add_common(app.add_subcommand("dot", "emit a DOT rendering of the truncation"), o, true);
  add_common(app.add_subcommand("gen", "emit the skeleton document of the truncation"), o, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "dot" || name == "gen") {
      gbd::AnalysisConfig cfg = make_config(o);
      gbd::GbdSkeleton s =
          cfg.input.has_value()
              ? cfg.input->truncate(std::min(o.depth, cfg.input->depth()))
              : cfg.family->skeleton(std::min(o.depth, gbd::max_levels(*cfg.family)));
      return write_out(o, name == "dot" ? gbd::to_dot(s) : gbd::emit_skeleton(s));
    }
    return run_command(o, name);
  } catch (const gbd::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
