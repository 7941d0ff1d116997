// Command-line surface: sampling, invariants, group actions, and the
// statistical verification suites, all on JSON-lines streams.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "su2cosets/actions.hpp"
#include "su2cosets/completion.hpp"
#include "su2cosets/errors.hpp"
#include "su2cosets/haar.hpp"
#include "su2cosets/json_io.hpp"
#include "su2cosets/polygon.hpp"

namespace sc = su2cosets;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDegeneracy = 3;

struct IoStreams {
  std::istream* in = &std::cin;
  std::ostream* out = &std::cout;
  std::unique_ptr<std::ifstream> in_file;
  std::unique_ptr<std::ofstream> out_file;

  void open(const std::string& in_path, const std::string& out_path) {
    if (!in_path.empty()) {
      in_file = std::make_unique<std::ifstream>(in_path);
      if (!*in_file) {
        throw sc::CosetError(sc::Errc::schema_error,
                             "cannot open input file " + in_path);
      }
      in = in_file.get();
    }
    if (!out_path.empty()) {
      out_file = std::make_unique<std::ofstream>(out_path);
      if (!*out_file) {
        throw sc::CosetError(sc::Errc::schema_error,
                             "cannot open output file " + out_path);
      }
      out = out_file.get();
    }
  }
};

// Applies fn to every nonempty input line; schema errors are reported with
// the line number.
template <typename Fn>
void for_each_record(std::istream& in, Fn fn) {
  std::string line;
  std::int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      fn(line);
    } catch (const sc::CosetError& e) {
      std::ostringstream os;
      os << "line " << lineno << ": " << e.what();
      throw sc::CosetError(e.code(), os.str());
    }
  }
}

void write_csv(const std::string& path, const sc::GofReport& rep) {
  std::ofstream f(path);
  if (!f) {
    throw sc::CosetError(sc::Errc::schema_error,
                         "cannot open CSV file " + path);
  }
  f << "bin_id,expected,observed\n";
  for (const auto& b : rep.bins) {
    f << b.id << ',' << b.expected << ',' << b.observed << '\n';
  }
}

struct VerifyConfig {
  std::string suite;
  std::uint64_t seed = 0;
  std::int64_t samples = 0;  // 0 -> suite default
  int trials = 0;            // 0 -> suite default
  int n = 0;                 // 0 -> suite default
  int threads = 1;
  int bins = 10;
  double tol = 0.0;  // 0 -> suite default
  std::string csv_path;
  bool negative_control = false;
};

int run_verify(const VerifyConfig& cfg, std::ostream& out) {
  bool pass = false;
  if (cfg.suite == "haar-n3") {
    sc::UniformN3Options opts;
    opts.samples = cfg.samples ? cfg.samples : 1'000'000;
    opts.seed = cfg.seed;
    opts.threads = cfg.threads;
    opts.bins_per_axis = cfg.bins;
    if (cfg.tol > 0) opts.sigma_limit = cfg.tol;
    if (cfg.negative_control) opts.sampler = sc::N3Sampler::det_plus_half;
    const sc::GofReport rep = sc::verify_uniform_n3(opts);
    out << sc::encode_gof_report(rep) << '\n';
    if (!cfg.csv_path.empty()) write_csv(cfg.csv_path, rep);
    pass = rep.pass;
  } else if (cfg.suite == "haar-n4") {
    sc::WeightedN4Options opts;
    opts.samples = cfg.samples ? cfg.samples : 10'000'000;
    opts.seed = cfg.seed;
    opts.threads = cfg.threads;
    if (cfg.tol > 0) opts.rel_tol = cfg.tol;
    const sc::GofReport rep = sc::verify_weighted_n4(opts);
    out << sc::encode_gof_report(rep) << '\n';
    if (!cfg.csv_path.empty()) write_csv(cfg.csv_path, rep);
    pass = rep.pass;
  } else if (cfg.suite == "haar-branch") {
    sc::BranchOptions opts;
    opts.n = cfg.n ? cfg.n : 6;
    opts.samples = cfg.samples ? cfg.samples : 100'000;
    opts.seed = cfg.seed;
    opts.threads = cfg.threads;
    if (cfg.tol > 0) opts.sigma_limit = cfg.tol;
    const sc::GofReport rep = sc::verify_branch_equiprobability(opts);
    out << sc::encode_gof_report(rep) << '\n';
    if (!cfg.csv_path.empty()) write_csv(cfg.csv_path, rep);
    pass = rep.pass;
  } else if (cfg.suite == "actions-oracle") {
    sc::ActionsOracleOptions opts;
    opts.n = cfg.n ? cfg.n : 5;
    opts.trials = cfg.samples ? static_cast<int>(cfg.samples) : 10'000;
    opts.seed = cfg.seed;
    opts.threads = cfg.threads;
    if (cfg.tol > 0) opts.entry_tol = cfg.tol;
    const sc::ActionsOracleReport rep = sc::verify_actions_oracle(opts);
    out << sc::encode_actions_oracle_report(rep) << '\n';
    pass = rep.pass;
  } else if (cfg.suite == "braid-relations") {
    sc::Rng rng(cfg.seed);
    const sc::CheckReport rep = sc::verify_braid_relations(
        cfg.n ? cfg.n : 5, cfg.trials ? cfg.trials : 1000, rng);
    out << sc::encode_check_report(rep) << '\n';
    pass = rep.pass;
  } else if (cfg.suite == "kernel") {
    sc::Rng rng(cfg.seed);
    const sc::CheckReport rep = sc::verify_kernel_element(
        cfg.n ? cfg.n : 3, cfg.trials ? cfg.trials : 100, rng);
    out << sc::encode_check_report(rep) << '\n';
    pass = rep.pass;
  } else if (cfg.suite == "artin") {
    sc::Rng rng(cfg.seed);
    const int n = cfg.n ? cfg.n : 5;
    const int words = cfg.trials ? cfg.trials : 50;
    bool all = true;
    for (int w = 0; w < words; ++w) {
      sc::GroupWord word;
      const int len = 1 + static_cast<int>(rng.next_u64() % 10);
      for (int i = 0; i < len; ++i) {
        const int pos = 2 + static_cast<int>(rng.next_u64() % (n - 2));
        const int e = (rng.next_u64() & 1) ? 1 : -1;
        word.tokens.push_back(sc::BraidToken{pos, e});
      }
      const sc::CheckReport rep = sc::artin_check(word, n, 10, rng);
      out << sc::encode_check_report(rep) << '\n';
      all = all && rep.pass;
    }
    pass = all;
  } else if (cfg.suite == "polygon-pure") {
    sc::PolygonPureOptions opts;
    opts.polygon_count = cfg.trials ? cfg.trials : 100;
    opts.seed = cfg.seed;
    const sc::CheckReport rep = sc::verify_polygon_pure(opts);
    out << sc::encode_check_report(rep) << '\n';
    pass = rep.pass;
  } else {
    throw sc::CosetError(sc::Errc::schema_error,
                         "unknown verify suite '" + cfg.suite + "'");
  }
  return pass ? kExitPass : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "su2cosets: double cosets of SU(2)^n through spectral forms.\n"
      "Data flows as JSON lines on stdio; every stochastic command takes an "
      "explicit --seed.\n"
      "Word syntax (applied left to right): perm:2,4,3,5 | inv:2 | lmul:2,3 "
      "| s1 | s2^-1 (s_i acts on tuple positions i+1, i+2)."};
  app.require_subcommand(1);

  // sample
  int n = 3;
  std::int64_t count = 1;
  std::uint64_t seed = 0;
  std::string in_path, out_path, word_text, csv_path;
  auto* sample = app.add_subcommand("sample", "emit Haar-random tuples");
  sample->add_option("--n", n, "tuple length (>= 2)")->required();
  sample->add_option("--count", count, "number of tuples")->required();
  sample->add_option("--seed", seed, "RNG seed")->required();
  sample->add_option("--out", out_path, "output path (default stdout)");

  // zeta
  auto* zeta = app.add_subcommand(
      "zeta", "spectral form + sheet of each input tuple");
  zeta->add_option("--in", in_path, "input path (default stdin)");
  zeta->add_option("--out", out_path, "output path (default stdout)");

  // reconstruct
  auto* rec = app.add_subcommand(
      "reconstruct", "tuple representative of each sheeted form");
  rec->add_option("--in", in_path, "input path (default stdin)");
  rec->add_option("--out", out_path, "output path (default stdout)");

  // act
  auto* act = app.add_subcommand("act", "apply a word to each input tuple");
  act->add_option("--word", word_text, "generator word")->required();
  act->add_option("--in", in_path, "input path (default stdin)");
  act->add_option("--out", out_path, "output path (default stdout)");

  // validate
  auto* val = app.add_subcommand(
      "validate", "validation report for each input form");
  val->add_option("--in", in_path, "input path (default stdin)");
  val->add_option("--out", out_path, "output path (default stdout)");

  // verify
  VerifyConfig vcfg;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify
      ->add_option("--suite", vcfg.suite,
                   "haar-n3 | haar-n4 | haar-branch | actions-oracle | "
                   "braid-relations | kernel | artin | polygon-pure")
      ->required();
  verify->add_option("--seed", vcfg.seed, "RNG seed")->required();
  verify->add_option("--samples", vcfg.samples, "Monte Carlo sample count");
  verify->add_option("--trials", vcfg.trials, "trial count");
  verify->add_option("--n", vcfg.n, "tuple length");
  verify->add_option("--threads", vcfg.threads,
                     "worker threads (1 = bit-reproducible reference)");
  verify->add_option("--bins", vcfg.bins, "bins per axis (haar-n3)");
  verify->add_option("--tol", vcfg.tol, "tolerance override");
  verify->add_option("--csv", csv_path, "write histogram CSV here");
  verify->add_flag("--negative-control", vcfg.negative_control,
                   "run the suite's negative control sampler");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    IoStreams io;
    if (sample->parsed()) {
      if (n < 2) {
        std::cerr << "sample: need --n >= 2\n";
        return kExitUsage;
      }
      if (count < 0) {
        std::cerr << "sample: need --count >= 0\n";
        return kExitUsage;
      }
      io.open("", out_path);
      sc::Rng rng(seed);
      for (std::int64_t i = 0; i < count; ++i) {
        *io.out << sc::encode_tuple(sc::sample_tuple(n, rng)) << '\n';
      }
      return kExitPass;
    }
    if (zeta->parsed()) {
      io.open(in_path, out_path);
      for_each_record(*io.in, [&](const std::string& line) {
        const sc::CosetTuple t = sc::decode_tuple(line);
        *io.out << sc::encode_sheeted_form(sc::sheeted_form(t)) << '\n';
      });
      return kExitPass;
    }
    if (rec->parsed()) {
      io.open(in_path, out_path);
      for_each_record(*io.in, [&](const std::string& line) {
        const sc::SheetedForm sf = sc::decode_sheeted_form(line);
        *io.out << sc::encode_tuple(sc::reconstruct(sf)) << '\n';
      });
      return kExitPass;
    }
    if (act->parsed()) {
      const sc::GroupWord w = sc::parse_word(word_text);
      io.open(in_path, out_path);
      for_each_record(*io.in, [&](const std::string& line) {
        const sc::CosetTuple t = sc::decode_tuple(line);
        *io.out << sc::encode_tuple(sc::act_tuple(t, w)) << '\n';
      });
      return kExitPass;
    }
    if (val->parsed()) {
      io.open(in_path, out_path);
      bool all = true;
      for_each_record(*io.in, [&](const std::string& line) {
        const sc::SpectralForm f = sc::decode_form(line);
        const sc::ValidationReport rep = sc::validate_form(f);
        all = all && rep.pass;
        *io.out << sc::encode_validation_report(rep) << '\n';
      });
      return all ? kExitPass : kExitCheckFailure;
    }
    if (verify->parsed()) {
      vcfg.csv_path = csv_path;
      io.open("", out_path);
      return run_verify(vcfg, *io.out);
    }
  } catch (const sc::CosetError& e) {
    std::cerr << e.what() << '\n';
    return e.is_degeneracy() ? kExitDegeneracy : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
