// seqdec command line: complexity bounds, decoder simulations, A-tilde
// tables, d* dumps and the self-check suite.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "seqdec/seqdec.hpp"

namespace {

using namespace seqdec;

constexpr int kExitValidation = 1;
constexpr int kExitConfig = 2;

struct CommonArgs {
  std::string config;
  std::string code;
  int L = 0;
  std::string snr;
  std::uint64_t trials = 0;
  std::optional<std::uint64_t> seed;
  std::string variant;
  std::string be_form;
  bool all_zero = false;
  unsigned workers = 0;
  std::uint64_t max_extensions = 0;
  bool with_bound = false;
  std::string out;
};

CodeRef builtin_code(const std::string& name, int L) {
  if (name == "golay24") return build_extended_golay();
  if (name == "qr48") return build_extended_qr48();
  auto conv = [&](ConvCode c) -> CodeRef {
    if (L < 1) throw ConfigError("--L is required for convolutional codes");
    return build_trellis(c, L);
  };
  if (name == "conv312") return conv(build_example_312());
  if (name == "conv216") return conv(build_conv216());
  if (name == "conv2116") return conv(build_conv2116());
  throw ConfigError("unknown code '" + name + "' (golay24, qr48, conv312, conv216, conv2116)");
}

RecipeFile resolve(const CommonArgs& a) {
  RecipeFile r;
  if (!a.config.empty()) r = load_recipe(a.config);
  auto& e = r.experiment;
  if (!a.code.empty()) {
    e.code = builtin_code(a.code, a.L);
  } else if (a.L > 0 && e.code) {
    if (auto* t = std::get_if<Trellis>(&*e.code)) e.code = build_trellis(t->code(), a.L);
  }
  if (!a.snr.empty()) e.snr_grid = parse_snr_range(a.snr);
  if (a.trials) e.trials = a.trials;
  if (a.seed) e.seed = *a.seed;
  if (!a.variant.empty()) e.variant = parse_variant(a.variant);
  if (!a.be_form.empty()) e.be_kind = parse_be_form(a.be_form);
  if (a.all_zero) e.all_zero = true;
  if (a.workers) e.workers = a.workers;
  if (a.max_extensions) e.max_extensions = a.max_extensions;
  return r;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ConfigError("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void add_common(CLI::App* sub, CommonArgs& a, bool simulation) {
  sub->add_option("--config", a.config, "JSON recipe");
  sub->add_option("--code", a.code, "built-in code: golay24, qr48, conv312, conv216, conv2116");
  sub->add_option("--L", a.L, "information length for convolutional codes");
  sub->add_option("--snr", a.snr, "gamma_b grid in dB, start:stop:step");
  sub->add_option("--variant", a.variant, "be | chernoff | both");
  sub->add_option("--be-form", a.be_form, "leading | complete");
  sub->add_option("--out", a.out, "CSV path (default stdout)");
  if (simulation) {
    sub->add_option("--trials", a.trials, "trials per SNR point");
    sub->add_option("--seed", a.seed, "64-bit seed");
    sub->add_flag("--all-zero", a.all_zero, "transmit the all-zero codeword");
    sub->add_option("--workers", a.workers, "worker threads");
    sub->add_option("--max-extensions", a.max_extensions, "GDA per-trial extension cap (0 = none)");
    sub->add_flag("--with-bound", a.with_bound, "also evaluate the bounds");
  }
}

int run_curve_command(const CommonArgs& a, bool block, bool simulate) {
  auto r = resolve(a);
  auto& e = r.experiment;
  if (!e.code) throw ConfigError("no code: pass --config or --code");
  if (std::holds_alternative<BlockCode>(*e.code) != block) {
    throw ConfigError(block ? "this command needs a block code" : "this command needs a convolutional code");
  }
  e.mode = simulate ? (a.with_bound ? Mode::Both : Mode::Simulate) : Mode::Bound;
  const auto pts = run_curve(e);
  Output out(a.out);
  write_curve_csv(out.stream(), pts);
  for (const auto& p : pts) {
    if (p.overflow_trials) {
      std::cerr << "gamma_b_db=" << p.gamma_b_db << ": " << p.overflow_trials
                << " trials hit the extension cap and were excluded\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential ML decoding: complexity bounds and simulations"};
  app.require_subcommand(1);

  CommonArgs bound_gda, bound_mlsda, sim_gda, sim_mlsda;
  auto* c1 = app.add_subcommand("bound-gda", "bound on GDA branch metric computations");
  add_common(c1, bound_gda, false);
  auto* c2 = app.add_subcommand("bound-mlsda", "bound on MLSDA branch metric computations");
  add_common(c2, bound_mlsda, false);
  auto* c3 = app.add_subcommand("simulate-gda", "Monte Carlo GDA complexity");
  add_common(c3, sim_gda, true);
  auto* c4 = app.add_subcommand("simulate-mlsda", "Monte Carlo MLSDA complexity");
  add_common(c4, sim_mlsda, true);

  std::string at_config, at_out, at_form, at_n = "10:400:10";
  std::optional<double> at_ratio, at_gamma;
  auto* c5 = app.add_subcommand("atilde", "subexponential factor table");
  c5->add_option("--config", at_config, "JSON recipe with an atilde section");
  c5->add_option("--ratio", at_ratio, "d/n");
  c5->add_option("--gamma-db", at_gamma, "gamma in dB");
  c5->add_option("--n", at_n, "n grid start:stop:step");
  c5->add_option("--be-form", at_form, "leading | complete");
  c5->add_option("--out", at_out, "CSV path (default stdout)");

  CommonArgs dstar_args;
  auto* c6 = app.add_subcommand("dstar", "dump the d* table");
  c6->add_option("--config", dstar_args.config, "JSON recipe");
  c6->add_option("--code", dstar_args.code, "built-in convolutional code");
  c6->add_option("--L", dstar_args.L, "information length");
  c6->add_option("--out", dstar_args.out, "CSV path (default stdout)");

  ValidationOptions vopt;
  auto* c7 = app.add_subcommand("validate", "run the self-check suite");
  c7->add_option("--seed", vopt.seed, "seed");
  c7->add_option("--samples", vopt.dominance_samples, "Monte Carlo samples per dominance cell");
  c7->add_option("--ml-trials", vopt.ml_trials, "trials per ML-equivalence configuration");
  c7->add_flag("--corrupt-dstar", vopt.corrupt_dstar, "negative control: damage one d* entry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (c1->parsed()) return run_curve_command(bound_gda, true, false);
    if (c2->parsed()) return run_curve_command(bound_mlsda, false, false);
    if (c3->parsed()) return run_curve_command(sim_gda, true, true);
    if (c4->parsed()) return run_curve_command(sim_mlsda, false, true);
    if (c5->parsed()) {
      ATildeSpec spec;
      if (!at_config.empty()) {
        auto r = load_recipe(at_config);
        if (!r.atilde) throw ConfigError("config has no atilde section");
        spec = *r.atilde;
      }
      if (at_ratio) spec.d_over_n = {*at_ratio};
      if (at_gamma) spec.gamma_db = {*at_gamma};
      if (spec.n_grid.empty() || c5->count("--n")) {
        spec.n_grid.clear();
        for (double v : parse_snr_range(at_n)) spec.n_grid.push_back(static_cast<std::uint64_t>(std::llround(v)));
      }
      if (spec.d_over_n.empty() || spec.gamma_db.empty()) throw ConfigError("atilde needs --ratio and --gamma-db");
      BoundVariant v{at_form.empty() ? BoundKind::BerryEsseen : parse_be_form(at_form), 0.7655};
      Output out(at_out);
      out.stream() << "d_over_n,gamma_db,n,d,atilde\n";
      for (double ratio : spec.d_over_n) {
        for (double g : spec.gamma_db) {
          for (const auto& row : run_atilde_table(ratio, g, spec.n_grid, v)) {
            out.stream() << format_g17(ratio) << ',' << format_g17(g) << ',' << row.n << ',' << row.d << ','
                         << format_g17(row.atilde) << '\n';
          }
        }
      }
      return 0;
    }
    if (c6->parsed()) {
      auto r = resolve(dstar_args);
      if (!r.experiment.code || !std::holds_alternative<Trellis>(*r.experiment.code)) {
        throw ConfigError("dstar needs a convolutional code");
      }
      Output out(dstar_args.out);
      write_dstar_csv(out.stream(), std::get<Trellis>(*r.experiment.code));
      return 0;
    }
    if (c7->parsed()) {
      const auto rep = run_validation_suite(vopt);
      rep.print(std::cout);
      return rep.all_passed() ? 0 : kExitValidation;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
