// thinfilm: simulate and analyse two-layer thin films with insoluble surfactant.

#include <CLI11.hpp>

#include <string>
#include <vector>

#include "thinfilm/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Two-layer thin-film simulator and stability analyser"};
  app.require_subcommand(1);

  thinfilm::CommandOptions opts;
  std::string out_dir;
  std::vector<double> neg_symbol;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", opts.config, "INI or JSON run configuration");
    if (config_required) c->required();
    sub->add_option("--out", out_dir, "output directory (overrides io.out_dir)");
  };

  auto* simulate = app.add_subcommand("simulate", "integrate a configuration, write series and snapshots");
  add_common(simulate, true);
  auto* analyze = app.add_subcommand("analyze-equilibrium", "certificate, Gamma* threshold and spectral abscissa");
  add_common(analyze, true);
  auto* ls = app.add_subcommand("ls-check", "Lopatinskii-Shapiro root check of the capillary symbol");
  add_common(ls, false);
  ls->add_flag("--sample-lambda", opts.sample_lambda, "also check 16 lambda on the right unit half-circle");
  ls->add_option("--neg-symbol", neg_symbol, "a11,a12,a21,a22 of -a_tilde")->delimiter(',')->expected(4)->group("");
  auto* decay = app.add_subcommand("decay-study", "simulate, fit decay rates and compare with the spectrum");
  add_common(decay, true);

  CLI11_PARSE(app, argc, argv);

  if (!out_dir.empty()) opts.out_dir = out_dir;
  if (neg_symbol.size() == 4) {
    Eigen::Matrix2d m;
    m << neg_symbol[0], neg_symbol[1], neg_symbol[2], neg_symbol[3];
    opts.neg_symbol = m;
  } else if (ls->parsed() && opts.config.empty()) {
    std::cerr << "ls-check: --config is required\n";
    return thinfilm::kExitInvalid;
  }

  if (simulate->parsed()) return thinfilm::cmd_simulate(opts);
  if (analyze->parsed()) return thinfilm::cmd_analyze_equilibrium(opts);
  if (ls->parsed()) return thinfilm::cmd_ls_check(opts);
  return thinfilm::cmd_decay_study(opts);
}
