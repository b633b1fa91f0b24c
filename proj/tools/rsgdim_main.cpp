#include <cstdint>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rsgdim/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Julia sets, pressure, dimension and conformal measures for rational semigroups"};
  app.require_subcommand(1);

  struct {
    std::string config;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
  } common;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "JSON config file")->required();
    sub->add_option("--out", common.out, "output directory (default: current)");
    sub->add_option("--seed", common.seed, "override the config seed");
    sub->add_option("--workers", common.workers, "worker threads (0 = hardware)");
  };

  CLI::App* render = app.add_subcommand("render", "rasterize a Julia set approximation to PNG");
  CLI::App* dimension =
      app.add_subcommand("dimension", "pressure zero, box-counting and critical exponent estimates");
  CLI::App* measure = app.add_subcommand("measure", "truncated conformal measure atoms and diagnostics");
  CLI::App* check = app.add_subcommand("check", "open set condition and semi-hyperbolicity tests");
  for (CLI::App* sub : {render, dimension, measure, check}) add_common(sub);

  int d1 = 0, d = 0;
  double r = 0.0;
  CLI::App* family = app.add_subcommand("family-c0", "parameter bound c0(d1, d, r) for the two-generator family");
  family->add_option("--d1", d1, "degree of the first generator")->required();
  family->add_option("--d", d, "degree of the second generator")->required();
  family->add_option("--r", r, "inner radius giving the closed disk inside the first filled set")
      ->required();

  CLI::App* list = app.add_subcommand("list-examples", "list the built-in example semigroups");

  CLI11_PARSE(app, argc, argv);

  if (family->parsed()) return rsg::run_family_c0(d1, d, r);
  if (list->parsed()) return rsg::run_list_examples();

  rsg::CliOptions opts;
  opts.config_path = common.config;
  opts.out_dir = common.out;
  opts.seed = common.seed;
  opts.workers = common.workers;
  for (CLI::App* sub : {render, dimension, measure, check})
    if (sub->parsed()) return rsg::run_command(sub->get_name(), opts);
  return 2;
}
