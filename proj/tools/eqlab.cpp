// eqlab: run experiments and draw laminations.
//
//   eqlab list
//   eqlab run <experiment> [--config PATH] [--out DIR] [--seed N] [--nu LIST]
//                          [--budget N] [--format json|csv] [--input FILE]...
//   eqlab plot <lamination|earthquake|field> --input FILE [--boxes FILE] [--out FILE]
//
// Exit codes: 0 pass, 1 relation violated, 2 input error, 3 budget exhausted.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "eql/experiments.hpp"
#include "eql/svg.hpp"

namespace {

using namespace eql;

constexpr int kInputError = 2;

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad number '" + item + "' in list");
    }
  }
  return out;
}

int run(const std::string& id, const std::string& config_path, const std::string& out_dir,
        std::optional<std::uint64_t> seed, const std::string& nu, std::optional<std::size_t> budget,
        const std::string& format, const std::vector<std::string>& inputs) {
  ExperimentConfig cfg;
  if (!config_path.empty()) cfg = config_from_json(read_json_file(config_path));
  if (!id.empty()) cfg.id = id;
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (seed) cfg.seed = *seed;
  if (!nu.empty()) cfg.nu_grid = parse_list(nu);
  if (budget) cfg.budget.max_evaluations = *budget;
  if (!format.empty()) cfg.format = format;
  if (!inputs.empty()) cfg.inputs = inputs;
  validate(cfg);

  ExperimentResult res = run_experiment(cfg);
  std::string text = cfg.format == "csv" ? to_csv(res) : dump(res.data);
  std::string path;
  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    path = (std::filesystem::path(cfg.out_dir) / (cfg.id + "." + cfg.format)).string();
  }
  write_or_print(path, text);
  std::cerr << cfg.id << ": " << (res.pass ? "pass" : (res.budget_exhausted ? "budget exhausted" : "FAIL")) << "\n";
  return res.exit_code();
}

int plot(const std::string& kind, const std::string& input, const std::string& boxes_path,
         const std::string& out) {
  OraclePtr lam = load_lamination(input);
  std::string svg;
  if (kind == "lamination") {
    std::vector<GeodesicBox> boxes;
    if (!boxes_path.empty()) {
      Json j = read_json_file(boxes_path);
      if (!j.is_array()) throw InputParseError(boxes_path + ": expected an array of boxes");
      for (const Json& b : j) boxes.push_back(box_from_json(b));
    }
    svg = plot_lamination(*lam, boxes);
  } else {
    const DiscreteLamination* d = lam->as_discrete();
    if (!d) throw ConfigError(kind + " plots need a discrete lamination");
    Complex base = default_base_point(*d);
    if (kind == "earthquake") {
      FiniteEarthquake e = build_earthquake(*d, base);
      svg = plot_earthquake_image(e.as_function(), d);
    } else if (kind == "field") {
      svg = plot_vector_field(dot_E_field(*d, base));
    } else {
      throw ConfigError("plot kind must be lamination, earthquake or field");
    }
  }
  write_or_print(out, svg);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Earthquakes and measured laminations on the hyperbolic plane"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List experiment ids");

  auto* run_cmd = app.add_subcommand("run", "Run one experiment");
  std::string id, config_path, out_dir, nu, format;
  std::uint64_t seed_value = 0;
  std::size_t budget_value = 0;
  std::vector<std::string> inputs;
  run_cmd->add_option("experiment", id, "Experiment id (see list)");
  run_cmd->add_option("--config", config_path, "JSON config file");
  run_cmd->add_option("--out", out_dir, "Directory for <experiment>.<format>; stdout when absent");
  auto* seed_opt = run_cmd->add_option("--seed", seed_value, "Random seed");
  run_cmd->add_option("--nu", nu, "Comma separated Holder exponents");
  auto* budget_opt = run_cmd->add_option("--budget", budget_value, "Maximum evaluations per search");
  run_cmd->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  run_cmd->add_option("--input", inputs, "Lamination JSON file (repeatable)");

  auto* plot_cmd = app.add_subcommand("plot", "Draw a lamination, earthquake image or vector field as SVG");
  std::string kind, input, boxes_path, plot_out;
  plot_cmd->add_option("kind", kind, "lamination, earthquake or field")->required();
  plot_cmd->add_option("--input", input, "Lamination JSON file")->required();
  plot_cmd->add_option("--boxes", boxes_path, "JSON array of boxes to outline");
  plot_cmd->add_option("--out", plot_out, "SVG file; stdout when absent");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*list) {
      for (const auto& e : experiment_ids()) std::cout << e << "\n";
      return 0;
    }
    if (*run_cmd) {
      std::optional<std::uint64_t> seed;
      if (seed_opt->count()) seed = seed_value;
      std::optional<std::size_t> budget;
      if (budget_opt->count()) budget = budget_value;
      return run(id, config_path, out_dir, seed, nu, budget, format, inputs);
    }
    return plot(kind, input, boxes_path, plot_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kInputError;
  } catch (const InputParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const WindowRequired& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
