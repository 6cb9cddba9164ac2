/*
 * Copyright 2026 The qtib Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "qtib/cli.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "qtib/error.h"
#include "qtib/info_measures.h"
#include "qtib/metrics_sweep.h"
#include "qtib/render.h"
#include "qtib/search.h"
#include "qtib/tree_io.h"
#include "qtib/world_model.h"

namespace qtib::cli {
namespace {

namespace fs = std::filesystem;

struct Options {
  std::string map;
  std::string map_format;
  std::string prior;
  double beta = 0.0;
  std::string betas;
  std::string abstract_algo;
  std::string sweep_algo;
  std::string out;
  std::string tree;
  int scale = 4;
  std::uint64_t seed = 0;  // reserved; every path is deterministic
  bool render = false;
};

// Thrown for argument combinations CLI11 cannot express.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string ReadText(const fs::path& p, const std::string& flag) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ParseError(flag + ": cannot open '" + p.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Writes via a temporary file and a rename so readers never see a partial
// output.
void WriteAtomic(const fs::path& path, const std::string& data) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ParseError("cannot write '" + tmp.string() + "'");
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw ParseError("short write to '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

WorldModel LoadWorld(const Options& o) {
  std::optional<MapFormat> fmt;
  if (o.map_format == "pgm") fmt = MapFormat::kPgm;
  if (o.map_format == "csv") fmt = MapFormat::kCsv;
  OccupancyField occ;
  try {
    occ = LoadOccupancyFile(o.map, fmt);
  } catch (const ParseError& e) {
    throw ParseError(std::string("--map: ") + e.what());
  }
  PriorSpec spec = PriorSpec::Uniform();
  if (!o.prior.empty()) {
    try {
      if (o.prior.front() == '{') {
        spec = ParsePriorJson(o.prior, fs::current_path());
      } else {
        const fs::path p(o.prior);
        spec = ParsePriorJson(ReadText(p, "--prior"), p.parent_path());
      }
    } catch (const ParseError& e) {
      throw ParseError(std::string("--prior: ") + e.what());
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("--prior: ") + e.what());
    }
  }
  return AssembleWorld(occ, BuildPrior(spec, occ.width, occ.height));
}

Algorithm ParseSingleAlgorithm(const std::string& s) {
  if (s == "greedy") return Algorithm::kGreedy;
  if (s == "qtree") return Algorithm::kQTree;
  throw UsageError("--algo: '" + s + "' needs to be greedy or qtree here");
}

std::string BetaTag(double beta) { return FormatNumber(beta); }

void PrintSummary(std::ostream& out, Algorithm a, const InfoPlanePoint& p) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "algorithm=%s beta=%s leaves=%zu i_tx_bits=%.17g "
                "i_ty_bits=%.17g objective_bits=%.17g\n",
                std::string(AlgorithmName(a)).c_str(),
                FormatNumber(p.beta).c_str(), p.leaf_count, p.i_tx, p.i_ty,
                p.objective);
  out << buf;
}

int RunAbstract(const Options& o, std::ostream& out) {
  const Algorithm algo = ParseSingleAlgorithm(o.abstract_algo);
  const WorldModel world = LoadWorld(o);
  const NodeStatsTable stats = ComputeNodeStats(world);
  const Beta beta(o.beta);
  auto entries = RunSweep(world, stats, {o.beta}, {algo});
  const SweepEntry& e = entries.front();
  const fs::path dir(o.out);
  WriteAtomic(dir / "tree.json", ExportTreeJson(e.result, stats, beta, algo));
  WriteAtomic(dir / "abstraction.ppm",
              RenderAbstraction(e.result.tree, stats, o.scale));
  WriteAtomic(dir / "metrics.csv", EmitMetricsCsv({e.point}));
  PrintSummary(out, algo, e.point);
  return kExitOk;
}

int RunSweepCommand(const Options& o, std::ostream& out) {
  std::set<Algorithm> algos;
  if (o.sweep_algo == "both") {
    algos = {Algorithm::kGreedy, Algorithm::kQTree};
  } else {
    algos = {ParseSingleAlgorithm(o.sweep_algo)};
  }
  const auto betas = ParseBetaList(o.betas);
  const WorldModel world = LoadWorld(o);
  const NodeStatsTable stats = ComputeNodeStats(world);
  const auto entries = RunSweep(world, stats, betas, algos);
  const fs::path dir(o.out);
  std::vector<InfoPlanePoint> points;
  for (const auto& e : entries) {
    points.push_back(e.point);
    const std::string stem = std::string(AlgorithmName(e.point.algorithm)) +
                             "_beta_" + BetaTag(e.point.beta);
    WriteAtomic(
        dir / ("tree_" + stem + ".json"),
        ExportTreeJson(e.result, stats, Beta(e.point.beta), e.point.algorithm));
    if (o.render) {
      WriteAtomic(dir / ("abstraction_" + stem + ".ppm"),
                  RenderAbstraction(e.result.tree, stats, o.scale));
    }
  }
  WriteAtomic(dir / "metrics.csv", EmitMetricsCsv(points));
  for (const auto& p : points) PrintSummary(out, p.algorithm, p);
  return kExitOk;
}

int RunRender(const Options& o, std::ostream& out) {
  const WorldModel world = LoadWorld(o);
  const TreeAbstraction tree = ImportTreeJson(ReadText(o.tree, "--tree"));
  if (tree.depth_limit() != world.depth()) {
    throw ConfigError(
        "--tree: depth limit " + std::to_string(tree.depth_limit()) +
        " does not match the map depth " + std::to_string(world.depth()));
  }
  const fs::path target = fs::path(o.out) / "abstraction.ppm";
  WriteAtomic(target,
              RenderAbstraction(tree, ComputeNodeStats(world), o.scale));
  out << "wrote " << target.string() << "\n";
  return kExitOk;
}

int RunOracle(const Options& o, std::ostream& out) {
  const WorldModel world = LoadWorld(o);
  if (world.depth() > kMaxEnumerationDepth) {
    throw DomainError("oracle: the map needs depth " +
                      std::to_string(world.depth()) +
                      "; exhaustive search is limited to 8x8 maps (depth 3)");
  }
  const Beta beta(o.beta);
  const NodeStatsTable stats = ComputeNodeStats(world);
  const OracleResult best = BruteForceOptimum(stats, beta);
  if (!o.out.empty()) {
    const SearchResult as_result{best.tree, best.objective, {}, 0};
    WriteAtomic(fs::path(o.out) / "tree.json",
                ExportTreeJson(as_result, stats, beta, Algorithm::kQTree));
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "candidates=%llu leaves=%zu objective_bits=%.17g\n",
                static_cast<unsigned long long>(best.candidates),
                best.tree.leaf_count(), best.objective);
  out << buf;
  return kExitOk;
}

int RunDemoMap(const Options& o, std::ostream& out) {
  WriteAtomic(o.out, EncodePgm(DemoOccupancyMap()));
  out << "wrote " << o.out << "\n";
  return kExitOk;
}

void AddMapOptions(CLI::App* cmd, Options& o) {
  cmd->add_option("--map", o.map, "Occupancy map (.pgm or .csv)")->required();
  cmd->add_option("--map-format", o.map_format,
                  "Map format; defaults to the file extension")
      ->check(CLI::IsMember({"pgm", "csv"}));
  cmd->add_option("--prior", o.prior,
                  "Prior over cells: inline JSON or a JSON file "
                  "(default {\"kind\":\"uniform\"})");
  cmd->add_option("--seed", o.seed, "Reserved; results are deterministic");
}

}  // namespace

std::vector<double> ParseBetaList(const std::string& text) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) {
      throw UsageError("--betas: '" + s + "' is not a number");
    }
    return v;
  };
  std::vector<std::string> parts;
  if (text.find(':') != std::string::npos) {
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) {
      throw UsageError("--betas: range form is lo:hi:n");
    }
    const double n = number(parts[2]);
    if (n < 1 || n != std::floor(n)) {
      throw UsageError("--betas: range count must be a positive integer");
    }
    try {
      return LogSpacedBetas(number(parts[0]), number(parts[1]),
                            static_cast<std::size_t>(n));
    } catch (const DomainError& e) {
      throw UsageError(std::string("--betas: ") + e.what());
    }
  }
  std::stringstream ss(text);
  std::vector<double> out;
  for (std::string p; std::getline(ss, p, ',');) out.push_back(number(p));
  if (out.empty()) throw UsageError("--betas: empty list");
  return out;
}

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{
      "Information-bottleneck quadtree abstractions of occupancy "
      "grids"};
  app.require_subcommand(1);
  Options o;

  auto* abstract =
      app.add_subcommand("abstract",
                         "Solve one beta; write tree.json, abstraction.ppm and "
                         "metrics.csv");
  AddMapOptions(abstract, o);
  abstract->add_option("--beta", o.beta, "Trade-off parameter (> 0)")
      ->required()
      ->check(CLI::PositiveNumber);
  abstract->add_option("--algo", o.abstract_algo, "greedy or qtree")
      ->default_val("qtree")
      ->check(CLI::IsMember({"greedy", "qtree"}));
  abstract->add_option("--out", o.out, "Output directory")->required();
  abstract->add_option("--scale", o.scale, "Pixels per finest cell")
      ->default_val(4)
      ->check(CLI::PositiveNumber);

  auto* sweep = app.add_subcommand(
      "sweep", "Solve a beta grid; write metrics.csv and per-beta trees");
  AddMapOptions(sweep, o);
  sweep->add_option("--betas", o.betas, "Comma list, or lo:hi:n log-spaced")
      ->required();
  sweep->add_option("--algo", o.sweep_algo, "greedy, qtree or both")
      ->default_val("both")
      ->check(CLI::IsMember({"greedy", "qtree", "both"}));
  sweep->add_option("--out", o.out, "Output directory")->required();
  sweep->add_option("--scale", o.scale, "Pixels per finest cell")
      ->default_val(4)
      ->check(CLI::PositiveNumber);
  sweep->add_flag("--render", o.render, "Also write one PPM per beta");

  auto* render = app.add_subcommand(
      "render", "Render a tree JSON over a map into abstraction.ppm");
  AddMapOptions(render, o);
  render->add_option("--tree", o.tree, "tree.json to render")->required();
  render->add_option("--out", o.out, "Output directory")->required();
  render->add_option("--scale", o.scale, "Pixels per finest cell")
      ->default_val(4)
      ->check(CLI::PositiveNumber);

  auto* oracle =
      app.add_subcommand("oracle", "Exhaustive optimum for maps up to 8x8");
  AddMapOptions(oracle, o);
  oracle->add_option("--beta", o.beta, "Trade-off parameter (> 0)")
      ->required()
      ->check(CLI::PositiveNumber);
  oracle->add_option("--out", o.out, "Optional output directory for tree.json");

  auto* demo = app.add_subcommand(
      "demo-map", "Write the built-in 128x128 demo occupancy map as PGM");
  demo->add_option("--out", o.out, "Output .pgm path")->required();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (abstract->parsed()) return RunAbstract(o, out);
    if (sweep->parsed()) return RunSweepCommand(o, out);
    if (render->parsed()) return RunRender(o, out);
    if (oracle->parsed()) return RunOracle(o, out);
    if (demo->parsed()) return RunDemoMap(o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitInput;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const fs::filesystem_error& e) {
    err << "file error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitUsage;
}

}  // namespace qtib::cli
