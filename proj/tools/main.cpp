// tdefl: command-line driver for the deflation experiments.

#include "experiments.hpp"
#include "manifest.hpp"
#include "svg.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#ifndef TDEFL_VERSION
#define TDEFL_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using namespace tdefl::cli;

namespace {

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  long long seed = -1;
  unsigned jobs = 1;
  std::string out;
  bool full = false;
  bool svg = false;
};

void add_common(CLI::App* sub, CommonOptions& o) {
  sub->add_option("--config", o.config_path, "key = value file, or a manifest.json from an earlier run");
  sub->add_option("--set", o.overrides, "override a config key (key=value), repeatable");
  sub->add_option("--seed", o.seed, "base seed; trial t uses seed + t")->check(CLI::NonNegativeNumber);
  sub->add_option("--jobs", o.jobs, "worker threads")->check(CLI::Range(1u, 256u));
  sub->add_option("--out", o.out, "output directory");
  sub->add_flag("--full", o.full, "full-scale trial counts for figure presets");
  sub->add_flag("--svg", o.svg, "also render SVG charts");
}

Config read_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  const std::string text = ss.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return config_from_manifest(text);
  return Config::parse(text, path);
}

std::vector<Series> series_of(const Table& t, const Plot& p) {
  std::vector<Series> out;
  std::vector<std::string> groups = {""};
  std::size_t gcol = 0;
  if (!p.group.empty()) {
    gcol = t.column_index(p.group);
    groups.clear();
    for (const auto& r : t.rows) {
      const std::string g = format_cell(r[gcol]);
      if (std::find(groups.begin(), groups.end(), g) == groups.end()) groups.push_back(g);
    }
  }
  const std::size_t xc = t.column_index(p.x);
  for (const std::string& y : p.ys) {
    const std::size_t yc = t.column_index(y);
    for (const std::string& g : groups) {
      Series s;
      s.label = g.empty() ? y : y + " (" + p.group + "=" + g + ")";
      s.columns = p.columns;
      for (const auto& r : t.rows) {
        if (!g.empty() && format_cell(r[gcol]) != g) continue;
        auto value = [](const Cell& c) -> double {
          if (const auto* d = std::get_if<double>(&c)) return *d;
          if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
          return NAN;
        };
        s.x.push_back(value(r[xc]));
        s.y.push_back(value(r[yc]));
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

int run(const std::string& command, const std::string& label, Config base, const CommonOptions& o) {
  const auto t0 = std::chrono::steady_clock::now();
  if (!o.config_path.empty()) base.merge(read_config_file(o.config_path));
  for (const std::string& kv : o.overrides) base.apply_override(kv);
  if (o.seed >= 0) base.set("seed", std::to_string(o.seed));
  const Config cfg = effective_config(command, base);

  const ExperimentOutput result = run_command(command, cfg, RunContext{o.jobs});

  const fs::path dir = o.out.empty() ? fs::path("out") / label : fs::path(o.out);
  fs::create_directories(dir);
  RunManifest man;
  man.command = command;
  man.config = cfg;
  man.version = TDEFL_VERSION;
  man.seeds = result.seeds;
  for (const Table& t : result.tables) {
    const std::string name = t.name + ".csv";
    const std::string csv = to_csv(t);
    write_atomic(dir / name, csv);
    man.outputs.emplace_back(name, sha256_hex(csv));
    std::cout << (dir / name).string() << "\n";
  }
  if (o.svg) {
    for (const Plot& p : result.plots) {
      Chart ch;
      ch.title = p.title;
      ch.xlabel = p.x;
      ch.ylabel = p.ys.size() == 1 ? p.ys.front() : "value";
      ch.series = series_of(result.table(p.table), p);
      if (!p.overlay_table.empty()) {
        Plot ov;
        ov.x = p.overlay_x;
        ov.ys = {p.overlay_y};
        auto extra = series_of(result.table(p.overlay_table), ov);
        extra.front().label = "limit density";
        ch.series.insert(ch.series.end(), extra.begin(), extra.end());
      }
      const std::string name = p.table + ".svg";
      const std::string svg = render_svg(ch);
      write_atomic(dir / name, svg);
      man.outputs.emplace_back(name, sha256_hex(svg));
      std::cout << (dir / name).string() << "\n";
    }
  }
  for (const std::string& n : result.notes) std::cerr << "note: " << n << "\n";
  man.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  man.write(dir);
  std::cout << (dir / "manifest.json").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orthogonalised deflation of rank-two spiked tensors: experiments and asymptotics"};
  app.set_version_flag("--version", TDEFL_VERSION);
  app.require_subcommand(1);
  app.footer("\nExit codes: 0 success, 2 configuration error, 3 numeric or convergence error.\n\n" + schema_help());

  std::map<std::string, CommonOptions> opts;
  std::map<std::string, CLI::App*> subs;
  const std::map<std::string, std::string> blurbs = {
      {"spectrum", "spectra of the contraction matrices against their limiting laws"},
      {"deflate", "multi-seed deflation runs with alignment tables"},
      {"solve", "asymptotic alignments over SNR or gamma sweeps"},
      {"estimate", "model parameter estimation from single realisations"},
      {"improve", "improved deflation runs with gamma sweep traces"},
  };
  for (const std::string& c : command_names()) {
    subs[c] = app.add_subcommand(c, blurbs.at(c));
    add_common(subs[c], opts[c]);
  }
  std::string figure_name;
  CLI::App* fig = app.add_subcommand("figure", "run a figure preset (fig1 .. fig9)");
  fig->add_option("name", figure_name, "preset name")->required();
  add_common(fig, opts["figure"]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (fig->parsed()) {
      const Preset& p = preset(figure_name);
      Config base = p.config;
      if (opts["figure"].full && p.full_seeds > 0) base.set("seeds", std::to_string(p.full_seeds));
      return run(p.command, p.name, base, opts["figure"]);
    }
    for (const std::string& c : command_names()) {
      if (subs[c]->parsed()) return run(c, c, Config{}, opts[c]);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const tdefl::ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const tdefl::Error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
