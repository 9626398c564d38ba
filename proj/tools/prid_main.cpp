/*
 * Copyright 2026 The prid authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command line front end. Everything behind the subcommands goes through
// the shared-library C API (prid/prid.h); this file only resolves
// configuration and formats reports.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "prid/prid.h"

namespace {

using nlohmann::json;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// key=value lines or a JSON object; values parse as JSON when possible.
json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open config file " << path << "\n";
    std::exit(kExitRuntime);
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();

  json parsed = json::parse(text, nullptr, false);
  if (!parsed.is_discarded() && parsed.is_object()) return parsed;

  json config = json::object();
  std::istringstream lines(text);
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: " << path << " line " << line_no
                << ": expected key=value\n";
      std::exit(kExitUsage);
    }
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    json v = json::parse(value, nullptr, false);
    config[key] = v.is_discarded() ? json(value) : v;
  }
  return config;
}

int run(const std::string& command, const json& config, json* report_out) {
  char* report_cstr = nullptr;
  prid_status status = prid_run(command.c_str(), config.dump().c_str(),
                                &report_cstr);
  if (status != PRID_OK) {
    std::cerr << "error: " << prid_last_error() << "\n";
    return status == PRID_ERR_VALIDATION ? kExitUsage : kExitRuntime;
  }
  *report_out = json::parse(report_cstr);
  prid_string_free(report_cstr);
  return 0;
}

struct CommandContext {
  json config = json::object();
  std::string config_file;

  void merge_config_file() {
    if (config_file.empty()) return;
    json file = load_config_file(config_file);
    // flags win: file values only fill keys not set by flags
    for (auto& [key, value] : file.items())
      if (!config.contains(key)) config[key] = value;
  }

  // PRID_SEED overrides the config-file seed; an explicit --seed flag wins.
  void apply_env_seed(bool seed_flag_given) {
    const char* env = std::getenv("PRID_SEED");
    if (!env || seed_flag_given) return;
    json v = json::parse(env, nullptr, false);
    if (!v.is_number()) {
      std::cerr << "error: PRID_SEED must be an integer\n";
      std::exit(kExitUsage);
    }
    config["seed"] = v;
  }
};

void print_eval_table(const json& report) {
  std::cout << report.at("table").get<std::string>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prid - partial person re-identification toolkit"};
  app.require_subcommand(1);

  // Per-subcommand contexts; flags write straight into the config object.
  std::vector<std::unique_ptr<CommandContext>> contexts;
  std::map<std::string, CommandContext*> context_of;

  auto add_command = [&](const std::string& name, const std::string& desc) {
    CLI::App* sub = app.add_subcommand(name, desc);
    contexts.push_back(std::make_unique<CommandContext>());
    CommandContext* ctx = contexts.back().get();
    context_of[name] = ctx;
    sub->add_option("--config", ctx->config_file,
                    "config file (key=value lines or JSON object)");
    return std::make_pair(sub, ctx);
  };

  auto opt_str = [](CLI::App* sub, CommandContext* ctx, const char* flag,
                    const char* key, const char* desc) {
    sub->add_option_function<std::string>(
        flag, [ctx, key](const std::string& v) { ctx->config[key] = v; }, desc);
  };
  auto opt_num = [](CLI::App* sub, CommandContext* ctx, const char* flag,
                    const char* key, const char* desc) {
    sub->add_option_function<double>(
        flag, [ctx, key](double v) { ctx->config[key] = v; }, desc);
  };
  auto opt_int = [](CLI::App* sub, CommandContext* ctx, const char* flag,
                    const char* key, const char* desc) {
    sub->add_option_function<std::int64_t>(
        flag, [ctx, key](std::int64_t v) { ctx->config[key] = v; }, desc);
  };
  auto opt_flag = [](CLI::App* sub, CommandContext* ctx, const char* flag,
                     const char* key, const char* desc) {
    sub->add_flag_function(
        flag, [ctx, key](std::int64_t n) { ctx->config[key] = n > 0; }, desc);
  };

  // gen-crops
  {
    auto [sub, ctx] = add_command(
        "gen-crops", "synthesize paired partial-view crops from full frames");
    opt_str(sub, ctx, "--input-manifest", "input_manifest",
            "manifest of full frames (jsonl)");
    opt_num(sub, ctx, "--s", "s", "crop area fraction in (0,1]");
    opt_num(sub, ctx, "--o-min", "o_min", "minimum pair overlap in [0,1]");
    opt_int(sub, ctx, "--seed", "seed", "RNG seed");
    opt_str(sub, ctx, "--out", "out", "output directory");
  }
  // align
  {
    auto [sub, ctx] = add_command(
        "align", "align frames into the joint-derived reference frame");
    opt_str(sub, ctx, "--input-manifest", "input_manifest", "frame manifest");
    opt_str(sub, ctx, "--joints", "joints", "joint records (jsonl)");
    opt_str(sub, ctx, "--ref-joints", "ref_joints",
            "training joints for the reference frame (default: --joints)");
    opt_int(sub, ctx, "--ref-width", "ref_width", "reference frame width");
    opt_int(sub, ctx, "--ref-height", "ref_height", "reference frame height");
    opt_num(sub, ctx, "--n-sigma", "n_sigma", "confidence filter width");
    sub->add_option_function<std::vector<std::int64_t>>(
        "--ref-camera",
        [ctx = ctx](const std::vector<std::int64_t>& v) {
          ctx->config["ref_cameras"] = v;
        },
        "restrict reference statistics to these cameras");
    opt_int(sub, ctx, "--threads", "threads", "worker threads");
    opt_str(sub, ctx, "--out", "out", "output directory");
  }
  // hallucinate
  {
    auto [sub, ctx] = add_command(
        "hallucinate", "fill padded areas (baseline or tiny-trained mode)");
    opt_str(sub, ctx, "--input-manifest", "input_manifest",
            "aligned manifest with masks");
    opt_str(sub, ctx, "--mode", "mode", "baseline | tiny-trained");
    opt_int(sub, ctx, "--steps", "steps", "training steps");
    opt_num(sub, ctx, "--lr", "lr", "learning rate");
    opt_num(sub, ctx, "--lambda", "lambda", "cycle loss weight");
    opt_int(sub, ctx, "--batch-size", "batch_size", "minibatch size");
    opt_int(sub, ctx, "--hidden", "hidden", "hidden units of the tiny maps");
    opt_int(sub, ctx, "--seed", "seed", "RNG seed");
    opt_int(sub, ctx, "--threads", "threads", "worker threads");
    opt_str(sub, ctx, "--out", "out", "output directory");
  }
  // embed
  {
    auto [sub, ctx] =
        add_command("embed", "extract stride features into a feature file");
    opt_str(sub, ctx, "--aligned-manifest", "aligned_manifest",
            "aligned frames manifest");
    opt_str(sub, ctx, "--hallucinated-manifest", "hallucinated_manifest",
            "hallucinated frames manifest (enables the two-source format)");
    opt_int(sub, ctx, "--n-strides", "n_strides", "horizontal strides");
    opt_int(sub, ctx, "--bins", "bins", "histogram bins per channel");
    opt_int(sub, ctx, "--dim", "dim",
            "per-stride target dimensionality (0 = raw histogram)");
    opt_int(sub, ctx, "--projection-seed", "projection_seed",
            "seed of the fixed projection");
    opt_flag(sub, ctx, "--normalize", "normalize",
             "L2-normalize per-stride vectors");
    opt_int(sub, ctx, "--threads", "threads", "worker threads");
    opt_str(sub, ctx, "--out", "out", "output feature file");
  }
  // eval
  {
    auto [sub, ctx] = add_command("eval", "rank queries and report CMC / mAP");
    opt_str(sub, ctx, "--features", "features", "feature file");
    opt_str(sub, ctx, "--protocol", "protocol",
            "crop-cuhk03 | partial-reid-single-shot | custom");
    opt_int(sub, ctx, "--query-camera", "query_camera", "probe camera index");
    opt_int(sub, ctx, "--gallery-camera", "gallery_camera",
            "gallery camera (-1 all, -2 all but query camera)");
    opt_flag(sub, ctx, "--exclude-same-camera,!--no-exclude-same-camera",
             "exclude_same_camera", "drop same-camera same-identity items");
    opt_flag(sub, ctx, "--single-shot", "single_shot",
             "resample one gallery image per identity per trial");
    opt_int(sub, ctx, "--trials", "trials", "single-shot trials");
    opt_int(sub, ctx, "--seed", "seed", "RNG seed");
    opt_int(sub, ctx, "--threads", "threads", "worker threads");
    opt_str(sub, ctx, "--out", "out", "report JSON path");
  }
  // make-toy
  {
    auto [sub, ctx] = add_command("make-toy", "write the bundled toy dataset");
    opt_str(sub, ctx, "--out", "out", "output directory");
  }
  // demo
  {
    auto [sub, ctx] = add_command(
        "demo", "run the full chain on the toy set (aligned vs baseline)");
    opt_str(sub, ctx, "--out", "out", "output directory");
    opt_int(sub, ctx, "--seed", "seed", "RNG seed");
    opt_num(sub, ctx, "--s", "s", "crop area fraction for the crops stage");
    opt_num(sub, ctx, "--o-min", "o_min", "minimum overlap for the crops stage");
    opt_int(sub, ctx, "--trials", "trials", "evaluation trials");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  CommandContext* ctx = context_of.at(name);

  bool seed_given = ctx->config.contains("seed");
  ctx->merge_config_file();
  ctx->apply_env_seed(seed_given);

  json report;
  if (int code = run(name, ctx->config, &report)) return code;

  if (name == "eval") {
    print_eval_table(report);
  } else if (name == "demo") {
    std::cout << "crops: pairs=" << report.at("crops").at("pairs")
              << " min_overlap=" << report.at("crops").at("min_overlap")
              << "\n";
    std::cout << "aligned pipeline:\n";
    print_eval_table(report.at("aligned"));
    std::cout << "resize-only baseline:\n";
    print_eval_table(report.at("baseline"));
    std::cout << "alignment benefit: r1 " << report.at("aligned_r1")
              << " vs " << report.at("baseline_r1") << "\n";
  } else if (name == "gen-crops") {
    std::cout << "records=" << report.at("records")
              << " pairs=" << report.at("pairs")
              << " skipped_identities=" << report.at("identities_skipped")
              << " min_overlap=" << report.at("min_overlap")
              << " mean_overlap=" << report.at("mean_overlap") << "\n";
  } else {
    std::cout << report.dump(2) << "\n";
  }
  return 0;
}
