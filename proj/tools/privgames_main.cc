//
// Copyright 2026 The privgames Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/strings/str_cat.h"
#include "cli/cli.h"
#include "privgames/params.h"

namespace {

using privgames::Params;
namespace cli = privgames::cli;

int Run(const std::string& path, const std::vector<std::string>& sets,
        const std::optional<uint64_t>& seed, const std::optional<int64_t>& trials,
        const std::optional<std::string>& out, const std::optional<uint64_t>& workers) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: config: cannot read '" << path << "'\n";
    return cli::kExitConfigError;
  }
  std::stringstream text;
  text << in.rdbuf();
  absl::StatusOr<Params> raw = Params::Parse(text.str());
  if (!raw.ok()) {
    std::cerr << "error: " << raw.status().message() << "\n";
    return cli::kExitConfigError;
  }
  for (const std::string& kv : sets) {
    const size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "error: --set expects key=value, got '" << kv << "'\n";
      return cli::kExitConfigError;
    }
    raw->Set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (seed) raw->Set("master_seed", absl::StrCat(*seed));
  if (trials) raw->Set("trials", absl::StrCat(*trials));
  if (out) raw->Set("out", *out);
  if (workers) raw->Set("workers", absl::StrCat(*workers));
  absl::StatusOr<int> default_workers = cli::DefaultWorkers();
  if (!default_workers.ok()) {
    std::cerr << "error: " << default_workers.status().message() << "\n";
    return cli::kExitConfigError;
  }
  absl::StatusOr<cli::RunConfig> config = cli::ParseRunConfig(*raw, *default_workers);
  if (!config.ok()) {
    std::cerr << "error: " << config.status().message() << "\n";
    return cli::kExitConfigError;
  }
  return cli::RunConfigMain(*config, std::cout, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Privacy-game experiment runner"};
  app.require_subcommand(1);

  CLI::App* run = app.add_subcommand("run", "run an experiment config");
  std::string config_path;
  std::vector<std::string> sets;
  std::optional<uint64_t> seed;
  std::optional<int64_t> trials;
  std::optional<std::string> out;
  std::optional<uint64_t> workers;
  run->add_option("config", config_path, "key=value config file")->required();
  run->add_option("--seed", seed, "override master_seed");
  run->add_option("--trials", trials, "override trials");
  run->add_option("--out", out, "override the report path");
  run->add_option("--workers", workers, "override workers");
  run->add_option("--set", sets, "override any key: --set key=value");

  CLI::App* list = app.add_subcommand("list", "list experiment, adversary, trainer and game ids");
  CLI::App* describe = app.add_subcommand("describe", "show an experiment's parameters");
  std::string id;
  describe->add_option("id", id, "experiment id")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitConfigError;
  }

  if (*run) return Run(config_path, sets, seed, trials, out, workers);
  if (*list) {
    std::cout << cli::ListText();
    return 0;
  }
  absl::StatusOr<std::string> text = cli::DescribeText(id);
  if (!text.ok()) {
    std::cerr << "error: " << text.status().message() << "\n";
    return cli::kExitConfigError;
  }
  std::cout << *text;
  return 0;
}
