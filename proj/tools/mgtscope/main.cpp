/* Copyright 2026 The mgtscope Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// mgtscope command-line entry point.
//
// Exit codes: 0 success, 1 computation or input error, 2 usage error.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "mgtscope/version.hpp"
#include "run_context.hpp"

int main(int argc, char** argv) {
  using namespace mgt::cli;

  CLI::App app{"Detection and attribution of machine-generated text", "mgtscope"};
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", mgt::kVersionString);
  app.require_subcommand(1);

  GlobalOptions globals;
  app.add_option("--seed", globals.seed, "Seed for every random choice");
  app.add_option("--threads", globals.threads, "Worker threads, 0 for all cores");
  app.add_option("--output-dir", globals.output_dir,
                 "Directory for outputs (default: $MGTSCOPE_OUTPUT_DIR or .)");
  app.add_option("--log-level", globals.log_level, "error, warn, info or debug");

  std::vector<Command> commands;
  add_stats_commands(app, commands);
  add_detection_commands(app, commands);
  add_attribution_commands(app, commands);
  add_evaluation_commands(app, commands);
  for (auto& c : commands) c.app->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const Command* selected = nullptr;
  for (const auto& c : commands) {
    if (c.app->parsed()) selected = &c;
  }
  if (selected == nullptr) return 2;

  try {
    RunContext ctx(globals, std::vector<std::string>(argv + 1, argv + argc));
    selected->run(ctx);
    if (selected->app->get_name() != "tasks" || ctx.has_outputs()) ctx.write_manifest(*selected->app);
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "mgtscope: usage error: " << e.what() << "\n";
    return 2;
  } catch (const mgt::Error& e) {
    std::cerr << "mgtscope: error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "mgtscope: error: " << e.what() << "\n";
    return 1;
  }
}
