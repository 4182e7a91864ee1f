// Copyright 2026 The weakinv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "weakinv/commands.hpp"
#include "weakinv/config.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string preset;
    std::optional<std::uint64_t> seed;
    std::string out;
    bool no_timestamp = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "Scenario config file (key = value lines)");
    cmd->add_option("--preset", args.preset, "Built-in scenario name");
    cmd->add_option("--seed", args.seed, "Base seed override");
    cmd->add_option("--out", args.out, "Report CSV path override");
    cmd->add_flag("--no-timestamp", args.no_timestamp,
                  "Suppress the timestamp header line for byte-reproducible reports");
}

int execute(const std::string& kind, const CommonArgs& args) {
    try {
        weakinv::ConfigMap cfg;
        if (!args.preset.empty()) cfg = weakinv::preset_config(args.preset);
        if (!args.config_path.empty()) {
            cfg.merge_override(weakinv::ConfigMap::from_file(args.config_path));
        }
        if (args.seed) cfg.set("seed", std::to_string(*args.seed));
        if (!args.out.empty()) cfg.set("out", args.out);
        if (args.no_timestamp) cfg.set("timestamp", "false");

        if (!cfg.has("kind")) {
            cfg.set("kind", kind);
        } else if (cfg.entries().at("kind") != kind) {
            std::cerr << "config error: scenario kind '" << cfg.entries().at("kind")
                      << "' does not match subcommand '" << kind << "'\n";
            return weakinv::kExitConfigError;
        }
        return weakinv::run_scenario_catching(std::move(cfg));
    } catch (const weakinv::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return weakinv::kExitConfigError;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Open-system dynamics workbench: Kraus channels, entropies, weak-invariant "
        "fluctuations and the Lindblad-type master equation"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* kind;
        const char* help;
    };
    const Sub subs[] = {
        {"channel-audit", "channel-audit",
         "Variance growth and expectation conservation across random channel chains"},
        {"entropy-audit", "unital-entropy-audit",
         "Entropy monotonicity under unital maps, with a non-unital contrast search"},
        {"gkls", "gkls-run", "Integrate a Lindblad-type model and check its trajectory"},
        {"oscillator", "oscillator-run",
         "Time-dependent oscillator cross-validation on a truncated Fock ladder"},
        {"kraus-study", "kraus-step-study",
         "Scaling study of the short-time Kraus factorization"},
    };

    CommonArgs args[std::size(subs)];
    CLI::App* cmds[std::size(subs)];
    for (std::size_t i = 0; i < std::size(subs); ++i) {
        cmds[i] = app.add_subcommand(subs[i].name, subs[i].help);
        add_common(cmds[i], args[i]);
    }

    CLI11_PARSE(app, argc, argv);

    for (std::size_t i = 0; i < std::size(subs); ++i) {
        if (cmds[i]->parsed()) return execute(subs[i].kind, args[i]);
    }
    return weakinv::kExitConfigError;
}
