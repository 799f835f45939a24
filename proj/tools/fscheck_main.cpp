#include "fscheck/commands.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"fscheck - infinitesimal lifting properties of formal-scheme presentations"};
    app.require_subcommand(1);

    std::string parse_file;
    auto *parse_cmd = app.add_subcommand("parse", "parse a workspace file and print a summary");
    parse_cmd->add_option("file", parse_file, "workspace file")->required();

    std::string run_file, command, json_out;
    fscheck::RunOptions opts;
    bool seed_given = false;
    auto *run_cmd = app.add_subcommand("run", "run a command against a workspace file");
    run_cmd->add_option("file", run_file, "workspace file")->required();
    run_cmd->add_option("--cmd", command, "command to execute")->required();
    run_cmd->add_option("--json", json_out, "write the report to this file");
    run_cmd->add_option("--depth", opts.depth, "power/probe search depth");
    run_cmd->add_option("--levels", opts.levels, "truncation levels");
    run_cmd->add_option("--tdeg", opts.tdeg, "T-block degree bound");
    run_cmd->add_option("--perturb", opts.perturb, "seeded perturbation reruns");
    auto *seed_opt = run_cmd->add_option("--seed", opts.seed, "perturbation seed");
    run_cmd->add_flag("--timing", opts.timing, "report wall-clock timing (breaks byte determinism)");
    seed_given = false;

    CLI11_PARSE(app, argc, argv);

    try {
        if (*parse_cmd) {
            std::string src = read_file(parse_file);
            try {
                auto ws = fscheck::dsl::parse(src);
                std::cout << fscheck::workspace_summary(ws).dump(2) << "\n";
                return 0;
            } catch (const fscheck::dsl::ParseError &e) {
                nlohmann::json j;
                j["diagnostics"] = e.str();
                std::cout << j.dump(2) << "\n";
                return 2;
            }
        }
        if (*run_cmd) {
            seed_given = seed_opt->count() > 0;
            if (!seed_given) {
                if (const char *env = std::getenv("FSCHECK_SEED")) opts.seed = std::strtoull(env, nullptr, 10);
            }
            std::string src = read_file(run_file);
            fscheck::RunResult res = fscheck::run_source(src, command, opts);
            std::string text = res.report.dump(2);
            std::cout << text << "\n";
            if (!json_out.empty()) {
                std::ofstream out(json_out);
                out << text << "\n";
            }
            return res.exit_code;
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
