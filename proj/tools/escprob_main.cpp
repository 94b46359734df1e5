#include "escprob/errors.hpp"
#include "escprob/runner.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace {

escprob::Rational parse_eps(const std::string& text) {
    return escprob::rational_from_decimal(text);
}

std::vector<int> parse_sizes(const std::string& text) {
    std::vector<int> sizes;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        sizes.push_back(std::stoi(tok));
    }
    return sizes;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"escape probabilities of random walks on weighted directed graphs"};
    app.require_subcommand(1);

    std::string graph_path, method = "recinvert", eps_text = "1e-6", format = "tsv";
    int t = -1, p = -1;
    std::uint64_t trials = 100000, seed = 1;
    long long h_override = -1;

    CLI::App* run_cmd = app.add_subcommand("run", "compute escape probabilities for every start vertex");
    run_cmd->add_option("--graph", graph_path, "graph file (header 'directed|undirected n', then 'u v w' lines)")
        ->required();
    run_cmd->add_option("--t", t, "target vertex (absorbs with probability 1)")->required();
    run_cmd->add_option("--p", p, "sink vertex (absorbs with probability 0)")->required();
    run_cmd->add_option("--eps", eps_text, "multiplicative accuracy target in (0,1), default 1e-6");
    run_cmd->add_option("--method", method, "recinvert | powerseries | oracle | simulate");
    run_cmd->add_option("--h-override", h_override, "hitting-time bound override for powerseries");
    run_cmd->add_option("--trials", trials, "simulate: walks per start vertex");
    run_cmd->add_option("--seed", seed, "simulate: RNG seed");
    run_cmd->add_option("--format", format, "tsv | jsonl");

    std::string bench_method = "recinvert", bench_eps = "1e-3", bench_sizes = "16,32,64",
                bench_format = "tsv";
    CLI::App* bench_cmd = app.add_subcommand("bench", "count arithmetic ops over a size sweep");
    bench_cmd->add_option("--method", bench_method, "recinvert | powerseries");
    bench_cmd->add_option("--eps", bench_eps, "accuracy target");
    bench_cmd->add_option("--sizes", bench_sizes, "comma-separated graph sizes (3 = path, >=4 = hub-path)");
    bench_cmd->add_option("--format", bench_format, "tsv | jsonl");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            escprob::RunConfig cfg;
            cfg.graph_path = graph_path;
            cfg.t = t;
            cfg.p = p;
            cfg.eps = parse_eps(eps_text);
            cfg.method = escprob::method_from_name(method);
            if (h_override >= 0) cfg.h_override = static_cast<std::uint64_t>(h_override);
            cfg.trials = trials;
            cfg.seed = seed;
            cfg.format = format == "jsonl" ? escprob::OutputFormat::jsonl : escprob::OutputFormat::tsv;
            if (format != "tsv" && format != "jsonl") {
                std::cerr << "error: unknown format '" << format << "'\n";
                return escprob::kExitInput;
            }
            return escprob::run(cfg, std::cout, std::cerr);
        }
        escprob::BenchConfig cfg;
        cfg.method = escprob::method_from_name(bench_method);
        cfg.eps = parse_eps(bench_eps);
        cfg.sizes = parse_sizes(bench_sizes);
        cfg.format = bench_format == "jsonl" ? escprob::OutputFormat::jsonl : escprob::OutputFormat::tsv;
        return escprob::bench(cfg, std::cout, std::cerr);
    } catch (const escprob::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return escprob::kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return escprob::kExitInput;
    }
}
