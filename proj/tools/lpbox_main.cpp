#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lpbox/alist.hpp"
#include "lpbox/harness.hpp"
#include "lpbox/version.hpp"

namespace {

// Exit-code contract: 0 success/valid, 1 decode-invalid, 2 usage/config error,
// 3 I/O error.
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const lpbox::AlistParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<std::string> parts;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ':')) parts.push_back(token);
    const auto to_real = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad number '" + s + "' in grid '" + text + "'");
        }
        if (used != s.size())
            throw std::invalid_argument("bad number '" + s + "' in grid '" + text + "'");
        return v;
    };
    if (parts.size() == 1) return {to_real(parts[0])};
    if (parts.size() != 3)
        throw std::invalid_argument("grid '" + text + "' must be a single value or first:step:last");
    const double first = to_real(parts[0]);
    const double step = to_real(parts[1]);
    const double last = to_real(parts[2]);
    if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
    if (last < first - 1e-12) throw std::invalid_argument("grid last must not precede first");
    std::vector<double> out;
    const auto count = static_cast<long long>(std::floor((last - first) / step + 1e-9)) + 1;
    out.reserve(static_cast<std::size_t>(count));
    for (long long i = 0; i < count; ++i) out.push_back(first + static_cast<double>(i) * step);
    return out;
}

Eigen::VectorXd parse_llrs(const std::string& text, int expected) {
    std::istringstream in(text);
    std::vector<double> values;
    double v = 0.0;
    while (in >> v) values.push_back(v);
    std::string rest;
    if (in.fail() && !in.eof() && in >> rest)
        throw std::invalid_argument("bad token in llr input");
    in.clear();
    if (in >> rest) throw std::invalid_argument("bad token '" + rest + "' in llr input");
    if (static_cast<int>(values.size()) != expected)
        throw std::invalid_argument("llr input has " + std::to_string(values.size()) +
                                    " values, code needs " + std::to_string(expected));
    Eigen::VectorXd gamma(expected);
    for (int i = 0; i < expected; ++i) gamma[i] = values[static_cast<std::size_t>(i)];
    return gamma;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (!in.good() && !in.eof()) throw std::runtime_error("read failure on '" + path + "'");
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out.good()) throw std::runtime_error("write failure on '" + path + "'");
}

std::string quote_join(int argc, char** argv) {
    std::string joined;
    for (int i = 0; i < argc; ++i) {
        if (i) joined += ' ';
        const std::string a = argv[i];
        if (a.find(' ') != std::string::npos)
            joined += '\'' + a + '\'';
        else
            joined += a;
    }
    return joined;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Expands `--config FILE` into `--key value` tokens inserted right after the
// subcommand name. Explicit flags appear later on the line, so they win under
// the TakeLast option policy. Lines are `key=value`; blanks and # comments
// are skipped.
std::vector<std::string> expand_config_tokens(std::vector<std::string> tokens) {
    if (tokens.empty() || tokens.front().empty() || tokens.front()[0] == '-') return tokens;
    std::vector<std::string> injected;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        std::string path;
        if (tokens[i] == "--config") {
            if (i + 1 >= tokens.size())
                throw std::invalid_argument("--config expects a file path");
            path = tokens[i + 1];
        } else if (tokens[i].rfind("--config=", 0) == 0) {
            path = tokens[i].substr(9);
        } else {
            continue;
        }
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot read config file '" + path + "'");
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::string stripped = trim(line);
            if (stripped.empty() || stripped[0] == '#') continue;
            const auto eq = stripped.find('=');
            const std::string where = path + ":" + std::to_string(lineno);
            if (eq == std::string::npos)
                throw std::invalid_argument("config " + where + ": expected key=value");
            const std::string key = trim(stripped.substr(0, eq));
            const std::string value = trim(stripped.substr(eq + 1));
            if (key.empty()) throw std::invalid_argument("config " + where + ": empty key");
            if (key == "config")
                throw std::invalid_argument("config " + where + ": nested config not allowed");
            injected.push_back("--" + key);
            injected.push_back(value);
        }
    }
    tokens.insert(tokens.begin() + 1, injected.begin(), injected.end());
    return tokens;
}

// Decoder id + parameter flags shared by decode and simulate. Flags not given
// keep the per-decoder defaults.
struct DecoderOptions {
    std::string name;
    double alpha = 1.0;
    double mu1 = 50.0;
    double mu2 = 50.0;
    double epsilon = 1e-5;
    int max_iters = 1000;
    double normalization = 0.75;
    double llr_clip = 30.0;
    CLI::Option* o_alpha = nullptr;
    CLI::Option* o_mu1 = nullptr;
    CLI::Option* o_mu2 = nullptr;
    CLI::Option* o_epsilon = nullptr;
    CLI::Option* o_max_iters = nullptr;
    CLI::Option* o_normalization = nullptr;
    CLI::Option* o_llr_clip = nullptr;

    void attach(CLI::App* sub) {
        sub->add_option("--decoder", name, "decoder: l2box, penalized, bp, minsum, normminsum")
            ->required()
            ->check(CLI::IsMember({"l2box", "penalized", "bp", "minsum", "normminsum"}));
        o_alpha = sub->add_option("--alpha", alpha, "penalized decoder: penalty weight");
        o_mu1 = sub->add_option("--mu1", mu1, "l2box mu1 (doubles as the penalized decoder's mu)");
        o_mu2 = sub->add_option("--mu2", mu2, "l2box mu2");
        o_epsilon = sub->add_option("--epsilon", epsilon, "ADMM stopping tolerance");
        o_max_iters = sub->add_option("--max-iters", max_iters, "iteration cap");
        o_normalization =
            sub->add_option("--normalization", normalization, "normminsum scale factor");
        o_llr_clip = sub->add_option("--llr-clip", llr_clip, "message-passing clip bound");
    }

    lpbox::DecoderSpec build() const {
        lpbox::DecoderSpec d;
        d.kind = lpbox::decoder_kind_from_string(name);
        if (o_alpha->count()) d.penalized.alpha = alpha;
        if (o_mu1->count()) {
            d.l2box.mu1 = mu1;
            d.penalized.mu = mu1;
        }
        if (o_mu2->count()) d.l2box.mu2 = mu2;
        if (o_epsilon->count()) {
            d.l2box.epsilon = epsilon;
            d.penalized.epsilon = epsilon;
        }
        if (o_max_iters->count()) {
            d.l2box.max_iters = max_iters;
            d.penalized.max_iters = max_iters;
            d.mp.max_iters = max_iters;
        }
        if (o_normalization->count()) d.mp.normalization = normalization;
        if (o_llr_clip->count()) d.mp.llr_clip = llr_clip;
        return d;
    }
};

std::string word_to_string(const lpbox::BinaryWord& w) {
    std::string s;
    s.reserve(w.size());
    for (auto b : w) s += b ? '1' : '0';
    return s;
}

int run_info(const std::string& code_path) {
    const lpbox::ParityCheckMatrix h = lpbox::load_alist_file(code_path);
    const int rank = lpbox::gf2_rank(h);
    const int k = h.n_vars() - rank;
    std::cout << "code: " << code_path << "\n";
    std::cout << "N=" << h.n_vars() << " M=" << h.n_checks() << " rank=" << rank << " k=" << k
              << " rate=" << (h.n_vars() > 0 ? static_cast<double>(k) / h.n_vars() : 0.0) << "\n";
    std::cout << "edges=" << h.n_edges() << " check_degree=[";
    int min_cd = h.n_checks() > 0 ? h.check_degree(0) : 0;
    for (int j = 0; j < h.n_checks(); ++j) min_cd = std::min(min_cd, h.check_degree(j));
    std::cout << min_cd << "," << h.max_check_degree() << "] var_degree=["
              << (h.n_vars() > 0 ? h.min_var_degree() : 0) << "," << h.max_var_degree() << "]\n";
    const auto unchecked = h.unchecked_vars();
    std::cout << "unchecked_variables=" << unchecked.size() << "\n";
    return 0;
}

struct DecodeArgs {
    std::string code_path;
    std::string llr_path;
    std::string llr_inline;
    std::string format = "text";
    std::string out;
    std::string trace;
    DecoderOptions decoder;
};

int run_decode(const DecodeArgs& args) {
    if (args.llr_path.empty() == args.llr_inline.empty())
        throw std::invalid_argument("provide exactly one of --llr and --llr-inline");
    const lpbox::ParityCheckMatrix h = lpbox::load_alist_file(args.code_path);
    const std::string llr_text =
        args.llr_path.empty() ? args.llr_inline : read_text_file(args.llr_path);
    const Eigen::VectorXd gamma = parse_llrs(llr_text, h.n_vars());
    const lpbox::DecoderSpec spec = args.decoder.build();

    lpbox::DecodeResult res;
    if (!args.trace.empty()) {
        if (spec.kind != lpbox::DecoderKind::l2box && spec.kind != lpbox::DecoderKind::penalized)
            throw std::invalid_argument("--trace requires an ADMM decoder");
        std::ofstream tf(args.trace, std::ios::binary);
        if (!tf) throw std::runtime_error("cannot open '" + args.trace + "' for writing");
        const auto cb = lpbox::make_csv_trace(tf, gamma);
        res = spec.kind == lpbox::DecoderKind::l2box
                  ? lpbox::l2box_decode(h, gamma, spec.l2box, std::nullopt, cb)
                  : lpbox::penalized_decode(h, gamma, spec.penalized, cb);
        tf.flush();
        if (!tf.good()) throw std::runtime_error("write failure on '" + args.trace + "'");
    } else {
        res = lpbox::decode_with(spec, h, gamma);
    }

    std::string report;
    if (args.format == "json") {
        nlohmann::json j{
            {"code", args.code_path},
            {"decoder", args.decoder.name},
            {"word", word_to_string(res.word)},
            {"valid", res.is_valid_codeword},
            {"iterations", res.iterations},
            {"termination", lpbox::to_string(res.termination)},
            {"objective", res.objective},
            {"wall_time_s", res.wall_time},
            {"version", lpbox::kVersion},
        };
        report = j.dump(2) + "\n";
    } else {
        std::ostringstream os;
        os << "word: " << word_to_string(res.word) << "\n"
           << "valid: " << (res.is_valid_codeword ? "true" : "false") << "\n"
           << "iterations: " << res.iterations << "\n"
           << "termination: " << lpbox::to_string(res.termination) << "\n"
           << "objective: " << res.objective << "\n"
           << "wall_time_s: " << res.wall_time << "\n";
        report = os.str();
    }
    std::cout << report;
    if (!args.out.empty()) write_text_file(args.out, report);
    return res.is_valid_codeword ? 0 : 1;
}

struct SimulateArgs {
    std::string code_path;
    std::string snr;
    std::string sweep = "snr";
    std::string grid;
    std::string grid2;
    long long errors = 200;
    long long trials = 10'000'000;
    std::uint64_t seed = 1;
    std::string transmit = "zero";
    int threads = 1;
    std::string format = "csv";
    std::string out;
    DecoderOptions decoder;
    std::string invocation;
};

void print_summary(const std::vector<lpbox::SweepRecord>& records) {
    std::printf("%-11s %8s %7s %7s %7s %9s %7s %12s %10s\n", "decoder", "snr_db", "alpha", "mu1",
                "mu2", "trials", "errors", "wer", "avg_iters");
    const auto opt = [](const std::optional<double>& v) {
        char buf[32];
        if (!v) return std::string("-");
        std::snprintf(buf, sizeof buf, "%.4g", *v);
        return std::string(buf);
    };
    for (const auto& r : records) {
        if (!r.error.empty()) {
            std::printf("%-11s %8.4g %7s %7s %7s  failed: %s\n", r.decoder.c_str(), r.snr_db,
                        opt(r.alpha).c_str(), opt(r.mu1).c_str(), opt(r.mu2).c_str(),
                        r.error.c_str());
            continue;
        }
        std::printf("%-11s %8.4g %7s %7s %7s %9lld %7lld %12.6g %10.6g\n", r.decoder.c_str(),
                    r.snr_db, opt(r.alpha).c_str(), opt(r.mu1).c_str(), opt(r.mu2).c_str(),
                    r.trials, r.word_errors, r.wer, r.avg_iterations);
    }
}

int run_simulate(const SimulateArgs& args) {
    const lpbox::CodeContext ctx = lpbox::make_code_context(
        std::filesystem::path(args.code_path).stem().string(),
        lpbox::load_alist_file(args.code_path));

    lpbox::ExperimentSpec spec;
    spec.decoder = args.decoder.build();
    spec.snr_points = parse_grid(args.snr);
    spec.stop_word_errors = args.errors;
    spec.max_trials = args.trials;
    spec.transmit_mode = args.transmit == "zero" ? lpbox::TransmitMode::all_zero
                                                 : lpbox::TransmitMode::random_codeword;
    spec.master_seed = args.seed;
    spec.threads = args.threads;

    std::vector<lpbox::SweepRecord> records;
    if (args.sweep == "snr") {
        records = lpbox::sweep_snr(ctx, spec);
    } else if (args.sweep == "alpha") {
        if (args.grid.empty()) throw std::invalid_argument("--sweep alpha needs --grid");
        records = lpbox::sweep_alpha(ctx, spec, parse_grid(args.grid));
    } else {
        if (args.grid.empty()) throw std::invalid_argument("--sweep mu needs --grid");
        const auto mu1_grid = parse_grid(args.grid);
        const auto mu2_grid = args.grid2.empty() ? mu1_grid : parse_grid(args.grid2);
        records = lpbox::sweep_mu(ctx, spec, mu1_grid, mu2_grid);
    }

    std::vector<std::pair<std::string, std::string>> extra{{"sweep", args.sweep},
                                                           {"invocation", args.invocation}};
    if (!args.grid.empty()) extra.emplace_back("grid", args.grid);
    if (!args.grid2.empty()) extra.emplace_back("grid2", args.grid2);

    const std::string payload = args.format == "csv" ? lpbox::to_csv(records)
                                                     : lpbox::to_json(ctx, spec, records, extra);
    if (args.out.empty()) {
        std::cout << payload;
    } else {
        write_text_file(args.out, payload);
        if (args.format == "csv")
            write_text_file(args.out + ".meta.json", lpbox::to_json(ctx, spec, records, extra));
        print_summary(records);
        std::cout << "wrote " << args.out << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LDPC decoding workbench: l2-box ADMM, penalized ADMM-LP and message-passing "
                 "decoders over BPSK/AWGN"};
    app.require_subcommand(1);
    app.set_version_flag("--version", lpbox::kVersion);

    std::string info_code;
    std::string config_path;
    auto* info = app.add_subcommand("info", "describe a code: dimensions, rank, degree profile");
    info->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    info->add_option("--code", info_code, "alist file")->required()->check(CLI::ExistingFile);
    info->add_option("--config", config_path, "flat key=value config file; flags win");

    DecodeArgs dec;
    auto* decode = app.add_subcommand("decode", "decode one LLR vector");
    decode->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    decode->add_option("--code", dec.code_path, "alist file")
        ->required()
        ->check(CLI::ExistingFile);
    decode->add_option("--llr", dec.llr_path, "file of N whitespace-separated LLRs")
        ->check(CLI::ExistingFile);
    decode->add_option("--llr-inline", dec.llr_inline, "inline LLR list");
    dec.decoder.attach(decode);
    decode->add_option("--format", dec.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
    decode->add_option("--out", dec.out, "also write the report here");
    decode->add_option("--trace", dec.trace, "per-iteration CSV trace (ADMM decoders)");
    decode->add_option("--config", config_path, "flat key=value config file; flags win");

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo WER/BER sweeps");
    simulate->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    simulate->add_option("--code", sim.code_path, "alist file")
        ->required()
        ->check(CLI::ExistingFile);
    sim.decoder.attach(simulate);
    simulate->add_option("--snr", sim.snr, "Eb/N0 dB point or first:step:last grid")->required();
    simulate->add_option("--sweep", sim.sweep, "sweep kind")
        ->check(CLI::IsMember({"snr", "alpha", "mu"}));
    simulate->add_option("--grid", sim.grid, "alpha grid, or mu1 grid for --sweep mu");
    simulate->add_option("--grid2", sim.grid2, "mu2 grid (defaults to --grid)");
    simulate->add_option("--errors", sim.errors, "stop after this many word errors");
    simulate->add_option("--trials", sim.trials, "trial cap per point");
    simulate->add_option("--seed", sim.seed, "master seed");
    simulate->add_option("--transmit", sim.transmit, "zero or random")
        ->check(CLI::IsMember({"zero", "random"}));
    simulate->add_option("--threads", sim.threads, "worker threads")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--format", sim.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    simulate->add_option("--out", sim.out, "output file (stdout when absent)");
    simulate->add_option("--config", config_path, "flat key=value config file; flags win");

    std::vector<std::string> tokens(argv + 1, argv + argc);
    try {
        tokens = expand_config_tokens(std::move(tokens));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    std::vector<const char*> parse_argv{argv[0]};
    for (const auto& t : tokens) parse_argv.push_back(t.c_str());
    try {
        app.parse(static_cast<int>(parse_argv.size()), parse_argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    sim.invocation = quote_join(argc, argv);
    if (info->parsed()) return guarded([&] { return run_info(info_code); });
    if (decode->parsed()) return guarded([&] { return run_decode(dec); });
    return guarded([&] { return run_simulate(sim); });
}
