#include "lpbox/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "lpbox/version.hpp"

namespace lpbox {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct TrialOutcome {
    std::uint8_t word_error = 0;
    int bit_errors = 0;
    int iterations = 0;
    double decode_seconds = 0.0;
};

TrialOutcome run_trial(const CodeContext& code, const DecoderSpec& decoder,
                       const ChannelParams& channel, TransmitMode mode, std::uint64_t point_seed,
                       long long trial) {
    Rng rng = make_rng(derive_seed(point_seed, static_cast<std::uint64_t>(trial)));
    BinaryWord sent;
    if (mode == TransmitMode::all_zero) {
        sent.assign(static_cast<std::size_t>(code.h.n_vars()), 0);
    } else {
        std::vector<std::uint8_t> msg(static_cast<std::size_t>(code.g.k()));
        for (auto& b : msg) b = static_cast<std::uint8_t>(rng() & 1u);
        sent = encode(code.g, msg);
    }
    const Eigen::VectorXd received = add_awgn(modulate_bpsk(sent), channel, rng);
    const Eigen::VectorXd gamma = llr_awgn(received, channel);
    const DecodeResult r = decode_with(decoder, code.h, gamma);

    TrialOutcome o;
    o.iterations = r.iterations;
    o.decode_seconds = r.wall_time;
    for (std::size_t i = 0; i < sent.size(); ++i) o.bit_errors += r.word[i] != sent[i];
    o.word_error = o.bit_errors > 0 ? 1 : 0;
    return o;
}

DecoderSpec apply_overrides(const DecoderSpec& base, const PointAssignment& a) {
    DecoderSpec d = base;
    if (a.alpha) {
        if (d.kind != DecoderKind::penalized)
            throw std::invalid_argument("alpha override requires the penalized decoder");
        d.penalized.alpha = *a.alpha;
    }
    if (a.mu1) {
        if (d.kind == DecoderKind::l2box)
            d.l2box.mu1 = *a.mu1;
        else if (d.kind == DecoderKind::penalized)
            d.penalized.mu = *a.mu1;
        else
            throw std::invalid_argument("mu overrides require an ADMM decoder");
    }
    if (a.mu2) {
        if (d.kind != DecoderKind::l2box)
            throw std::invalid_argument("mu2 override requires the l2box decoder");
        d.l2box.mu2 = *a.mu2;
    }
    return d;
}

void fill_parameter_columns(SweepRecord& rec, const DecoderSpec& d) {
    switch (d.kind) {
        case DecoderKind::l2box:
            rec.mu1 = d.l2box.mu1;
            rec.mu2 = d.l2box.mu2;
            break;
        case DecoderKind::penalized:
            rec.alpha = d.penalized.alpha;
            rec.mu1 = d.penalized.mu;
            break;
        default: break;
    }
}

SweepRecord failed_record(const CodeContext& code, const ExperimentSpec& spec,
                          const PointAssignment& a, const std::string& message) {
    SweepRecord rec;
    rec.decoder = to_string(spec.decoder.kind);
    rec.code = code.name;
    rec.snr_db = a.snr_db;
    rec.alpha = a.alpha;
    rec.mu1 = a.mu1;
    rec.mu2 = a.mu2;
    rec.wer = rec.wer_ci_low = rec.wer_ci_high = rec.ber = kNan;
    rec.avg_iterations = rec.avg_decode_seconds = kNan;
    rec.seed = derive_seed(spec.master_seed, static_cast<std::uint64_t>(a.point_index));
    rec.error = message;
    return rec;
}

std::string fmt_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::json num_or_null(double v) {
    if (std::isnan(v) || std::isinf(v)) return nullptr;
    return v;
}

nlohmann::json opt_or_null(const std::optional<double>& v) {
    if (!v) return nullptr;
    return *v;
}

nlohmann::json decoder_json(const DecoderSpec& d) {
    nlohmann::json j{{"name", to_string(d.kind)}};
    switch (d.kind) {
        case DecoderKind::l2box:
            j["mu1"] = d.l2box.mu1;
            j["mu2"] = d.l2box.mu2;
            j["epsilon"] = d.l2box.epsilon;
            j["max_iters"] = d.l2box.max_iters;
            j["early_exit_on_codeword"] = d.l2box.early_exit_on_codeword;
            break;
        case DecoderKind::penalized:
            j["alpha"] = d.penalized.alpha;
            j["mu"] = d.penalized.mu;
            j["epsilon"] = d.penalized.epsilon;
            j["max_iters"] = d.penalized.max_iters;
            j["early_exit_on_codeword"] = d.penalized.early_exit_on_codeword;
            break;
        default:
            j["max_iters"] = d.mp.max_iters;
            j["llr_clip"] = d.mp.llr_clip;
            if (d.kind == DecoderKind::normminsum) j["normalization"] = d.mp.normalization;
            break;
    }
    return j;
}

}  // namespace

const char* to_string(TransmitMode m) {
    return m == TransmitMode::all_zero ? "all_zero" : "random_codeword";
}

CodeContext make_code_context(std::string name, ParityCheckMatrix h) {
    CodeContext ctx;
    ctx.name = std::move(name);
    ctx.g = derive_generator(h);
    ctx.h = std::move(h);
    ctx.rate = ctx.h.n_vars() > 0 ? static_cast<double>(ctx.g.k()) / ctx.h.n_vars() : 0.0;
    return ctx;
}

std::pair<double, double> wilson_interval(long long errors, long long trials) {
    if (trials < 1 || errors < 0 || errors > trials)
        throw std::invalid_argument("wilson_interval: need 0 <= errors <= trials, trials >= 1");
    constexpr double z = 1.96;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(errors) / n;
    const double z2n = z * z / n;
    const double denom = 1.0 + z2n;
    const double center = p + 0.5 * z2n;
    const double half = z * std::sqrt(p * (1.0 - p) / n + 0.25 * z2n / n);
    const double low = std::max(0.0, (center - half) / denom);
    const double high = std::min(1.0, (center + half) / denom);
    return {low, high};
}

SweepRecord run_point(const CodeContext& code, const ExperimentSpec& spec,
                      const PointAssignment& assignment) {
    if (spec.stop_word_errors < 1)
        throw std::invalid_argument("stop_word_errors must be at least 1");
    if (spec.max_trials < spec.stop_word_errors)
        throw std::invalid_argument("max_trials must be at least stop_word_errors");
    if (spec.threads < 1) throw std::invalid_argument("threads must be at least 1");
    if (code.h.n_vars() < 1) throw std::invalid_argument("empty code");

    const DecoderSpec decoder = apply_overrides(spec.decoder, assignment);
    switch (decoder.kind) {
        case DecoderKind::l2box: validate(decoder.l2box); break;
        case DecoderKind::penalized: validate(decoder.penalized, code.h); break;
        default: validate(decoder.mp); break;
    }
    const ChannelParams channel = ChannelParams::from_snr(assignment.snr_db, code.rate);
    const std::uint64_t point_seed =
        derive_seed(spec.master_seed, static_cast<std::uint64_t>(assignment.point_index));

    long long trials = 0, word_errors = 0, bit_errors = 0, total_iterations = 0;
    double total_decode_seconds = 0.0;

    const int threads = std::max(1, spec.threads);
    const long long chunk_cap = std::max<long long>(64, 16LL * threads);
    std::vector<TrialOutcome> buffer;
    long long next_trial = 0;
    bool stopped = false;
    while (!stopped && next_trial < spec.max_trials) {
        const long long chunk = std::min(chunk_cap, spec.max_trials - next_trial);
        buffer.assign(static_cast<std::size_t>(chunk), TrialOutcome{});
        if (threads == 1) {
            for (long long u = 0; u < chunk; ++u)
                buffer[static_cast<std::size_t>(u)] = run_trial(
                    code, decoder, channel, spec.transmit_mode, point_seed, next_trial + u);
        } else {
            std::atomic<long long> cursor{0};
            std::exception_ptr failure;
            std::mutex failure_mutex;
            std::vector<std::thread> pool;
            pool.reserve(static_cast<std::size_t>(threads));
            for (int w = 0; w < threads; ++w) {
                pool.emplace_back([&] {
                    try {
                        for (;;) {
                            const long long u = cursor.fetch_add(1);
                            if (u >= chunk) return;
                            buffer[static_cast<std::size_t>(u)] =
                                run_trial(code, decoder, channel, spec.transmit_mode, point_seed,
                                          next_trial + u);
                        }
                    } catch (...) {
                        const std::lock_guard<std::mutex> lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                });
            }
            for (auto& t : pool) t.join();
            if (failure) std::rethrow_exception(failure);
        }
        // Fold in virtual trial order; the stopping point cannot depend on
        // scheduling. Surplus computed trials are discarded.
        for (long long u = 0; u < chunk; ++u) {
            const TrialOutcome& o = buffer[static_cast<std::size_t>(u)];
            ++trials;
            word_errors += o.word_error;
            bit_errors += o.bit_errors;
            total_iterations += o.iterations;
            total_decode_seconds += o.decode_seconds;
            if (word_errors >= spec.stop_word_errors) {
                stopped = true;
                break;
            }
        }
        next_trial += chunk;
    }

    SweepRecord rec;
    rec.decoder = to_string(decoder.kind);
    rec.code = code.name;
    rec.snr_db = assignment.snr_db;
    fill_parameter_columns(rec, decoder);
    rec.trials = trials;
    rec.word_errors = word_errors;
    rec.bit_errors = bit_errors;
    rec.wer = static_cast<double>(word_errors) / static_cast<double>(trials);
    std::tie(rec.wer_ci_low, rec.wer_ci_high) = wilson_interval(word_errors, trials);
    rec.ber = static_cast<double>(bit_errors) /
              (static_cast<double>(trials) * static_cast<double>(code.h.n_vars()));
    rec.avg_iterations = static_cast<double>(total_iterations) / static_cast<double>(trials);
    rec.avg_decode_seconds = total_decode_seconds / static_cast<double>(trials);
    rec.seed = point_seed;
    return rec;
}

std::vector<SweepRecord> sweep_snr(const CodeContext& code, const ExperimentSpec& spec) {
    if (spec.snr_points.empty()) throw std::invalid_argument("snr_points must be nonempty");
    std::vector<SweepRecord> out;
    out.reserve(spec.snr_points.size());
    for (std::size_t i = 0; i < spec.snr_points.size(); ++i) {
        PointAssignment a;
        a.snr_db = spec.snr_points[i];
        a.point_index = static_cast<int>(i);
        try {
            out.push_back(run_point(code, spec, a));
        } catch (const std::exception& e) {
            out.push_back(failed_record(code, spec, a, e.what()));
        }
    }
    return out;
}

std::vector<SweepRecord> sweep_alpha(const CodeContext& code, const ExperimentSpec& spec,
                                     const std::vector<double>& alpha_grid) {
    if (spec.decoder.kind != DecoderKind::penalized)
        throw std::invalid_argument("alpha sweep requires the penalized decoder");
    if (spec.snr_points.empty()) throw std::invalid_argument("snr_points must be nonempty");
    if (alpha_grid.empty()) throw std::invalid_argument("alpha grid must be nonempty");
    std::vector<SweepRecord> out;
    out.reserve(alpha_grid.size());
    for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
        PointAssignment a;
        a.snr_db = spec.snr_points.front();
        a.alpha = alpha_grid[i];
        a.point_index = static_cast<int>(i);
        try {
            out.push_back(run_point(code, spec, a));
        } catch (const std::exception& e) {
            SweepRecord rec = failed_record(code, spec, a, e.what());
            rec.mu1 = spec.decoder.penalized.mu;
            out.push_back(std::move(rec));
        }
    }
    return out;
}

std::vector<SweepRecord> sweep_mu(const CodeContext& code, const ExperimentSpec& spec,
                                  const std::vector<double>& mu1_grid,
                                  const std::vector<double>& mu2_grid) {
    if (spec.decoder.kind != DecoderKind::l2box)
        throw std::invalid_argument("mu sweep requires the l2box decoder");
    if (spec.snr_points.empty()) throw std::invalid_argument("snr_points must be nonempty");
    if (mu1_grid.empty() || mu2_grid.empty())
        throw std::invalid_argument("mu grids must be nonempty");
    std::vector<SweepRecord> out;
    out.reserve(mu1_grid.size() * mu2_grid.size());
    for (std::size_t r = 0; r < mu1_grid.size(); ++r) {
        for (std::size_t c = 0; c < mu2_grid.size(); ++c) {
            PointAssignment a;
            a.snr_db = spec.snr_points.front();
            a.mu1 = mu1_grid[r];
            a.mu2 = mu2_grid[c];
            a.point_index = static_cast<int>(r * mu2_grid.size() + c);
            try {
                out.push_back(run_point(code, spec, a));
            } catch (const std::exception& e) {
                out.push_back(failed_record(code, spec, a, e.what()));
            }
        }
    }
    return out;
}

bool records_equal_deterministic(const SweepRecord& a, const SweepRecord& b) {
    const auto same = [](double x, double y) {
        return x == y || (std::isnan(x) && std::isnan(y));
    };
    const auto same_opt = [&](const std::optional<double>& x, const std::optional<double>& y) {
        if (x.has_value() != y.has_value()) return false;
        return !x || same(*x, *y);
    };
    return a.decoder == b.decoder && a.code == b.code && same(a.snr_db, b.snr_db) &&
           same_opt(a.alpha, b.alpha) && same_opt(a.mu1, b.mu1) && same_opt(a.mu2, b.mu2) &&
           a.trials == b.trials && a.word_errors == b.word_errors &&
           a.bit_errors == b.bit_errors && same(a.wer, b.wer) &&
           same(a.wer_ci_low, b.wer_ci_low) && same(a.wer_ci_high, b.wer_ci_high) &&
           same(a.ber, b.ber) && same(a.avg_iterations, b.avg_iterations) && a.seed == b.seed &&
           a.error == b.error;
}

std::string to_csv(const std::vector<SweepRecord>& records) {
    std::string out =
        "decoder,code,snr_db,alpha,mu1,mu2,trials,word_errors,bit_errors,wer,"
        "wer_ci_low,wer_ci_high,ber,avg_iterations,avg_decode_seconds,seed\n";
    const auto opt = [](const std::optional<double>& v) { return v ? fmt_double(*v) : ""; };
    for (const SweepRecord& r : records) {
        out += r.decoder + ',' + r.code + ',' + fmt_double(r.snr_db) + ',' + opt(r.alpha) + ',' +
               opt(r.mu1) + ',' + opt(r.mu2) + ',' + std::to_string(r.trials) + ',' +
               std::to_string(r.word_errors) + ',' + std::to_string(r.bit_errors) + ',' +
               fmt_double(r.wer) + ',' + fmt_double(r.wer_ci_low) + ',' +
               fmt_double(r.wer_ci_high) + ',' + fmt_double(r.ber) + ',' +
               fmt_double(r.avg_iterations) + ',' + fmt_double(r.avg_decode_seconds) + ',' +
               std::to_string(r.seed) + '\n';
    }
    return out;
}

std::string to_json(const CodeContext& code, const ExperimentSpec& spec,
                    const std::vector<SweepRecord>& records,
                    const std::vector<std::pair<std::string, std::string>>& extra_metadata) {
    nlohmann::json j;
    j["version"] = kVersion;
    j["experiment"] = {
        {"code", code.name},
        {"n", code.h.n_vars()},
        {"m", code.h.n_checks()},
        {"k", code.g.k()},
        {"rate", code.rate},
        {"decoder", decoder_json(spec.decoder)},
        {"snr_points", spec.snr_points},
        {"stop_word_errors", spec.stop_word_errors},
        {"max_trials", spec.max_trials},
        {"transmit_mode", to_string(spec.transmit_mode)},
        {"master_seed", spec.master_seed},
        {"threads", spec.threads},
    };
    for (const auto& [key, value] : extra_metadata) j["experiment"][key] = value;
    nlohmann::json recs = nlohmann::json::array();
    for (const SweepRecord& r : records) {
        nlohmann::json o{
            {"decoder", r.decoder},
            {"code", r.code},
            {"snr_db", r.snr_db},
            {"alpha", opt_or_null(r.alpha)},
            {"mu1", opt_or_null(r.mu1)},
            {"mu2", opt_or_null(r.mu2)},
            {"trials", r.trials},
            {"word_errors", r.word_errors},
            {"bit_errors", r.bit_errors},
            {"wer", num_or_null(r.wer)},
            {"wer_ci_low", num_or_null(r.wer_ci_low)},
            {"wer_ci_high", num_or_null(r.wer_ci_high)},
            {"ber", num_or_null(r.ber)},
            {"avg_iterations", num_or_null(r.avg_iterations)},
            {"avg_decode_seconds", num_or_null(r.avg_decode_seconds)},
            {"seed", r.seed},
        };
        if (!r.error.empty()) o["error"] = r.error;
        recs.push_back(std::move(o));
    }
    j["records"] = std::move(recs);
    return j.dump(2) + "\n";
}

}  // namespace lpbox
