#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lpbox/channel.hpp"
#include "lpbox/decoder_spec.hpp"
#include "lpbox/gf2.hpp"

namespace lpbox {

enum class TransmitMode { all_zero, random_codeword };

const char* to_string(TransmitMode m);

/// A code plus everything a simulation needs: generator (for random-codeword
/// transmission) and true rate k/n (for the Eb/N0 noise scale).
struct CodeContext {
    std::string name;
    ParityCheckMatrix h;
    GeneratorMatrix g;
    double rate = 0.0;
};

CodeContext make_code_context(std::string name, ParityCheckMatrix h);

struct ExperimentSpec {
    DecoderSpec decoder;
    std::vector<double> snr_points;
    long long stop_word_errors = 200;
    long long max_trials = 10'000'000;
    TransmitMode transmit_mode = TransmitMode::all_zero;
    std::uint64_t master_seed = 1;
    int threads = 1;
};

/// One sweep point: the SNR plus optional decoder-parameter overrides
/// (alpha for penalized; mu1/mu2 for l2box, mu1 doubling as the penalized mu).
/// point_index selects the point's seed substream.
struct PointAssignment {
    double snr_db = 0.0;
    std::optional<double> alpha;
    std::optional<double> mu1;
    std::optional<double> mu2;
    int point_index = 0;
};

struct SweepRecord {
    std::string decoder;
    std::string code;
    double snr_db = 0.0;
    std::optional<double> alpha;  // parameter columns, filled as applicable
    std::optional<double> mu1;
    std::optional<double> mu2;
    long long trials = 0;
    long long word_errors = 0;
    long long bit_errors = 0;
    double wer = 0.0;
    double wer_ci_low = 0.0;
    double wer_ci_high = 0.0;
    double ber = 0.0;
    double avg_iterations = 0.0;
    double avg_decode_seconds = 0.0;
    std::uint64_t seed = 0;  // this point's seed substream
    std::string error;       // nonempty marks a failed point (stats are NaN)
};

/// 95% Wilson score interval (z = 1.96) for errors successes in trials.
std::pair<double, double> wilson_interval(long long errors, long long trials);

/// Monte Carlo at one sweep point: transmit, add noise, decode; a word error
/// is decoded != transmitted (undetected errors included). Stops once
/// stop_word_errors is reached in virtual trial order, or at max_trials.
/// Bit-identical for a given master seed regardless of thread count.
/// Throws on invalid parameters.
SweepRecord run_point(const CodeContext& code, const ExperimentSpec& spec,
                      const PointAssignment& assignment);

/// One record per SNR point, independent seed substreams. Failed points come
/// back marked rather than aborting the sweep.
std::vector<SweepRecord> sweep_snr(const CodeContext& code, const ExperimentSpec& spec);

/// Penalized decoder only: one record per alpha at the first SNR point.
std::vector<SweepRecord> sweep_alpha(const CodeContext& code, const ExperimentSpec& spec,
                                     const std::vector<double>& alpha_grid);

/// l2box decoder only: row-major mu1 x mu2 grid at the first SNR point.
std::vector<SweepRecord> sweep_mu(const CodeContext& code, const ExperimentSpec& spec,
                                  const std::vector<double>& mu1_grid,
                                  const std::vector<double>& mu2_grid);

/// Equality on everything reproducible (wall-clock averages excluded).
bool records_equal_deterministic(const SweepRecord& a, const SweepRecord& b);

/// CSV with the fixed header
/// decoder,code,snr_db,alpha,mu1,mu2,trials,word_errors,bit_errors,wer,
/// wer_ci_low,wer_ci_high,ber,avg_iterations,avg_decode_seconds,seed.
/// Absent parameter columns are empty; failed points carry NaN stats.
std::string to_csv(const std::vector<SweepRecord>& records);

/// JSON envelope: experiment metadata (spec fields, code, version) plus one
/// object per record; absent parameters are null, NaN stats are null.
/// extra_metadata lands as strings inside the experiment object.
std::string to_json(const CodeContext& code, const ExperimentSpec& spec,
                    const std::vector<SweepRecord>& records,
                    const std::vector<std::pair<std::string, std::string>>& extra_metadata = {});

}  // namespace lpbox
