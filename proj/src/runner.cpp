// SPDX-License-Identifier: Apache-2.0

#include "bfsim/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "bfsim/rng.hpp"
#include "bfsim/signal.hpp"

namespace bfsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Substream indices under each trial seed. Frozen: changing them changes
// every output file.
enum Substream : std::uint64_t {
    kSymbols = 0,
    kNoise = 1,
    kWalk = 2,
    kImperfection = 3,
    kAoaInitial = 5,
};

double deg2rad(double d) { return d * kPi / 180.0; }
double rad2deg(double r) { return r * 180.0 / kPi; }

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw io_error("cannot open '" + tmp + "' for writing");
        out << content;
        out.flush();
        if (!out)
            throw io_error("write failed for '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw io_error("cannot rename '" + tmp + "' to '" + path + "'");
    }
}

/// Run fn(0..n-1) on a small pool; any thrown exception is rethrown on the
/// caller's thread after the pool drains.
void for_each_index(int n, int workers, const std::function<void(int)>& fn) {
    workers = std::max(1, std::min(workers, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n)
                return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

ImperfectionSpec draw_imperfections(const ScenarioConfig& cfg, std::uint64_t seed) {
    ImperfectionSpec imp = ImperfectionSpec::identity(cfg.elements);
    if (cfg.imperfection_mode == ImperfectionMode::UniformPhase &&
        cfg.fixed_phase_offsets.empty()) {
        Rng rng(seed);
        const double r = cfg.imperfection_range_rad;
        for (double& a : imp.phase_offsets)
            a = rng.uniform(-r, r);
    }
    if (!cfg.fixed_phase_offsets.empty())
        imp.phase_offsets = cfg.fixed_phase_offsets;
    if (!cfg.fixed_gain_factors.empty())
        imp.gain_factors = cfg.fixed_gain_factors;
    if (!cfg.fixed_position_jitter.empty())
        imp.position_jitter = cfg.fixed_position_jitter;
    return imp;
}

/// Exactly one value for every sweepable key, or a pointer at `sweep`.
SimPoint single_point(const ScenarioConfig& cfg, const char* op) {
    auto need_one = [&](std::size_t n, const char* key) {
        if (n != 1)
            throw config_error(std::string("config: ") + op + " takes exactly one value for '" +
                               key + "'; use the sweep subcommand for multiple");
    };
    need_one(cfg.snr_db_list.size(), "signal.snr_db");
    need_one(cfg.gradient_samples_list.size(), "beamformer.gradient_samples");
    need_one(cfg.walk_std_deg_list.size(), "aoa.walk_std_deg");
    return SimPoint{cfg.snr_db_list[0], cfg.gradient_samples_list[0], cfg.walk_std_deg_list[0]};
}

std::string records_csv(const std::vector<TrialOutput>& outputs) {
    std::ostringstream csv;
    csv << "trial,frame,algorithm,normalized_power,true_phi_deg,snr_db,n_samples,seed\n";
    for (const auto& out : outputs)
        for (const auto& r : out.records)
            csv << r.trial << ',' << r.frame_index << ',' << to_string(r.algorithm) << ','
                << fmt_g(r.normalized_power) << ',' << fmt_g(rad2deg(r.true_phi)) << ','
                << fmt_g(r.snr_db) << ',' << r.n_gradient_samples << ',' << r.trial_seed
                << '\n';
    return csv.str();
}

} // namespace

double angular_span(ArrayType type) { return type == ArrayType::Ula ? kPi : 2.0 * kPi; }

RunContext RunContext::build(const ScenarioConfig& cfg) {
    RunContext ctx;
    ctx.geometry = cfg.build_geometry();
    ctx.carrier = cfg.carrier();
    const bool has_music =
        std::find(cfg.algorithms.begin(), cfg.algorithms.end(), Algorithm::MUSIC) !=
        cfg.algorithms.end();
    if (has_music) {
        const double span = angular_span(cfg.array_type);
        ctx.scanner = std::make_shared<MusicScanner>(ctx.geometry, ctx.carrier, 0.0, span,
                                                     deg2rad(cfg.music_grid_step_deg),
                                                     cfg.array_type != ArrayType::Ula);
    }
    return ctx;
}

TrialOutput run_trial(const ScenarioConfig& cfg, const RunContext& ctx, const SimPoint& point,
                      int trial) {
    const std::uint64_t trial_seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(trial));
    const int m = cfg.elements;
    const int frame_len = cfg.frame_samples();

    TrialOutput out;
    out.imperfections = draw_imperfections(cfg, derive_seed(trial_seed, kImperfection));

    double phi0;
    if (cfg.initial_deg) {
        phi0 = deg2rad(*cfg.initial_deg);
    } else {
        Rng rng(derive_seed(trial_seed, kAoaInitial));
        phi0 = rng.uniform(0.0, angular_span(cfg.array_type));
    }
    const AoATrajectory traj = random_walk_aoa(phi0, deg2rad(point.walk_std_deg), cfg.frames,
                                               derive_seed(trial_seed, kWalk));

    const WaveformConfig wf{cfg.sps, cfg.rolloff, cfg.rrc_span_symbols};
    const SymbolStream symbols =
        gen_qpsk(cfg.frames * cfg.frame_symbols, derive_seed(trial_seed, kSymbols));
    const std::vector<std::complex<double>> stream = shaped_stream(symbols, wf);

    double signal_power = 0.0;
    for (const auto& s : stream)
        signal_power += std::norm(s);
    signal_power /= static_cast<double>(stream.size());
    const NoiseSpec noise{point.snr_db, signal_power};
    const std::uint64_t noise_seed = derive_seed(trial_seed, kNoise);

    BeamformerState gbf_state{init_weights(m)};
    const GbfConfig gbf_cfg{cfg.mu_value, cfg.mu_auto ? StepMode::PowerScaled : StepMode::Fixed,
                            point.gradient_samples, frame_len};
    Eigen::VectorXcd cma_w =
        Eigen::VectorXcd::Constant(m, std::complex<double>(1.0 / std::sqrt(double(m)), 0.0));
    const CmaConfig cma_cfg{cfg.cma_step, 1.0};

    for (int k = 0; k < cfg.frames; ++k) {
        const double phi = traj.phi[k];
        const SteeringVector a_imp =
            imperfect_steering_vector(ctx.geometry, phi, ctx.carrier, out.imperfections);

        std::vector<std::complex<double>> slice(stream.begin() + std::size_t(k) * frame_len,
                                                stream.begin() + std::size_t(k + 1) * frame_len);
        const SnapshotFrame frame = synth_frame(slice, phi, a_imp, noise,
                                                derive_seed(noise_seed, std::uint64_t(k)));

        for (Algorithm alg : cfg.algorithms) {
            double np = 0.0;
            switch (alg) {
            case Algorithm::GBF: {
                process_frame(gbf_state, frame, gbf_cfg);
                const Eigen::VectorXcd w = gbf_state.weights.weights();
                np = normalized_power(w, a_imp);
                out.final_weights[alg] = w;
                break;
            }
            case Algorithm::CMA: {
                for (int s = 0; s < point.gradient_samples; ++s)
                    cma_w = cma_step(cma_w, frame.samples.row(s * cfg.sps).transpose(), cma_cfg);
                np = normalized_power(cma_w, a_imp);
                out.final_weights[alg] = cma_w;
                break;
            }
            case Algorithm::MUSIC: {
                const CovarianceEstimate cov = sample_covariance(frame.samples);
                const double phi_hat = ctx.scanner->estimate(cov);
                const Eigen::VectorXcd w = music_weights(phi_hat, ctx.geometry, ctx.carrier);
                np = normalized_power(w, a_imp);
                out.final_weights[alg] = w;
                break;
            }
            case Algorithm::ORACLE: {
                const Eigen::VectorXcd w = oracle_weights(a_imp);
                np = normalized_power(w, a_imp);
                out.final_weights[alg] = w;
                break;
            }
            }
            out.traces[alg].push_back(np);
            out.records.push_back(TrialRecord{trial, k, alg, np, phi, point.snr_db,
                                              point.gradient_samples, trial_seed});
        }
    }
    out.final_phi = traj.phi.back();
    return out;
}

void run_simulate(const ScenarioConfig& cfg, const std::string& out_path, int workers) {
    const SimPoint point = single_point(cfg, "simulate");
    const RunContext ctx = RunContext::build(cfg);

    std::vector<TrialOutput> outputs(cfg.trials);
    for_each_index(cfg.trials, workers,
                   [&](int t) { outputs[t] = run_trial(cfg, ctx, point, t); });

    write_atomic(out_path, records_csv(outputs));
}

void run_sweep(const ScenarioConfig& cfg, const std::string& out_path, int workers) {
    const bool sweep_snr = cfg.snr_db_list.size() > 1;
    const bool sweep_n = cfg.gradient_samples_list.size() > 1;
    const bool sweep_walk = cfg.walk_std_deg_list.size() > 1;
    const int swept = int(sweep_snr) + int(sweep_n) + int(sweep_walk);
    if (swept == 0)
        throw config_error("config: nothing to sweep; give multiple values for one of "
                           "signal.snr_db, beamformer.gradient_samples, aoa.walk_std_deg");
    if (swept > 1)
        throw config_error("config: sweep supports one swept key per run; found multiple "
                           "multi-valued lists");

    const char* sweep_key = sweep_snr ? "snr_db" : sweep_n ? "gradient_samples" : "walk_std_deg";
    std::size_t n_values = sweep_snr  ? cfg.snr_db_list.size()
                           : sweep_n  ? cfg.gradient_samples_list.size()
                                      : cfg.walk_std_deg_list.size();

    const RunContext ctx = RunContext::build(cfg);
    SimPoint base;
    base.snr_db = cfg.snr_db_list[0];
    base.gradient_samples = cfg.gradient_samples_list[0];
    base.walk_std_deg = cfg.walk_std_deg_list[0];

    struct Aggregate {
        double avg_power = 0.0;
        double mean_convergence = 0.0;
    };
    // aggregates[value index][algorithm]
    std::vector<std::map<Algorithm, Aggregate>> aggregates(n_values);
    std::vector<double> sweep_values(n_values);

    for (std::size_t v = 0; v < n_values; ++v) {
        SimPoint point = base;
        if (sweep_snr)
            point.snr_db = cfg.snr_db_list[v];
        else if (sweep_n)
            point.gradient_samples = cfg.gradient_samples_list[v];
        else
            point.walk_std_deg = cfg.walk_std_deg_list[v];
        sweep_values[v] = sweep_snr    ? point.snr_db
                          : sweep_n    ? double(point.gradient_samples)
                                       : point.walk_std_deg;

        std::vector<TrialOutput> outputs(cfg.trials);
        for_each_index(cfg.trials, workers,
                       [&](int t) { outputs[t] = run_trial(cfg, ctx, point, t); });

        for (Algorithm alg : cfg.algorithms) {
            std::vector<std::vector<double>> traces;
            traces.reserve(outputs.size());
            double conv_sum = 0.0;
            for (const auto& out : outputs) {
                const auto& trace = out.traces.at(alg);
                conv_sum += double(
                    convergence_frames(trace, kConvergenceThreshold).value_or(cfg.frames));
                traces.push_back(trace);
            }
            aggregates[v][alg] = Aggregate{average_normalized_power(traces),
                                           conv_sum / double(cfg.trials)};
        }
    }

    std::ostringstream csv;
    csv << "algorithm,sweep_key,sweep_value,avg_normalized_power,mean_convergence_frames,"
           "trials\n";
    for (Algorithm alg : cfg.algorithms)
        for (std::size_t v = 0; v < n_values; ++v) {
            const Aggregate& agg = aggregates[v].at(alg);
            csv << to_string(alg) << ',' << sweep_key << ',' << fmt_g(sweep_values[v]) << ','
                << fmt_g(agg.avg_power) << ',' << fmt_g(agg.mean_convergence) << ','
                << cfg.trials << '\n';
        }
    write_atomic(out_path, csv.str());
}

void run_pattern(const ScenarioConfig& cfg, const std::string& out_path, int workers) {
    (void)workers; // one trial; nothing to parallelize
    const SimPoint point = single_point(cfg, "pattern");
    const RunContext ctx = RunContext::build(cfg);
    const TrialOutput trial = run_trial(cfg, ctx, point, 0);

    const double span_deg = rad2deg(angular_span(cfg.array_type));
    const double step = cfg.pattern_grid_step_deg;
    const int n_angles = static_cast<int>(std::ceil(span_deg / step - 1e-12));
    std::vector<double> grid(n_angles);
    for (int i = 0; i < n_angles; ++i)
        grid[i] = deg2rad(double(i) * step);

    const ImperfectionSpec* comp = cfg.pattern_compensate ? &trial.imperfections : nullptr;

    std::ostringstream csv;
    csv << "algorithm,angle_deg,gain_db\n";
    for (Algorithm alg : cfg.algorithms) {
        const std::vector<double> gains =
            beam_pattern(trial.final_weights.at(alg), ctx.geometry, ctx.carrier, grid, comp);
        for (int i = 0; i < n_angles; ++i)
            csv << to_string(alg) << ',' << fmt_g(rad2deg(grid[i])) << ',' << fmt_g(gains[i])
                << '\n';
    }
    write_atomic(out_path, csv.str());
}

} // namespace bfsim
