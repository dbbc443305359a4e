// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any fail. Thresholds are fixed here, not
// configurable, so a regression cannot be tuned away.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "bfsim/baselines.hpp"
#include "bfsim/config.hpp"
#include "bfsim/gbf.hpp"
#include "bfsim/metrics.hpp"
#include "bfsim/rng.hpp"
#include "bfsim/runner.hpp"
#include "bfsim/signal.hpp"

using namespace bfsim;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Criterion {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

ScenarioConfig scenario(const std::string& text) { return parse_config(text); }

std::vector<TrialOutput> run_all_trials(const ScenarioConfig& cfg) {
    const RunContext ctx = RunContext::build(cfg);
    const SimPoint point{cfg.snr_db_list[0], cfg.gradient_samples_list[0],
                         cfg.walk_std_deg_list[0]};
    std::vector<TrialOutput> outs;
    outs.reserve(cfg.trials);
    for (int t = 0; t < cfg.trials; ++t)
        outs.push_back(run_trial(cfg, ctx, point, t));
    return outs;
}

SteeringVector random_manifold(Rng& rng, int m) {
    SteeringVector a;
    a.entries.resize(m);
    for (int i = 0; i < m; ++i)
        a.entries(i) = std::polar(1.0, rng.uniform(0.0, 2.0 * kPi));
    return a;
}

// 1. From a cold start the beamformer reaches 0.99 of the optimal gain
//    within 25 frames in at least 95 of 100 trials, on both geometries,
//    noise-free and at 10 dB, in under 10 seconds of wall time.
Criterion convergence_speed() {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool pass = true;
    int seed = 101;
    for (const char* type : {"ula", "uca"}) {
        for (const char* snr : {"inf", "10"}) {
            const ScenarioConfig cfg = scenario(fmt(
                "[array]\ntype = %s\nelements = 8\n[signal]\nsnr_db = %s\n"
                "[beamformer]\nalgorithms = gbf\n[aoa]\nwalk_std_deg = 0\n"
                "[mc]\ntrials = 100\nframes = 26\nmaster_seed = %d\n",
                type, snr, seed++));
            int converged = 0;
            for (const TrialOutput& out : run_all_trials(cfg)) {
                const auto& trace = out.traces.at(Algorithm::GBF);
                for (std::size_t k = 0; k < trace.size() && k <= 25; ++k)
                    if (trace[k] >= 0.99) {
                        ++converged;
                        break;
                    }
            }
            pass = pass && converged >= 95;
            detail += fmt("%s/%sdB %d/100  ", type, snr, converged);
        }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    pass = pass && secs < 10.0;
    return {pass, detail + fmt("(%.1f s)", secs)};
}

// 2. After 200 noise-free frames the weights sit within 0.1% of the
//    optimum for every one of 50 random imperfection draws per geometry.
Criterion optimum_attainment() {
    std::string detail;
    bool pass = true;
    int seed = 201;
    for (const char* type : {"ula", "uca"}) {
        const ScenarioConfig cfg = scenario(fmt(
            "[array]\ntype = %s\nelements = 8\n[signal]\nsnr_db = inf\n"
            "[beamformer]\nalgorithms = gbf\n[aoa]\nwalk_std_deg = 0\n"
            "[mc]\ntrials = 50\nframes = 200\nmaster_seed = %d\n",
            type, seed++));
        double worst = 1.0;
        for (const TrialOutput& out : run_all_trials(cfg))
            worst = std::min(worst, out.traces.at(Algorithm::GBF).back());
        pass = pass && worst >= 0.999;
        detail += fmt("%s worst %.6f  ", type, worst);
    }
    return {pass, detail};
}

// 3. The analytic phase gradient agrees with central finite differences to
//    a relative error below 1e-5 on 1000 random instances.
Criterion gradient_correctness() {
    Rng rng(301);
    const int ms[] = {2, 4, 8};
    const int ns[] = {1, 8, 32};
    double worst = 0.0;
    int failures = 0;
    for (int i = 0; i < 1000; ++i) {
        const int m = ms[i % 3];
        const int n = ns[(i / 3) % 3];
        Eigen::MatrixXcd samples(n, m);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < m; ++c)
                samples(r, c) = {rng.gaussian(), rng.gaussian()};
        WeightVector w;
        w.phases.resize(m);
        for (int k = 0; k < m; ++k)
            w.phases(k) = rng.uniform(0.0, 2.0 * kPi);

        const Eigen::VectorXcd y = beamform_output(w, samples);
        const Eigen::VectorXd analytic = power_gradient(samples, w, y);

        const double h = 1e-6;
        Eigen::VectorXd fd(m);
        for (int k = 0; k < m; ++k) {
            WeightVector hi = w, lo = w;
            hi.phases(k) += h;
            lo.phases(k) -= h;
            fd(k) = (estimate_power(beamform_output(hi, samples)) -
                     estimate_power(beamform_output(lo, samples))) /
                    (2.0 * h);
        }
        const double rel = (analytic - fd).norm() / std::max(fd.norm(), 1e-12);
        worst = std::max(worst, rel);
        if (!(rel < 1e-5))
            ++failures;
    }
    return {failures == 0, fmt("1000 instances, worst rel err %.2e", worst)};
}

// 4. For 2 and 3 elements the adapted power matches an exhaustive
//    1-degree phase-grid search within 0.5%.
Criterion brute_force_equivalence() {
    Rng rng(401);
    double worst_gap = 0.0;
    bool pass = true;
    for (int m : {2, 2, 2, 2, 3, 3}) {
        const SteeringVector a = random_manifold(rng, m);
        SnapshotFrame frame;
        frame.samples.resize(32, m);
        for (int r = 0; r < 32; ++r) {
            const std::complex<double> sym = std::polar(1.0, rng.uniform(0.0, 2.0 * kPi));
            frame.samples.row(r) = sym * a.entries.transpose();
        }

        BeamformerState state{init_weights(m)};
        const GbfConfig cfg{1.0, StepMode::PowerScaled, 8, 32};
        for (int k = 0; k < 400; ++k)
            process_frame(state, frame, cfg);
        const double adapted = normalized_power(state.weights.weights(), a);

        // first phase pinned to 0: the metric ignores the global phase
        double best = 0.0;
        WeightVector probe;
        probe.phases = Eigen::VectorXd::Zero(m);
        if (m == 2) {
            for (int d1 = 0; d1 < 360; ++d1) {
                probe.phases(1) = d1 * kPi / 180.0;
                best = std::max(best, normalized_power(probe.weights(), a));
            }
        } else {
            for (int d1 = 0; d1 < 360; ++d1)
                for (int d2 = 0; d2 < 360; ++d2) {
                    probe.phases(1) = d1 * kPi / 180.0;
                    probe.phases(2) = d2 * kPi / 180.0;
                    best = std::max(best, normalized_power(probe.weights(), a));
                }
        }
        const double gap = std::abs(adapted - best) / best;
        worst_gap = std::max(worst_gap, gap);
        pass = pass && gap < 0.005;
    }
    return {pass, fmt("6 scenarios, worst grid/adapted gap %.4f%%", 100.0 * worst_gap)};
}

// 5. Under random phase miscalibration the adapted beamformer out-delivers
//    music-derived weights in at least 95 of 100 trials; with a calibrated
//    array the music baseline itself reaches 0.99, so the gap is caused by
//    the miscalibration and not by a broken baseline.
Criterion music_fragility() {
    const ScenarioConfig cfg = scenario(
        "[array]\ntype = uca\nelements = 8\n[signal]\nsnr_db = 10\n"
        "[beamformer]\nalgorithms = gbf, music\n[aoa]\nwalk_std_deg = 0\n"
        "[mc]\ntrials = 100\nframes = 50\nmaster_seed = 501\n");
    int wins = 0;
    double gbf_mean = 0.0, music_mean = 0.0;
    for (const TrialOutput& out : run_all_trials(cfg)) {
        auto steady = [](const std::vector<double>& t) {
            double acc = 0.0;
            for (std::size_t k = t.size() - 10; k < t.size(); ++k)
                acc += t[k];
            return acc / 10.0;
        };
        const double g = steady(out.traces.at(Algorithm::GBF));
        const double m = steady(out.traces.at(Algorithm::MUSIC));
        gbf_mean += g / cfg.trials;
        music_mean += m / cfg.trials;
        if (g > m)
            ++wins;
    }

    const ScenarioConfig clean = scenario(
        "[array]\ntype = uca\nelements = 8\n[imperfection]\nmode = none\n"
        "[signal]\nsnr_db = 10\n[beamformer]\nalgorithms = music\n"
        "[aoa]\nwalk_std_deg = 0\n[mc]\ntrials = 20\nframes = 10\nmaster_seed = 502\n");
    double clean_music = 0.0;
    for (const TrialOutput& out : run_all_trials(clean))
        clean_music += out.traces.at(Algorithm::MUSIC).back() / clean.trials;

    const bool pass = wins >= 95 && clean_music >= 0.99;
    return {pass, fmt("wins %d/100 (means %.3f vs %.3f), calibrated music %.4f", wins,
                      gbf_mean, music_mean, clean_music)};
}

// 6. Average performance is flat (within 10%) in the per-frame gradient
//    sample count for N >= 8; the cma comparison at the largest N is
//    reported alongside.
Criterion sample_count_robustness() {
    const ScenarioConfig cfg = scenario(
        "[array]\ntype = uca\nelements = 8\n[signal]\nsnr_db = 10\n"
        "[beamformer]\nalgorithms = gbf, cma\ngradient_samples = 1, 2, 4, 8, 16, 32\n"
        "[aoa]\nwalk_std_deg = 0\n[mc]\ntrials = 40\nframes = 60\nmaster_seed = 601\n");
    const std::string path = "acceptance_sample_sweep.csv";
    run_sweep(cfg, path, 4);

    std::map<std::string, std::map<int, double>> avg; // algorithm -> n -> power
    {
        std::ifstream in(path);
        std::string line;
        std::getline(in, line); // header
        while (std::getline(in, line)) {
            std::istringstream row(line);
            std::string alg, key, value, power;
            std::getline(row, alg, ',');
            std::getline(row, key, ',');
            std::getline(row, value, ',');
            std::getline(row, power, ',');
            avg[alg][int(std::stod(value))] = std::stod(power);
        }
    }
    std::filesystem::remove(path);

    double lo = 1.0, hi = 0.0;
    for (int n : {8, 16, 32}) {
        lo = std::min(lo, avg["GBF"][n]);
        hi = std::max(hi, avg["GBF"][n]);
    }
    const double variation = (hi - lo) / hi;
    const bool pass = variation < 0.10;
    return {pass, fmt("gbf avg over n>=8 varies %.2f%%; at n=32 gbf %.3f vs cma %.3f",
                      100.0 * variation, avg["GBF"][32], avg["CMA"][32])};
}

// 7. Mean frames-to-convergence at 0, 10 and 20 dB differ by less than 2x.
Criterion snr_insensitivity() {
    std::vector<double> means;
    int seed = 701;
    for (const char* snr : {"0", "10", "20"}) {
        const ScenarioConfig cfg = scenario(fmt(
            "[array]\ntype = uca\nelements = 8\n[signal]\nsnr_db = %s\n"
            "[beamformer]\nalgorithms = gbf\n[aoa]\nwalk_std_deg = 0\n"
            "[mc]\ntrials = 60\nframes = 40\nmaster_seed = %d\n",
            snr, seed++));
        double acc = 0.0;
        for (const TrialOutput& out : run_all_trials(cfg))
            acc += double(convergence_frames(out.traces.at(Algorithm::GBF),
                                             kConvergenceThreshold)
                              .value_or(cfg.frames));
        means.push_back(acc / cfg.trials);
    }
    const double lo = *std::min_element(means.begin(), means.end());
    const double hi = *std::max_element(means.begin(), means.end());
    const bool pass = hi / lo < 2.0;
    return {pass, fmt("mean frames %.1f / %.1f / %.1f at 0/10/20 dB (ratio %.2f)", means[0],
                      means[1], means[2], hi / lo)};
}

// 8. With the source drifting 0.5 degrees per frame the adapted weights
//    hold at least 0.9 of the optimal gain in 90% of post-convergence
//    frames.
Criterion tracking() {
    const ScenarioConfig cfg = scenario(
        "[array]\ntype = uca\nelements = 8\n[signal]\nsnr_db = 10\n"
        "[beamformer]\nalgorithms = gbf\n[aoa]\nwalk_std_deg = 0.5\n"
        "[mc]\ntrials = 30\nframes = 300\nmaster_seed = 801\n");
    long held = 0, total = 0;
    for (const TrialOutput& out : run_all_trials(cfg)) {
        const auto& trace = out.traces.at(Algorithm::GBF);
        std::size_t k0 = 50; // fallback when a trial never hits 0.99
        for (std::size_t k = 0; k < trace.size(); ++k)
            if (trace[k] >= 0.99) {
                k0 = k;
                break;
            }
        for (std::size_t k = k0 + 1; k < trace.size(); ++k) {
            ++total;
            if (trace[k] >= 0.9)
                ++held;
        }
    }
    const double frac = double(held) / double(total);
    return {frac >= 0.90, fmt("%.1f%% of %ld tracked frames held 0.9", 100.0 * frac, total)};
}

// 9. Library invariants: unit-norm weights by construction, global-phase
//    invariance, unit-modulus manifolds, rank-1 noise-free frames, and
//    byte-identical csv output regardless of worker count.
Criterion invariants() {
    Rng rng(901);
    std::string failed;

    {
        BeamformerState state{init_weights_random(6, 9001)};
        for (int k = 0; k < 300; ++k) {
            Eigen::MatrixXcd samples(4, 6);
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 6; ++c)
                    samples(r, c) = {rng.gaussian(), rng.gaussian()};
            const Eigen::VectorXcd y = beamform_output(state.weights, samples);
            update_weights(state, power_gradient(samples, state.weights, y), 0.05);
            if (std::abs(state.weights.weights().norm() - 1.0) > 1e-12)
                failed = "unit norm";
        }
    }
    for (int rep = 0; rep < 100 && failed.empty(); ++rep) {
        const int m = 2 + int(rng.uniform(0.0, 6.0));
        const SteeringVector a = random_manifold(rng, m);
        Eigen::VectorXcd w(m);
        for (int i = 0; i < m; ++i)
            w(i) = {rng.gaussian(), rng.gaussian()};
        w.normalize();
        const std::complex<double> gamma = std::polar(1.0, rng.uniform(0.0, 2.0 * kPi));
        if (std::abs(normalized_power((gamma * w).eval(), a) - normalized_power(w, a)) > 1e-12)
            failed = "global phase";
    }
    for (int rep = 0; rep < 200 && failed.empty(); ++rep) {
        const ArrayGeometry geom =
            rep % 2 ? make_uca(3 + rep % 6, 0.07) : make_ula(1 + rep % 8, 0.05);
        const SteeringVector a =
            steering_vector(geom, rng.uniform(0.0, 2.0 * kPi), CarrierSpec{});
        for (int i = 0; i < a.size(); ++i)
            if (std::abs(std::abs(a.entries(i)) - 1.0) > 1e-14)
                failed = "unit modulus";
        if (std::abs(a.entries.norm() - std::sqrt(double(a.size()))) > 1e-12)
            failed = "manifold norm";
    }
    if (failed.empty()) {
        const ArrayGeometry geom = make_uca(4, 0.07);
        const SteeringVector a = steering_vector(geom, 1.0, CarrierSpec{});
        std::vector<std::complex<double>> base(16);
        for (auto& s : base)
            s = {rng.gaussian(), rng.gaussian()};
        const SnapshotFrame frame =
            synth_frame(base, 1.0, a, NoiseSpec{std::numeric_limits<double>::infinity(), 1.0},
                        77);
        for (int r = 0; r < frame.samples.rows(); ++r) {
            const Eigen::RowVectorXcd row = frame.samples.row(r);
            const std::complex<double> coeff =
                (row * a.entries.conjugate())(0) / double(a.size());
            if ((row - coeff * a.entries.transpose()).norm() > 1e-12)
                failed = "rank-1 frames";
        }
    }
    if (failed.empty()) {
        const ScenarioConfig cfg = scenario(
            "[array]\ntype = uca\nelements = 4\n[signal]\nframe_symbols = 8\nsps = 4\n"
            "[beamformer]\nalgorithms = gbf, oracle\n[mc]\ntrials = 4\nframes = 5\n");
        run_simulate(cfg, "acceptance_det_a.csv", 1);
        run_simulate(cfg, "acceptance_det_b.csv", 3);
        std::ifstream fa("acceptance_det_a.csv"), fb("acceptance_det_b.csv");
        std::stringstream sa, sb;
        sa << fa.rdbuf();
        sb << fb.rdbuf();
        if (sa.str().empty() || sa.str() != sb.str())
            failed = "csv determinism";
        std::filesystem::remove("acceptance_det_a.csv");
        std::filesystem::remove("acceptance_det_b.csv");
    }
    if (failed.empty())
        return {true, "unit norm, global phase, manifolds, rank-1 frames, csv determinism"};
    return {false, "violated: " + failed};
}

} // namespace

int main() {
    struct Entry {
        const char* label;
        Criterion (*run)();
    };
    const Entry entries[] = {
        {"convergence speed", convergence_speed},
        {"optimum attainment", optimum_attainment},
        {"gradient correctness", gradient_correctness},
        {"exhaustive-search equivalence", brute_force_equivalence},
        {"music fragility ordering", music_fragility},
        {"sample-count robustness", sample_count_robustness},
        {"snr insensitivity", snr_insensitivity},
        {"tracking a drifting source", tracking},
        {"library invariants", invariants},
    };

    int failures = 0;
    int index = 0;
    for (const Entry& e : entries) {
        ++index;
        Criterion r;
        try {
            r = e.run();
        } catch (const std::exception& ex) {
            r = {false, std::string("exception: ") + ex.what()};
        }
        std::printf("criterion %d: %s  %s: %s\n", index, r.pass ? "PASS" : "FAIL", e.label,
                    r.detail.c_str());
        std::fflush(stdout);
        if (!r.pass)
            ++failures;
    }
    std::printf("acceptance: %d of 9 criteria passed\n", 9 - failures);
    return failures == 0 ? 0 : 1;
}
