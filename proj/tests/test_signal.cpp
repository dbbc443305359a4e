// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "bfsim/signal.hpp"

using namespace bfsim;

namespace {
constexpr double kPi = 3.14159265358979323846;
} // namespace

TEST_CASE("qpsk symbols live on the constellation") {
    const SymbolStream s = gen_qpsk(500, 123);
    REQUIRE(s.symbols.size() == 500);
    for (const auto& sym : s.symbols) {
        CHECK(std::abs(std::abs(sym) - 1.0) < 1e-12);
        const double phase = std::arg(sym);
        // phase is one of pi/4 + k pi/2
        const double k = (phase - kPi / 4.0) / (kPi / 2.0);
        CHECK(std::abs(k - std::round(k)) < 1e-12);
    }
}

TEST_CASE("qpsk generation is deterministic and uniform") {
    const SymbolStream a = gen_qpsk(1000, 99);
    const SymbolStream b = gen_qpsk(1000, 99);
    for (std::size_t i = 0; i < a.symbols.size(); ++i)
        CHECK(a.symbols[i] == b.symbols[i]);

    const int n = 100000;
    const SymbolStream big = gen_qpsk(n, 7);
    int counts[4] = {0, 0, 0, 0};
    for (const auto& sym : big.symbols) {
        const int k = int(std::round((std::arg(sym) - kPi / 4.0) / (kPi / 2.0)));
        counts[((k % 4) + 4) % 4]++;
    }
    // 3 sigma of a binomial(n, 1/4) proportion
    const double bound = 3.0 * std::sqrt(0.25 * 0.75 / n);
    for (int c : counts)
        CHECK(std::abs(double(c) / n - 0.25) < bound);

    CHECK_THROWS_AS(gen_qpsk(0, 1), std::invalid_argument);
}

TEST_CASE("rrc taps: unit energy, symmetry, length") {
    const WaveformConfig cfg;
    const std::vector<double> h = rrc_taps(cfg);
    REQUIRE(int(h.size()) == cfg.rrc_span_symbols * cfg.samples_per_symbol + 1);

    double energy = 0.0;
    for (double t : h)
        energy += t * t;
    CHECK(energy == doctest::Approx(1.0).epsilon(1e-12));

    for (std::size_t i = 0; i < h.size(); ++i)
        CHECK(h[i] == doctest::Approx(h[h.size() - 1 - i]).epsilon(1e-12));

    WaveformConfig bad = cfg;
    bad.rrc_span_symbols = 5;
    CHECK_THROWS_AS(rrc_taps(bad), std::invalid_argument);
    bad = cfg;
    bad.rrc_rolloff = 0.0;
    CHECK_THROWS_AS(rrc_taps(bad), std::invalid_argument);
}

TEST_CASE("rrc satisfies the nyquist criterion after matched filtering") {
    const WaveformConfig cfg;
    const std::vector<double> h = rrc_taps(cfg);
    const int n = int(h.size());
    // autocorrelation at symbol-spaced lags vanishes except lag 0
    auto autocorr = [&](int lag) {
        double acc = 0.0;
        for (int i = 0; i + lag < n; ++i)
            acc += h[i] * h[i + lag];
        return acc;
    };
    const double r0 = autocorr(0);
    for (int k = 1; k <= cfg.rrc_span_symbols / 2; ++k)
        CHECK(std::abs(autocorr(k * cfg.samples_per_symbol)) / r0 < 0.01);
}

TEST_CASE("pulse shaping a single unit symbol yields the impulse response") {
    SymbolStream one;
    one.symbols = {{1.0, 0.0}};
    const WaveformConfig cfg;
    const std::vector<double> h = rrc_taps(cfg);
    const auto out = pulse_shape(one, cfg);
    REQUIRE(out.size() == h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        CHECK(out[i].real() == doctest::Approx(h[i]).epsilon(1e-12));
        CHECK(out[i].imag() == 0.0);
    }
}

TEST_CASE("sps 1 with full rolloff approximates a passthrough") {
    const SymbolStream s = gen_qpsk(64, 4);
    WaveformConfig cfg;
    cfg.samples_per_symbol = 1;
    cfg.rrc_rolloff = 1.0;
    const auto out = shaped_stream(s, cfg);
    REQUIRE(out.size() == s.symbols.size());
    double err = 0.0;
    for (std::size_t i = 8; i + 8 < out.size(); ++i)
        err += std::norm(out[i] - s.symbols[i]);
    err /= double(out.size() - 16);
    CHECK(err < 0.05);
}

TEST_CASE("shaped stream: length and symbol-peak alignment") {
    const WaveformConfig cfg;
    SymbolStream hot;
    hot.symbols.assign(11, {0.0, 0.0});
    hot.symbols[5] = {1.0, 0.0};
    const auto out = shaped_stream(hot, cfg);
    REQUIRE(int(out.size()) == 11 * cfg.samples_per_symbol);
    const std::vector<double> h = rrc_taps(cfg);
    const double peak = h[h.size() / 2];
    CHECK(out[5 * cfg.samples_per_symbol].real() == doctest::Approx(peak).epsilon(1e-12));
}

TEST_CASE("noise spec variance") {
    CHECK(NoiseSpec{10.0, 1.0}.variance() == doctest::Approx(0.1));
    CHECK(NoiseSpec{0.0, 2.0}.variance() == doctest::Approx(2.0));
    const NoiseSpec off{std::numeric_limits<double>::infinity(), 1.0};
    CHECK(off.noiseless());
    CHECK(off.variance() == 0.0);
}

TEST_CASE("noise-free frames are exact and rank 1") {
    const CarrierSpec carrier;
    const NoiseSpec off{std::numeric_limits<double>::infinity(), 1.0};

    // scalar channel: frame equals the baseband stream
    ArrayGeometry single;
    single.positions = {{0.0, 0.0}};
    const SteeringVector a1 = steering_vector(single, 0.3, carrier);
    const auto base = shaped_stream(gen_qpsk(16, 2), WaveformConfig{});
    const SnapshotFrame f1 = synth_frame(base, 0.3, a1, off, 5);
    REQUIRE(f1.samples.rows() == long(base.size()));
    for (long n = 0; n < f1.samples.rows(); ++n)
        CHECK(f1.samples(n, 0) == base[std::size_t(n)]);

    // rank-1 property: every row is baseband[n] times the same vector
    const ArrayGeometry uca = make_uca(6, 0.075);
    const SteeringVector a = steering_vector(uca, 1.2, carrier);
    const SnapshotFrame f = synth_frame(base, 1.2, a, off, 5);
    for (long n = 0; n < f.samples.rows(); ++n) {
        if (std::abs(base[std::size_t(n)]) < 1e-9)
            continue;
        for (int i = 0; i < 6; ++i)
            CHECK(std::abs(f.samples(n, i) / base[std::size_t(n)] - a.entries(i)) < 1e-12);
    }
}

TEST_CASE("noise variance is calibrated") {
    const CarrierSpec carrier;
    const ArrayGeometry g = make_ula(4, 0.05);
    const SteeringVector a = steering_vector(g, 0.8, carrier);
    const int n = 250000;
    const std::vector<std::complex<double>> silent(n, {0.0, 0.0});
    const NoiseSpec noise{10.0, 1.0}; // sigma^2 = 0.1
    const SnapshotFrame f = synth_frame(silent, 0.8, a, noise, 77);
    double var = 0.0;
    for (long r = 0; r < f.samples.rows(); ++r)
        for (int c = 0; c < 4; ++c)
            var += std::norm(f.samples(r, c));
    var /= double(n) * 4.0;
    CHECK(std::abs(var - 0.1) / 0.1 < 0.02);
}

TEST_CASE("synth_frame is deterministic and checks dimensions") {
    const CarrierSpec carrier;
    const ArrayGeometry g = make_ula(3, 0.05);
    const SteeringVector a = steering_vector(g, 0.1, carrier);
    const auto base = shaped_stream(gen_qpsk(8, 3), WaveformConfig{});
    const NoiseSpec noise{5.0, 1.0};
    const SnapshotFrame f1 = synth_frame(base, 0.1, a, noise, 11);
    const SnapshotFrame f2 = synth_frame(base, 0.1, a, noise, 11);
    CHECK((f1.samples - f2.samples).norm() == 0.0);

    const SnapshotFrame f3 = synth_frame(base, 0.1, a, noise, 12);
    CHECK((f1.samples - f3.samples).norm() > 0.0);

    CHECK_THROWS_AS(synth_frame({}, 0.1, a, noise, 1), std::invalid_argument);
}

TEST_CASE("random walk statistics") {
    const AoATrajectory flat = random_walk_aoa(0.7, 0.0, 50, 9);
    REQUIRE(flat.phi.size() == 50);
    for (double p : flat.phi)
        CHECK(p == 0.7);

    const AoATrajectory a = random_walk_aoa(0.0, 0.02, 30, 31);
    const AoATrajectory b = random_walk_aoa(0.0, 0.02, 30, 31);
    for (std::size_t i = 0; i < a.phi.size(); ++i)
        CHECK(a.phi[i] == b.phi[i]);

    // variance of the displacement after k steps grows like k sigma^2
    const int walks = 10000, frames = 20;
    const double std_step = 0.1;
    double acc = 0.0;
    for (int w = 0; w < walks; ++w) {
        const AoATrajectory t = random_walk_aoa(0.0, std_step, frames, 1000 + w);
        acc += t.phi.back() * t.phi.back();
    }
    const double expected = (frames - 1) * std_step * std_step;
    CHECK(std::abs(acc / walks - expected) / expected < 0.05);

    CHECK_THROWS_AS(random_walk_aoa(0.0, -0.1, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(random_walk_aoa(0.0, 0.1, 0, 1), std::invalid_argument);
}
