#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "oracles.hpp"
#include "panqa/spectral.hpp"

using namespace panqa;

namespace {

Band constant_band(int rows, int cols, double value, int depth = 8) {
    Band band(rows, cols, depth, value);
    return band;
}

}  // namespace

TEST_CASE("std_dev: closed forms and the naive oracle") {
    CHECK(std_dev(constant_band(4, 4, 7)) == 0.0);

    Band spread(2, 2, 8);
    spread.values = {0, 255, 255, 0};
    CHECK(std_dev(spread) == doctest::Approx(127.5).epsilon(1e-12));
    CHECK(std_dev(spread) == doctest::Approx(oracle::sd(spread)).epsilon(1e-12));
}

TEST_CASE("std_dev: translation invariance is exact for integer bands") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Band band = oracle::random_band(seed, 16, 16, 0, 200);
        Band shifted = band;
        for (double& v : shifted.values) v += 55.0;
        CHECK(std_dev(band) == std_dev(shifted));
    }
}

TEST_CASE("entropy: constant, uniform and permutation cases") {
    CHECK(entropy(constant_band(4, 4, 9)) == 0.0);

    Band uniform(16, 16, 8);
    for (int k = 0; k < 256; ++k) uniform.values[static_cast<std::size_t>(k)] = k;
    CHECK(entropy(uniform) == 8.0);

    // bins follow the declared depth
    Band six(8, 8, 6);
    for (std::size_t k = 0; k < 64; ++k) six.values[k] = static_cast<double>(k);
    CHECK(entropy(six) == 6.0);

    const Band band = oracle::random_band(3, 16, 16, 0, 255);
    Band permuted = band;
    std::mt19937_64 rng(99);
    for (std::size_t k = permuted.values.size(); k > 1; --k) {
        std::swap(permuted.values[k - 1], permuted.values[rng() % k]);
    }
    CHECK(entropy(band) == entropy(permuted));
    CHECK(entropy(band) <= 8.0);
}

TEST_CASE("snr: hand value and identical-image error") {
    Band f(2, 2, 8, 2.0);
    Band m(2, 2, 8, 1.0);
    CHECK(snr(f, m) == doctest::Approx(2.0).epsilon(1e-12));  // sqrt(16/4)
    CHECK_THROWS_WITH_AS(snr(f, f), doctest::Contains("identical"), Error);
}

TEST_CASE("deviation_index: hand value, zero exclusion, all-zero error") {
    Band f(2, 2, 8);
    Band m(2, 2, 8);
    f.values = {3, 1, 1, 1};
    m.values = {2, 1, 1, 1};
    DeviationResult r = deviation_index(f, m);
    CHECK(r.di == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(r.excluded == 0);

    CHECK(deviation_index(m, m).di == 0.0);

    m.values = {0, 1, 1, 1};
    f.values = {5, 1, 1, 1};
    r = deviation_index(f, m);
    CHECK(r.excluded == 1);
    CHECK(r.di == 0.0);  // the only differing pixel was excluded

    Band zeros(2, 2, 8, 0.0);
    CHECK_THROWS_WITH_AS(deviation_index(f, zeros),
                         doctest::Contains("all reference pixels are zero"), Error);
}

TEST_CASE("correlation: identity, anti-linear, constant error") {
    const Band m = oracle::random_band(17, 8, 8, 10, 240);
    CHECK(correlation(m, m) == 1.0);

    Band anti = m;
    for (double& v : anti.values) v = 250.0 - 0.5 * v;
    CHECK(correlation(anti, m) == doctest::Approx(-1.0).epsilon(1e-12));

    CHECK_THROWS_WITH_AS(correlation(constant_band(4, 4, 5), m),
                         doctest::Contains("constant"), Error);
}

TEST_CASE("correlation: symmetric, invariant under positive affine maps") {
    const Band f = oracle::random_band(23, 16, 16, 0, 255);
    const Band m = oracle::random_band(24, 16, 16, 0, 255);
    CHECK(correlation(f, m) == correlation(m, f));

    Band affine = f;
    for (double& v : affine.values) v = 1.75 * v + 11.0;
    CHECK(correlation(affine, m) == doctest::Approx(correlation(f, m)).epsilon(1e-9));
}

TEST_CASE("nrmse: identity, maximal error, symmetry, peak guard") {
    const Band m = oracle::random_band(31, 8, 8, 0, 255);
    CHECK(nrmse(m, m) == 0.0);

    Band low(4, 4, 8, 0.0);
    Band high(4, 4, 8, 255.0);
    CHECK(nrmse(high, low) == doctest::Approx(1.0).epsilon(1e-12));

    const Band f = oracle::random_band(32, 8, 8, 0, 255);
    CHECK(nrmse(f, m) == nrmse(m, f));
    CHECK_THROWS_AS(nrmse(f, m, 0.0), Error);
}

TEST_CASE("all six metrics match the naive oracles on seeded pairs") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Band f = oracle::random_band(1000 + seed, 16, 16, 0, 255);
        const Band m = oracle::random_band(2000 + seed, 16, 16, 0, 255);
        CHECK(std::abs(std_dev(f) - oracle::sd(f)) <= 1e-12);
        CHECK(std::abs(entropy(f) - oracle::entropy(f)) <= 1e-12);
        CHECK(std::abs(snr(f, m) - oracle::snr(f, m)) <= 1e-12);
        long excluded = 0;
        CHECK(std::abs(deviation_index(f, m).di - oracle::di(f, m, &excluded)) <= 1e-12);
        CHECK(deviation_index(f, m).excluded == excluded);
        CHECK(std::abs(correlation(f, m) - oracle::cc(f, m)) <= 1e-12);
        CHECK(std::abs(nrmse(f, m) - oracle::nrmse(f, m, 255.0)) <= 1e-12);
    }
}

TEST_CASE("noise ladder: nrmse/di rise, snr/cc fall") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Band m = oracle::random_band(500 + seed, 16, 16, 64, 191);
        const Band noise = oracle::random_real_band(700 + seed, 16, 16, -1.0, 1.0);
        double prev_nrmse = -1.0, prev_di = -1.0;
        double prev_snr = 1e300, prev_cc = 2.0;
        for (const double sigma : {4.0, 12.0, 28.0}) {
            Band f = m;
            for (std::size_t k = 0; k < f.values.size(); ++k) {
                f.values[k] = std::clamp(m.values[k] + sigma * noise.values[k], 0.0, 255.0);
            }
            const double cur_nrmse = nrmse(f, m);
            const double cur_di = deviation_index(f, m).di;
            const double cur_snr = snr(f, m);
            const double cur_cc = correlation(f, m);
            CHECK(cur_nrmse > prev_nrmse);
            CHECK(cur_di > prev_di);
            CHECK(cur_snr < prev_snr);
            CHECK(cur_cc < prev_cc);
            prev_nrmse = cur_nrmse;
            prev_di = cur_di;
            prev_snr = cur_snr;
            prev_cc = cur_cc;
        }
    }
}

TEST_CASE("spectral_report: shape, identity flags, compositional equality") {
    MultibandImage fused, reference;
    for (int b = 0; b < 3; ++b) {
        const std::string name(1, "rgb"[b]);
        fused.add(name, oracle::random_band(3000 + b, 12, 12, 1, 255));
        reference.add(name, oracle::random_band(4000 + b, 12, 12, 1, 255));
    }

    const auto rows = spectral_report(fused, reference, "test");
    REQUIRE(rows.size() == 3);
    for (std::size_t b = 0; b < 3; ++b) {
        const Band& f = fused.bands[b].second;
        const Band& m = reference.bands[b].second;
        CHECK(rows[b].method_name == "test");
        CHECK(rows[b].band_name == fused.bands[b].first);
        CHECK(*rows[b].sd == std_dev(f));
        CHECK(*rows[b].en == entropy(f));
        CHECK(*rows[b].snr == snr(f, m));
        CHECK(*rows[b].nrmse == nrmse(f, m));
        CHECK(*rows[b].di == deviation_index(f, m).di);
        CHECK(*rows[b].cc == correlation(f, m));
    }

    const auto self = spectral_report(reference, reference, "self");
    for (const SpectralRow& row : self) {
        CHECK(!row.snr.has_value());
        REQUIRE(row.flags.size() == 1);
        CHECK(row.flags[0].find("identical") != std::string::npos);
        CHECK(*row.di == 0.0);
        CHECK(*row.nrmse == 0.0);
        CHECK(*row.cc == 1.0);
    }

    MultibandImage wrong;
    wrong.add("r", oracle::random_band(1, 12, 12, 0, 255));
    CHECK_THROWS_WITH_AS(spectral_report(wrong, reference, "x"),
                         doctest::Contains("band sets differ"), Error);
}
