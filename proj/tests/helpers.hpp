#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <random>
#include <vector>

#include "tsshap/series.hpp"

namespace tsshap::testing {

inline std::vector<UnixTime> stamps(int n, Periodicity p, const std::string& start = "2015-01-01") {
    std::vector<UnixTime> out;
    UnixTime t = parse_iso8601(start);
    for (int i = 0; i < n; ++i) {
        out.push_back(t);
        t = add_period(t, p, 1);
    }
    return out;
}

inline TimeSeries series_of(const std::vector<double>& values,
                            Periodicity p = Periodicity::daily,
                            const std::string& start = "2015-01-01",
                            const std::string& name = "y") {
    Eigen::ArrayXd v = Eigen::Map<const Eigen::ArrayXd>(values.data(),
                                                        static_cast<Eigen::Index>(values.size()));
    return make_series(stamps(static_cast<int>(values.size()), p, start), v, p, {}, {}, name);
}

/// seasonal + mild trend + seeded gaussian noise; the acceptance fixture
inline TimeSeries seasonal_series(int n, int period, std::uint64_t seed,
                                  Periodicity p = Periodicity::monthly, double noise_sd = 0.5) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, noise_sd);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) {
        v[static_cast<std::size_t>(t)] = 10.0 + 0.02 * t +
                                         3.0 * std::sin(2.0 * M_PI * t / period) + noise(rng);
    }
    return series_of(v, p, "2000-01-01");
}

inline TimeSeries constant_series(int n, double c, Periodicity p = Periodicity::daily) {
    return series_of(std::vector<double>(static_cast<std::size_t>(n), c), p);
}

inline std::string test_tmp_dir() {
    const std::string dir = TSSHAP_TEST_TMP;
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace tsshap::testing
