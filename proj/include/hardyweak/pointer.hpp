// Copyright 2026 The hardyweak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Finite-strength arrival-time pointer.
 *
 * Each photon carries a Gaussian temporal wavepacket
 *   f(t) = (2 pi sigma^2)^(-1/4) exp(-t^2 / (4 sigma^2)),
 * so |f|^2 has standard deviation sigma. A polarizing interferometer delays
 * the H component by gamma and the V component by epsilon; after
 * post-selection the surviving temporal amplitude is
 *   A(t) = sum_l <post|l><l|pre> f(t - d_l),
 * whose normalized first moment tends to the weak value as sigma grows.
 */

#pragma once

#include "hardyweak/optics.hpp"
#include "hardyweak/state.hpp"
#include "hardyweak/weak_values.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace hardyweak {

class GridError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class EmptyPostSelection : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kMinGridPoints = 64;
inline constexpr std::size_t kDefaultGridPoints = 4096;
inline constexpr double kDefaultGridPadding = 8.0;
inline constexpr double kRequiredGridPadding = 6.0;

struct TimeGrid {
    double t_min = 0.0;
    double t_max = 0.0;
    std::size_t n_points = kDefaultGridPoints;

    [[nodiscard]] double step() const {
        return (t_max - t_min) / static_cast<double>(n_points - 1);
    }
    [[nodiscard]] double at(std::size_t i) const {
        return t_min + static_cast<double>(i) * step();
    }
    /// Trapezoid-rule weight of sample i.
    [[nodiscard]] double weight(std::size_t i) const {
        const double h = step();
        return (i == 0 || i + 1 == n_points) ? 0.5 * h : h;
    }
};

struct PointerSpec {
    double gamma = 0.0;
    double epsilon = 1.0;
    double sigma = 8.0;
    TimeGrid grid;

    [[nodiscard]] double weakness_ratio() const {
        return std::abs(epsilon - gamma) / sigma;
    }

    /// Throws GridError unless sigma > 0, n_points >= 64 and the grid covers
    /// [min(gamma, epsilon) - 6 sigma, max(gamma, epsilon) + 6 sigma].
    void validate() const {
        if (!(sigma > 0.0) || !std::isfinite(sigma)) {
            throw GridError("sigma must be positive");
        }
        if (!std::isfinite(gamma) || !std::isfinite(epsilon)) {
            throw GridError("delays must be finite");
        }
        if (grid.n_points < kMinGridPoints) {
            throw GridError("grid needs at least 64 points");
        }
        const double lo = std::min(gamma, epsilon) - kRequiredGridPadding * sigma;
        const double hi = std::max(gamma, epsilon) + kRequiredGridPadding * sigma;
        if (grid.t_min > lo || grid.t_max < hi) {
            throw GridError("grid does not span six widths around the delays");
        }
    }
};

/// Grid padded by eight widths on each side of the delays.
[[nodiscard]] inline PointerSpec
make_pointer_spec(double gamma, double epsilon, double sigma,
                  std::size_t n_points = kDefaultGridPoints) {
    PointerSpec spec{gamma, epsilon, sigma, {}};
    spec.grid.t_min = std::min(gamma, epsilon) - kDefaultGridPadding * sigma;
    spec.grid.t_max = std::max(gamma, epsilon) + kDefaultGridPadding * sigma;
    spec.grid.n_points = n_points;
    return spec;
}

/// Normalized Gaussian pointer amplitude centred at zero.
[[nodiscard]] inline double gaussian_amplitude(double t, double sigma) {
    const double norm = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25);
    return norm * std::exp(-t * t / (4.0 * sigma * sigma));
}

/// Overlap of two pointer amplitudes displaced by delta: exp(-delta^2/(8 sigma^2)).
[[nodiscard]] inline double gaussian_overlap(double delta, double sigma) {
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("sigma must be positive");
    }
    return std::exp(-delta * delta / (8.0 * sigma * sigma));
}

enum class MeasuredAxis { photon2, photon4, joint };

struct PointerProfile {
    /// Row-major for the joint case: index = i2 * n + i4.
    std::vector<Amplitude> amplitude;
    std::size_t axes = 1;
    MeasuredAxis measured = MeasuredAxis::photon2;
    PointerSpec spec;
    /// Closed-form squared norm of the post-selected pointer state.
    double success_probability = 0.0;
    double weakness_ratio = 0.0;
};

namespace detail {

inline double delay_for_level(const std::string &level, const PointerSpec &spec) {
    if (level == "H") {
        return spec.gamma;
    }
    if (level == "V") {
        return spec.epsilon;
    }
    throw StructuralError("no arrival delay defined for level '" + level + "'");
}

} // namespace detail

/**
 * Post-selected temporal amplitude for one photon or both.
 *
 * For a single photon the partner's levels are summed coherently, since its
 * pointer is not read.
 */
[[nodiscard]] inline PointerProfile
build_pointer_profile(const StateVector &pre, const StateVector &post,
                      MeasuredAxis measured, const PointerSpec &spec) {
    spec.validate();
    const Structure structure = photon_pair_structure();
    if (!(pre.structure() == structure) || !(post.structure() == structure)) {
        throw StructuralError("pointer states must live on photons 2 and 4");
    }

    // Transition weights <post|l><l|pre>, keyed by the delays they pick up.
    std::map<std::array<double, 2>, Amplitude> weights;
    for (const auto &label : structure.product_labels()) {
        const Amplitude w =
            std::conj(post.amplitude(label)) * pre.amplitude(label);
        if (w == Amplitude{}) {
            continue;
        }
        const double d2 = detail::delay_for_level(
            structure[0].levels[label.levels[0]], spec);
        const double d4 = detail::delay_for_level(
            structure[1].levels[label.levels[1]], spec);
        switch (measured) {
        case MeasuredAxis::photon2:
            weights[{d2, 0.0}] += w;
            break;
        case MeasuredAxis::photon4:
            weights[{d4, 0.0}] += w;
            break;
        case MeasuredAxis::joint:
            weights[{d2, d4}] += w;
            break;
        }
    }

    PointerProfile profile;
    profile.spec = spec;
    profile.measured = measured;
    profile.axes = measured == MeasuredAxis::joint ? 2 : 1;
    profile.weakness_ratio = spec.weakness_ratio();

    const std::size_t n = spec.grid.n_points;
    std::map<double, std::vector<double>> shifted;
    auto wavepacket = [&](double delay) -> const std::vector<double> & {
        auto it = shifted.find(delay);
        if (it != shifted.end()) {
            return it->second;
        }
        std::vector<double> samples(n);
        for (std::size_t i = 0; i < n; ++i) {
            samples[i] = gaussian_amplitude(spec.grid.at(i) - delay, spec.sigma);
        }
        return shifted.emplace(delay, std::move(samples)).first->second;
    };

    double closed_form = 0.0;
    for (const auto &[da, wa] : weights) {
        for (const auto &[db, wb] : weights) {
            double ov = gaussian_overlap(da[0] - db[0], spec.sigma);
            if (profile.axes == 2) {
                ov *= gaussian_overlap(da[1] - db[1], spec.sigma);
            }
            closed_form += (std::conj(wa) * wb).real() * ov;
        }
    }
    profile.success_probability = closed_form;

    if (profile.axes == 1) {
        profile.amplitude.assign(n, Amplitude{});
        for (const auto &[d, w] : weights) {
            const auto &f = wavepacket(d[0]);
            for (std::size_t i = 0; i < n; ++i) {
                profile.amplitude[i] += w * f[i];
            }
        }
    } else {
        profile.amplitude.assign(n * n, Amplitude{});
        for (const auto &[d, w] : weights) {
            const auto &f2 = wavepacket(d[0]);
            const auto &f4 = wavepacket(d[1]);
            for (std::size_t i = 0; i < n; ++i) {
                const Amplitude row = w * f2[i];
                Amplitude *out = profile.amplitude.data() + i * n;
                for (std::size_t j = 0; j < n; ++j) {
                    out[j] += row * f4[j];
                }
            }
        }
    }
    return profile;
}

struct PointerMoments {
    std::vector<double> mean;
    std::vector<double> variance;
    /// Trapezoidal squared norm of the profile.
    double success_probability = 0.0;
};

[[nodiscard]] inline PointerMoments pointer_moments(const PointerProfile &profile) {
    const auto &grid = profile.spec.grid;
    const std::size_t n = grid.n_points;
    // Marginal densities per axis, then moments of each marginal.
    std::vector<std::vector<double>> marginals(profile.axes,
                                               std::vector<double>(n, 0.0));
    if (profile.axes == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            marginals[0][i] = std::norm(profile.amplitude[i]);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const Amplitude *row = profile.amplitude.data() + i * n;
            for (std::size_t j = 0; j < n; ++j) {
                const double p = std::norm(row[j]);
                marginals[0][i] += grid.weight(j) * p;
                marginals[1][j] += grid.weight(i) * p;
            }
        }
    }

    PointerMoments moments;
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        norm += grid.weight(i) * marginals[0][i];
    }
    if (!(norm > 1e-12)) {
        throw EmptyPostSelection("post-selected pointer state has vanishing norm");
    }
    moments.success_probability = norm;
    for (const auto &m : marginals) {
        double first = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            first += grid.weight(i) * grid.at(i) * m[i];
        }
        const double mean = first / norm;
        double second = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dt = grid.at(i) - mean;
            second += grid.weight(i) * dt * dt * m[i];
        }
        moments.mean.push_back(mean);
        moments.variance.push_back(second / norm);
    }
    return moments;
}

[[nodiscard]] inline ArrivalKind arrival_kind_for(MeasuredAxis measured) {
    switch (measured) {
    case MeasuredAxis::photon2:
        return ArrivalKind::single_photon2;
    case MeasuredAxis::photon4:
        return ArrivalKind::single_photon4;
    case MeasuredAxis::joint:
        break;
    }
    return ArrivalKind::joint;
}

struct SweepRow {
    double sigma = 0.0;
    double weakness_ratio = 0.0;
    std::vector<double> mean;
    std::vector<double> deviation;
    double success_probability = 0.0;
};

/// Pointer means per sigma against Re of the matching arrival-time weak value.
[[nodiscard]] inline std::vector<SweepRow>
weak_limit_sweep(const StateVector &pre, const StateVector &post,
                 MeasuredAxis measured, double gamma, double epsilon,
                 const std::vector<double> &sigmas,
                 std::size_t n_points = kDefaultGridPoints) {
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
        if (!(sigmas[i] > 0.0)) {
            throw GridError("sweep widths must be positive");
        }
        if (i > 0 && !(sigmas[i] > sigmas[i - 1])) {
            throw GridError("sweep widths must be ascending");
        }
    }
    const auto weak = weak_value(
        arrival_time_operator(arrival_kind_for(measured), gamma, epsilon), pre,
        post);

    std::vector<SweepRow> rows;
    rows.reserve(sigmas.size());
    for (double sigma : sigmas) {
        const auto spec = make_pointer_spec(gamma, epsilon, sigma, n_points);
        const auto profile = build_pointer_profile(pre, post, measured, spec);
        const auto moments = pointer_moments(profile);
        SweepRow row{sigma, profile.weakness_ratio, moments.mean, {},
                     moments.success_probability};
        for (std::size_t k = 0; k < moments.mean.size(); ++k) {
            row.deviation.push_back(
                std::abs(moments.mean[k] - weak.value[k].real()));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace hardyweak
