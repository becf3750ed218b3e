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

// Test-only fixtures: literal output states of the four interferometer
// configurations, independent oracles, and random-state generators.

#pragma once

#include "hardyweak/hardyweak.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

namespace hardyweak::fixtures {

inline constexpr Amplitude kI{0.0, 1.0};

inline Structure exit_structure() {
    return Structure{{kPositron, levels::exits}, {kElectron, levels::exits}};
}

/// Literal final states, written out term by term.
inline StateVector literal_hardy_state(int case_number) {
    const double r2 = std::numbers::sqrt2;
    StateVector s(exit_structure());
    switch (case_number) {
    case 1: // both second splitters present
        s.add_gamma(-2.0 / 4.0);
        s.add({"c", "c"}, -3.0 / 4.0);
        s.add({"c", "d"}, kI / 4.0);
        s.add({"d", "c"}, kI / 4.0);
        s.add({"d", "d"}, -1.0 / 4.0);
        break;
    case 2: // positron's absent
        s.add_gamma(-r2 / (2.0 * r2));
        s.add({"c", "c"}, -1.0 / (2.0 * r2));
        s.add({"c", "d"}, kI / (2.0 * r2));
        s.add({"d", "c"}, 2.0 * kI / (2.0 * r2));
        break;
    case 3: // electron's absent
        s.add_gamma(-r2 / (2.0 * r2));
        s.add({"c", "c"}, -1.0 / (2.0 * r2));
        s.add({"c", "d"}, 2.0 * kI / (2.0 * r2));
        s.add({"d", "c"}, kI / (2.0 * r2));
        break;
    default: // both absent
        s.add_gamma(-0.5);
        s.add({"c", "d"}, kI / 2.0);
        s.add({"d", "c"}, kI / 2.0);
        s.add({"d", "d"}, 0.5);
        break;
    }
    return s;
}

inline HardyConfig config_for_case(int case_number) {
    switch (case_number) {
    case 1:
        return {true, true};
    case 2:
        return {false, true};
    case 3:
        return {true, false};
    default:
        return {false, false};
    }
}

/// Closed-form joint pointer mean of photon 2 for the paradox states with
/// gamma = 0: eps (1 - u + u^2) / (3 - 4u + 2u^2), u = exp(-eps^2 / (8 sigma^2)).
inline double closed_form_joint_mean(double epsilon, double sigma) {
    const double u = std::exp(-epsilon * epsilon / (8.0 * sigma * sigma));
    return epsilon * (1.0 - u + u * u) / (3.0 - 4.0 * u + 2.0 * u * u);
}

/// Same quantity by direct 2-D Simpson integration of the written-out
/// post-selected amplitude (ab - ab' - a'b)/(2 sqrt 3), independent of the
/// library's profile builder.
inline double integrated_joint_mean(double epsilon, double sigma, int n = 801) {
    const double lo = -10.0 * sigma;
    const double hi = epsilon + 10.0 * sigma;
    const double h = (hi - lo) / (n - 1);
    auto f = [&](double t) {
        return std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25) *
               std::exp(-t * t / (4.0 * sigma * sigma));
    };
    auto simpson = [&](int i) {
        if (i == 0 || i == n - 1) {
            return h / 3.0;
        }
        return (i % 2 == 1 ? 4.0 : 2.0) * h / 3.0;
    };
    std::vector<double> a(n), ap(n), t(n);
    for (int i = 0; i < n; ++i) {
        t[i] = lo + i * h;
        a[i] = f(t[i]);
        ap[i] = f(t[i] - epsilon);
    }
    double norm = 0.0;
    double first = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double amp = (a[i] * a[j] - a[i] * ap[j] - ap[i] * a[j]) /
                               (2.0 * std::sqrt(3.0));
            const double w = simpson(i) * simpson(j) * amp * amp;
            norm += w;
            first += w * t[i];
        }
    }
    return first / norm;
}

inline Amplitude random_amplitude(std::mt19937_64 &rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    return {g(rng), g(rng)};
}

/// Random state on `structure` with every product label populated.
inline StateVector random_state(const Structure &structure, std::mt19937_64 &rng,
                                bool normalize = true) {
    StateVector s(structure);
    for (const auto &label : structure.product_labels()) {
        s.add(label, random_amplitude(rng));
    }
    return normalize ? s.renormalized() : s;
}

} // namespace hardyweak::fixtures
