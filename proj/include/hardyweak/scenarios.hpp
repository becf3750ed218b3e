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
 * End-to-end presets: the interleaved-interferometer gedankenexperiment, its
 * counterfactual contradiction, the entanglement-swap preparation of the
 * photon pair, and the weak arrival-time measurement on that pair.
 */

#pragma once

#include "hardyweak/optics.hpp"
#include "hardyweak/pointer.hpp"
#include "hardyweak/state.hpp"
#include "hardyweak/weak_values.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hardyweak {

// ---------------------------------------------------------------------------
// Gedankenexperiment

struct HardyConfig {
    bool bs2_positron_present = true;
    bool bs2_electron_present = true;

    /// 1: both present, 2: positron's absent, 3: electron's absent, 4: both absent.
    [[nodiscard]] int case_number() const {
        if (bs2_positron_present) {
            return bs2_electron_present ? 1 : 3;
        }
        return bs2_electron_present ? 2 : 4;
    }
};

/// Outcome probabilities; the exit labels read positron first.
struct HardyProbabilities {
    double gamma = 0.0;
    double cc = 0.0;
    double cd = 0.0;
    double dc = 0.0;
    double dd = 0.0;

    [[nodiscard]] double total() const { return gamma + cc + cd + dc + dd; }
};

struct HardyResult {
    StateVector state;
    HardyProbabilities probabilities;
};

[[nodiscard]] inline Structure hardy_source_structure() {
    return Structure{{kPositron, levels::source}, {kElectron, levels::source}};
}

/// Both particles split at their first beamsplitters, O+O- annihilated.
[[nodiscard]] inline StateVector
hardy_after_annihilation(const BeamsplitterConvention &bs = {}) {
    StateVector source(hardy_source_structure(), {{{"in", "in"}, 1.0}});
    auto split = apply_first_beamsplitter(source, kPositron, bs);
    split = apply_first_beamsplitter(split, kElectron, bs);
    return apply_annihilation(split);
}

[[nodiscard]] inline HardyResult
run_hardy_gedanken(const HardyConfig &config,
                   const BeamsplitterConvention &bs = {}) {
    auto state = hardy_after_annihilation(bs);
    state = apply_second_beamsplitter(state, kPositron,
                                      config.bs2_positron_present, bs);
    state = apply_second_beamsplitter(state, kElectron,
                                      config.bs2_electron_present, bs);
    HardyResult result{state, {}};
    auto p = [&](const char *plus, const char *minus) {
        return condition(state, {{kPositron, plus}, {kElectron, minus}}).weight;
    };
    result.probabilities.gamma = std::norm(state.gamma_amplitude());
    result.probabilities.cc = p("c", "c");
    result.probabilities.cd = p("c", "d");
    result.probabilities.dc = p("d", "c");
    result.probabilities.dd = p("d", "d");
    return result;
}

// ---------------------------------------------------------------------------
// Counterfactual reasoning

/// Hypothetical local values: C at the exits with the second splitters
/// removed, D with them in place.
struct CounterfactualAssignment {
    bool c_plus_removed = false;
    bool c_minus_removed = false;
    bool d_plus_present = false;
    bool d_minus_present = false;

    bool operator==(const CounterfactualAssignment &) const = default;
};

struct CounterfactualConstraint {
    std::string name;
    bool (*holds)(const CounterfactualAssignment &);
};

[[nodiscard]] inline std::vector<CounterfactualConstraint>
counterfactual_constraints() {
    return {
        {"C+(inf) C-(inf) = 0",
         [](const CounterfactualAssignment &a) {
             return !(a.c_plus_removed && a.c_minus_removed);
         }},
        {"D+(0) = 1 => C-(inf) = 1",
         [](const CounterfactualAssignment &a) {
             return !a.d_plus_present || a.c_minus_removed;
         }},
        {"D-(0) = 1 => C+(inf) = 1",
         [](const CounterfactualAssignment &a) {
             return !a.d_minus_present || a.c_plus_removed;
         }},
        {"D+(0) D-(0) = 1",
         [](const CounterfactualAssignment &a) {
             return a.d_plus_present && a.d_minus_present;
         }},
    };
}

struct AssignmentVerdict {
    CounterfactualAssignment assignment;
    std::vector<std::size_t> failed;
};

struct CounterfactualReport {
    std::vector<std::string> constraints;
    std::vector<CounterfactualAssignment> satisfying;
    /// Satisfying assignments when the coincidence constraint is dropped.
    std::vector<CounterfactualAssignment> satisfying_without_coincidence;
    std::vector<AssignmentVerdict> verdicts;
};

[[nodiscard]] inline CounterfactualReport counterfactual_check() {
    const auto constraints = counterfactual_constraints();
    CounterfactualReport report;
    for (const auto &c : constraints) {
        report.constraints.push_back(c.name);
    }
    for (unsigned bits = 0; bits < 16; ++bits) {
        CounterfactualAssignment a{(bits & 8U) != 0, (bits & 4U) != 0,
                                   (bits & 2U) != 0, (bits & 1U) != 0};
        AssignmentVerdict verdict{a, {}};
        for (std::size_t k = 0; k < constraints.size(); ++k) {
            if (!constraints[k].holds(a)) {
                verdict.failed.push_back(k);
            }
        }
        if (verdict.failed.empty()) {
            report.satisfying.push_back(a);
        }
        const bool only_coincidence_fails =
            verdict.failed.empty() ||
            (verdict.failed.size() == 1 &&
             verdict.failed.front() == constraints.size() - 1);
        if (only_coincidence_fails) {
            report.satisfying_without_coincidence.push_back(a);
        }
        report.verdicts.push_back(std::move(verdict));
    }
    return report;
}

// ---------------------------------------------------------------------------
// Reference states

inline const std::string kPhoton1 = "1";
inline const std::string kPhoton3 = "3";

/// Non-maximally entangled pair (|HH> + |HV> + |VH>)/sqrt3 on photons 2, 4.
[[nodiscard]] inline StateVector hardy_photon_state() {
    const double a = 1.0 / std::sqrt(3.0);
    return StateVector(photon_pair_structure(),
                       {{{"H", "H"}, a}, {{"H", "V"}, a}, {{"V", "H"}, a}});
}

/// Post-selection (|HH> - |HV> - |VH> + |VV>)/2, both photons on (H-V)/sqrt2.
[[nodiscard]] inline StateVector hardy_photon_post_selection() {
    return StateVector(photon_pair_structure(), {{{"H", "H"}, 0.5},
                                                 {{"H", "V"}, -0.5},
                                                 {{"V", "H"}, -0.5},
                                                 {{"V", "V"}, 0.5}});
}

[[nodiscard]] inline Structure path_arm_structure() {
    return Structure{{kPositron, levels::arms}, {kElectron, levels::arms}};
}

/// Electron-positron state past the annihilation point, as usually quoted:
/// (|O+ NO-> + |NO+ O-> + |NO+ NO->)/sqrt3.
[[nodiscard]] inline StateVector path_pre_selection() {
    const double a = 1.0 / std::sqrt(3.0);
    return StateVector(path_arm_structure(),
                       {{{"O", "NO"}, a}, {{"NO", "O"}, a}, {{"NO", "NO"}, a}});
}

/// Both dark detectors firing: (|NO+> - |O+>)(|NO-> - |O->)/2.
[[nodiscard]] inline StateVector path_post_selection() {
    return StateVector(path_arm_structure(), {{{"NO", "NO"}, 0.5},
                                              {{"NO", "O"}, -0.5},
                                              {{"O", "NO"}, -0.5},
                                              {{"O", "O"}, 0.5}});
}

/// Two polarization-entangled pairs (|H1 H2> + |V1 V2>)(|H3 H4> + |V3 V4>)/2.
[[nodiscard]] inline StateVector four_photon_source() {
    const double s = 1.0 / std::numbers::sqrt2;
    StateVector pair12(Structure{{kPhoton1, levels::polarization},
                                 {kPhoton2, levels::polarization}},
                       {{{"H", "H"}, s}, {{"V", "V"}, s}});
    StateVector pair34(Structure{{kPhoton3, levels::polarization},
                                 {kPhoton4, levels::polarization}},
                       {{{"H", "H"}, s}, {{"V", "V"}, s}});
    return tensor(pair12, pair34);
}

// ---------------------------------------------------------------------------
// Entanglement swap

enum class SwapMode { coherent, decohered };

struct SwapBranch {
    /// Which of photons 1, 3 left through the reflected (V) port, e.g. "V1";
    /// "none" if both reached the conventional beamsplitter. "merged" for the
    /// single coherent branch.
    std::string environment;
    Subnormalized state;
};

struct SwapResult {
    std::vector<SwapBranch> branches;
    double success_probability = 0.0;
    SwapMode mode = SwapMode::coherent;
};

/// Phase on each input arm of the conventional beamsplitter (photon-1 arm,
/// photon-3 arm) that makes the heralded pair exactly the target state
/// under the default convention.
[[nodiscard]] inline std::vector<double> default_swap_calibration() {
    return {0.0, -std::numbers::pi / 2.0};
}

/**
 * Heralds photons 2, 4 by a bucket detector on output "c" of the
 * beamsplitter combining the transmitted (H) arms of photons 1 and 3, with
 * output "d" dark.
 */
[[nodiscard]] inline SwapResult
run_entanglement_swap(SwapMode mode,
                      const std::vector<double> &phase_calibration =
                          default_swap_calibration(),
                      const BeamsplitterConvention &bs = {}) {
    if (phase_calibration.size() != 2) {
        throw std::invalid_argument(
            "swap calibration needs one phase per beamsplitter input (2)");
    }
    const Amplitude phase_a = std::polar(1.0, phase_calibration[0]);
    const Amplitude phase_b = std::polar(1.0, phase_calibration[1]);

    StateVector routed = apply_pbs(apply_pbs(four_photon_source(), kPhoton1),
                                   kPhoton3);
    const Structure &structure = routed.structure();
    const std::size_t i1 = structure.index_of(kPhoton1);
    const std::size_t i2 = structure.index_of(kPhoton2);
    const std::size_t i3 = structure.index_of(kPhoton3);
    const std::size_t i4 = structure.index_of(kPhoton4);
    constexpr std::size_t kTransmit = 0;

    const Structure pair = photon_pair_structure();
    std::map<std::string, StateVector> branches;

    for (const auto &[label, amp] : routed.amplitudes()) {
        const bool a_occupied = label.levels[i1] == kTransmit;
        const bool b_occupied = label.levels[i3] == kTransmit;
        std::string environment;
        if (!a_occupied) {
            environment += "V1";
        }
        if (!b_occupied) {
            environment += environment.empty() ? "V3" : " V3";
        }
        if (environment.empty()) {
            environment = "none";
        }

        FockModeState input({"a", "b"});
        Amplitude phase{1.0, 0.0};
        if (a_occupied) {
            phase *= phase_a;
        }
        if (b_occupied) {
            phase *= phase_b;
        }
        input.add({a_occupied ? 1 : 0, b_occupied ? 1 : 0}, phase);
        const FockModeState output = hom_combine(input, {"c", "d"}, bs);

        BasisLabel partners;
        partners.levels = {label.levels[i2], label.levels[i4]};
        for (const auto &[occ, fock_amp] : output.amplitudes()) {
            if (occ[0] < 1 || occ[1] != 0) {
                continue;
            }
            auto [it, inserted] = branches.try_emplace(environment, pair);
            it->second.add(partners, amp * fock_amp);
        }
    }

    SwapResult result;
    result.mode = mode;
    if (mode == SwapMode::coherent) {
        StateVector merged(pair);
        for (const auto &[env, state] : branches) {
            merged += state;
        }
        const double w = merged.norm_squared();
        result.branches.push_back({"merged", {merged, w}});
        result.success_probability = w;
    } else {
        for (const auto &[env, state] : branches) {
            const double w = state.norm_squared();
            result.branches.push_back({env, {state, w}});
            result.success_probability += w;
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Photonic weak measurement

/// Post-selection realized by rotating each analyzer basis by phi and
/// keeping H at both detectors.
[[nodiscard]] inline StateVector analyzer_post_selection(double phi) {
    const auto back = polarization_rotation_map(phi).adjoint();
    StateVector hh(photon_pair_structure(), {{{"H", "H"}, 1.0}});
    return apply_level_map(apply_level_map(hh, kPhoton2, back), kPhoton4, back);
}

inline constexpr double kDefaultAnalyzerAngle = -std::numbers::pi / 4.0;

struct OccupationTable {
    /// N-_O, N+_O, N-_NO, N+_NO.
    std::array<Amplitude, 4> single;
    /// N_{O,O}, N_{O,NO}, N_{NO,O}, N_{NO,NO} (positron arm first).
    std::array<Amplitude, 4> joint;
    Amplitude overlap;
};

/// Occupation weak values on any two-particle space whose levels are arms,
/// or polarizations read through the dictionary.
[[nodiscard]] inline OccupationTable
occupation_table(const StateVector &pre, const StateVector &post,
                 const PathPolarizationDictionary &dict = {}) {
    const Structure &s = pre.structure();
    auto wv = [&](const WeightedProjectorSum &op) {
        return weak_value(op, pre, post).value.front();
    };
    const std::string plus = s[0].id;
    const std::string minus = s[1].id;
    OccupationTable t;
    t.single = {wv(occupation_operator(s, minus, "O", dict)),
                wv(occupation_operator(s, plus, "O", dict)),
                wv(occupation_operator(s, minus, "NO", dict)),
                wv(occupation_operator(s, plus, "NO", dict))};
    t.joint = {wv(joint_occupation_operator(s, "O", "O", dict)),
               wv(joint_occupation_operator(s, "O", "NO", dict)),
               wv(joint_occupation_operator(s, "NO", "O", dict)),
               wv(joint_occupation_operator(s, "NO", "NO", dict))};
    t.overlap = weak_value(WeightedProjectorSum::identity(s), pre, post).overlap;
    return t;
}

struct PhotonicWeakReport {
    double gamma = 0.0;
    double epsilon = 0.0;
    double phi = kDefaultAnalyzerAngle;
    StateVector pre;
    StateVector post;
    Amplitude overlap;
    double success_probability = 0.0;
    double swap_success_probability = 0.0;
    Amplitude a2;
    Amplitude a4;
    std::array<Amplitude, 2> a24;
    std::vector<ProjectorWeakValue> decomposition;
    /// Occupation numbers read off the arrival-time projectors.
    OccupationTable occupations;
    /// max |sum of projector contributions - A24_w|.
    double recombination_residual = 0.0;
    /// max |A24_w - (eps, eps)|; zero at phi = -pi/4.
    double paradox_residual = 0.0;
};

/**
 * Weak arrival times of photons 2 and 4, pre-selected by the calibrated
 * coherent swap and post-selected by analyzers at angle phi.
 */
[[nodiscard]] inline PhotonicWeakReport
run_photonic_weak(double gamma, double epsilon,
                  double phi = kDefaultAnalyzerAngle) {
    const auto swap = run_entanglement_swap(SwapMode::coherent);
    PhotonicWeakReport r;
    r.gamma = gamma;
    r.epsilon = epsilon;
    r.phi = phi;
    r.swap_success_probability = swap.success_probability;
    r.pre = swap.branches.front().state.state.renormalized();
    r.post = analyzer_post_selection(phi);

    const auto joint_op = arrival_time_operator(ArrivalKind::joint, gamma, epsilon);
    const auto joint = weak_value(joint_op, r.pre, r.post);
    r.overlap = joint.overlap;
    r.success_probability = joint.success_probability;
    r.a24 = {joint.value[0], joint.value[1]};
    r.a2 = weak_value(arrival_time_operator(ArrivalKind::single_photon2, gamma,
                                            epsilon),
                      r.pre, r.post)
               .value.front();
    r.a4 = weak_value(arrival_time_operator(ArrivalKind::single_photon4, gamma,
                                            epsilon),
                      r.pre, r.post)
               .value.front();
    r.decomposition = projector_weak_decomposition(joint_op, r.pre, r.post);
    r.occupations = occupation_table(r.pre, r.post);

    // (gamma, eps) + (eps, gamma) - (gamma, gamma) is (eps, eps) componentwise.
    const auto recombined = recombine(r.decomposition);
    for (std::size_t k = 0; k < 2; ++k) {
        r.recombination_residual =
            std::max(r.recombination_residual, std::abs(recombined[k] - r.a24[k]));
        r.paradox_residual = std::max(r.paradox_residual, std::abs(r.a24[k] - epsilon));
    }
    return r;
}

// ---------------------------------------------------------------------------
// Consistency between the quoted path states and the optical pipeline

struct QuotedStateConsistency {
    /// Quoted electron-positron states.
    OccupationTable literal;
    /// Convention-built post-annihilation state, post-selection pulled back
    /// through both second beamsplitters from <d+ d-|.
    OccupationTable pipeline;
    double max_route_difference = 0.0;
    double max_expected_deviation = 0.0;
    bool consistent = false;
};

[[nodiscard]] inline QuotedStateConsistency verify_quoted_states() {
    QuotedStateConsistency report;
    report.literal = occupation_table(path_pre_selection(), path_post_selection());

    const StateVector pre = hardy_after_annihilation().without_gamma().renormalized();
    const auto back = second_beamsplitter_map(true).adjoint();
    StateVector dark(Structure{{kPositron, levels::exits}, {kElectron, levels::exits}},
                     {{{"d", "d"}, 1.0}});
    const StateVector post =
        apply_level_map(apply_level_map(dark, kPositron, back), kElectron, back);
    report.pipeline = occupation_table(pre, post);

    const std::array<double, 4> single_expected{1.0, 1.0, 0.0, 0.0};
    const std::array<double, 4> joint_expected{0.0, 1.0, 1.0, -1.0};
    auto track = [&](const OccupationTable &t) {
        for (std::size_t k = 0; k < 4; ++k) {
            report.max_expected_deviation =
                std::max({report.max_expected_deviation,
                          std::abs(t.single[k] - single_expected[k]),
                          std::abs(t.joint[k] - joint_expected[k])});
        }
    };
    track(report.literal);
    track(report.pipeline);
    for (std::size_t k = 0; k < 4; ++k) {
        report.max_route_difference =
            std::max({report.max_route_difference,
                      std::abs(report.literal.single[k] - report.pipeline.single[k]),
                      std::abs(report.literal.joint[k] - report.pipeline.joint[k])});
    }
    report.max_route_difference =
        std::max(report.max_route_difference,
                 std::abs(report.literal.overlap - report.pipeline.overlap));
    report.consistent = report.max_route_difference <= kNormTolerance &&
                        report.max_expected_deviation <= kNormTolerance;
    return report;
}

} // namespace hardyweak
