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
 * Weak values <post|A|pre> / <post|pre> of diagonal observables.
 *
 * Observables are WeightedProjectorSums: basis dyads |l><l| each carrying a
 * real weight vector of a common dimension k. k = 2 covers the two-photon
 * arrival-time operator, whose eigenvalues are pairs (t2, t4).
 */

#pragma once

#include "hardyweak/optics.hpp"
#include "hardyweak/state.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hardyweak {

inline constexpr double kDegeneracyThreshold = 1e-12;

/// <post|pre> is too small for the weak value to be defined.
class OrthogonalPostSelection : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class WeightedProjectorSum {
  public:
    using Weights = std::vector<double>;

    WeightedProjectorSum(Structure structure, std::size_t dimension)
        : structure_(std::move(structure)), dimension_(dimension) {
        if (dimension_ == 0) {
            throw std::invalid_argument("weight dimension must be >= 1");
        }
    }

    /// Identity on the product labels (optionally also on GAMMA), weight 1.
    static WeightedProjectorSum identity(const Structure &structure,
                                         bool include_gamma = false) {
        WeightedProjectorSum op(structure, 1);
        if (include_gamma) {
            op.add_term(BasisLabel::absorber(), {1.0});
        }
        for (const auto &label : structure.product_labels()) {
            op.add_term(label, {1.0});
        }
        return op;
    }

    WeightedProjectorSum &add_term(const BasisLabel &label, Weights weights) {
        if (weights.size() != dimension_) {
            throw std::invalid_argument("weight dimension mismatch");
        }
        if (!terms_.emplace(label, std::move(weights)).second) {
            throw std::invalid_argument("duplicate projector label " +
                                        structure_.describe(label));
        }
        return *this;
    }
    WeightedProjectorSum &add_term(const std::vector<std::string> &names,
                                   Weights weights) {
        return add_term(structure_.label(names), std::move(weights));
    }

    [[nodiscard]] const Structure &structure() const { return structure_; }
    [[nodiscard]] std::size_t dimension() const { return dimension_; }
    [[nodiscard]] const std::map<BasisLabel, Weights> &terms() const {
        return terms_;
    }

    [[nodiscard]] WeightedProjectorSum scaled(double factor) const {
        WeightedProjectorSum out = *this;
        for (auto &[label, w] : out.terms_) {
            for (double &x : w) {
                x *= factor;
            }
        }
        return out;
    }

    /// Sum of two operators; weights of shared labels add.
    friend WeightedProjectorSum operator+(const WeightedProjectorSum &a,
                                          const WeightedProjectorSum &b) {
        if (!(a.structure_ == b.structure_) || a.dimension_ != b.dimension_) {
            throw StructuralError("operators act on different spaces");
        }
        WeightedProjectorSum out = a;
        for (const auto &[label, w] : b.terms_) {
            auto [it, inserted] = out.terms_.emplace(label, w);
            if (!inserted) {
                for (std::size_t k = 0; k < w.size(); ++k) {
                    it->second[k] += w[k];
                }
            }
        }
        return out;
    }

  private:
    Structure structure_;
    std::size_t dimension_;
    std::map<BasisLabel, Weights> terms_;
};

struct WeakValueReport {
    std::vector<Amplitude> value;
    Amplitude overlap;
    double success_probability = 0.0;
};

namespace detail {

inline Amplitude checked_overlap(const Structure &op_structure,
                                 const StateVector &pre,
                                 const StateVector &post, double threshold) {
    if (!(pre.structure() == op_structure) ||
        !(post.structure() == op_structure)) {
        throw StructuralError("operator and states act on different spaces");
    }
    if (!pre.normalized() || !post.normalized()) {
        throw std::invalid_argument(
            "pre- and post-selected states must be normalized");
    }
    const Amplitude overlap = inner(post, pre);
    if (std::abs(overlap) <= threshold) {
        throw OrthogonalPostSelection(
            "post-selected state is orthogonal to the pre-selected state");
    }
    return overlap;
}

} // namespace detail

[[nodiscard]] inline WeakValueReport
weak_value(const WeightedProjectorSum &op, const StateVector &pre,
           const StateVector &post,
           double threshold = kDegeneracyThreshold) {
    const Amplitude overlap =
        detail::checked_overlap(op.structure(), pre, post, threshold);
    std::vector<Amplitude> numerator(op.dimension());
    for (const auto &[label, weights] : op.terms()) {
        const Amplitude transition =
            std::conj(post.amplitude(label)) * pre.amplitude(label);
        for (std::size_t k = 0; k < weights.size(); ++k) {
            numerator[k] += weights[k] * transition;
        }
    }
    WeakValueReport report;
    report.overlap = overlap;
    report.success_probability = std::norm(overlap);
    report.value.reserve(numerator.size());
    for (const auto &n : numerator) {
        report.value.push_back(n / overlap);
    }
    return report;
}

struct ProjectorWeakValue {
    BasisLabel label;
    std::vector<double> weight;
    /// Weak value of the bare projector |label><label|.
    Amplitude weak_value;
};

/// Splits `op` into its projectors; sum_l weight_l * weak_value_l reproduces
/// weak_value(op).
[[nodiscard]] inline std::vector<ProjectorWeakValue>
projector_weak_decomposition(const WeightedProjectorSum &op,
                             const StateVector &pre, const StateVector &post,
                             double threshold = kDegeneracyThreshold) {
    const Amplitude overlap =
        detail::checked_overlap(op.structure(), pre, post, threshold);
    std::vector<ProjectorWeakValue> out;
    out.reserve(op.terms().size());
    for (const auto &[label, weights] : op.terms()) {
        out.push_back({label, weights,
                       std::conj(post.amplitude(label)) *
                           pre.amplitude(label) / overlap});
    }
    return out;
}

[[nodiscard]] inline std::vector<Amplitude>
recombine(const std::vector<ProjectorWeakValue> &parts) {
    if (parts.empty()) {
        return {};
    }
    std::vector<Amplitude> total(parts.front().weight.size());
    for (const auto &p : parts) {
        for (std::size_t k = 0; k < total.size(); ++k) {
            total[k] += p.weight[k] * p.weak_value;
        }
    }
    return total;
}

// ---------------------------------------------------------------------------
// Path / polarization vocabulary

/**
 * Dictionary between the interferometer-path and photon-polarization
 * vocabularies: V <-> O and H <-> NO, photon 2 <-> positron, photon 4 <->
 * electron.
 */
struct PathPolarizationDictionary {
    std::map<std::string, std::string> arm_to_polarization{{"O", "V"},
                                                           {"NO", "H"}};
    std::map<std::string, std::string> particle_to_photon{{"+", "2"},
                                                          {"-", "4"}};

    [[nodiscard]] std::string polarization_of(const std::string &arm) const {
        auto it = arm_to_polarization.find(arm);
        if (it == arm_to_polarization.end()) {
            throw std::invalid_argument("unknown arm '" + arm + "'");
        }
        return it->second;
    }
    [[nodiscard]] std::string arm_of(const std::string &polarization) const {
        for (const auto &[arm, pol] : arm_to_polarization) {
            if (pol == polarization) {
                return arm;
            }
        }
        throw std::invalid_argument("unknown polarization '" + polarization +
                                    "'");
    }
    [[nodiscard]] std::string photon_of(const std::string &particle) const {
        auto it = particle_to_photon.find(particle);
        return it == particle_to_photon.end() ? particle : it->second;
    }
};

namespace detail {

/// Resolves an arm name against a subsystem: directly, or through the
/// dictionary when the subsystem is a polarization.
inline std::size_t resolve_arm(const Subsystem &subsystem,
                               const std::string &arm,
                               const PathPolarizationDictionary &dict) {
    if (arm != "O" && arm != "NO") {
        throw std::invalid_argument("unknown arm '" + arm + "'");
    }
    if (subsystem.has_level(arm)) {
        return subsystem.level_index(arm);
    }
    return subsystem.level_index(dict.polarization_of(arm));
}

inline std::size_t resolve_subsystem(const Structure &structure,
                                     const std::string &id,
                                     const PathPolarizationDictionary &dict) {
    if (structure.contains(id)) {
        return structure.index_of(id);
    }
    return structure.index_of(dict.photon_of(id));
}

} // namespace detail

/// Projector onto `arm` of one particle, identity on everything else.
[[nodiscard]] inline WeightedProjectorSum
occupation_operator(const Structure &structure, const std::string &particle,
                    const std::string &arm,
                    const PathPolarizationDictionary &dict = {}) {
    const std::size_t idx = detail::resolve_subsystem(structure, particle, dict);
    const std::size_t level = detail::resolve_arm(structure[idx], arm, dict);
    WeightedProjectorSum op(structure, 1);
    for (const auto &label : structure.product_labels()) {
        if (label.levels[idx] == level) {
            op.add_term(label, {1.0});
        }
    }
    return op;
}

/// Joint projector |arm_first, arm_second><...| on the first two subsystems.
[[nodiscard]] inline WeightedProjectorSum
joint_occupation_operator(const Structure &structure,
                          const std::string &arm_first,
                          const std::string &arm_second,
                          const PathPolarizationDictionary &dict = {}) {
    if (structure.size() < 2) {
        throw StructuralError("joint occupation needs two subsystems");
    }
    const std::size_t a = detail::resolve_arm(structure[0], arm_first, dict);
    const std::size_t b = detail::resolve_arm(structure[1], arm_second, dict);
    WeightedProjectorSum op(structure, 1);
    for (const auto &label : structure.product_labels()) {
        if (label.levels[0] == a && label.levels[1] == b) {
            op.add_term(label, {1.0});
        }
    }
    return op;
}

// ---------------------------------------------------------------------------
// Arrival-time operators

inline const std::string kPhoton2 = "2";
inline const std::string kPhoton4 = "4";

/// Photons 2 and 4, polarization only.
[[nodiscard]] inline Structure photon_pair_structure() {
    return Structure{{kPhoton2, levels::polarization},
                     {kPhoton4, levels::polarization}};
}

enum class ArrivalKind { single_photon2, single_photon4, joint };

/**
 * Arrival-time observable: an H photon is delayed by gamma, a V photon by
 * epsilon. Singles have k = 1 and act as identity on the partner photon;
 * the joint operator has k = 2 with weights (t2, t4).
 */
[[nodiscard]] inline WeightedProjectorSum
arrival_time_operator(ArrivalKind kind, double gamma, double epsilon) {
    const Structure structure = photon_pair_structure();
    auto delay = [&](std::size_t level) { return level == 0 ? gamma : epsilon; };
    WeightedProjectorSum op(structure, kind == ArrivalKind::joint ? 2 : 1);
    for (const auto &label : structure.product_labels()) {
        const double t2 = delay(label.levels[0]);
        const double t4 = delay(label.levels[1]);
        switch (kind) {
        case ArrivalKind::single_photon2:
            op.add_term(label, {t2});
            break;
        case ArrivalKind::single_photon4:
            op.add_term(label, {t4});
            break;
        case ArrivalKind::joint:
            op.add_term(label, {t2, t4});
            break;
        }
    }
    return op;
}

} // namespace hardyweak
