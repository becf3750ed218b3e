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
 * Labeled tensor-product state vectors.
 *
 * A state lives on a Structure: an ordered list of subsystems, each with a
 * declared alphabet of level names. Basis labels pick one level per
 * subsystem. A single extra label, GAMMA, is orthogonal to every product
 * label and records the annihilation channel.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hardyweak {

using Amplitude = std::complex<double>;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kPruneTolerance = 1e-15;

/// Thrown when operands do not share the subsystem layout an operation needs.
class StructuralError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

struct Subsystem {
    std::string id;
    std::vector<std::string> levels;

    bool operator==(const Subsystem &) const = default;

    [[nodiscard]] std::size_t level_index(const std::string &level) const {
        auto it = std::find(levels.begin(), levels.end(), level);
        if (it == levels.end()) {
            throw StructuralError("level '" + level +
                                  "' is not in the alphabet of subsystem '" +
                                  id + "'");
        }
        return static_cast<std::size_t>(it - levels.begin());
    }

    [[nodiscard]] bool has_level(const std::string &level) const {
        return std::find(levels.begin(), levels.end(), level) != levels.end();
    }
};

/**
 * Basis label: one level index per subsystem, or the GAMMA absorber.
 *
 * Labels order GAMMA first, then lexicographically by level index, so
 * iteration follows the alphabet order of each subsystem.
 */
struct BasisLabel {
    std::vector<std::size_t> levels;
    bool gamma = false;

    static BasisLabel absorber() { return BasisLabel{{}, true}; }

    auto operator<=>(const BasisLabel &other) const {
        if (gamma != other.gamma) {
            return gamma ? std::strong_ordering::less
                         : std::strong_ordering::greater;
        }
        return levels <=> other.levels;
    }
    bool operator==(const BasisLabel &) const = default;
};

class Structure {
  public:
    Structure() = default;
    Structure(std::initializer_list<Subsystem> subsystems)
        : subsystems_(subsystems) {
        validate();
    }
    explicit Structure(std::vector<Subsystem> subsystems)
        : subsystems_(std::move(subsystems)) {
        validate();
    }

    [[nodiscard]] const std::vector<Subsystem> &subsystems() const {
        return subsystems_;
    }
    [[nodiscard]] std::size_t size() const { return subsystems_.size(); }
    [[nodiscard]] const Subsystem &operator[](std::size_t i) const {
        return subsystems_[i];
    }

    [[nodiscard]] bool contains(const std::string &id) const {
        return std::any_of(subsystems_.begin(), subsystems_.end(),
                           [&](const Subsystem &s) { return s.id == id; });
    }

    [[nodiscard]] std::size_t index_of(const std::string &id) const {
        for (std::size_t i = 0; i < subsystems_.size(); ++i) {
            if (subsystems_[i].id == id) {
                return i;
            }
        }
        throw StructuralError("unknown subsystem '" + id + "'");
    }

    /// Label from level names given in subsystem order.
    [[nodiscard]] BasisLabel
    label(const std::vector<std::string> &level_names) const {
        if (level_names.size() != subsystems_.size()) {
            throw StructuralError("label has " +
                                  std::to_string(level_names.size()) +
                                  " levels, structure has " +
                                  std::to_string(subsystems_.size()));
        }
        BasisLabel out;
        out.levels.reserve(level_names.size());
        for (std::size_t i = 0; i < level_names.size(); ++i) {
            out.levels.push_back(subsystems_[i].level_index(level_names[i]));
        }
        return out;
    }

    /// Human-readable label, e.g. "c+ d-" or "H2 V4"; GAMMA prints as "gamma".
    [[nodiscard]] std::string describe(const BasisLabel &label) const {
        if (label.gamma) {
            return "gamma";
        }
        std::string out;
        for (std::size_t i = 0; i < label.levels.size(); ++i) {
            if (i != 0) {
                out += ' ';
            }
            out += subsystems_[i].levels[label.levels[i]];
            out += subsystems_[i].id;
        }
        return out;
    }

    /// Every product label, in canonical order.
    [[nodiscard]] std::vector<BasisLabel> product_labels() const {
        std::vector<BasisLabel> out;
        BasisLabel current;
        current.levels.assign(subsystems_.size(), 0);
        if (subsystems_.empty()) {
            return out;
        }
        for (const auto &s : subsystems_) {
            if (s.levels.empty()) {
                return out;
            }
        }
        while (true) {
            out.push_back(current);
            std::size_t k = subsystems_.size();
            while (k > 0) {
                --k;
                if (++current.levels[k] < subsystems_[k].levels.size()) {
                    break;
                }
                current.levels[k] = 0;
                if (k == 0) {
                    return out;
                }
            }
        }
    }

    /// Copy with the alphabet of one subsystem replaced.
    [[nodiscard]] Structure
    with_levels(const std::string &id, std::vector<std::string> levels) const {
        auto subs = subsystems_;
        subs[index_of(id)].levels = std::move(levels);
        return Structure(std::move(subs));
    }

    bool operator==(const Structure &) const = default;

  private:
    void validate() const {
        for (std::size_t i = 0; i < subsystems_.size(); ++i) {
            for (std::size_t j = i + 1; j < subsystems_.size(); ++j) {
                if (subsystems_[i].id == subsystems_[j].id) {
                    throw StructuralError("duplicate subsystem id '" +
                                          subsystems_[i].id + "'");
                }
            }
        }
    }

    std::vector<Subsystem> subsystems_;
};

/// Partial assignment of levels, keyed by subsystem id.
using Outcome = std::map<std::string, std::string>;

class StateVector {
  public:
    using AmplitudeMap = std::map<BasisLabel, Amplitude>;

    StateVector() = default;
    explicit StateVector(Structure structure)
        : structure_(std::move(structure)) {}

    /// Build from (level names, amplitude) pairs; repeated labels accumulate.
    StateVector(
        Structure structure,
        std::initializer_list<std::pair<std::vector<std::string>, Amplitude>>
            terms)
        : structure_(std::move(structure)) {
        for (const auto &[names, amp] : terms) {
            add(names, amp);
        }
    }

    [[nodiscard]] const Structure &structure() const { return structure_; }
    [[nodiscard]] const AmplitudeMap &amplitudes() const { return amps_; }

    StateVector &add(const BasisLabel &label, Amplitude amp) {
        check_label(label);
        amps_[label] += amp;
        return *this;
    }
    StateVector &add(const std::vector<std::string> &names, Amplitude amp) {
        return add(structure_.label(names), amp);
    }
    StateVector &add_gamma(Amplitude amp) {
        return add(BasisLabel::absorber(), amp);
    }

    [[nodiscard]] Amplitude amplitude(const BasisLabel &label) const {
        auto it = amps_.find(label);
        return it == amps_.end() ? Amplitude{} : it->second;
    }
    [[nodiscard]] Amplitude
    amplitude(const std::vector<std::string> &names) const {
        return amplitude(structure_.label(names));
    }
    [[nodiscard]] Amplitude gamma_amplitude() const {
        return amplitude(BasisLabel::absorber());
    }

    [[nodiscard]] bool has_gamma() const {
        return std::abs(gamma_amplitude()) >= kPruneTolerance;
    }

    [[nodiscard]] double norm_squared() const {
        double total = 0.0;
        for (const auto &[label, amp] : amps_) {
            total += std::norm(amp);
        }
        return total;
    }

    [[nodiscard]] bool normalized(double tol = kNormTolerance) const {
        return std::abs(norm_squared() - 1.0) <= tol;
    }

    [[nodiscard]] StateVector scaled(Amplitude factor) const {
        StateVector out = *this;
        for (auto &[label, amp] : out.amps_) {
            amp *= factor;
        }
        return out;
    }

    [[nodiscard]] StateVector renormalized() const {
        const double n2 = norm_squared();
        if (n2 <= 0.0) {
            throw std::domain_error("cannot renormalize the zero vector");
        }
        return scaled(1.0 / std::sqrt(n2));
    }

    /// Drops amplitudes with modulus below tol.
    [[nodiscard]] StateVector pruned(double tol = kPruneTolerance) const {
        StateVector out(structure_);
        for (const auto &[label, amp] : amps_) {
            if (std::abs(amp) >= tol) {
                out.amps_.emplace(label, amp);
            }
        }
        return out;
    }

    /// Projects out the GAMMA channel (no renormalization).
    [[nodiscard]] StateVector without_gamma() const {
        StateVector out = *this;
        out.amps_.erase(BasisLabel::absorber());
        return out;
    }

    StateVector &operator+=(const StateVector &other) {
        require_same_structure(*this, other);
        for (const auto &[label, amp] : other.amps_) {
            amps_[label] += amp;
        }
        return *this;
    }
    friend StateVector operator+(StateVector a, const StateVector &b) {
        a += b;
        return a;
    }

    static void require_same_structure(const StateVector &a,
                                       const StateVector &b) {
        if (!(a.structure_ == b.structure_)) {
            throw StructuralError("state structures differ");
        }
    }

  private:
    void check_label(const BasisLabel &label) const {
        if (label.gamma) {
            return;
        }
        if (label.levels.size() != structure_.size()) {
            throw StructuralError("label arity does not match structure");
        }
        for (std::size_t i = 0; i < label.levels.size(); ++i) {
            if (label.levels[i] >= structure_[i].levels.size()) {
                throw StructuralError("level index out of range for '" +
                                      structure_[i].id + "'");
            }
        }
    }

    Structure structure_;
    AmplitudeMap amps_;
};

/// Unnormalized state paired with its squared norm.
struct Subnormalized {
    StateVector state;
    double weight = 0.0;
};

/// Sum of conj(bra) * ket over shared labels.
[[nodiscard]] inline Amplitude inner(const StateVector &bra,
                                     const StateVector &ket) {
    StateVector::require_same_structure(bra, ket);
    Amplitude total{};
    const auto &small = bra.amplitudes().size() <= ket.amplitudes().size()
                            ? bra.amplitudes()
                            : ket.amplitudes();
    const bool bra_is_small = &small == &bra.amplitudes();
    const auto &large = bra_is_small ? ket.amplitudes() : bra.amplitudes();
    for (const auto &[label, amp] : small) {
        auto it = large.find(label);
        if (it == large.end()) {
            continue;
        }
        total += bra_is_small ? std::conj(amp) * it->second
                              : std::conj(it->second) * amp;
    }
    return total;
}

[[nodiscard]] inline StateVector tensor(const StateVector &a,
                                        const StateVector &b) {
    for (const auto &s : a.structure().subsystems()) {
        if (b.structure().contains(s.id)) {
            throw StructuralError("tensor: subsystem '" + s.id +
                                  "' appears in both factors");
        }
    }
    if (a.has_gamma() || b.has_gamma()) {
        throw StructuralError("tensor: factors may not carry the GAMMA label");
    }
    auto subs = a.structure().subsystems();
    const auto &rhs = b.structure().subsystems();
    subs.insert(subs.end(), rhs.begin(), rhs.end());
    StateVector out{Structure(std::move(subs))};
    for (const auto &[la, xa] : a.amplitudes()) {
        if (la.gamma) {
            continue;
        }
        for (const auto &[lb, xb] : b.amplitudes()) {
            if (lb.gamma) {
                continue;
            }
            BasisLabel joined = la;
            joined.levels.insert(joined.levels.end(), lb.levels.begin(),
                                 lb.levels.end());
            out.add(joined, xa * xb);
        }
    }
    return out;
}

/**
 * Keeps the labels matching `outcome` and removes the addressed subsystems.
 *
 * The weight is the squared norm of the kept part, i.e. the outcome
 * probability when the input is normalized. GAMMA never matches a
 * non-empty outcome.
 */
[[nodiscard]] inline Subnormalized condition(const StateVector &state,
                                             const Outcome &outcome) {
    const auto &structure = state.structure();
    std::vector<std::pair<std::size_t, std::size_t>> fixed;
    for (const auto &[id, level] : outcome) {
        const std::size_t idx = structure.index_of(id);
        fixed.emplace_back(idx, structure[idx].level_index(level));
    }
    std::vector<Subsystem> remaining;
    std::vector<std::size_t> kept_indices;
    for (std::size_t i = 0; i < structure.size(); ++i) {
        const bool addressed =
            std::any_of(fixed.begin(), fixed.end(),
                        [i](const auto &f) { return f.first == i; });
        if (!addressed) {
            remaining.push_back(structure[i]);
            kept_indices.push_back(i);
        }
    }
    StateVector out{Structure(std::move(remaining))};
    for (const auto &[label, amp] : state.amplitudes()) {
        if (label.gamma) {
            if (fixed.empty()) {
                out.add(label, amp);
            }
            continue;
        }
        const bool matches =
            std::all_of(fixed.begin(), fixed.end(), [&](const auto &f) {
                return label.levels[f.first] == f.second;
            });
        if (!matches) {
            continue;
        }
        BasisLabel reduced;
        reduced.levels.reserve(kept_indices.size());
        for (std::size_t i : kept_indices) {
            reduced.levels.push_back(label.levels[i]);
        }
        out.add(reduced, amp);
    }
    const double weight = out.norm_squared();
    return Subnormalized{std::move(out), weight};
}

/// True iff |<a|b>| >= 1 - tol; both states are expected to be normalized.
[[nodiscard]] inline bool equal_up_to_global_phase(const StateVector &a,
                                                   const StateVector &b,
                                                   double tol) {
    return std::abs(inner(a, b)) >= 1.0 - tol;
}

/// Squared overlap of a normalized state with a normalized target.
[[nodiscard]] inline double fidelity(const StateVector &target,
                                     const StateVector &state) {
    return std::norm(inner(target, state));
}

/// Largest amplitude difference over the union of labels.
[[nodiscard]] inline double max_amplitude_difference(const StateVector &a,
                                                     const StateVector &b) {
    StateVector::require_same_structure(a, b);
    double worst = 0.0;
    for (const auto &[label, amp] : a.amplitudes()) {
        worst = std::max(worst, std::abs(amp - b.amplitude(label)));
    }
    for (const auto &[label, amp] : b.amplitudes()) {
        worst = std::max(worst, std::abs(amp - a.amplitude(label)));
    }
    return worst;
}

} // namespace hardyweak
