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
 * Optical elements acting on labeled states.
 *
 * Single-subsystem elements (beamsplitters in a Mach-Zehnder arm, polarizing
 * beamsplitters, polarization rotators) are LevelMaps: linear maps from one
 * alphabet to another, applied to one subsystem. Two-photon interference at
 * a conventional beamsplitter works on FockModeState instead, since it needs
 * bosonic occupation bookkeeping.
 */

#pragma once

#include "hardyweak/state.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hardyweak {

/// Linear map from the levels `inputs` to the levels `outputs` of one
/// subsystem. columns[j][k] is the amplitude of outputs[k] given inputs[j].
struct LevelMap {
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::vector<std::vector<Amplitude>> columns;

    [[nodiscard]] LevelMap adjoint() const {
        LevelMap out{outputs, inputs, {}};
        out.columns.assign(outputs.size(),
                           std::vector<Amplitude>(inputs.size()));
        for (std::size_t j = 0; j < inputs.size(); ++j) {
            for (std::size_t k = 0; k < outputs.size(); ++k) {
                out.columns[k][j] = std::conj(columns[j][k]);
            }
        }
        return out;
    }

    /// Columns orthonormal within tol.
    [[nodiscard]] bool is_isometry(double tol = kNormTolerance) const {
        for (std::size_t a = 0; a < columns.size(); ++a) {
            for (std::size_t b = 0; b < columns.size(); ++b) {
                Amplitude dot{};
                for (std::size_t k = 0; k < outputs.size(); ++k) {
                    dot += std::conj(columns[a][k]) * columns[b][k];
                }
                const double expected = a == b ? 1.0 : 0.0;
                if (std::abs(dot - expected) > tol) {
                    return false;
                }
            }
        }
        return true;
    }
};

/// Applies `map` to subsystem `id`; its alphabet must equal map.inputs.
/// GAMMA is untouched.
[[nodiscard]] inline StateVector apply_level_map(const StateVector &state,
                                                 const std::string &id,
                                                 const LevelMap &map) {
    const auto &structure = state.structure();
    const std::size_t idx = structure.index_of(id);
    if (structure[idx].levels != map.inputs) {
        throw StructuralError("subsystem '" + id +
                              "' is not in the input levels of this element");
    }
    StateVector out{structure.with_levels(id, map.outputs)};
    for (const auto &[label, amp] : state.amplitudes()) {
        if (label.gamma) {
            out.add(label, amp);
            continue;
        }
        const auto &column = map.columns[label.levels[idx]];
        for (std::size_t k = 0; k < column.size(); ++k) {
            if (column[k] == Amplitude{}) {
                continue;
            }
            BasisLabel mapped = label;
            mapped.levels[idx] = k;
            out.add(mapped, amp * column[k]);
        }
    }
    return out;
}

/// Symmetric 50/50 beamsplitter with unit-modulus reflection phase.
struct BeamsplitterConvention {
    Amplitude reflection_phase{0.0, 1.0};

    /// 2x2 mode map: first input -> (out0 + r out1)/sqrt2,
    /// second input -> (-conj(r) out0 + out1)/sqrt2.
    [[nodiscard]] std::array<std::array<Amplitude, 2>, 2> mode_map() const {
        const double s = 1.0 / std::numbers::sqrt2;
        const Amplitude r = reflection_phase;
        return {{{s, r * s}, {-std::conj(r) * s, s}}};
    }
};

namespace levels {
inline const std::vector<std::string> source{"in"};
inline const std::vector<std::string> arms{"O", "NO"};
inline const std::vector<std::string> exits{"c", "d"};
inline const std::vector<std::string> polarization{"H", "V"};
inline const std::vector<std::string> pbs_ports{"H:transmit", "V:reflect"};
} // namespace levels

/// Positron and electron path subsystems.
inline const std::string kPositron = "+";
inline const std::string kElectron = "-";

/// Input port -> (r|O> + |NO>)/sqrt2: reflection feeds the overlapping arm.
[[nodiscard]] inline LevelMap
first_beamsplitter_map(const BeamsplitterConvention &bs = {}) {
    const double s = 1.0 / std::numbers::sqrt2;
    return {levels::source, levels::arms, {{bs.reflection_phase * s, s}}};
}

/// {O, NO} -> {c, d}; an absent splitter routes O -> c and NO -> d.
[[nodiscard]] inline LevelMap
second_beamsplitter_map(bool present, const BeamsplitterConvention &bs = {}) {
    if (!present) {
        return {levels::arms, levels::exits, {{1.0, 0.0}, {0.0, 1.0}}};
    }
    const auto m = bs.mode_map();
    return {levels::arms, levels::exits, {{m[0][0], m[0][1]}, {m[1][0], m[1][1]}}};
}

[[nodiscard]] inline StateVector
apply_first_beamsplitter(const StateVector &state, const std::string &particle,
                         const BeamsplitterConvention &bs = {}) {
    return apply_level_map(state, particle, first_beamsplitter_map(bs));
}

[[nodiscard]] inline StateVector
apply_second_beamsplitter(const StateVector &state, const std::string &particle,
                          bool present, const BeamsplitterConvention &bs = {}) {
    return apply_level_map(state, particle,
                           second_beamsplitter_map(present, bs));
}

/**
 * Moves the |O+ O-> amplitude onto GAMMA.
 *
 * Both path subsystems must carry the {O, NO} alphabet.
 */
[[nodiscard]] inline StateVector
apply_annihilation(const StateVector &state,
                   const std::string &first = kPositron,
                   const std::string &second = kElectron) {
    const auto &structure = state.structure();
    const std::size_t i = structure.index_of(first);
    const std::size_t j = structure.index_of(second);
    if (structure[i].levels != levels::arms ||
        structure[j].levels != levels::arms) {
        throw StructuralError("annihilation needs both particles in {O, NO}");
    }
    StateVector out{structure};
    for (const auto &[label, amp] : state.amplitudes()) {
        if (!label.gamma && label.levels[i] == 0 && label.levels[j] == 0) {
            out.add_gamma(amp);
        } else {
            out.add(label, amp);
        }
    }
    return out;
}

/// Horizontal is transmitted, vertical reflected; amplitudes unchanged.
[[nodiscard]] inline LevelMap pbs_map() {
    return {levels::polarization, levels::pbs_ports, {{1.0, 0.0}, {0.0, 1.0}}};
}

[[nodiscard]] inline StateVector apply_pbs(const StateVector &state,
                                           const std::string &photon) {
    return apply_level_map(state, photon, pbs_map());
}

/// |H> -> cos(phi)|H> - sin(phi)|V>,  |V> -> sin(phi)|H> + cos(phi)|V>.
[[nodiscard]] inline LevelMap polarization_rotation_map(double phi) {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    return {levels::polarization, levels::polarization, {{c, -s}, {s, c}}};
}

[[nodiscard]] inline StateVector
apply_polarization_rotation(const StateVector &state, const std::string &photon,
                            double phi) {
    return apply_level_map(state, photon, polarization_rotation_map(phi));
}

/// Thrown when a Fock state exceeds the supported occupancy.
class UnsupportedOccupancy : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr int kMaxOccupancy = 2;

/// Amplitudes over occupation tuples of named spatial modes.
class FockModeState {
  public:
    using Occupation = std::vector<int>;

    FockModeState() = default;
    explicit FockModeState(std::vector<std::string> modes)
        : modes_(std::move(modes)) {}

    [[nodiscard]] const std::vector<std::string> &modes() const {
        return modes_;
    }
    [[nodiscard]] const std::map<Occupation, Amplitude> &amplitudes() const {
        return amps_;
    }

    FockModeState &add(const Occupation &occupation, Amplitude amp) {
        if (occupation.size() != modes_.size()) {
            throw StructuralError("occupation arity does not match modes");
        }
        for (int n : occupation) {
            if (n < 0) {
                throw StructuralError("negative occupation");
            }
            if (n > kMaxOccupancy) {
                throw UnsupportedOccupancy(
                    "more than two photons in one mode is not supported");
            }
        }
        amps_[occupation] += amp;
        return *this;
    }

    [[nodiscard]] Amplitude amplitude(const Occupation &occupation) const {
        auto it = amps_.find(occupation);
        return it == amps_.end() ? Amplitude{} : it->second;
    }

    [[nodiscard]] double norm_squared() const {
        double total = 0.0;
        for (const auto &[occ, amp] : amps_) {
            total += std::norm(amp);
        }
        return total;
    }

  private:
    std::vector<std::string> modes_;
    std::map<Occupation, Amplitude> amps_;
};

/**
 * Two-mode interference at a conventional beamsplitter.
 *
 * Creation operators map as a+ -> (c+ + r d+)/sqrt2, b+ -> (-conj(r) c+ + d+)/sqrt2,
 * which for r = i is a+ -> (c+ + i d+)/sqrt2, b+ -> (i c+ + d+)/sqrt2.
 * Total photon number is conserved; at most two photons are supported.
 */
[[nodiscard]] inline FockModeState
hom_combine(const FockModeState &input,
            std::vector<std::string> output_modes = {"c", "d"},
            const BeamsplitterConvention &bs = {}) {
    if (input.modes().size() != 2 || output_modes.size() != 2) {
        throw StructuralError("hom_combine acts on exactly two modes");
    }
    const auto m = bs.mode_map();
    auto factorial = [](int n) {
        double f = 1.0;
        for (int k = 2; k <= n; ++k) {
            f *= k;
        }
        return f;
    };
    auto binomial = [&](int n, int k) {
        return factorial(n) / (factorial(k) * factorial(n - k));
    };
    auto power = [](Amplitude base, int n) {
        Amplitude out{1.0, 0.0};
        for (int k = 0; k < n; ++k) {
            out *= base;
        }
        return out;
    };

    FockModeState out(std::move(output_modes));
    for (const auto &[occ, amp] : input.amplitudes()) {
        const int na = occ[0];
        const int nb = occ[1];
        if (na + nb > kMaxOccupancy) {
            throw UnsupportedOccupancy(
                "hom_combine supports at most two photons in total");
        }
        // |na, nb> = a+^na b+^nb / sqrt(na! nb!) |0>; expand both powers.
        const double input_norm = 1.0 / std::sqrt(factorial(na) * factorial(nb));
        std::map<std::pair<int, int>, Amplitude> poly;
        for (int ka = 0; ka <= na; ++ka) {
            const Amplitude term_a = binomial(na, ka) *
                                     power(m[0][0], ka) *
                                     power(m[0][1], na - ka);
            for (int kb = 0; kb <= nb; ++kb) {
                const Amplitude term_b = binomial(nb, kb) *
                                         power(m[1][0], kb) *
                                         power(m[1][1], nb - kb);
                poly[{ka + kb, na - ka + nb - kb}] += term_a * term_b;
            }
        }
        for (const auto &[powers, coeff] : poly) {
            const auto [p, q] = powers;
            const Amplitude value = amp * coeff * input_norm *
                                    std::sqrt(factorial(p) * factorial(q));
            if (std::abs(value) < kPruneTolerance) {
                continue;
            }
            out.add({p, q}, value);
        }
    }
    return out;
}

} // namespace hardyweak
