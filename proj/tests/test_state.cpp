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

#include "hardyweak/state.hpp"

#include "gtest/gtest.h"

#include "reference_states.hpp"

#include <cmath>
#include <random>

using namespace hardyweak;
using hardyweak::fixtures::kI;
using hardyweak::fixtures::literal_hardy_state;
using hardyweak::fixtures::random_state;

namespace {

Structure pol(const std::string &id) { return Structure{{id, levels::polarization}}; }

StateVector bell(const std::string &a, const std::string &b) {
    const double s = 1.0 / std::sqrt(2.0);
    return StateVector(Structure{{a, levels::polarization}, {b, levels::polarization}},
                       {{{"H", "H"}, s}, {{"V", "V"}, s}});
}

} // namespace

TEST(Tensor, product_of_basis_kets) {
    StateVector h2(pol("2"), {{{"H"}, 1.0}});
    StateVector v4(pol("4"), {{{"V"}, 1.0}});
    const auto s = tensor(h2, v4);
    ASSERT_EQ(s.structure().size(), 2u);
    EXPECT_EQ(s.structure()[0].id, "2");
    EXPECT_EQ(s.structure()[1].id, "4");
    EXPECT_EQ(s.amplitude({"H", "V"}), Amplitude(1.0));
    EXPECT_EQ(s.amplitudes().size(), 1u);
}

TEST(Tensor, two_bell_pairs_give_four_equal_terms) {
    const auto s = tensor(bell("1", "2"), bell("3", "4"));
    EXPECT_EQ(s.amplitudes().size(), 4u);
    for (const auto &names : std::vector<std::vector<std::string>>{
             {"H", "H", "H", "H"}, {"V", "V", "H", "H"}, {"H", "H", "V", "V"},
             {"V", "V", "V", "V"}}) {
        EXPECT_NEAR(std::abs(s.amplitude(names) - 0.5), 0.0, 1e-15);
    }
}

TEST(Tensor, norm_is_multiplicative) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        auto a = random_state(pol("a"), rng, false);
        auto b = random_state(Structure{{"b", levels::arms}, {"c", levels::exits}}, rng,
                              false);
        std::uniform_real_distribution<double> shrink(0.1, 1.0);
        a = a.renormalized().scaled(shrink(rng));
        b = b.renormalized().scaled(shrink(rng));
        const double na = std::sqrt(a.norm_squared());
        const double nb = std::sqrt(b.norm_squared());
        EXPECT_NEAR(std::sqrt(tensor(a, b).norm_squared()), na * nb, 1e-12);
    }
}

TEST(Tensor, is_associative) {
    std::mt19937_64 rng(12);
    const auto a = random_state(pol("a"), rng);
    const auto b = random_state(Structure{{"b", levels::arms}}, rng);
    const auto c = random_state(Structure{{"c", levels::exits}}, rng);
    const auto left = tensor(tensor(a, b), c);
    const auto right = tensor(a, tensor(b, c));
    EXPECT_LE(max_amplitude_difference(left, right), 1e-12);
}

TEST(Tensor, rejects_overlapping_subsystems) {
    StateVector h2(pol("2"), {{{"H"}, 1.0}});
    EXPECT_THROW((void)tensor(h2, h2), StructuralError);
}

TEST(Tensor, rejects_gamma) {
    StateVector g(pol("2"));
    g.add_gamma(1.0);
    StateVector v4(pol("4"), {{{"V"}, 1.0}});
    EXPECT_THROW((void)tensor(g, v4), StructuralError);
}

TEST(Inner, hardy_overlap) {
    const auto pre = hardy_photon_state();
    const auto post = hardy_photon_post_selection();
    // (1/2)(1/sqrt3)(1 - 1 - 1)
    EXPECT_NEAR(std::abs(inner(post, pre) - Amplitude(-1.0 / (2.0 * std::sqrt(3.0)))),
                0.0, 1e-15);
}

TEST(Inner, self_overlap_and_orthogonality) {
    std::mt19937_64 rng(3);
    const auto psi = random_state(photon_pair_structure(), rng);
    EXPECT_NEAR(std::abs(inner(psi, psi) - 1.0), 0.0, 1e-12);
    StateVector hh(photon_pair_structure(), {{{"H", "H"}, 1.0}});
    StateVector vv(photon_pair_structure(), {{{"V", "V"}, 1.0}});
    EXPECT_EQ(inner(hh, vv), Amplitude{});
}

TEST(Inner, conjugate_symmetric) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = random_state(photon_pair_structure(), rng);
        const auto b = random_state(photon_pair_structure(), rng);
        EXPECT_LE(std::abs(inner(a, b) - std::conj(inner(b, a))), 1e-12);
    }
}

TEST(Inner, gamma_is_orthogonal_to_products) {
    StateVector g(photon_pair_structure());
    g.add_gamma(1.0);
    std::mt19937_64 rng(5);
    EXPECT_EQ(inner(g, random_state(photon_pair_structure(), rng)), Amplitude{});
}

TEST(Inner, structure_mismatch_throws) {
    StateVector a(pol("2"), {{{"H"}, 1.0}});
    StateVector b(pol("4"), {{{"H"}, 1.0}});
    EXPECT_THROW((void)inner(a, b), StructuralError);
}

TEST(Condition, coincidence_in_sixteenth_of_runs) {
    const auto r = condition(literal_hardy_state(1), {{"+", "d"}, {"-", "d"}});
    EXPECT_NEAR(r.weight, 1.0 / 16.0, 1e-15);
    EXPECT_EQ(r.state.structure().size(), 0u);
}

TEST(Condition, both_c_never_fire_without_splitters) {
    const auto r = condition(literal_hardy_state(4), {{"+", "c"}, {"-", "c"}});
    EXPECT_EQ(r.weight, 0.0);
}

TEST(Condition, empty_outcome_is_identity) {
    const auto s = literal_hardy_state(2);
    const auto r = condition(s, {});
    EXPECT_NEAR(r.weight, 1.0, 1e-12);
    EXPECT_EQ(max_amplitude_difference(r.state, s), 0.0);
}

TEST(Condition, partial_outcome_keeps_remaining_subsystem) {
    const auto r = condition(literal_hardy_state(1), {{"+", "c"}});
    ASSERT_EQ(r.state.structure().size(), 1u);
    EXPECT_EQ(r.state.structure()[0].id, "-");
    EXPECT_NEAR(std::abs(r.state.amplitude({"c"}) - (-0.75)), 0.0, 1e-15);
    EXPECT_NEAR(r.weight, 9.0 / 16.0 + 1.0 / 16.0, 1e-15);
}

TEST(Condition, complete_outcomes_sum_to_one) {
    std::mt19937_64 rng(6);
    const Structure s{{"x", levels::arms}, {"y", levels::exits}, {"z", levels::polarization}};
    for (int trial = 0; trial < 20; ++trial) {
        const auto psi = random_state(s, rng);
        double total = 0.0;
        for (const auto &x : levels::arms) {
            for (const auto &z : levels::polarization) {
                total += condition(psi, {{"x", x}, {"z", z}}).weight;
            }
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(Condition, unknown_subsystem_or_level_throws) {
    const auto s = literal_hardy_state(1);
    EXPECT_THROW((void)condition(s, {{"q", "c"}}), StructuralError);
    EXPECT_THROW((void)condition(s, {{"+", "O"}}), StructuralError);
}

TEST(GlobalPhase, detects_phase_only_difference) {
    std::mt19937_64 rng(7);
    const auto psi = random_state(photon_pair_structure(), rng);
    EXPECT_TRUE(equal_up_to_global_phase(psi, psi.scaled(std::polar(1.0, 1.234)), 1e-12));
}

TEST(GlobalPhase, rejects_perturbed_state) {
    StateVector h(pol("2"), {{{"H"}, 1.0}});
    StateVector perturbed = StateVector(pol("2"), {{{"H"}, 1.0}, {{"V"}, 0.01}}).renormalized();
    EXPECT_FALSE(equal_up_to_global_phase(h, perturbed, 1e-9));
}

TEST(Pruning, never_moves_probabilities) {
    std::mt19937_64 rng(8);
    const Structure s = photon_pair_structure();
    for (int trial = 0; trial < 20; ++trial) {
        auto psi = random_state(s, rng);
        psi.add({"V", "V"}, Amplitude(3e-16, -2e-16));
        const auto other = random_state(s, rng);
        const auto pruned = psi.pruned();
        EXPECT_NEAR(pruned.norm_squared(), psi.norm_squared(), 1e-12);
        EXPECT_NEAR(std::abs(inner(other, pruned) - inner(other, psi)), 0.0, 1e-12);
        EXPECT_NEAR(condition(pruned, {{"2", "H"}}).weight,
                    condition(psi, {{"2", "H"}}).weight, 1e-12);
    }
}

TEST(Structure, labels_sort_in_alphabet_order_with_gamma_first) {
    const auto s = literal_hardy_state(1);
    std::vector<std::string> order;
    for (const auto &[label, amp] : s.amplitudes()) {
        order.push_back(s.structure().describe(label));
    }
    EXPECT_EQ(order, (std::vector<std::string>{"gamma", "c+ c-", "c+ d-", "d+ c-", "d+ d-"}));
}

TEST(Structure, rejects_unknown_level_and_duplicate_ids) {
    EXPECT_THROW((void)photon_pair_structure().label({"H", "X"}), StructuralError);
    EXPECT_THROW((Structure{{"a", levels::arms}, {"a", levels::exits}}), StructuralError);
}
