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

#include "hardyweak/weak_values.hpp"

#include "gtest/gtest.h"

#include "reference_states.hpp"

#include <cmath>
#include <random>

using namespace hardyweak;
using hardyweak::fixtures::random_state;

namespace {

Amplitude scalar_wv(const WeightedProjectorSum &op, const StateVector &pre,
                    const StateVector &post) {
    return weak_value(op, pre, post).value.front();
}

WeightedProjectorSum random_operator(const Structure &s, std::size_t k, std::mt19937_64 &rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    WeightedProjectorSum op(s, k);
    for (const auto &label : s.product_labels()) {
        std::vector<double> w(k);
        for (auto &x : w) {
            x = g(rng);
        }
        op.add_term(label, w);
    }
    return op;
}

} // namespace

TEST(WeakValue, single_occupations_on_path_states) {
    const auto pre = path_pre_selection();
    const auto post = path_post_selection();
    const auto &s = pre.structure();
    EXPECT_NEAR(std::abs(scalar_wv(occupation_operator(s, "-", "O"), pre, post) - 1.0), 0, 1e-12);
    EXPECT_NEAR(std::abs(scalar_wv(occupation_operator(s, "+", "O"), pre, post) - 1.0), 0, 1e-12);
    EXPECT_NEAR(std::abs(scalar_wv(occupation_operator(s, "-", "NO"), pre, post)), 0, 1e-12);
    EXPECT_NEAR(std::abs(scalar_wv(occupation_operator(s, "+", "NO"), pre, post)), 0, 1e-12);
}

TEST(WeakValue, negative_joint_occupation) {
    const auto pre = path_pre_selection();
    const auto post = path_post_selection();
    const auto &s = pre.structure();
    const auto nn = scalar_wv(joint_occupation_operator(s, "NO", "NO"), pre, post);
    EXPECT_NEAR(nn.real(), -1.0, 1e-12);
    EXPECT_NEAR(nn.imag(), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(scalar_wv(joint_occupation_operator(s, "O", "O"), pre, post)), 0, 1e-12);
    EXPECT_NEAR(std::abs(scalar_wv(joint_occupation_operator(s, "O", "NO"), pre, post) - 1.0), 0,
                1e-12);
    EXPECT_NEAR(std::abs(scalar_wv(joint_occupation_operator(s, "NO", "O"), pre, post) - 1.0), 0,
                1e-12);
}

TEST(WeakValue, identity_gives_one) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const auto pre = random_state(photon_pair_structure(), rng);
        const auto post = random_state(photon_pair_structure(), rng);
        const auto r = weak_value(WeightedProjectorSum::identity(pre.structure()), pre, post);
        EXPECT_NEAR(std::abs(r.value.front() - 1.0), 0.0, 1e-12);
        EXPECT_NEAR(r.success_probability, std::norm(r.overlap), 1e-15);
    }
}

TEST(WeakValue, joint_arrival_time_is_eps_eps) {
    const auto r = weak_value(arrival_time_operator(ArrivalKind::joint, 0.0, 1.0),
                              hardy_photon_state(), hardy_photon_post_selection());
    ASSERT_EQ(r.value.size(), 2u);
    EXPECT_NEAR(std::abs(r.value[0] - 1.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(r.value[1] - 1.0), 0.0, 1e-12);
    EXPECT_NEAR(r.success_probability, 1.0 / 12.0, 1e-15);
}

TEST(WeakValue, single_arrival_time_is_eps) {
    for (double eps : {1.0, 2.5, -0.4}) {
        const auto r = weak_value(arrival_time_operator(ArrivalKind::single_photon2, 0.3, eps),
                                  hardy_photon_state(), hardy_photon_post_selection());
        EXPECT_NEAR(std::abs(r.value.front() - eps), 0.0, 1e-12);
    }
}

TEST(WeakValue, orthogonal_post_selection_throws) {
    StateVector hh(photon_pair_structure(), {{{"H", "H"}, 1.0}});
    StateVector vv(photon_pair_structure(), {{{"V", "V"}, 1.0}});
    EXPECT_THROW((void)weak_value(WeightedProjectorSum::identity(hh.structure()), hh, vv),
                 OrthogonalPostSelection);
}

TEST(WeakValue, rejects_mismatched_or_unnormalized_states) {
    const auto pre = hardy_photon_state();
    EXPECT_THROW((void)weak_value(WeightedProjectorSum::identity(path_arm_structure()), pre, pre),
                 StructuralError);
    EXPECT_THROW((void)weak_value(WeightedProjectorSum::identity(pre.structure()),
                                  pre.scaled(2.0), pre),
                 std::invalid_argument);
}

TEST(WeakValue, is_linear_in_the_operator) {
    std::mt19937_64 rng(32);
    const Structure s = photon_pair_structure();
    for (int trial = 0; trial < 50; ++trial) {
        const auto pre = random_state(s, rng);
        const auto post = random_state(s, rng);
        const auto a = random_operator(s, 2, rng);
        const auto b = random_operator(s, 2, rng);
        const double alpha = 0.7 - 0.1 * trial;
        const double beta = -1.3 + 0.05 * trial;
        const auto combined = weak_value(a.scaled(alpha) + b.scaled(beta), pre, post).value;
        const auto wa = weak_value(a, pre, post).value;
        const auto wb = weak_value(b, pre, post).value;
        // Random pairs occasionally have small overlaps; compare relative to scale.
        const double scale = 1.0 + std::abs(wa[0]) + std::abs(wb[0]) + std::abs(wa[1]) +
                             std::abs(wb[1]);
        for (std::size_t k = 0; k < 2; ++k) {
            EXPECT_LE(std::abs(combined[k] - (alpha * wa[k] + beta * wb[k])), 1e-12 * scale);
        }
    }
}

TEST(WeakValue, projector_family_sums_to_one) {
    std::mt19937_64 rng(33);
    const Structure s = photon_pair_structure();
    for (int trial = 0; trial < 20; ++trial) {
        const auto pre = random_state(s, rng);
        const auto post = random_state(s, rng);
        Amplitude total{};
        for (const auto &a : levels::arms) {
            for (const auto &b : levels::arms) {
                total += scalar_wv(joint_occupation_operator(s, a, b), pre, post);
            }
        }
        EXPECT_LE(std::abs(total - 1.0), 1e-12 * (1.0 + 1.0 / std::abs(inner(post, pre))));
    }
    const auto pre = path_pre_selection();
    const auto post = path_post_selection();
    Amplitude total{};
    for (const auto &a : levels::arms) {
        for (const auto &b : levels::arms) {
            total += scalar_wv(joint_occupation_operator(pre.structure(), a, b), pre, post);
        }
    }
    EXPECT_NEAR(std::abs(total - 1.0), 0.0, 1e-12);
}

TEST(Occupation, operator_shapes) {
    const auto s = path_arm_structure();
    const auto single = occupation_operator(s, "-", "O");
    ASSERT_EQ(single.terms().size(), 2u);
    EXPECT_TRUE(single.terms().contains(s.label({"O", "O"})));
    EXPECT_TRUE(single.terms().contains(s.label({"NO", "O"})));
    const auto joint = joint_occupation_operator(s, "O", "NO");
    ASSERT_EQ(joint.terms().size(), 1u);
    EXPECT_TRUE(joint.terms().contains(s.label({"O", "NO"})));
}

TEST(Occupation, four_joint_operators_complete) {
    const auto s = path_arm_structure();
    auto sum = joint_occupation_operator(s, "O", "O") + joint_occupation_operator(s, "O", "NO") +
               joint_occupation_operator(s, "NO", "O") + joint_occupation_operator(s, "NO", "NO");
    const auto id = WeightedProjectorSum::identity(s);
    EXPECT_EQ(sum.terms(), id.terms());
}

TEST(Occupation, translates_through_polarization_dictionary) {
    const auto s = photon_pair_structure();
    const auto op = joint_occupation_operator(s, "NO", "O");
    ASSERT_EQ(op.terms().size(), 1u);
    EXPECT_EQ(s.describe(op.terms().begin()->first), "H2 V4");
    const auto single = occupation_operator(s, "+", "O");
    for (const auto &[label, w] : single.terms()) {
        EXPECT_EQ(s[0].levels[label.levels[0]], "V");
    }
}

TEST(Occupation, unknown_arm_throws) {
    EXPECT_THROW((void)occupation_operator(path_arm_structure(), "+", "X"), std::invalid_argument);
    EXPECT_THROW((void)joint_occupation_operator(path_arm_structure(), "O", "c"),
                 std::invalid_argument);
}

TEST(ArrivalOperator, weights) {
    const auto s = photon_pair_structure();
    const auto single = arrival_time_operator(ArrivalKind::single_photon2, 0.0, 1.0);
    EXPECT_EQ(single.dimension(), 1u);
    EXPECT_EQ(single.terms().at(s.label({"H", "H"})), std::vector<double>{0.0});
    EXPECT_EQ(single.terms().at(s.label({"H", "V"})), std::vector<double>{0.0});
    EXPECT_EQ(single.terms().at(s.label({"V", "H"})), std::vector<double>{1.0});
    const auto joint = arrival_time_operator(ArrivalKind::joint, 0.0, 1.0);
    EXPECT_EQ(joint.terms().at(s.label({"H", "H"})), (std::vector<double>{0.0, 0.0}));
    EXPECT_EQ(joint.terms().at(s.label({"H", "V"})), (std::vector<double>{0.0, 1.0}));
    EXPECT_EQ(joint.terms().at(s.label({"V", "H"})), (std::vector<double>{1.0, 0.0}));
    EXPECT_EQ(joint.terms().at(s.label({"V", "V"})), (std::vector<double>{1.0, 1.0}));
}

TEST(Decomposition, label_weak_values) {
    const auto parts = projector_weak_decomposition(
        arrival_time_operator(ArrivalKind::joint, 0.0, 1.0), hardy_photon_state(),
        hardy_photon_post_selection());
    ASSERT_EQ(parts.size(), 4u);
    const auto s = photon_pair_structure();
    std::map<std::string, Amplitude> by_label;
    for (const auto &p : parts) {
        by_label[s.describe(p.label)] = p.weak_value;
    }
    EXPECT_NEAR(std::abs(by_label["H2 H4"] - (-1.0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(by_label["H2 V4"] - 1.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(by_label["V2 H4"] - 1.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(by_label["V2 V4"]), 0.0, 1e-12);
    const auto total = recombine(parts);
    EXPECT_NEAR(std::abs(total[0] - 1.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(total[1] - 1.0), 0.0, 1e-12);
}

TEST(Decomposition, recombination_matches_weak_value) {
    std::mt19937_64 rng(34);
    const Structure s = photon_pair_structure();
    for (int trial = 0; trial < 20; ++trial) {
        const auto pre = random_state(s, rng);
        const auto post = random_state(s, rng);
        const auto op = random_operator(s, 2, rng);
        const auto direct = weak_value(op, pre, post).value;
        const auto total = recombine(projector_weak_decomposition(op, pre, post));
        for (std::size_t k = 0; k < 2; ++k) {
            EXPECT_LE(std::abs(total[k] - direct[k]), 1e-12 * (1.0 + std::abs(direct[k])));
        }
    }
}

TEST(Decomposition, identity_label_values_sum_to_one) {
    const auto pre = hardy_photon_state();
    const auto post = hardy_photon_post_selection();
    Amplitude total{};
    for (const auto &p : projector_weak_decomposition(
             WeightedProjectorSum::identity(pre.structure()), pre, post)) {
        total += p.weak_value;
    }
    EXPECT_NEAR(std::abs(total - 1.0), 0.0, 1e-12);
}

TEST(WeightedProjectorSum, rejects_bad_terms) {
    WeightedProjectorSum op(photon_pair_structure(), 2);
    op.add_term({"H", "H"}, {1.0, 2.0});
    EXPECT_THROW(op.add_term({"H", "V"}, {1.0}), std::invalid_argument);
    EXPECT_THROW(op.add_term({"H", "H"}, {0.0, 0.0}), std::invalid_argument);
}
