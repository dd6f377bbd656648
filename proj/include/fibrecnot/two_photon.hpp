// Copyright 2026 The fibrecnot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <span>
#include <vector>

#include "fibrecnot/modes.hpp"

namespace fibrecnot {

/// Unordered pair of (possibly equal) modes, stored with first <= second.
struct ModePair {
  ModeId first;
  ModeId second;

  static ModePair of(ModeId a, ModeId b) { return a <= b ? ModePair{a, b} : ModePair{b, a}; }
  bool doubly_occupied() const { return first == second; }
  friend bool operator==(const ModePair&, const ModePair&) = default;
};

/// Amplitudes over the two-photon Fock sector of an n-mode layout. Basis states are unordered
/// pairs {i, j}; {i, i} is the doubly occupied state |2_i>.
class PhotonPairState {
 public:
  explicit PhotonPairState(std::size_t num_modes);

  std::size_t num_modes() const { return num_modes_; }
  std::size_t num_pairs() const { return amplitudes_.size(); }

  Complex amplitude(ModePair pair) const { return amplitudes_[index(pair)]; }
  Complex& amplitude(ModePair pair) { return amplitudes_[index(pair)]; }
  Complex amplitude(ModeId a, ModeId b) const { return amplitude(ModePair::of(a, b)); }

  /// Dense storage, row-major over i <= j.
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  ModePair pair_at(std::size_t flat) const;

  double norm_squared() const;

  PhotonPairState& operator+=(const PhotonPairState& other);
  PhotonPairState& operator*=(Complex scale);

 private:
  std::size_t index(ModePair pair) const;

  std::size_t num_modes_;
  std::vector<Complex> amplitudes_;
};

/// Detection ports: `control` and `target` are disjoint, non-empty mode sets.
struct PostSelection {
  std::vector<ModeId> control;
  std::vector<ModeId> target;

  /// Throws LayoutError if either set is empty or they intersect.
  void validate() const;
};

struct Coincidence {
  ModeId control;
  ModeId target;
  double probability;
};

struct CoincidenceResult {
  std::vector<Coincidence> outcomes;  // one entry per (control, target) mode pair
  double success_probability = 0.0;

  /// Entry / success probability. Throws DegeneratePostSelection below the threshold.
  std::vector<double> conditional() const;
};

inline constexpr double kDegenerateSuccessThreshold = 1e-12;

/// Bosonic evolution of |1_i 1_j> (or |2_i> when i == j) through U. Amplitudes come from 2x2
/// permanents with sqrt(n!) normalisation.
PhotonPairState evolve_pair(const CircuitUnitary& u, ModePair input);

/// Evolution of the product state (sum_p c_p a_p^dag)(sum_q t_q a_q^dag)|0>. The control and target
/// supports must be disjoint so the input is normalised when both amplitude vectors are.
PhotonPairState evolve_product(const CircuitUnitary& u, std::span<const Complex> control_amplitudes,
                               std::span<const Complex> target_amplitudes);

/// Throws DegeneratePostSelection when the success probability is below the threshold and
/// `require_success` is set.
CoincidenceResult coincidence_probabilities(const PhotonPairState& state, const PostSelection& ps,
                                            bool require_success = true);

/// Independent reference for evolve_pair: expands the product of output creation operators term
/// by term into occupation-number states and renormalises. Slow; for testing.
PhotonPairState brute_force_oracle(const CircuitUnitary& u, ModePair input);

}  // namespace fibrecnot
