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

#include "fibrecnot/two_photon.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "fibrecnot/errors.hpp"

namespace fibrecnot {

PhotonPairState::PhotonPairState(std::size_t num_modes)
    : num_modes_(num_modes), amplitudes_(num_modes * (num_modes + 1) / 2) {}

std::size_t PhotonPairState::index(ModePair pair) const {
  const std::size_t i = pair.first.index;
  const std::size_t j = pair.second.index;
  if (i > j || j >= num_modes_) throw LayoutError("mode pair out of range");
  // Row i holds pairs (i, i..n-1) and starts after sum_{r<i} (n - r) entries.
  return i * num_modes_ - i * (i - 1) / 2 + (j - i);
}

ModePair PhotonPairState::pair_at(std::size_t flat) const {
  std::size_t i = 0;
  std::size_t row = num_modes_;
  while (flat >= row) {
    flat -= row;
    ++i;
    --row;
  }
  return ModePair{ModeId{i}, ModeId{i + flat}};
}

double PhotonPairState::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amplitudes_) s += std::norm(a);
  return s;
}

PhotonPairState& PhotonPairState::operator+=(const PhotonPairState& other) {
  if (other.num_modes_ != num_modes_) throw LayoutError("adding states over different mode counts");
  for (std::size_t k = 0; k < amplitudes_.size(); ++k) amplitudes_[k] += other.amplitudes_[k];
  return *this;
}

PhotonPairState& PhotonPairState::operator*=(Complex scale) {
  for (auto& a : amplitudes_) a *= scale;
  return *this;
}

void PostSelection::validate() const {
  if (control.empty() || target.empty()) throw LayoutError("post-selection port sets must be non-empty");
  for (const auto& c : control) {
    if (std::find(target.begin(), target.end(), c) != target.end()) {
      throw LayoutError("post-selection port sets overlap");
    }
  }
}

std::vector<double> CoincidenceResult::conditional() const {
  if (!(success_probability >= kDegenerateSuccessThreshold)) {
    throw DegeneratePostSelection("post-selection success probability below threshold");
  }
  std::vector<double> out;
  out.reserve(outcomes.size());
  for (const auto& o : outcomes) out.push_back(o.probability / success_probability);
  return out;
}

namespace {

void check_pair(const CircuitUnitary& u, ModePair input) {
  if (input.first.index >= u.size() || input.second.index >= u.size()) {
    throw LayoutError("input mode out of range");
  }
}

}  // namespace

PhotonPairState evolve_pair(const CircuitUnitary& u, ModePair input) {
  check_pair(u, input);
  const auto& m = u.matrix();
  const std::size_t n = u.size();
  const auto i = static_cast<Eigen::Index>(input.first.index);
  const auto j = static_cast<Eigen::Index>(input.second.index);
  // 1/sqrt(prod n_in! prod n_out!) with n! = 2 for a doubly occupied mode.
  const double in_norm = input.doubly_occupied() ? std::numbers::sqrt2 : 1.0;
  PhotonPairState out(n);
  for (std::size_t kk = 0; kk < n; ++kk) {
    const auto k = static_cast<Eigen::Index>(kk);
    for (std::size_t ll = kk; ll < n; ++ll) {
      const auto l = static_cast<Eigen::Index>(ll);
      const Complex perm = m(k, i) * m(l, j) + m(k, j) * m(l, i);
      const double out_norm = (kk == ll) ? std::numbers::sqrt2 : 1.0;
      out.amplitude(ModePair{ModeId{kk}, ModeId{ll}}) = perm / (in_norm * out_norm);
    }
  }
  return out;
}

PhotonPairState evolve_product(const CircuitUnitary& u, std::span<const Complex> control_amplitudes,
                               std::span<const Complex> target_amplitudes) {
  const std::size_t n = u.size();
  if (control_amplitudes.size() != n || target_amplitudes.size() != n) {
    throw LayoutError("amplitude vectors must match the layout size");
  }
  PhotonPairState out(n);
  for (std::size_t p = 0; p < n; ++p) {
    if (control_amplitudes[p] == Complex{}) continue;
    for (std::size_t q = 0; q < n; ++q) {
      if (target_amplitudes[q] == Complex{}) continue;
      if (p == q) throw LayoutError("control and target amplitudes must have disjoint support");
      PhotonPairState term = evolve_pair(u, ModePair::of(ModeId{p}, ModeId{q}));
      term *= control_amplitudes[p] * target_amplitudes[q];
      out += term;
    }
  }
  return out;
}

CoincidenceResult coincidence_probabilities(const PhotonPairState& state, const PostSelection& ps,
                                            bool require_success) {
  ps.validate();
  CoincidenceResult result;
  result.outcomes.reserve(ps.control.size() * ps.target.size());
  for (const auto& a : ps.control) {
    for (const auto& b : ps.target) {
      const double p = std::norm(state.amplitude(a, b));
      result.outcomes.push_back({a, b, p});
      result.success_probability += p;
    }
  }
  if (require_success && !(result.success_probability >= kDegenerateSuccessThreshold)) {
    throw DegeneratePostSelection("post-selection success probability " +
                                  std::to_string(result.success_probability) + " below threshold");
  }
  return result;
}

PhotonPairState brute_force_oracle(const CircuitUnitary& u, ModePair input) {
  check_pair(u, input);
  const std::size_t n = u.size();
  const auto& m = u.matrix();

  // Occupation vector -> coefficient of the (unnormalised) monomial prod_k (a_k^dag)^{n_k}.
  std::map<std::vector<int>, Complex> monomials;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) {
      std::vector<int> occ(n, 0);
      ++occ[k];
      ++occ[l];
      monomials[occ] += m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(input.first.index)) *
                        m(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(input.second.index));
    }
  }

  // (a^dag)^2 |0> = sqrt(2) |2>, and the input |2_i> = (a_i^dag)^2 / sqrt(2) |0>.
  const double input_scale = input.doubly_occupied() ? 1.0 / std::sqrt(2.0) : 1.0;
  PhotonPairState out(n);
  for (const auto& [occ, coeff] : monomials) {
    std::vector<std::size_t> occupied;
    double fock_norm = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      for (int c = 0; c < occ[k]; ++c) occupied.push_back(k);
      if (occ[k] == 2) fock_norm *= std::sqrt(2.0);
    }
    out.amplitude(ModePair{ModeId{occupied[0]}, ModeId{occupied[1]}}) += coeff * fock_norm * input_scale;
  }
  return out;
}

}  // namespace fibrecnot
