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

#include <complex>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace fibrecnot {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Block2 = Eigen::Matrix2cd;

/// Index of a mode inside a ModeLayout.
struct ModeId {
  std::size_t index = 0;
  friend bool operator==(ModeId, ModeId) = default;
  friend auto operator<=>(ModeId, ModeId) = default;
};

/// Ordered set of named optical modes. Labels are unique and map bijectively onto 0..n-1.
class ModeLayout {
 public:
  ModeLayout() = default;
  explicit ModeLayout(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(ModeId id) const;

  bool contains(std::string_view label) const;
  /// Throws LayoutError for unknown labels.
  ModeId id(std::string_view label) const;

  friend bool operator==(const ModeLayout& a, const ModeLayout& b) { return a.labels_ == b.labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

using LayoutPtr = std::shared_ptr<const ModeLayout>;

LayoutPtr make_layout(std::vector<std::string> labels);

/// Unitary acting on single-photon creation operators: a_k^dag -> sum_j U(j,k) a_j^dag.
/// Column k holds the output amplitudes of a photon entering mode k.
class CircuitUnitary {
 public:
  static constexpr double kUnitarityTolerance = 1e-10;

  /// Throws LayoutError if dimensions disagree and DomainError if the matrix is not unitary.
  CircuitUnitary(LayoutPtr layout, Matrix matrix);

  static CircuitUnitary identity(LayoutPtr layout);

  const Matrix& matrix() const { return matrix_; }
  const ModeLayout& layout() const { return *layout_; }
  const LayoutPtr& layout_ptr() const { return layout_; }
  std::size_t size() const { return layout_->size(); }

  Complex operator()(ModeId out, ModeId in) const { return matrix_(out.index, in.index); }

  CircuitUnitary adjoint() const;

 private:
  struct Unchecked {};
  CircuitUnitary(LayoutPtr layout, Matrix matrix, Unchecked);

  LayoutPtr layout_;
  Matrix matrix_;

  friend CircuitUnitary compose(const CircuitUnitary&, const CircuitUnitary&);
};

/// max |(U^dag U - I)_{ij}|.
double unitarity_defect(const Matrix& m);

enum class SignedSide { kFirst, kSecond };

/// Real beamsplitter block over (first, second) modes. Reflection keeps the photon in its own
/// mode with amplitude sqrt(R); the flagged side reflects with -sqrt(R). Transmission (crossing to
/// the other mode) is +sqrt(1-R) both ways. Throws DomainError unless 0 <= R <= 1.
Block2 beamsplitter_block(double reflectivity, SignedSide signed_side = SignedSide::kFirst);

/// Identity on every mode except (mode_a, mode_b), where `block` acts.
CircuitUnitary embed(const Block2& block, std::string_view mode_a, std::string_view mode_b,
                     const LayoutPtr& layout);
CircuitUnitary embed(const Block2& block, ModeId mode_a, ModeId mode_b, const LayoutPtr& layout);

/// `first` is applied, then `then`: the result is then * first.
CircuitUnitary compose(const CircuitUnitary& first, const CircuitUnitary& then);

/// Left-to-right application order.
CircuitUnitary compose_all(std::initializer_list<CircuitUnitary> stages);

/// 90-degree polarization rotation of one fibre: exchanges `<side>_H<copy>` and `<side>_V<copy>`.
CircuitUnitary hv_swap(std::string_view side, const LayoutPtr& layout, std::string_view copy = "");

/// Diagonal unitary with exp(i phi) on `mode`.
CircuitUnitary phase_plate(std::string_view mode, double phi, const LayoutPtr& layout);

}  // namespace fibrecnot
