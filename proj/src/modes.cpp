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

#include "fibrecnot/modes.hpp"

#include <cmath>

#include "fibrecnot/errors.hpp"

namespace fibrecnot {

ModeLayout::ModeLayout(std::vector<std::string> labels) : labels_(std::move(labels)) {
  index_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i].empty()) throw LayoutError("empty mode label");
    if (!index_.emplace(labels_[i], i).second) {
      throw LayoutError("duplicate mode label '" + labels_[i] + "'");
    }
  }
}

const std::string& ModeLayout::label(ModeId id) const {
  if (id.index >= labels_.size()) throw LayoutError("mode index out of range");
  return labels_[id.index];
}

bool ModeLayout::contains(std::string_view label) const {
  return index_.find(std::string(label)) != index_.end();
}

ModeId ModeLayout::id(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) throw LayoutError("unknown mode '" + std::string(label) + "'");
  return ModeId{it->second};
}

LayoutPtr make_layout(std::vector<std::string> labels) {
  return std::make_shared<const ModeLayout>(std::move(labels));
}

double unitarity_defect(const Matrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  Matrix d = m.adjoint() * m - Matrix::Identity(m.rows(), m.cols());
  return d.cwiseAbs().maxCoeff();
}

CircuitUnitary::CircuitUnitary(LayoutPtr layout, Matrix matrix)
    : layout_(std::move(layout)), matrix_(std::move(matrix)) {
  if (!layout_) throw LayoutError("circuit without a layout");
  const auto n = static_cast<Eigen::Index>(layout_->size());
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw LayoutError("matrix dimension does not match layout size " + std::to_string(n));
  }
  if (n > 0 && unitarity_defect(matrix_) >= kUnitarityTolerance) {
    throw DomainError("matrix is not unitary");
  }
}

CircuitUnitary::CircuitUnitary(LayoutPtr layout, Matrix matrix, Unchecked)
    : layout_(std::move(layout)), matrix_(std::move(matrix)) {}

CircuitUnitary CircuitUnitary::identity(LayoutPtr layout) {
  const auto n = static_cast<Eigen::Index>(layout->size());
  return CircuitUnitary(std::move(layout), Matrix::Identity(n, n), Unchecked{});
}

CircuitUnitary CircuitUnitary::adjoint() const {
  return CircuitUnitary(layout_, matrix_.adjoint(), Unchecked{});
}

Block2 beamsplitter_block(double reflectivity, SignedSide signed_side) {
  if (!(reflectivity >= 0.0 && reflectivity <= 1.0)) {
    throw DomainError("reflectivity " + std::to_string(reflectivity) + " outside [0, 1]");
  }
  const double r = std::sqrt(reflectivity);
  const double t = std::sqrt(1.0 - reflectivity);
  Block2 b;
  if (signed_side == SignedSide::kFirst) {
    b << -r, t, t, r;
  } else {
    b << r, t, t, -r;
  }
  return b;
}

CircuitUnitary embed(const Block2& block, ModeId mode_a, ModeId mode_b, const LayoutPtr& layout) {
  if (!layout) throw LayoutError("embed without a layout");
  if (mode_a.index >= layout->size() || mode_b.index >= layout->size()) {
    throw LayoutError("mode index out of range");
  }
  if (mode_a == mode_b) throw LayoutError("embed requires two distinct modes");
  const auto n = static_cast<Eigen::Index>(layout->size());
  Matrix m = Matrix::Identity(n, n);
  const auto a = static_cast<Eigen::Index>(mode_a.index);
  const auto b = static_cast<Eigen::Index>(mode_b.index);
  m(a, a) = block(0, 0);
  m(a, b) = block(0, 1);
  m(b, a) = block(1, 0);
  m(b, b) = block(1, 1);
  return CircuitUnitary(layout, std::move(m));
}

CircuitUnitary embed(const Block2& block, std::string_view mode_a, std::string_view mode_b,
                     const LayoutPtr& layout) {
  if (!layout) throw LayoutError("embed without a layout");
  return embed(block, layout->id(mode_a), layout->id(mode_b), layout);
}

CircuitUnitary compose(const CircuitUnitary& first, const CircuitUnitary& then) {
  if (first.layout_ != then.layout_ && !(*first.layout_ == *then.layout_)) {
    throw LayoutError("cannot compose circuits over different layouts");
  }
  return CircuitUnitary(first.layout_, then.matrix_ * first.matrix_, CircuitUnitary::Unchecked{});
}

CircuitUnitary compose_all(std::initializer_list<CircuitUnitary> stages) {
  if (stages.size() == 0) throw LayoutError("compose_all needs at least one stage");
  auto it = stages.begin();
  CircuitUnitary acc = *it;
  for (++it; it != stages.end(); ++it) acc = compose(acc, *it);
  return acc;
}

CircuitUnitary hv_swap(std::string_view side, const LayoutPtr& layout, std::string_view copy) {
  Block2 swap;
  swap << 0, 1, 1, 0;
  const std::string h = std::string(side) + "_H" + std::string(copy);
  const std::string v = std::string(side) + "_V" + std::string(copy);
  return embed(swap, h, v, layout);
}

CircuitUnitary phase_plate(std::string_view mode, double phi, const LayoutPtr& layout) {
  if (!layout) throw LayoutError("phase_plate without a layout");
  const auto k = static_cast<Eigen::Index>(layout->id(mode).index);
  const auto n = static_cast<Eigen::Index>(layout->size());
  Matrix m = Matrix::Identity(n, n);
  m(k, k) = std::polar(1.0, phi);
  return CircuitUnitary(layout, std::move(m));
}

}  // namespace fibrecnot
