// Copyright 2026 The qrns Authors
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

#include <cmath>

namespace qrns {

/// Per-record quantities of the energy balance
/// d/dt (1/2)||u||^2 + alpha ||grad u||^2 + B[u,u,u] = <f, u>.
struct EnergyRecord {
  double t = 0.0;
  double dt = 0.0;           ///< size of the step that produced this state (0 initially)
  double l2_sq = 0.0;
  double h1_semi_sq = 0.0;
  double h2_sq = 0.0;
  double b_uuu = 0.0;
  double f_l2_sq = 0.0;
  double f_vdual_sq = 0.0;
  double work = 0.0;         ///< <f, u>
  double max_speed = 0.0;    ///< max |w| of the advecting velocity

  bool all_finite() const noexcept {
    for (double v : {t, dt, l2_sq, h1_semi_sq, h2_sq, b_uuu, f_l2_sq, f_vdual_sq, work, max_speed})
      if (!std::isfinite(v)) return false;
    return true;
  }
  friend bool operator==(const EnergyRecord&, const EnergyRecord&) = default;
};

}  // namespace qrns
