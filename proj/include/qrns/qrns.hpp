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

#include "qrns/config_io.hpp"
#include "qrns/diagnostics.hpp"
#include "qrns/error.hpp"
#include "qrns/field.hpp"
#include "qrns/initial.hpp"
#include "qrns/lattice.hpp"
#include "qrns/qrns_ops.hpp"
#include "qrns/records.hpp"
#include "qrns/snapshot.hpp"
#include "qrns/spectral.hpp"
#include "qrns/timestepper.hpp"
#include "qrns/transform.hpp"
