// Copyright 2025 The qutrit-ctrl Authors
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

// Umbrella header.
#pragma once

#include "qutrit_ctrl/config.hpp"
#include "qutrit_ctrl/evolve.hpp"
#include "qutrit_ctrl/experiments.hpp"
#include "qutrit_ctrl/protocols.hpp"
#include "qutrit_ctrl/pulses.hpp"
#include "qutrit_ctrl/qutrit_model.hpp"
#include "qutrit_ctrl/robustness.hpp"
#include "qutrit_ctrl/spectroscopy.hpp"
#include "qutrit_ctrl/stark.hpp"
#include "qutrit_ctrl/sweep.hpp"
#include "qutrit_ctrl/types.hpp"
