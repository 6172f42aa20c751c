// Copyright 2026 The cdsqc Authors
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

#pragma once

#include "cdsqc/adversary/attack.hpp"
#include "cdsqc/adversary/semi_honest.hpp"
#include "cdsqc/catalog/channel_spec.hpp"
#include "cdsqc/catalog/channel_text.hpp"
#include "cdsqc/catalog/dense_coding.hpp"
#include "cdsqc/catalog/states.hpp"
#include "cdsqc/eavesdrop/check_report.hpp"
#include "cdsqc/eavesdrop/decoys.hpp"
#include "cdsqc/errors.hpp"
#include "cdsqc/io/transcript_io.hpp"
#include "cdsqc/metrics/detection.hpp"
#include "cdsqc/metrics/efficiency.hpp"
#include "cdsqc/protocol/config.hpp"
#include "cdsqc/protocol/particles.hpp"
#include "cdsqc/protocol/plan.hpp"
#include "cdsqc/protocol/session.hpp"
#include "cdsqc/protocol/transcript.hpp"
#include "cdsqc/quantum/gate.hpp"
#include "cdsqc/quantum/measurement.hpp"
#include "cdsqc/quantum/register.hpp"
#include "cdsqc/quantum/state_vector.hpp"
#include "cdsqc/rng.hpp"
