// Copyright 2026 The qrec Authors
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

#define QREC_VERSION_MAJOR 0
#define QREC_VERSION_MINOR 1
#define QREC_VERSION_PATCH 0
#define QREC_VERSION "0.1.0"

#include "qrec/beam.hpp"
#include "qrec/benchmark.hpp"
#include "qrec/errors.hpp"
#include "qrec/image.hpp"
#include "qrec/ortho.hpp"
#include "qrec/recognition.hpp"
#include "qrec/rng.hpp"
#include "qrec/serialize.hpp"
#include "qrec/state.hpp"
