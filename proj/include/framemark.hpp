// Copyright 2026 The Framemark Authors
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

#include "framemark/bench.hpp"
#include "framemark/bits.hpp"
#include "framemark/channel.hpp"
#include "framemark/detection.hpp"
#include "framemark/distort.hpp"
#include "framemark/error.hpp"
#include "framemark/frame.hpp"
#include "framemark/image_io.hpp"
#include "framemark/keys.hpp"
#include "framemark/ldpc.hpp"
#include "framemark/localization.hpp"
#include "framemark/manifest.hpp"
#include "framemark/parallel.hpp"
#include "framemark/rng.hpp"
#include "framemark/serialize.hpp"
#include "framemark/templates.hpp"
