// Copyright 2026 The xalign Authors.
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

#ifndef XALIGN_XALIGN_HPP_
#define XALIGN_XALIGN_HPP_

#include "xalign/align.hpp"
#include "xalign/common.hpp"
#include "xalign/embedding.hpp"
#include "xalign/graph.hpp"
#include "xalign/harness.hpp"
#include "xalign/identity.hpp"
#include "xalign/pipeline.hpp"
#include "xalign/similarity.hpp"
#include "xalign/walk_oracle.hpp"

#endif  // XALIGN_XALIGN_HPP_
