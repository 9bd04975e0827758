// Copyright 2026 The jsccsj Authors
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

#ifndef JSCCSJ_JSCCSJ_HPP_
#define JSCCSJ_JSCCSJ_HPP_

#include "jsccsj/gaussian.hpp"
#include "jsccsj/io.hpp"
#include "jsccsj/lp.hpp"
#include "jsccsj/matching.hpp"
#include "jsccsj/model.hpp"
#include "jsccsj/prob.hpp"
#include "jsccsj/rng.hpp"
#include "jsccsj/sim.hpp"
#include "jsccsj/solvers.hpp"

#endif  // JSCCSJ_JSCCSJ_HPP_
