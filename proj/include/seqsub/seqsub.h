// Copyright 2026 The Authors.
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

#ifndef SEQSUB_SEQSUB_H_
#define SEQSUB_SEQSUB_H_

#include "seqsub/core.h"
#include "seqsub/coverage.h"
#include "seqsub/engagement.h"
#include "seqsub/error.h"
#include "seqsub/generators.h"
#include "seqsub/matrix.h"
#include "seqsub/matroid.h"
#include "seqsub/numerics/max_flow.h"
#include "seqsub/numerics/simplex.h"
#include "seqsub/oracle.h"
#include "seqsub/parallel.h"
#include "seqsub/policy.h"
#include "seqsub/random.h"
#include "seqsub/revenue.h"
#include "seqsub/submodular.h"

#endif  // SEQSUB_SEQSUB_H_
