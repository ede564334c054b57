/* Copyright 2026 The mce Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include "mce/bounds.hpp"
#include "mce/core.hpp"
#include "mce/estimate.hpp"
#include "mce/experiment.hpp"
#include "mce/io.hpp"
#include "mce/parallel.hpp"
#include "mce/random.hpp"
#include "mce/simulate.hpp"
#include "mce/spectral.hpp"
