// Copyright 2026 The macroreal Authors
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

#include "macroreal/amplified.hpp"
#include "macroreal/bell.hpp"
#include "macroreal/errors.hpp"
#include "macroreal/fock.hpp"
#include "macroreal/hermite.hpp"
#include "macroreal/homodyne.hpp"
#include "macroreal/outcomes.hpp"
#include "macroreal/qubit.hpp"
#include "macroreal/schmidt.hpp"
#include "macroreal/signatures.hpp"
