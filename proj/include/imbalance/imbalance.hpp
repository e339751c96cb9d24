#pragma once
//------------------------------------------------------------------------------
//
//   Copyright 2026 The imbalance Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include "imbalance/bids.hpp"
#include "imbalance/error.hpp"
#include "imbalance/linear_system.hpp"
#include "imbalance/payment.hpp"
#include "imbalance/price_rule.hpp"
#include "imbalance/rational.hpp"
#include "imbalance/witness.hpp"
