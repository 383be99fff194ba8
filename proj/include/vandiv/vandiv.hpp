/*
Copyright 2026 the vandiv authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#pragma once

#include "vandiv/arith.hpp"
#include "vandiv/config.hpp"
#include "vandiv/divisors.hpp"
#include "vandiv/errors.hpp"
#include "vandiv/identities.hpp"
#include "vandiv/kahan.hpp"
#include "vandiv/limitpoints.hpp"
#include "vandiv/numeric.hpp"
#include "vandiv/scan.hpp"
#include "vandiv/vandermonde.hpp"
