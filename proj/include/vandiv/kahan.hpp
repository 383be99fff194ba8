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

namespace vandiv {

/// Kahan-compensated accumulator. Tracks the rounding error of each addition
/// and feeds it back into the next one.
struct KahanAccumulator {
    double sum = 0.0;
    double compensation = 0.0;

    void add(double value) {
        const double y = value - compensation;
        const double t = sum + y;
        compensation = (t - sum) - y;
        sum = t;
    }

    double value() const { return sum; }
};

}  // namespace vandiv
