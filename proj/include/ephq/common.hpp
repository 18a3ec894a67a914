// Copyright 2026 The ephq Authors
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

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ephq {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// A contiguous run of qubits [first, first + count).
struct QubitRange {
    int first = 0;
    int count = 0;

    int end() const { return first + count; }
    int operator[](int k) const { return first + k; }
    bool contains(int q) const { return q >= first && q < end(); }
    bool overlaps(const QubitRange &other) const {
        return first < other.end() && other.first < end();
    }
    bool operator==(const QubitRange &) const = default;
};

/// Thrown when a numerical procedure fails to reach its stopping criterion.
class ConvergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Thrown when a requested simulation would exceed the configured memory cap.
class ResourceCapError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace ephq
