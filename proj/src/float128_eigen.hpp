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

// Eigen scalar traits for Boost's quad-precision float. Boost ships an Eigen
// adapter, but the one in 1.74 predates Eigen 3.4's NumTraits requirements.

#include <Eigen/Core>
#include <boost/multiprecision/float128.hpp>
#include <limits>

namespace Eigen {

template <>
struct NumTraits<boost::multiprecision::float128>
    : GenericNumTraits<boost::multiprecision::float128> {
    using F = boost::multiprecision::float128;
    using Real = F;
    using NonInteger = F;
    using Literal = F;
    using Nested = F;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 1,
        AddCost = 4,
        MulCost = 8
    };
    static inline Real epsilon() { return std::numeric_limits<F>::epsilon(); }
    static inline Real dummy_precision() { return 1000 * epsilon(); }
    static inline Real highest() { return (std::numeric_limits<F>::max)(); }
    static inline Real lowest() { return (std::numeric_limits<F>::lowest)(); }
    static inline Real infinity() { return std::numeric_limits<F>::infinity(); }
    static inline Real quiet_NaN() { return std::numeric_limits<F>::quiet_NaN(); }
    static inline int digits10() { return std::numeric_limits<F>::digits10; }
};

}  // namespace Eigen
