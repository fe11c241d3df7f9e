/*
 * Copyright 2026 The retpim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

namespace retpim {

/// Arbitrary-precision rational used wherever deadline comparisons must be exact.
using Rational = boost::multiprecision::cpp_rational;

/// The exact value of a finite double.
inline Rational exact(double x) { return Rational(x); }

/// Smallest integer >= q.
inline std::int64_t ceil_of(const Rational& q) {
  using boost::multiprecision::cpp_int;
  const cpp_int num = boost::multiprecision::numerator(q);
  const cpp_int den = boost::multiprecision::denominator(q);  // always > 0
  cpp_int quot = num / den;                                   // truncates toward zero
  if (num > 0 && quot * den != num) quot += 1;
  return static_cast<std::int64_t>(quot);
}

}  // namespace retpim
