// Copyright 2026 The tnsim Authors
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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tnsim {

/// Exact multiply counts and path scores. Contraction costs on large
/// networks overflow 64 bits, so scores are 128-bit with checked arithmetic.
__extension__ typedef unsigned __int128 Score;

inline constexpr Score kScoreMax = ~Score{0};

inline Score checked_add(Score a, Score b) {
    if (a > kScoreMax - b) {
        throw std::overflow_error("score overflow in addition");
    }
    return a + b;
}

inline Score checked_mul(Score a, Score b) {
    if (a != 0 && b > kScoreMax / a) {
        throw std::overflow_error("score overflow in multiplication");
    }
    return a * b;
}

inline std::string score_to_string(Score v) {
    if (v == 0) {
        return "0";
    }
    std::string out;
    while (v != 0) {
        out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    return {out.rbegin(), out.rend()};
}

inline Score score_from_string(std::string_view text) {
    if (text.empty()) {
        throw std::invalid_argument("empty score string");
    }
    Score v = 0;
    for (char ch : text) {
        if (ch < '0' || ch > '9') {
            throw std::invalid_argument("score must be a decimal integer: " + std::string(text));
        }
        v = checked_add(checked_mul(v, 10), static_cast<Score>(ch - '0'));
    }
    return v;
}

/// Lossy conversion for ratios and logging.
inline double score_to_double(Score v) {
    return static_cast<double>(v);
}

}  // namespace tnsim
