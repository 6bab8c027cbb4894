/*
 * Copyright 2026 The ratfix Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Languages of automata: determinization, language equivalence and finite
// word oracles.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ratfix/behaviors.hh"

namespace ratfix {

/// A word is a sequence of labels (labels may be longer than one character).
using Word = std::vector<std::string>;

/// Shorter words first, then lexicographic on label names.
struct LengthLex {
    bool operator()(const Word& a, const Word& b) const {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    }
};

/// Sorted by LengthLex, duplicate-free.
using WordSet = std::vector<Word>;

/// Labels concatenated when all are single characters, dot-separated otherwise; "" for the empty word.
std::string word_to_string(const Word& w);
/// Inverse of word_to_string for single-character labels, or dot-separated labels.
Word word_from_string(std::string_view s);

/// Subset construction from {root}; subsets numbered in discovery order, the
/// empty subset (if reached) acting as the sink. Accepts nda systems only.
PointedCoalgebra nda_to_dfa(const PointedCoalgebra& p);

/// The dfa viewed as an nda with one successor per label.
PointedCoalgebra dfa_as_nda(const PointedCoalgebra& p);

/// Equality of accepted languages. nda inputs are determinized first.
/// Throws InputError on differing alphabets or non-automaton kinds.
bool language_equiv(const PointedCoalgebra& p, const PointedCoalgebra& q);

/// Accepted words up to `max_len`, nda inputs determinized first.
WordSet enumerate_words(const PointedCoalgebra& p, std::size_t max_len);

/// All interleavings of w and v.
WordSet word_shuffle(const Word& w, const Word& v);

} // namespace ratfix
