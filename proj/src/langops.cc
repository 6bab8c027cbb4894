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

#include "ratfix/langops.hh"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

#include "ratfix/bisim.hh"

namespace ratfix {

namespace {

PointedCoalgebra as_dfa(const PointedCoalgebra& p) {
    switch (p.system.kind.behavior) {
    case Behavior::Dfa: return p;
    case Behavior::Nda: return nda_to_dfa(p);
    default: throw InputError("expected an automaton (dfa or nda), got " + p.system.kind.describe());
    }
}

std::string subset_name(const FiniteCoalgebra& c, const std::vector<StateId>& set) {
    std::string s = "{";
    for (std::size_t i = 0; i < set.size(); ++i) s += (i ? "," : "") + c.names[set[i]];
    return s + "}";
}

} // namespace

std::string word_to_string(const Word& w) {
    bool single = std::all_of(w.begin(), w.end(), [](const std::string& l) { return l.size() == 1; });
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) s += (i && !single ? "." : "") + w[i];
    return s;
}

Word word_from_string(std::string_view s) {
    Word w;
    if (s.empty()) return w;
    if (s.find('.') == std::string_view::npos) {
        for (char c : s) w.emplace_back(1, c);
        return w;
    }
    std::size_t start = 0;
    for (;;) {
        auto dot = s.find('.', start);
        w.emplace_back(s.substr(start, dot - start));
        if (dot == std::string_view::npos) return w;
        start = dot + 1;
    }
}

PointedCoalgebra nda_to_dfa(const PointedCoalgebra& p) {
    const FiniteCoalgebra& c = p.system;
    if (c.kind.behavior != Behavior::Nda) throw InputError("nda_to_dfa needs an nda, got " + c.kind.describe());
    require_valid(c, "nda");
    if (p.root >= c.size()) throw InputError("root out of range");
    const std::size_t nlabels = c.kind.num_labels();

    PointedCoalgebra out;
    out.system.kind = FunctorKind::dfa(c.kind.alphabet);
    std::map<std::vector<StateId>, StateId> ids;
    std::vector<std::vector<StateId>> subsets;
    std::deque<StateId> queue;
    auto intern = [&](std::vector<StateId> set) {
        auto [it, fresh] = ids.try_emplace(set, static_cast<StateId>(subsets.size()));
        if (fresh) {
            subsets.push_back(std::move(set));
            queue.push_back(it->second);
        }
        return it->second;
    };
    intern({p.root});
    std::vector<DfaStep<StateId>> steps;
    while (!queue.empty()) {
        StateId id = queue.front();
        queue.pop_front();
        DfaStep<StateId> step;
        std::vector<StateId> members = subsets[id];
        for (StateId s : members) step.accept = step.accept || std::get<NdaStep<StateId>>(c.obs[s]).accept;
        for (LabelId l = 0; l < nlabels; ++l) {
            std::vector<StateId> next;
            for (StateId s : members) {
                const auto& succ = std::get<NdaStep<StateId>>(c.obs[s]).succ[l];
                next.insert(next.end(), succ.begin(), succ.end());
            }
            std::sort(next.begin(), next.end());
            next.erase(std::unique(next.begin(), next.end()), next.end());
            step.next.push_back(intern(std::move(next)));
        }
        if (steps.size() <= id) steps.resize(id + 1);
        steps[id] = std::move(step);
    }
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        out.system.names.push_back(subset_name(c, subsets[i]));
        out.system.obs.push_back(std::move(steps[i]));
    }
    return out;
}

PointedCoalgebra dfa_as_nda(const PointedCoalgebra& p) {
    if (p.system.kind.behavior != Behavior::Dfa) throw InputError("dfa_as_nda needs a dfa, got " + p.system.kind.describe());
    PointedCoalgebra out{{FunctorKind::nda(p.system.kind.alphabet), p.system.names, {}}, p.root};
    for (const auto& o : p.system.obs) {
        const auto& d = std::get<DfaStep<StateId>>(o);
        NdaStep<StateId> n{d.accept, {}};
        for (StateId t : d.next) n.succ.push_back({t});
        out.system.obs.push_back(std::move(n));
    }
    return out;
}

bool language_equiv(const PointedCoalgebra& p, const PointedCoalgebra& q) {
    if (p.system.kind.alphabet != q.system.kind.alphabet) throw InputError("automata have different alphabets");
    return bisimilar(as_dfa(p), as_dfa(q));
}

WordSet enumerate_words(const PointedCoalgebra& p, std::size_t max_len) {
    PointedCoalgebra d = as_dfa(p);
    const FiniteCoalgebra& c = d.system;
    require_valid(c, "dfa");
    if (d.root >= c.size()) throw InputError("root out of range");
    std::vector<LabelId> order(c.kind.num_labels());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](LabelId a, LabelId b) { return c.kind.alphabet[a] < c.kind.alphabet[b]; });

    // Prune states from which no accepting state is reachable.
    std::vector<bool> live(c.size(), false);
    for (bool changed = true; changed;) {
        changed = false;
        for (StateId s = 0; s < c.size(); ++s) {
            if (live[s]) continue;
            const auto& step = std::get<DfaStep<StateId>>(c.obs[s]);
            bool l = step.accept || std::any_of(step.next.begin(), step.next.end(), [&](StateId t) { return live[t]; });
            if (l) live[s] = changed = true;
        }
    }

    WordSet out;
    std::vector<std::pair<Word, StateId>> level;
    if (live[d.root]) level.push_back({{}, d.root});
    for (std::size_t len = 0; !level.empty(); ++len) {
        for (const auto& [w, s] : level)
            if (std::get<DfaStep<StateId>>(c.obs[s]).accept) out.push_back(w);
        if (len == max_len) break;
        std::vector<std::pair<Word, StateId>> next;
        for (const auto& [w, s] : level) {
            for (LabelId l : order) {
                StateId t = std::get<DfaStep<StateId>>(c.obs[s]).next[l];
                if (!live[t]) continue;
                Word v = w;
                v.push_back(c.kind.alphabet[l]);
                next.emplace_back(std::move(v), t);
            }
        }
        level = std::move(next);
    }
    return out;
}

WordSet word_shuffle(const Word& w, const Word& v) {
    // Interleavings of w[i..] and v[j..], built back to front.
    std::vector<std::vector<WordSet>> table(w.size() + 1, std::vector<WordSet>(v.size() + 1));
    for (std::size_t i = w.size() + 1; i-- > 0;) {
        for (std::size_t j = v.size() + 1; j-- > 0;) {
            WordSet& cell = table[i][j];
            if (i == w.size() && j == v.size()) {
                cell.push_back({});
                continue;
            }
            auto extend = [&](const std::string& letter, const WordSet& rest) {
                for (const auto& r : rest) {
                    Word x{letter};
                    x.insert(x.end(), r.begin(), r.end());
                    cell.push_back(std::move(x));
                }
            };
            if (i < w.size()) extend(w[i], table[i + 1][j]);
            if (j < v.size()) extend(v[j], table[i][j + 1]);
            std::sort(cell.begin(), cell.end(), LengthLex{});
            cell.erase(std::unique(cell.begin(), cell.end()), cell.end());
        }
    }
    return table[0][0];
}

} // namespace ratfix
