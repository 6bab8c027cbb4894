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

#include "ratfix/io.hh"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace ratfix {

using nlohmann::json;

namespace {

std::string rational_field(const json& j, const std::string& where) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    throw InputError(where + ": expected a rational string like \"3/2\"");
}

const json& member(const json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) throw InputError(where + ": missing \"" + key + "\"");
    return *it;
}

} // namespace

PointedCoalgebra LoadedSystem::pointed() const {
    if (system.empty()) throw InputError("system has no states to point at");
    return {system, root.value_or(0)};
}

LoadedSystem system_from_json(const json& j) {
    if (!j.is_object()) throw InputError("system: expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        static const std::set<std::string> known{"kind", "alphabet", "monoid", "states", "obs", "root"};
        if (!known.count(it.key())) throw InputError("system: unknown key \"" + it.key() + "\"");
    }
    LoadedSystem out;
    FiniteCoalgebra& c = out.system;

    auto kind_name = member(j, "kind", "system").get<std::string>();
    auto behavior = behavior_from_name(kind_name);
    if (!behavior) throw InputError("system: unknown kind \"" + kind_name + "\"");
    c.kind.behavior = *behavior;
    if (*behavior != Behavior::Stream)
        c.kind.alphabet = member(j, "alphabet", "system").get<std::vector<std::string>>();
    else if (j.contains("alphabet"))
        throw InputError("system: stream systems take no alphabet");
    if (*behavior == Behavior::Wts) {
        auto m = member(j, "monoid", "system").get<std::string>();
        c.kind.monoid = Monoid::from_name(m);
        if (!c.kind.monoid) throw InputError("system: unknown monoid \"" + m + "\"");
    } else if (j.contains("monoid")) {
        throw InputError("system: monoid given for unweighted kind");
    }
    if (auto ps = c.kind.problems(); !ps.empty()) throw InputError("system: " + ps.front());

    c.names = member(j, "states", "system").get<std::vector<std::string>>();
    std::map<std::string, StateId> index;
    for (std::size_t i = 0; i < c.names.size(); ++i)
        if (!index.emplace(c.names[i], static_cast<StateId>(i)).second)
            throw InputError("system: duplicate state name \"" + c.names[i] + "\"");
    auto state = [&](const json& v, const std::string& where) -> StateId {
        if (!v.is_string()) throw InputError(where + ": expected a state name");
        auto it = index.find(v.get<std::string>());
        if (it == index.end()) throw InputError(where + ": unknown state \"" + v.get<std::string>() + "\"");
        return it->second;
    };
    auto label = [&](const std::string& name, const std::string& where) -> LabelId {
        auto l = c.kind.label_index(name);
        if (!l) throw InputError(where + ": unknown label \"" + name + "\"");
        return *l;
    };

    const json& obs = member(j, "obs", "system");
    if (!obs.is_array() || obs.size() != c.names.size())
        throw InputError("system: \"obs\" must be an array with one entry per state");
    const std::size_t labels = c.kind.num_labels();
    for (std::size_t i = 0; i < obs.size(); ++i) {
        const json& o = obs[i];
        const std::string where = "obs[" + c.names[i] + "]";
        switch (c.kind.behavior) {
        case Behavior::Stream:
            c.obs.emplace_back(StreamStep<StateId>{parse_rational(rational_field(member(o, "out", where), where)),
                                                   state(member(o, "next", where), where)});
            break;
        case Behavior::Dfa: {
            DfaStep<StateId> st{member(o, "accept", where).get<bool>(), std::vector<StateId>(labels, kNoState)};
            for (auto it = member(o, "next", where).begin(); it != member(o, "next", where).end(); ++it)
                st.next[label(it.key(), where)] = state(it.value(), where);
            // A missing label stays kNoState and is reported by validate().
            c.obs.emplace_back(std::move(st));
            break;
        }
        case Behavior::Lts: {
            if (!o.is_array()) throw InputError(where + ": expected a list of [label, state] pairs");
            LtsStep<StateId> st;
            for (const auto& mv : o) {
                if (!mv.is_array() || mv.size() != 2) throw InputError(where + ": expected [label, state]");
                st.moves.emplace_back(label(mv[0].get<std::string>(), where), state(mv[1], where));
            }
            std::sort(st.moves.begin(), st.moves.end());
            st.moves.erase(std::unique(st.moves.begin(), st.moves.end()), st.moves.end());
            c.obs.emplace_back(std::move(st));
            break;
        }
        case Behavior::Nda: {
            NdaStep<StateId> st{member(o, "accept", where).get<bool>(), std::vector<std::vector<StateId>>(labels)};
            const json& succ = member(o, "succ", where);
            for (auto it = succ.begin(); it != succ.end(); ++it) {
                auto& ts = st.succ[label(it.key(), where)];
                for (const auto& t : it.value()) ts.push_back(state(t, where));
                std::sort(ts.begin(), ts.end());
                ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
            }
            c.obs.emplace_back(std::move(st));
            break;
        }
        case Behavior::Wts: {
            WtsStep<StateId> st{std::vector<std::map<StateId, Weight>>(labels)};
            for (auto it = o.begin(); it != o.end(); ++it) {
                auto& m = st.succ[label(it.key(), where)];
                for (auto wt = it.value().begin(); wt != it.value().end(); ++wt) {
                    StateId t = state(json(wt.key()), where);
                    // Stored verbatim, unit weights included, so validate() can flag them.
                    m[t] = parse_weight(rational_field(wt.value(), where));
                }
            }
            c.obs.emplace_back(std::move(st));
            break;
        }
        }
    }
    if (j.contains("root")) out.root = state(j.at("root"), "root");
    return out;
}

json system_to_json(const FiniteCoalgebra& c, std::optional<StateId> root) {
    json j;
    j["kind"] = std::string(behavior_name(c.kind.behavior));
    if (c.kind.behavior != Behavior::Stream) j["alphabet"] = c.kind.alphabet;
    if (c.kind.monoid) j["monoid"] = std::string(c.kind.monoid->name());
    j["states"] = c.names;
    auto name = [&](StateId s) { return s < c.names.size() ? c.names[s] : std::string("?"); };
    json obs = json::array();
    for (const auto& o : c.obs) {
        std::visit(Overloaded{
                       [&](const StreamStep<StateId>& st) {
                           obs.push_back({{"out", to_string(st.out)}, {"next", name(st.next)}});
                       },
                       [&](const DfaStep<StateId>& st) {
                           json next = json::object();
                           for (std::size_t l = 0; l < st.next.size(); ++l)
                               if (st.next[l] != kNoState) next[c.kind.alphabet[l]] = name(st.next[l]);
                           obs.push_back({{"accept", st.accept}, {"next", next}});
                       },
                       [&](const LtsStep<StateId>& st) {
                           json moves = json::array();
                           for (const auto& [l, t] : st.moves) moves.push_back({c.kind.alphabet[l], name(t)});
                           obs.push_back(moves);
                       },
                       [&](const NdaStep<StateId>& st) {
                           json succ = json::object();
                           for (std::size_t l = 0; l < st.succ.size(); ++l) {
                               if (st.succ[l].empty()) continue;
                               json ts = json::array();
                               for (StateId t : st.succ[l]) ts.push_back(name(t));
                               succ[c.kind.alphabet[l]] = ts;
                           }
                           obs.push_back({{"accept", st.accept}, {"succ", succ}});
                       },
                       [&](const WtsStep<StateId>& st) {
                           json out = json::object();
                           for (std::size_t l = 0; l < st.succ.size(); ++l) {
                               if (st.succ[l].empty()) continue;
                               json m = json::object();
                               for (const auto& [t, w] : st.succ[l]) m[name(t)] = to_string(w);
                               out[c.kind.alphabet[l]] = m;
                           }
                           obs.push_back(out);
                       },
                   },
                   o);
    }
    j["obs"] = obs;
    if (root) j["root"] = name(*root);
    return j;
}

LoadedSystem parse_system(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
    try {
        return system_from_json(j);
    } catch (const json::exception& e) {
        throw InputError(std::string("system: ") + e.what());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

LoadedSystem load_system(const std::string& path) { return parse_system(read_file(path)); }

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    return out;
}

} // namespace

std::string to_dot(const FiniteCoalgebra& c, std::optional<StateId> root) {
    std::ostringstream os;
    os << "digraph system {\n";
    for (std::size_t i = 0; i < c.size(); ++i) {
        std::string label = i < c.names.size() ? c.names[i] : "s" + std::to_string(i);
        std::visit(Overloaded{
                       [&](const StreamStep<StateId>& st) { label += ":" + to_string(st.out); },
                       [&](const DfaStep<StateId>& st) { label += st.accept ? ":1" : ":0"; },
                       [&](const NdaStep<StateId>& st) { label += st.accept ? ":1" : ":0"; },
                       [](const auto&) {},
                   },
                   c.obs[i]);
        os << "  n" << i << " [label=\"" << dot_escape(label) << "\"";
        if (root && *root == i) os << ", shape=doublecircle";
        os << "];\n";
    }
    auto edge = [&](std::size_t from, StateId to, const std::string& label) {
        os << "  n" << from << " -> n" << to;
        if (!label.empty()) os << " [label=\"" << dot_escape(label) << "\"]";
        os << ";\n";
    };
    for (std::size_t i = 0; i < c.size(); ++i) {
        std::visit(Overloaded{
                       [&](const StreamStep<StateId>& st) { edge(i, st.next, ""); },
                       [&](const DfaStep<StateId>& st) {
                           for (std::size_t l = 0; l < st.next.size(); ++l)
                               if (st.next[l] != kNoState) edge(i, st.next[l], c.kind.alphabet[l]);
                       },
                       [&](const LtsStep<StateId>& st) {
                           for (const auto& [l, t] : st.moves) edge(i, t, c.kind.alphabet[l]);
                       },
                       [&](const NdaStep<StateId>& st) {
                           for (std::size_t l = 0; l < st.succ.size(); ++l)
                               for (StateId t : st.succ[l]) edge(i, t, c.kind.alphabet[l]);
                       },
                       [&](const WtsStep<StateId>& st) {
                           for (std::size_t l = 0; l < st.succ.size(); ++l)
                               for (const auto& [t, w] : st.succ[l]) edge(i, t, c.kind.alphabet[l] + "," + to_string(w));
                       },
                   },
                   c.obs[i]);
    }
    os << "}\n";
    return os.str();
}

} // namespace ratfix
