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

#include "ratfix/demos.hh"

#include <algorithm>
#include <functional>
#include <map>

#include "ratfix/bisim.hh"
#include "ratfix/langops.hh"
#include "ratfix/resources.hh"
#include "ratfix/streams.hh"
#include "ratfix/synthesis.hh"

namespace ratfix {

namespace {

std::string_view text_of(std::string_view name) {
    auto r = resource(name);
    if (!r) throw InternalError("missing embedded resource " + std::string(name));
    return *r;
}

std::string join(const std::vector<Rational>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? " " : "") + to_string(xs[i]);
    return s;
}

std::string join_words(const WordSet& ws) {
    std::string s = "[";
    for (std::size_t i = 0; i < ws.size(); ++i) s += (i ? ", " : "") + word_to_string(ws[i]);
    return s + "]";
}

std::vector<std::pair<std::string, std::string>> named_moves(const FiniteCoalgebra& c, StateId s) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [l, t] : std::get<LtsStep<StateId>>(c.obs[s]).moves) out.emplace_back(c.kind.alphabet[l], c.names[t]);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> labels_at(const PointedCoalgebra& p) {
    std::vector<std::string> out;
    for (const auto& [l, t] : std::get<LtsStep<StateId>>(p.system.obs[p.root]).moves)
        out.push_back(p.system.kind.alphabet[l]);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

SynthesizedSystem synthesize_over(const sos::SpecDoc& spec, std::string_view op,
                                  const std::vector<PointedCoalgebra>& args) {
    std::vector<FiniteCoalgebra> systems;
    for (const auto& a : args) systems.push_back(a.system);
    DisjointUnion u = disjoint_union(spec.kind, systems);
    std::vector<StateId> roots;
    for (std::size_t i = 0; i < args.size(); ++i) roots.push_back(u.offsets[i] + args[i].root);
    auto index = spec.signature.find(op);
    if (!index) throw InternalError("shipped specification lacks operator " + std::string(op));
    return synthesize(spec, u.system, FlatState::app(static_cast<std::uint32_t>(*index), roots));
}

DemoReport demo_zip() {
    DemoReport r{"zip", {}, {}};
    auto spec = shipped_spec("zip.sos");
    Lasso left = Lasso::parse("| 1,2"), right = Lasso::parse("| 3");
    SynthesizedSystem s = synthesize_over(spec, "zip", {lasso_to_system(left), lasso_to_system(right)});
    const std::size_t bound = flat_state_bound(spec.signature, s.base.size());
    r.lines.push_back("arguments: " + left.to_string() + " and " + right.to_string());
    r.lines.push_back("synthesized states: " + std::to_string(s.system.size()) + " (bound " + std::to_string(bound) + ")");
    auto values = unfold(s.pointed(), 3 * bound);
    r.lines.push_back("first " + std::to_string(values.size()) + " values: " + join(values));
    auto lasso = detect_lasso(values);
    r.lines.push_back("detected lasso: " + (lasso ? lasso->to_string() : std::string("none")));
    r.checks.push_back({"state count within the flat-term bound", s.system.size() <= bound});
    r.checks.push_back({"lasso of the result is | 1,3,2,3", lasso && *lasso == Lasso::parse("| 1,3,2,3")});
    r.checks.push_back({"result bisimilar to the detected lasso", lasso && bisimilar(s.pointed(), lasso_to_system(*lasso))});
    return r;
}

DemoReport demo_ccs() {
    DemoReport r{"ccs", {}, {}};
    auto spec = shipped_spec("ccs.sos");
    PointedCoalgebra P = shipped_system("systems/ccs_P.json").pointed();
    PointedCoalgebra Q = shipped_system("systems/ccs_Q.json").pointed();
    auto expected = nlohmann::json::parse(text_of("systems/ccs_expected.json"));
    r.lines.push_back("rules: " + std::to_string(spec.rule_count()) + ", operators: " +
                      std::to_string(spec.signature.size()));

    SynthesizedSystem s = synthesize_over(spec, "par", {P, Q});
    auto moves = named_moves(s.system, s.root);
    std::string shown;
    for (const auto& [l, t] : moves) shown += " " + l + "->" + t;
    r.lines.push_back("par(P,Q):" + shown);
    std::vector<std::pair<std::string, std::string>> want;
    for (const auto& m : expected["par(P,Q)"]["moves"]) want.emplace_back(m[0], m[1]);
    r.checks.push_back({"moves of par(P,Q) match the hand-derived fixture", moves == want});
    auto nil = s.system.find("par(P0,Q0)");
    r.checks.push_back({"tau leads to par(P0,Q0), which is stuck",
                        nil && std::count(moves.begin(), moves.end(), std::pair<std::string, std::string>("tau", "par(P0,Q0)")) &&
                            named_moves(s.system, *nil).empty()});

    std::map<std::string, PointedCoalgebra> env{{"P", P}, {"Q", Q}};
    auto pq = eval_term(spec, env, sos::parse_term("par(P,Q)"));
    auto qp = eval_term(spec, env, sos::parse_term("par(Q,P)"));
    r.checks.push_back({"par(P,Q) bisimilar to par(Q,P)", bisimilar(pq, qp)});

    auto restricted = eval_term(spec, env, sos::parse_term("restrict_L(par(P,Q))"));
    auto labels = labels_at(restricted);
    std::string ls;
    for (const auto& l : labels) ls += " " + l;
    r.lines.push_back("restrict_L(par(P,Q)) offers:" + ls);
    r.checks.push_back({"restriction removes a and abar moves",
                        labels == expected["restrict_L(par(P,Q))"]["labels"].get<std::vector<std::string>>()});
    return r;
}

DemoReport demo_shuffle() {
    DemoReport r{"shuffle", {}, {}};
    auto spec = shipped_spec("shuffle.sos");
    PointedCoalgebra ab = dfa_as_nda(shipped_system("systems/dfa_ab.json").pointed());
    PointedCoalgebra c = dfa_as_nda(shipped_system("systems/dfa_c.json").pointed());
    SynthesizedSystem s = synthesize_over(spec, "shuffle", {ab, c});
    PointedCoalgebra dfa = nda_to_dfa(s.pointed());
    WordSet words = enumerate_words(dfa, 3);
    r.lines.push_back("synthesized nda: " + std::to_string(s.system.size()) + " states (bound " +
                      std::to_string(flat_state_bound(spec.signature, s.base.size())) + ")");
    r.lines.push_back("derived dfa: " + std::to_string(dfa.system.size()) + " states, minimal " +
                      std::to_string(minimize(dfa).system.size()));
    r.lines.push_back("words up to length 3: " + join_words(words));
    WordSet want{{"a", "b", "c"}, {"a", "c", "b"}, {"c", "a", "b"}};
    r.checks.push_back({"accepted words up to length 3 are abc, acb, cab", words == want});
    r.checks.push_back({"agrees with interleaving the words ab and c", words == word_shuffle({"a", "b"}, {"c"})});
    return r;
}

DemoReport demo_priority() {
    DemoReport r{"priority", {}, {}};
    auto spec = shipped_spec("priority.sos");
    PointedCoalgebra w = shipped_system("systems/priority.json").pointed();
    SynthesizedSystem s = synthesize_over(spec, "prio", {w});
    const auto& root = std::get<WtsStep<StateId>>(s.system.obs[s.root]);
    const auto& orig = std::get<WtsStep<StateId>>(w.system.obs[w.root]);
    auto describe_edges = [&](const std::map<StateId, Weight>& m, const FiniteCoalgebra& c) {
        std::string out;
        for (const auto& [t, x] : m) out += " " + c.names[t] + ":" + to_string(x);
        return out.empty() ? std::string(" none") : out;
    };
    r.lines.push_back("root a-moves:" + describe_edges(orig.succ[0], w.system) + "; b-moves:" +
                      describe_edges(orig.succ[1], w.system));
    r.lines.push_back("prio(root) a-moves:" + describe_edges(root.succ[0], s.system) + "; b-moves:" +
                      describe_edges(root.succ[1], s.system));
    bool kept = root.succ[0].size() == orig.succ[0].size();
    for (const auto& [t, x] : orig.succ[0]) {
        auto it = s.system.find("prio(" + w.system.names[t] + ")");
        kept = kept && it && root.succ[0].count(*it) && root.succ[0].at(*it) == x;
    }
    r.checks.push_back({"every a-move of the root survives with its weight", kept});
    r.checks.push_back({"no b-move survives at the root", root.succ[1].empty()});
    const std::size_t bound = flat_state_bound(spec.signature, s.base.size());
    r.lines.push_back("synthesized states: " + std::to_string(s.system.size()) + " (bound " + std::to_string(bound) + ")");
    r.checks.push_back({"result is finite and within the bound", s.system.size() <= bound});
    PointedCoalgebra m1 = minimize(s.pointed());
    PointedCoalgebra m2 = minimize(m1);
    r.checks.push_back({"minimize is idempotent and behaviour-preserving", m1 == m2 && bisimilar(m1, s.pointed())});
    return r;
}

DemoReport demo_p() {
    DemoReport r{"p-counterexample", {}, {}};
    std::string_view text = text_of("p.gsos");
    GsosStreamSpec spec = parse_gsos(text);
    std::map<std::string, Lasso> env{{"z", Lasso::parse("| 0")}};
    sos::Term term = sos::parse_term("p(z)");
    auto parsed = sos::parse_spec(text);
    bool rejected = !parsed.ok() || !sos::is_bipointed(sos::validate_spec(*parsed.doc));
    r.checks.push_back({"rejected as a flat specification", !spec.flat() && rejected});

    auto values = gsos_unfold(spec, env, term, 21, {.max_nodes = std::size_t{1} << 22});
    r.lines.push_back("p(0,0,0,...) = " + join(values) + " ...");
    bool powers = true;
    for (std::size_t k = 0; k < values.size(); ++k)
        powers = powers && values[k] == Rational(boost::multiprecision::cpp_int(1) << k);
    r.checks.push_back({"the n-th value is 2^n for n <= 20", powers && values.size() == 21});
    r.checks.push_back({"no lasso fits the 21 values", !detect_lasso(values)});

    bool exhausted = false;
    try {
        gsos_unfold(spec, env, term, 21);
    } catch (const ResourceError& e) {
        exhausted = true;
        r.lines.push_back("with the default budget: " + std::string(e.what()));
    }
    r.checks.push_back({"configurations outgrow the default budget of 10^6 nodes", exhausted});
    return r;
}

DemoReport demo_un() {
    DemoReport r{"un-counterexample", {}, {}};
    GsosStreamSpec spec = parse_gsos(text_of("un.gsos"));
    std::map<std::string, Lasso> env{{"z", Lasso::parse("| 0")}};
    auto values = gsos_unfold(spec, env, sos::parse_term("u[5](z)"), 64);
    r.lines.push_back("u[5](0,0,0,...) = " + join({values.begin(), values.begin() + 8}) + " ...");
    r.checks.push_back({"prefix is 5 6 7 8", std::vector<Rational>(values.begin(), values.begin() + 4) ==
                                                    std::vector<Rational>{5, 6, 7, 8}});
    r.checks.push_back({"no lasso fits 64 values", !detect_lasso(values)});
    return r;
}

const std::vector<std::pair<std::string, std::function<DemoReport()>>>& demos() {
    static const std::vector<std::pair<std::string, std::function<DemoReport()>>> all = {
        {"zip", demo_zip},           {"ccs", demo_ccs},         {"shuffle", demo_shuffle},
        {"priority", demo_priority}, {"p-counterexample", demo_p}, {"un-counterexample", demo_un},
    };
    return all;
}

} // namespace

bool DemoReport::pass() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const DemoCheck& c) { return c.pass; });
}

std::string DemoReport::to_string() const {
    std::string s = "demo " + name + "\n";
    for (const auto& l : lines) s += "  " + l + "\n";
    for (const auto& c : checks) s += std::string(c.pass ? "  PASS  " : "  FAIL  ") + c.property + "\n";
    s += std::string("verdict: ") + (pass() ? "PASS" : "FAIL") + "\n";
    return s;
}

std::vector<std::string> demo_names() {
    std::vector<std::string> out;
    for (const auto& [n, f] : demos()) out.push_back(n);
    return out;
}

DemoReport run_demo(std::string_view name) {
    for (const auto& [n, f] : demos())
        if (n == name) return f();
    std::string known;
    for (const auto& n : demo_names()) known += " " + n;
    throw InputError("unknown demo '" + std::string(name) + "'; available:" + known);
}

sos::SpecDoc shipped_spec(std::string_view name) { return sos::load_spec(text_of(name)); }

LoadedSystem shipped_system(std::string_view name) { return parse_system(text_of(name)); }

} // namespace ratfix
