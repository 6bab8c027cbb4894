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

#include "ratfix/streams.hh"

#include <algorithm>

#include <boost/algorithm/string.hpp>

namespace ratfix {

// ---------------------------------------------------------------------------
// Lassos

Lasso Lasso::canonical() const {
    if (cycle.empty()) throw InputError("a lasso needs a nonempty cycle");
    Lasso l = *this;
    const std::size_t c = l.cycle.size();
    for (std::size_t d = 1; d < c; ++d) {
        if (c % d) continue;
        bool periodic = true;
        for (std::size_t i = d; periodic && i < c; ++i) periodic = l.cycle[i] == l.cycle[i - d];
        if (periodic) {
            l.cycle.resize(d);
            break;
        }
    }
    while (!l.prefix.empty() && l.prefix.back() == l.cycle.back()) {
        l.prefix.pop_back();
        std::rotate(l.cycle.rbegin(), l.cycle.rbegin() + 1, l.cycle.rend());
    }
    return l;
}

Rational Lasso::at(std::size_t i) const {
    if (cycle.empty()) throw InputError("a lasso needs a nonempty cycle");
    if (i < prefix.size()) return prefix[i];
    return cycle[(i - prefix.size()) % cycle.size()];
}

std::vector<Rational> Lasso::take(std::size_t n) const {
    std::vector<Rational> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(at(i));
    return out;
}

std::string Lasso::to_string() const {
    auto join = [](const std::vector<Rational>& xs) {
        std::string s;
        for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + ratfix::to_string(xs[i]);
        return s;
    };
    return prefix.empty() ? "| " + join(cycle) : join(prefix) + " | " + join(cycle);
}

Lasso Lasso::parse(std::string_view text) {
    auto bar = text.find('|');
    if (bar == std::string_view::npos || text.find('|', bar + 1) != std::string_view::npos)
        throw InputError("lasso '" + std::string(text) + "' must have the form 'prefix | cycle'");
    auto values = [&](std::string_view part) {
        std::vector<Rational> out;
        std::string s = boost::algorithm::trim_copy(std::string(part));
        if (s.empty()) return out;
        std::vector<std::string> items;
        boost::algorithm::split(items, s, boost::algorithm::is_any_of(","));
        for (auto& item : items) out.push_back(parse_rational(boost::algorithm::trim_copy(item)));
        return out;
    };
    Lasso l{values(text.substr(0, bar)), values(text.substr(bar + 1))};
    if (l.cycle.empty()) throw InputError("lasso '" + std::string(text) + "' has an empty cycle");
    return l;
}

Lasso lasso_of(const PointedCoalgebra& p) {
    if (p.system.kind.behavior != Behavior::Stream) throw InputError("lasso_of needs a stream system");
    require_valid(p.system, "stream system");
    if (p.root >= p.system.size()) throw InputError("root out of range");
    std::vector<std::size_t> seen(p.system.size(), SIZE_MAX);
    std::vector<Rational> outs;
    StateId s = p.root;
    while (seen[s] == SIZE_MAX) {
        seen[s] = outs.size();
        const auto& st = std::get<StreamStep<StateId>>(p.system.obs[s]);
        outs.push_back(st.out);
        s = st.next;
    }
    auto split = outs.begin() + static_cast<std::ptrdiff_t>(seen[s]);
    return Lasso{{outs.begin(), split}, {split, outs.end()}}.canonical();
}

PointedCoalgebra lasso_to_system(const Lasso& l) {
    if (l.cycle.empty()) throw InputError("a lasso needs a nonempty cycle");
    PointedCoalgebra p;
    p.system.kind = FunctorKind::stream();
    const std::size_t n = l.prefix.size() + l.cycle.size();
    for (std::size_t i = 0; i < n; ++i) {
        StateId next = i + 1 < n ? static_cast<StateId>(i + 1) : static_cast<StateId>(l.prefix.size());
        p.system.names.push_back("s" + std::to_string(i));
        p.system.obs.push_back(StreamStep<StateId>{l.at(i), next});
    }
    return p;
}

std::vector<Rational> unfold(const PointedCoalgebra& p, std::size_t n) {
    if (p.system.kind.behavior != Behavior::Stream) throw InputError("unfold needs a stream system");
    if (n > 0 && p.root >= p.system.size()) throw InputError("root out of range");
    std::vector<Rational> out;
    out.reserve(n);
    StateId s = p.root;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& st = std::get<StreamStep<StateId>>(p.system.obs.at(s));
        out.push_back(st.out);
        s = st.next;
    }
    return out;
}

std::optional<Lasso> detect_lasso(std::span<const Rational> values) {
    const std::size_t n = values.size();
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t c = 1; p + 2 * c <= n; ++c) {
            bool periodic = true;
            for (std::size_t i = p + c; periodic && i < n; ++i) periodic = values[i] == values[i - c];
            if (periodic)
                return Lasso{{values.begin(), values.begin() + static_cast<std::ptrdiff_t>(p)},
                             {values.begin() + static_cast<std::ptrdiff_t>(p),
                              values.begin() + static_cast<std::ptrdiff_t>(p + c)}}
                    .canonical();
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Term rewriting for stream rules with deep targets

bool GsosStreamSpec::flat() const {
    for (const auto& r : rules) {
        if (r.target.param) return false;
        for (const auto& a : r.target.args)
            if (a.is_app || a.param) return false;
    }
    return true;
}

namespace {

/// A rule target with variables resolved: heads and tails of the arguments,
/// or an operator instance with a family index `param_var ? index + offset : offset`.
struct Pattern {
    enum class Kind { Head, Tail, App } kind = Kind::App;
    std::size_t arg = 0;
    std::size_t op = 0;
    bool param_from_rule = false;
    long long offset = 0;
    std::vector<Pattern> children;
};

struct CompiledRule {
    sos::Guard guard;  ///< slots: argument heads, then the family index
    sos::ValueExpr out;
    Pattern target;
};

struct Node {
    enum class Kind : std::uint8_t { Leaf, App } kind;
    std::uint32_t id = 0;  ///< lasso index or operator index
    long long param = 0;   ///< leaf: position; app: family index
    std::uint32_t first_child = 0;
    std::uint32_t arity = 0;
};

class Unfolder {
public:
    Unfolder(const GsosStreamSpec& spec, const std::map<std::string, Lasso>& env, UnfoldOptions options)
        : spec_(spec), options_(options) {
        for (const auto& [name, lasso] : env) {
            lasso_index_[name] = static_cast<std::uint32_t>(lassos_.size());
            lassos_.push_back(lasso.canonical());
        }
        rules_.resize(spec.ops.size());
        for (const auto& r : spec.rules) compile(r);
    }

    std::vector<Rational> run(const sos::Term& term, std::size_t n) {
        std::vector<Rational> out;
        if (n == 0) return out;
        build_initial(term);
        for (std::size_t step = 0;; ++step) {
            compute_heads(step);
            out.push_back(head_.back());
            if (out.size() == n) return out;
            advance(step);
        }
    }

private:
    // -- compilation

    std::size_t op_index(const std::string& name, sos::SourceSpan at) const {
        for (std::size_t i = 0; i < spec_.ops.size(); ++i)
            if (spec_.ops[i].name == name) return i;
        throw InputError(where(at) + "unknown operator '" + name + "'");
    }

    static std::string where(sos::SourceSpan at) {
        return at.line ? std::to_string(at.line) + ":" + std::to_string(at.column) + ": " : "";
    }

    Pattern compile_target(const GsosRule& r, const sos::Term& t) const {
        Pattern p;
        if (!t.is_app) {
            for (std::size_t i = 0; i < r.head_vars.size(); ++i) {
                if (r.head_vars[i] == t.head) {
                    p.kind = Pattern::Kind::Head;
                    p.arg = i;
                    return p;
                }
                if (r.tail_vars[i] == t.head) {
                    p.kind = Pattern::Kind::Tail;
                    p.arg = i;
                    return p;
                }
            }
        }
        p.op = op_index(t.head, r.at);
        const GsosOp& op = spec_.ops[p.op];
        if (op.arity != t.args.size())
            throw InputError(where(r.at) + "operator '" + op.name + "' has arity " + std::to_string(op.arity) +
                             " but is applied to " + std::to_string(t.args.size()) + " arguments");
        if (op.indexed != t.param.has_value())
            throw InputError(where(r.at) + "operator '" + op.name + "' " +
                             (op.indexed ? "needs a family index" : "takes no family index"));
        if (t.param) {
            if (!t.param->var.empty() && t.param->var != r.param_var)
                throw InputError(where(r.at) + "unbound family index '" + t.param->var + "'");
            p.param_from_rule = !t.param->var.empty();
            p.offset = t.param->offset;
        }
        for (const auto& a : t.args) p.children.push_back(compile_target(r, a));
        return p;
    }

    void compile(const GsosRule& r) {
        std::size_t op = op_index(r.op, r.at);
        if (spec_.ops[op].arity != r.head_vars.size())
            throw InputError(where(r.at) + "operator '" + r.op + "' has arity " + std::to_string(spec_.ops[op].arity) +
                             " but the rule gives " + std::to_string(r.head_vars.size()) + " arguments");
        if (!spec_.ops[op].indexed && !r.param_var.empty())
            throw InputError(where(r.at) + "operator '" + r.op + "' takes no family index");
        for (std::size_t i = 0; i < r.head_vars.size(); ++i)
            if (r.value_vars[i].empty())
                throw InputError(where(r.at) + "argument '" + r.head_vars[i] + "' has no premise");
        std::vector<std::string> names = r.value_vars;
        names.push_back(r.param_var);
        CompiledRule c;
        c.out = r.out.resolved(names);
        c.guard.otherwise = r.guard.otherwise;
        std::vector<std::string> unbound = c.out.unbound();
        for (const auto& cmp : r.guard.all) {
            c.guard.all.push_back({cmp.lhs.resolved(names), cmp.op, cmp.rhs.resolved(names)});
            for (const auto* e : {&c.guard.all.back().lhs, &c.guard.all.back().rhs})
                for (auto& v : e->unbound()) unbound.push_back(v);
        }
        if (!unbound.empty()) throw InputError(where(r.at) + "unbound value variable '" + unbound.front() + "'");
        c.target = compile_target(r, r.target);
        rules_[op].push_back(std::move(c));
    }

    // -- configurations

    std::uint32_t add_node(Node n, std::span<const std::uint32_t> children) {
        if (nodes_.size() >= options_.max_nodes)
            throw ResourceError("configuration at step " + std::to_string(step_) + " exceeds the budget of " +
                                std::to_string(options_.max_nodes) + " nodes");
        n.first_child = static_cast<std::uint32_t>(children_.size());
        n.arity = static_cast<std::uint32_t>(children.size());
        children_.insert(children_.end(), children.begin(), children.end());
        nodes_.push_back(n);
        return static_cast<std::uint32_t>(nodes_.size() - 1);
    }

    std::uint32_t leaf(std::uint32_t lasso, long long pos) {
        const Lasso& l = lassos_[lasso];
        const long long len = static_cast<long long>(l.prefix.size() + l.cycle.size());
        if (pos >= len) pos = static_cast<long long>(l.prefix.size());
        return add_node({Node::Kind::Leaf, lasso, pos, 0, 0}, {});
    }

    std::uint32_t build(const sos::Term& t) {
        if (!t.is_app) {
            if (auto it = lasso_index_.find(t.head); it != lasso_index_.end()) return leaf(it->second, 0);
            if (std::none_of(spec_.ops.begin(), spec_.ops.end(), [&](const GsosOp& o) { return o.name == t.head; }))
                throw InputError("unbound name '" + t.head + "'");
        }
        std::size_t op = op_index(t.head, {});
        if (spec_.ops[op].arity != t.args.size())
            throw InputError("operator '" + t.head + "' has arity " + std::to_string(spec_.ops[op].arity) +
                             ", applied to " + std::to_string(t.args.size()) + " arguments");
        if (spec_.ops[op].indexed != (t.param.has_value()))
            throw InputError("operator '" + t.head + "' " +
                             (spec_.ops[op].indexed ? "needs a family index" : "takes no family index"));
        if (t.param && !t.param->var.empty()) throw InputError("unbound family index '" + t.param->var + "'");
        std::vector<std::uint32_t> kids;
        for (const auto& a : t.args) kids.push_back(build(a));
        return add_node({Node::Kind::App, static_cast<std::uint32_t>(op), t.param ? t.param->offset : 0, 0, 0}, kids);
    }

    void build_initial(const sos::Term& term) {
        nodes_.clear();
        children_.clear();
        build(term);  // children precede parents, so the root is last
    }

    std::span<const std::uint32_t> kids(const Node& n) const {
        return {children_.data() + n.first_child, n.arity};
    }

    /// Heads and selected rules for every node, children first.
    void compute_heads(std::size_t step) {
        step_ = step;
        head_.assign(nodes_.size(), Rational(0));
        rule_.assign(nodes_.size(), nullptr);
        std::vector<Rational> env;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const Node& n = nodes_[i];
            if (n.kind == Node::Kind::Leaf) {
                head_[i] = lassos_[n.id].at(static_cast<std::size_t>(n.param));
                continue;
            }
            env.clear();
            for (auto c : kids(n)) env.push_back(head_[c]);
            env.emplace_back(n.param);
            const CompiledRule* chosen = nullptr;
            for (const auto& r : rules_[n.id]) {
                if (r.guard.holds(env)) {
                    chosen = &r;
                    break;
                }
            }
            if (!chosen)
                throw InputError("no rule for '" + spec_.ops[n.id].name + "' is triggered at step " +
                                 std::to_string(step));
            head_[i] = chosen->out.eval(env);
            rule_[i] = chosen;
        }
    }

    static void mark(const Pattern& p, std::span<const std::uint32_t> ks, std::vector<std::uint8_t>& flags) {
        switch (p.kind) {
        case Pattern::Kind::Head: flags[ks[p.arg]] |= kCopy; break;
        case Pattern::Kind::Tail: flags[ks[p.arg]] |= kTail; break;
        case Pattern::Kind::App:
            for (const auto& c : p.children) mark(c, ks, flags);
            break;
        }
    }

    std::uint32_t instantiate(const Pattern& p, const Node& n, std::span<const std::uint32_t> ks) {
        switch (p.kind) {
        case Pattern::Kind::Head: return copy_[ks[p.arg]];
        case Pattern::Kind::Tail: return tail_[ks[p.arg]];
        case Pattern::Kind::App: {
            std::vector<std::uint32_t> args;
            args.reserve(p.children.size());
            for (const auto& c : p.children) args.push_back(instantiate(c, n, ks));
            long long index = p.param_from_rule ? n.param + p.offset : p.offset;
            return add_node({Node::Kind::App, static_cast<std::uint32_t>(p.op), index, 0, 0}, args);
        }
        }
        return 0;
    }

    /// Replaces the configuration by its tail. Nodes that the rule targets
    /// mention directly are copied, with sharing preserved.
    void advance(std::size_t step) {
        step_ = step + 1;
        const std::size_t count = nodes_.size();
        std::vector<std::uint8_t> flags(count, 0);
        flags[count - 1] = kTail;
        for (std::size_t i = count; i-- > 0;) {
            const Node& n = nodes_[i];
            if (n.kind == Node::Kind::Leaf) continue;
            if (flags[i] & kCopy)
                for (auto c : kids(n)) flags[c] |= kCopy;
            if (flags[i] & kTail) mark(rule_[i]->target, kids(n), flags);
        }
        std::vector<Node> old_nodes;
        std::vector<std::uint32_t> old_children;
        old_nodes.swap(nodes_);
        old_children.swap(children_);
        copy_.assign(count, 0);
        tail_.assign(count, 0);
        std::vector<std::uint32_t> args;
        for (std::size_t i = 0; i < count; ++i) {
            const Node& n = old_nodes[i];
            std::span<const std::uint32_t> ks{old_children.data() + n.first_child, n.arity};
            if (flags[i] & kCopy) {
                args.clear();
                for (auto c : ks) args.push_back(copy_[c]);
                copy_[i] = add_node(n, args);
            }
            if (flags[i] & kTail) {
                if (n.kind == Node::Kind::Leaf)
                    tail_[i] = leaf(n.id, n.param + 1);
                else
                    tail_[i] = instantiate(rule_[i]->target, n, ks);
            }
        }
        // The root's tail was created last unless it is a shared copy; make it last.
        std::uint32_t root = tail_[count - 1];
        if (root != nodes_.size() - 1) compact(root);
    }

    /// Keeps only what `root` reaches, renumbered children first.
    void compact(std::uint32_t root) {
        std::vector<std::uint32_t> order;
        std::vector<std::uint8_t> state(nodes_.size(), 0);
        std::vector<std::pair<std::uint32_t, bool>> stack{{root, false}};
        while (!stack.empty()) {
            auto [v, done] = stack.back();
            stack.pop_back();
            if (done) {
                order.push_back(v);
                continue;
            }
            if (state[v]) continue;
            state[v] = 1;
            stack.push_back({v, true});
            for (auto c : kids(nodes_[v]))
                if (!state[c]) stack.push_back({c, false});
        }
        std::vector<std::uint32_t> renum(nodes_.size(), 0);
        std::vector<Node> old_nodes;
        std::vector<std::uint32_t> old_children;
        old_nodes.swap(nodes_);
        old_children.swap(children_);
        std::vector<std::uint32_t> args;
        for (auto v : order) {
            const Node& n = old_nodes[v];
            args.clear();
            for (std::uint32_t k = 0; k < n.arity; ++k) args.push_back(renum[old_children[n.first_child + k]]);
            renum[v] = add_node(n, args);
        }
    }

    static constexpr std::uint8_t kCopy = 1;
    static constexpr std::uint8_t kTail = 2;

    const GsosStreamSpec& spec_;
    UnfoldOptions options_;
    std::map<std::string, std::uint32_t> lasso_index_;
    std::vector<Lasso> lassos_;
    std::vector<std::vector<CompiledRule>> rules_;

    std::vector<Node> nodes_;
    std::vector<std::uint32_t> children_;
    std::vector<Rational> head_;
    std::vector<const CompiledRule*> rule_;
    std::vector<std::uint32_t> copy_, tail_;
    std::size_t step_ = 0;
};

} // namespace

std::vector<Rational> gsos_unfold(const GsosStreamSpec& spec, const std::map<std::string, Lasso>& env,
                                  const sos::Term& term, std::size_t n, UnfoldOptions options) {
    Unfolder u(spec, env, options);
    return u.run(term, n);
}

} // namespace ratfix
