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

#include "ratfix/cli.hh"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>

#include <CLI11.hpp>

#include "ratfix/bisim.hh"
#include "ratfix/demos.hh"
#include "ratfix/io.hh"
#include "ratfix/langops.hh"
#include "ratfix/sosdsl.hh"
#include "ratfix/streams.hh"
#include "ratfix/synthesis.hh"

namespace ratfix {

namespace {

std::pair<std::string, std::string> split_binding(const std::string& b) {
    auto eq = b.find('=');
    if (eq == std::string::npos || eq == 0) throw InputError("binding '" + b + "' is not of the form NAME=VALUE");
    return {b.substr(0, eq), b.substr(eq + 1)};
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot write " + path);
    f << text;
    if (!f) throw InputError("error writing " + path);
}

std::string json_text(const PointedCoalgebra& p) { return system_to_json(p.system, p.root).dump(2) + "\n"; }

struct Options {
    std::string spec, system, other, term, output, demo;
    std::vector<std::string> binds;
    bool minimize_levels = false;
    std::size_t count = 10, max_len = 4, budget = UnfoldOptions{}.max_nodes;
};

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
    std::string text = read_file(o.spec);
    auto parsed = sos::parse_spec(text);
    std::vector<sos::Diagnostic> diags = parsed.diagnostics;
    if (parsed.ok()) {
        auto more = sos::validate_spec(*parsed.doc);
        diags.insert(diags.end(), more.begin(), more.end());
    }
    for (const auto& d : diags) err << o.spec << ":" << sos::to_string(d) << "\n";
    if (!parsed.ok() || !sos::is_bipointed(diags)) {
        out << "not bipointed\n";
        return kExitNegative;
    }
    out << "bipointed: " << behavior_name(parsed.doc->kind.behavior) << ", " << parsed.doc->signature.size()
        << " operators, " << parsed.doc->rule_count() << " rules\n";
    return kExitOk;
}

int cmd_apply(const Options& o, std::ostream& out, std::ostream&) {
    sos::SpecDoc spec = sos::load_spec(read_file(o.spec));
    std::map<std::string, PointedCoalgebra> env;
    for (const auto& b : o.binds) {
        auto [name, path] = split_binding(b);
        if (!env.emplace(name, load_system(path).pointed()).second) throw InputError("'" + name + "' bound twice");
    }
    PointedCoalgebra result = eval_term(spec, env, sos::parse_term(o.term), {o.minimize_levels});
    emit(json_text(result), o.output, out);
    return kExitOk;
}

int cmd_minimize(const Options& o, std::ostream& out, std::ostream&) {
    emit(json_text(minimize(load_system(o.system).pointed())), o.output, out);
    return kExitOk;
}

int cmd_bisim(const Options& o, std::ostream& out, std::ostream&) {
    bool same = bisimilar(load_system(o.system).pointed(), load_system(o.other).pointed());
    out << (same ? "bisimilar" : "not bisimilar") << "\n";
    return same ? kExitOk : kExitNegative;
}

int cmd_lasso(const Options& o, std::ostream& out, std::ostream&) {
    out << lasso_of(load_system(o.system).pointed()).to_string() << "\n";
    return kExitOk;
}

int cmd_unfold(const Options& o, std::ostream& out, std::ostream&) {
    GsosStreamSpec spec = parse_gsos(read_file(o.spec));
    std::map<std::string, Lasso> env;
    for (const auto& b : o.binds) {
        auto [name, text] = split_binding(b);
        if (!env.emplace(name, Lasso::parse(text)).second) throw InputError("'" + name + "' bound twice");
    }
    auto values = gsos_unfold(spec, env, sos::parse_term(o.term), o.count, {o.budget});
    for (std::size_t i = 0; i < values.size(); ++i) out << (i ? " " : "") << to_string(values[i]);
    out << "\n";
    return kExitOk;
}

int cmd_words(const Options& o, std::ostream& out, std::ostream&) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& w : enumerate_words(load_system(o.system).pointed(), o.max_len)) list.push_back(word_to_string(w));
    out << list.dump() << "\n";
    return kExitOk;
}

int cmd_dot(const Options& o, std::ostream& out, std::ostream&) {
    LoadedSystem s = load_system(o.system);
    require_valid(s.system, o.system);
    out << to_dot(s.system, s.root);
    return kExitOk;
}

int cmd_demo(const Options& o, std::ostream& out, std::ostream&) {
    if (o.demo.empty()) {
        for (const auto& n : demo_names()) out << n << "\n";
        return kExitOk;
    }
    DemoReport r = run_demo(o.demo);
    out << r.to_string();
    return r.pass() ? kExitOk : kExitNegative;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Operational specifications over finite systems", "ratfix"};
    app.require_subcommand(1);
    Options o;
    std::map<CLI::App*, std::function<int(const Options&, std::ostream&, std::ostream&)>> handlers;

    auto* validate = app.add_subcommand("validate", "Check that a specification is bipointed");
    validate->add_option("SPEC", o.spec, "specification file")->required();
    handlers[validate] = cmd_validate;

    auto* apply = app.add_subcommand("apply", "Evaluate a term over bound systems and write the result");
    apply->add_option("SPEC", o.spec, "specification file")->required();
    apply->add_option("--term", o.term, "closed term, e.g. \"f(x,y)\"")->required();
    apply->add_option("--bind", o.binds, "NAME=SYSTEM.json");
    apply->add_flag("--minimize-levels", o.minimize_levels, "minimize after every operator level");
    apply->add_option("-o,--output", o.output, "output file (default: standard output)");
    handlers[apply] = cmd_apply;

    auto* min = app.add_subcommand("minimize", "Quotient a system by bisimilarity");
    min->add_option("SYSTEM", o.system, "system file")->required();
    min->add_option("-o,--output", o.output, "output file (default: standard output)");
    handlers[min] = cmd_minimize;

    auto* bis = app.add_subcommand("bisim", "Decide bisimilarity of two pointed systems");
    bis->add_option("A", o.system, "system file")->required();
    bis->add_option("B", o.other, "system file")->required();
    handlers[bis] = cmd_bisim;

    auto* lasso = app.add_subcommand("lasso", "Print the canonical lasso of a stream system");
    lasso->add_option("SYSTEM", o.system, "stream system file")->required();
    handlers[lasso] = cmd_lasso;

    auto* unf = app.add_subcommand("unfold", "Unfold a stream term by rewriting (any stream rule set)");
    unf->add_option("SPEC", o.spec, "stream specification file")->required();
    unf->add_option("--term", o.term, "closed term")->required();
    unf->add_option("--bind", o.binds, "NAME=LASSO, e.g. z=\"|0\"");
    unf->add_option("-n", o.count, "number of values")->check(CLI::NonNegativeNumber);
    unf->add_option("--budget", o.budget, "maximum configuration size in nodes")->check(CLI::PositiveNumber);
    handlers[unf] = cmd_unfold;

    auto* words = app.add_subcommand("words", "List accepted words up to a length");
    words->add_option("SYSTEM", o.system, "dfa or nda file")->required();
    words->add_option("--max-len", o.max_len, "maximum word length")->check(CLI::NonNegativeNumber);
    handlers[words] = cmd_words;

    auto* dot = app.add_subcommand("dot", "Render a system as Graphviz DOT");
    dot->add_option("SYSTEM", o.system, "system file")->required();
    handlers[dot] = cmd_dot;

    auto* demo = app.add_subcommand("demo", "Run a shipped, self-checking scenario (no NAME lists them)");
    demo->add_option("NAME", o.demo, "scenario name");
    handlers[demo] = cmd_demo;

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "ratfix: " << e.what() << "\n";
        return kExitInput;
    }

    try {
        for (auto& [sub, handler] : handlers)
            if (sub->parsed()) return handler(o, out, err);
        throw InternalError("no subcommand selected");
    } catch (const InputError& e) {
        err << "ratfix: " << e.what() << "\n";
        return kExitInput;
    } catch (const ResourceError& e) {
        err << "ratfix: " << e.what() << "\n";
        return kExitResource;
    } catch (const std::exception& e) {
        err << "ratfix: internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

} // namespace ratfix
