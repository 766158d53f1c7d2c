// Copyright 2026 The CMM Authors
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
#include "cmm/cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>
#include <optional>

#include "cmm/diagnostics.h"
#include "cmm/errors.h"
#include "cmm/feature_report.h"
#include "cmm/model_file.h"
#include "cmm/quantum.h"
#include "cmm/quantum_search.h"
#include "cmm/report.h"
#include "cmm/sampler.h"

namespace cmm {

namespace {

using nlohmann::json;

struct UsageError : Error {
    using Error::Error;
};

struct Common {
    std::string model_path;
    std::string out_path;
    std::string format = "text";
    std::vector<std::string> tol;
    std::uint64_t seed = 0;
    CLI::Option *seed_option = nullptr;
};

struct Output {
    std::string text;
    std::string csv;
    std::optional<ReportRecord> record;
    int code = kExitOk;
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string opt_num(const std::optional<double> &v) {
    return v ? num(*v) : std::string();
}

void add_common(CLI::App *sub, Common &c, bool needs_seed) {
    sub->add_option("--model", c.model_path, "Model file (JSON)")->required();
    sub->add_option("--out", c.out_path, "Write output to this file instead of stdout");
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
    sub->add_option("--tol", c.tol, "Tolerance override key=value (repeatable)");
    c.seed_option = sub->add_option("--seed", c.seed, "Seed for randomized steps");
    if (needs_seed) {
        c.seed_option->required();
    }
}

ToleranceOverrides overrides(const Common &c) {
    ToleranceOverrides out;
    for (const auto &t : c.tol) {
        try {
            out.push_back(parse_tolerance_override(t));
        } catch (const InputError &e) {
            throw UsageError(e.what());
        }
    }
    return out;
}

ReportRecord base_record(const LoadedModel &m, const Common &c, std::string command) {
    ReportRecord r;
    r.model_digest = m.digest;
    r.command = std::move(command);
    r.inputs["model"] = c.model_path;
    r.inputs["tolerances"] = to_json(m.tolerances);
    if (c.seed_option->count() > 0) {
        r.seed = c.seed;
    }
    return r;
}

Context resolve_context(const ContextualModel &model, const std::string &name) {
    if (!name.empty()) {
        try {
            return model.context(name);
        } catch (const LookupError &e) {
            throw UsageError(e.what());
        }
    }
    auto named = model.named_contexts();
    if (named.size() == 1) {
        return named.front().context;
    }
    throw UsageError("--context is required: the model has " + std::to_string(named.size()) + " named contexts");
}

std::string context_name(const ContextualModel &model, const std::string &name) {
    if (!name.empty()) {
        return name;
    }
    return model.named_contexts().front().name;
}

void require_instrument(const ContextualModel &model, const std::string &name) {
    auto all = model.instruments();
    if (std::find(all.begin(), all.end(), name) == all.end()) {
        throw UsageError("unknown instrument '" + name + "'");
    }
}

std::string observable_for(const ContextualModel &model, const std::string &name) {
    auto obs = model.observables();
    if (std::find(obs.begin(), obs.end(), name) != obs.end()) {
        return name;
    }
    require_instrument(model, name);
    return model.observable_of(name);
}

Output cmd_validate(const Common &c) {
    json doc = read_model_file(c.model_path);
    ValidationReport rep = validate_model(doc, overrides(c));
    Output o;
    o.text = "kind: " + rep.kind + "\n";
    o.csv = "invariant,passed,residual\n";
    for (const auto &ch : rep.checks) {
        o.text += std::string(ch.passed ? "PASS" : "FAIL") + "  " + ch.name + "  residual " +
                  InvariantError::format_residual(ch.residual) + "\n";
        o.csv += "\"" + ch.name + "\"," + (ch.passed ? "true" : "false") + "," + num(ch.residual) + "\n";
    }
    o.text += rep.ok() ? "valid\n" : "INVALID\n";
    ReportRecord r;
    r.model_digest = model_digest(doc);
    r.command = "validate";
    r.inputs["model"] = c.model_path;
    r.outputs = to_json(rep);
    o.record = r;
    o.code = rep.ok() ? kExitOk : kExitValidation;
    return o;
}

Output cmd_diagnose(const Common &c, const std::vector<std::string> &context_names,
                    const std::vector<std::string> &instruments) {
    LoadedModel m = load_model(read_model_file(c.model_path), overrides(c));
    std::vector<Context> contexts;
    if (context_names.empty()) {
        contexts = m.model->default_context_sample(c.seed);
    } else {
        for (const auto &n : context_names) {
            contexts.push_back(resolve_context(*m.model, n));
        }
    }
    if (contexts.empty()) {
        throw UsageError("no contexts to diagnose: the model names none and has no default sample");
    }
    for (const auto &i : instruments) {
        require_instrument(*m.model, i);
    }
    DiagnosticsReport rep = feature_report(*m.model, contexts, instruments, c.seed);
    bool verified = verify_witnesses(*m.model, contexts, rep);
    Output o;
    o.text = to_text(rep) + "witnesses re-verified: " + (verified ? "yes" : "NO") + "\n";
    o.csv = "feature,value\n";
    o.csv += std::string("ftp_violated,") + (rep.ftp_violated ? "yes" : "no") + "\n";
    o.csv += std::string("order_effect,") + (rep.order_effect ? "yes" : "no") + "\n";
    o.csv += std::string("replicability,") + (rep.replicability ? "yes" : "no") + "\n";
    o.csv += std::string("rre,") + (rep.rre ? "yes" : "no") + "\n";
    o.csv += std::string("oe_and_rre,") + (rep.oe_and_rre ? "yes" : "no") + "\n";
    o.csv += std::string("bell_violated,") + (rep.bell_violated ? "yes" : "no") + "\n";
    o.csv += "chsh_max," + num(rep.chsh_max) + "\n";
    ReportRecord r = base_record(m, c, "diagnose");
    r.inputs["contexts"] = context_names;
    r.inputs["instruments"] = instruments;
    r.outputs = to_json(rep);
    r.outputs["witnesses_verified"] = verified;
    o.record = r;
    return o;
}

struct InterferenceRow {
    std::string parameter;
    std::string outcome;
    InterferenceDatum datum;
    std::optional<double> delta_cross;
};

Output cmd_interference(const Common &c, const std::vector<std::string> &context_names, const std::string &a,
                        const std::string &b, const std::string &y_label, int sweep) {
    LoadedModel m = load_model(read_model_file(c.model_path), overrides(c));
    const ContextualModel &model = *m.model;
    require_instrument(model, a);
    const std::string obs_b = observable_for(model, b);
    std::vector<std::size_t> ys;
    if (y_label.empty()) {
        ys.resize(model.outcomes(obs_b).size());
        std::iota(ys.begin(), ys.end(), 0);
    } else {
        try {
            ys.push_back(model.outcome_index(obs_b, y_label));
        } catch (const LookupError &e) {
            throw UsageError(e.what());
        }
    }

    auto *qm = dynamic_cast<const QuantumModel *>(&model);
    const HermitianObservable *ha = nullptr, *hb = nullptr;
    if (qm != nullptr && qm->instrument(a).kind() == InstrumentKind::projection) {
        ha = qm->hermitian(model.observable_of(a));
        hb = qm->hermitian(obs_b);
    }
    std::vector<std::pair<std::string, Context>> points;
    if (sweep > 0) {
        if (qm == nullptr || qm->dim() < 2) {
            throw UsageError("--sweep needs a quantum model of dimension at least 2");
        }
        for (int k = 0; k <= sweep; ++k) {
            double t = std::numbers::pi * k / sweep;
            std::vector<Complex> psi(qm->dim());
            psi[0] = std::cos(t);
            psi[1] = std::sin(t);
            points.emplace_back(num(t), make_quantum_context(DensityMatrix::pure(psi)));
        }
    } else if (!context_names.empty()) {
        for (const auto &n : context_names) {
            points.emplace_back(n, resolve_context(model, n));
        }
    } else {
        for (auto &nc : model.named_contexts()) {
            points.emplace_back(nc.name, nc.context);
        }
        if (points.empty()) {
            throw UsageError("the model names no contexts; pass --sweep for quantum models");
        }
    }

    std::vector<InterferenceRow> rows;
    for (const auto &[param, ctx] : points) {
        for (auto y : ys) {
            InterferenceRow row{param, model.outcomes(obs_b)[y].label, ftp_interference(model, ctx, a, obs_b, y), {}};
            if (ha != nullptr && hb != nullptr) {
                const DensityMatrix &rho = density_of(ctx);
                auto qi = quantum_interference(rho, *ha, *hb, y, m.tolerances);
                if (qi.pure) {
                    row.delta_cross = qi.delta_cross_terms;
                }
            }
            rows.push_back(std::move(row));
        }
    }

    Output o;
    const std::string head = sweep > 0 ? "t" : "context";
    o.csv = head + ",y,delta,delta_cross,lambda,theta,regime\n";
    o.text = head + "\ty\tdelta\tdelta_cross\tlambda\ttheta\tregime\n";
    json out = json::array();
    for (const auto &r : rows) {
        const std::string regime(to_string(r.datum.regime));
        o.csv += r.parameter + "," + r.outcome + "," + num(r.datum.delta) + "," + opt_num(r.delta_cross) + "," +
                 opt_num(r.datum.lambda) + "," + opt_num(r.datum.theta) + "," + regime + "\n";
        o.text += r.parameter + "\t" + r.outcome + "\t" + num(r.datum.delta) + "\t" +
                  (r.delta_cross ? num(*r.delta_cross) : "-") + "\t" +
                  (r.datum.lambda ? num(*r.datum.lambda) : "-") + "\t" +
                  (r.datum.theta ? num(*r.datum.theta) : "-") + "\t" + regime + "\n";
        json row = {{"parameter", r.parameter}, {"y", r.outcome}, {"datum", to_json(r.datum)}};
        row["delta_cross"] = r.delta_cross ? json(*r.delta_cross) : json(nullptr);
        out.push_back(row);
    }
    ReportRecord rec = base_record(m, c, "interference");
    rec.inputs["A"] = a;
    rec.inputs["B"] = b;
    rec.inputs["y"] = y_label;
    rec.inputs["sweep"] = sweep;
    rec.inputs["contexts"] = context_names;
    rec.outputs["rows"] = out;
    o.record = rec;
    return o;
}

Output cmd_chsh(const Common &c, const std::string &context, const std::vector<std::string> &insts, std::size_t restarts,
                bool separable, bool force) {
    LoadedModel m = load_model(read_model_file(c.model_path), overrides(c));
    const ContextualModel &model = *m.model;
    ReportRecord rec = base_record(m, c, "chsh");
    Output o;
    if (!insts.empty()) {
        if (insts.size() != 4) {
            throw UsageError("--instruments takes A1 A2 B1 B2");
        }
        for (const auto &i : insts) {
            require_instrument(model, i);
        }
        Context ctx = resolve_context(model, context);
        ChshEvaluation ev = chsh_value(model, ctx, {insts[0], insts[1]}, {insts[2], insts[3]}, force);
        o.text = std::string(ev.sequential ? "sequential CHSH" : "CHSH") + " value: " + num(ev.value) + "\n";
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < 2; ++j) {
                o.text += "  <" + insts[i] + " " + insts[2 + j] + "> = " + num(ev.correlations[i][j]) + "\n";
            }
        }
        o.csv = "value,sequential\n" + num(ev.value) + "," + (ev.sequential ? "true" : "false") + "\n";
        rec.inputs["context"] = context_name(model, context);
        rec.inputs["instruments"] = insts;
        rec.inputs["force"] = force;
        rec.outputs = to_json(ev);
    } else {
        double value;
        std::string witness;
        if (dynamic_cast<const QuantumModel *>(&model) != nullptr) {
            ChshSearchResult r = chsh_maximize(4, c.seed, restarts, separable);
            value = r.value;
            witness = r.witness.describe();
        } else if (auto best = model.chsh_class_maximum(c.seed)) {
            value = best->value;
            witness = best->witness;
        } else {
            throw PreconditionError("this backend has no CHSH maximizer; pass --instruments A1 A2 B1 B2");
        }
        o.text = "CHSH maximum: " + num(value) + "\nwitness: " + witness + "\n";
        o.csv = "value\n" + num(value) + "\n";
        rec.inputs["restarts"] = restarts;
        rec.inputs["separable"] = separable;
        rec.outputs = {{"value", value}, {"witness", witness}};
    }
    o.record = rec;
    return o;
}

/// Bijections between outcome sets of equal size, as pairing lists.
std::vector<std::vector<std::pair<std::size_t, std::size_t>>> complete_pairings(std::size_t n) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> out;
    do {
        std::vector<std::pair<std::size_t, std::size_t>> g;
        for (std::size_t k = 0; k < n; ++k) {
            g.emplace_back(k, perm[k]);
        }
        out.push_back(std::move(g));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

Output cmd_entangle(const Common &c, const std::string &context, const std::string &a, const std::string &b) {
    LoadedModel m = load_model(read_model_file(c.model_path), overrides(c));
    const ContextualModel &model = *m.model;
    require_instrument(model, a);
    const std::string obs_b = observable_for(model, b);
    Context ctx = resolve_context(model, context);
    const auto &oa = model.instrument_outcomes(a);
    const auto &ob = model.outcomes(obs_b);

    Concurrence conc = concurrence(model, ctx, a, obs_b);
    std::optional<double> shortcut;
    if (oa.size() == 2 && ob.size() == 2 && conc.excluded.empty()) {
        shortcut = concurrence_dichotomous(model, ctx, a, obs_b);
    }
    std::optional<bool> ab;
    try {
        ab = ab_entangled(model, ctx, a, obs_b);
    } catch (const PreconditionError &) {
    }
    json gammas = json::array();
    bool epr_any = false;
    std::string epr_text;
    if (oa.size() == ob.size() && oa.size() <= 6) {
        for (const auto &g : complete_pairings(oa.size())) {
            std::optional<EprResult> er;
            try {
                er = epr_entangled(model, ctx, a, obs_b, g);
            } catch (const ConditioningError &) {
            }
            json pairs = json::array();
            std::string gtext;
            for (const auto &[x, y] : g) {
                pairs.push_back({oa[x].label, ob[y].label});
                gtext += "(" + oa[x].label + "," + ob[y].label + ")";
            }
            gammas.push_back({{"gamma", pairs},
                              {"holds", er ? json(er->holds) : json(nullptr)},
                              {"complete", er ? json(er->complete) : json(nullptr)}});
            if (er && er->holds && er->complete) {
                epr_any = true;
                epr_text = gtext;
            }
        }
    }
    Output o;
    o.text = "concurrence: " + num(conc.value) + (conc.degenerate ? " (degenerate)" : "") + "\n";
    if (shortcut) {
        o.text += "dichotomous shortcut: " + num(*shortcut) + "\n";
    }
    o.text += "AB-entangled: " + std::string(ab ? (*ab ? "yes" : "no") : "undefined") + "\n";
    o.text += "EPR-entangled (complete): " + std::string(epr_any ? "yes " + epr_text : "no") + "\n";
    o.csv = "concurrence,ab_entangled,epr_complete\n" + num(conc.value) + "," +
            (ab ? (*ab ? "true" : "false") : "") + "," + (epr_any ? "true" : "false") + "\n";
    ReportRecord rec = base_record(m, c, "entangle");
    rec.inputs["context"] = context_name(model, context);
    rec.inputs["A"] = a;
    rec.inputs["B"] = b;
    rec.outputs = {{"concurrence", conc.value},
                   {"degenerate", conc.degenerate},
                   {"excluded", conc.excluded},
                   {"dichotomous_shortcut", shortcut ? json(*shortcut) : json(nullptr)},
                   {"ab_entangled", ab ? json(*ab) : json(nullptr)},
                   {"epr_complete", epr_any},
                   {"gammas", gammas}};
    o.record = rec;
    return o;
}

Output cmd_sample(const Common &c, const std::string &context, const std::string &a, const std::string &b,
                  std::size_t n, bool combinability) {
    LoadedModel m = load_model(read_model_file(c.model_path), overrides(c));
    const ContextualModel &model = *m.model;
    require_instrument(model, a);
    Context ctx = resolve_context(model, context);
    const std::string cname = context_name(model, context);
    if (n == 0) {
        throw UsageError("--N must be positive");
    }
    ReportRecord rec = base_record(m, c, "sample");
    rec.inputs["context"] = cname;
    rec.inputs["A"] = a;
    rec.inputs["B"] = b;
    rec.inputs["N"] = n;
    Output o;
    const auto &oa = model.instrument_outcomes(a);
    if (b.empty()) {
        OutcomeSequence seq = sample(model, ctx, a, n, c.seed, cname);
        FrequencyEstimate est = estimate(model, seq);
        Distribution p = prob_dist(model, ctx, model.observable_of(a));
        o.text = "outcome\tcount\tnu\tprobability\n";
        for (std::size_t x = 0; x < oa.size(); ++x) {
            o.text += oa[x].label + "\t" + std::to_string(est.counts[x]) + "\t" + num(est.nu[x]) + "\t" + num(p[x]) + "\n";
        }
        o.csv = to_csv(model, seq);
        rec.outputs = {{"estimate", to_json(est)}, {"probabilities", p}};
    } else {
        require_instrument(model, b);
        const auto &ob = model.instrument_outcomes(b);
        PairedSequence z = sample_sequential(model, ctx, a, b, n, c.seed, cname);
        JointDistribution freq = pair_frequencies(z, oa.size(), ob.size());
        JointDistribution exact = conditional_jpd(model, ctx, a, model.observable_of(b));
        o.text = "x\ty\tnu\tprobability\n";
        for (std::size_t x = 0; x < oa.size(); ++x) {
            for (std::size_t y = 0; y < ob.size(); ++y) {
                o.text += oa[x].label + "\t" + ob[y].label + "\t" + num(freq(x, y)) + "\t" + num(exact(x, y)) + "\n";
            }
        }
        o.csv = to_csv(model, z);
        rec.outputs = {{"joint", to_json(freq)}, {"conditional_jpd", to_json(exact)}};
        if (combinability) {
            Combinability cb = combinability_run(model, ctx, a, b, n, c.seed);
            o.text += "combinable: " + std::string(cb.marginals_match ? "yes" : "no") + " (max residual " +
                      num(cb.max_residual) + ", threshold " + num(cb.threshold) + ")\n";
            for (std::size_t y = 0; y < ob.size(); ++y) {
                o.text += "  residual B=" + ob[y].label + ": " + num(cb.residual_b[y]) + "\n";
            }
            rec.outputs["combinability"] = to_json(cb);
        }
    }
    o.record = rec;
    return o;
}

void emit(const Output &o, const Common &c, std::ostream &out) {
    std::string body;
    if (c.format == "json") {
        body = o.record ? to_json(*o.record).dump(2) + "\n" : "{}\n";
    } else if (c.format == "csv") {
        body = o.csv;
    } else {
        body = o.text;
    }
    if (c.out_path.empty()) {
        out << body;
        return;
    }
    std::ofstream f(c.out_path);
    if (!f) {
        throw UsageError("cannot write " + c.out_path);
    }
    f << body;
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Contextual measurement model toolkit", "cmm"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    Common validate_c, diagnose_c, interference_c, chsh_c, entangle_c, sample_c;

    auto *validate = app.add_subcommand("validate", "Check every invariant of a model file");
    add_common(validate, validate_c, false);

    auto *diagnose = app.add_subcommand("diagnose", "Feature table with witnesses");
    add_common(diagnose, diagnose_c, true);
    std::vector<std::string> diag_contexts, diag_instruments;
    diagnose->add_option("--contexts", diag_contexts, "Named contexts (default: the backend sample)")->delimiter(',');
    diagnose->add_option("--instruments", diag_instruments, "Instruments to include (default: all)")->delimiter(',');

    auto *interference = app.add_subcommand("interference", "Interference terms over contexts or a state sweep");
    add_common(interference, interference_c, false);
    std::vector<std::string> int_contexts;
    std::string int_a, int_b, int_y;
    int sweep = 0;
    interference->add_option("--context", int_contexts, "Named contexts")->delimiter(',');
    interference->add_option("--A", int_a, "Instrument measured first")->required();
    interference->add_option("--B", int_b, "Observable B")->required();
    interference->add_option("--y", int_y, "Outcome label of B (default: all)");
    interference->add_option("--sweep", sweep, "Sweep cos t|0> + sin t|1> over [0, pi] in this many steps")
        ->check(CLI::NonNegativeNumber);

    auto *chsh = app.add_subcommand("chsh", "CHSH maximum or evaluation");
    add_common(chsh, chsh_c, true);
    std::string chsh_context;
    std::vector<std::string> chsh_insts;
    std::size_t restarts = 8;
    bool separable = false, force = false;
    chsh->add_option("--context", chsh_context, "Context for evaluation");
    chsh->add_option("--instruments", chsh_insts, "A1,A2,B1,B2 to evaluate instead of maximizing")->delimiter(',');
    chsh->add_option("--restarts", restarts, "Random restarts of the maximizer")->check(CLI::PositiveNumber);
    chsh->add_flag("--separable", separable, "Restrict the two-qubit search to product states");
    chsh->add_flag("--force", force, "Evaluate sequentially (A then B) when pairs are not compatible");

    auto *entangle = app.add_subcommand("entangle", "Dependence, concurrence and EPR entanglement");
    add_common(entangle, entangle_c, false);
    std::string ent_context, ent_a, ent_b;
    entangle->add_option("--context", ent_context, "Context");
    entangle->add_option("--A", ent_a, "Instrument A")->required();
    entangle->add_option("--B", ent_b, "Observable B")->required();

    auto *samp = app.add_subcommand("sample", "Outcome sequences and frequencies");
    add_common(samp, sample_c, true);
    std::string s_context, s_a, s_b;
    std::size_t s_n = 100000;
    bool combinability = false;
    samp->add_option("--context", s_context, "Context");
    samp->add_option("--A", s_a, "Instrument A")->required();
    samp->add_option("--B", s_b, "Instrument B measured after A (paired sequence)");
    samp->add_option("--N", s_n, "Number of trials");
    samp->add_flag("--combinability", combinability, "Compare paired marginals with stand-alone runs");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    const Common *active = nullptr;
    try {
        Output o;
        if (validate->parsed()) {
            active = &validate_c;
            o = cmd_validate(validate_c);
        } else if (diagnose->parsed()) {
            active = &diagnose_c;
            o = cmd_diagnose(diagnose_c, diag_contexts, diag_instruments);
        } else if (interference->parsed()) {
            active = &interference_c;
            o = cmd_interference(interference_c, int_contexts, int_a, int_b, int_y, sweep);
        } else if (chsh->parsed()) {
            active = &chsh_c;
            o = cmd_chsh(chsh_c, chsh_context, chsh_insts, restarts, separable, force);
        } else if (entangle->parsed()) {
            active = &entangle_c;
            o = cmd_entangle(entangle_c, ent_context, ent_a, ent_b);
        } else {
            active = &sample_c;
            o = cmd_sample(sample_c, s_context, s_a, s_b, s_n, combinability);
        }
        emit(o, *active, out);
        return o.code;
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ValidationFailure &e) {
        err << "validation failure: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ModelFileError &e) {
        err << "model file error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const InvariantError &e) {
        err << "invariant violated: " << e.what() << "\n";
        return kExitValidation;
    } catch (const PreconditionError &e) {
        err << "precondition failure: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const ConditioningError &e) {
        err << "precondition failure: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const DomainError &e) {
        err << "precondition failure: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace cmm
