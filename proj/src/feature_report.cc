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
#include "cmm/feature_report.h"

#include <cmath>
#include <cstdio>

#include "cmm/diagnostics.h"
#include "cmm/errors.h"

namespace cmm {

namespace {

constexpr double kBellMargin = 1e-9;

FeatureWitness make_witness(const ContextualModel &model, std::size_t index, const Context &c, std::string_view a,
                            std::string_view b, std::optional<std::size_t> x, std::optional<std::size_t> y,
                            double margin) {
    FeatureWitness w;
    w.context_index = index;
    w.context = c->describe();
    w.instrument_a = std::string(a);
    w.instrument_b = std::string(b);
    if (x) {
        w.outcome_x = model.instrument_outcomes(a)[*x].label;
    }
    if (y && !b.empty()) {
        w.outcome_y = model.instrument_outcomes(b)[*y].label;
    }
    w.margin = margin;
    return w;
}

bool chsh_eligible(const ContextualModel &model, std::string_view inst) {
    for (const auto &o : model.instrument_outcomes(inst)) {
        if (!o.numeric() || o.value < -1.0 || o.value > 1.0) {
            return false;
        }
    }
    return true;
}

std::string yes_no(bool b) {
    return b ? "yes" : "no";
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string witness_line(const FeatureWitness &w) {
    std::string s = "context #" + std::to_string(w.context_index) + " " + w.context + ", " + w.instrument_a;
    if (!w.outcome_x.empty()) {
        s += "=" + w.outcome_x;
    }
    if (!w.instrument_b.empty()) {
        s += ", " + w.instrument_b;
        if (!w.outcome_y.empty()) {
            s += "=" + w.outcome_y;
        }
    }
    return s + ", margin " + num(w.margin);
}

}  // namespace

DiagnosticsReport feature_report(const ContextualModel &model, const std::vector<Context> &contexts,
                                 std::vector<std::string> instruments, std::uint64_t seed) {
    if (contexts.empty()) {
        throw InputError("feature_report: empty context sample");
    }
    if (instruments.empty()) {
        instruments = model.instruments();
    }
    if (instruments.empty()) {
        throw InputError("feature_report: model has no instruments");
    }
    const Tolerances &tol = model.tolerances();
    DiagnosticsReport r;
    r.backend = std::string(model.backend());
    r.contexts = contexts.size();
    r.instruments = instruments.size();

    for (std::size_t ci = 0; ci < contexts.size(); ++ci) {
        const Context &c = contexts[ci];
        for (const auto &a : instruments) {
            Check rep = replicability(model, c, a);
            if (!rep.holds && r.replicability) {
                r.replicability = false;
                r.replicability_counterexample = make_witness(model, ci, c, a, {}, {}, {}, rep.residual);
            }
            for (const auto &b : instruments) {
                if (a == b) {
                    continue;
                }
                const std::string &obs_b = model.observable_of(b);
                for (std::size_t y = 0; y < model.outcomes(obs_b).size(); ++y) {
                    InterferenceDatum d = ftp_interference(model, c, a, obs_b, y);
                    if (std::abs(d.delta) > r.max_delta) {
                        r.max_delta = std::abs(d.delta);
                        if (r.max_delta > tol.eps_oe) {
                            r.ftp_violated = true;
                            r.ftp_witness = make_witness(model, ci, c, a, b, {}, y, d.delta);
                        }
                    }
                }
                OrderEffect oe = order_effect(model, c, a, b);
                if (oe.present &&
                    (!r.order_effect_witness || oe.max_discrepancy > r.order_effect_witness->margin)) {
                    r.order_effect = true;
                    r.order_effect_witness = make_witness(model, ci, c, a, b, oe.x, oe.y, oe.max_discrepancy);
                }
                if (b < a) {
                    continue;
                }
                Check rre = rre_check(model, c, a, b);
                if (!rre.holds && r.rre) {
                    r.rre = false;
                    r.rre_counterexample = make_witness(model, ci, c, a, b, {}, {}, rre.residual);
                }
                if (rre.holds && oe.present &&
                    (!r.oe_and_rre_witness || oe.max_discrepancy > r.oe_and_rre_witness->margin)) {
                    r.oe_and_rre = true;
                    r.oe_and_rre_witness = make_witness(model, ci, c, a, b, oe.x, oe.y, oe.max_discrepancy);
                }
            }
        }
    }

    if (auto best = model.chsh_class_maximum(seed)) {
        r.chsh_max = best->value;
        r.chsh_witness = best->witness;
        r.chsh_source = "class maximizer";
    } else {
        r.chsh_source = "sample";
        std::vector<std::string> eligible;
        for (const auto &i : instruments) {
            if (chsh_eligible(model, i)) {
                eligible.push_back(i);
            }
        }
        for (std::size_t ci = 0; ci < contexts.size(); ++ci) {
            for (const auto &a1 : eligible) {
                for (const auto &a2 : eligible) {
                    for (const auto &b1 : eligible) {
                        for (const auto &b2 : eligible) {
                            if (a1 == a2 || b1 == b2) {
                                continue;
                            }
                            double v;
                            try {
                                v = chsh_value(model, contexts[ci], {a1, a2}, {b1, b2}).value;
                            } catch (const PreconditionError &) {
                                continue;
                            }
                            if (!r.chsh_context_index || v > r.chsh_max) {
                                r.chsh_max = v;
                                r.chsh_context_index = ci;
                                r.chsh_instruments = {a1, a2, b1, b2};
                                r.chsh_witness = "context #" + std::to_string(ci) + " " + contexts[ci]->describe() +
                                                 ", A1=" + a1 + " A2=" + a2 + " B1=" + b1 + " B2=" + b2;
                            }
                        }
                    }
                }
            }
        }
    }
    r.bell_violated = r.chsh_max > 2.0 + kBellMargin;
    return r;
}

bool verify_witnesses(const ContextualModel &model, const std::vector<Context> &contexts,
                      const DiagnosticsReport &report) {
    const Tolerances &tol = model.tolerances();
    auto ctx = [&](const FeatureWitness &w) -> const Context & { return contexts.at(w.context_index); };
    if (report.ftp_violated) {
        const auto &w = *report.ftp_witness;
        const std::string &obs_b = model.observable_of(w.instrument_b);
        auto d = ftp_interference(model, ctx(w), w.instrument_a, obs_b, model.outcome_index(obs_b, w.outcome_y));
        if (std::abs(d.delta - w.margin) > 1e-12 || std::abs(d.delta) <= tol.eps_oe) {
            return false;
        }
    }
    if (report.order_effect) {
        const auto &w = *report.order_effect_witness;
        auto oe = order_effect(model, ctx(w), w.instrument_a, w.instrument_b);
        if (!oe.present || std::abs(oe.max_discrepancy - w.margin) > 1e-12) {
            return false;
        }
    }
    if (!report.replicability) {
        const auto &w = *report.replicability_counterexample;
        if (replicability(model, ctx(w), w.instrument_a).holds) {
            return false;
        }
    }
    if (!report.rre) {
        const auto &w = *report.rre_counterexample;
        if (rre_check(model, ctx(w), w.instrument_a, w.instrument_b).holds) {
            return false;
        }
    }
    if (report.oe_and_rre) {
        const auto &w = *report.oe_and_rre_witness;
        if (!order_effect(model, ctx(w), w.instrument_a, w.instrument_b).present ||
            !rre_check(model, ctx(w), w.instrument_a, w.instrument_b).holds) {
            return false;
        }
    }
    if (report.chsh_context_index) {
        const auto &n = report.chsh_instruments;
        double v = chsh_value(model, contexts.at(*report.chsh_context_index), {n[0], n[1]}, {n[2], n[3]}).value;
        if (std::abs(v - report.chsh_max) > 1e-12) {
            return false;
        }
    }
    return true;
}

std::string to_text(const DiagnosticsReport &r) {
    std::string s = "backend: " + r.backend + " (" + std::to_string(r.contexts) + " contexts, " +
                    std::to_string(r.instruments) + " instruments)\n";
    s += "FTP violated:   " + yes_no(r.ftp_violated) + "  (max |delta| " + num(r.max_delta) + ")\n";
    if (r.ftp_witness) {
        s += "  witness: " + witness_line(*r.ftp_witness) + "\n";
    }
    s += "order effect:   " + yes_no(r.order_effect) + "\n";
    if (r.order_effect_witness) {
        s += "  witness: " + witness_line(*r.order_effect_witness) + "\n";
    }
    s += "replicability:  " + yes_no(r.replicability) + "\n";
    if (r.replicability_counterexample) {
        s += "  counterexample: " + witness_line(*r.replicability_counterexample) + "\n";
    }
    s += "RRE:            " + yes_no(r.rre) + "\n";
    if (r.rre_counterexample) {
        s += "  counterexample: " + witness_line(*r.rre_counterexample) + "\n";
    }
    s += "OE and RRE:     " + yes_no(r.oe_and_rre) + "\n";
    if (r.oe_and_rre_witness) {
        s += "  witness: " + witness_line(*r.oe_and_rre_witness) + "\n";
    }
    s += "Bell violated:  " + yes_no(r.bell_violated) + "  (CHSH max " + num(r.chsh_max) + ", " + r.chsh_source + ")\n";
    if (!r.chsh_witness.empty()) {
        s += "  witness: " + r.chsh_witness + "\n";
    }
    return s;
}

}  // namespace cmm
