#pragma once

/**
 * @file surgery.hpp
 * @brief Birational surgery on Poincare polynomials.
 *
 * A smooth blow-up of X along Z of codimension c satisfies
 *
 *     P(Bl_Z X) = P(X) + P(Z) (P(P^{c-1}) - 1),
 *
 * and a blow-down reverses it. A pipeline replays a chain of such surgeries
 * from a base space and keeps a per-step trace of the intermediate spaces.
 */

#include <string>
#include <utility>
#include <vector>

#include "catalog.hpp"
#include "errors.hpp"
#include "polyring.hpp"

namespace curvebetti {

enum class step_kind { blowup, blowdown };

inline const char* to_string(step_kind k) { return k == step_kind::blowup ? "blowup" : "blowdown"; }

/// One blow-up or blow-down. center is the blow-up center as seen in the
/// space the correction applies to; fiber is the exceptional fiber.
struct surgery_step {
    step_kind kind = step_kind::blowup;
    poincare_poly center;
    poincare_poly fiber;
    std::string label;
    bool check_dim = false;  // center dim + codim must equal the ambient dim

    /// Blow-up along a center of the given codimension; fiber P^{codim-1}.
    static surgery_step blowup(std::string label, poincare_poly center, int codim) {
        if (codim < 1) throw invalid_parameters("blowup '" + label + "': codimension must be positive");
        return {step_kind::blowup, std::move(center), projective(codim - 1), std::move(label), true};
    }

    /// Blow-down contracting fiber over center_downstairs.
    static surgery_step blowdown(std::string label, poincare_poly center_downstairs, poincare_poly fiber) {
        if (fiber.components() != 1 || fiber.dim() < 0)
            throw invalid_parameters("blowdown '" + label + "': fiber must be connected and nonempty");
        return {step_kind::blowdown, std::move(center_downstairs), std::move(fiber), std::move(label), false};
    }

    /// Signed change to the Poincare polynomial: +/- P(center) (P(fiber) - 1).
    int_poly correction() const {
        int_poly c = center.poly() * (fiber.poly() - int_poly::one());
        return kind == step_kind::blowup ? c : -c;
    }
};

struct pipeline {
    poincare_poly base;
    std::vector<surgery_step> steps;
};

struct trace_record {
    std::string label;
    step_kind kind;
    int_poly correction;
    int_poly cumulative;
};

struct pipeline_result {
    poincare_poly result;
    std::vector<trace_record> trace;
};

/// Locally trivial fibration: P(total) = P(base) P(fiber).
inline poincare_poly bundle_total(const poincare_poly& base, const poincare_poly& fiber) {
    return poincare_poly(base.poly() * fiber.poly());
}

inline poincare_poly blowup_apply(const poincare_poly& space, const poincare_poly& center, int codim) {
    if (codim < 1) throw invalid_parameters("blowup_apply: codimension must be positive, got " + std::to_string(codim));
    if (!center.is_empty() && center.dim() + codim != space.dim())
        throw dimension_mismatch("blowup_apply: center dim " + std::to_string(center.dim()) + " + codim " +
                                 std::to_string(codim) + " != ambient dim " + std::to_string(space.dim()));
    return poincare_poly(space.poly() + center.poly() * (projective(codim - 1).poly() - int_poly::one()));
}

inline poincare_poly blowdown_apply(const poincare_poly& space, const poincare_poly& center_downstairs,
                                    const poincare_poly& fiber) {
    if (fiber.components() != 1) throw invalid_parameters("blowdown_apply: fiber must be connected");
    int_poly out = space.poly() - center_downstairs.poly() * (fiber.poly() - int_poly::one());
    if (!out.is_nonnegative())
        throw negative_betti("blowdown_apply: result " + out.to_string() + " has a negative Betti number");
    return poincare_poly(std::move(out));
}

inline poincare_poly union_disjoint(const poincare_poly& a, const poincare_poly& b) {
    return poincare_poly(a.poly() + b.poly());
}

struct pipeline_options {
    /// Require every intermediate space to have nonnegative Betti numbers.
    /// With this off the run is a pure signed sum and only the total is checked.
    bool strict_intermediate = true;
};

inline pipeline_result run_pipeline(const pipeline& p, pipeline_options opts = {}) {
    pipeline_result out;
    out.trace.reserve(p.steps.size());
    int_poly cumulative = p.base.poly();
    const int ambient = p.base.dim();

    for (const auto& step : p.steps) {
        try {
            if (step.kind == step_kind::blowup && step.check_dim && !step.center.is_empty() &&
                step.center.dim() + step.fiber.dim() + 1 != ambient)
                throw dimension_mismatch("center dim " + std::to_string(step.center.dim()) + " + codim " +
                                         std::to_string(step.fiber.dim() + 1) + " != ambient dim " +
                                         std::to_string(ambient));
            int_poly corr = step.correction();
            cumulative += corr;
            if (opts.strict_intermediate && !cumulative.is_nonnegative())
                throw negative_betti("intermediate space " + cumulative.to_string() + " has a negative Betti number");
            out.trace.push_back({step.label, step.kind, std::move(corr), cumulative});
        } catch (error& e) {
            e.add_context("step '" + step.label + "'");
            throw;
        }
    }
    try {
        out.result = poincare_poly(std::move(cumulative));
    } catch (error& e) {
        e.add_context("pipeline total");
        throw;
    }
    return out;
}

}  // namespace curvebetti
