#include "kbgain/scalar.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>

namespace kbgain {

namespace {

constexpr int kScanSamples = 1024;

void validate_problem(const ScalarProblem& pr) {
    if (!(pr.a < 0.0)) throw NotHurwitz("scalar: requires a < 0");
    if (!(pr.alpha > 0.0)) throw InvalidHorizon("scalar: alpha must be positive");
    if (!(pr.gamma > 0.0)) throw InvalidHorizon("scalar: gamma must be positive");
    if (!(pr.x0 >= 0.0)) throw InvalidHorizon("scalar: x0 must be nonnegative");
    if (!(pr.t1 > pr.t0)) throw InvalidHorizon("scalar: t1 must exceed t0");
}

double refine_root(const std::function<double(double)>& f, double lo, double hi, double flo,
                   double fhi) {
    for (int iter = 0; iter < 200; ++iter) {
        const double width = hi - lo;
        if (width <= 4e-16 * std::max({1.0, std::abs(lo), std::abs(hi)})) break;
        double candidate = 0.5 * (lo + hi);
        if (fhi != flo) {
            const double secant = lo - flo * (hi - lo) / (fhi - flo);
            if (secant > lo + 0.01 * width && secant < hi - 0.01 * width) candidate = secant;
        }
        const double fc = f(candidate);
        if (fc == 0.0) return candidate;
        if ((flo < 0.0) != (fc < 0.0)) {
            hi = candidate;
            fhi = fc;
        } else {
            lo = candidate;
            flo = fc;
        }
    }
    return std::abs(flo) <= std::abs(fhi) ? lo : hi;
}

std::vector<double> find_roots(const std::function<double(double)>& f, double lo, double hi,
                               int samples = kScanSamples) {
    std::vector<double> roots;
    double prev_t = lo;
    double prev_f = f(lo);
    for (int i = 1; i <= samples; ++i) {
        const double t = lo + (hi - lo) * i / samples;
        const double ft = f(t);
        if (prev_f == 0.0) {
            roots.push_back(prev_t);
        } else if (std::isfinite(prev_f) && std::isfinite(ft) && (prev_f < 0.0) != (ft < 0.0)) {
            roots.push_back(refine_root(f, prev_t, t, prev_f, ft));
        }
        prev_t = t;
        prev_f = ft;
    }
    if (prev_f == 0.0) roots.push_back(prev_t);
    return roots;
}

ScalarArc free_arc(double t_begin, double t_end, double xt, double xv, double pt, double pv) {
    ScalarArc arc;
    arc.kind = ScalarArc::kFree;
    arc.t_begin = t_begin;
    arc.t_end = t_end;
    arc.u = 0.0;
    arc.x_anchor_t = xt;
    arc.x_anchor_v = xv;
    arc.p_anchor_t = pt;
    arc.p_anchor_v = pv;
    return arc;
}

ScalarArc sat_arc(const ScalarProblem& pr, double t_begin, double t_end, double xt, double xv,
                  double pt, double pv) {
    ScalarArc arc;
    arc.kind = ScalarArc::kSaturated;
    arc.t_begin = t_begin;
    arc.t_end = t_end;
    arc.u = pr.gamma;
    arc.x_anchor_t = xt;
    arc.x_anchor_v = xv;
    arc.p_anchor_t = pt;
    arc.p_anchor_v = pv;
    return arc;
}

ScalarArc dwell_arc(const ScalarProblem& pr, double u_star, double t_begin, double t_end) {
    ScalarArc arc;
    arc.kind = ScalarArc::kDwell;
    arc.t_begin = t_begin;
    arc.t_end = t_end;
    arc.u = u_star;
    const double s = std::sqrt(pr.alpha);
    arc.x_anchor_t = t_begin;
    arc.x_anchor_v = s;
    arc.p_anchor_t = t_begin;
    arc.p_anchor_v = s;
    return arc;
}

double arc_x(const ScalarProblem& pr, const ScalarArc& arc, double t) {
    switch (arc.kind) {
        case ScalarArc::kFree:
            return region1_x(pr.a, t, arc.x_anchor_t, arc.x_anchor_v);
        case ScalarArc::kDwell:
            return arc.x_anchor_v;
        case ScalarArc::kSaturated:
            return region3_x(pr.a, pr.gamma, t, arc.x_anchor_t, arc.x_anchor_v);
    }
    return 0.0;
}

double arc_p(const ScalarProblem& pr, const ScalarArc& arc, double t) {
    switch (arc.kind) {
        case ScalarArc::kFree:
            return region1_p(pr.a, t, arc.p_anchor_t, arc.p_anchor_v);
        case ScalarArc::kDwell:
            return arc.p_anchor_v;
        case ScalarArc::kSaturated:
            return region3_p(pr.a, pr.gamma, pr.alpha, t, arc.x_anchor_t, arc.x_anchor_v,
                             arc.p_anchor_t, arc.p_anchor_v);
    }
    return 0.0;
}

// Sampled check that x*p - alpha keeps the requested sign along an arc.
bool arc_respects_surface(const ScalarProblem& pr, const ScalarArc& arc, bool above,
                          int samples = 256) {
    const double tol = 1e-6 * std::max(1.0, pr.alpha);
    for (int i = 0; i <= samples; ++i) {
        const double t = arc.t_begin + (arc.t_end - arc.t_begin) * i / samples;
        const double v = arc_x(pr, arc, t) * arc_p(pr, arc, t) - pr.alpha;
        if (above ? (v < -tol) : (v > tol)) return false;
    }
    return true;
}

ScalarSolution finalize(const ScalarProblem& pr, const CaseLabel& cl, const char* subcase,
                        std::vector<ScalarArc> arcs, double u_star, bool has_dwell) {
    ScalarSolution sol;
    sol.problem = pr;
    sol.case_label = cl;
    sol.subcase = subcase;
    sol.u_star = u_star;
    sol.has_dwell = has_dwell;

    const double span = pr.t1 - pr.t0;
    for (ScalarArc& arc : arcs) {
        if (arc.t_end - arc.t_begin > 1e-13 * span) sol.arcs.push_back(arc);
    }
    if (sol.arcs.empty()) throw NoSubcaseMatch("solve_scalar: all arcs degenerate");
    sol.arcs.front().t_begin = pr.t0;
    sol.arcs.back().t_end = pr.t1;
    for (std::size_t i = 0; i + 1 < sol.arcs.size(); ++i) {
        sol.arcs[i + 1].t_begin = sol.arcs[i].t_end;
        sol.switch_times.push_back(sol.arcs[i].t_end);
    }
    for (const ScalarArc& arc : sol.arcs) sol.u_values.push_back(arc.u);

    std::vector<scalar::Segment> segments;
    for (const ScalarArc& arc : sol.arcs) {
        segments.push_back({arc.t_end - arc.t_begin, arc.u});
    }
    sol.cost = scalar::evaluate_cost(pr.a, pr.x0, pr.alpha, segments, span / 4096.0);
    return sol;
}

struct Region1Candidate {
    double pbar_t0;
    double xbar_t1;
};

// Switching-time residual shared by A-2, B-4 and C-3: the saturated flow from
// (t0, x0) meets the terminal free costate on the surface.
std::function<double(double)> crossing_residual(const ScalarProblem& pr) {
    return [pr](double t) {
        const double x = region3_x(pr.a, pr.gamma, t, pr.t0, pr.x0);
        const double p = region1_p(pr.a, t, pr.t1, 0.0);
        return x * p - pr.alpha;
    };
}

// {gamma then 0} solution through a surface crossing at t_switch.
std::optional<ScalarSolution> saturated_then_free(const ScalarProblem& pr, const CaseLabel& cl,
                                                  const char* subcase, double u_star,
                                                  bool require_downward) {
    const double sqrt_alpha = std::sqrt(pr.alpha);
    const auto residual = crossing_residual(pr);
    for (double t_switch : find_roots(residual, pr.t0, pr.t1)) {
        const double x_switch = region3_x(pr.a, pr.gamma, t_switch, pr.t0, pr.x0);
        if (require_downward && x_switch < sqrt_alpha * (1.0 - 1e-9)) continue;
        const double p_switch = region1_p(pr.a, t_switch, pr.t1, 0.0);
        ScalarArc head = sat_arc(pr, pr.t0, t_switch, pr.t0, pr.x0, t_switch, p_switch);
        ScalarArc tail = free_arc(t_switch, pr.t1, t_switch, x_switch, pr.t1, 0.0);
        if (!arc_respects_surface(pr, head, /*above=*/true)) continue;
        if (!arc_respects_surface(pr, tail, /*above=*/false)) continue;
        return finalize(pr, cl, subcase, {head, tail}, u_star, false);
    }
    return std::nullopt;
}

ScalarSolution solve_case_a(const ScalarProblem& pr, const CaseLabel& cl,
                            const Region1Candidate& cand) {
    if (pr.x0 * cand.pbar_t0 <= pr.alpha) {
        return finalize(pr, cl, "A-1", {free_arc(pr.t0, pr.t1, pr.t0, pr.x0, pr.t1, 0.0)}, 0.0,
                        false);
    }
    if (auto sol = saturated_then_free(pr, cl, "A-2", 0.0, /*require_downward=*/true)) {
        return *sol;
    }
    throw NoSubcaseMatch("solve_scalar: case A crossing equation has no valid root");
}

ScalarSolution solve_case_b(const ScalarProblem& pr, const CaseLabel& cl,
                            const Region1Candidate& cand) {
    const double sqrt_alpha = std::sqrt(pr.alpha);
    double u_star = 2.0 * pr.a / sqrt_alpha + 1.0 / pr.alpha;
    u_star = std::clamp(u_star, 0.0, pr.gamma);
    const double x_k = 2.0 * pr.a * pr.alpha + 2.0 * sqrt_alpha;

    if (cand.xbar_t1 <= x_k) {
        return finalize(pr, cl, "B-1", {free_arc(pr.t0, pr.t1, pr.t0, pr.x0, pr.t1, 0.0)}, u_star,
                        false);
    }
    if (pr.x0 > sqrt_alpha && pr.x0 * cand.pbar_t0 < pr.alpha) {
        return finalize(pr, cl, "B-2", {free_arc(pr.t0, pr.t1, pr.t0, pr.x0, pr.t1, 0.0)}, u_star,
                        false);
    }

    const double q = 2.0 * pr.a * sqrt_alpha + 1.0;  // in (0, 1) inside case B
    if (!(q > 0.0)) {
        throw NoSubcaseMatch("solve_scalar: singular-point exit undefined at the case boundary");
    }
    const double dwell_exit = pr.t1 - std::log(q) / (2.0 * pr.a);

    if (pr.x0 <= sqrt_alpha) {
        // Free flow climbs to the singular point, dwells, and leaves along the
        // terminal free arc. Valid for any starting costate side: the entry arc
        // is anchored at the singular point, not at the terminal costate.
        const double r = 2.0 * pr.a * pr.x0 + 1.0;
        double t_enter = pr.t0 + std::log(q / r) / (2.0 * pr.a);
        t_enter = std::clamp(t_enter, pr.t0, dwell_exit);
        return finalize(pr, cl, "B-3",
                        {free_arc(pr.t0, t_enter, pr.t0, pr.x0, t_enter, sqrt_alpha),
                         dwell_arc(pr, u_star, t_enter, dwell_exit),
                         free_arc(dwell_exit, pr.t1, dwell_exit, sqrt_alpha, pr.t1, 0.0)},
                        u_star, true);
    }

    if (auto sol = saturated_then_free(pr, cl, "B-4", u_star, /*require_downward=*/true)) {
        return *sol;
    }

    // B-5: saturated flow down to the singular point, dwell, free exit.
    const double c = std::sqrt(pr.a * pr.a + pr.gamma);
    const double denom = pr.a + c - pr.gamma * sqrt_alpha;
    const double kappa = (c - pr.a + pr.x0 * pr.gamma) / (c + pr.a - pr.x0 * pr.gamma);
    if (denom == 0.0 || kappa == 0.0) {
        throw NoSubcaseMatch("solve_scalar: B-5 construction degenerate");
    }
    const double e_target = 2.0 * c / denom - 1.0;
    const double ratio = e_target / kappa;
    if (!(ratio > 0.0)) {
        throw NoSubcaseMatch("solve_scalar: B-5 entry equation has no solution");
    }
    const double t_enter = pr.t0 + std::log(ratio) / (2.0 * c);
    if (!(t_enter > pr.t0 && t_enter <= dwell_exit + 1e-12 * (pr.t1 - pr.t0))) {
        throw NoSubcaseMatch("solve_scalar: B-5 switching times out of order");
    }
    return finalize(pr, cl, "B-5",
                    {sat_arc(pr, pr.t0, t_enter, pr.t0, pr.x0, t_enter, sqrt_alpha),
                     dwell_arc(pr, u_star, t_enter, std::max(t_enter, dwell_exit)),
                     free_arc(dwell_exit, pr.t1, dwell_exit, sqrt_alpha, pr.t1, 0.0)},
                    u_star, true);
}

ScalarSolution solve_case_c(const ScalarProblem& pr, const CaseLabel& cl,
                            const Region1Candidate& cand) {
    const double sqrt_alpha = std::sqrt(pr.alpha);
    const double x_k = 2.0 * pr.a * pr.alpha + 2.0 * sqrt_alpha;

    if (cand.xbar_t1 <= x_k) {
        return finalize(pr, cl, "C-1", {free_arc(pr.t0, pr.t1, pr.t0, pr.x0, pr.t1, 0.0)}, 0.0,
                        false);
    }
    if (pr.x0 > sqrt_alpha && pr.x0 * cand.pbar_t0 < pr.alpha) {
        return finalize(pr, cl, "C-2", {free_arc(pr.t0, pr.t1, pr.t0, pr.x0, pr.t1, 0.0)}, 0.0,
                        false);
    }

    // C-3: saturated head from (t0, x0), single downward crossing. The head
    // costate must start above the surface for the saturated arc to be
    // consistent; arc_respects_surface(above) covers the side condition.
    {
        const auto residual = crossing_residual(pr);
        for (double t_switch : find_roots(residual, pr.t0, pr.t1)) {
            const double x_switch = region3_x(pr.a, pr.gamma, t_switch, pr.t0, pr.x0);
            if (x_switch < sqrt_alpha * (1.0 - 1e-9)) continue;
            const double p_switch = region1_p(pr.a, t_switch, pr.t1, 0.0);
            ScalarArc head = sat_arc(pr, pr.t0, t_switch, pr.t0, pr.x0, t_switch, p_switch);
            ScalarArc tail = free_arc(t_switch, pr.t1, t_switch, x_switch, pr.t1, 0.0);
            if (!arc_respects_surface(pr, head, /*above=*/true)) continue;
            if (!arc_respects_surface(pr, tail, /*above=*/false)) continue;
            const double p_start = arc_p(pr, head, pr.t0);
            if (!(pr.x0 * p_start > pr.alpha * (1.0 - 1e-9))) continue;
            return finalize(pr, cl, "C-3", {head, tail}, 0.0, false);
        }
    }

    // C-4: free head, saturated excursion above the surface, free tail.
    // Outer bracketed search over the exit time t''; for a fixed exit the
    // entry time solves costate continuity. The excursion costate is anchored
    // at the exit so every arc evaluation runs in its contractive direction
    // (a head-anchored costate would amplify roundoff by e^{2c(t''-t')}).
    const double span = pr.t1 - pr.t0;
    const auto pbar = [&](double t) { return region1_p(pr.a, t, pr.t1, 0.0); };

    const auto inner_entry = [&](double t_exit) -> std::optional<double> {
        const double p_exit = pbar(t_exit);
        const auto inner_residual = [&](double t_entry) {
            const double x_entry = region1_x(pr.a, t_entry, pr.t0, pr.x0);
            if (!(x_entry > 0.0)) return std::numeric_limits<double>::quiet_NaN();
            return region3_p(pr.a, pr.gamma, pr.alpha, t_entry, t_entry, x_entry, t_exit,
                             p_exit) -
                   pr.alpha / x_entry;
        };
        const double hi = t_exit - 1e-12 * span;
        if (hi <= pr.t0) return std::nullopt;
        const auto roots = find_roots(inner_residual, pr.t0, hi, 512);
        if (roots.empty()) return std::nullopt;
        return roots.front();
    };
    const auto outer_residual = [&](double t_exit) -> double {
        const auto entry = inner_entry(t_exit);
        if (!entry) return std::numeric_limits<double>::quiet_NaN();
        const double x_entry = region1_x(pr.a, *entry, pr.t0, pr.x0);
        const double x_exit = region3_x(pr.a, pr.gamma, t_exit, *entry, x_entry);
        return x_exit * pbar(t_exit) - pr.alpha;
    };

    double prev_t = std::numeric_limits<double>::quiet_NaN();
    double prev_f = std::numeric_limits<double>::quiet_NaN();
    for (int i = 1; i < kScanSamples; ++i) {
        const double t = pr.t0 + span * i / kScanSamples;
        const double ft = outer_residual(t);
        if (std::isfinite(prev_f) && std::isfinite(ft) && (prev_f < 0.0) != (ft < 0.0)) {
            const double t_exit = refine_root(outer_residual, prev_t, t, prev_f, ft);
            const auto entry = inner_entry(t_exit);
            if (entry) {
                const double t_entry = *entry;
                const double x_entry = region1_x(pr.a, t_entry, pr.t0, pr.x0);
                const double p_entry = pr.alpha / x_entry;
                const double x_exit = region3_x(pr.a, pr.gamma, t_exit, t_entry, x_entry);
                ScalarArc head =
                    free_arc(pr.t0, t_entry, pr.t0, pr.x0, t_entry, p_entry);
                ScalarArc mid = sat_arc(pr, t_entry, t_exit, t_entry, x_entry, t_exit,
                                        pbar(t_exit));
                ScalarArc tail = free_arc(t_exit, pr.t1, t_exit, x_exit, pr.t1, 0.0);
                const bool upward_ok = x_entry <= sqrt_alpha * (1.0 + 1e-9);
                const bool downward_ok = x_exit >= sqrt_alpha * (1.0 - 1e-9);
                const double p_start = arc_p(pr, head, pr.t0);
                const bool start_ok = pr.x0 * p_start <= pr.alpha * (1.0 + 1e-9) ||
                                      head.t_end - head.t_begin <= 1e-12 * span;
                if (upward_ok && downward_ok && start_ok &&
                    arc_respects_surface(pr, head, /*above=*/false) &&
                    arc_respects_surface(pr, mid, /*above=*/true) &&
                    arc_respects_surface(pr, tail, /*above=*/false)) {
                    return finalize(pr, cl, "C-4", {head, mid, tail}, 0.0, false);
                }
            }
        }
        if (std::isfinite(ft)) {
            prev_t = t;
            prev_f = ft;
        }
    }
    throw NoSubcaseMatch("solve_scalar: case C admits neither the C-3 nor the C-4 construction");
}

} // namespace

CaseLabel classify_case(const ScalarProblem& problem) {
    validate_problem(problem);
    CaseLabel label;
    const double c = std::sqrt(problem.a * problem.a + problem.gamma);
    const double ratio = (problem.a + c) / problem.gamma;
    label.threshold_low = ratio * ratio;
    label.threshold_high = 1.0 / (4.0 * problem.a * problem.a);
    if (problem.alpha > label.threshold_high) {
        label.label = 'A';
    } else if (problem.alpha < label.threshold_low) {
        label.label = 'C';
    } else {
        label.label = 'B';
    }
    return label;
}

StationaryPoint stationary_point(const ScalarProblem& problem) {
    const CaseLabel label = classify_case(problem);
    StationaryPoint st;
    const double c = std::sqrt(problem.a * problem.a + problem.gamma);
    switch (label.label) {
        case 'A':
            st.x_e = -0.5 / problem.a;
            st.p_e = -0.5 / problem.a;
            st.u_e = 0.0;
            break;
        case 'B':
            st.x_e = std::sqrt(problem.alpha);
            st.p_e = st.x_e;
            st.u_e = 2.0 * problem.a / st.x_e + 1.0 / problem.alpha;
            break;
        default:
            st.x_e = (problem.a + c) / problem.gamma;
            st.p_e = (1.0 + problem.alpha * problem.gamma) / (2.0 * c);
            st.u_e = problem.gamma;
            break;
    }
    return st;
}

double region1_x(double a, double t, double s, double xs) {
    return ((2.0 * a * xs + 1.0) * std::exp(2.0 * a * (t - s)) - 1.0) / (2.0 * a);
}

double region1_p(double a, double t, double s_p, double ps) {
    return ((2.0 * a * ps + 1.0) * std::exp(-2.0 * a * (t - s_p)) - 1.0) / (2.0 * a);
}

double region3_x(double a, double gamma, double t, double s, double xs) {
    const double c = std::sqrt(a * a + gamma);
    const double denom = c + a - xs * gamma;
    if (std::abs(denom) < 1e-14 * std::max(1.0, std::abs(xs) * gamma)) {
        return xs;  // exact equilibrium (a + c) / gamma
    }
    const double kappa = (c - a + xs * gamma) / denom;
    const double e_t = kappa * std::exp(2.0 * c * (t - s));
    return (a + c - 2.0 * c / (e_t + 1.0)) / gamma;
}

double region3_p(double a, double gamma, double alpha, double t, double s, double xs, double s_p,
                 double ps) {
    const double c = std::sqrt(a * a + gamma);
    const double m = (1.0 + alpha * gamma) / (2.0 * c);
    const double denom = c + a - xs * gamma;
    if (std::abs(denom) < 1e-14 * std::max(1.0, std::abs(xs) * gamma)) {
        // x sits at the equilibrium; the costate equation is linear there.
        return (ps - m) * std::exp(2.0 * c * (t - s_p)) + m;
    }
    const double kappa = (c - a + xs * gamma) / denom;
    const double e_p = kappa * std::exp(2.0 * c * (s_p - s));
    const double beta = (ps * e_p - m * (e_p + 1.0)) / ((e_p + 1.0) * (e_p + 1.0));
    const double e_t = kappa * std::exp(2.0 * c * (t - s));
    return (beta * (e_t + 1.0) * (e_t + 1.0) + m * (e_t + 1.0)) / e_t;
}

ScalarSolution solve_scalar(const ScalarProblem& problem) {
    const CaseLabel label = classify_case(problem);
    Region1Candidate cand;
    cand.pbar_t0 = region1_p(problem.a, problem.t0, problem.t1, 0.0);
    cand.xbar_t1 = region1_x(problem.a, problem.t1, problem.t0, problem.x0);
    switch (label.label) {
        case 'A':
            return solve_case_a(problem, label, cand);
        case 'B':
            return solve_case_b(problem, label, cand);
        default:
            return solve_case_c(problem, label, cand);
    }
}

double ScalarSolution::x_at(double t) const {
    for (const ScalarArc& arc : arcs) {
        if (t <= arc.t_end || &arc == &arcs.back()) return arc_x(problem, arc, t);
    }
    return 0.0;
}

double ScalarSolution::p_at(double t) const {
    for (const ScalarArc& arc : arcs) {
        if (t <= arc.t_end || &arc == &arcs.back()) return arc_p(problem, arc, t);
    }
    return 0.0;
}

double ScalarSolution::x_of_arc(std::size_t arc_index, double t) const {
    return arc_x(problem, arcs.at(arc_index), t);
}

double ScalarSolution::p_of_arc(std::size_t arc_index, double t) const {
    return arc_p(problem, arcs.at(arc_index), t);
}

GainSchedule ScalarSolution::schedule() const {
    GainSchedule sched;
    sched.breakpoints.push_back(problem.t0);
    for (const ScalarArc& arc : arcs) {
        sched.breakpoints.push_back(arc.t_end);
        Matrix u(1, 1);
        u(0, 0) = arc.u;
        sched.values.push_back(u);
    }
    return sched;
}

HorizonSpec ScalarSolution::horizon() const {
    HorizonSpec h;
    h.t0 = problem.t0;
    h.t1 = problem.t1;
    h.X0 = Matrix::Constant(1, 1, problem.x0);
    h.alpha = problem.alpha;
    h.gamma = problem.gamma;
    return h;
}

LtiSystem ScalarSolution::system() const {
    return validate_system(Matrix::Constant(1, 1, problem.a), Matrix::Identity(1, 1));
}

CostBreakdown oracle_cost(const ScalarProblem& problem, const std::vector<double>& switch_times,
                          const std::vector<double>& u_values) {
    if (u_values.size() != switch_times.size() + 1) {
        throw DimensionMismatch("oracle_cost: values must be switches + 1");
    }
    std::vector<scalar::Segment> segments;
    double prev = problem.t0;
    for (std::size_t i = 0; i < u_values.size(); ++i) {
        const double end = (i < switch_times.size()) ? switch_times[i] : problem.t1;
        segments.push_back({end - prev, u_values[i]});
        prev = end;
    }
    return scalar::evaluate_cost(problem.a, problem.x0, problem.alpha, segments,
                                 (problem.t1 - problem.t0) / 512.0);
}

OracleResult brute_force_oracle(const ScalarProblem& problem, int grid_resolution) {
    validate_problem(problem);
    if (grid_resolution < 64) {
        throw InvalidHorizon("brute_force_oracle: grid_resolution must be at least 64");
    }
    const CaseLabel label = classify_case(problem);

    std::vector<double> values = {0.0, problem.gamma};
    if (label.label == 'B') {
        const double u_star =
            std::clamp(2.0 * problem.a / std::sqrt(problem.alpha) + 1.0 / problem.alpha, 0.0,
                       problem.gamma);
        values.push_back(u_star);
    }

    const double span = problem.t1 - problem.t0;
    const double dt = span / 512.0;
    OracleResult best;
    best.best_cost = std::numeric_limits<double>::infinity();

    const auto consider = [&](std::span<const scalar::Segment> segs,
                              std::initializer_list<double> times,
                              std::initializer_list<double> us) {
        const double cost =
            scalar::evaluate_cost(problem.a, problem.x0, problem.alpha, segs, dt).cost;
        if (cost < best.best_cost) {
            best.best_cost = cost;
            best.switch_times.assign(times);
            best.u_values.assign(us);
        }
    };

    std::array<scalar::Segment, 3> segs{};
    for (double v : values) {
        segs[0] = {span, v};
        consider({segs.data(), 1}, {}, {v});
    }
    for (int i = 1; i < grid_resolution; ++i) {
        const double s = problem.t0 + span * i / grid_resolution;
        for (double v1 : values) {
            for (double v2 : values) {
                if (v1 == v2) continue;
                segs[0] = {s - problem.t0, v1};
                segs[1] = {problem.t1 - s, v2};
                consider({segs.data(), 2}, {s}, {v1, v2});
            }
        }
    }
    for (int i = 1; i < grid_resolution; ++i) {
        const double s1 = problem.t0 + span * i / grid_resolution;
        for (int j = i + 1; j < grid_resolution; ++j) {
            const double s2 = problem.t0 + span * j / grid_resolution;
            for (double v1 : values) {
                for (double v2 : values) {
                    if (v2 == v1) continue;
                    for (double v3 : values) {
                        if (v3 == v2) continue;
                        segs[0] = {s1 - problem.t0, v1};
                        segs[1] = {s2 - s1, v2};
                        segs[2] = {problem.t1 - s2, v3};
                        consider(segs, {s1, s2}, {v1, v2, v3});
                    }
                }
            }
        }
    }
    return best;
}

} // namespace kbgain
