#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "orlicz/curvature.hpp"
#include "orlicz/error.hpp"
#include "orlicz/geometry.hpp"
#include "orlicz/grid.hpp"
#include "orlicz/integration.hpp"
#include "orlicz/log_concave.hpp"
#include "orlicz/measure.hpp"
#include "orlicz/moments.hpp"
#include "orlicz/prototype.hpp"
#include "orlicz/weight.hpp"

namespace orlicz {

/// Even discrete target measure on R^n with its negation pairing.
class TargetMeasure {
public:
    /// Atoms lighter than 1e-10 |mu| are dropped; the rest must be closed under negation.
    explicit TargetMeasure(const DiscreteMeasure& mu) : dim_(mu.dim()) {
        require(mu.ambient() == Ambient::Euclidean, ErrorCode::InvalidArgument, "target measure must live on R^n");
        const double total = mu.total_mass();
        require(total > 0, ErrorCode::InvalidArgument, "target measure has zero mass");
        for (const auto& a : mu.atoms()) {
            if (a.mass < 1e-10 * total) {
                ++dropped_;
                continue;
            }
            atoms_.push_back(a.x);
            masses_.push_back(a.mass);
        }
        const double scale = std::max(1.0, first_moment() / this->total());
        pair_.assign(atoms_.size(), atoms_.size());
        for (std::size_t k = 0; k < atoms_.size(); ++k) {
            for (std::size_t j = 0; j < atoms_.size(); ++j) {
                if (norm(atoms_[k] + atoms_[j]) <= 1e-12 * scale) {
                    pair_[k] = j;
                    break;
                }
            }
            require(pair_[k] < atoms_.size(), ErrorCode::NotEven, "target measure is not even: an atom has no mirror");
            require(std::abs(masses_[k] - masses_[pair_[k]]) <= 1e-12 * std::max(1.0, masses_[k]), ErrorCode::NotEven,
                    "target measure is not even: mirrored atoms carry different masses");
        }
    }

    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] std::size_t size() const { return atoms_.size(); }
    [[nodiscard]] const std::vector<Vec>& atoms() const { return atoms_; }
    [[nodiscard]] const std::vector<double>& masses() const { return masses_; }
    [[nodiscard]] std::size_t pair(std::size_t k) const { return pair_[k]; }
    [[nodiscard]] int dropped() const { return dropped_; }

    [[nodiscard]] double total() const {
        double s = 0;
        for (double m : masses_) s += m;
        return s;
    }
    [[nodiscard]] double first_moment() const {
        double s = 0;
        for (std::size_t k = 0; k < atoms_.size(); ++k) s += masses_[k] * norm(atoms_[k]);
        return s;
    }
    [[nodiscard]] DiscreteMeasure measure() const {
        DiscreteMeasure m(Ambient::Euclidean, dim_);
        for (std::size_t k = 0; k < atoms_.size(); ++k) m.add(atoms_[k], masses_[k]);
        return m;
    }

    /// Dimension of the span of the atoms.
    [[nodiscard]] int subspace_rank() const {
        const double tol = 1e-12 * std::max(1.0, max_norm() * max_norm());
        int rank = 0;
        Vec first{0, 0};
        for (const auto& x : atoms_) {
            if (norm(x) <= 1e-12 * std::max(1.0, max_norm())) continue;
            if (rank == 0) {
                first = x;
                rank = 1;
            } else if (dim_ == 2 && std::abs(cross(first, x)) > tol) {
                return 2;
            }
        }
        return rank;
    }

private:
    [[nodiscard]] double max_norm() const {
        double m = 0;
        for (const auto& x : atoms_) m = std::max(m, norm(x));
        return m;
    }

    int dim_ = 1;
    std::vector<Vec> atoms_;
    std::vector<double> masses_;
    std::vector<std::size_t> pair_;
    int dropped_ = 0;
};

/// zeta_mu = inf over unit v of int |<x, v>| d mu.
inline double zeta_mu(const TargetMeasure& mu) {
    require(mu.subspace_rank() == mu.dim(), ErrorCode::RankDeficient, "atoms span a proper subspace");
    auto objective = [&](double theta) {
        const Vec u = unit_at_angle(theta);
        double s = 0;
        for (std::size_t k = 0; k < mu.size(); ++k) s += mu.masses()[k] * std::abs(dot(mu.atoms()[k], u));
        return s;
    };
    if (mu.dim() == 1) return mu.first_moment();

    const int sweep = 1024;
    const double step = std::numbers::pi / sweep;
    double best = kInf, best_theta = 0;
    for (int i = 0; i < sweep; ++i) {
        const double v = objective(i * step);
        if (v < best) {
            best = v;
            best_theta = i * step;
        }
    }
    // golden-section refinement around the best sweep angle
    const double gr = 0.5 * (std::sqrt(5.0) - 1);
    double a = best_theta - step, b = best_theta + step;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    for (int it = 0; it < 100; ++it) {
        if (objective(c) < objective(d)) b = d;
        else a = c;
        c = b - gr * (b - a);
        d = a + gr * (b - a);
    }
    best = std::min(best, objective(0.5 * (a + b)));
    // the objective is piecewise concave in theta, so its minimum sits at a direction orthogonal to an atom
    for (const auto& x : mu.atoms())
        if (norm(x) > 0) best = std::min(best, objective(std::atan2(x[1], x[0]) + 0.5 * std::numbers::pi));
    require(best > 1e-12 * mu.first_moment(), ErrorCode::RankDeficient, "zeta_mu vanishes");
    return best;
}

enum class Condition113 { SatisfiedByClassification, SatisfiedNumeric, Inconclusive };

inline std::string_view to_string(Condition113 c) {
    switch (c) {
    case Condition113::SatisfiedByClassification: return "satisfied_by_classification";
    case Condition113::SatisfiedNumeric: return "satisfied_numeric_trend";
    case Condition113::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct Condition113Report {
    Condition113 verdict = Condition113::Inconclusive;
    double zeta = 0;
    std::vector<double> t;
    std::vector<double> log_product;  // ln F_omega(t) - zeta / (2 |mu| t)
};

/// liminf_{t -> 0+} F_omega(t) exp(-zeta / (2 |mu| t)) = 0, by growth class or by the trend of
/// the log product on t = 2^{-k}, k = 1..10.
inline Condition113Report check_condition_113(const WeightFunction& w, const TargetMeasure& mu) {
    Condition113Report rep;
    rep.zeta = zeta_mu(mu);
    const Growth g = F_growth_classification(w);
    if (g == Growth::Bounded || g == Growth::Polynomial) {
        rep.verdict = Condition113::SatisfiedByClassification;
        return rep;
    }
    for (int k = 1; k <= 10; ++k) {
        const double t = std::ldexp(1.0, -k);
        rep.t.push_back(t);
        try {
            rep.log_product.push_back(log_F_omega(w, t) - rep.zeta / (2 * mu.total() * t));
        } catch (const Error&) {
            rep.log_product.push_back(kInf);
        }
    }
    bool decreasing = true;
    for (std::size_t i = 5; i < rep.log_product.size(); ++i)
        if (!(rep.log_product[i] < rep.log_product[i - 1])) decreasing = false;
    const double last = rep.log_product.back();
    rep.verdict = (decreasing && std::isfinite(last) && last < -5) ? Condition113::SatisfiedNumeric
                                                                   : Condition113::Inconclusive;
    return rep;
}

/// phi*(y) = max_k <x_k, y> - v_k as a max-affine prototype.
inline Prototype dual_potential(const TargetMeasure& mu, const std::vector<double>& v, double shift = 0) {
    std::vector<double> offsets(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) offsets[k] = -v[k] + shift;
    return Prototype::max_affine(mu.dim(), mu.atoms(), offsets);
}

struct CellMasses {
    std::vector<double> m;
    double V = 0;
    double tail_fraction = 0;  // grid route only: share of V in the outer 10% of the box
};

/// m_k = int over {argmax = k} of exp(-phi*) omega, V = sum m_k; polar quadrature with the ray
/// breakpoints at the cell boundaries, so every quadrature piece lies inside one cell.
inline CellMasses cell_masses(const std::vector<double>& v, const TargetMeasure& mu, const WeightFunction& w) {
    require(v.size() == mu.size(), ErrorCode::InvalidArgument, "potential vector has the wrong length");
    const Prototype p = dual_potential(mu, v);
    CellMasses out;
    out.m.assign(v.size(), 0.0);
    for_each_sample(LogConcaveFunction(p), w, [&](const Sample& s) { out.m[p.active_piece(s.x)] += s.mass; });
    for (double x : out.m) out.V += x;
    require(std::isfinite(out.V) && out.V > 0, ErrorCode::QuadratureFailure, "cell masses are not finite");
    return out;
}

/// Same partition on a dual grid (nodes weighted by the cell volume, ties to the lowest index).
inline CellMasses cell_masses_grid(const std::vector<double>& v, const TargetMeasure& mu, const WeightFunction& w,
                                   const Grid& dual) {
    require(dual.dim() == mu.dim(), ErrorCode::GridMismatch, "dual grid dimension differs from the measure");
    const Prototype p = dual_potential(mu, v);
    CellMasses out;
    out.m.assign(v.size(), 0.0);
    double tail = 0;
    for (std::size_t i = 0; i < dual.size(); ++i) {
        const Vec y = dual.node(i);
        const double mass = dual.cell_volume() * std::exp(-p.phi(y) + w.log_eval(y));
        if (!std::isfinite(mass)) continue;
        out.m[p.active_piece(y)] += mass;
        for (int a = 0; a < dual.dim(); ++a)
            if (std::abs(y[a]) > 0.9 * dual.half_width(a)) {
                tail += mass;
                break;
            }
    }
    for (double x : out.m) out.V += x;
    out.tail_fraction = tail / out.V;
    require(out.tail_fraction <= 0.005, ErrorCode::TruncationUnreliable,
            "dual grid tail carries " + std::to_string(100 * out.tail_fraction) + "% of the mass");
    return out;
}

struct SolveOptions {
    double kkt_tol = 1e-4;
    int max_iterations = 5000;
    int stall_limit = 50;
    double armijo = 1e-4;
    double backtrack = 0.5;
    bool force = false;
    bool throw_on_failure = true;  // NoProgress; otherwise the report carries converged = false
};

struct IterationRecord {
    int iteration = 0;
    double objective = 0;  // J / |mu|
    double kkt_residual = 0;
    double step = 0;
};

struct Lemma55Check {
    double a = 0;        // V_omega(exp(-phi~*)) for the normalised potential phi~ = phi - phi(o)
    double bound = 0;    // F_omega(zeta / (2 int phi~ dmu + 2 |mu|))
    bool holds = false;  // a / e <= bound
};

struct SolveReport {
    std::vector<double> v;
    std::vector<double> masses;  // m_k |mu| / V, the recovered atom masses
    std::vector<double> per_atom_mass_errors;
    double V = 0;
    double kkt_residual = 0;
    int iterations = 0;
    bool converged = false;
    std::string stop_reason;
    Condition113Report condition_113;
    double zeta = 0;
    std::optional<Prototype> solution;  // f0 = (|mu| / V) exp(-phi*)
    DiscreteMeasure recovered_measure;
    double w1_to_target = 0;
    double mass_gap = 0;
    std::vector<IterationRecord> trace;
    std::vector<Lemma55Check> lemma55;
    bool lemma55_all_hold = true;
    bool concavity_ok = true;
    double concavity_defect = 0;  // max over probes of the midpoint concavity violation
    double phi0_origin = 0;       // phi_0(o) for the returned solution
    bool positivity_ok = false;   // phi_0(o) > 0
    double grid_crosscheck_gap = 0;  // max |m_k/V (polar) - m_k/V (grid)|
};

namespace detail {

inline double kkt_residual(const CellMasses& c, const TargetMeasure& mu) {
    double r = 0;
    for (std::size_t k = 0; k < c.m.size(); ++k) r = std::max(r, std::abs(c.m[k] / c.V - mu.masses()[k] / mu.total()));
    return r;
}

inline double objective(const std::vector<double>& v, const CellMasses& c, const TargetMeasure& mu) {
    double s = 0;
    for (std::size_t k = 0; k < v.size(); ++k) s -= mu.masses()[k] * v[k];
    return s / mu.total() + std::log(c.V);
}

inline void symmetrize(std::vector<double>& v, const TargetMeasure& mu) {
    for (std::size_t k = 0; k < v.size(); ++k) {
        const std::size_t j = mu.pair(k);
        if (j > k) v[k] = v[j] = 0.5 * (v[k] + v[j]);
    }
}

/// Lower convex envelope of the points (x_k, v_k) evaluated at x (+inf outside their hull).
inline double envelope_at(const TargetMeasure& mu, const std::vector<double>& v, const Vec& x) {
    const auto& pts = mu.atoms();
    const std::size_t n = pts.size();
    double best = kInf;
    for (std::size_t i = 0; i < n; ++i)
        if (norm(pts[i] - x) <= 1e-12) best = std::min(best, v[i]);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const Vec d = pts[j] - pts[i];
            const double dd = dot(d, d);
            if (dd == 0) continue;
            const double lam = dot(x - pts[i], d) / dd;
            if (lam < -1e-12 || lam > 1 + 1e-12) continue;
            if (norm(pts[i] + lam * d - x) > 1e-9 * std::sqrt(dd)) continue;
            best = std::min(best, (1 - lam) * v[i] + lam * v[j]);
        }
    if (mu.dim() == 2)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                for (std::size_t k = j + 1; k < n; ++k) {
                    const Vec a = pts[j] - pts[i], b = pts[k] - pts[i], r = x - pts[i];
                    const double det = cross(a, b);
                    if (std::abs(det) < 1e-14) continue;
                    const double l1 = cross(r, b) / det, l2 = cross(a, r) / det;
                    if (l1 < -1e-12 || l2 < -1e-12 || l1 + l2 > 1 + 1e-12) continue;
                    best = std::min(best, (1 - l1 - l2) * v[i] + l1 * v[j] + l2 * v[k]);
                }
    return best;
}

inline Lemma55Check lemma55(const std::vector<double>& v, const CellMasses& c, const TargetMeasure& mu,
                            const WeightFunction& w, double zeta) {
    Lemma55Check out;
    const double phi_o = *std::min_element(v.begin(), v.end());  // even potential: minimum over mirrored pairs
    double integral = 0;
    for (std::size_t k = 0; k < v.size(); ++k) integral += mu.masses()[k] * (envelope_at(mu, v, mu.atoms()[k]) - phi_o);
    out.a = c.V * std::exp(-phi_o);
    out.bound = F_omega(w, zeta / (2 * integral + 2 * mu.total()));
    out.holds = out.a / std::numbers::e <= out.bound * (1 + 1e-6);
    return out;
}

} // namespace detail

/// f0 = (|mu| / V) exp(-phi*) for the potential vector v, as a max-affine prototype.
inline Prototype solution_from_potential(const TargetMeasure& mu, const std::vector<double>& v, double V) {
    return dual_potential(mu, v, std::log(V / mu.total()));
}

/// Compares C^e_omega(f0, .) on a grid to mu (default: twice the default resolution, R = 12).
inline MeasureComparison verify_solution(const LogConcaveFunction& f0, const TargetMeasure& mu,
                                         const WeightFunction& w, std::optional<Grid> grid = std::nullopt) {
    if (!grid) grid = Grid(f0.dim(), 12.0, f0.dim() == 1 ? 1025 : 257);
    const auto phi = f0.is_prototype() ? f0.to_grid(*grid) : f0.sampled();
    const auto c = euclidean_curvature_measure(LogConcaveFunction(phi), w);
    return compare_measures(c.measure, mu.measure());
}

/// Gradient ascent on J(v) / |mu| = -sum w_k v_k / |mu| + ln V(v) with Armijo backtracking and
/// paired-coordinate averaging; stationary points satisfy m_k / V = w_k / |mu|.
inline SolveReport solve(const TargetMeasure& mu, const WeightFunction& w, const SolveOptions& opt = {}) {
    require(w.even(), ErrorCode::NotEven, "the solver needs an even weight");
    require(w.dim() == mu.dim(), ErrorCode::GridMismatch, "weight and measure dimensions differ");
    require_admissible(w);
    SolveReport rep;
    rep.zeta = zeta_mu(mu);
    rep.condition_113 = check_condition_113(w, mu);
    if (rep.condition_113.verdict == Condition113::Inconclusive && !opt.force)
        throw Error(ErrorCode::ConditionUnverified, "solvability condition could not be verified (use --force)");

    const std::size_t n = mu.size();
    std::vector<double> v(n, 0.0);
    CellMasses c = cell_masses(v, mu, w);
    double J = detail::objective(v, c, mu);
    int stalled = 0;
    std::vector<std::vector<double>> iterates{v};
    auto record_lemma = [&]() {
        const auto l = detail::lemma55(v, c, mu, w, rep.zeta);
        rep.lemma55_all_hold = rep.lemma55_all_hold && l.holds;
        rep.lemma55.push_back(l);
    };
    record_lemma();

    int it = 0;
    for (; it < opt.max_iterations; ++it) {
        rep.kkt_residual = detail::kkt_residual(c, mu);
        rep.trace.push_back({it, J, rep.kkt_residual, 0.0});
        if (rep.kkt_residual <= opt.kkt_tol) {
            rep.converged = true;
            rep.stop_reason = "kkt";
            break;
        }
        std::vector<double> g(n);
        double gg = 0;
        for (std::size_t k = 0; k < n; ++k) {
            g[k] = c.m[k] / c.V - mu.masses()[k] / mu.total();
            gg += g[k] * g[k];
        }
        double step = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt, step *= opt.backtrack) {
            std::vector<double> trial(n);
            for (std::size_t k = 0; k < n; ++k) trial[k] = v[k] + step * g[k];
            detail::symmetrize(trial, mu);
            const CellMasses ct = cell_masses(trial, mu, w);
            const double Jt = detail::objective(trial, ct, mu);
            if (Jt >= J + opt.armijo * step * gg) {
                v = std::move(trial);
                c = ct;
                J = Jt;
                accepted = true;
                break;
            }
        }
        rep.trace.back().step = accepted ? step : 0.0;
        if (!accepted) {
            if (++stalled >= opt.stall_limit) break;
            continue;
        }
        stalled = 0;
        iterates.push_back(v);
        if ((it + 1) % 10 == 0) record_lemma();
    }
    rep.iterations = it;
    if (!rep.converged && rep.stop_reason.empty()) rep.stop_reason = stalled >= opt.stall_limit ? "no_progress" : "max_iterations";

    rep.v = v;
    rep.V = c.V;
    record_lemma();
    for (std::size_t k = 0; k < n; ++k) {
        rep.masses.push_back(c.m[k] * mu.total() / c.V);
        rep.per_atom_mass_errors.push_back(std::abs(rep.masses.back() - mu.masses()[k]) / mu.masses()[k]);
    }

    const Prototype f0 = solution_from_potential(mu, v, c.V);
    rep.solution = f0;
    // phi_0(o) = -min phi_0*, attained at o since phi_0* is even and convex
    rep.phi0_origin = -f0.phi(Vec{0, 0});
    rep.positivity_ok = rep.phi0_origin > 0;
    const auto recovered = euclidean_curvature_measure(LogConcaveFunction(f0), w);
    rep.recovered_measure = recovered.measure;
    const auto cmp = compare_measures(rep.recovered_measure, mu.measure());
    rep.w1_to_target = cmp.w1_distance;
    rep.mass_gap = cmp.mass_gap;

    // empirical concavity of J along deterministic segments between iterates
    if (iterates.size() >= 2) {
        const std::vector<std::pair<std::size_t, std::size_t>> segs{
            {0, iterates.size() - 1}, {0, iterates.size() / 2}, {iterates.size() / 2, iterates.size() - 1}};
        for (const auto& [ia, ib] : segs) {
            if (ia == ib) continue;
            auto J_at = [&](double s) {
                std::vector<double> x(n);
                for (std::size_t k = 0; k < n; ++k) x[k] = (1 - s) * iterates[ia][k] + s * iterates[ib][k];
                return detail::objective(x, cell_masses(x, mu, w), mu);
            };
            const double j0 = J_at(0), j1 = J_at(1);
            for (double s : {0.25, 0.5, 0.75}) {
                const double defect = (1 - s) * j0 + s * j1 - J_at(s);
                rep.concavity_defect = std::max(rep.concavity_defect, defect);
            }
        }
        rep.concavity_ok = rep.concavity_defect <= 1e-8;
    }

    // independent partition on a dual grid
    try {
        const double R = 16.0;
        const Grid dual(mu.dim(), R, mu.dim() == 1 ? 4097 : 513);
        const auto cg = cell_masses_grid(v, mu, w, dual);
        for (std::size_t k = 0; k < n; ++k)
            rep.grid_crosscheck_gap = std::max(rep.grid_crosscheck_gap, std::abs(cg.m[k] / cg.V - c.m[k] / c.V));
    } catch (const Error&) {
        rep.grid_crosscheck_gap = kInf;
    }

    if (!rep.converged && opt.throw_on_failure)
        throw Error(ErrorCode::NoProgress, "solver stopped (" + rep.stop_reason + ") with KKT residual " +
                                               std::to_string(rep.kkt_residual));
    return rep;
}

} // namespace orlicz
