// Copyright 2026 The qmtk Authors
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

#include "qmtk/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include "json_io.hpp"
#include "qmtk/conservation.hpp"
#include "qmtk/errdist.hpp"
#include "qmtk/models.hpp"
#include "qmtk/qlogic.hpp"

namespace qmtk {

using detail::json;

namespace {

constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// Report plumbing

class Builder {
  public:
    Builder(const RunConfig &c, std::size_t default_trials) : config_(c) {
        report_.experiment = c.experiment;
        report_.seed = c.seed;
        report_.trials = c.trials ? c.trials : default_trials;
        report_.hbar = c.hbar;
    }

    std::size_t trials() const {
        return report_.trials;
    }
    std::uint64_t seed() const {
        return report_.seed;
    }
    double hbar() const {
        return report_.hbar;
    }

    /// Pass threshold, overridable from the config and recorded in the report.
    double tolerance(const std::string &name, double fallback) {
        auto it = config_.tolerances.find(name);
        const double v = it == config_.tolerances.end() ? fallback : it->second;
        report_.tolerances.emplace_back(name, v);
        return v;
    }

    double param(const std::string &name, double fallback) const {
        auto it = config_.params.find(name);
        return it == config_.params.end() ? fallback : it->second;
    }
    bool has_param(const std::string &name) const {
        return config_.params.count(name) != 0;
    }

    void columns(std::vector<std::string> cols) {
        report_.columns = std::move(cols);
    }
    void row(std::vector<Field> r, bool violated) {
        report_.rows.push_back(std::move(r));
        if (violated) ++report_.violations;
    }
    void violation() {
        ++report_.violations;
    }
    void summary(const std::string &key, Field value) {
        report_.summary.emplace_back(key, std::move(value));
    }

    Report finish() {
        summary("violations", static_cast<std::int64_t>(report_.violations));
        summary("passed", report_.violations == 0);
        return std::move(report_);
    }

  private:
    const RunConfig &config_;
    Report report_;
};

struct TrialRow {
    std::vector<Field> fields;
    bool violated = false;
};

template <class F>
std::vector<TrialRow> run_trials(std::size_t n, F &&trial) {
    std::vector<TrialRow> rows(n);
    parallel_for(n, [&](std::size_t i) { rows[i] = trial(i); });
    return rows;
}

double min_of(const std::vector<TrialRow> &rows, std::size_t col) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto &r : rows) m = std::min(m, std::get<double>(r.fields[col]));
    return m;
}

double max_of(const std::vector<TrialRow> &rows, std::size_t col) {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto &r : rows) m = std::max(m, std::get<double>(r.fields[col]));
    return m;
}

std::int64_t count_true(const std::vector<TrialRow> &rows, std::size_t col) {
    std::int64_t n = 0;
    for (const auto &r : rows) n += std::get<bool>(r.fields[col]) ? 1 : 0;
    return n;
}

void add_rows(Builder &b, std::vector<TrialRow> &rows) {
    for (auto &r : rows) b.row(std::move(r.fields), r.violated);
}

std::int64_t as_int(std::size_t v) {
    return static_cast<std::int64_t>(v);
}

Op pauli_x() {
    Op s = Op::Zero(2, 2);
    s(0, 1) = s(1, 0) = 1.0;
    return s;
}
Op pauli_y() {
    Op s = Op::Zero(2, 2);
    s(0, 1) = Complex(0.0, -1.0);
    s(1, 0) = Complex(0.0, 1.0);
    return s;
}
Op pauli_z() {
    Op s = Op::Zero(2, 2);
    s(0, 0) = 1.0;
    s(1, 1) = -1.0;
    return s;
}

DensityState singlet() {
    Ket s = Ket::Zero(4);
    s(1) = 1.0 / std::sqrt(2.0);
    s(2) = -1.0 / std::sqrt(2.0);
    return DensityState::pure(s);
}

// ---------------------------------------------------------------------------
// Uncertainty relations

// Generic random process, dilated random instrument, exact projective
// measurement of A, or a weak coupling exp(i s H) with small s.
MeasuringProcess audit_process(std::size_t kind, std::size_t od, const Observable &a, Rng &rng) {
    switch (kind) {
    case 1:
        return process_of_instrument(random_cp_instrument(od, 2, 1 + rng() % 2, rng));
    case 2:
        return process_of_instrument(CpInstrument::projective(a));
    case 3: {
        const std::size_t pd = 2 + rng() % 3;
        std::uniform_real_distribution<double> strength(1e-3, 0.3);
        const Op u = exp_i_hermitian(random_hermitian(od * pd, rng), strength(rng));
        return MeasuringProcess(od, random_density(pd, 1 + rng() % pd, rng), u, random_observable(pd, rng));
    }
    default: {
        const std::size_t pd = 2 + rng() % 3;
        return random_measuring_process(od, pd, rng());
    }
    }
}

Report ozawa_audit(const RunConfig &c) {
    Builder b(c, 1000);
    const double slack = b.tolerance("relation_slack", kRelationSlack);
    const double agree = b.tolerance("trace_formula", 1e-10);
    b.columns({"trial", "object_dim", "probe_dim", "epsilon", "eta", "sigma_A", "sigma_B", "commutator_bound",
               "universal_margin", "condition_margin", "heisenberg_holds", "noise_formula_diff",
               "disturbance_formula_diff"});
    auto rows = run_trials(b.trials(), [&](std::size_t t) {
        Rng rng(trial_seed(b.seed(), t));
        const std::size_t od = 2 + rng() % 2;
        const Observable a = random_observable(od, rng), bb = random_observable(od, rng);
        const MeasuringProcess mp = audit_process(t % 4, od, a, rng);
        const std::size_t pd = mp.probe_dim();
        const DensityState rho = random_density(od, 1 + rng() % od, rng);
        const UniversalCheck u = check_universal_relation(mp, a, bb, rho);
        const HeisenbergCheck h = check_heisenberg_relation(mp, a, bb, rho);
        const double dn = std::abs(u.report.epsilon - rms_noise(mp, a, rho, Method::Formula));
        const double dd = std::abs(u.report.eta - rms_disturbance(mp, bb, rho, Method::Formula));
        const double um = u.lhs - u.rhs, cm = h.lhs + h.condition_term - h.rhs;
        const auto &r = u.report;
        TrialRow row{{as_int(t), as_int(od), as_int(pd), r.epsilon, r.eta, r.sigma_a, r.sigma_b, r.commutator_bound,
                      um, cm, h.holds, dn, dd},
                     false};
        row.violated = um < -slack || cm < -slack || dn > agree || dd > agree;
        return row;
    });
    b.summary("min_universal_margin", min_of(rows, 8));
    b.summary("min_condition_margin", min_of(rows, 9));
    b.summary("heisenberg_violations", as_int(rows.size()) - count_true(rows, 10));
    b.summary("max_noise_formula_diff", max_of(rows, 11));
    b.summary("max_disturbance_formula_diff", max_of(rows, 12));
    add_rows(b, rows);
    return b.finish();
}

struct GridRun {
    ErrorReport report;
    UniversalCheck universal;
    HeisenbergCheck heisenberg;
    double defect;
};

GridRun run_grid_model(const GridSpace &g, const CpInstrument &inst, const Ket &psi) {
    const DensityState rho = DensityState::pure(psi);
    GridRun r;
    r.universal = check_universal_relation(inst, g.x(), g.p(), rho);
    r.heisenberg = check_heisenberg_relation(inst, g.x(), g.p(), rho);
    r.report = r.universal.report;
    r.defect = g.commutator_defect(psi);
    return r;
}

std::vector<std::string> grid_columns() {
    return {"model",           "probe_width",      "epsilon",          "eta",
            "sigma_x",         "sigma_p",          "epsilon_eta",      "commutator_bound",
            "heisenberg_holds", "heisenberg_margin", "universal_margin", "condition_margin"};
}

std::vector<Field> grid_row(const std::string &model, double width, const GridRun &r) {
    const auto &e = r.report;
    return {model,
            width,
            e.epsilon,
            e.eta,
            e.sigma_a,
            e.sigma_b,
            e.epsilon * e.eta,
            e.commutator_bound,
            r.heisenberg.holds,
            r.heisenberg.lhs - r.heisenberg.rhs,
            r.universal.lhs - r.universal.rhs,
            r.heisenberg.lhs + r.heisenberg.condition_term - r.heisenberg.rhs};
}

GridSpace make_grid(const RunConfig &c) {
    return GridSpace(c.grid.n_points, c.grid.length, c.hbar);
}

Report contractive_model(const RunConfig &c) {
    Builder b(c, 1);
    const double slack = b.tolerance("relation_slack", kRelationSlack);
    const double min_rhs = b.tolerance("min_commutator_bound_fraction", 0.49);
    const GridSpace g = make_grid(c);
    const Ket psi = g.gaussian(0.0, c.grid.state_width);
    const GridRun r = run_grid_model(g, contractive_instrument(g, g.gaussian(0.0, c.grid.probe_width)), psi);
    b.columns(grid_columns());
    const bool exact = r.report.epsilon == 0.0;
    const bool product_zero = r.report.epsilon * r.report.eta == 0.0;
    const bool rhs_ok = r.report.commutator_bound >= min_rhs * c.hbar;
    const bool universal = r.universal.lhs >= r.universal.rhs - slack;
    const bool condition = r.heisenberg.lhs + r.heisenberg.condition_term >= r.heisenberg.rhs - slack;
    b.row(grid_row("contractive", c.grid.probe_width, r),
          !(exact && product_zero && rhs_ok && universal && condition && !r.heisenberg.holds));
    b.summary("n_points", as_int(g.n_points()));
    b.summary("epsilon", r.report.epsilon);
    b.summary("eta", r.report.eta);
    b.summary("epsilon_eta", r.report.epsilon * r.report.eta);
    b.summary("commutator_bound", r.report.commutator_bound);
    b.summary("commutator_defect", r.defect);
    b.summary("heisenberg_holds", r.heisenberg.holds);
    b.summary("universal_holds", universal);
    b.summary("universal_margin", r.universal.lhs - r.universal.rhs);
    return b.finish();
}

Report vn_model(const RunConfig &c) {
    Builder b(c, 1);
    const double slack = b.tolerance("relation_slack", kRelationSlack);
    const double hup = b.tolerance("heisenberg_slack", 1e-6);
    const GridSpace g = make_grid(c);
    const Ket psi = g.gaussian(0.0, c.grid.state_width);
    const GridRun r = run_grid_model(g, von_neumann_instrument(g, g.gaussian(0.0, c.grid.probe_width)), psi);
    b.columns(grid_columns());
    const double margin = r.heisenberg.lhs - r.heisenberg.rhs;
    const bool universal = r.universal.lhs >= r.universal.rhs - slack;
    b.row(grid_row("von-neumann", c.grid.probe_width, r), !(margin >= -hup && universal));
    b.summary("n_points", as_int(g.n_points()));
    b.summary("epsilon", r.report.epsilon);
    b.summary("eta", r.report.eta);
    b.summary("epsilon_eta", r.report.epsilon * r.report.eta);
    b.summary("commutator_bound", r.report.commutator_bound);
    b.summary("commutator_defect", r.defect);
    b.summary("heisenberg_margin", margin);
    b.summary("heisenberg_holds", margin >= -hup);
    b.summary("universal_holds", universal);
    return b.finish();
}

Report heisenberg_violation_demo(const RunConfig &c) {
    Builder b(c, 4);
    const double slack = b.tolerance("relation_slack", kRelationSlack);
    const double hup = b.tolerance("heisenberg_slack", 1e-6);
    const GridSpace g = make_grid(c);
    const Ket psi = g.gaussian(0.0, c.grid.state_width);
    b.columns(grid_columns());
    std::int64_t contractive_violations = 0, vn_violations = 0;
    for (std::size_t t = 0; t < b.trials(); ++t) {
        // Probe widths from one grid spacing up to the configured width.
        const double frac = b.trials() == 1 ? 1.0 : static_cast<double>(t) / static_cast<double>(b.trials() - 1);
        const double width = g.spacing() * 4.0 + frac * (c.grid.probe_width - g.spacing() * 4.0);
        const Ket xi = g.gaussian(0.0, width);
        for (int model = 0; model < 2; ++model) {
            const GridRun r = model == 0 ? run_grid_model(g, contractive_instrument(g, xi), psi)
                                         : run_grid_model(g, von_neumann_instrument(g, xi), psi);
            const bool universal = r.universal.lhs >= r.universal.rhs - slack;
            const double margin = r.heisenberg.lhs - r.heisenberg.rhs;
            bool violated = !universal;
            if (model == 0) {
                contractive_violations += r.heisenberg.holds ? 0 : 1;
                violated = violated || r.heisenberg.holds;
            } else {
                vn_violations += margin >= -hup ? 0 : 1;
                violated = violated || margin < -hup;
            }
            b.row(grid_row(model == 0 ? "contractive" : "von-neumann", width, r), violated);
        }
    }
    b.summary("n_points", as_int(g.n_points()));
    b.summary("contractive_heisenberg_violations", contractive_violations);
    b.summary("von_neumann_heisenberg_violations", vn_violations);
    return b.finish();
}

// ---------------------------------------------------------------------------
// Conservation laws

struct WaySetup {
    Observable a, l1, l2;
};

WaySetup way_setup(unsigned n, double hbar) {
    const auto s = spin_operators(1, hbar);
    return {Observable::from_hermitian(s.z), Observable::from_hermitian(s.x),
            Observable::from_hermitian(spin_operators(n, hbar).x)};
}

unsigned trial_spin(const Builder &b, std::size_t t) {
    if (b.has_param("N")) return static_cast<unsigned>(b.param("N", 0.0));
    return static_cast<unsigned>(t % 5);
}

Ket sy_eigenstate(bool up) {
    Ket k(2);
    k(0) = 1.0 / std::sqrt(2.0);
    k(1) = Complex(0.0, up ? 1.0 : -1.0) / std::sqrt(2.0);
    return k;
}

Report way_audit(const RunConfig &c) {
    Builder b(c, 200);
    const double slack = b.tolerance("relation_slack", kRelationSlack);
    b.columns({"trial", "N", "epsilon_sq", "bound", "margin", "conserved", "yanase", "holds"});
    auto rows = run_trials(b.trials(), [&](std::size_t t) {
        const unsigned n = trial_spin(b, t);
        const std::uint64_t s = trial_seed(b.seed(), t);
        const MeasuringProcess mp = covariant_way_process(n, s, b.hbar());
        const WaySetup w = way_setup(n, b.hbar());
        Rng rng(trial_seed(s, 1));
        const Ket psi = t % 4 == 3 ? sy_eigenstate(t % 8 == 3) : random_pure_state(2, rng);
        const WayCheck chk = verify_way(mp, w.a, w.l1, w.l2, DensityState::pure(psi));
        const double margin = chk.epsilon_sq - chk.bound;
        TrialRow row{{as_int(t), static_cast<std::int64_t>(n), chk.epsilon_sq, chk.bound, margin, chk.conserved,
                      chk.yanase, chk.holds},
                     false};
        row.violated = !chk.conserved || !chk.yanase || margin < -slack;
        return row;
    });
    b.summary("min_margin", min_of(rows, 4));
    b.summary("conserved", count_true(rows, 5));
    b.summary("yanase", count_true(rows, 6));
    add_rows(b, rows);
    return b.finish();
}

Report yanase_bound_experiment(const RunConfig &c) {
    Builder b(c, 100);
    const double slack = b.tolerance("relation_slack", kRelationSlack);
    const std::size_t samples = static_cast<std::size_t>(b.param("samples", 16));
    b.columns({"trial", "N", "sigma_L2", "max_error_probability", "bound", "margin"});
    auto rows = run_trials(b.trials(), [&](std::size_t t) {
        const unsigned n = trial_spin(b, t);
        const std::uint64_t s = trial_seed(b.seed(), t);
        const MeasuringProcess mp = covariant_way_process(n, s, b.hbar());
        const WaySetup w = way_setup(n, b.hbar());
        Rng rng(trial_seed(s, 2));
        double max_pe = 0.0;
        for (std::size_t k = 0; k < samples + 2; ++k) {
            const Ket psi = k < 2 ? sy_eigenstate(k == 0) : random_pure_state(2, rng);
            const double e = rms_noise(mp, w.a, DensityState::pure(psi), Method::Direct);
            max_pe = std::max(max_pe, yanase_error_probability(e * e, b.hbar()));
        }
        const double sigma = standard_deviation(w.l2.op(), mp.probe_state());
        const double bound = yanase_bound(sigma, b.hbar());
        TrialRow row{{as_int(t), static_cast<std::int64_t>(n), sigma, max_pe, bound, max_pe - bound}, false};
        row.violated = max_pe - bound < -slack;
        return row;
    });
    b.summary("min_margin", min_of(rows, 5));
    add_rows(b, rows);
    return b.finish();
}

Report gate_infidelity_audit(const RunConfig &c) {
    Builder b(c, 40);
    const double slack = b.tolerance("relation_slack", kRelationSlack);
    const double cb_slack = b.tolerance("cb_slack", 1e-6);
    const double perfect_tol = b.tolerance("perfect_fidelity", 1e-10);
    const std::size_t n_starts = static_cast<std::size_t>(b.param("n_starts", 3));
    std::vector<unsigned> spins;
    std::vector<double> thetas;
    if (b.has_param("N"))
        spins = {static_cast<unsigned>(b.param("N", 0))};
    else
        spins = {0, 1, 2, 3, 4};
    if (b.has_param("theta"))
        thetas = {b.param("theta", kPi)};
    else
        thetas = {kPi / 4.0, kPi / 2.0, kPi};
    for (double th : thetas)
        if (!(th >= 0.0 && th <= kPi)) throw DomainError("gate-infidelity-audit: theta must lie in [0, pi]");

    b.columns({"trial", "N", "theta", "fidelity", "infidelity", "bound", "margin", "cb_lower_bound", "cb_margin",
               "perfect_fidelity"});
    const std::size_t per = b.trials();
    const std::size_t total = per * spins.size() * thetas.size();
    auto rows = run_trials(total, [&](std::size_t idx) {
        const unsigned n = spins[idx / (per * thetas.size())];
        const double theta = thetas[(idx / per) % thetas.size()];
        Rng rng(trial_seed(b.seed(), idx));
        const Op u = covariant_unitary(n, rng(), b.hbar());
        const Ket xi = random_pure_state(n + 1, rng);
        std::uniform_real_distribution<double> uni(0.0, 2.0 * kPi);
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::array<double, 3> axis{gauss(rng), gauss(rng), gauss(rng)};
        const GateTarget target = GateTarget::from_angles(uni(rng), theta, axis);
        const Implementation impl(u, xi);
        const FidelityResult f = gate_fidelity(impl, target);
        const double infid = 1.0 - f.fidelity * f.fidelity;
        const double bound = gate_infidelity_bound(theta, static_cast<int>(n));
        const double cb = cb_distance_lower_bound(impl, target, n_starts, trial_seed(b.seed(), idx + 1));
        const double perfect =
            gate_fidelity(Implementation(kron(target.matrix(), identity(n + 1)), xi), target).fidelity;
        TrialRow row{{as_int(idx), static_cast<std::int64_t>(n), theta, f.fidelity, infid, bound, infid - bound, cb,
                      cb - infid, perfect},
                     false};
        row.violated = infid - bound < -slack || cb - infid < -cb_slack || std::abs(perfect - 1.0) > perfect_tol;
        return row;
    });
    b.summary("implementations", as_int(total));
    b.summary("min_margin", min_of(rows, 6));
    b.summary("min_cb_margin", min_of(rows, 8));
    double worst_perfect = 0.0;
    for (const auto &r : rows) worst_perfect = std::max(worst_perfect, std::abs(std::get<double>(r.fields[9]) - 1.0));
    b.summary("max_perfect_fidelity_error", worst_perfect);
    add_rows(b, rows);
    return b.finish();
}

// ---------------------------------------------------------------------------
// Instruments

Report realization_roundtrip(const RunConfig &c) {
    Builder b(c, 200);
    const double tol = b.tolerance("roundtrip_distance", 1e-9);
    b.columns({"trial", "dim", "outcomes", "kraus_per_outcome", "probe_dim", "superoperator_distance"});
    auto rows = run_trials(b.trials(), [&](std::size_t t) {
        Rng rng(trial_seed(b.seed(), t));
        const std::size_t d = 2 + rng() % 3, n = 2 + rng() % 2, k = 1 + rng() % 3;
        const CpInstrument inst = random_cp_instrument(d, n, k, rng);
        const MeasuringProcess mp = process_of_instrument(inst);
        const double dist = superoperator_distance(inst, instrument_of_process(mp));
        return TrialRow{{as_int(t), as_int(d), as_int(n), as_int(k), as_int(mp.probe_dim()), dist}, !(dist < tol)};
    });
    b.summary("max_superoperator_distance", max_of(rows, 5));
    add_rows(b, rows);
    return b.finish();
}

Report cp_check(const RunConfig &c) {
    Builder b(c, 100);
    const double flag = b.tolerance("transpose_choi_threshold", -0.4);
    b.columns({"trial", "kind", "dim", "completely_positive", "min_choi_eigenvalue", "expected_cp"});
    auto rows = run_trials(b.trials(), [&](std::size_t t) {
        Rng rng(trial_seed(b.seed(), t));
        TrialRow row;
        if (t == 0) {
            const CpCheck chk = is_completely_positive(transpose_composed_instrument(
                Observable::from_hermitian(identity(2))));
            row.fields = {as_int(t), std::string("transpose-qubit"), std::int64_t{2}, chk.completely_positive,
                          chk.min_choi_eigenvalue, false};
            row.violated = chk.completely_positive || chk.min_choi_eigenvalue > flag;
        } else if (t % 5 == 0) {
            // Observable with a doubly degenerate eigenvalue.
            const std::size_t d = 3 + rng() % 2;
            const Op v = random_unitary(d, rng);
            Eigen::VectorXd ev(static_cast<Eigen::Index>(d));
            for (std::size_t i = 0; i < d; ++i) ev(static_cast<Eigen::Index>(i)) = i < 2 ? 0.0 : double(i);
            const Op a = v * ev.cast<Complex>().asDiagonal() * v.adjoint();
            const CpCheck chk = is_completely_positive(transpose_composed_instrument(Observable::from_hermitian(a)));
            row.fields = {as_int(t), std::string("transpose-degenerate"), as_int(d), chk.completely_positive,
                          chk.min_choi_eigenvalue, false};
            row.violated = chk.completely_positive;
        } else {
            const std::size_t d = 2 + rng() % 3, n = 1 + rng() % 3, k = 1 + rng() % 3;
            const CpCheck chk = is_completely_positive(DlInstrument::from_cp(random_cp_instrument(d, n, k, rng)));
            row.fields = {as_int(t), std::string("kraus"), as_int(d), chk.completely_positive,
                          chk.min_choi_eigenvalue, true};
            row.violated = !chk.completely_positive;
        }
        return row;
    });
    b.summary("transpose_min_choi_eigenvalue", std::get<double>(rows.front().fields[4]));
    std::int64_t kraus_fail = 0;
    for (const auto &r : rows)
        if (std::get<std::string>(r.fields[1]) == "kraus" && !std::get<bool>(r.fields[3])) ++kraus_fail;
    b.summary("kraus_failures", kraus_fail);
    add_rows(b, rows);
    return b.finish();
}

Report wigner_chain(const RunConfig &c) {
    Builder b(c, 200);
    const double tol = b.tolerance("chain_agreement", 1e-12);
    b.columns({"trial", "steps", "dim", "projective", "joint_probability", "chained_probability", "difference"});
    auto rows = run_trials(b.trials(), [&](std::size_t t) {
        Rng rng(trial_seed(b.seed(), t));
        const std::size_t steps = 2 + t % 2, d = 2 + rng() % 2;
        const bool projective = t % 4 < 2, hamiltonian = t % 2 == 1;
        std::vector<CpInstrument> insts;
        std::vector<Op> evol, hams;
        std::vector<double> times;
        std::vector<OutcomeSet> sets;
        double now = 0.0;
        std::uniform_real_distribution<double> dt(0.1, 1.0);
        for (std::size_t k = 0; k < steps; ++k) {
            insts.push_back(projective ? CpInstrument::projective(random_observable(d, rng))
                                       : random_cp_instrument(d, 2 + rng() % 2, 1 + rng() % 2, rng));
            if (hamiltonian) {
                hams.push_back(random_hermitian(d, rng));
                const double step = dt(rng);
                times.push_back(now + step);
                evol.push_back(evolution_unitary(hams.back(), step, b.hbar()));
                now += step;
            } else {
                evol.push_back(random_unitary(d, rng));
            }
            const auto outs = insts.back().outcomes();
            sets.push_back(OutcomeSet::of({outs[rng() % outs.size()].value}));
        }
        const DensityState rho = random_density(d, 1 + rng() % d, rng);
        const double joint = hamiltonian ? sequential_joint_distribution(insts, hams, times, rho, sets, b.hbar())
                                         : sequential_joint_distribution(insts, evol, rho, sets);
        double chained = 1.0;
        DensityState state = rho;
        for (std::size_t k = 0; k < steps; ++k) {
            const DensityState evolved(evol[k] * state.op() * evol[k].adjoint());
            const PosteriorFamily fam = posterior_states(insts[k], evolved);
            const Posterior *hit = nullptr;
            for (const auto &p : fam.posteriors)
                if (sets[k].contains(p.value)) hit = &p;
            if (!hit) {
                chained = 0.0;
                break;
            }
            chained *= hit->prob;
            state = hit->state;
        }
        const double diff = std::abs(joint - chained);
        return TrialRow{{as_int(t), as_int(steps), as_int(d), projective, joint, chained, diff}, !(diff <= tol)};
    });
    b.summary("max_difference", max_of(rows, 6));
    add_rows(b, rows);
    return b.finish();
}

// ---------------------------------------------------------------------------
// Quantum logic

Observable observable_with_spectrum(const Op &v, const std::vector<double> &ev) {
    Eigen::VectorXd e(static_cast<Eigen::Index>(ev.size()));
    for (std::size_t i = 0; i < ev.size(); ++i) e(static_cast<Eigen::Index>(i)) = ev[i];
    return Observable::from_hermitian(v * e.cast<Complex>().asDiagonal() * v.adjoint());
}

Op commuting_oracle(const Observable &a, const Observable &b) {
    Op out = Op::Zero(a.dim(), a.dim());
    for (const auto &p : a.spectrum())
        for (const auto &q : b.spectrum())
            if (std::abs(p.value - q.value) <= 1e-9 * std::max(1.0, std::abs(q.value)))
                out += p.projection() * q.projection();
    return out;
}

Proposition parse_proposition(const json &j, const std::map<std::string, Observable> &table) {
    auto obs = [&](const json &name) -> const Observable & {
        if (!name.is_string()) throw ParseError("proposition: observable names must be strings");
        auto it = table.find(name.get<std::string>());
        if (it == table.end()) throw UsageError("proposition: unknown observable '" + name.get<std::string>() + "'");
        return it->second;
    };
    auto fold = [&](const json &args, auto make) {
        if (!args.is_array() || args.size() < 2) throw ParseError("proposition: connective needs >= 2 arguments");
        Proposition acc = parse_proposition(args[0], table);
        for (std::size_t i = 1; i < args.size(); ++i) acc = make(std::move(acc), parse_proposition(args[i], table));
        return acc;
    };
    if (!j.is_object() || j.size() != 1) throw ParseError("proposition: expected a single-key object");
    const auto &[key, val] = *j.items().begin();
    if (key == "atom") {
        if (!val.contains("obs") || !val.contains("set")) throw ParseError("atom: needs \"obs\" and \"set\"");
        const json &s = val["set"];
        OutcomeSet set = OutcomeSet::none();
        if (s.is_array()) {
            for (const auto &x : s) set.add_point(x.get<double>());
        } else if (s.is_object() && s.contains("interval") && s["interval"].size() == 2) {
            set.add_interval(s["interval"][0].get<double>(), s["interval"][1].get<double>());
        } else if (s.is_string() && s.get<std::string>() == "all") {
            set = OutcomeSet::all();
        } else {
            throw ParseError("atom: \"set\" must be a list of points, {\"interval\": [lo, hi]} or \"all\"");
        }
        return Proposition::atom(obs(val["obs"]), set);
    }
    if (key == "eq") {
        if (!val.is_array() || val.size() != 2) throw ParseError("eq: expected two observable names");
        return Proposition::equal(obs(val[0]), obs(val[1]));
    }
    if (key == "not") return Proposition::negation(parse_proposition(val, table));
    if (key == "and") return fold(val, Proposition::conjunction);
    if (key == "or") return fold(val, Proposition::disjunction);
    if (key == "implies") {
        if (!val.is_array() || val.size() != 2) throw ParseError("implies: expected two arguments");
        return Proposition::implication(parse_proposition(val[0], table), parse_proposition(val[1], table));
    }
    throw ParseError("proposition: unknown connective '" + key + "'");
}

void evaluate_propositions(Builder &b, const json &doc, double hbar) {
    std::map<std::string, Observable> table;
    table.emplace("sx", Observable::from_hermitian(pauli_x()));
    table.emplace("sy", Observable::from_hermitian(pauli_y()));
    table.emplace("sz", Observable::from_hermitian(pauli_z()));
    (void)hbar;
    if (doc.contains("operators")) {
        if (!doc["operators"].is_object()) throw ParseError("logic-eval: \"operators\" must be an object");
        for (const auto &[name, m] : doc["operators"].items()) {
            const Op x = detail::op_from_json(m, "logic-eval operator");
            require_square(x, "logic-eval operator");
            if (!is_hermitian(x)) throw InvalidOperatorError("logic-eval: operator '" + name + "' is not Hermitian");
            table.insert_or_assign(name, Observable::from_hermitian(x));
        }
    }
    std::optional<DensityState> rho;
    if (doc.contains("state")) rho = DensityState(detail::op_from_json(doc["state"], "logic-eval state"));
    std::int64_t index = 0;
    for (const auto &p : doc["propositions"]) {
        const Proposition phi = parse_proposition(p, table);
        const Projection tv = truth_value(phi);
        const double prob = rho ? probability(phi, *rho) : std::nan("");
        b.row({std::string("proposition"), index++, p.dump(), as_int(tv.rank()), prob, true}, false);
    }
}

Report logic_eval(const RunConfig &c) {
    Builder b(c, 200);
    const double oracle_tol = b.tolerance("oracle", 1e-10);
    const double trace_tol = b.tolerance("trace", kDefaultTolerances.trace);
    b.columns({"kind", "trial", "detail", "rank", "value", "ok"});

    const json doc = c.document.empty() ? json::object() : detail::parse(c.document);
    if (doc.contains("propositions")) evaluate_propositions(b, doc, c.hbar);

    // Singlet: sigma_z (x) 1 and -(1 (x) sigma_z) are identically correlated.
    const Observable a1 = Observable::from_hermitian(kron(pauli_z(), identity(2)));
    const Observable b1 = Observable::from_hermitian(kron(identity(2), pauli_z()));
    const Observable b1n = Observable::from_hermitian(-kron(identity(2), pauli_z()));
    const DensityState s = singlet();
    const bool singlet_ic = identical_correlation(a1, b1n, s);
    const JointDistribution mu = joint_distribution(a1, b1, s);
    double off = 0.0;
    for (const auto &e : mu.entries)
        if (e.a != e.b) off += e.prob;
    const bool singlet_ok = singlet_ic && std::abs(off - 1.0) <= trace_tol && std::abs(mu.diagonal_mass()) <= trace_tol;
    b.row({std::string("singlet"), std::int64_t{-1}, std::string("identical_correlation"), std::int64_t{4}, off,
           singlet_ok},
          !singlet_ok);

    auto rows = run_trials(b.trials(), [&](std::size_t t) {
        Rng rng(trial_seed(c.seed, t));
        const std::size_t d = 2 + rng() % 3;
        const Op v = random_unitary(d, rng);
        std::uniform_int_distribution<int> small(-1, 1);
        Observable a, bb;
        bool commuting = t % 2 == 0;
        if (commuting) {
            std::vector<double> ea(d), eb(d);
            for (std::size_t i = 0; i < d; ++i) {
                ea[i] = small(rng);
                eb[i] = small(rng);
            }
            a = observable_with_spectrum(v, ea);
            bb = observable_with_spectrum(v, eb);
        } else {
            // Shared eigenvectors with equal eigenvalues on the first k basis
            // vectors of v, unrelated random blocks on the rest.
            const std::size_t k = 1 + rng() % (d - 1), r = d - k;
            Op ha = Op::Zero(d, d), hb = Op::Zero(d, d);
            for (std::size_t i = 0; i < k; ++i) ha(i, i) = hb(i, i) = small(rng);
            ha.bottomRightCorner(r, r) = random_hermitian(r, rng);
            hb.bottomRightCorner(r, r) = random_hermitian(r, rng);
            a = Observable::from_hermitian(v * ha * v.adjoint());
            bb = Observable::from_hermitian(v * hb * v.adjoint());
        }
        const Projection p = identical_correlation_projection(a, bb);
        double oracle_diff = 0.0;
        if (commuting) oracle_diff = (p.op() - commuting_oracle(a, bb)).cwiseAbs().maxCoeff();

        // Equivalence on a generic state and on a state inside [[A = B]].
        bool equiv = true;
        std::vector<DensityState> states{random_density(d, 1 + rng() % d, rng)};
        if (p.rank() > 0) {
            const Op basis = p.basis();
            Ket coeffs = random_pure_state(static_cast<std::size_t>(basis.cols()), rng);
            states.push_back(DensityState::pure((basis * coeffs).normalized()));
        }
        for (const auto &rho : states) {
            const bool ic = identical_correlation(a, bb, rho);
            const bool full = std::abs(trace_product(p.op(), rho.op()).real() - 1.0) <= trace_tol;
            equiv = equiv && ic == full;
        }
        const bool ok = oracle_diff <= oracle_tol && equiv;
        return TrialRow{{std::string(commuting ? "commuting" : "noncommuting"), as_int(t),
                         std::string(equiv ? "equivalent" : "mismatch"), as_int(p.rank()), oracle_diff, ok},
                        !ok};
    });
    double max_oracle = 0.0;
    std::int64_t mismatches = 0;
    for (const auto &r : rows) {
        max_oracle = std::max(max_oracle, std::get<double>(r.fields[4]));
        mismatches += std::get<std::string>(r.fields[2]) == "mismatch" ? 1 : 0;
    }
    b.summary("singlet_identical_correlation", singlet_ic);
    b.summary("singlet_off_diagonal_mass", off);
    b.summary("max_oracle_difference", max_oracle);
    b.summary("equivalence_mismatches", mismatches);
    add_rows(b, rows);
    return b.finish();
}

std::string verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Measurable:
        return "measurable";
    case Verdict::NotMeasurable:
        return "not-measurable";
    case Verdict::Unknown:
        break;
    }
    return "unknown";
}

Report simultaneity_demo(const RunConfig &c) {
    Builder b(c, 20);
    b.columns({"case", "trial", "verdict", "expected", "reason"});
    auto fixed = [&](const std::string &name, const Observable &a, const Observable &bb, const DensityState &rho,
                     Verdict expected) {
        const SimultaneityResult r = is_simultaneously_measurable(a, bb, rho);
        b.row({name, std::int64_t{-1}, verdict_name(r.verdict), verdict_name(expected), r.reason},
              r.verdict != expected);
    };
    const Observable z1 = Observable::from_hermitian(kron(pauli_z(), identity(2)));
    const Observable x1 = Observable::from_hermitian(kron(pauli_x(), identity(2)));
    const Observable z2 = Observable::from_hermitian(kron(identity(2), pauli_z()));
    fixed("commuting-pair", z1, z2, DensityState::maximally_mixed(4), Verdict::Measurable);
    fixed("singlet-spin-components", z1, x1, singlet(), Verdict::Measurable);
    fixed("sz-sx-mixed", Observable::from_hermitian(pauli_z()), Observable::from_hermitian(pauli_x()),
          DensityState::maximally_mixed(2), Verdict::NotMeasurable);

    auto rows = run_trials(b.trials(), [&](std::size_t t) {
        Rng rng(trial_seed(c.seed, t));
        const std::size_t d = 2 + rng() % 3;
        const bool commuting = t % 2 == 0;
        Observable a, bb;
        if (commuting) {
            const Op v = random_unitary(d, rng);
            std::vector<double> ea(d), eb(d);
            std::normal_distribution<double> g(0.0, 1.0);
            for (std::size_t i = 0; i < d; ++i) {
                ea[i] = g(rng);
                eb[i] = g(rng);
            }
            a = observable_with_spectrum(v, ea);
            bb = observable_with_spectrum(v, eb);
        } else {
            a = random_observable(d, rng);
            bb = random_observable(d, rng);
        }
        const DensityState rho = commuting ? random_density(d, 1 + rng() % d, rng) : random_density(d, d, rng);
        const Verdict expected = commuting ? Verdict::Measurable : Verdict::NotMeasurable;
        const SimultaneityResult r = is_simultaneously_measurable(a, bb, rho);
        return TrialRow{{std::string(commuting ? "random-commuting" : "random-full-rank"), as_int(t),
                         verdict_name(r.verdict), verdict_name(expected), r.reason},
                        r.verdict != expected};
    });
    add_rows(b, rows);
    return b.finish();
}

// ---------------------------------------------------------------------------
// Registry

using Runner = Report (*)(const RunConfig &);

const std::vector<std::pair<std::string, Runner>> &registry() {
    static const std::vector<std::pair<std::string, Runner>> r = {
        {"ozawa-audit", ozawa_audit},
        {"heisenberg-violation-demo", heisenberg_violation_demo},
        {"vn-model", vn_model},
        {"contractive-model", contractive_model},
        {"way-audit", way_audit},
        {"yanase-bound", yanase_bound_experiment},
        {"gate-infidelity-audit", gate_infidelity_audit},
        {"logic-eval", logic_eval},
        {"simultaneity-demo", simultaneity_demo},
        {"realization-roundtrip", realization_roundtrip},
        {"cp-check", cp_check},
        {"wigner-chain", wigner_chain},
    };
    return r;
}

const std::vector<std::pair<std::string, std::string>> &suites() {
    static const std::vector<std::pair<std::string, std::string>> s = {
        {"roundtrip", "realization-roundtrip"}, {"cp-check", "cp-check"},
        {"way", "way-audit"},                   {"yanase", "yanase-bound"},
        {"ozawa", "ozawa-audit"},               {"gate", "gate-infidelity-audit"},
        {"wigner", "wigner-chain"},             {"logic", "logic-eval"},
        {"simultaneity", "simultaneity-demo"},
    };
    return s;
}

// ---------------------------------------------------------------------------
// Formatting

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string csv_field(const Field &f) {
    struct Visitor {
        std::string operator()(std::int64_t v) const {
            return std::to_string(v);
        }
        std::string operator()(double v) const {
            return format_double(v);
        }
        std::string operator()(bool v) const {
            return v ? "true" : "false";
        }
        std::string operator()(const std::string &s) const {
            if (s.find_first_of(",\"\n") == std::string::npos) return s;
            std::string out = "\"";
            for (char ch : s) {
                if (ch == '"') out += '"';
                out += ch;
            }
            return out + "\"";
        }
    };
    return std::visit(Visitor{}, f);
}

nlohmann::ordered_json json_field(const Field &f) {
    struct Visitor {
        nlohmann::ordered_json operator()(std::int64_t v) const {
            return v;
        }
        nlohmann::ordered_json operator()(double v) const {
            if (std::isfinite(v)) return v;
            return format_double(v);
        }
        nlohmann::ordered_json operator()(bool v) const {
            return v;
        }
        nlohmann::ordered_json operator()(const std::string &s) const {
            return s;
        }
    };
    return std::visit(Visitor{}, f);
}

}  // namespace

// ---------------------------------------------------------------------------

std::size_t worker_count() {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char *env = std::getenv("QMTK_THREADS")) {
        char *end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && cap >= 1) n = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
    }
    return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body) {
    const std::size_t workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::size_t failed_index = n;
    std::exception_ptr failure;
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (i < failed_index) {
                    failed_index = i;
                    failure = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto &th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

const std::vector<std::string> &registered_experiments() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto &[name, fn] : registry()) v.push_back(name);
        return v;
    }();
    return names;
}

const std::vector<std::string> &registered_suites() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto &[name, exp] : suites()) v.push_back(name);
        return v;
    }();
    return names;
}

RunConfig parse_run_config(const std::string &json_text) {
    const json j = detail::parse(json_text);
    if (!j.is_object()) throw ParseError("config: expected a JSON object");
    RunConfig c;
    c.document = json_text;
    try {
        if (!j.contains("experiment") || !j["experiment"].is_string())
            throw UsageError("config: missing \"experiment\"");
        c.experiment = j["experiment"].get<std::string>();
        const auto &names = registered_experiments();
        if (std::find(names.begin(), names.end(), c.experiment) == names.end())
            throw UsageError("config: unknown experiment '" + c.experiment + "'");
        for (const auto &[key, val] : j.items()) {
            if (key == "experiment") continue;
            if (key == "seed") {
                c.seed = val.get<std::uint64_t>();
            } else if (key == "trials") {
                const auto t = val.get<std::int64_t>();
                if (t < 1) throw UsageError("config: trials must be >= 1");
                c.trials = static_cast<std::size_t>(t);
            } else if (key == "dims") {
                c.dims = val.get<std::vector<std::size_t>>();
            } else if (key == "hbar") {
                c.hbar = val.get<double>();
                if (!(c.hbar > 0.0)) throw UsageError("config: hbar must be positive");
            } else if (key == "grid") {
                if (val.contains("n_points")) c.grid.n_points = val["n_points"].get<std::size_t>();
                if (val.contains("length")) c.grid.length = val["length"].get<double>();
                if (val.contains("state_width")) c.grid.state_width = val["state_width"].get<double>();
                if (val.contains("probe_width")) c.grid.probe_width = val["probe_width"].get<double>();
            } else if (key == "tolerances") {
                for (const auto &[name, v] : val.items()) c.tolerances[name] = v.get<double>();
            } else if (key == "params") {
                for (const auto &[name, v] : val.items()) c.params[name] = v.get<double>();
            } else if (val.is_number()) {
                c.params[key] = val.get<double>();
            }
        }
    } catch (const json::exception &e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    return c;
}

Report run_experiment(const RunConfig &config) {
    if (!(config.hbar > 0.0)) throw UsageError("run_experiment: hbar must be positive");
    for (const auto &[name, fn] : registry())
        if (name == config.experiment) return fn(config);
    throw UsageError("unknown experiment '" + config.experiment + "'");
}

Report random_audit(const std::string &suite, std::uint64_t seed, std::size_t trials, double hbar) {
    for (const auto &[name, experiment] : suites()) {
        if (name != suite) continue;
        RunConfig c;
        c.experiment = experiment;
        c.seed = seed;
        c.trials = trials;
        c.hbar = hbar;
        return run_experiment(c);
    }
    throw UsageError("unknown audit suite '" + suite + "'");
}

const Field *Report::find(const std::string &key) const {
    for (const auto &[k, v] : summary)
        if (k == key) return &v;
    return nullptr;
}

double Report::number(const std::string &key) const {
    const Field *f = find(key);
    if (!f) throw UsageError("report: no summary field '" + key + "'");
    if (const auto *d = std::get_if<double>(f)) return *d;
    if (const auto *i = std::get_if<std::int64_t>(f)) return static_cast<double>(*i);
    if (const auto *b = std::get_if<bool>(f)) return *b ? 1.0 : 0.0;
    throw UsageError("report: summary field '" + key + "' is not numeric");
}

std::string Report::to_json() const {
    nlohmann::ordered_json j;
    j["experiment"] = experiment;
    j["seed"] = seed;
    j["trials"] = trials;
    j["hbar"] = hbar;
    nlohmann::ordered_json tol = nlohmann::ordered_json::object();
    for (const auto &[k, v] : tolerances) tol[k] = v;
    j["tolerances"] = tol;
    nlohmann::ordered_json sum = nlohmann::ordered_json::object();
    for (const auto &[k, v] : summary) sum[k] = json_field(v);
    j["summary"] = sum;
    j["columns"] = columns;
    nlohmann::ordered_json rs = nlohmann::ordered_json::array();
    for (const auto &r : rows) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (const auto &f : r) row.push_back(json_field(f));
        rs.push_back(std::move(row));
    }
    j["rows"] = std::move(rs);
    return j.dump(2) + "\n";
}

std::string Report::to_csv() const {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + csv_field(columns[i]);
    out += "\n";
    for (const auto &r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + csv_field(r[i]);
        out += "\n";
    }
    return out;
}

}  // namespace qmtk
