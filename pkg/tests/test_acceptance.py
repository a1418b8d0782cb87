"""Acceptance suite: one check (and one printed pass/fail line) per criterion.

Each criterion consumes the session-scoped experiment reports; the printed
lines summarize the measured values at the stated tolerances.
"""

import numpy as np


def _items(report, *names):
    by_name = {i["name"]: i for i in report.items}
    return [by_name[n] for n in names]


def _assert_criterion(num, desc, items):
    passed = all(i["passed"] for i in items)
    detail = "; ".join(
        f"{i['name']}={i['value']:.4g}" if "value" in i else i["name"]
        for i in items)
    print(f"[{'PASS' if passed else 'FAIL'}] criterion {num:2d}: {desc}  "
          f"[{detail}]")
    assert passed, f"criterion {num} failed: {detail}"


def test_criterion_01_kernel_oracle(kernel_report):
    rep, _ = kernel_report
    items = _items(rep, "oracle_agreement", "oracle_convergence_order")
    runtime = _items(rep, "runtime_seconds")[0]["value"]
    items[0]["passed"] &= runtime <= 120.0
    _assert_criterion(1, "kernel oracle equivalence and convergence order",
                      items + _items(rep, "runtime_seconds"))


def test_criterion_02_structural_identities(kernel_report):
    rep, _ = kernel_report
    _assert_criterion(2, "trace/divergence identities, symmetry, PSD floor",
                      _items(rep, "trace_identity", "divergence_identity",
                             "symmetry", "psd_floor"))


def test_criterion_03_conservation_suite(rates_report):
    rep, _ = rates_report
    names = [i["name"] for i in rep.items
             if i["name"].endswith(("mass_drift", "entropy_monotone",
                                    "negativity")) or "_monotone" in i["name"]]
    _assert_criterion(3, "mass/entropy/L^p monotonicity and negativity",
                      _items(rep, *names))


def test_criterion_04_homogeneity(inequalities_report):
    rep, _ = inequalities_report
    _assert_criterion(4, "sup-bound ratios invariant under mass and dilation",
                      _items(rep, "lemma21_mass_invariance",
                             "lemma21_dilation_invariance"))


def test_criterion_05_interpolation_and_truncation(inequalities_report):
    rep, _ = inequalities_report
    _assert_criterion(5, "constant-1 interpolation and pointwise truncation",
                      _items(rep, "interpolation_star_p2_q3",
                             "interpolation_star_p3_q4",
                             "truncation_pointwise"))


def test_criterion_06_lp_decay(rates_report):
    rep, _ = rates_report
    _assert_criterion(6, "L^2 decay rate, scaled span, envelope comparison",
                      _items(rep, "lp2_slope", "lp2_scaled_span",
                             "lp2_envelope_ratio"))


def test_criterion_07_heat_comparison(heat_report):
    rep, _ = heat_report
    _assert_criterion(7, "diffusion decays slower than heat by >= 0.1",
                      _items(rep, "heat_slope", "landau_heat_gap"))


def test_criterion_08_linf_boundedness(rates_report):
    rep, _ = rates_report
    _assert_criterion(8, "t^{1+eps} sup-norm boundedness proxy",
                      _items(rep, "linf_scaled_span"))


def test_criterion_09_moment_envelope(rates_report):
    rep, _ = rates_report
    _assert_criterion(9, "weighted mass dominated by the ODE envelope",
                      _items(rep, "l1m2_envelope", "l1m2_monotone_bounded"))


def test_criterion_10_degiorgi(degiorgi_report):
    rep, _ = degiorgi_report
    _assert_criterion(10, "level energies, recursion constants, parameters",
                      _items(rep, "parameters_worked_values",
                             "energy_monotone_n64", "energy_monotone_n96",
                             "kappa_finite_n64", "kappa_finite_n96",
                             "kappa_stability"))


def test_criterion_11_poincare_sweep(inequalities_report):
    rep, _ = inequalities_report
    _assert_criterion(11, "weighted Poincare sweep, invariance, calibration",
                      _items(rep, "poincare_sweep_scaling",
                             "poincare_mass_invariance",
                             "poincare_calibrated"))


def test_criterion_12_ellipticity_floor(rates_report):
    rep, _ = rates_report
    _assert_criterion(12, "ellipticity floor positive and non-collapsing",
                      _items(rep, "ellipticity_positive",
                             "ellipticity_stable"))
