"""Acceptance suite: every criterion at its stated tolerance, one
pass/fail line per criterion (run with -s to see them live)."""

import json
import time

import numpy as np

from modlab.checks import (
    check_borchers, check_coherent_calculus, check_covariance,
    check_direct_sum, check_doublecone, check_fiberization, check_locality,
    check_net, check_second_quantized, check_standard_suite,
    check_symmetrization, check_weyl,
)
from modlab.config import ExperimentConfig
from modlab.freefield import (
    REFINEMENT_RUNGS, DomainViolationError, FreeFieldModel, RapidityGrid,
    Region2, TestFunction2, bw_residual, embed, modular_blowup_profile,
)


def default_config(**over):
    return ExperimentConfig.from_dict(dict(over))


def rung_config(k):
    cfg = default_config()
    preset = REFINEMENT_RUNGS[k]
    cfg.freefield.update(n_points=preset["n_points"], window=preset["window"],
                         window_width=preset["window_width"],
                         lattice_step=preset["step"])
    return cfg


def report_line(number, label, passed, detail=""):
    flag = "PASS" if passed else "FAIL"
    print(f"[{flag}] criterion {number:2d}: {label} {detail}")
    assert passed, f"criterion {number}: {label} {detail}"


def run_records(fn, config, seed=7):
    rng = np.random.default_rng(seed)
    return fn(config, rng)


def test_criterion_01_standard_subspace_suite():
    cfg = default_config()
    t0 = time.perf_counter()
    records = run_records(check_standard_suite, cfg)
    elapsed = time.perf_counter() - t0
    worst = max(r["value"] for r in records)
    ok = all(r["passed"] for r in records) and elapsed < 10.0
    report_line(1, "standard-subspace suite (200 samples, d <= 8)", ok,
                f"worst residual {worst:.2e}, {elapsed:.1f}s")


def test_criterion_02_fiberization_oracle():
    cfg = default_config()
    t0 = time.perf_counter()
    records = run_records(check_fiberization, cfg)
    elapsed = time.perf_counter() - t0
    ok = all(r["passed"] for r in records) and elapsed < 5.0
    report_line(2, "fiber angles match principal angles; (j, delta) "
                   "reassemble", ok,
                f"worst {max(r['value'] for r in records):.2e}, {elapsed:.1f}s")


def test_criterion_03_symmetrization_identity():
    cfg = default_config()
    t0 = time.perf_counter()
    records = run_records(check_symmetrization, cfg)
    elapsed = time.perf_counter() - t0
    ok = all(r["passed"] for r in records) and elapsed < 10.0
    report_line(3, "symmetrization equivalence (100 instances, n <= 5, "
                   "d <= 4)", ok,
                f"worst {records[0]['value']:.2e}, {elapsed:.1f}s")


def test_criterion_04_coherent_calculus():
    cfg = default_config()
    t0 = time.perf_counter()
    records = run_records(check_coherent_calculus, cfg)
    elapsed = time.perf_counter() - t0
    ok = all(r["passed"] for r in records) and elapsed < 10.0
    report_line(4, "coherent inner products and gamma action", ok,
                f"{elapsed:.1f}s")


def test_criterion_05_ccr_weyl():
    cfg = default_config()
    t0 = time.perf_counter()
    records = run_records(check_weyl, cfg)
    elapsed = time.perf_counter() - t0
    ok = all(r["passed"] for r in records) and elapsed < 60.0
    vals = {r["name"]: r["value"] for r in records}
    report_line(5, "Weyl closed form vs matrix exponential, CCR phase, "
                   "monotone truncation defect", ok,
                f"agreement {vals['fock.weyl_agreement']:.2e}, "
                f"phase {vals['fock.ccr_phase']:.2e}, {elapsed:.1f}s")


def test_criterion_06_second_quantized_modular():
    cfg = default_config()
    t0 = time.perf_counter()
    records = run_records(check_second_quantized, cfg)
    elapsed = time.perf_counter() - t0
    ok = all(r["passed"] for r in records) and elapsed < 60.0
    report_line(6, "second-quantized modular identities on the pi/3 fiber "
                   "model", ok,
                f"worst {max(r['value'] for r in records):.2e}, {elapsed:.1f}s")


def test_criterion_07_locality():
    t0 = time.perf_counter()
    fine = run_records(check_locality, rung_config(3))
    coarse = run_records(check_locality, rung_config(2))
    elapsed = time.perf_counter() - t0
    vals_f = {r["name"]: r for r in fine}
    vals_c = {r["name"]: r for r in coarse}
    stable = abs(vals_f["freefield.locality_timelike"]["value"]
                 - vals_c["freefield.locality_timelike"]["value"]) \
        < 0.1 * vals_f["freefield.locality_timelike"]["value"]
    ok = (all(r["passed"] for r in fine) and all(r["passed"] for r in coarse)
          and stable and elapsed < 60.0)
    report_line(7, "locality: spacelike pairing at quadrature floor, "
                   "timelike pairing nonzero, stable under refinement", ok,
                f"spacelike {vals_f['freefield.locality_spacelike']['value']:.1e}, "
                f"timelike {vals_f['freefield.locality_timelike']['value']:.2e}, "
                f"{elapsed:.1f}s")


def test_criterion_08_covariance():
    t0 = time.perf_counter()
    per_rung = [run_records(check_covariance, rung_config(k))
                for k in (1, 2, 3)]
    elapsed = time.perf_counter() - t0
    boosts = [next(r["value"] for r in recs
                   if r["name"] == "freefield.covariance_boost")
              for recs in per_rung]
    transl = [next(r["value"] for r in recs
                   if r["name"] == "freefield.covariance_translation")
              for recs in per_rung]
    decreasing = all(b <= 1.1 * a for a, b in zip(boosts, boosts[1:]))
    final_ok = all(r["passed"] for r in per_rung[-1])
    ok = decreasing and final_ok and elapsed < 60.0
    report_line(8, "Poincare covariance of the embedding", ok,
                f"boost ladder {boosts[0]:.1e} -> {boosts[-1]:.1e}, "
                f"translation {transl[-1]:.1e}, {elapsed:.1f}s")


def test_criterion_09_bisognano_wichmann():
    t0 = time.perf_counter()
    residuals = []
    for k in (1, 2, 3):
        cfg = rung_config(k)
        p = cfg.freefield
        model = FreeFieldModel(p["mass"],
                               RapidityGrid(p["theta_max"], p["n_points"]),
                               p["window"], p["window_width"])
        f = TestFunction2.bump((0.0, 3.0), 0.5, p["lattice_step"],
                               region=Region2.right_wedge())
        residuals.append(bw_residual(f, model))
    monotone = residuals[0] > residuals[1] > residuals[2]
    final = residuals[2] < 1e-3

    cfg = rung_config(3)
    p = cfg.freefield
    model = FreeFieldModel(p["mass"],
                           RapidityGrid(p["theta_max"], p["n_points"]),
                           p["window"], p["window_width"])
    g = TestFunction2.bump((0.0, -3.0), 0.5, p["lattice_step"],
                           region=Region2.left_wedge())
    violated = False
    try:
        bw_residual(g, model)
    except DomainViolationError as exc:
        violated = exc.tail_mass > 1e-3
    Eg = embed(g, model)
    blow = modular_blowup_profile(Eg)
    growth = blow[-1] / blow[0] > 1e3
    elapsed = time.perf_counter() - t0
    ok = monotone and final and violated and growth and elapsed < 120.0
    report_line(9, "one-particle wedge fixed points with domain violation "
                   "for the wrong wedge", ok,
                f"ladder {residuals[0]:.1e} -> {residuals[1]:.1e} -> "
                f"{residuals[2]:.1e}, blow-up x{blow[-1] / blow[0]:.1e}, "
                f"{elapsed:.1f}s")


def test_criterion_10_borchers():
    cfg = default_config()
    t0 = time.perf_counter()
    records = run_records(check_borchers, cfg)
    elapsed = time.perf_counter() - t0
    ok = all(r["passed"] for r in records) and elapsed < 30.0
    report_line(10, "translation commutation relations with the wedge "
                    "modular data", ok,
                f"worst {max(r['value'] for r in records):.2e}, {elapsed:.1f}s")


def test_criterion_11_localization_net():
    cfg = default_config()
    t0 = time.perf_counter()
    records = (run_records(check_net, cfg)
               + run_records(check_doublecone, cfg)
               + run_records(check_direct_sum, cfg))
    elapsed = time.perf_counter() - t0
    vals = {r["name"]: r["value"] for r in records}
    ok = all(r["passed"] for r in records) and elapsed < 120.0
    report_line(11, "localized net: isotony, duality, covariance, double "
                    "cones, direct sums", ok,
                f"net worst {max(vals['modloc.isotony'], vals['modloc.duality'], vals['modloc.covariance']):.1e}, "
                f"cone {vals['modloc.doublecone']:.1e}, "
                f"blocks {vals['modloc.direct_sum']:.1e}, {elapsed:.1f}s")


def test_criterion_12_determinism(tmp_path):
    from modlab.cli import main
    data = {"kind": "subspace", "seed": 13,
            "subspace": {"n_samples": 40, "max_dim": 6}}
    reports = []
    for tag in ("a", "b"):
        cfg_path = tmp_path / f"{tag}.json"
        cfg_path.write_text(json.dumps(dict(data, out_dir=str(tmp_path / tag))))
        assert main(["run", "--config", str(cfg_path)]) == 0
        rep = json.loads((tmp_path / tag / "report.json").read_text())
        rep.pop("timings")
        rep.pop("environment")
        rep["config"].pop("out_dir")
        reports.append(rep)
    ok = reports[0] == reports[1]
    report_line(12, "identical (config, seed) gives identical reports "
                    "modulo timings", ok)
