"""Named verification checks behind the experiment runner.

Each check computes one or more measured values, compares them against
their thresholds, and returns records carrying the mathematical claim
they verify.  Checks are deterministic given (config, seed).
"""

from __future__ import annotations

import math
import time

import numpy as np

from . import fock as fk
from . import freefield as ff
from . import modloc as ml
from .config import ExperimentConfig
from .hilbert import (
    ComplexVectorSpace, RealSubspace, antilinear_adjoint, principal_angles,
    subspace_distance, subspace_intersection, subspace_sum,
    symplectic_complement,
)
from .standard import (
    fiber_standard_subspace, fiberize, modular_data, modular_flow,
    random_standard_subspace, reassemble_modular, tomita_operator,
)

__all__ = ["CHECKS", "run_checks", "run_refinement", "list_checks",
           "REFINEMENT_SENSITIVE"]


def record(name, claim, value, threshold, direction="below"):
    ok = value < threshold if direction == "below" else value > threshold
    return {"name": name, "claim": claim, "value": float(value),
            "threshold": float(threshold), "direction": direction,
            "passed": bool(ok)}


# -- subspace suite --------------------------------------------------------

def check_standard_suite(config, rng):
    p = config.subspace
    worst = dict(involution=0.0, adjoint=0.0, conjugation=0.0, flow=0.0,
                 fixed=0.0)
    for _ in range(p["n_samples"]):
        d = int(rng.integers(2, p["max_dim"] + 1))
        V = ComplexVectorSpace(d)
        K = random_standard_subspace(V, rng)
        s = tomita_operator(K)
        md = modular_data(s)
        eye = np.eye(V.rdim)
        worst["involution"] = max(worst["involution"], float(np.linalg.norm(
            s.matrix @ s.matrix - eye, 2)))
        Kp = symplectic_complement(K)
        sp = tomita_operator(Kp)
        worst["adjoint"] = max(worst["adjoint"], float(np.linalg.norm(
            sp.matrix - antilinear_adjoint(s).matrix, 2)))
        jK = RealSubspace.from_real_span(V, md.j.matrix @ K.basis)
        worst["conjugation"] = max(worst["conjugation"],
                                   subspace_distance(jK, Kp))
        for t in p["flow_times"]:
            FK = RealSubspace.from_real_span(
                V, modular_flow(md, float(t)).matrix @ K.basis)
            worst["flow"] = max(worst["flow"], subspace_distance(FK, K))
        cap = subspace_intersection(K, Kp, cos_tol=1e-8)
        fix = subspace_intersection(
            _fixed_space(V, md.j.matrix), _fixed_space(V, md.delta.matrix),
            cos_tol=1e-8)
        worst["fixed"] = max(worst["fixed"], subspace_distance(cap, fix))
    claims = {
        "involution": "the Tomita operator squares to the identity",
        "adjoint": "the complement's Tomita operator is the adjoint",
        "conjugation": "the modular conjugation maps K onto K'",
        "flow": "the modular flow preserves K",
        "fixed": "K cap K' is the joint fixed space of j and delta",
    }
    return [record(f"subspace.{k}", claims[k], v, p["tolerance"])
            for k, v in worst.items()]


def _fixed_space(V, M):
    ev, W = np.linalg.eigh(0.5 * (M + M.T))
    return RealSubspace.from_real_span(V, W[:, np.abs(ev - 1.0) < 1e-8])


def check_fiberization(config, rng):
    p = config.subspace
    worst_angle, worst_reassembly = 0.0, 0.0
    for d in range(2, p["max_dim"] + 1):
        V = ComplexVectorSpace(d)
        K = random_standard_subspace(V, rng)
        md = modular_data(tomita_operator(K))
        blocks, fixed = fiberize(K)
        thetas = sorted([b.theta for b in blocks for _ in range(2)]
                        + [np.pi / 2] * fixed.dim)
        oracle = np.sort(principal_angles(K, K.mult_i()))
        if len(thetas) != len(oracle):
            worst_angle = float("inf")
        else:
            worst_angle = max(worst_angle,
                              float(np.max(np.abs(np.sort(thetas) - oracle))))
        jmat, dmat = reassemble_modular(V, blocks, fixed)
        worst_reassembly = max(
            worst_reassembly,
            float(np.linalg.norm(jmat - md.j.matrix, 2)),
            float(np.linalg.norm(dmat - md.delta.matrix, 2)
                  / max(1.0, math.sqrt(md.condition_number))))
    return [
        record("subspace.fiber_angles",
               "fiber angles equal the principal angles between K and iK",
               worst_angle, p["fiber_tolerance"]),
        record("subspace.fiber_reassembly",
               "(j, delta) reassemble from the angle blocks and fixed part",
               worst_reassembly, p["fiber_tolerance"]),
    ]


# -- fock suite ------------------------------------------------------------

def check_symmetrization(config, rng):
    p = config.fock
    worst = 0.0
    for _ in range(100):
        d = int(rng.integers(2, 5))
        n = int(rng.integers(1, 6))
        fs = fk.FockSpace(d, n)
        xs = [rng.standard_normal(d) + 1j * rng.standard_normal(d)
              for _ in range(n)]
        a = fk.sym_project(fs, xs)
        b = fk.sym_power_expand(fs, xs)
        worst = max(worst, (a - b).norm() / max(1.0, a.norm()))
    return [record("fock.symmetrization",
                   "permutation-average symmetrization equals the "
                   "tensor-power expansion", worst, p["sym_tolerance"])]


def check_coherent_calculus(config, rng):
    p = config.fock
    worst_inner, worst_gamma = 0.0, 0.0
    for d in (1, 2, 3):
        fs = fk.FockSpace(d, 10)
        for _ in range(5):
            h = rng.standard_normal(d) + 1j * rng.standard_normal(d)
            k = rng.standard_normal(d) + 1j * rng.standard_normal(d)
            h /= np.linalg.norm(h)
            k /= np.linalg.norm(k)
            lhs = fk.coherent(fs, h).inner(fk.coherent(fs, k))
            worst_inner = max(worst_inner,
                              abs(lhs - fk.coherent_inner(h, k, 10)))
            A = (rng.standard_normal((d, d))
                 + 1j * rng.standard_normal((d, d))) / 2.0
            diff = (fk.gamma(fs, A).apply(fk.coherent(fs, h))
                    - fk.coherent(fs, A @ h)).norm()
            worst_gamma = max(worst_gamma, diff)
    return [
        record("fock.coherent_inner",
               "<e^h, e^k> equals the truncated exponential series",
               worst_inner, p["coherent_tolerance"]),
        record("fock.gamma_on_coherent",
               "second quantization acts on coherent vectors by gamma(a) "
               "e^h = e^(ah)", worst_gamma, p["gamma_tolerance"]),
    ]


def check_weyl(config, rng):
    p = config.fock
    h = np.array([0.8 + 0.3j])
    k = np.array([0.5 - 0.2j])
    devs, defects = [], []
    for N in p["weyl_cutoffs"]:
        fs = fk.FockSpace(1, int(N))
        lhs = fk.weyl_matrix(fs, h).apply(
            fk.coherent(fs, 1j / math.sqrt(2.0) * k))
        rhs = fk.weyl_on_coherent(fs, h, k)
        low = fs.level_slices[min(6, int(N))].stop
        devs.append(float(np.linalg.norm(lhs.coeffs[:low] - rhs.coeffs[:low])))
        defects.append(fk.weyl_unitarity_defect(1.0 + 0.0j, int(N), 8))
    fs = fk.FockSpace(1, max(int(N) for N in p["weyl_cutoffs"]))
    e1 = np.array([1.0 + 0.0j])
    ie1 = np.array([1.0j])
    Wh, Wk = fk.weyl_matrix(fs, e1), fk.weyl_matrix(fs, ie1)
    Whk = fk.weyl_matrix(fs, e1 + ie1)
    lhs = (Wh @ Wk).apply(fk.vacuum(fs))
    rhs = np.exp(-0.5j) * Whk.apply(fk.vacuum(fs))
    low = fs.level_slices[8].stop
    ccr = float(np.linalg.norm(lhs.coeffs[:low] - rhs.coeffs[:low]))
    monotone = all(a > b for a, b in zip(devs, devs[1:])) and \
        all(a > b for a, b in zip(defects, defects[1:]))
    return [
        record("fock.weyl_agreement",
               "closed-form Weyl action matches the matrix exponential on "
               "coherent vectors", devs[-1], p["weyl_tolerance"]),
        record("fock.ccr_phase",
               "W(h) W(k) = exp(-i Im<h,k>/2) W(h+k)", ccr,
               p["weyl_tolerance"]),
        record("fock.weyl_truncation_monotone",
               "Weyl truncation defects decrease with the cutoff",
               1.0 if monotone else 0.0, 0.5, direction="above"),
    ]


def check_second_quantized(config, rng):
    p = config.fock
    V = ComplexVectorSpace(2)
    K = fiber_standard_subspace(V, [p["fiber_theta"]])
    rep = fk.second_quantized_modular_check(K, p["cutoff"], rng)
    claims = {
        "conjugation_on_coherent": "gamma(s) e^(ik) = e^(-ik) for k in K",
        "weyl_conjugation": "J W(k) J = W(jk)*",
        "weyl_flow_covariance":
            "Delta^it W(k) Delta^-it = W(delta^it k)",
        "ccr_phase_across_complement":
            "the Weyl commutation phase is trivial across K and K'",
    }
    return [record(f"fock.{k}", claims[k], v, p["modular_tolerance"])
            for k, v in rep.items()]


# -- free field suite ------------------------------------------------------

def _model(config) -> ff.FreeFieldModel:
    p = config.freefield
    return ff.FreeFieldModel(p["mass"],
                             ff.RapidityGrid(p["theta_max"], p["n_points"]),
                             p["window"], p["window_width"])


def check_locality(config, rng):
    p = config.freefield
    model = _model(config)
    step = p["lattice_step"]
    pairs = [((0.0, -2.0), 0.5, (0.0, 2.0), 0.5),
             ((0.3, -1.7), 0.4, (-0.2, 2.1), 0.45)]
    worst = 0.0
    for c1, r1, c2, r2 in pairs:
        f = ff.TestFunction2.bump(c1, r1, step)
        g = ff.TestFunction2.bump(c2, r2, step)
        worst = max(worst, abs(ff.locality_pairing(f, g, model)))
    f = ff.TestFunction2.bump((0.0, 0.0), 0.5, step)
    g = ff.TestFunction2.bump((1.5, 0.0), 0.5, step)
    timelike = abs(ff.locality_pairing(f, g, model))
    return [
        record("freefield.locality_spacelike",
               "Im<Ef, Eg> vanishes for spacelike-separated supports",
               worst, p["locality_tolerance"]),
        record("freefield.locality_timelike",
               "Im<Ef, Eg> stays away from zero for a timelike pair",
               timelike, p["timelike_floor"], direction="above"),
    ]


def check_covariance(config, rng):
    p = config.freefield
    model = _model(config)
    f = ff.TestFunction2.bump((0.0, 2.5), 0.5, p["lattice_step"])
    t_res = max(
        ff.covariance_residual(f, ff.PoincareElement.translation(0.3, 0.0),
                               model),
        ff.covariance_residual(f, ff.PoincareElement.translation(0.1, 0.2),
                               model))
    b_res = ff.covariance_residual(f, ff.PoincareElement.boost(0.2), model)
    return [
        record("freefield.covariance_translation",
               "E(f o g^-1) = u(g) E f for translations", t_res,
               p["translation_tolerance"]),
        record("freefield.covariance_boost",
               "E(f o g^-1) = u(g) E f for boosts", b_res,
               p["boost_tolerance"]),
    ]


def check_bisognano_wichmann(config, rng):
    p = config.freefield
    model = _model(config)
    step = p["lattice_step"]
    f = ff.TestFunction2.bump((0.0, 3.0), 0.5, step,
                              region=ff.Region2.right_wedge())
    res = ff.bw_residual(f, model)
    g = ff.TestFunction2.bump((0.0, -3.0), 0.5, step,
                              region=ff.Region2.left_wedge())
    Eg = ff.embed(g, model)
    cert = ff.domain_certificate(Eg)
    blow = ff.modular_blowup_profile(Eg)
    growth = blow[-1] / blow[0]
    Ef = ff.embed(f, model)
    control = ff.modular_blowup_profile(Ef)
    return [
        record("freefield.bw_right_wedge",
               "right-wedge embeddings are fixed by conjugation after the "
               "half boost", res, p["bw_tolerance"]),
        record("freefield.bw_left_wedge_certificate",
               "left-wedge embeddings fail the wedge domain certificate",
               cert, 1e-3, direction="above"),
        record("freefield.bw_left_wedge_blowup",
               "the capped half-boost image of a wrong-wedge vector blows "
               "up along the cap ladder", growth, p["blowup_factor"],
               direction="above"),
        record("freefield.bw_right_wedge_stable",
               "the capped half-boost image of a right-wedge vector stays "
               "bounded along the cap ladder", control[-1] / control[0],
               p["blowup_factor"]),
    ]


def check_borchers(config, rng):
    p = config.freefield
    model = _model(config)
    probes = [ff.gaussian_packet(model, width=0.65, momentum=0.3),
              ff.gaussian_packet(model, center=0.3, width=0.7, momentum=-0.2)]
    rep = ff.borchers_check(0.5, (0.1, 0.25), probes, model)
    return [
        record("freefield.borchers_flow",
               "Delta^it U(a) Delta^-it = U(exp(-2 pi t) a) on the positive "
               "lightray", rep["flow_commutation"], p["borchers_tolerance"]),
        record("freefield.borchers_reflection",
               "J U(a) J = U(-a)", rep["reflection_commutation"],
               p["borchers_tolerance"]),
    ]


# -- modular localization suite ---------------------------------------------

def _right_dict(config, shift=(0.0, 0.0)):
    step = config.freefield["lattice_step"]
    g = ff.PoincareElement.translation(*shift)
    base = [ff.TestFunction2.bump((c0, c1), r, step)
            for c0, c1, r in config.modloc["dictionary"]]
    if shift == (0.0, 0.0):
        return base
    return [f.transform(g) for f in base]


def _build_net(config):
    model = _model(config)
    rep = ml.PoincareRep2([model])
    net = ml.LocalizedNet(rep, tol=config.modloc["extraction_tol"])
    gamma_el = ff.PoincareElement.reflection()
    shifts = [(0.0, 0.0), (0.0, 0.5), (0.0, 1.0)]
    dicts = {s: _right_dict(config, s) for s in shifts}
    right_fns = {
        (0.0, 0.0): [f for s in shifts for f in dicts[s]],
        (0.0, 0.5): [f for s in shifts[1:] for f in dicts[s]],
        (0.0, 1.0): list(dicts[(0.0, 1.0)]),
    }
    for apex, fns in right_fns.items():
        net.populate_wedge(ff.Region2.right_wedge(apex),
                           [(f, 0) for f in fns])
    left_dicts = {s: [f.transform(gamma_el).transform(
        ff.PoincareElement.translation(0.0, s[1]))
        for f in dicts[(0.0, 0.0)]] for s in shifts}
    left_fns = {
        (0.0, 0.0): left_dicts[(0.0, 0.0)],
        (0.0, 0.5): left_dicts[(0.0, 0.0)] + left_dicts[(0.0, 0.5)],
        (0.0, 1.0): [f for s in shifts for f in left_dicts[s]],
    }
    for apex, fns in left_fns.items():
        net.populate_wedge(ff.Region2.left_wedge(apex), [(f, 0) for f in fns])
    return net


def check_net(config, rng):
    p = config.modloc
    net = _build_net(config)
    rep_checks = ml.net_checks(
        net, covariance_elements=[ff.PoincareElement.translation(0.0, 0.5),
                                  ff.PoincareElement.boost(0.1)])
    worst = {cat: max((row["residual"] for row in rows), default=0.0)
             for cat, rows in rep_checks.items()}
    claims = {
        "isotony": "nested wedges give nested localized models",
        "duality": "the complement wedge model is the symplectic complement "
                   "within the joint span",
        "covariance": "u(g) K(W) = K(gW) over matched dictionaries",
    }
    return [record(f"modloc.{cat}", claims[cat], v, p["net_tolerance"])
            for cat, v in worst.items()]


def check_doublecone(config, rng):
    p = config.modloc
    model = _model(config)
    rep = ml.PoincareRep2([model])
    step = config.freefield["lattice_step"]
    O = ff.Region2.double_cone((0.0, 0.0), 2.2)
    cone_fns = [ff.TestFunction2.bump((0.0, 0.0), 0.5, step),
                ff.TestFunction2.bump((0.15, 0.2), 0.4, step),
                ff.TestFunction2.bump((-0.1, -0.15), 0.4, step)]
    net = ml.LocalizedNet(rep, tol=p["extraction_tol"])
    WR = ff.Region2.right_wedge(O.right_apex)
    WL = ff.Region2.left_wedge(O.left_apex)
    net.populate_wedge(WR, [(f, 0) for f in cone_fns
                            + [ff.TestFunction2.bump((0.0, 1.4), 0.5, step)]])
    net.populate_wedge(WL, [(f, 0) for f in cone_fns
                            + [ff.TestFunction2.bump((0.0, -1.4), 0.5, step)]])
    probes = [ml.embed_probe(rep, f) for f in cone_fns]
    _, report = ml.doublecone_space(net, O, cone_probes=probes)
    worst = max(report["probe_residuals"]) if report["probe_residuals"] else 1.0
    return [record("modloc.doublecone",
                   "cone-supported embeddings lie in the intersection of "
                   "the generating wedge models", worst, p["cone_tolerance"])]


def check_direct_sum(config, rng):
    p = config.modloc
    model = _model(config)
    model2 = ff.FreeFieldModel(p["second_mass"], model.grid, model.window,
                               model.window_width)
    rep2 = ml.PoincareRep2([model, model2])
    step = config.freefield["lattice_step"]
    W = ff.Region2.right_wedge()
    f = ff.TestFunction2.bump((0.0, 3.0), 0.5, step)
    g = ff.TestFunction2.bump((0.4, 3.4), 0.55, step)
    p1 = ml.embed_probe(rep2, f, summand=0)
    p2 = ml.embed_probe(rep2, g, summand=1)
    K_joint, _ = ml.localized_subspace(rep2, W, [p1, p2],
                                       tol=p["extraction_tol"])
    K1, _ = ml.localized_subspace(rep2, W, [p1], tol=p["extraction_tol"])
    K2, _ = ml.localized_subspace(rep2, W, [p2], tol=p["extraction_tol"])
    dist = subspace_distance(K_joint, subspace_sum(K1, K2))
    return [record("modloc.direct_sum",
                   "the wedge model of a direct sum is the direct sum of "
                   "the block models", dist, p["block_tolerance"])]


CHECKS = {
    "subspace": [check_standard_suite, check_fiberization],
    "fock": [check_symmetrization, check_coherent_calculus, check_weyl,
             check_second_quantized],
    "freefield": [check_locality, check_covariance,
                  check_bisognano_wichmann, check_borchers],
    "modloc": [check_net, check_doublecone, check_direct_sum],
}

# checks re-run by the refinement ladder; floor-exempt ones may sit at the
# quadrature floor, where monotone decrease is not meaningful
REFINEMENT_SENSITIVE = {
    "freefield.bw_right_wedge": {"floor": 0.0},
    "freefield.covariance_boost": {"floor": 0.0},
    "freefield.covariance_translation": {"floor": 1e-8},
    "freefield.locality_spacelike": {"floor": 1e-8},
}


def run_checks(config: ExperimentConfig):
    kinds = (["subspace", "fock", "freefield", "modloc"]
             if config.kind == "all" else [config.kind])
    records, timings = [], {}
    for kind in kinds:
        for fn in CHECKS[kind]:
            rng = np.random.default_rng(config.seed)
            t0 = time.perf_counter()
            records.extend(fn(config, rng))
            timings[fn.__name__] = time.perf_counter() - t0
    return records, timings


def run_refinement(config: ExperimentConfig, ladder):
    """Re-run the resolution-dependent freefield checks across rung
    presets and check the residuals decrease (a 10 percent slack allows
    stalls at the numerical floor)."""
    rows = []
    for rung in ladder:
        preset = ff.REFINEMENT_RUNGS[int(rung)]
        cfg = ExperimentConfig.from_dict(config.to_dict())
        cfg.freefield.update(
            n_points=preset["n_points"], window=preset["window"],
            window_width=preset["window_width"],
            lattice_step=preset["step"])
        rng = np.random.default_rng(cfg.seed)
        for fn in (check_bisognano_wichmann, check_covariance,
                   check_locality):
            for rec in fn(cfg, rng):
                if rec["name"] in REFINEMENT_SENSITIVE:
                    rows.append({"resolution": int(rung),
                                 "check": rec["name"],
                                 "residual": rec["value"]})
    records = []
    for name, opts in REFINEMENT_SENSITIVE.items():
        seq = [r["residual"] for r in rows if r["check"] == name]
        if len(seq) < 2:
            continue
        ok = all(b <= 1.1 * a or b <= opts["floor"]
                 for a, b in zip(seq, seq[1:]))
        records.append({"name": f"refine.{name}",
                        "claim": "residual decreases along the refinement "
                                 "ladder (within 10 percent, floor-exempt)",
                        "value": float(seq[-1]), "threshold": float(seq[0]),
                        "direction": "below",
                        "passed": bool(ok), "sequence": seq})
    return records, rows


def list_checks():
    out = []
    for kind, fns in CHECKS.items():
        for fn in fns:
            out.append((kind, fn.__name__.replace("check_", "")))
    return out
