"""Experiment configuration: a JSON file with nested sections.

Unknown keys are errors, every tolerance must be positive, and a config
round-trips losslessly, so a report's config echo fully reproduces the
run.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

__all__ = ["ConfigError", "ExperimentConfig", "SCHEMA", "schema_text"]


class ConfigError(ValueError):
    """Invalid experiment configuration; message carries the field path."""


KINDS = ("subspace", "fock", "freefield", "modloc", "all")

# section -> key -> (type, default, description)
SCHEMA = {
    "": {
        "kind": (str, "all", "suite to run: subspace | fock | freefield | modloc | all"),
        "seed": (int, 7, "random seed recorded in every report"),
        "out_dir": (str, "results", "output directory for reports and CSV data"),
    },
    "subspace": {
        "max_dim": (int, 8, "largest complex dimension sampled"),
        "n_samples": (int, 200, "number of seeded random standard subspaces"),
        "flow_times": (list, [0.3, 1.7], "modular flow times checked"),
        "tolerance": (float, 1e-9, "residual bound for the suite"),
        "fiber_tolerance": (float, 1e-9, "angle / reassembly bound"),
    },
    "fock": {
        "cutoff": (int, 10, "Fock truncation for the modular checks"),
        "fiber_theta": (float, 1.0471975511965976, "angle of the fiber model"),
        "sym_tolerance": (float, 1e-12, "symmetrization equivalence bound"),
        "coherent_tolerance": (float, 1e-12, "coherent inner-product bound"),
        "gamma_tolerance": (float, 1e-10, "second-quantization action bound"),
        "weyl_tolerance": (float, 1e-6, "Weyl closed form vs matrix bound"),
        "weyl_cutoffs": (list, [8, 12, 16], "cutoff ladder for Weyl checks"),
        "modular_tolerance": (float, 1e-7, "second-quantized modular bound"),
    },
    "freefield": {
        "mass": (float, 1.0, "field mass (> 0)"),
        "theta_max": (float, 6.0, "rapidity half-width of the grid"),
        "n_points": (int, 4096, "rapidity grid size (power of two)"),
        "window": (float, 5.8, "embedding window position"),
        "window_width": (float, 1.2, "embedding window taper width"),
        "lattice_step": (float, 1.0 / 128, "spacetime lattice step for bumps"),
        "locality_tolerance": (float, 1e-6, "spacelike pairing bound"),
        "timelike_floor": (float, 1e-3, "required timelike pairing magnitude"),
        "translation_tolerance": (float, 1e-6, "translation covariance bound"),
        "boost_tolerance": (float, 1e-4, "boost covariance bound"),
        "bw_tolerance": (float, 1e-3, "wedge fixed-point residual bound"),
        "blowup_factor": (float, 1e3, "required wrong-wedge cap blow-up"),
        "borchers_tolerance": (float, 1e-6, "translation commutation bound"),
    },
    "modloc": {
        "extraction_tol": (float, 0.05, "singular-value threshold for K_W"),
        "net_tolerance": (float, 1e-3, "isotony/duality/covariance bound"),
        "cone_tolerance": (float, 1e-2, "double-cone containment bound"),
        "block_tolerance": (float, 1e-10, "direct-sum block property bound"),
        "second_mass": (float, 1.4, "mass of the second summand"),
        "dictionary": (list,
                       [[0.0, 3.0, 0.5], [0.4, 3.6, 0.55],
                        [-0.3, 2.8, 0.45], [0.1, 4.0, 0.6]],
                       "base right-wedge probe bumps as [x0, x1, radius]"),
    },
}


def _check_section(section, data, out):
    schema = SCHEMA[section]
    for key, value in data.items():
        path = f"{section}.{key}" if section else key
        if key in KINDS and section == "" and isinstance(value, dict):
            continue
        if key not in schema:
            raise ConfigError(f"unknown key: {path}")
        typ = schema[key][0]
        if typ is float and isinstance(value, int):
            value = float(value)
        if not isinstance(value, typ):
            raise ConfigError(f"{path}: expected {typ.__name__}, got "
                              f"{type(value).__name__}")
        if typ is float and ("tolerance" in key or key in
                             ("timelike_floor", "blowup_factor",
                              "extraction_tol")) and value <= 0:
            raise ConfigError(f"{path}: must be positive")
        if key == "dictionary":
            if not value:
                raise ConfigError(f"{path}: dictionary must not be empty")
            for i, entry in enumerate(value):
                if (not isinstance(entry, (list, tuple)) or len(entry) != 3
                        or not all(isinstance(x, (int, float))
                                   for x in entry)):
                    raise ConfigError(
                        f"{path}[{i}]: expected [x0, x1, radius]")
                if entry[2] <= 0:
                    raise ConfigError(f"{path}[{i}]: radius must be positive")
        out[key] = value


@dataclass
class ExperimentConfig:
    kind: str = "all"
    seed: int = 7
    out_dir: str = "results"
    subspace: dict = field(default_factory=dict)
    fock: dict = field(default_factory=dict)
    freefield: dict = field(default_factory=dict)
    modloc: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"kind: must be one of {KINDS}, got {self.kind!r}")
        for section in ("subspace", "fock", "freefield", "modloc"):
            merged = {k: v for k, (_, v, _) in SCHEMA[section].items()}
            given = getattr(self, section)
            checked = {}
            _check_section(section, given, checked)
            merged.update(checked)
            setattr(self, section, merged)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        top = {}
        sections = {}
        for key, value in data.items():
            if key in ("subspace", "fock", "freefield", "modloc"):
                if not isinstance(value, dict):
                    raise ConfigError(f"{key}: expected a section object")
                sections[key] = value
            elif key in SCHEMA[""]:
                typ = SCHEMA[""][key][0]
                if not isinstance(value, typ):
                    raise ConfigError(f"{key}: expected {typ.__name__}")
                top[key] = value
            else:
                raise ConfigError(f"unknown key: {key}")
        return cls(**top, **sections)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}")
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}")
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "seed": self.seed, "out_dir": self.out_dir,
                "subspace": dict(self.subspace), "fock": dict(self.fock),
                "freefield": dict(self.freefield), "modloc": dict(self.modloc)}


def schema_text() -> str:
    lines = ["Configuration file: a single JSON object.", ""]
    for section, keys in SCHEMA.items():
        header = section if section else "(top level)"
        lines.append(f"[{header}]")
        for key, (typ, default, help_) in keys.items():
            lines.append(f"  {key} ({typ.__name__}, default {default!r}): {help_}")
        lines.append("")
    lines.append("Unknown keys are rejected.")
    return "\n".join(lines)
