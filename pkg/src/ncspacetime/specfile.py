"""Algebra-spec files: JSON documents selecting signature, regime,
parameter bindings and the optional cell/representation blocks."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import (GEN_NAMES, ST_NAMES, LieAlgebraSpec, Signature,
                      build_deformed_algebra)
from .clifford import FinkelsteinParams
from .minilang import MiniLangError, parse_element, parse_scalar
from .scalars import PARAMS, Scalar


class SpecFileError(ValueError):
    pass


@dataclass
class RepConfig:
    sigma: float = 0.37
    epsilon: int = 0
    samples: int = 120
    seed: int = 0
    tolerance: float = 1e-8

    def __post_init__(self):
        if self.epsilon not in (0, 1):
            raise SpecFileError("rep.epsilon must be 0 or 1")
        if self.tolerance <= 0:
            raise SpecFileError("rep.tolerance must be positive")
        if self.samples < 1:
            raise SpecFileError("rep.samples must be positive")


@dataclass
class SpecFile:
    signature: Signature = Signature(1, 1)
    regime: str = "full"
    bindings: dict = field(default_factory=dict)  # param -> Scalar or None
    finkelstein: FinkelsteinParams | None = None
    rep: RepConfig = field(default_factory=RepConfig)
    structure_overrides: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict)

    def build(self) -> LieAlgebraSpec:
        """Structure-constant table per the file, overrides applied."""
        spec = build_deformed_algebra(self.signature, self.regime)
        for key, text in self.structure_overrides.items():
            a, b = _parse_override_key(key, spec)
            elem = parse_element(text, spec)
            if elem.degree() > 1:
                raise SpecFileError(
                    f"override {key} must be degree <= 1, got {text!r}")
            spec.set_bracket(a, b, _env_to_algebra(elem))
        numeric = {name: val for name, val in self.bindings.items()
                   if val is not None}
        if numeric:
            for pair in list(spec.table):
                spec.table[pair] = spec.table[pair].map_scalars(
                    lambda s: s.substitute(numeric))
            spec._engine = None
        return spec


def _env_to_algebra(elem):
    from .algebra import AlgebraElement
    out = AlgebraElement()
    for word, s in elem.terms.items():
        if len(word) == 0:
            out.central = out.central + s
        else:
            out = out + AlgebraElement({word[0]: s})
    return out


def _parse_override_key(key: str, spec: LieAlgebraSpec) -> tuple[int, int]:
    text = key.strip()
    if not (text.startswith("[") and text.endswith("]") and "," in text):
        raise SpecFileError(f"override key must look like [p0,x0]: {key!r}")
    left, right = text[1:-1].split(",", 1)
    names = ST_NAMES if spec.regime == "spacetime" else GEN_NAMES
    ids = {names[g]: g for g in spec.basis}
    try:
        return ids[left.strip()], ids[right.strip()]
    except KeyError as exc:
        raise SpecFileError(f"unknown generator in override key {key!r}") from exc


def _parse_binding(name: str, value) -> Scalar | None:
    if value == "symbolic" or value is None:
        return None
    if isinstance(value, bool):
        raise SpecFileError(f"binding {name} must be a rational or 'symbolic'")
    if isinstance(value, int):
        return Scalar.rational(value)
    if isinstance(value, str):
        try:
            return Scalar.of(parse_scalar(value).constant_value())
        except (MiniLangError, ValueError) as exc:
            raise SpecFileError(
                f"binding {name}: not an exact constant: {value!r}") from exc
    raise SpecFileError(f"binding {name} must be a rational string")


def _parse_exact_complex(name: str, value):
    from .scalars import QQi
    if isinstance(value, int):
        return QQi(value)
    if isinstance(value, str):
        try:
            return parse_scalar(value).constant_value()
        except (MiniLangError, ValueError) as exc:
            raise SpecFileError(
                f"{name}: not an exact constant: {value!r}") from exc
    raise SpecFileError(f"{name} must be an int or exact-constant string")


def load_specfile(data) -> SpecFile:
    """Validate and load a spec document (dict or JSON text)."""
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise SpecFileError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise SpecFileError("spec document must be a JSON object")
    known = {"signature", "regime", "parameters", "finkelstein", "rep",
             "structure_overrides"}
    unknown = set(data) - known
    if unknown:
        raise SpecFileError(f"unknown spec fields: {sorted(unknown)}")

    sig_block = data.get("signature", {})
    try:
        sig = Signature(int(sig_block.get("eps4", 1)),
                        int(sig_block.get("eps5", 1)))
    except (TypeError, ValueError) as exc:
        raise SpecFileError(f"bad signature block: {exc}") from exc

    regime = data.get("regime", "full")
    if regime not in ("full", "tangent", "spacetime"):
        raise SpecFileError(f"unknown regime {regime!r}")

    bindings = {}
    for name, value in data.get("parameters", {}).items():
        if name not in PARAMS:
            raise SpecFileError(f"unknown parameter {name!r}")
        bindings[name] = _parse_binding(name, value)

    fink = None
    if "finkelstein" in data:
        blk = data["finkelstein"]
        try:
            fink = FinkelsteinParams(
                n_cells=int(blk.get("n_cells", blk.get("N", 2))),
                chi=_parse_exact_complex("chi", blk.get("chi", "1/2")),
                phi_cell=_parse_exact_complex(
                    "phi_cell", blk.get("phi_cell", "1/2")),
                hbar=Fraction(str(blk.get("hbar", 1))),
                enforce_constraint=bool(blk.get("enforce_constraint", True)))
        except ValueError as exc:
            raise SpecFileError(f"bad finkelstein block: {exc}") from exc

    rep_cfg = RepConfig()
    if "rep" in data:
        blk = data["rep"]
        rep_cfg = RepConfig(
            sigma=float(blk.get("sigma", 0.37)),
            epsilon=int(blk.get("epsilon", 0)),
            samples=int(blk.get("samples", 120)),
            seed=int(blk.get("seed", 0)),
            tolerance=float(blk.get("tolerance", 1e-8)))

    overrides = data.get("structure_overrides", {})
    if not isinstance(overrides, dict):
        raise SpecFileError("structure_overrides must be an object")

    return SpecFile(signature=sig, regime=regime, bindings=bindings,
                    finkelstein=fink, rep=rep_cfg,
                    structure_overrides=dict(overrides), raw=data)


def load_specfile_path(path: str) -> SpecFile:
    with open(path, "r", encoding="utf-8") as fh:
        return load_specfile(fh.read())
