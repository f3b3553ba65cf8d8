"""Instance files and JSON reports.

An instance file is a JSON object in one of two forms::

    {"q": [...], "z": [...], "K": ...}     # LP form
    {"q": [...], "B": ..., "C": ...}       # mechanism form

Numbers may be JSON numbers or strings holding a decimal or a ratio such as
``"4/3"``.  Everything is parsed to :class:`fractions.Fraction` first, so
the oracle sees exactly what was written; the float solvers see the nearest
doubles.  ``name`` and ``seed`` are optional metadata.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import InvalidInstance
from .model import LpInstance, validate
from .oracle import RationalInstance
from .reduction import MechanismInstance

SCHEMA_VERSION = 1
LP_KEYS = frozenset({"q", "z", "K"})
MECHANISM_KEYS = frozenset({"q", "B", "C"})
META_KEYS = frozenset({"name", "seed"})


def parse_number(value) -> Fraction:
    if isinstance(value, bool):
        raise InvalidInstance(f"expected a number, got {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInstance(f"cannot parse number {value!r}") from exc
    raise InvalidInstance(f"expected a number, got {type(value).__name__}")


def _parse_vector(value, key) -> list[Fraction]:
    if not isinstance(value, list):
        raise InvalidInstance(f"{key!r} must be a list")
    return [parse_number(v) for v in value]


@dataclass(frozen=True)
class InstanceFile:
    """A parsed instance.  ``kind`` is ``"lp"`` or ``"mechanism"``."""

    kind: str
    q: tuple[Fraction, ...]
    z: tuple[Fraction, ...] | None = None
    K: Fraction | None = None
    B: Fraction | None = None
    C: Fraction | None = None
    name: str | None = None
    seed: int | None = None

    @property
    def n(self) -> int:
        return len(self.q)

    def mechanism(self) -> MechanismInstance:
        if self.kind != "mechanism":
            raise InvalidInstance("this command needs a mechanism-form instance (q, B, C)")
        return MechanismInstance.create([float(v) for v in self.q], float(self.B), float(self.C))

    def lp(self) -> LpInstance:
        if self.kind == "lp":
            return validate([float(v) for v in self.q], [float(v) for v in self.z], float(self.K))
        from .reduction import to_lp

        return to_lp(self.mechanism())

    def rational(self) -> RationalInstance:
        """Exact LP; mechanism types are sorted exactly before reducing."""
        if self.kind == "lp":
            return RationalInstance.create(self.q, self.z, self.K)
        if any(v <= 0 for v in self.q):
            raise InvalidInstance("agent types must be positive")
        return RationalInstance.from_mechanism(sorted(self.q), self.B, self.C)

    def to_json(self) -> dict:
        out: dict = {}
        if self.name is not None:
            out["name"] = self.name
        if self.seed is not None:
            out["seed"] = self.seed
        out["q"] = [_fraction_text(v) for v in self.q]
        if self.kind == "lp":
            out["z"] = [_fraction_text(v) for v in self.z]
            out["K"] = _fraction_text(self.K)
        else:
            out["B"] = _fraction_text(self.B)
            out["C"] = _fraction_text(self.C)
        return out


def _fraction_text(v: Fraction):
    return int(v) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def parse_instance(data) -> InstanceFile:
    if not isinstance(data, dict):
        raise InvalidInstance("instance file must hold a JSON object")
    keys = set(data) - META_KEYS
    if keys == LP_KEYS:
        kind = "lp"
    elif keys == MECHANISM_KEYS:
        kind = "mechanism"
    else:
        raise InvalidInstance(
            f"expected keys {sorted(LP_KEYS)} or {sorted(MECHANISM_KEYS)}, got {sorted(keys)}"
        )
    q = tuple(_parse_vector(data["q"], "q"))
    if not q:
        raise InvalidInstance("q must not be empty")
    name = data.get("name")
    seed = data.get("seed")
    if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int)):
        raise InvalidInstance("seed must be an integer")
    if kind == "lp":
        z = tuple(_parse_vector(data["z"], "z"))
        inst = InstanceFile("lp", q, z=z, K=parse_number(data["K"]), name=name, seed=seed)
    else:
        inst = InstanceFile(
            "mechanism", q, B=parse_number(data["B"]), C=parse_number(data["C"]), name=name, seed=seed
        )
    return inst


def load_instance(path) -> InstanceFile:
    text = Path(path).read_text()
    try:
        # keep JSON decimals exact: "0.1" becomes 1/10, not the nearest double
        data = json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise InvalidInstance(f"{path}: not valid JSON ({exc.msg} at line {exc.lineno})") from exc
    return parse_instance(data)


def save_instance(inst: InstanceFile, path) -> None:
    Path(path).write_text(json.dumps(inst.to_json(), indent=2) + "\n")


def _plain(value):
    """Convert numpy scalars/arrays and Fractions to JSON-ready Python values."""
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating, Fraction)):
        return float(value)
    return value


def dump_report(report: dict) -> str:
    """Serialise a report; floats use the shortest repr that round-trips."""
    body = {"schema_version": SCHEMA_VERSION, **_plain(report)}
    return json.dumps(body, indent=2, allow_nan=False) + "\n"


def write_report(report: dict, path=None, stream=None) -> None:
    text = dump_report(report)
    if path is None:
        stream.write(text)
    else:
        Path(path).write_text(text)
