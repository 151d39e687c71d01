"""
Metric configuration files
Flat `key = value` text describing a metric, its domain box and how zero
tests and the oracle ansatz are set up. Grammar: docs/formats.md.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import sympy

from geoint.errors import InputError
from geoint.expr import EvaluationMode, ExprError, ZeroPolicy, parse
from geoint.geometry import Metric2D, Signature
from geoint.oracle import AnsatzSpec

SCALAR_KEYS = {"coordinates", "g11", "g12", "g22", "orientation", "signature"}
ZERO_KEYS = {"mode", "samples", "seed", "tolerance", "precision", "denominator", "max_rejections"}
ANSATZ_KEYS = {"max_basis", "total_degree"}


def _rational(text: str, key: str) -> sympy.Rational:
    try:
        value = parse(text, coordinates=())
    except ExprError as exc:
        raise InputError(f"{key}: {exc}")
    if not value.is_Rational:
        raise InputError(f"{key} must be an exact rational, got {text!r}")
    return value


def _integer(text: str, key: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise InputError(f"{key} must be an integer, got {text!r}")


def _pair(text: str, key: str, convert) -> Tuple[Any, Any]:
    separator = ":" if ":" in text else ","
    parts = [part.strip() for part in text.split(separator)]
    if len(parts) != 2:
        raise InputError(f"{key} needs two values 'lo, hi', got {text!r}")
    return convert(parts[0], key), convert(parts[1], key)


def parse_ansatz_ranges(text: str) -> Dict[str, Tuple[int, int]]:
    """`x=-2:2,y=0:4` as {coordinate: (lo, hi)}"""
    ranges = {}
    for item in filter(None, (part.strip() for part in text.split(","))):
        if "=" not in item:
            raise InputError(f"ansatz range {item!r} must look like name=lo:hi")
        name, value = (side.strip() for side in item.split("=", 1))
        ranges[name] = _pair(value.replace(",", ":"), f"ansatz.{name}", _integer)
    return ranges


@dataclass
class MetricConfig:
    g11: str
    g22: str
    g12: str = "0"
    coordinates: Tuple[str, str] = ("x", "y")
    parameters: Dict[str, sympy.Rational] = field(default_factory=dict)
    box: Dict[str, Tuple[sympy.Rational, sympy.Rational]] = field(default_factory=dict)
    orientation: int = 1
    signature: str = Signature.RIEMANNIAN.value
    zero: Dict[str, str] = field(default_factory=dict)
    ansatz: Dict[str, Tuple[int, int]] = field(default_factory=dict)
    ansatz_options: Dict[str, int] = field(default_factory=dict)
    source: str = "<string>"

    @classmethod
    def parse(cls, text: str, source: str = "<string>") -> "MetricConfig":
        values: Dict[str, str] = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise InputError(f"{source}:{lineno}: expected 'key = value', got {line!r}")
            key, value = (side.strip() for side in line.split("=", 1))
            if len(value) >= 2 and value[0] == value[-1] and value[0] in "\"'":
                value = value[1:-1]
            if key in values:
                raise InputError(f"{source}:{lineno}: duplicate key {key}")
            values[key] = value

        for required in ("g11", "g22"):
            if required not in values:
                raise InputError(f"{source}: missing key {required}")

        config = cls(values["g11"], values["g22"], source=source)
        for key, value in values.items():
            head, _, tail = key.partition(".")
            if key in SCALAR_KEYS:
                config._set_scalar(key, value)
            elif head == "param" and tail:
                config.parameters[tail] = _rational(value, key)
            elif head == "box" and tail:
                config.box[tail] = _pair(value, key, _rational)
            elif head == "zero" and tail in ZERO_KEYS:
                config.zero[tail] = value
            elif head == "ansatz" and tail in ANSATZ_KEYS:
                config.ansatz_options[tail] = _integer(value, key)
            elif head == "ansatz" and tail:
                config.ansatz[tail] = _pair(value, key, _integer)
            else:
                raise InputError(f"{source}: unknown key {key}")
        config._check_names()
        return config

    @classmethod
    def load(cls, path: Path) -> "MetricConfig":
        if not path.exists():
            raise InputError(f"config file {path} does not exist")
        return cls.parse(path.read_text(encoding="utf-8"), str(path))

    def _set_scalar(self, key: str, value: str) -> None:
        if key == "coordinates":
            names = tuple(part.strip() for part in value.split(","))
            if len(names) != 2 or not all(name.isidentifier() for name in names):
                raise InputError(f"coordinates must be two names, got {value!r}")
            self.coordinates = names  # type: ignore
        elif key == "orientation":
            if value not in ("1", "-1"):
                raise InputError(f"orientation must be 1 or -1, got {value!r}")
            self.orientation = int(value)
        elif key == "signature":
            if value not in {s.value for s in Signature}:
                raise InputError(f"signature must be riemannian or lorentzian, got {value!r}")
            self.signature = value
        else:
            setattr(self, key, value)

    def _check_names(self) -> None:
        for name in list(self.box) + list(self.ansatz):
            if name not in self.coordinates:
                raise InputError(f"{self.source}: {name} is not a coordinate")
        clash = set(self.parameters) & set(self.coordinates)
        if clash:
            raise InputError(f"{self.source}: parameters {sorted(clash)} clash with coordinates")

    def _entry(self, text: str) -> sympy.Expr:
        e = parse(text, self.coordinates, self.parameters)
        return e.subs({sympy.Symbol(name, real=True): value for name, value in self.parameters.items()})

    def metric(self) -> Metric2D:
        return Metric2D(
            self._entry(self.g11),
            self._entry(self.g12),
            self._entry(self.g22),
            self.coordinates,
            self.orientation,
            Signature(self.signature),
        )

    def policy(self, **overrides: Any) -> ZeroPolicy:
        values: Dict[str, Any] = {}
        if self.box:
            values["box"] = tuple((name, *self.box.get(name, (1, 2))) for name in self.coordinates)
        converters = {
            "mode": EvaluationMode,
            "tolerance": float,
        }
        for key, text in self.zero.items():
            try:
                values[key] = converters.get(key, int)(text)
            except ValueError:
                raise InputError(f"zero.{key}: invalid value {text!r}")
        values.update({key: value for key, value in overrides.items() if value is not None})
        return ZeroPolicy.from_settings(self.coordinates, **values)

    def ansatz_spec(
        self,
        degree: int,
        ranges: Optional[Dict[str, Tuple[int, int]]] = None,
        max_basis: Optional[int] = None,
    ) -> AnsatzSpec:
        """Configured ranges, overridden per coordinate; default is polynomials of total degree <= degree."""
        from geoint.config import cfg

        merged = dict(self.ansatz)
        merged.update(ranges or {})
        for name in merged:
            if name not in self.coordinates:
                raise InputError(f"ansatz range for unknown coordinate {name}")
        cap = max_basis or self.ansatz_options.get("max_basis") or cfg.get_int("GEOINT_MAX_BASIS")
        total = self.ansatz_options.get("total_degree")
        if not merged:
            return AnsatzSpec.polynomial(degree, self.coordinates, max_basis=cap)
        spec = tuple((name, *merged.get(name, (0, degree))) for name in self.coordinates)
        return AnsatzSpec(spec, total, cap)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "source": self.source,
            "coordinates": ", ".join(self.coordinates),
            "g11": self.g11,
            "g12": self.g12,
            "g22": self.g22,
        }
        if self.parameters:
            data["param"] = {name: str(value) for name, value in self.parameters.items()}
        if self.orientation != 1:
            data["orientation"] = self.orientation
        if self.signature != Signature.RIEMANNIAN.value:
            data["signature"] = self.signature
        return data
