"""
Formula data
Large invariant relations stored as text, one file per named formula. Each
file is a sum of terms over the invariant symbols I2..I7f and the imaginary
unit i; lines starting with # are comments. Files are pinned by SHA-256
digests in data/SHA256SUMS.
"""

import hashlib
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Dict, Tuple

import sympy

from geoint.errors import GeointError
from geoint.expr import Expr, parse, to_text
from geoint.invariants import INVARIANT_NAMES, INVARIANT_SYMBOLS, rescale_weight, sgrad_slots

DATA_DIR = Path(__file__).parent / "data"
CHECKSUM_FILE = DATA_DIR / "SHA256SUMS"
FORMULA_NAMES = (
    "I6a_rel",
    "I6b_rel",
    "I6c_rel",
    "I6d_rel",
    "Jfrak1",
    "Jfrak2",
    "Jfrak3",
    "Jfrak4",
)


class FormulaIntegrityError(GeointError):
    """Formula file missing or not matching its pinned digest"""


@lru_cache(maxsize=None)
def pinned_digests() -> Dict[str, str]:
    digests = {}
    for line in CHECKSUM_FILE.read_text(encoding="utf-8").splitlines():
        if line.strip():
            digest, filename = line.split()
            digests[filename] = digest
    return digests


def formula_path(name: str) -> Path:
    if name not in FORMULA_NAMES:
        raise FormulaIntegrityError(f"unknown formula {name!r}")
    return DATA_DIR / f"{name}.txt"


def formula_text(name: str) -> str:
    """Verified file content with comments removed and lines joined."""
    path = formula_path(name)
    if not path.exists():
        raise FormulaIntegrityError(f"formula file {path} is missing")
    raw = path.read_bytes()
    digest = hashlib.sha256(raw).hexdigest()
    expected = pinned_digests().get(path.name)
    if digest != expected:
        raise FormulaIntegrityError(
            f"{path.name} does not match its pinned digest ({digest} != {expected})"
        )
    lines = raw.decode("utf-8").splitlines()
    return " ".join(line.strip() for line in lines if line.strip() and not line.lstrip().startswith("#"))


@lru_cache(maxsize=None)
def load_formula(name: str) -> Expr:
    return parse(formula_text(name), coordinates=(), parameters=INVARIANT_NAMES)


@dataclass(frozen=True)
class FormulaStructure:
    name: str
    terms: int
    degree: int
    weights: Tuple[int, ...]
    parities: Tuple[int, ...]
    coefficient_hash: str

    @property
    def homogeneous(self) -> bool:
        return len(self.weights) == 1

    @property
    def parity_consistent(self) -> bool:
        return len(self.parities) == 1

    def to_dict(self) -> Dict[str, object]:
        return {
            "terms": self.terms,
            "degree": self.degree,
            "weight": list(self.weights),
            "parity": list(self.parities),
            "hash": self.coefficient_hash,
        }


def monomial_terms(e: Expr) -> Dict[Tuple[Tuple[str, int], ...], Expr]:
    """Expanded polynomial as {((symbol, exponent), ...): Gaussian-rational coefficient}."""
    terms: Dict[Tuple[Tuple[str, int], ...], Expr] = {}
    for term in sympy.Add.make_args(sympy.expand(e)):
        coefficient, rest = term.as_coeff_Mul()
        powers = rest.as_powers_dict()
        imaginary = int(powers.pop(sympy.I, 0))
        coefficient = coefficient * sympy.I**imaginary
        key = tuple(sorted((symbol.name, int(exponent)) for symbol, exponent in powers.items() if symbol != 1))
        terms[key] = terms.get(key, sympy.Integer(0)) + coefficient
    return {key: value for key, value in terms.items() if value != 0}


@lru_cache(maxsize=None)
def formula_structure(name: str) -> FormulaStructure:
    """
    Structural checksum of a formula: term count, total degree, the set of
    rescale weights and of parities over its terms, and a hash of the
    coefficients. Parity counts i factors plus odd-j invariant factors.
    """
    terms = monomial_terms(load_formula(name))
    weights, parities = set(), set()
    degree = 0
    lines = []
    for key, coefficient in sorted(terms.items()):
        degree = max(degree, sum(exponent for _, exponent in key))
        weights.add(sum(rescale_weight(symbol) * exponent for symbol, exponent in key))
        odd = sum(exponent for symbol, exponent in key if sgrad_slots(symbol) % 2 == 1)
        imaginary = 0 if sympy.im(coefficient) == 0 else 1
        parities.add((odd + imaginary) % 2)
        monomial = "*".join(f"{symbol}^{exponent}" for symbol, exponent in key) or "1"
        lines.append(f"{monomial}:{to_text(coefficient)}")
    digest = hashlib.sha256("\n".join(lines).encode("utf-8")).hexdigest()[:16]
    return FormulaStructure(
        name, len(terms), degree, tuple(sorted(weights)), tuple(sorted(parities)), digest
    )


def formula_symbols(name: str) -> Tuple[str, ...]:
    used = {symbol.name for symbol in load_formula(name).free_symbols}
    return tuple(symbol for symbol in INVARIANT_SYMBOLS if symbol in used)


def all_structures() -> Dict[str, FormulaStructure]:
    return {name: formula_structure(name) for name in FORMULA_NAMES}
