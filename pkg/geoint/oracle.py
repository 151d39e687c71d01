"""
Ansatz oracle
Lower bound on the dimension of the space of degree-n integrals: every
coefficient of the integral is a combination of Laurent monomials x^a y^b,
{H, F} = 0 is coefficient-matched after clearing denominators, and the
kernel of the resulting rational matrix is computed exactly.
"""

import time
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import sympy
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from geoint.errors import InputError
from geoint.expr import TriState, ZeroPolicy, coordinate, is_rational_in, simplify
from geoint.geometry import Metric2D
from geoint.symplectic import MomentaPolynomial, combine_states, flow_pde_system, is_first_integral
from geoint.utils.logging import get_logger

logger = get_logger()

MAX_DEGREE = 5


@dataclass(frozen=True)
class AnsatzSpec:
    """Exponent range per coordinate; negative lower bounds allow Laurent terms."""

    ranges: Tuple[Tuple[str, int, int], ...] = (("x", 0, 3), ("y", 0, 3))
    total_degree: Optional[int] = None
    max_basis: int = 400

    def __post_init__(self):
        object.__setattr__(self, "ranges", tuple((str(n), int(lo), int(hi)) for n, lo, hi in self.ranges))
        if len(self.ranges) != 2:
            raise InputError("an ansatz needs one exponent range per coordinate")
        for name, lo, hi in self.ranges:
            if lo > hi:
                raise InputError(f"empty exponent range for {name}: {lo}..{hi}")
        if self.max_basis < 1:
            raise InputError("ansatz basis cap must be positive")

    @classmethod
    def polynomial(cls, degree: int, coordinates: Tuple[str, str] = ("x", "y"), **kwargs: Any) -> "AnsatzSpec":
        """All monomials of total degree at most `degree`."""
        return cls(tuple((name, 0, degree) for name in coordinates), total_degree=degree, **kwargs)

    @property
    def coordinates(self) -> Tuple[str, str]:
        return self.ranges[0][0], self.ranges[1][0]

    def exponents(self) -> List[Tuple[int, int]]:
        (_, xlo, xhi), (_, ylo, yhi) = self.ranges
        pairs = [(a, b) for a in range(xlo, xhi + 1) for b in range(ylo, yhi + 1)]
        if self.total_degree is not None:
            pairs = [(a, b) for a, b in pairs if a + b <= self.total_degree]
        return pairs

    def monomials(self) -> List[sympy.Expr]:
        x, y = (coordinate(name) for name in self.coordinates)
        return [x**a * y**b for a, b in self.exponents()]

    def enlarged(self, by: int = 1) -> "AnsatzSpec":
        ranges = tuple((name, lo - by if lo < 0 else lo, hi + by) for name, lo, hi in self.ranges)
        total = None if self.total_degree is None else self.total_degree + by
        return AnsatzSpec(ranges, total, self.max_basis)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {name: f"{lo}:{hi}" for name, lo, hi in self.ranges}
        if self.total_degree is not None:
            data["total_degree"] = self.total_degree
        data["max_basis"] = self.max_basis
        return data


@dataclass(frozen=True)
class DimensionResult:
    degree: int
    dimension: int
    basis: Tuple[MomentaPolynomial, ...]
    rows: int
    cols: int
    rank: int
    seconds: float = 0.0

    def verify(self, g: Metric2D, policy: ZeroPolicy) -> TriState:
        """Every basis element must Poisson-commute with H."""
        return combine_states([is_first_integral(g, F, policy) for F in self.basis])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "degree": self.degree,
            "dimension": self.dimension,
            "matrix": [self.rows, self.cols],
            "rank": self.rank,
            "basis": [[list(entry) for entry in F.to_entries()] for F in self.basis],
        }


def _check_rational(g: Metric2D) -> None:
    symbols = g.symbols
    for entry in (g.g11, g.g12, g.g22):
        if not is_rational_in(entry, symbols):
            raise InputError("the ansatz oracle needs metric entries rational in the coordinates")
        extra = {s.name for s in entry.free_symbols} - set(g.coordinates)
        if extra:
            raise InputError(f"the ansatz oracle needs numeric parameters, found {sorted(extra)}")


def _primitive(vector: List[sympy.Rational]) -> List[sympy.Integer]:
    """Scale a rational vector to coprime integers with a positive leading entry."""
    denominators = sympy.ilcm(1, *[v.q for v in vector if v != 0] or [1])
    integers = [int(v * denominators) for v in vector]
    content = sympy.igcd(0, *[i for i in integers if i != 0] or [1])
    lead = next((i for i in integers if i != 0), 1)
    sign = -1 if lead < 0 else 1
    return [sympy.Integer(sign * i // content) for i in integers]


def integral_space_dimension(g: Metric2D, n: int, spec: AnsatzSpec) -> DimensionResult:
    """
    Exact kernel of the coefficient-matched system {H, F} = 0 over the ansatz

    Args:
        g: metric with entries rational in the coordinates
        n: degree of the integrals in the momenta
        spec: monomial ansatz for each coefficient

    Returns:
        DimensionResult; the dimension is a lower bound for dim of the integral space
    """
    if not 1 <= n <= MAX_DEGREE:
        raise InputError(f"oracle degree must be between 1 and {MAX_DEGREE}, got {n}")
    if spec.coordinates != g.coordinates:
        raise InputError(f"ansatz coordinates {spec.coordinates} differ from metric's {g.coordinates}")
    _check_rational(g)
    started = time.perf_counter()

    monomials = spec.monomials()
    columns = [(k, m) for k in range(n + 1) for m in monomials]
    if len(columns) > spec.max_basis:
        raise InputError(
            f"ansatz has {len(columns)} unknowns, above the cap of {spec.max_basis}"
        )

    system = flow_pde_system(g, n)
    symbols = system.symbols
    x, y = symbols

    # column c, equation e -> (numerator, denominator)
    entries: List[List[Tuple[sympy.Expr, sympy.Expr]]] = []
    for k, monomial in columns:
        column = []
        for row in system.operators:
            value = sympy.cancel(row[k].apply(monomial, symbols))
            column.append(sympy.fraction(value))
        entries.append(column)

    matrix_rows: List[List[sympy.Rational]] = []
    for e in range(n + 2):
        denominators = [entries[c][e][1] for c in range(len(columns)) if entries[c][e][0] != 0]
        if not denominators:
            continue
        common = sympy.lcm_list(denominators) if len(denominators) > 1 else denominators[0]
        by_monomial: Dict[Tuple[int, int], Dict[int, sympy.Rational]] = {}
        for c in range(len(columns)):
            numerator, denominator = entries[c][e]
            if numerator == 0:
                continue
            cleared = sympy.cancel(numerator * common / denominator)
            poly = sympy.Poly(cleared, x, y)
            for exponents, coefficient in poly.terms():
                if not coefficient.is_Rational:
                    raise InputError(f"the ansatz oracle needs rational constants, found {coefficient}")
                by_monomial.setdefault(exponents, {})[c] = sympy.Rational(coefficient)
        for exponents in sorted(by_monomial):
            row = [sympy.Integer(0)] * len(columns)
            for c, coefficient in by_monomial[exponents].items():
                row[c] = coefficient
            matrix_rows.append(row)

    cols = len(columns)
    if matrix_rows:
        matrix = DomainMatrix.from_list_sympy(len(matrix_rows), cols, matrix_rows).convert_to(QQ)
        rank = matrix.rank()
        kernel = matrix.nullspace().to_Matrix()
        vectors = [list(kernel.row(i)) for i in range(kernel.rows)]
    else:
        rank = 0
        vectors = [[sympy.Integer(1) if i == j else sympy.Integer(0) for i in range(cols)] for j in range(cols)]
    logger.log_elimination(len(matrix_rows), cols, rank)

    basis = []
    for vector in vectors:
        vector = _primitive([sympy.Rational(v) for v in vector])
        coefficients: Dict[Tuple[int, int], sympy.Expr] = {}
        for (k, monomial), weight in zip(columns, vector):
            if weight != 0:
                key = (n - k, k)
                coefficients[key] = coefficients.get(key, sympy.Integer(0)) + weight * monomial
        basis.append(
            MomentaPolynomial(n, {key: simplify(value) for key, value in coefficients.items()}, g.coordinates)
        )

    return DimensionResult(
        degree=n,
        dimension=cols - rank,
        basis=tuple(basis),
        rows=len(matrix_rows),
        cols=cols,
        rank=rank,
        seconds=time.perf_counter() - started,
    )


def proposition_bound(n: int) -> int:
    """Largest dimension of degree-n integrals once the curvature is nonconstant."""
    return (n * n + 3 * n) // 2 - 1


def flat_dimension(n: int) -> int:
    return (n + 1) * (n + 2) // 2
