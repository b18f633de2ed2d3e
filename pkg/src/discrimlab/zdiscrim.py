"""Discriminating homomorphisms Z^n -> Z and their exact complexity.

The base-(2R+1) map theta(n, R) sends (t_1, ..., t_n) to
sum (2R+1)^(i-1) t_i and is a bijection from the box [-R, R]^n onto the
centered interval of the same cardinality, so it discriminates the
punctured box.  Its complexity (2R+1)^(n-1) is an upper bound for the
minimal discriminating complexity; a one-equation Siegel bound gives the
matching polynomial lower bound (R-n)^(n-1) / n^n.

All arithmetic is exact (python ints and Fractions); numpy is used only
to speed up exhaustive kernel searches over small integer boxes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Literal, Sequence

import numpy as np

from .errors import BudgetExceeded

DEFAULT_ENUM_BUDGET = 2_000_000

IntVector = tuple[int, ...]


@dataclass(frozen=True)
class ZnHom:
    """A homomorphism Z^n -> Z stored as its coefficient row."""

    coefficients: IntVector

    @property
    def n(self) -> int:
        return len(self.coefficients)

    @property
    def complexity(self) -> int:
        """Max generator-image length: max |c_i|."""
        return max(abs(c) for c in self.coefficients)

    def __call__(self, v: Sequence[int]) -> int:
        return apply(self, v)


@dataclass(frozen=True)
class BallSpec:
    """Shape of the finite set being discriminated.

    'l1' is the word-metric ball of Z^n with the standard basis; 'box' is
    [-R, R]^n.  The ball is contained in the box, so injectivity on the
    box implies discrimination of the ball.
    """

    shape: Literal["l1", "box"]
    radius: int

    def __post_init__(self):
        if self.shape not in ("l1", "box"):
            raise ValueError(f"unknown ball shape {self.shape!r}")
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")


def theta(n: int, R: int) -> ZnHom:
    """The base-(2R+1) discriminating map; theta(1, R) is the identity."""
    if n < 1:
        raise ValueError("n must be >= 1")
    base = 2 * R + 1
    return ZnHom(tuple(base**i for i in range(n)))


def scaled_theta(n: int, R: int, p: int) -> ZnHom:
    return ZnHom(tuple(p * c for c in theta(n, R).coefficients))


def apply(h: ZnHom, v: Sequence[int]) -> int:
    if len(v) != h.n:
        raise ValueError(f"dimension mismatch: hom is {h.n}-dim, vector is {len(v)}-dim")
    return sum(c * t for c, t in zip(h.coefficients, v))


def interval_half_width(n: int, R: int) -> int:
    """Half-width ((2R+1)^n - 1) / 2 of theta's image interval; always exact."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return ((2 * R + 1) ** n - 1) // 2


def box_points(n: int, R: int) -> Iterator[IntVector]:
    return itertools.product(range(-R, R + 1), repeat=n)


def ball_points(n: int, spec: BallSpec) -> list[IntVector]:
    R = spec.radius
    if spec.shape == "box":
        return list(box_points(n, R))
    return [v for v in box_points(n, R) if sum(abs(t) for t in v) <= R]


def verify_bijection(n: int, R: int, budget: int = DEFAULT_ENUM_BUDGET) -> bool:
    """Exhaustively check theta(n,R) maps [-R,R]^n one-to-one onto its interval."""
    count = (2 * R + 1) ** n
    if count > budget:
        raise BudgetExceeded(f"(2R+1)^n = {count} exceeds budget {budget}")
    h = theta(n, R)
    half = interval_half_width(n, R)
    seen = set()
    for v in box_points(n, R):
        img = apply(h, v)
        if abs(img) > half or img in seen:
            return False
        seen.add(img)
    return len(seen) == 2 * half + 1


def _shell_vectors(n: int, m: int) -> np.ndarray:
    """Vectors with max-norm exactly m, lex order, first nonzero entry positive."""
    rows = []
    for v in itertools.product(range(-m, m + 1), repeat=n):
        if max(abs(c) for c in v) != m:
            continue
        lead = next((c for c in v if c != 0), 0)
        if lead < 0:
            continue
        rows.append(v)
    return np.array(rows, dtype=np.int64)


@lru_cache(maxsize=64)
def _shell_vectors_cached(n: int, m: int) -> np.ndarray:
    return _shell_vectors(n, m)


def minimal_complexity(
    n: int, spec: BallSpec, budget: int = DEFAULT_ENUM_BUDGET
) -> tuple[int, ZnHom]:
    """Least complexity of a hom whose kernel misses the punctured ball, by brute force.

    Searches coefficient vectors in increasing max-norm shells up to the
    theta(n, R) ceiling, lex order within a shell, skipping sign-mirrored
    duplicates (negative leading coefficient).  The theta complexity is a
    valid search ceiling, so the scan always terminates with a witness.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return 1, ZnHom((1,))
    pts = [v for v in ball_points(n, spec) if any(v)]
    if not pts:
        return 1, ZnHom((1,) + (0,) * (n - 1))
    # kernel is symmetric under negation: keep one of each antipodal pair
    half = [v for v in pts if next(c for c in v if c != 0) > 0]
    pts_arr = np.array(half, dtype=np.int64)
    ceiling = theta(n, spec.radius).complexity
    searched = 0
    for m in range(1, ceiling + 1):
        shell = _shell_vectors_cached(n, m)
        searched += len(shell)
        if searched > budget:
            raise BudgetExceeded(f"coefficient search exceeded budget {budget}")
        if len(shell) == 0:
            continue
        images = pts_arr @ shell.T  # (points, candidates)
        ok = ~np.any(images == 0, axis=0)
        idx = np.flatnonzero(ok)
        if idx.size:
            witness = tuple(int(c) for c in shell[idx[0]])
            return m, ZnHom(witness)
    raise AssertionError("theta ceiling violated: no discriminating hom found")


def _integer_root_floor(x: int, k: int) -> int:
    """floor(x ** (1/k)) for nonnegative x, exact."""
    if x < 0:
        raise ValueError("x must be nonnegative")
    if x == 0:
        return 0
    r = int(round(x ** (1.0 / k)))
    while r**k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


def siegel_bound(n: int, B: int) -> int:
    """floor((nB)^(1/(n-1))): the one-equation small-kernel height bound."""
    if n < 2:
        raise ValueError("need at least two unknowns")
    return _integer_root_floor(n * B, n - 1)


def siegel_small_kernel(a: Sequence[int], B: int) -> IntVector:
    """A nonzero integer kernel vector of the row a within the Siegel height bound.

    Deterministic: increasing max-norm shells, lex order, positive
    leading entry.  Existence within the bound is the lemma; the search
    therefore never fails on valid input.
    """
    a = tuple(a)
    n = len(a)
    if n < 2:
        raise ValueError("need at least two unknowns")
    if not any(a):
        raise ValueError("a must be nonzero")
    if any(abs(c) > B for c in a):
        raise ValueError(f"entries of a must be bounded by B={B}")
    bound = siegel_bound(n, B)
    a_arr = np.array(a, dtype=np.int64)
    for m in range(1, bound + 1):
        shell = _shell_vectors_cached(n, m)
        if len(shell) == 0:
            continue
        dots = shell @ a_arr
        idx = np.flatnonzero(dots == 0)
        if idx.size:
            return tuple(int(c) for c in shell[idx[0]])
    raise AssertionError(
        f"Siegel bound violated: no kernel vector of height <= {bound} for {a}"
    )


def lower_bound_value(n: int, R: int) -> Fraction:
    """(R-n)^(n-1) / n^n, the Siegel lower bound; vacuous when <= 0."""
    if n < 2:
        raise ValueError("the Siegel argument needs n >= 2")
    return Fraction((R - n) ** (n - 1), n**n)
