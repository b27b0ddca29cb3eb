"""Extended generalized Reed-Solomon codes.

A code is defined by evaluation points gamma (n-1 distinct elements)
and nonzero column multipliers w (n elements); its parity check is the
extended Vandermonde-type matrix, giving an [n, n-r] MDS code.  Such a
code restricted to a position set T that keeps the extension position n
is again of the same family; the multipliers of the restricted code are
recovered by linear solving since no closed form is available.

Positions are 1-based throughout, matching codeword coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from . import linalg
from .errors import CorruptionError, InsufficientDataError, InternalError, UsageError
from .field import FieldSpec, GF
from .linalg import FieldMatrix


@dataclass(frozen=True)
class ExtGrsSpec:
    """An [n, n-r] extended GRS code over `field`."""

    field: FieldSpec
    n: int
    r: int
    gamma: tuple[int, ...]
    w: tuple[int, ...]

    def __post_init__(self):
        if not 0 < self.r < self.n:
            raise UsageError(f"need 0 < r < n, got r={self.r}, n={self.n}")
        if len(self.gamma) != self.n - 1:
            raise UsageError(f"gamma must have {self.n - 1} entries, got {len(self.gamma)}")
        if len(self.w) != self.n:
            raise UsageError(f"w must have {self.n} entries, got {len(self.w)}")
        for x in self.gamma:
            self.field.check(x)
        if len(set(self.gamma)) != len(self.gamma):
            raise UsageError("gamma entries must be pairwise distinct")
        for x in self.w:
            self.field.check(x)
            if x == 0:
                raise UsageError("w entries must be nonzero")

    @property
    def k(self) -> int:
        return self.n - self.r


@dataclass(frozen=True)
class Codeword:
    """A codeword together with the code it belongs to (None for plan-level outputs)."""

    symbols: tuple[int, ...]
    code: ExtGrsSpec | None = None


@lru_cache(maxsize=1024)
def parity_check(spec: ExtGrsSpec) -> FieldMatrix:
    """The r x n extended Vandermonde-type parity check matrix."""
    return linalg.vandermonde_ext(spec.field, spec.r, spec.n, spec.gamma, spec.w)


@lru_cache(maxsize=1024)
def generator(spec: ExtGrsSpec) -> FieldMatrix:
    """Deterministic k x n generator: the canonical kernel of the parity check."""
    return linalg.right_kernel_basis(parity_check(spec))


def encode(spec: ExtGrsSpec, message: Sequence[int]) -> Codeword:
    if len(message) != spec.k:
        raise UsageError(f"message must have k = {spec.k} symbols, got {len(message)}")
    for x in message:
        spec.field.check(x)
    return Codeword(linalg.vecmat(message, generator(spec)), spec)


def is_codeword(spec: ExtGrsSpec, symbols: Sequence[int]) -> bool:
    if len(symbols) != spec.n:
        return False
    for x in symbols:
        spec.field.check(x)
    return all(s == 0 for s in linalg.matvec(parity_check(spec), symbols))


def recover_erasures(spec: ExtGrsSpec, known: Mapping[int, int]) -> Codeword:
    """The unique codeword agreeing with `known` (position -> symbol, >= k entries).

    Solves the parity-check system for the erased positions; raises
    CorruptionError when the known symbols extend to no codeword.
    """
    for pos in known:
        if not 1 <= pos <= spec.n:
            raise UsageError(f"position {pos} out of range 1..{spec.n}")
    for val in known.values():
        spec.field.check(val)
    if len(known) < spec.k:
        raise InsufficientDataError(
            f"{len(known)} known symbols cannot determine a codeword of dimension {spec.k}"
        )
    f = spec.field
    h = parity_check(spec)
    erased = [p for p in range(1, spec.n + 1) if p not in known]
    rhs = [0] * spec.r
    for pos, val in known.items():
        if val == 0:
            continue
        col = h.col(pos - 1)
        rhs = [f.sub(acc, f.mul(val, c)) for acc, c in zip(rhs, col)]
    x = linalg.solve_linear(linalg.submatrix_cols(h, erased), rhs)
    if x is None:
        raise CorruptionError("known symbols are not a restriction of any codeword")
    symbols = [0] * spec.n
    for pos, val in known.items():
        symbols[pos - 1] = val
    for idx, pos in enumerate(erased):
        symbols[pos - 1] = x[idx]
    return Codeword(tuple(symbols), spec)


def puncture(spec: ExtGrsSpec, positions: Iterable[int]) -> ExtGrsSpec:
    """The code restricted to `positions`, which must include position n.

    The result has length |T|, redundancy r - (n - |T|), the restricted
    evaluation points, and multipliers recovered as the deterministic
    first solution of the linear system that places every row of the
    restricted parity check inside the dual of the restriction.
    """
    t = sorted(set(positions))
    for p in t:
        if not 1 <= p <= spec.n:
            raise UsageError(f"position {p} out of range 1..{spec.n}")
    if spec.n not in t:
        raise UsageError(f"restriction must keep the extension position {spec.n}")
    if len(t) <= spec.k:
        raise UsageError(f"restriction must keep more than k = {spec.k} positions")
    f = spec.field
    nt = len(t)
    rp = spec.r - (spec.n - nt)
    h = parity_check(spec)
    complement = [p for p in range(1, spec.n + 1) if p not in set(t)]
    if complement:
        coeffs = linalg.right_kernel_basis(linalg.transpose(linalg.submatrix_cols(h, complement)))
        dual = linalg.submatrix_cols(linalg.matmul(coeffs, h), t)
    else:
        dual = h
    if linalg.rank(dual) != rp:  # pragma: no cover - guaranteed by MDS structure
        raise InternalError("restricted dual has unexpected dimension")
    gamma_t = tuple(spec.gamma[p - 1] for p in t if p != spec.n)
    # Unknown multipliers theta_1..theta_|T|: each row of the candidate
    # parity check must be orthogonal to the kernel of the dual basis.
    kern = linalg.right_kernel_basis(dual)
    rows = []
    powers = [1] * (nt - 1)
    for ell in range(rp):
        for i in range(kern.rows):
            nu = kern.row(i)
            row = [f.mul(nu[j], powers[j]) for j in range(nt - 1)]
            row.append(nu[nt - 1] if ell == rp - 1 else 0)
            rows.append(row)
        if ell < rp - 1:
            powers = [f.mul(powers[j], gamma_t[j]) for j in range(nt - 1)]
    solutions = linalg.right_kernel_basis(linalg.from_rows(f, rows, cols=nt))
    if solutions.rows == 0:
        raise InternalError("no multiplier vector found for the restricted code")
    theta = solutions.row(0)
    if any(x == 0 for x in theta):
        raise InternalError("restricted-code multipliers are not all nonzero")
    scale = f.inv(theta[-1])
    theta = tuple(f.mul(scale, x) for x in theta)
    return ExtGrsSpec(f, nt, rp, gamma_t, theta)


# -- serialization ----------------------------------------------------------


def spec_to_dict(spec: ExtGrsSpec) -> dict:
    return {
        "q": spec.field.q,
        "p": spec.field.p,
        "m": spec.field.m,
        "n": spec.n,
        "r": spec.r,
        "gamma": list(spec.gamma),
        "w": list(spec.w),
    }


def spec_from_dict(doc: Mapping) -> ExtGrsSpec:
    try:
        q, p, m = int(doc["q"]), int(doc["p"]), int(doc["m"])
        n, r = int(doc["n"]), int(doc["r"])
        gamma = tuple(int(x) for x in doc["gamma"])
        w = tuple(int(x) for x in doc["w"])
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed code document: {exc}") from exc
    if p**m != q:
        raise UsageError(f"inconsistent field parameters q={q}, p={p}, m={m}")
    field = GF(q)
    if (field.p, field.m) != (p, m):
        raise UsageError(f"field parameters p={p}, m={m} are unsupported")
    return ExtGrsSpec(field, n, r, gamma, w)
