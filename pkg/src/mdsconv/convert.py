"""Generalized convertible codes over extended GRS codes.

A conversion turns t1 initial codewords into t2 final codewords carrying
the same message.  Each final code keeps some initial symbols verbatim
(unchanged), reads some initial symbols, and computes the rest (written).
This module provides the access-cost lower bounds for the merge (t2 = 1)
and split (t1 = 1) regimes, builders for access-optimal merge and split
plans, plan execution, the structural optimality check for merge plans,
and access accounting with a per-device trace.

Code indices and codeword positions are 1-based, as in plan documents;
written blocks use code index t1 + j for final code j.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import linalg, oracle
from .errors import CorruptionError, InternalError, ParameterError, UsageError
from .field import FieldSpec
from .grs import Codeword, ExtGrsSpec, is_codeword, parity_check, puncture, recover_erasures
from .linalg import FieldMatrix

SymbolId = tuple[int, int]


# -- parameters and bounds -------------------------------------------------


@dataclass(frozen=True)
class ConvertParams:
    """Shapes of a conversion: (n, k) per initial and per final code."""

    initial: tuple[tuple[int, int], ...]
    final: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "initial", tuple((int(n), int(k)) for n, k in self.initial))
        object.__setattr__(self, "final", tuple((int(n), int(k)) for n, k in self.final))
        if not self.initial or not self.final:
            raise UsageError("need at least one initial and one final code")
        for n, k in self.initial + self.final:
            if not 0 < k < n:
                raise UsageError(f"every code needs 0 < k < n, got (n, k) = ({n}, {k})")
        if sum(k for _, k in self.initial) != sum(k for _, k in self.final):
            raise UsageError(
                "total dimension mismatch: initial codes carry "
                f"{sum(k for _, k in self.initial)} message symbols, final codes "
                f"{sum(k for _, k in self.final)}"
            )

    @property
    def t1(self) -> int:
        return len(self.initial)

    @property
    def t2(self) -> int:
        return len(self.final)

    @property
    def n_initial(self) -> tuple[int, ...]:
        return tuple(n for n, _ in self.initial)

    @property
    def k_initial(self) -> tuple[int, ...]:
        return tuple(k for _, k in self.initial)

    @property
    def r_initial(self) -> tuple[int, ...]:
        return tuple(n - k for n, k in self.initial)

    @property
    def n_final(self) -> tuple[int, ...]:
        return tuple(n for n, _ in self.final)

    @property
    def k_final(self) -> tuple[int, ...]:
        return tuple(k for _, k in self.final)

    @property
    def r_final(self) -> tuple[int, ...]:
        return tuple(n - k for n, k in self.final)

    @property
    def total_dimension(self) -> int:
        return sum(self.k_initial)


def reduced_read_codes(params: ConvertParams) -> frozenset[int]:
    """Initial codes a merge can convert by reading only r_F symbols.

    Code i qualifies when r_F < k_I(i) and r_F <= r_I(i): reading r_F
    symbols beats the default approach and the code is long enough to
    keep its unchanged symbols disjoint from the read ones.
    """
    if params.t2 != 1:
        raise UsageError("reduced-read classification applies to merge parameters (t2 = 1)")
    rf = params.r_final[0]
    return frozenset(
        i
        for i in range(1, params.t1 + 1)
        if rf < params.k_initial[i - 1] and rf <= params.r_initial[i - 1]
    )


@dataclass(frozen=True)
class MergeBound:
    """Per-initial-code read minimums and the total access-cost bound."""

    per_code_reads: tuple[int, ...]
    rho: int


def merge_lower_bound(params: ConvertParams) -> MergeBound:
    """Access-cost lower bound for a merge (t2 = 1).

    Each initial code must be read at least r_F times when
    r_F <= min(k_I, r_I) and k_I times otherwise; the write cost adds r_F.
    """
    if params.t2 != 1:
        raise UsageError("merge bound applies to t2 = 1")
    rf = params.r_final[0]
    reads = tuple(
        rf if rf <= min(k, r) else k
        for k, r in zip(params.k_initial, params.r_initial)
    )
    return MergeBound(reads, rf + sum(reads))


@dataclass(frozen=True)
class SplitBound:
    """Read bound, total access-cost bound, and the feasible final indices."""

    rho_r: int
    rho: int
    feasible: tuple[int, ...]


def split_lower_bound(params: ConvertParams) -> SplitBound:
    """Access-cost lower bound for a split (t1 = 1).

    Final code j is feasible when r_F(j) <= min(k_F(j), r_I); the read
    bound is k_I minus the best feasible savings k_F(j) - r_F(j), floored
    at zero savings, and the write cost adds every r_F(j).
    """
    if params.t1 != 1:
        raise UsageError("split bound applies to t1 = 1")
    ri = params.r_initial[0]
    ki = params.k_initial[0]
    feasible = tuple(
        j
        for j in range(1, params.t2 + 1)
        if params.r_final[j - 1] <= min(params.k_final[j - 1], ri)
    )
    savings = max(
        [0] + [params.k_final[j - 1] - params.r_final[j - 1] for j in feasible]
    )
    rho_r = ki - savings
    return SplitBound(rho_r, rho_r + sum(params.r_final), feasible)


# -- plans -------------------------------------------------------------------


def _check_positions(label: str, positions: Sequence[int], n: int) -> None:
    if list(positions) != sorted(set(positions)):
        raise UsageError(f"{label}: positions must be strictly ascending")
    for p in positions:
        if not 1 <= p <= n:
            raise UsageError(f"{label}: position {p} out of range 1..{n}")


@dataclass(frozen=True)
class MergePlan:
    """An executable merge conversion (t2 = 1).

    `unchanged` and `reads` hold ascending positions per initial code.
    `punctured_parity[i-1]` is set for i in `reduced`: the parity check of
    initial code i restricted to its unchanged + read positions, columns
    ordered by ascending position.  `final_unchanged_blocks[i-1]` is set
    for i outside `reduced`: the final parity-check columns of code i's
    unchanged block.  `final_written_block` holds the final parity-check
    columns of the written positions.
    """

    params: ConvertParams
    field: FieldSpec
    initial_specs: tuple[ExtGrsSpec, ...]
    final_spec: ExtGrsSpec
    reduced: frozenset[int]
    unchanged: tuple[tuple[int, ...], ...]
    reads: tuple[tuple[int, ...], ...]
    punctured_parity: tuple[FieldMatrix | None, ...]
    final_unchanged_blocks: tuple[FieldMatrix | None, ...]
    final_written_block: FieldMatrix

    def __post_init__(self):
        p = self.params
        if p.t2 != 1:
            raise UsageError("merge plan requires exactly one final code")
        t1 = p.t1
        for name, seq in (
            ("initial_specs", self.initial_specs),
            ("unchanged", self.unchanged),
            ("reads", self.reads),
            ("punctured_parity", self.punctured_parity),
            ("final_unchanged_blocks", self.final_unchanged_blocks),
        ):
            if len(seq) != t1:
                raise UsageError(f"{name} must have one entry per initial code")
        for i in range(1, t1 + 1):
            spec = self.initial_specs[i - 1]
            n, k = p.initial[i - 1]
            if (spec.n, spec.k) != (n, k) or spec.field != self.field:
                raise UsageError(f"initial code {i} does not match its declared shape")
            _check_positions(f"unchanged[{i}]", self.unchanged[i - 1], n)
            _check_positions(f"reads[{i}]", self.reads[i - 1], n)
            if len(self.unchanged[i - 1]) > k:
                raise UsageError(
                    f"code {i} keeps {len(self.unchanged[i - 1])} unchanged symbols; "
                    f"an MDS conversion allows at most k = {k}"
                )
            if (self.punctured_parity[i - 1] is None) == (i in self.reduced):
                raise UsageError(f"punctured parity must be present exactly for codes in S (code {i})")
            if (self.final_unchanged_blocks[i - 1] is None) == (i not in self.reduced):
                raise UsageError(f"final-code blocks must be present exactly for codes outside S (code {i})")
        nf, kf = p.final[0]
        if (self.final_spec.n, self.final_spec.k) != (nf, kf) or self.final_spec.field != self.field:
            raise UsageError("final code does not match its declared shape")
        if self.written_count < 0:
            raise UsageError("more unchanged symbols than final positions")

    @property
    def written_count(self) -> int:
        return self.final_spec.n - sum(len(u) for u in self.unchanged)

    def support(self, i: int) -> tuple[int, ...]:
        """Ascending unchanged + read positions of initial code i."""
        return tuple(sorted(set(self.unchanged[i - 1]) | set(self.reads[i - 1])))

    def final_layout(self) -> tuple[SymbolId, ...]:
        """Final coordinates: unchanged blocks in code order, then written symbols."""
        ids = [
            (i, pos)
            for i in range(1, self.params.t1 + 1)
            for pos in self.unchanged[i - 1]
        ]
        ids += [(self.params.t1 + 1, idx) for idx in range(1, self.written_count + 1)]
        return tuple(ids)


@dataclass(frozen=True)
class SplitPlan:
    """An executable split conversion (t1 = 1).

    `unchanged[j-1]` holds the initial positions kept by final code j;
    the sets are pairwise disjoint.  When a final code can be produced
    with fewer than k_I reads, `privileged` names it, `extra_reads` holds
    the read positions outside every unchanged set (doc key "V"), and
    `punctured_parity` is the parity check of the initial code restricted
    to all unchanged positions plus `extra_reads`, columns ordered by
    ascending position.
    """

    params: ConvertParams
    field: FieldSpec
    initial_spec: ExtGrsSpec
    final_specs: tuple[ExtGrsSpec, ...]
    unchanged: tuple[tuple[int, ...], ...]
    reads: tuple[tuple[int, ...], ...]
    privileged: int | None
    extra_reads: tuple[int, ...]
    punctured_parity: FieldMatrix | None

    def __post_init__(self):
        p = self.params
        if p.t1 != 1:
            raise UsageError("split plan requires exactly one initial code")
        n_i, k_i = p.initial[0]
        if (self.initial_spec.n, self.initial_spec.k) != (n_i, k_i) or self.initial_spec.field != self.field:
            raise UsageError("initial code does not match its declared shape")
        if len(self.final_specs) != p.t2 or len(self.unchanged) != p.t2 or len(self.reads) != p.t2:
            raise UsageError("final_specs, unchanged and reads must have one entry per final code")
        seen: set[int] = set()
        for j in range(1, p.t2 + 1):
            nf, kf = p.final[j - 1]
            spec = self.final_specs[j - 1]
            if (spec.n, spec.k) != (nf, kf) or spec.field != self.field:
                raise UsageError(f"final code {j} does not match its declared shape")
            _check_positions(f"unchanged[{j}]", self.unchanged[j - 1], n_i)
            _check_positions(f"reads[{j}]", self.reads[j - 1], n_i)
            if len(self.unchanged[j - 1]) > kf:
                raise UsageError(
                    f"final code {j} keeps {len(self.unchanged[j - 1])} unchanged symbols; "
                    f"an MDS conversion allows at most k = {kf}"
                )
            overlap = seen & set(self.unchanged[j - 1])
            if overlap:
                raise UsageError(f"unchanged sets must be disjoint; positions {sorted(overlap)} repeat")
            seen |= set(self.unchanged[j - 1])
        _check_positions("extra_reads", self.extra_reads, n_i)
        if set(self.extra_reads) & seen:
            raise UsageError("extra read positions must avoid every unchanged set")
        if self.privileged is not None:
            if not 1 <= self.privileged <= p.t2:
                raise UsageError(f"privileged index {self.privileged} out of range 1..{p.t2}")
            if self.punctured_parity is None:
                raise UsageError("a privileged final code requires the restricted parity check")

    def support(self) -> tuple[int, ...]:
        """Ascending positions covered by the restricted parity check."""
        pos: set[int] = set(self.extra_reads)
        for u in self.unchanged:
            pos |= set(u)
        return tuple(sorted(pos))


@dataclass(frozen=True)
class GeneralPlan:
    """A hand-specified conversion with explicit per-final linear maps.

    `unchanged[j-1][i-1]` and `reads[j-1][i-1]` hold positions of initial
    code i used by final code j.  `layouts[j-1]` orders final code j's
    coordinates as symbol ids: (i, pos) for an unchanged symbol, or
    (t1 + j, idx) for written symbol idx.  `sigmas[j-1]` maps the
    concatenated read symbols (codes in order, positions ascending) to
    the written symbols.
    """

    params: ConvertParams
    field: FieldSpec
    initial_specs: tuple[ExtGrsSpec, ...]
    final_specs: tuple[ExtGrsSpec | None, ...]
    unchanged: tuple[tuple[tuple[int, ...], ...], ...]
    reads: tuple[tuple[tuple[int, ...], ...], ...]
    layouts: tuple[tuple[SymbolId, ...], ...]
    sigmas: tuple[FieldMatrix, ...]

    def __post_init__(self):
        p = self.params
        t1, t2 = p.t1, p.t2
        if len(self.initial_specs) != t1:
            raise UsageError("initial_specs must have one entry per initial code")
        for i in range(1, t1 + 1):
            spec = self.initial_specs[i - 1]
            if (spec.n, spec.k) != p.initial[i - 1] or spec.field != self.field:
                raise UsageError(f"initial code {i} does not match its declared shape")
        for name, seq in (
            ("final_specs", self.final_specs),
            ("unchanged", self.unchanged),
            ("reads", self.reads),
            ("layouts", self.layouts),
            ("sigmas", self.sigmas),
        ):
            if len(seq) != t2:
                raise UsageError(f"{name} must have one entry per final code")
        kept: list[set[int]] = [set() for _ in range(t1)]
        for j in range(1, t2 + 1):
            if len(self.unchanged[j - 1]) != t1 or len(self.reads[j - 1]) != t1:
                raise UsageError(f"final code {j} needs per-initial unchanged and read sets")
            for i in range(1, t1 + 1):
                n_i = p.n_initial[i - 1]
                _check_positions(f"unchanged[{j}][{i}]", self.unchanged[j - 1][i - 1], n_i)
                _check_positions(f"reads[{j}][{i}]", self.reads[j - 1][i - 1], n_i)
                overlap = kept[i - 1] & set(self.unchanged[j - 1][i - 1])
                if overlap:
                    raise UsageError(
                        f"unchanged sets of code {i} must be disjoint across final codes; "
                        f"positions {sorted(overlap)} repeat"
                    )
                kept[i - 1] |= set(self.unchanged[j - 1][i - 1])
            nf = p.n_final[j - 1]
            wj = nf - sum(len(u) for u in self.unchanged[j - 1])
            if wj < 0:
                raise UsageError(f"final code {j} keeps more symbols than its length")
            expected = {(i, pos) for i in range(1, t1 + 1) for pos in self.unchanged[j - 1][i - 1]}
            expected |= {(t1 + j, idx) for idx in range(1, wj + 1)}
            layout = self.layouts[j - 1]
            if len(layout) != nf or set(layout) != expected or len(set(layout)) != nf:
                raise UsageError(
                    f"layout of final code {j} must arrange its unchanged symbols and "
                    f"written symbols 1..{wj} exactly once each"
                )
            spec = self.final_specs[j - 1]
            if spec is not None and ((spec.n, spec.k) != p.final[j - 1] or spec.field != self.field):
                raise UsageError(f"final code {j} does not match its declared shape")
            read_len = sum(len(rp) for rp in self.reads[j - 1])
            sigma = self.sigmas[j - 1]
            if (sigma.rows, sigma.cols) != (read_len, wj) or sigma.field != self.field:
                raise UsageError(
                    f"conversion matrix of final code {j} must be {read_len}x{wj} over the plan field"
                )


Plan = MergePlan | SplitPlan | GeneralPlan


# -- access accounting -------------------------------------------------------


@dataclass(frozen=True)
class AccessReport:
    """Read/write accounting for one conversion plan.

    `bound` and `optimal` are None for plans outside the merge and split
    regimes, where no lower bound is available.  `trace` classifies every
    initial position as unchanged/read/retired and lists written symbols.
    """

    per_initial_reads: tuple[int, ...]
    rho_r: int
    rho_w: int
    rho: int
    bound: int | None
    optimal: bool | None
    stable: bool
    trace: tuple[tuple[int, int, str], ...]


def _plan_grids(plan: Plan):
    """Uniform [i][j] views of unchanged/read sets plus written counts per final."""
    p = plan.params
    if isinstance(plan, MergePlan):
        u = [[set(plan.unchanged[i - 1])] for i in range(1, p.t1 + 1)]
        r = [[set(plan.reads[i - 1])] for i in range(1, p.t1 + 1)]
        written = [plan.written_count]
    elif isinstance(plan, SplitPlan):
        u = [[set(uj) for uj in plan.unchanged]]
        r = [[set(rj) for rj in plan.reads]]
        written = [
            p.n_final[j - 1] - len(plan.unchanged[j - 1]) for j in range(1, p.t2 + 1)
        ]
    else:
        u = [
            [set(plan.unchanged[j - 1][i - 1]) for j in range(1, p.t2 + 1)]
            for i in range(1, p.t1 + 1)
        ]
        r = [
            [set(plan.reads[j - 1][i - 1]) for j in range(1, p.t2 + 1)]
            for i in range(1, p.t1 + 1)
        ]
        written = [
            p.n_final[j - 1] - sum(len(plan.unchanged[j - 1][i - 1]) for i in range(1, p.t1 + 1))
            for j in range(1, p.t2 + 1)
        ]
    return u, r, written


def access_report(plan: Plan) -> AccessReport:
    """Exact access accounting: distinct reads per initial code, writes per final."""
    p = plan.params
    u_grid, r_grid, written = _plan_grids(plan)
    per_initial = tuple(len(set().union(*r_grid[i])) for i in range(p.t1))
    rho_r = sum(per_initial)
    rho_w = sum(written)
    rho = rho_r + rho_w
    bound: int | None
    optimal: bool | None
    if p.t2 == 1:
        mb = merge_lower_bound(p)
        bound = mb.rho
        optimal = rho == bound and per_initial == mb.per_code_reads
    elif p.t1 == 1:
        sb = split_lower_bound(p)
        bound = sb.rho
        optimal = rho == bound and rho_r == sb.rho_r
    else:
        bound = None
        optimal = None
    total_unchanged = sum(len(uj) for row in u_grid for uj in row)
    stable = total_unchanged == p.total_dimension
    trace: list[tuple[int, int, str]] = []
    for i in range(1, p.t1 + 1):
        kept = set().union(*u_grid[i - 1])
        read = set().union(*r_grid[i - 1])
        for pos in range(1, p.n_initial[i - 1] + 1):
            if pos in kept:
                status = "unchanged"
            elif pos in read:
                status = "read"
            else:
                status = "retired"
            trace.append((i, pos, status))
    for j in range(1, p.t2 + 1):
        for idx in range(1, written[j - 1] + 1):
            trace.append((p.t1 + j, idx, "written"))
    return AccessReport(per_initial, rho_r, rho_w, rho, bound, optimal, stable, tuple(trace))


# -- merge construction -------------------------------------------------------


def merge_params(initial: Sequence[tuple[int, int]], r_final: int) -> ConvertParams:
    """Merge parameters with the final shape implied by the initial dimensions."""
    if r_final < 1:
        raise UsageError(f"final redundancy must be >= 1, got {r_final}")
    k_total = sum(k for _, k in initial)
    return ConvertParams(tuple(initial), ((k_total + r_final, k_total),))


def required_field_order(params: ConvertParams) -> int:
    """Smallest field order the plan builders accept for these parameters."""
    return max(max(params.n_initial), max(params.n_final)) - 1


def build_merge(params: ConvertParams, field: FieldSpec) -> MergePlan:
    """An access-optimal merge plan over `field`.

    Evaluation points are drawn from one global pool so that the points
    of all unchanged coordinates plus the fresh written coordinates stay
    pairwise distinct; each initial code's remaining coordinates are
    filled with further points distinct within that code.  Unchanged
    positions are the leading k_I of each code; reduced-read codes read
    their trailing r_F positions (which include the extension position),
    other codes re-read their unchanged symbols.
    """
    if params.t2 != 1:
        raise UsageError("merge construction requires exactly one final code")
    need = required_field_order(params)
    if field.q < need:
        raise ParameterError(
            f"field of order {field.q} is too small for these parameters: need q >= {need}"
        )
    rf = params.r_final[0]
    nf = params.n_final[0]
    pool = list(field.elements())
    gammas: list[tuple[int, ...]] = []
    cursor = 0
    for n, k in params.initial:
        head = pool[cursor : cursor + k]
        cursor += k
        used = set(head)
        fill: list[int] = []
        for x in pool:
            if len(head) + len(fill) == n - 1:
                break
            if x not in used:
                fill.append(x)
                used.add(x)
        gammas.append(tuple(head + fill))
    gamma_prime = tuple(pool[cursor : cursor + rf - 1])
    initial_specs = tuple(
        ExtGrsSpec(field, n, n - k, gammas[idx], (1,) * n)
        for idx, (n, k) in enumerate(params.initial)
    )
    reduced = reduced_read_codes(params)
    unchanged = tuple(tuple(range(1, k + 1)) for _, k in params.initial)
    reads = tuple(
        tuple(range(n - rf + 1, n + 1)) if i in reduced else tuple(range(1, k + 1))
        for i, (n, k) in enumerate(params.initial, 1)
    )
    punctured: list[FieldMatrix | None] = []
    w_star: list[int] = []
    gamma_star: list[int] = []
    for i, spec in enumerate(initial_specs, 1):
        u = unchanged[i - 1]
        gamma_star.extend(spec.gamma[pos - 1] for pos in u)
        if i in reduced:
            support = sorted(set(u) | set(reads[i - 1]))
            psec = puncture(spec, support)
            punctured.append(parity_check(psec))
            slot = {pos: idx for idx, pos in enumerate(support)}
            w_star.extend(psec.w[slot[pos]] for pos in u)
        else:
            punctured.append(None)
            w_star.extend(spec.w[pos - 1] for pos in u)
    gamma_star.extend(gamma_prime)
    w_star.extend([1] * rf)
    final_spec = ExtGrsSpec(field, nf, rf, tuple(gamma_star), tuple(w_star))
    h_final = parity_check(final_spec)
    blocks: list[FieldMatrix | None] = []
    offset = 0
    for i, (_, k) in enumerate(params.initial, 1):
        if i in reduced:
            blocks.append(None)
        else:
            blocks.append(linalg.submatrix_cols(h_final, range(offset + 1, offset + k + 1)))
        offset += k
    written_block = linalg.submatrix_cols(h_final, range(offset + 1, nf + 1))
    return MergePlan(
        params=params,
        field=field,
        initial_specs=initial_specs,
        final_spec=final_spec,
        reduced=reduced,
        unchanged=unchanged,
        reads=reads,
        punctured_parity=tuple(punctured),
        final_unchanged_blocks=tuple(blocks),
        final_written_block=written_block,
    )


def merge_convert(
    plan: MergePlan, codewords: Sequence[Sequence[int] | Codeword]
) -> tuple[Codeword, AccessReport]:
    """Execute a merge: copy unchanged symbols, solve for the written ones.

    The written symbols satisfy the final parity equations once the
    reduced-read contributions (through the restricted parity checks)
    and the default-read contributions (through the final-code blocks)
    are accumulated; inputs must be codewords of their initial codes.
    """
    if len(codewords) != plan.params.t1:
        raise UsageError(f"expected {plan.params.t1} input codewords, got {len(codewords)}")
    syms: list[tuple[int, ...]] = []
    for i, cw in enumerate(codewords, 1):
        symbols = tuple(cw.symbols if isinstance(cw, Codeword) else cw)
        if not is_codeword(plan.initial_specs[i - 1], symbols):
            raise CorruptionError(f"input {i} is not a codeword of initial code {i}")
        syms.append(symbols)
    f = plan.field
    rf = plan.final_spec.r
    rhs = (0,) * rf
    for i in range(1, plan.params.t1 + 1):
        if i in plan.reduced:
            support = plan.support(i)
            slot = {pos: idx + 1 for idx, pos in enumerate(support)}
            hbar = plan.punctured_parity[i - 1]
            block = linalg.submatrix_cols(hbar, [slot[pos] for pos in plan.reads[i - 1]])
            contrib = linalg.matvec(block, [syms[i - 1][pos - 1] for pos in plan.reads[i - 1]])
            rhs = tuple(f.add(x, y) for x, y in zip(rhs, contrib))
        else:
            block = plan.final_unchanged_blocks[i - 1]
            contrib = linalg.matvec(block, [syms[i - 1][pos - 1] for pos in plan.unchanged[i - 1]])
            rhs = tuple(f.sub(x, y) for x, y in zip(rhs, contrib))
    if plan.final_written_block.rows != plan.final_written_block.cols:
        raise UsageError("written block is not square; plan is not executable")
    written = linalg.solve_linear(plan.final_written_block, rhs)
    if written is None:
        raise InternalError("written-symbol system is inconsistent")
    out = [0] * plan.final_spec.n
    for idx, (code, pos) in enumerate(plan.final_layout()):
        if code <= plan.params.t1:
            out[idx] = syms[code - 1][pos - 1]
        else:
            out[idx] = written[pos - 1]
    return Codeword(tuple(out), plan.final_spec), access_report(plan)


# -- merge optimality structure ----------------------------------------------


@dataclass(frozen=True)
class StructureCheck:
    ok: bool
    diagnostic: str = ""

    def __bool__(self) -> bool:
        return self.ok


def verify_optimal_structure(plan: MergePlan) -> StructureCheck:
    """Check the structural characterization of access-optimal merges.

    Conditions: every code keeps exactly k_I unchanged symbols; reduced
    codes read exactly r_F symbols disjoint from their unchanged set and
    their restricted parity check agrees with the final one on the
    unchanged columns; other codes read exactly their k_I unchanged
    symbols.  The first violated condition is named in the diagnostic.
    """
    p = plan.params
    expected = reduced_read_codes(p)
    if plan.reduced != expected:
        return StructureCheck(
            False,
            f"classification: plan S = {sorted(plan.reduced)} but parameters give {sorted(expected)}",
        )
    rf = p.r_final[0]
    for i in range(1, p.t1 + 1):
        k = p.k_initial[i - 1]
        if len(plan.unchanged[i - 1]) != k:
            return StructureCheck(
                False,
                f"unchanged-cardinality: code {i} keeps {len(plan.unchanged[i - 1])} symbols, need {k}",
            )
        if i in plan.reduced:
            if len(plan.reads[i - 1]) != rf:
                return StructureCheck(
                    False,
                    f"read-cardinality: code {i} reads {len(plan.reads[i - 1])} symbols, need r_F = {rf}",
                )
            if set(plan.reads[i - 1]) & set(plan.unchanged[i - 1]):
                return StructureCheck(
                    False, f"overlap: code {i} reads symbols it also keeps unchanged"
                )
        elif len(plan.reads[i - 1]) != k:
            return StructureCheck(
                False,
                f"read-cardinality: code {i} reads {len(plan.reads[i - 1])} symbols, need k = {k}",
            )
    h_final = parity_check(plan.final_spec)
    offset = 0
    for i in range(1, p.t1 + 1):
        k = p.k_initial[i - 1]
        if i in plan.reduced:
            support = plan.support(i)
            slot = {pos: idx + 1 for idx, pos in enumerate(support)}
            hbar = plan.punctured_parity[i - 1]
            if hbar.cols != len(support) or hbar.rows != rf:
                return StructureCheck(
                    False, f"punctured-parity: code {i} stored matrix has the wrong shape"
                )
            final_block = linalg.submatrix_cols(h_final, range(offset + 1, offset + k + 1))
            hbar_block = linalg.submatrix_cols(hbar, [slot[pos] for pos in plan.unchanged[i - 1]])
            if final_block.entries != hbar_block.entries:
                return StructureCheck(
                    False,
                    f"block-mismatch: code {i} unchanged columns of the restricted parity "
                    "check differ from the final parity check",
                )
        offset += k
    for i in sorted(plan.reduced):
        support = plan.support(i)
        try:
            psec = puncture(plan.initial_specs[i - 1], support)
        except (UsageError, InternalError) as exc:
            return StructureCheck(False, f"punctured-parity: code {i}: {exc}")
        reference = parity_check(psec)
        hbar = plan.punctured_parity[i - 1]
        if (
            linalg.rank(hbar) != rf
            or linalg.rank(linalg.stack_rows(reference, hbar)) != rf
        ):
            return StructureCheck(
                False,
                f"punctured-parity: code {i} stored matrix is not a parity check of the restriction",
            )
    offset = 0
    for i in range(1, p.t1 + 1):
        k_kept = len(plan.unchanged[i - 1])
        if i not in plan.reduced:
            stored = plan.final_unchanged_blocks[i - 1]
            derived = linalg.submatrix_cols(h_final, range(offset + 1, offset + k_kept + 1))
            if stored.entries != derived.entries or stored.cols != derived.cols:
                return StructureCheck(
                    False, f"final-block: code {i} stored block differs from the final parity check"
                )
        offset += k_kept
    derived_written = linalg.submatrix_cols(h_final, range(offset + 1, plan.final_spec.n + 1))
    if plan.final_written_block.entries != derived_written.entries:
        return StructureCheck(False, "final-block: stored written block differs from the final parity check")
    return StructureCheck(True)


# -- split construction --------------------------------------------------------


def build_split(params: ConvertParams, field: FieldSpec) -> SplitPlan:
    """An access-optimal split plan over `field`.

    Unchanged sets partition the leading k_I positions in final-code
    order.  Among final codes with r_F <= min(k_F, r_I), the one with the
    largest k_F - r_F (smallest index on ties) is produced from the
    initial code's restricted parity check, reading the other finals'
    unchanged symbols plus r_F trailing positions; every other final code
    is a fresh code re-encoded from its unchanged symbols.
    """
    if params.t1 != 1:
        raise UsageError("split construction requires exactly one initial code")
    need = required_field_order(params)
    if field.q < need:
        raise ParameterError(
            f"field of order {field.q} is too small for these parameters: need q >= {need}"
        )
    n_i, k_i = params.initial[0]
    pool = list(field.elements())
    initial_spec = ExtGrsSpec(field, n_i, n_i - k_i, tuple(pool[: n_i - 1]), (1,) * n_i)
    unchanged: list[tuple[int, ...]] = []
    offset = 0
    for _, kf in params.final:
        unchanged.append(tuple(range(offset + 1, offset + kf + 1)))
        offset += kf
    bound = split_lower_bound(params)
    privileged: int | None = None
    if bound.feasible:
        best = max(params.k_final[j - 1] - params.r_final[j - 1] for j in bound.feasible)
        privileged = min(j for j in bound.feasible if params.k_final[j - 1] - params.r_final[j - 1] == best)
    extra: tuple[int, ...] = ()
    hbar: FieldMatrix | None = None
    final_specs: list[ExtGrsSpec] = []
    theta: tuple[int, ...] = ()
    support: tuple[int, ...] = ()
    if privileged is not None:
        rf = params.r_final[privileged - 1]
        extra = tuple(range(n_i - rf + 1, n_i + 1))
        support = tuple(sorted(set(range(1, k_i + 1)) | set(extra)))
        psec = puncture(initial_spec, support)
        hbar = parity_check(psec)
        theta = psec.w
    slot = {pos: idx for idx, pos in enumerate(support)}
    for j, (nf, kf) in enumerate(params.final, 1):
        if j == privileged:
            positions = sorted(set(unchanged[j - 1]) | set(extra))
            gamma = tuple(initial_spec.gamma[pos - 1] for pos in positions if pos != n_i)
            w = tuple(theta[slot[pos]] for pos in positions)
            final_specs.append(ExtGrsSpec(field, nf, nf - kf, gamma, w))
        else:
            final_specs.append(ExtGrsSpec(field, nf, nf - kf, tuple(pool[: nf - 1]), (1,) * nf))
    reads: list[tuple[int, ...]] = []
    for j in range(1, params.t2 + 1):
        if j == privileged:
            other = set()
            for jj in range(1, params.t2 + 1):
                if jj != j:
                    other |= set(unchanged[jj - 1])
            reads.append(tuple(sorted(other | set(extra))))
        else:
            reads.append(unchanged[j - 1])
    return SplitPlan(
        params=params,
        field=field,
        initial_spec=initial_spec,
        final_specs=tuple(final_specs),
        unchanged=tuple(unchanged),
        reads=tuple(reads),
        privileged=privileged,
        extra_reads=extra,
        punctured_parity=hbar,
    )


def split_convert(
    plan: SplitPlan, codeword: Sequence[int] | Codeword
) -> tuple[tuple[Codeword, ...], AccessReport]:
    """Execute a split: each final keeps its unchanged symbols verbatim.

    The privileged final's written symbols are solved from the restricted
    parity relation using only read symbols; the other finals are
    re-encoded from their unchanged symbols, which form an information
    set of an MDS code.
    """
    symbols = tuple(codeword.symbols if isinstance(codeword, Codeword) else codeword)
    if not is_codeword(plan.initial_spec, symbols):
        raise CorruptionError("input is not a codeword of the initial code")
    outputs: list[Codeword] = []
    support = plan.support()
    slot = {pos: idx + 1 for idx, pos in enumerate(support)}
    for j in range(1, plan.params.t2 + 1):
        u = plan.unchanged[j - 1]
        spec = plan.final_specs[j - 1]
        if j == plan.privileged:
            hbar = plan.punctured_parity
            read_pos = plan.reads[j - 1]
            block = linalg.submatrix_cols(hbar, [slot[pos] for pos in read_pos])
            rhs = linalg.matvec(block, [symbols[pos - 1] for pos in read_pos])
            v_block = linalg.submatrix_cols(hbar, [slot[pos] for pos in plan.extra_reads])
            written = linalg.solve_linear(v_block, rhs)
            if written is None:
                raise InternalError("privileged written-symbol system is inconsistent")
            outputs.append(Codeword(tuple(symbols[pos - 1] for pos in u) + written, spec))
        else:
            known = {idx: symbols[pos - 1] for idx, pos in enumerate(u, 1)}
            outputs.append(recover_erasures(spec, known))
    return tuple(outputs), access_report(plan)


# -- general plans ---------------------------------------------------------------


def general_convert(
    plan: GeneralPlan, codewords: Sequence[Sequence[int] | Codeword]
) -> tuple[tuple[Codeword, ...], AccessReport]:
    """Execute a hand-specified plan: written symbols are read symbols times sigma."""
    if len(codewords) != plan.params.t1:
        raise UsageError(f"expected {plan.params.t1} input codewords, got {len(codewords)}")
    syms: list[tuple[int, ...]] = []
    for i, cw in enumerate(codewords, 1):
        symbols = tuple(cw.symbols if isinstance(cw, Codeword) else cw)
        if not is_codeword(plan.initial_specs[i - 1], symbols):
            raise CorruptionError(f"input {i} is not a codeword of initial code {i}")
        syms.append(symbols)
    outputs: list[Codeword] = []
    for j in range(1, plan.params.t2 + 1):
        read_vec: list[int] = []
        for i in range(1, plan.params.t1 + 1):
            read_vec.extend(syms[i - 1][pos - 1] for pos in plan.reads[j - 1][i - 1])
        written = linalg.vecmat(read_vec, plan.sigmas[j - 1])
        out = []
        for code, pos in plan.layouts[j - 1]:
            if code <= plan.params.t1:
                out.append(syms[code - 1][pos - 1])
            else:
                out.append(written[pos - 1])
        outputs.append(Codeword(tuple(out), plan.final_specs[j - 1]))
    return tuple(outputs), access_report(plan)


def run_conversion(
    plan: Plan, codewords: Sequence[Sequence[int] | Codeword]
) -> tuple[tuple[Codeword, ...], AccessReport]:
    """Dispatch plan execution; always returns a tuple of final codewords."""
    if isinstance(plan, MergePlan):
        out, report = merge_convert(plan, codewords)
        return (out,), report
    if isinstance(plan, SplitPlan):
        if len(codewords) != 1:
            raise UsageError(f"split conversion expects 1 input codeword, got {len(codewords)}")
        return split_convert(plan, codewords[0])
    return general_convert(plan, codewords)


# -- plan verification ----------------------------------------------------------


def _check_mds(spec: ExtGrsSpec, trials: int, seed: int) -> bool:
    h = parity_check(spec)
    if spec.n <= oracle.MDS_MAX_LENGTH:
        return oracle.mds_exhaustive(h)
    return oracle.mds_sampled(h, trials=trials, seed=seed)


def verify_plan(plan: Plan, seed: int = 0, trials: int = 200) -> list[tuple[str, bool, str]]:
    """Checks behind the CLI verify command: (name, passed, detail) triples.

    MDS checks run exhaustively inside the oracle guard and by seeded
    sampling beyond it; merge plans additionally run the structural
    optimality check, split plans their construction invariants.
    """
    results: list[tuple[str, bool, str]] = []
    if isinstance(plan, MergePlan):
        for i, spec in enumerate(plan.initial_specs, 1):
            results.append((f"initial code {i} MDS", _check_mds(spec, trials, seed), ""))
        results.append(("final code MDS", _check_mds(plan.final_spec, trials, seed), ""))
        check = verify_optimal_structure(plan)
        results.append(("optimal structure", check.ok, check.diagnostic))
        report = access_report(plan)
        results.append(
            (
                "access cost meets bound",
                bool(report.optimal),
                f"rho = {report.rho}, bound = {report.bound}",
            )
        )
    elif isinstance(plan, SplitPlan):
        results.append(("initial code MDS", _check_mds(plan.initial_spec, trials, seed), ""))
        for j, spec in enumerate(plan.final_specs, 1):
            results.append((f"final code {j} MDS", _check_mds(spec, trials, seed), ""))
        for j, (_, kf) in enumerate(plan.params.final, 1):
            ok = len(plan.unchanged[j - 1]) == kf
            results.append(
                (f"final code {j} keeps k_F unchanged symbols", ok,
                 "" if ok else f"keeps {len(plan.unchanged[j - 1])}, need {kf}")
            )
        if plan.privileged is not None:
            ok, detail = _check_split_privileged(plan)
            results.append(("privileged restricted parity", ok, detail))
        report = access_report(plan)
        results.append(
            (
                "access cost meets bound",
                bool(report.optimal),
                f"rho = {report.rho}, bound = {report.bound}",
            )
        )
    else:
        for i, spec in enumerate(plan.initial_specs, 1):
            results.append((f"initial code {i} MDS", _check_mds(spec, trials, seed), ""))
        for j, spec in enumerate(plan.final_specs, 1):
            if spec is not None:
                results.append((f"final code {j} MDS", _check_mds(spec, trials, seed), ""))
        results.append(("plan structure", True, "layouts and conversion matrices consistent"))
    return results


def _check_split_privileged(plan: SplitPlan) -> tuple[bool, str]:
    j = plan.privileged
    rf = plan.params.r_final[j - 1]
    if len(plan.extra_reads) != rf:
        return False, f"extra read set has {len(plan.extra_reads)} positions, need r_F = {rf}"
    support = plan.support()
    if plan.initial_spec.n not in support:
        return False, "restriction misses the extension position"
    try:
        psec = puncture(plan.initial_spec, support)
    except (UsageError, InternalError) as exc:
        return False, str(exc)
    reference = parity_check(psec)
    hbar = plan.punctured_parity
    if hbar.rows != rf or hbar.cols != len(support):
        return False, "stored restricted parity check has the wrong shape"
    if (
        linalg.rank(hbar) != rf
        or linalg.rank(linalg.stack_rows(reference, hbar)) != rf
    ):
        return False, "stored matrix is not a parity check of the restriction"
    slot = {pos: idx + 1 for idx, pos in enumerate(support)}
    cols = [slot[pos] for pos in sorted(set(plan.unchanged[j - 1]) | set(plan.extra_reads))]
    derived = linalg.submatrix_cols(hbar, cols)
    stored = parity_check(plan.final_specs[j - 1])
    if derived.entries != stored.entries:
        return False, "privileged final code does not match the restricted parity block"
    return True, ""
