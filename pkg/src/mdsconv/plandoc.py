"""JSON documents for plans, reports and codeword files.

One structured, human-readable format with a stable key schema: symbols
are always canonical integer encodings, index sets are lists of
[code, position] pairs, and matrices are embedded as their text-dump
lines ("rows cols q" first).  The merge-plan key "S" lists the
reduced-read initial codes; the split-plan keys "privileged" and "V"
name the favoured final code and its extra read positions.
"""

from __future__ import annotations

import json
from typing import Mapping, Sequence

from .convert import (
    ConvertParams,
    GeneralPlan,
    MergePlan,
    Plan,
    AccessReport,
    SplitPlan,
)
from .errors import UsageError
from .field import GF, FieldSpec
from .grs import spec_from_dict, spec_to_dict
from .linalg import FieldMatrix, matrix_from_text, matrix_to_text


def _field_doc(field: FieldSpec) -> dict:
    return {"q": field.q, "p": field.p, "m": field.m}


def _field_from_doc(doc: Mapping) -> FieldSpec:
    try:
        q = int(doc["q"])
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed field document: {exc}") from exc
    field = GF(q)
    if "p" in doc and int(doc["p"]) != field.p:
        raise UsageError(f"field document p={doc['p']} does not match q={q}")
    if "m" in doc and int(doc["m"]) != field.m:
        raise UsageError(f"field document m={doc['m']} does not match q={q}")
    return field


def _matrix_lines(m: FieldMatrix) -> list[str]:
    return matrix_to_text(m).splitlines()


def _matrix_from_lines(lines: Sequence[str], field: FieldSpec) -> FieldMatrix:
    m = matrix_from_text("\n".join(lines))
    if m.field != field:
        raise UsageError("matrix dump field does not match the plan field")
    return m


def _pairs(code: int, positions: Sequence[int]) -> list[list[int]]:
    return [[code, pos] for pos in positions]


def _positions_from_pairs(pairs: Sequence, code: int, label: str) -> tuple[int, ...]:
    out = []
    for pair in pairs:
        if len(pair) != 2:
            raise UsageError(f"{label}: expected [code, position] pairs")
        c, pos = int(pair[0]), int(pair[1])
        if c != code:
            raise UsageError(f"{label}: pair {pair} names code {c}, expected {code}")
        out.append(pos)
    return tuple(out)


def _params_doc(params: ConvertParams) -> dict:
    return {
        "initial": [[n, k] for n, k in params.initial],
        "final": [[n, k] for n, k in params.final],
    }


def _params_from_doc(doc: Mapping) -> ConvertParams:
    try:
        initial = tuple((int(n), int(k)) for n, k in doc["initial"])
        final = tuple((int(n), int(k)) for n, k in doc["final"])
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed params block: {exc}") from exc
    return ConvertParams(initial, final)


# -- plans -------------------------------------------------------------------


def plan_to_doc(plan: Plan) -> dict:
    if isinstance(plan, MergePlan):
        return _merge_doc(plan)
    if isinstance(plan, SplitPlan):
        return _split_doc(plan)
    return _general_doc(plan)


def plan_from_doc(doc: Mapping) -> Plan:
    kind = doc.get("kind")
    if kind == "merge":
        return _merge_from_doc(doc)
    if kind == "split":
        return _split_from_doc(doc)
    if kind == "general":
        return _general_from_doc(doc)
    raise UsageError(f"unknown plan kind {kind!r}")


def _merge_doc(plan: MergePlan) -> dict:
    t1 = plan.params.t1
    return {
        "kind": "merge",
        "params": _params_doc(plan.params),
        "field": _field_doc(plan.field),
        "initial_codes": [spec_to_dict(s) for s in plan.initial_specs],
        "final_code": spec_to_dict(plan.final_spec),
        "S": sorted(plan.reduced),
        "unchanged": [_pairs(i, plan.unchanged[i - 1]) for i in range(1, t1 + 1)],
        "reads": [_pairs(i, plan.reads[i - 1]) for i in range(1, t1 + 1)],
        "written": _pairs(t1 + 1, range(1, plan.written_count + 1)),
        "punctured_parity": [
            {"code": i, "matrix": _matrix_lines(plan.punctured_parity[i - 1])}
            for i in sorted(plan.reduced)
        ],
        "final_unchanged_blocks": [
            {"code": i, "matrix": _matrix_lines(plan.final_unchanged_blocks[i - 1])}
            for i in range(1, t1 + 1)
            if i not in plan.reduced
        ],
        "final_written_block": _matrix_lines(plan.final_written_block),
    }


def _merge_from_doc(doc: Mapping) -> MergePlan:
    try:
        params = _params_from_doc(doc["params"])
        field = _field_from_doc(doc["field"])
        initial = tuple(spec_from_dict(d) for d in doc["initial_codes"])
        final = spec_from_dict(doc["final_code"])
        reduced = frozenset(int(i) for i in doc["S"])
        unchanged = tuple(
            _positions_from_pairs(doc["unchanged"][i - 1], i, f"unchanged[{i}]")
            for i in range(1, params.t1 + 1)
        )
        reads = tuple(
            _positions_from_pairs(doc["reads"][i - 1], i, f"reads[{i}]")
            for i in range(1, params.t1 + 1)
        )
        punctured: list[FieldMatrix | None] = [None] * params.t1
        for entry in doc["punctured_parity"]:
            punctured[int(entry["code"]) - 1] = _matrix_from_lines(entry["matrix"], field)
        blocks: list[FieldMatrix | None] = [None] * params.t1
        for entry in doc["final_unchanged_blocks"]:
            blocks[int(entry["code"]) - 1] = _matrix_from_lines(entry["matrix"], field)
        written_block = _matrix_from_lines(doc["final_written_block"], field)
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise UsageError(f"malformed merge plan document: {exc}") from exc
    return MergePlan(
        params=params,
        field=field,
        initial_specs=initial,
        final_spec=final,
        reduced=reduced,
        unchanged=unchanged,
        reads=reads,
        punctured_parity=tuple(punctured),
        final_unchanged_blocks=tuple(blocks),
        final_written_block=written_block,
    )


def _split_doc(plan: SplitPlan) -> dict:
    t2 = plan.params.t2
    doc = {
        "kind": "split",
        "params": _params_doc(plan.params),
        "field": _field_doc(plan.field),
        "initial_code": spec_to_dict(plan.initial_spec),
        "final_codes": [spec_to_dict(s) for s in plan.final_specs],
        "unchanged": [_pairs(1, plan.unchanged[j - 1]) for j in range(1, t2 + 1)],
        "reads": [_pairs(1, plan.reads[j - 1]) for j in range(1, t2 + 1)],
        "written": [
            _pairs(
                1 + j,
                range(1, plan.params.n_final[j - 1] - len(plan.unchanged[j - 1]) + 1),
            )
            for j in range(1, t2 + 1)
        ],
        "privileged": plan.privileged,
        "V": _pairs(1, plan.extra_reads),
        "punctured_parity": (
            _matrix_lines(plan.punctured_parity) if plan.punctured_parity is not None else None
        ),
    }
    return doc


def _split_from_doc(doc: Mapping) -> SplitPlan:
    try:
        params = _params_from_doc(doc["params"])
        field = _field_from_doc(doc["field"])
        initial = spec_from_dict(doc["initial_code"])
        finals = tuple(spec_from_dict(d) for d in doc["final_codes"])
        unchanged = tuple(
            _positions_from_pairs(doc["unchanged"][j - 1], 1, f"unchanged[{j}]")
            for j in range(1, params.t2 + 1)
        )
        reads = tuple(
            _positions_from_pairs(doc["reads"][j - 1], 1, f"reads[{j}]")
            for j in range(1, params.t2 + 1)
        )
        privileged = doc["privileged"]
        privileged = None if privileged is None else int(privileged)
        extra = _positions_from_pairs(doc["V"], 1, "V")
        hbar = (
            _matrix_from_lines(doc["punctured_parity"], field)
            if doc.get("punctured_parity") is not None
            else None
        )
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise UsageError(f"malformed split plan document: {exc}") from exc
    return SplitPlan(
        params=params,
        field=field,
        initial_spec=initial,
        final_specs=finals,
        unchanged=unchanged,
        reads=reads,
        privileged=privileged,
        extra_reads=extra,
        punctured_parity=hbar,
    )


def _general_doc(plan: GeneralPlan) -> dict:
    t1, t2 = plan.params.t1, plan.params.t2
    return {
        "kind": "general",
        "params": _params_doc(plan.params),
        "field": _field_doc(plan.field),
        "initial_codes": [spec_to_dict(s) for s in plan.initial_specs],
        "final_codes": [None if s is None else spec_to_dict(s) for s in plan.final_specs],
        "unchanged": [
            [_pairs(i, plan.unchanged[j - 1][i - 1]) for i in range(1, t1 + 1)]
            for j in range(1, t2 + 1)
        ],
        "reads": [
            [_pairs(i, plan.reads[j - 1][i - 1]) for i in range(1, t1 + 1)]
            for j in range(1, t2 + 1)
        ],
        "layout": [
            [[code, pos] for code, pos in plan.layouts[j - 1]] for j in range(1, t2 + 1)
        ],
        "sigma": [_matrix_lines(plan.sigmas[j - 1]) for j in range(1, t2 + 1)],
    }


def _general_from_doc(doc: Mapping) -> GeneralPlan:
    try:
        params = _params_from_doc(doc["params"])
        field = _field_from_doc(doc["field"])
        t1, t2 = params.t1, params.t2
        initial = tuple(spec_from_dict(d) for d in doc["initial_codes"])
        finals = tuple(
            None if d is None else spec_from_dict(d) for d in doc["final_codes"]
        )
        unchanged = tuple(
            tuple(
                _positions_from_pairs(doc["unchanged"][j - 1][i - 1], i, f"unchanged[{j}][{i}]")
                for i in range(1, t1 + 1)
            )
            for j in range(1, t2 + 1)
        )
        reads = tuple(
            tuple(
                _positions_from_pairs(doc["reads"][j - 1][i - 1], i, f"reads[{j}][{i}]")
                for i in range(1, t1 + 1)
            )
            for j in range(1, t2 + 1)
        )
        layouts = tuple(
            tuple((int(c), int(pos)) for c, pos in doc["layout"][j - 1])
            for j in range(1, t2 + 1)
        )
        sigmas = tuple(
            _matrix_from_lines(doc["sigma"][j - 1], field) for j in range(1, t2 + 1)
        )
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise UsageError(f"malformed general plan document: {exc}") from exc
    return GeneralPlan(
        params=params,
        field=field,
        initial_specs=initial,
        final_specs=finals,
        unchanged=unchanged,
        reads=reads,
        layouts=layouts,
        sigmas=sigmas,
    )


# -- reports and codeword files ------------------------------------------------


def report_to_doc(report: AccessReport, include_trace: bool = False) -> dict:
    doc = {
        "rho_r": report.rho_r,
        "rho_w": report.rho_w,
        "rho": report.rho,
        "bound": report.bound,
        "optimal": report.optimal,
        "stable": report.stable,
        "per_initial_reads": list(report.per_initial_reads),
    }
    if include_trace:
        doc["trace"] = [
            {"code": code, "position": pos, "status": status}
            for code, pos, status in report.trace
        ]
    return doc


def dump_json(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def load_plan(path: str) -> Plan:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read plan {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"plan {path} is not valid JSON: {exc}") from exc
    return plan_from_doc(doc)


def save_plan(plan: Plan, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_json(plan_to_doc(plan)))


def read_symbol_lines(path: str, field: FieldSpec) -> list[tuple[int, ...]]:
    """Symbol rows from a text file: one sequence per line, decimal encodings."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            row = tuple(int(t) for t in line.split())
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: symbols must be integers") from exc
        for x in row:
            if not 0 <= x < field.q:
                raise UsageError(f"{path}:{lineno}: symbol {x} is not an element of GF({field.q})")
        rows.append(row)
    return rows


def write_symbol_lines(path: str, rows: Sequence[Sequence[int]]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(" ".join(str(x) for x in row) + "\n")
