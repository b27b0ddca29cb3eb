import json
import random
import shutil
from pathlib import Path

from mdsconv.cli import main
from mdsconv.field import GF
from mdsconv.grs import encode, is_codeword
from mdsconv import plandoc

FIXTURES = Path(__file__).parent / "fixtures"


def write_json(path, doc):
    path.write_text(json.dumps(doc, indent=2))


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_merge_pipeline(tmp_path, capsys):
    cfg = tmp_path / "merge.json"
    write_json(cfg, {"regime": "merge", "q": 8, "initial": [[5, 3], [5, 3]], "r_F": 2})
    plan_path = tmp_path / "plan.json"
    code, out, _ = run(capsys, "plan", "--config", cfg, "--out", plan_path)
    assert code == 0
    assert "field: GF(8)" in out
    assert "S: [1, 2]" in out
    assert "bound ρ = 6" in out

    msgs = tmp_path / "msgs.txt"
    msgs.write_text("1 2 3\n4 5 6\n")
    cws = tmp_path / "cws.txt"
    code, out, _ = run(capsys, "encode", "--plan", plan_path, "--in", msgs, "--out", cws)
    assert code == 0

    finals = tmp_path / "finals.txt"
    code, out, _ = run(capsys, "convert", "--plan", plan_path, "--in", cws, "--out", finals)
    assert code == 0
    report = json.loads(out)
    assert report["rho"] == 6 and report["bound"] == 6 and report["optimal"]
    assert "trace" not in report
    plan = plandoc.load_plan(str(plan_path))
    final_syms = plandoc.read_symbol_lines(str(finals), plan.field)
    assert len(final_syms) == 1
    assert is_codeword(plan.final_spec, final_syms[0])

    code, out, _ = run(capsys, "verify", "--plan", plan_path)
    assert code == 0
    assert "PASS optimal structure" in out


def test_convert_trace_flag(tmp_path, capsys):
    cfg = tmp_path / "merge.json"
    write_json(cfg, {"regime": "merge", "q": 8, "initial": [[4, 2], [4, 2]], "r_F": 2})
    plan_path = tmp_path / "plan.json"
    run(capsys, "plan", "--config", cfg, "--out", plan_path)
    msgs = tmp_path / "m.txt"
    msgs.write_text("0 1\n2 3\n")
    cws = tmp_path / "c.txt"
    run(capsys, "encode", "--plan", plan_path, "--in", msgs, "--out", cws)
    code, out, _ = run(
        capsys, "convert", "--plan", plan_path, "--in", cws, "--out", tmp_path / "f.txt", "--trace"
    )
    assert code == 0
    report = json.loads(out)
    statuses = {(e["code"], e["position"]): e["status"] for e in report["trace"]}
    assert statuses[(1, 1)] == "unchanged"
    assert statuses[(3, 1)] == "written"


def test_split_pipeline(tmp_path, capsys):
    cfg = tmp_path / "split.json"
    write_json(
        cfg,
        {"regime": "split", "q": 16, "initial": [[10, 7]], "final": [[6, 4], [5, 3]]},
    )
    plan_path = tmp_path / "plan.json"
    code, out, _ = run(capsys, "plan", "--config", cfg, "--out", plan_path)
    assert code == 0
    assert "privileged final j* = 1" in out
    assert "bound ρ = 9" in out

    msgs = tmp_path / "m.txt"
    msgs.write_text("1 2 3 4 5 6 7\n")
    cws = tmp_path / "c.txt"
    code, _, _ = run(capsys, "encode", "--plan", plan_path, "--in", msgs, "--out", cws)
    assert code == 0
    finals = tmp_path / "f.txt"
    code, out, _ = run(capsys, "convert", "--plan", plan_path, "--in", cws, "--out", finals)
    assert code == 0
    report = json.loads(out)
    assert report["rho_r"] == 5 and report["rho_w"] == 4 and report["optimal"]
    plan = plandoc.load_plan(str(plan_path))
    rows = plandoc.read_symbol_lines(str(finals), plan.field)
    assert len(rows) == 2
    for spec, row in zip(plan.final_specs, rows):
        assert is_codeword(spec, row)
    code, _, _ = run(capsys, "verify", "--plan", plan_path)
    assert code == 0


def test_general_fixture_pipeline(tmp_path, capsys):
    plan_path = tmp_path / "plan.json"
    shutil.copy(FIXTURES / "two_by_two_plan.json", plan_path)
    plan = plandoc.load_plan(str(plan_path))
    rng = random.Random(5)
    rows = [
        encode(spec, tuple(rng.randrange(8) for _ in range(spec.k))).symbols
        for spec in plan.initial_specs
    ]
    cws = tmp_path / "c.txt"
    plandoc.write_symbol_lines(str(cws), rows)
    finals = tmp_path / "f.txt"
    code, out, _ = run(capsys, "convert", "--plan", plan_path, "--in", cws, "--out", finals)
    assert code == 0
    report = json.loads(out)
    assert report["rho_r"] == 4 and report["rho_w"] == 5
    code, out, _ = run(capsys, "verify", "--plan", plan_path)
    assert code == 0


def test_plan_small_field_exit_2(tmp_path, capsys):
    cfg = tmp_path / "merge.json"
    write_json(cfg, {"regime": "merge", "q": 5, "initial": [[5, 3], [5, 3]], "r_F": 2})
    code, _, err = run(capsys, "plan", "--config", cfg, "--out", tmp_path / "p.json")
    assert code == 2
    assert "q >= 7" in err


def test_malformed_config_exit_1(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text("{broken")
    code, _, err = run(capsys, "plan", "--config", cfg, "--out", tmp_path / "p.json")
    assert code == 1
    write_json(cfg, {"regime": "sideways", "q": 8, "initial": [[5, 3]]})
    code, _, err = run(capsys, "plan", "--config", cfg, "--out", tmp_path / "p.json")
    assert code == 1
    code, _, err = run(capsys, "plan", "--config", tmp_path / "missing.json", "--out", tmp_path / "p.json")
    assert code == 1


def test_encode_bad_symbol_exit_1(tmp_path, capsys):
    cfg = tmp_path / "merge.json"
    write_json(cfg, {"regime": "merge", "q": 8, "initial": [[5, 3], [5, 3]], "r_F": 2})
    plan_path = tmp_path / "plan.json"
    run(capsys, "plan", "--config", cfg, "--out", plan_path)
    msgs = tmp_path / "m.txt"
    msgs.write_text("1 2 9\n4 5 6\n")  # 9 is not in GF(8)
    code, _, err = run(capsys, "encode", "--plan", plan_path, "--in", msgs, "--out", tmp_path / "c.txt")
    assert code == 1
    msgs.write_text("1 2\n4 5 6\n")  # wrong message length
    code, _, err = run(capsys, "encode", "--plan", plan_path, "--in", msgs, "--out", tmp_path / "c.txt")
    assert code == 1


def test_convert_tampered_exit_3(tmp_path, capsys):
    cfg = tmp_path / "merge.json"
    write_json(cfg, {"regime": "merge", "q": 8, "initial": [[5, 3], [5, 3]], "r_F": 2})
    plan_path = tmp_path / "plan.json"
    run(capsys, "plan", "--config", cfg, "--out", plan_path)
    msgs = tmp_path / "m.txt"
    msgs.write_text("1 2 3\n4 5 6\n")
    cws = tmp_path / "c.txt"
    run(capsys, "encode", "--plan", plan_path, "--in", msgs, "--out", cws)
    rows = plandoc.read_symbol_lines(str(cws), GF(8))
    tampered = list(rows[0])
    tampered[0] ^= 1
    plandoc.write_symbol_lines(str(cws), [tuple(tampered), rows[1]])
    code, _, err = run(capsys, "convert", "--plan", plan_path, "--in", cws, "--out", tmp_path / "f.txt")
    assert code == 3


def test_verify_perturbed_plan_exit_2(tmp_path, capsys):
    cfg = tmp_path / "merge.json"
    write_json(cfg, {"regime": "merge", "q": 8, "initial": [[5, 3], [5, 3]], "r_F": 2})
    plan_path = tmp_path / "plan.json"
    run(capsys, "plan", "--config", cfg, "--out", plan_path)
    doc = json.loads(plan_path.read_text())
    lines = doc["punctured_parity"][0]["matrix"]
    first_row = lines[1].split()
    first_row[0] = str(int(first_row[0]) ^ 1)  # GF(8) addition of 1
    lines[1] = " ".join(first_row)
    write_json(plan_path, doc)
    code, out, _ = run(capsys, "verify", "--plan", plan_path)
    assert code == 2
    assert "FAIL" in out and "block-mismatch" in out


def test_bounds_command(tmp_path, capsys):
    code, out, _ = run(capsys, "bounds", "--initial", "5,3", "--initial", "7,4", "--final", "9,7")
    assert code == 0
    assert "per-code read minimums: [2, 2]" in out
    assert "bound ρ = 6" in out
    code, out, _ = run(capsys, "bounds", "--initial", "5,3", "--initial", "7,4", "--final", "12,7")
    assert "per-code read minimums: [3, 4]" in out and "bound ρ = 12" in out
    code, out, _ = run(capsys, "bounds", "--initial", "5,3", "--initial", "5,3", "--final", "8,6")
    assert "special case: uniform initial codes" in out
    code, out, _ = run(capsys, "bounds", "--initial", "10,7", "--final", "6,4", "--final", "5,3")
    assert code == 0
    assert "read bound ρ_r = 5" in out and "bound ρ = 9" in out
    code, out, _ = run(capsys, "bounds", "--initial", "6,4", "--final", "7,4")
    assert code == 0
    assert "degenerate" in out
    code, _, err = run(capsys, "bounds", "--initial", "5,3", "--final", "9,7")
    assert code == 1  # dimension mismatch


def test_encode_zero_messages(tmp_path, capsys):
    cfg = tmp_path / "merge.json"
    write_json(cfg, {"regime": "merge", "q": 8, "initial": [[5, 3], [5, 3]], "r_F": 2})
    plan_path = tmp_path / "plan.json"
    run(capsys, "plan", "--config", cfg, "--out", plan_path)
    msgs = tmp_path / "m.txt"
    msgs.write_text("0 0 0\n0 0 0\n")
    cws = tmp_path / "c.txt"
    code, _, _ = run(capsys, "encode", "--plan", plan_path, "--in", msgs, "--out", cws)
    assert code == 0
    assert plandoc.read_symbol_lines(str(cws), GF(8)) == [(0,) * 5, (0,) * 5]


def test_pipeline_matrix(tmp_path, capsys):
    """plan -> encode -> convert -> verify succeeds across a small parameter matrix."""
    cases = [
        {"regime": "merge", "q": 8, "initial": [[5, 3], [6, 4]], "r_F": 2},
        {"regime": "merge", "q": 11, "initial": [[4, 2], [5, 3], [6, 4]], "r_F": 1},
        {"regime": "merge", "q": 7, "initial": [[4, 2], [4, 2]], "r_F": 3},
        {"regime": "split", "q": 11, "initial": [[9, 6]], "final": [[5, 3], [5, 3]]},
        {"regime": "split", "q": 7, "initial": [[7, 6]], "final": [[5, 3], [5, 3]]},
    ]
    rng = random.Random(13)
    for idx, cfg_doc in enumerate(cases):
        cfg = tmp_path / f"cfg{idx}.json"
        write_json(cfg, cfg_doc)
        plan_path = tmp_path / f"plan{idx}.json"
        code, _, _ = run(capsys, "plan", "--config", cfg, "--out", plan_path)
        assert code == 0
        plan = plandoc.load_plan(str(plan_path))
        specs = (plan.initial_spec,) if cfg_doc["regime"] == "split" else plan.initial_specs
        msgs = tmp_path / f"m{idx}.txt"
        msgs.write_text(
            "\n".join(
                " ".join(str(rng.randrange(cfg_doc["q"])) for _ in range(spec.k))
                for spec in specs
            )
            + "\n"
        )
        cws = tmp_path / f"c{idx}.txt"
        code, _, _ = run(capsys, "encode", "--plan", plan_path, "--in", msgs, "--out", cws)
        assert code == 0
        finals = tmp_path / f"f{idx}.txt"
        code, out, _ = run(capsys, "convert", "--plan", plan_path, "--in", cws, "--out", finals)
        assert code == 0
        assert json.loads(out)["optimal"] is True
        code, _, _ = run(capsys, "verify", "--plan", plan_path)
        assert code == 0


def test_plan_deterministic(tmp_path, capsys):
    cfg = tmp_path / "merge.json"
    write_json(cfg, {"regime": "merge", "q": 8, "initial": [[5, 3], [5, 3]], "r_F": 2})
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "plan", "--config", cfg, "--out", a)
    run(capsys, "plan", "--config", cfg, "--out", b)
    assert a.read_bytes() == b.read_bytes()
