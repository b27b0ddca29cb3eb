import random
from dataclasses import replace
from itertools import combinations

import pytest

from mdsconv.errors import CorruptionError, InsufficientDataError, UsageError
from mdsconv.field import GF
from mdsconv import linalg, oracle
from mdsconv.grs import (
    ExtGrsSpec,
    encode,
    generator,
    is_codeword,
    parity_check,
    puncture,
    recover_erasures,
    spec_from_dict,
    spec_to_dict,
)

GF5 = GF(5)
SPEC5 = ExtGrsSpec(GF5, 4, 2, (0, 1, 2), (1, 1, 1, 1))


def canonical_spec(field, n, r):
    return ExtGrsSpec(field, n, r, tuple(range(n - 1)), (1,) * n)


def random_spec(field, n, r, rng):
    gamma = tuple(rng.sample(range(field.q), n - 1))
    w = tuple(rng.randrange(1, field.q) for _ in range(n))
    return ExtGrsSpec(field, n, r, gamma, w)


def random_codeword(spec, rng):
    return encode(spec, tuple(rng.randrange(spec.field.q) for _ in range(spec.k)))


def test_spec_validation():
    with pytest.raises(UsageError):
        ExtGrsSpec(GF5, 4, 0, (0, 1, 2), (1, 1, 1, 1))
    with pytest.raises(UsageError):
        ExtGrsSpec(GF5, 4, 4, (0, 1, 2), (1, 1, 1, 1))
    with pytest.raises(UsageError):
        ExtGrsSpec(GF5, 4, 2, (0, 1, 1), (1, 1, 1, 1))  # repeated gamma
    with pytest.raises(UsageError):
        ExtGrsSpec(GF5, 4, 2, (0, 1, 2), (1, 0, 1, 1))  # zero multiplier
    with pytest.raises(UsageError):
        ExtGrsSpec(GF5, 4, 2, (0, 1), (1, 1, 1, 1))


def test_parity_check_examples():
    assert parity_check(SPEC5).to_lists() == [[1, 1, 1, 0], [0, 1, 2, 1]]
    single = canonical_spec(GF(7), 4, 1)
    assert parity_check(single).rows == 1
    for n, r in [(5, 2), (6, 3), (4, 1)]:
        spec = canonical_spec(GF(8), n, r)
        h = parity_check(spec)
        assert (h.rows, h.cols) == (r, n)


def test_generator():
    g = generator(SPEC5)
    h = parity_check(SPEC5)
    assert linalg.matmul(g, linalg.transpose(h)) == linalg.zeros(GF5, 2, 2)
    assert linalg.rank(g) == SPEC5.k == 2
    assert SPEC5.k + SPEC5.r == SPEC5.n


def test_encode():
    zero = encode(SPEC5, (0, 0))
    assert zero.symbols == (0, 0, 0, 0)
    g = generator(SPEC5)
    assert encode(SPEC5, (1, 0)).symbols == g.row(0)
    assert encode(SPEC5, (0, 1)).symbols == g.row(1)
    rng = random.Random(2)
    for _ in range(20):
        cw = random_codeword(SPEC5, rng)
        assert is_codeword(SPEC5, cw.symbols)
    with pytest.raises(UsageError):
        encode(SPEC5, (1, 2, 3))


def test_is_codeword():
    assert is_codeword(SPEC5, (0, 0, 0, 0))
    g = generator(SPEC5)
    for i in range(g.rows):
        assert is_codeword(SPEC5, g.row(i))
    row = list(g.row(0))
    row[2] = GF5.add(row[2], 1)
    assert not is_codeword(SPEC5, tuple(row))
    assert not is_codeword(SPEC5, (0, 0, 0))


def test_recover_erasures_identity_and_zero():
    rng = random.Random(4)
    cw = random_codeword(SPEC5, rng)
    known = {i + 1: s for i, s in enumerate(cw.symbols)}
    assert recover_erasures(SPEC5, known).symbols == cw.symbols
    assert recover_erasures(SPEC5, {1: 0, 2: 0}).symbols == (0, 0, 0, 0)


def test_recover_erasures_restores_any_r_erasures():
    rng = random.Random(9)
    for q, n, r in [(5, 4, 2), (8, 6, 3), (13, 9, 4)]:
        spec = random_spec(GF(q), n, r, rng)
        for _ in range(10):
            cw = random_codeword(spec, rng)
            erased = set(rng.sample(range(1, n + 1), r))
            known = {p: cw.symbols[p - 1] for p in range(1, n + 1) if p not in erased}
            assert recover_erasures(spec, known).symbols == cw.symbols


def test_recover_erasures_errors():
    with pytest.raises(InsufficientDataError):
        recover_erasures(SPEC5, {1: 1})
    with pytest.raises(UsageError):
        recover_erasures(SPEC5, {0: 1, 2: 2})
    # three known symbols not on any codeword: force contradiction on full set
    rng = random.Random(6)
    cw = random_codeword(SPEC5, rng)
    bad = dict(enumerate(cw.symbols, 1))
    bad[4] = GF5.add(bad[4], 1)
    with pytest.raises(CorruptionError):
        recover_erasures(SPEC5, bad)


def test_puncture_full_set_is_identity_up_to_scaling():
    spec = canonical_spec(GF(8), 6, 3)
    assert puncture(spec, range(1, 7)) == spec  # all-ones w stays all-ones
    scaled = replace(spec, w=(3, 1, 1, 1, 1, 2))
    p = puncture(scaled, range(1, 7))
    inv_last = GF(8).inv(2)
    assert p.w == tuple(GF(8).mul(inv_last, x) for x in scaled.w)
    assert p.gamma == scaled.gamma and p.r == scaled.r


def test_puncture_frozen_example():
    p = puncture(SPEC5, [1, 2, 4])
    assert (p.n, p.r) == (3, 1)
    assert p.gamma == (0, 1)
    assert p.w == (3, 4, 1)


def test_puncture_single_redundancy():
    spec = canonical_spec(GF(8), 6, 3)
    p = puncture(spec, [1, 2, 3, 6])
    assert p.r == 1 and p.k == spec.k


def test_puncture_validation():
    with pytest.raises(UsageError):
        puncture(SPEC5, [1, 2, 3])  # misses the extension position
    with pytest.raises(UsageError):
        puncture(SPEC5, [2, 4])  # too small
    with pytest.raises(UsageError):
        puncture(SPEC5, [0, 4])


def test_puncture_codebook_equality_small():
    rng = random.Random(8)
    for q, n, r in [(5, 4, 2), (5, 5, 3), (7, 5, 2), (4, 5, 3)]:
        field = GF(q)
        spec = random_spec(field, n, r, rng)
        k = spec.k
        for size in range(k + 1, n + 1):
            for rest in combinations(range(1, n), size - 1):
                t = tuple(rest) + (n,)
                assert oracle.codebook(spec, t) == oracle.codebook(puncture(spec, t))


def test_mds_property():
    rng = random.Random(12)
    # exhaustive for short codes
    for q, n, r in [(5, 4, 2), (8, 7, 3), (11, 10, 4)]:
        spec = random_spec(GF(q), n, r, rng)
        assert oracle.mds_exhaustive(parity_check(spec))
    # sampled beyond the guard
    field = GF(31)
    spec = random_spec(field, 20, 5, rng)
    assert oracle.mds_sampled(parity_check(spec), trials=200, seed=0)


def test_spec_dict_roundtrip():
    doc = spec_to_dict(SPEC5)
    assert doc == {"q": 5, "p": 5, "m": 1, "n": 4, "r": 2, "gamma": [0, 1, 2], "w": [1, 1, 1, 1]}
    assert spec_from_dict(doc) == SPEC5
    ext = canonical_spec(GF(8), 5, 2)
    assert spec_from_dict(spec_to_dict(ext)) == ext
    with pytest.raises(UsageError):
        spec_from_dict({"q": 5})
    with pytest.raises(UsageError):
        spec_from_dict({**doc, "p": 2})
