from fractions import Fraction

import numpy as np
import pytest

from railyard.aztec import aztec_spec, shuffle_sample
from railyard.graph import build, fundamental_covering
from railyard.render import (
    classify_raster,
    provenance,
    raster_boundary_residual,
    svg_domino_picture,
    svg_dominos,
    svg_lozenge,
    svg_ryg,
    write_csv,
    write_json,
    write_pgm,
)
from railyard.sampler import build_backward, sample


def test_provenance_is_plain_and_ordered():
    sp = aztec_spec(2)
    p = provenance(sp, D=4, seed=1, lam=Fraction(1, 3), action="x")
    assert p["spec"] == sp.digest() and p["lam"] == "1/3"
    assert list(p)[-2:] == ["action", "lam"]
    assert provenance(sp) == provenance(aztec_spec(2))


def test_csv_and_json_writers():
    p = provenance(seed=0)
    text = write_csv([(1, 0.5, Fraction(1, 3))], ["a", "b", "c"], p)
    lines = text.splitlines()
    assert lines[0].startswith("# tool=railyard")
    assert lines[-2:] == ["a,b,c", "1,0.5,1/3"]
    js = write_json({"k": [1, 2]}, p)
    assert '"provenance"' in js and js == write_json({"k": [1, 2]}, p)


def test_pgm_header_and_values():
    r = np.array([[0.0, 0.5], [1.0, 0.25]])
    text = write_pgm(r, provenance())
    lines = text.splitlines()
    assert lines[0] == "P2"
    body = [l for l in lines if not l.startswith("#")]
    assert body[1:3] == ["2 2", "255"]
    assert body[3:] == ["0 128", "255 64"]


def test_classify_raster_classes_and_residual():
    N = 201
    r = classify_raster(N)
    assert set(np.unique(r)) == {0.0, 0.5, 1.0}
    # centre of the square (tau=1/2, chi=0) is liquid, corner tau=0 chi=1 frozen
    assert r[N // 2, N // 2] == 0.5 and r[0, 0] == 1.0
    res = raster_boundary_residual(r)
    assert 0 < res < 12.0 / (N - 1)
    assert raster_boundary_residual(np.ones((5, 5))) == float("inf")


def test_svg_outputs_are_deterministic():
    sp = aztec_spec(2)
    c = sample(build_backward(sp), 3)
    a = svg_ryg(sp, 3, c)
    assert a == svg_ryg(sp, 3, c)
    assert a.startswith("<svg") and a.rstrip().endswith("</svg>")
    assert 'stroke-width="3.0"' in a
    t = shuffle_sample(3, 1.0, seed=2)
    d = svg_dominos(t, 3)
    assert d.count("<polygon") == len(t) == 12
    assert svg_domino_picture(c).startswith("<svg")


def test_lozenge_picture():
    sp = build(0, 2, "LLL", "+-+", [Fraction(1, 2)] * 3)
    c = fundamental_covering(sp, 3)
    assert "<line" in svg_lozenge(c)
