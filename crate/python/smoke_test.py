"""Smoke test for the hgspectra extension module.

Build and install first:  pip install --no-build-isolation ./crates/python
"""

import math

import hgspectra


def close(a, b, tol=1e-9):
    return len(a) == len(b) and all(abs(x - y) <= tol for x, y in zip(a, b))


def test_complete_spectrum():
    g = hgspectra.complete_uniform(4, 3)
    assert g.n == 4 and len(g.edges) == 4
    assert close(g.spectrum("laplacian"), [0.0, 4.0, 4.0, 4.0])
    assert close(g.spectrum("adjacency"), [-1.0, -1.0, -1.0, 3.0])


def test_hg_round_trip():
    g = hgspectra.bowtie()
    text = g.to_hg()
    assert text.splitlines()[0] == "p hg 5 2"
    assert hgspectra.Hypergraph.from_hg(text) == g


def test_oracles_and_curvature():
    g = hgspectra.bowtie()
    h, witness = g.cheeger()
    assert h == 0.5 and 1 <= len(witness) <= 2
    assert g.strong_chromatic_number() == 3
    assert math.isclose(g.ollivier_kappa(0, 2), 0.25, abs_tol=1e-9)
    assert math.isclose(sum(g.stationary()), 1.0)
    assert g.simulate(0, 50, 7) == g.simulate(0, 50, 7)


def test_audit():
    reports = hgspectra.complete_uniform(4, 3).audit(["ADJ-1", "LAP-10"])
    adj1, lap10 = reports
    assert adj1["bound_id"] == "ADJ-1" and adj1["verdict"] == "holds"
    assert abs(adj1["margin"]) <= 1e-9
    assert lap10["verdict"] == "violated" and lap10["mode"] == "audit"
    assert len(hgspectra.bowtie().audit()) == 37


def test_errors():
    for bad in (lambda: hgspectra.Hypergraph(3, [[0, 5]]),
                lambda: hgspectra.Hypergraph.from_hg("p hg 2 1\ne 1 1\n"),
                lambda: hgspectra.bowtie().audit(["NOPE-1"]),
                lambda: hgspectra.bowtie().spectrum("bogus")):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            fn()
            print(f"ok {name}")
