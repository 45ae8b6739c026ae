"""Smoke test for the pymultisym extension module.

Build and run from the repository root:

    cargo build --release -p pymultisym --features extension-module
    cp target/release/libpymultisym.so python/pymultisym.so
    python3 python/smoke_test.py

or `maturin develop -m crates/python/Cargo.toml` and run the script directly.
"""

import itertools
import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import pymultisym as ms


def close(a, b, tol):
    return abs(a - b) <= tol


def main():
    b = ms.Basis(2, 2)
    assert b.exponents() == [[1, 0], [0, 1], [2, 0], [1, 1], [0, 2]]
    assert len(b) == 5
    assert len(ms.Basis(2, 2, include_constant=True)) == ms.generator_count(2, 2) == 6

    x = ms.Configuration([[0.3, -1.2], [2.0, 0.5], [-0.7, 0.1]])
    b3 = ms.Basis(2, 3)
    z = ms.embed(b3, x)
    for sigma in itertools.permutations(range(3)):
        assert ms.embed(b3, x.permuted(list(sigma))) == z

    sq = sum(c * c for p in x.points() for c in p)
    assert close(ms.reconstruct_norm(b3, z), sq, 1e-12 * sq)

    dup = ms.Configuration([[1.0, 2.0], [0.0, 0.0], [1.0, 2.0]])
    r = ms.classify_rank(b3, dup)
    assert not r["full_column_rank"] and r["coincident_pair"] == (0, 2)
    assert len(ms.jacobian(b3, x)) == len(b3)

    y = ms.Configuration([[0.0, 1.0], [1.0, 0.0]])
    w = ms.Configuration([[0.0, 0.0], [1.0, 1.0]])
    dist, matching = ms.quotient_distance(y, w)
    assert close(dist, math.sqrt(2.0), 1e-12), dist
    assert sorted(matching) == [0, 1]
    assert ms.orbit_equal(y, y.permuted([1, 0]))
    p = ms.separating_polynomial(y, w)
    assert abs(p(y) - p(w)) > 1e-9

    assert ms.invert_d1([6.0, 14.0, 36.0]) == [1.0, 2.0, 3.0]

    f = ms.fiber([0.0, 0.0, 1.0, 1.0])
    assert f["case"] == "TwoRegular" and f["w"] == [-1.0, 1.0]
    assert ms.fiber([2.0, 2.0, 2.0, 2.0])["case"] == "OneSingular"
    assert not ms.image_membership([2.0, 0.0, 1.0, 0.0])

    configs = [ms.Configuration([[0.1 * k], [0.3 - 0.05 * k]]) for k in range(6)]
    values = [sum(abs(c[0]) for c in cfg.points()) for cfg in configs]
    g = ms.fit_g(1, configs, values)
    for cfg, v in zip(configs, values):
        assert g.at(cfg.permuted([1, 0])) == v
    g2 = ms.FittedDecomposition.from_json(g.to_json())
    assert g2.at(configs[2]) == values[2]

    bad = configs + [configs[0].permuted([1, 0])]
    report = ms.check_symmetry(1, bad, values + [values[0] + 1.0])
    assert len(report) == 1 and report[0][1] == [0, 6]
    try:
        ms.fit_g(1, bad, values + [values[0] + 1.0])
    except ms.MultisymError as e:
        assert "symmetry" in str(e)
    else:
        raise AssertionError("asymmetric dataset accepted")

    for name, target in [("lipschitz-loss", 0.5), ("c1-loss", 2.0 / 3.0), ("smooth-control", 1.0)]:
        rep = ms.probe(name)
        assert close(rep["exponent"], target, 0.05), (name, rep["exponent"])

    try:
        ms.Basis(0, 2)
    except ValueError:
        pass
    else:
        raise AssertionError("d = 0 accepted")

    print("pymultisym smoke test passed")


if __name__ == "__main__":
    main()
