"""Exact oracles against frozen values and against the brute-force references in ``brute``."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import brute
from conftest import NAMED
from pwtd._accel import HAVE_NUMBA, resolve_backend
from pwtd._kernels import subset_table
from pwtd.decomposition import forest_violations, pd_violations
from pwtd.graph import Graph, generate
from pwtd.oracles import (
    MAX_ORACLE_N,
    OracleLimitError,
    exact_pathwidth,
    exact_treedepth,
    longest_path_order,
    min_b,
)

# (treedepth, pathwidth, longest path order), computed by brute.py and frozen
FROZEN = {
    "P1": (1, 0, 1),
    "P4": (3, 1, 4),
    "P7": (3, 1, 7),
    "C4": (3, 2, 4),
    "C5": (4, 2, 5),
    "C8": (4, 2, 8),
    "K3": (3, 2, 3),
    "K5": (5, 4, 5),
    "E3": (1, 0, 1),
    "star5": (2, 1, 3),
    "K33": (4, 3, 6),
    "petersen": (6, None, 10),
    "bl32": (4, 3, 4),
    "bl41": (4, 1, 8),
    "bl42": (6, 3, 8),
}

BACKENDS = ["numpy"] + (["numba"] if HAVE_NUMBA else [])


@pytest.mark.parametrize("name", sorted(FROZEN))
def test_frozen_values(name):
    g = NAMED[name]
    td, pw, lp = FROZEN[name]
    res = exact_treedepth(g)
    assert res.value == td
    assert not forest_violations(g, res.witness) and res.witness.height == td
    if pw is not None:
        pres = exact_pathwidth(g)
        assert pres.value == pw
        assert not pd_violations(g, pres.witness) and pres.witness.width == pw
    path = longest_path_order(g)
    assert path.value == lp
    assert len(set(path.witness)) == lp
    assert all(g.has_edge(u, v) for u, v in zip(path.witness, path.witness[1:]))


def test_min_b():
    assert [min_b(x) for x in (1, 2, 3, 4, 7, 8)] == [1, 2, 2, 3, 3, 4]
    with pytest.raises(ValueError):
        min_b(0)


def test_size_limit():
    g = Graph.from_edges(MAX_ORACLE_N + 1, [])
    for fn in (exact_treedepth, exact_pathwidth, longest_path_order):
        with pytest.raises(OracleLimitError):
            fn(g)


@pytest.mark.parametrize("kind", ["treedepth", "vertex_separation", "path_ends"])
def test_backends_agree(kind):
    for seed in range(6):
        g, _ = generate("random_bounded_pw", {"n": 11, "a": 4, "p": 0.6}, seed)
        tables = [subset_table(kind, g.neighbor_masks, b) for b in BACKENDS]
        for t in tables[1:]:
            np.testing.assert_array_equal(tables[0], t)


def test_resolve_backend():
    assert resolve_backend("numpy") == "numpy"
    with pytest.raises(ValueError):
        resolve_backend("cuda")


small_graphs = st.integers(1, 7).flatmap(
    lambda n: st.tuples(st.just(n), st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))))
).map(lambda d: Graph.from_edges(d[0], [(u, v) for u, v in d[1] if u != v]))


@settings(max_examples=60, deadline=None)
@given(small_graphs)
def test_oracles_match_brute_force(g):
    assert exact_treedepth(g).value == brute.treedepth(g.n, g.edges)
    assert exact_pathwidth(g).value == brute.pathwidth(g.n, g.edges)
    assert longest_path_order(g).value == brute.longest_path(g.n, g.edges)


@settings(max_examples=40, deadline=None)
@given(small_graphs)
def test_oracle_laws(g):
    td = exact_treedepth(g).value
    pw = exact_pathwidth(g).value
    lp = longest_path_order(g).value
    assert pw + 1 <= td
    assert 2 ** td > lp
    assert td <= lp


def test_env_flag_selects_numpy():
    import subprocess
    import sys

    code = (
        "from pwtd import _accel; from pwtd.oracles import exact_treedepth; from pwtd.graph import cycle_graph;"
        "print(_accel.USE_NUMBA, _accel.resolve_backend(None), exact_treedepth(cycle_graph(9)).value)"
    )
    env = {"PWTD_DISABLE_NUMBA": "1", "PATH": "/usr/bin:/bin"}
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True).stdout
    assert out.split() == ["False", "numpy", "5"]
