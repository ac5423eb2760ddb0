import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from fairfan.arrangement import (
    A,
    A_TILDE,
    PosetError,
    build_poset,
    chain_dim_of_subsets,
    compare_formulas,
    small_fiber_report,
    is_down_closed,
    longest_chain,
    orbit_summary,
    order_complex_dim,
    phi_image,
    transitive_closure_matches,
)


def naive_elements(m, n, c, variant):
    """Every 0/1 matrix, filtered by the admissibility rules."""
    rows = m - 1 if variant == A else m
    g = m - c + 1
    out = set()
    for bits in itertools.product((0, 1), repeat=rows * n):
        z = [bits[r * n:(r + 1) * n] for r in range(rows)]
        cols = [sum(z[r][k] for r in range(rows)) for k in range(n)]
        if not any(cols):
            continue
        if any(0 < s < g for s in cols):
            continue
        if any(all(row) for row in z):
            continue
        if variant == A_TILDE and any(s == rows for s in cols):
            continue
        out.add(tuple(tuple(bool(x) for x in row) for row in z))
    return out


small_params = [
    (m, n, c, v)
    for v in (A, A_TILDE)
    for m in range(2, 5)
    for n in range(1, 4)
    for c in range(2, m + 1)
    if (m if v == A_TILDE else m - 1) * n <= 12
]


@pytest.mark.parametrize("m,n,c,variant", small_params)
def test_explicit_poset_matches_naive_enumeration(m, n, c, variant):
    p = build_poset(m, n, c, variant)
    assert {e.zeros for e in p.elements} == naive_elements(m, n, c, variant)
    assert transitive_closure_matches(p)
    assert order_complex_dim(p) == longest_chain(p)


@pytest.mark.parametrize("m,n,c,variant", small_params)
def test_orbit_engine_matches_explicit(m, n, c, variant):
    p = build_poset(m, n, c, variant)
    s = orbit_summary(m, n, c, variant)
    image, top = phi_image(p)
    assert s.poset_dim == order_complex_dim(p)
    assert s.fiber_dim == order_complex_dim(p.fiber())
    assert s.has_top == top
    assert s.image_sizes == tuple(sorted({len(q) for q in image}))
    assert s.image_dim == chain_dim_of_subsets(image)
    assert is_down_closed(image)


def test_smallest_fiber_parameters():
    p = build_poset(4, 2, 3, A)
    assert len(p.elements) == 8 and order_complex_dim(p) == 1
    assert p.fiber().elements == []
    assert order_complex_dim(p.fiber()) == -1
    rep = small_fiber_report()
    assert rep["discrepancy"] and rep["fiber_size"] == 0 and not rep["has_top"]


def test_small_examples():
    s = orbit_summary(3, 2, 3, A)
    assert s.has_top and s.fiber_dim == 0
    assert not orbit_summary(4, 2, 3, A).has_top
    p = build_poset(5, 1, 3, A)
    assert p.elements == [] and order_complex_dim(p) == -1


def test_exports():
    p = build_poset(3, 2, 3, A)
    dot = p.to_dot([0])
    assert dot.startswith("digraph poset {") and dot.count("->") == len(p.hasse_edges)
    data = json.loads(json.dumps(p.to_json()))
    assert len(data["elements"]) == len(p.elements)


def test_size_cap(monkeypatch):
    monkeypatch.setenv("FAIRFAN_MAX_POSET", "10")
    with pytest.raises(PosetError, match="FAIRFAN_MAX_POSET"):
        build_poset(4, 3, 3, A)
    with pytest.raises(PosetError):
        build_poset(3, 2, 4, A)


@given(st.integers(2, 6), st.integers(1, 3), st.data(), st.sampled_from([A, A_TILDE]))
@settings(max_examples=30, deadline=None)
def test_formula_report_is_consistent(m, n, data, variant):
    c = data.draw(st.integers(2, m))
    rep = compare_formulas(m, n, c, variant)
    assert rep.ok, rep.to_json()
