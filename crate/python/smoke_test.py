"""Smoke test for the dsrg_circulant extension module.

Build and install first, e.g.  maturin develop -m crates/python/Cargo.toml
"""
import random

import dsrg_circulant as dc


def main():
    # ring arithmetic
    p = dc.make_p(2)
    assert p.coeffs == [1, 1, 1, 0, 0, 0, 0], p.coeffs
    assert p.modulus == 7 and p.eval_at_one() == 3
    x = dc.CycPoly.monomial(7, 1)
    assert x * dc.CycPoly.monomial(7, 6) == dc.CycPoly.monomial(7, 0)
    assert x.shift(6) == dc.CycPoly.monomial(7, 0)
    big = dc.CycPoly([10**30, -1, 0])
    assert (big * big).coeffs[0] == 10**60
    assert str(dc.CycPoly.parse("4:0,1,1,0")) == "x + x^2"

    # worked example
    s = dc.worked_example()
    assert s.infer_params() == (8, 3, 2, 1, 1)
    assert s.verify((8, 3, 2, 1, 1), "matrix") and s.verify((8, 3, 2, 1, 1), "count")
    sx = s.compactify(2)
    assert str(sx.entry(0, 0)) == "x^3" and str(sx.entry(0, 1)) == "x + x^2"
    assert sx.to_digraph() == s

    # family
    for n in (2, 3, 4):
        params = dc.params_for(n)
        g = dc.family_digraph(n)
        assert g.order == params[0]
        assert g.verify(params), n
        assert not g.verify((params[0], params[1], params[2], params[3], params[4] - 1))
        a = dc.family_compact(n)
        assert a.is_binary() and a.to_digraph() == g
    assert dc.family_digraph(2).aut_order() == 896
    assert dc.build_cn(1)[0] == [0, 2, 2, 2, 2, 1, 2, 2, 2]

    # canonical forms survive relabelling
    g = dc.family_digraph(2)
    perm = list(range(g.order))
    random.Random(7).shuffle(perm)
    h = g.relabel(perm)
    assert h != g and h.canonical_form() == g.canonical_form()
    iso = g.isomorphism(h)
    assert iso is not None and g.relabel(iso) == h

    # search + classification
    sols, stats = dc.run_search(1)
    assert stats["complete"] and len(sols) == 24
    classes = dc.classify([c.to_digraph() for c in sols])
    orders = sorted(order for _, order in classes)
    assert orders == [160, 5120, 5120, 5120, 1244160, 1244160], orders
    _, stats = dc.run_search(3, budget=50)
    assert not stats["complete"]

    try:
        dc.family_digraph(1)
    except ValueError:
        pass
    else:
        raise AssertionError("n = 1 should be rejected")

    print("smoke test passed")


if __name__ == "__main__":
    main()
