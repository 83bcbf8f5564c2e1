"""Smoke test for the fexlab_py extension.

Build first:  pip install --no-build-isolation -e crates/fexlab-py
"""

import json

import fexlab_py as fx


def main():
    counts = [len(fx.fsd(m)) for m in range(4)]
    assert counts == [1, 3, 10, 49], counts
    assert ("0", "01") in fx.fsd(1).generators
    assert fx.fsd(2).leq("0", "012")

    checked, failures = fx.check_cosimplicial(3)
    assert checked > 0 and not failures

    nerve = fx.fsd(3).nerve()
    assert nerve.homology() == [(1, [])] + [(0, [])] * 3
    assert fx.SimplicialSet.circle().homology() == [(1, []), (1, [])]
    assert fx.SimplicialSet.simplex(1).fex_counts(1) == [2, 3]

    r = fx.pi0("Z", [2], [2], 1)
    assert (r["classes"], r["group"]) == (2, "Z/2"), r
    assert fx.ext_resolution("Z/4", [2], [2], 2) == "Z/2"
    h = fx.higher_ext("Z/4", [2], [2], 2)
    assert h["group"] == "Z/2" and h["stable"], h

    z4 = fx.Module("Z/4", [4, 2])
    assert z4.order() == 8 and z4.hom_count(fx.Module("Z/4", [2])) == 4

    nonsplit = fx.Extension.from_json(
        json.dumps({"ring": "Z", "a": [2], "b": [2], "middles": [[4]], "hinges": [], "maps": [[[2]], [[1]]]})
    )
    assert nonsplit.cocycle() == [1]
    doubled = fx.baer_sum(nonsplit, nonsplit)
    assert doubled.cocycle() == [0]

    second = fx.Extension.from_json(
        json.dumps({"ring": "Z", "a": [4], "b": [2], "middles": [[8]], "hinges": [], "maps": [[[2]], [[1]]]})
    )
    third, bottom, conditions = fx.et4(nonsplit, second)
    assert all(conditions) and third.a.invariants == [2]

    rows = fx.verify(quick=True, seed=0)
    assert len(rows) == 12 and all(r[2] for r in rows), [r for r in rows if not r[2]]
    print("smoke test passed")


if __name__ == "__main__":
    main()
