"""Smoke test for the stirling_py extension.

Build and install it first, for example with
``pip install --no-build-isolation -e crates/py``.
"""

import json
import math
from fractions import Fraction

import stirling_py as st


def main():
    assert st.count(2, 3) == 4
    assert st.count(5, 2) == 945
    assert st.count(30, 4) == math.prod(4 * i + 1 for i in range(1, 30))

    perms = st.enumerate(2, 2)
    assert perms == [[1, 1, 2, 2], [1, 2, 2, 1], [2, 2, 1, 1]]
    assert all(st.is_valid(p) for p in perms)
    assert not st.is_valid([1, 2, 1, 2])

    s = st.stats([1, 1, 2, 2, 3, 3, 3, 2, 1])
    assert (s["ascents"], s["descents"], s["plateaux"]) == (3, 3, 4)
    assert [b[0] for b in st.blocks([1, 1, 2, 2, 3, 3, 3, 2, 1, 4, 4, 5, 5, 5, 4, 6, 6, 6])] == [1, 4, 6]

    w = st.sample(40, 3, seed=5)
    assert len(w) == 120 and st.is_valid(w)
    assert st.sample(40, 3, seed=5) == w
    parent, slot = st.decode_ary_tree(w, 3)
    assert st.encode_ary_tree(4, parent, slot) == w

    pmf = st.block_pmf(2, 2)
    assert pmf == [Fraction(1, 3), Fraction(2, 3)]
    assert all(isinstance(p, Fraction) for p in st.block_pmf(6, 3))
    assert sum(st.block_pmf(6, 3)) == 1
    assert st.means(2, 2)["ascents"] == Fraction(5, 3)
    assert st.binomial_moment(5, 2, 0) == 1
    cov = st.covariance("tnormal", k=2)
    assert cov[0][0] == Fraction(1, 9) and cov[0][1] == Fraction(-1, 18)

    assert abs(st.limit_moment(2, 1.0) - math.sqrt(math.pi)) < 1e-12
    value, error = st.limit_density(2, 1.0)
    assert 0 < value < 1 and error < 1e-12

    counts = st.urn_a(3, 100, 1)
    assert sum(counts) == 3 + 2 * 100

    assert st.verify(3, 2)

    spec = {
        "generator": {"kind": "blockUrn"},
        "n": 200,
        "k": 2,
        "replicates": 300,
        "statistics": ["white", "blocks"],
        "seed": 4,
    }
    report = json.loads(st.experiment(json.dumps(spec), threads=2))
    assert report["passed"], report
    assert report == json.loads(st.experiment(json.dumps(spec), threads=1))

    try:
        st.block_pmf(0, 2)
    except ValueError:
        pass
    else:
        raise AssertionError("order 0 accepted")

    print("stirling_py smoke test passed")


if __name__ == "__main__":
    main()
