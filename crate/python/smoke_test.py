"""Smoke test for the toric_cy_py extension module.

Build and install first:

    pip install maturin
    maturin build -m crates/py/Cargo.toml --release
    pip install target/wheels/toric_cy_py-*.whl
"""

from fractions import Fraction

import toric_cy_py as tc


def main():
    assert "X5" in tc.catalog()

    quintic = tc.catalog_entry("X5")
    assert quintic.dim == 3
    h = quintic.hodge()
    assert (h["h11"], h["h21"]) == (1, 101), h
    assert h["euler"] == h["euler_oracle"] == -200

    p4 = quintic.fan
    assert p4.is_complete() and p4.is_smooth() and p4.is_fano()
    assert p4.class_group() == (1, [])
    assert p4.cohomology([-5, 0, 0, 0, 0]) == [0, 0, 0, 0, 1]
    assert p4.intersection([4, 0, 0, 0, 0]) == Fraction(1)

    x6 = tc.catalog_entry("X6")
    assert x6.fan.intersection([4, 0, 0, 0, 0]) == Fraction(1, 2)
    assert x6.hodge()["h21"] == 103

    cert = tc.catalog_entry("X10").certificate()
    assert cert["verdict"] == "smooth" and len(cert["per_ray"]) == 5

    # round trip through the file format
    again = tc.CompleteIntersection.from_json(quintic.to_json())
    assert again.euler_characteristic() == -200

    torsion = tc.Fan([[1, 0], [-1, 2], [-1, -2]], [[0, 1], [1, 2], [2, 0]])
    assert torsion.class_group() == (1, [2])

    k3 = tc.CompleteIntersection(p4, [[2, 0, 0, 0, 0], [3, 0, 0, 0, 0]], True)
    assert k3.certificate()["verdict"] == "rejected"
    try:
        k3.hodge()
    except tc.ToricCyError:
        pass
    else:
        raise AssertionError("K3 hodge should fail")

    print("smoke test passed")


if __name__ == "__main__":
    main()
