"""
Critical speeds and the k(v) curve
==================================

Where can a kink travel? The coupled rotation/displacement system has two
characteristic speeds, v3 and v4, plus the speed v0 at which the wavenumber
closes. This script prints them for the caption parameter sets and writes the
k(v) curve of each set to ``output/k_of_v_<name>.csv``.
"""
from pathlib import Path

import numpy as np

from cosserat_soliton import dispersion as D
from cosserat_soliton.params import fixture

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

for name in ("type_a", "type_b", "type_b_strict", "type_c", "type_d"):
    p = fixture(name)
    d = D.derive(p)
    rep = D.classify(p)
    v3 = "imaginary" if d.v3 is None else f"{d.v3:.5f}"
    print(f"{name:14s} regime {rep.regime}  v3 = {v3}  v4 = {d.v4:.5f}  v0 = {d.v0:.5f}")
    for iv in rep.allowed_intervals:
        print(f"{'':14s} kink allowed for {iv.lo:.4f} < v < {iv.hi:.4f}")

    # forbidden speeds come back undefined; they are written as empty fields
    v = np.linspace(0.0, 8.0, 801)
    k = [D.k_of_v(p, x) for x in v]
    lines = ["v,k"] + [f"{x:.17g},{pt.k:.17g}" if pt.defined else f"{x:.17g},"
                       for x, pt in zip(v, k)]
    (out / f"k_of_v_{name}.csv").write_text("\n".join(lines) + "\n")

# The weak-coupling expansion of the roots is second order in epsilon.
p = fixture("type_a")
e0 = D.approx_roots(p).epsilon
for eps in (0.02, 0.01, 0.005):
    s = np.sqrt(eps / e0)
    q = p.with_(chi1=p.chi1 * s, chi3=p.chi3 * s)
    err = abs(D.approx_roots(q).v4 - D.derive(q).v4)
    print(f"epsilon = {eps:<6g} |v4_approx - v4| = {err:.3e}")
