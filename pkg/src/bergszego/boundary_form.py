"""Pull back the 1/16 three-form used to derive the ball terms to the unit 3-sphere.

The form is

    1/16 [ z1 dz2^dzb1^dzb2 - z2 dz1^dzb1^dzb2
           + zb1 dzb2^dz1^dz2 - zb2 dzb1^dz1^dz2 ]

and is evaluated on the coordinate frame (d/ds, d/dtheta1, d/dtheta2) of the
chart z1 = cos s e^{i theta1}, z2 = sin s e^{i theta2}.  The result is
returned as a density relative to surface measure, oriented as the boundary
of the ball (outward normal first).
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .core import PolyObservable, eval_poly_array
from .quadrature import MEASURE, Resolution, exact_moment, integrate, sphere3_rule

FORM_SCALE = Fraction(1, 16)

# (coefficient sign, coefficient variable, wedge of three differentials)
FORM_TERMS = (
    (+1, "z1", ("z2", "zb1", "zb2")),
    (-1, "z2", ("z1", "zb1", "zb2")),
    (+1, "zb1", ("zb2", "z1", "z2")),
    (-1, "zb2", ("zb1", "z1", "z2")),
)


def _chart_frame(z1: np.ndarray, z2: np.ndarray):
    """Coordinate values and their derivatives along (s, theta1, theta2)."""
    c = np.abs(z1)
    sn = np.abs(z2)
    e1 = z1 / c
    e2 = z2 / sn
    zero = np.zeros_like(z1)
    d = {
        "z1": (-sn * e1, 1j * z1, zero),
        "z2": (c * e2, zero, 1j * z2),
    }
    d["zb1"] = tuple(np.conj(v) for v in d["z1"])
    d["zb2"] = tuple(np.conj(v) for v in d["z2"])
    vals = {"z1": z1, "z2": z2, "zb1": np.conj(z1), "zb2": np.conj(z2)}
    return vals, d, c * sn


def _det3(rows) -> np.ndarray:
    (a, b, c), (d, e, f), (g, h, i) = rows
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def chart_orientation() -> int:
    """+1 when (d/ds, d/dtheta1, d/dtheta2) is the boundary orientation of the ball."""
    s, t1, t2 = 0.7, 0.3, 1.1
    p = np.array([np.cos(s) * np.cos(t1), np.cos(s) * np.sin(t1), np.sin(s) * np.cos(t2), np.sin(s) * np.sin(t2)])
    ds = np.array([-np.sin(s) * np.cos(t1), -np.sin(s) * np.sin(t1), np.cos(s) * np.cos(t2), np.cos(s) * np.sin(t2)])
    dt1 = np.array([-np.cos(s) * np.sin(t1), np.cos(s) * np.cos(t1), 0, 0])
    dt2 = np.array([0, 0, -np.sin(s) * np.sin(t2), np.sin(s) * np.cos(t2)])
    # R^4 ordered (x1, y1, x2, y2), outward normal first
    return int(np.sign(np.linalg.det(np.stack([p, ds, dt1, dt2]))))


def form_density(z1: np.ndarray, z2: np.ndarray) -> np.ndarray:
    """Ratio of the pulled-back 3-form to surface measure at sphere points."""
    vals, d, area = _chart_frame(np.asarray(z1, complex), np.asarray(z2, complex))
    total = np.zeros_like(vals["z1"])
    for sign, var, wedge in FORM_TERMS:
        total = total + sign * vals[var] * _det3([d[w] for w in wedge])
    return float(FORM_SCALE) * chart_orientation() * total / area


def form_integral(g, r: Resolution | None = None, workers: int = 1) -> complex:
    """Integral over the sphere of ``g(z1, z2)`` against the 3-form."""
    rule = sphere3_rule(r)
    return integrate(rule, lambda a, b: g(a, b) * form_density(a, b), workers)


def measure_audit(f: PolyObservable | None = None, r: Resolution | None = None) -> dict:
    """Compare the form's mass (optionally weighted by ``f``) with surface measure."""
    if f is None:
        f = PolyObservable.constant(2)
    mass = form_integral(lambda a, b: eval_poly_array(f, (a, b)), r)
    reference = 0j
    for t in f.terms:
        reference += complex(t.coeff) * complex(exact_moment("sphere3", t.holo, t.anti))
    ratio = mass / reference if reference != 0 else None
    return {
        "f": str(f),
        "form_mass": mass,
        "sigma_mass": reference,
        "ratio": ratio,
        "sphere_area": MEASURE["sphere3"],
    }
