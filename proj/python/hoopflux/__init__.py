"""Exact hoop, flux and gauge-reduction calculus on combinatorial scenes."""

from fractions import Fraction

from . import _core
from ._core import Error, Scene, load_scene, parse_scene, run

__all__ = [
    "Error",
    "Scene",
    "constrain",
    "epsilon",
    "g_matrix",
    "gauge_reduce",
    "hoop_basis",
    "load_scene",
    "parse_scene",
    "run",
]


def _matrix(rows):
    return [[Fraction(x) for x in row] for row in rows]


def epsilon(scene, face, loop):
    """Signed crossing number of `face` with `loop`, as a Fraction."""
    return Fraction(_core.epsilon(scene, face, loop))


def hoop_basis(scene, loops):
    return _core.hoop_basis(scene, list(loops))


def g_matrix(scene, loops, faces):
    """G of the single-face momenta against the hoop basis of `loops`."""
    return _matrix(_core.g_matrix(scene, list(loops), list(faces)))


def gauge_reduce(scene, graph, poly):
    """Either a Fraction (no loops) or {"labels", "poly"} over the loop frame."""
    out = _core.gauge_reduce(scene, graph, poly)
    return Fraction(out) if isinstance(out, str) else out


def constrain(scene, graph, faces, hint=None):
    out = _core.constrain(scene, graph, list(faces), hint)
    out["kernel"] = _matrix(out["kernel"])
    out["g"] = _matrix(out["g"])
    return out
