"""Helpers for driving the command line in-process."""
import io
import json
from fractions import Fraction

from plvolume import build_complex, orient, pc_from_cocycle, write_mesh
from plvolume.cli import main
from plvolume.generators import moebius_strip, square_disk


def run(*argv):
    buf = io.StringIO()
    code = main([str(a) for a in argv], out=buf)
    text = buf.getvalue()
    try:
        payload = json.loads(text)
    except ValueError:
        payload = text
    return code, payload


def square_mesh(path, forms=None):
    K = square_disk(1)
    forms = forms or {"omega1": [1, 1], "omega2": [Fraction(3, 2), Fraction(1, 2)]}
    path.write_text(write_mesh(K, {k: pc_from_cocycle(K, v) for k, v in forms.items()}))
    return path


def split_mesh(path):
    verts = [(0, 0), (1, 0), (0, 1), (1, 1), (5, 5), (6, 5), (5, 6), (6, 6)]
    K = orient(build_complex(verts, [[0, 1, 2], [1, 2, 3], [4, 5, 6], [5, 6, 7]]))
    forms = {
        "omega1": pc_from_cocycle(K, [1, 1, 1, 1]),
        "omega2": pc_from_cocycle(K, [2, 1, Fraction(1, 2), Fraction(1, 2)]),
    }
    path.write_text(write_mesh(K, forms))
    return path


def moebius_mesh(path):
    path.write_text(write_mesh(moebius_strip()))
    return path
