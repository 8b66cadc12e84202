"""Integral quadratic lattices.

Lattices are dicts {"n": n, "coeffs": upper rows}, the same JSON the qlat
command line reads. Large integers may be given as ints or strings; results
come back as parsed JSON, with rationals as "a/b" strings.
"""

import json
from fractions import Fraction

from . import _qlat
from ._qlat import QlatError

__all__ = [
    "QlatError", "lattice", "diagonal", "run", "reduce", "aut_order", "isometric", "genus",
    "local_primitive", "count", "rep_numbers", "verify_lgp", "ratio", "content", "lie_so",
    "snf", "newton_lift", "greenberg_lift", "corpus", "rational",
]


def _enc(x):
    def fix(v):
        if isinstance(v, Fraction):
            return str(v)
        if isinstance(v, int) and not isinstance(v, bool) and abs(v) >= 2**63:
            return str(v)
        if isinstance(v, (list, tuple)):
            return [fix(u) for u in v]
        if isinstance(v, dict):
            return {k: fix(u) for k, u in v.items()}
        return v
    return json.dumps(fix(x))


def rational(s):
    """Fraction from a JSON rational ("a/b" or an integer)."""
    return Fraction(s)


def lattice(coeffs):
    """Lattice from the upper triangle of the coefficient matrix, row by row."""
    return {"n": len(coeffs), "coeffs": [list(r) for r in coeffs]}


def diagonal(*a):
    n = len(a)
    return {"n": n, "coeffs": [[a[i]] + [0] * (n - i - 1) for i in range(n)]}


def run(*args):
    """Runs the command line in-process; returns (exit code, parsed stdout or text)."""
    code, out, _ = _qlat.run([str(a) for a in args])
    try:
        return code, json.loads(out)
    except ValueError:
        return code, out


def reduce(l):
    return json.loads(_qlat.reduce(_enc(l)))


def aut_order(l):
    return int(json.loads(_qlat.aut_order(_enc(l))))


def isometric(a, b):
    """Change-of-basis matrix or None."""
    return json.loads(_qlat.isometric(_enc(a), _enc(b)))


def genus(l):
    return json.loads(_qlat.genus(_enc(l)))


def local_primitive(m, l, p=None):
    return json.loads(_qlat.local_primitive(_enc(m), _enc(l), "" if p is None else _enc(p)))


def count(m, l):
    return json.loads(_qlat.count(_enc(m), _enc(l)))


def rep_numbers(m, l):
    return json.loads(_qlat.rep_numbers(_enc(m), _enc(l)))


def verify_lgp(m, l):
    return json.loads(_qlat.verify_lgp(_enc(m), _enc(l)))


def ratio(l, ts):
    return json.loads(_qlat.ratio(_enc(l), list(ts)))


def content(w):
    return json.loads(_qlat.content(_enc(w)))


def lie_so(l):
    return json.loads(_qlat.lie_so(_enc(l)))


def snf(p, e, a):
    return json.loads(_qlat.snf(_enc(p), e, _enc(a)))


def newton_lift(system, x0, p, e):
    return [int(v) for v in json.loads(_qlat.newton_lift(_enc(system), _enc(x0), _enc(p), e))]


def greenberg_lift(system, w, p, k, budget=200000):
    return json.loads(_qlat.greenberg_lift(_enc(system), _enc(w), _enc(p), k, budget))


def corpus(seed, m, n, det_bound, count):
    return json.loads(_qlat.corpus(seed, m, n, _enc(det_bound), count))
