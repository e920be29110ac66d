"""Shared fixtures: standard parameter sweeps and session-scoped caches.

Root solving and the per-root check battery are the expensive parts of the
suite, and several test modules (plus the acceptance criteria) need the
same (n, m) points, so both are memoized for the session.
"""

import pytest

from talex import Scalar, solve_s_roots
from talex.pretzel import build_context
from talex.verify import check_context

STD_M = (("1.2", "0.4"), ("0.9", "-0.2"))

_root_cache = {}
_ctx_cache = {}
_check_cache = {}


def std_m_scalars(prec=256):
    return [Scalar.from_strings(re, im, prec) for re, im in STD_M]


def cached_roots(n, m_pair, prec=256):
    key = (n, m_pair, prec)
    if key not in _root_cache:
        m = Scalar.from_strings(*m_pair, prec=prec)
        _root_cache[key] = (m, solve_s_roots(n, m, prec))
    return _root_cache[key]


def cached_contexts(n, m_pair, prec=256):
    """One context per nondegenerate root, memoized."""
    key = (n, m_pair, prec)
    if key not in _ctx_cache:
        m, roots = cached_roots(n, m_pair, prec)
        _ctx_cache[key] = [
            build_context(n, m, rec.s, prec=prec, strict=False,
                          residual=rec.residual)
            for rec in roots if not rec.flags
        ]
    return _ctx_cache[key]


def cached_checks(n, m_pair, prec=256, independence=True):
    """check_context outcomes per nondegenerate root, memoized."""
    key = (n, m_pair, prec, independence)
    if key not in _check_cache:
        _check_cache[key] = [
            (ctx, check_context(ctx, independence=independence))
            for ctx in cached_contexts(n, m_pair, prec)
        ]
    return _check_cache[key]


@pytest.fixture(scope="session")
def std_m_pairs():
    return STD_M


@pytest.fixture(scope="session")
def default_ctx():
    """A single convenient nondegenerate context (n=2, first standard m)."""
    return cached_contexts(2, STD_M[0])[0]
