"""Python access to the harnack C++ core."""

import json as _json

from . import _core
from ._core import (
    a_eps_curve,
    big_H,
    catalog_ids,
    delta0,
    exact_log_residual,
    exact_log_u,
    h,
    liouville_F_log,
    min_energy,
    sharp_x0,
    solve_cauchy,
    u0_reference,
    verify_sharp_harnack,
)

__all__ = [
    "a_eps_curve", "big_H", "candidate_values", "catalog_ids", "delta0", "exact_log_residual",
    "exact_log_u", "h", "harnack_rhs_log", "liouville_F_log", "margins", "min_energy", "run",
    "sharp_x0", "solve_cauchy", "u0_reference", "verify_sharp_harnack",
]


def _eq(eq):
    return eq if isinstance(eq, str) else _json.dumps(eq)


def big_H(eq, u):  # noqa: F811
    return _core.big_H(_eq(eq), u)


def h(eq, f):  # noqa: F811
    return _core.h(_eq(eq), f)


def candidate_values(cid, t, **params):
    return _core.candidate_values(cid, _json.dumps(params), t)


def margins(cid, t, f, **params):
    return _core.margins(cid, _json.dumps(params), t, f)


def harnack_rhs_log(cid, t1, t2, dist, **params):
    return _core.harnack_rhs_log(cid, _json.dumps(params), t1, t2, dist)


def run(config):
    """Run a command config (dict); returns (exit_code, report dict).

    Config errors raise ValueError instead of returning exit code 2.
    """
    code, text = _core.run(_json.dumps(config))
    return code, _json.loads(text)
