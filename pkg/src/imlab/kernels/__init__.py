"""Kernel backend selection.

The hot sweeps (frame suites, valuation scans, formula-bank evaluation) run
as numba-jitted scalar loops when numba is importable, or as vectorized
numpy code otherwise.  Set ``IMLAB_BACKEND=numpy`` or ``IMLAB_BACKEND=numba``
to force a backend; the default (``auto``) prefers numba.
"""

from __future__ import annotations

import os

from ._layout import (  # noqa: F401
    FLAG_FORWARD, FLAG_BACKWARD, FLAG_DOWNWARD, FLAG_LOCLIN,
    FLAG_MOD_REFLEXIVE, FLAG_MOD_IRREFLEXIVE,
    OP_BOT, OP_PROP, OP_AND, OP_OR, OP_IMP, OP_BOX, OP_DIA,
    S_FRAMES, S_BACKWARD, S_BWD_COLLAPSE_VIOL, S_DOWNWARD, S_DWN_COLLAPSE_VIOL,
    S_MOD_REFL, S_MEET_TOPOLOGY_VIOL, S_CLOSURE_INDUCTION_VIOL, S_MOD_IRREFL, S_DERIV_INDUCTION_LIT_APPL,
    S_DERIV_INDUCTION_LIT_VIOL, S_LEAD_IRREFL, S_DERIV_INDUCTION_COR_VIOL, S_TRANSFER_APPL,
    S_TRANSFER_COARSE_VIOL, S_TRANSFER_DREG_VIOL, S_TRANSFER_BREG_VIOL, SUITE_SIZE,
    SUITE_NAMES,
)

_choice = os.environ.get("IMLAB_BACKEND", "auto").lower()
if _choice not in ("auto", "numba", "numpy"):
    raise ValueError(f"IMLAB_BACKEND must be auto, numba, or numpy (got {_choice!r})")

if _choice in ("auto", "numba"):
    try:
        from . import _numba as _impl
        BACKEND = "numba"
    except ImportError:
        if _choice == "numba":
            raise
        from . import _numpy as _impl
        BACKEND = "numpy"
else:
    from . import _numpy as _impl
    BACKEND = "numpy"


def backend_name() -> str:
    return BACKEND


unpack_rows = _impl.unpack_rows
pack_rows = _impl.pack_rows
compose_rows = _impl.compose_rows
transitive_closure_rows = _impl.transitive_closure_rows
reflexive_transitive_closure_rows = _impl.reflexive_transitive_closure_rows
frame_flags = _impl.frame_flags
space_tables = _impl.space_tables
bank_eval_operator = _impl.bank_eval_operator
bank_eval_relational = _impl.bank_eval_relational
first_refuting_valuation = _impl.first_refuting_valuation
frame_suite = _impl.frame_suite
hed_loclin_scan = _impl.hed_loclin_scan
