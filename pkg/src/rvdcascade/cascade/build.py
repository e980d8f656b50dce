"""Dispatch from (stage, form, kind) to the concrete operator builders."""
from __future__ import annotations

from ..errors import StageArityMismatch
from ..shiftops import Sampled, ShiftOperator1D, ShiftOperatorND
from . import n_variable as nv
from . import one_variable as ov
from .params import DegenParams

FORMS = ("plain", "gauged", "x-form", "barred")


def nd_to_1d(op: ShiftOperatorND) -> ShiftOperator1D:
    if op.N != 1:
        raise StageArityMismatch("only an N=1 operator can be viewed as one-variable")
    v, w, u = op.v[0], op.w[0], op.u
    return ShiftOperator1D(Sampled(lambda z: v((z,))), Sampled(lambda z: w((z,))),
                           Sampled(lambda z: u((z,))), op.modulus)


def build_stage(stage: int, form: str, params: DegenParams, kind: str = "exact"):
    """Build a degenerate operator.

    ``form`` is one of plain (the limit operator of the stage), gauged
    (after the stage's multiplication and quasi-periodic conjugation), x-form
    (written in x = exp(2 pi i z)) or barred (stage 3 only, the
    Pochhammer-gauged form). ``kind='exact'`` gives Laurent-rational
    coefficients (N = 1 only); ``kind='sampled'`` gives the coefficient-map
    construction, returned as a one-variable operator when N = 1.
    """
    params.check_stage(stage)
    if form not in FORMS:
        raise ValueError(f"form must be one of {FORMS}, got {form!r}")
    if form == "barred" and stage != 3:
        raise ValueError("the barred form exists for stage 3 only")
    if kind not in ("exact", "sampled"):
        raise ValueError(f"kind must be 'exact' or 'sampled', got {kind!r}")
    if kind == "exact":
        if params.N != 1:
            raise StageArityMismatch("exact coefficients are available for N=1 only")
        table = {"plain": ov.PLAIN, "gauged": ov.GAUGED, "x-form": ov.XFORM}
        if form == "barred":
            return ov.stage3_barred(params)
        return table[form][stage](params)
    if form in ("x-form", "barred"):
        raise ValueError(f"{form} is an exact one-variable form")
    table = nv.PLAIN_ND if form == "plain" else nv.GAUGED_ND
    op = table[stage](params)
    return nd_to_1d(op) if params.N == 1 else op
