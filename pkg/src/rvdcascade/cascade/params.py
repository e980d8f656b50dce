"""Parameter stores and the parameter shifts used by the degeneration limits."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

from ..errors import StageArityMismatch
from ..qcalc import ModulusPair, to_mp

# shift vectors: stage k limit starts from the gauged stage k-1 operator
V8 = (1, 1, 1, 1, -1, -1, -1, -1)
V1 = (1, 1, -1, -1)
V2 = (1, 1, 1, 1)


@dataclass(frozen=True)
class DegenParams:
    """Additive parameters of a degenerate operator.

    Stage 1 uses eight parameters ``h`` (the shifted h~_n) and an empty ``l``.
    Stages 2-4 use four ``h`` and four ``l`` (with l_n = -h_{n+4}).
    ``mu`` is only read by the N-variable operators.
    """

    modulus: ModulusPair
    h: tuple
    l: tuple = ()
    mu: complex = 0.0
    N: int = 1

    def __post_init__(self):
        object.__setattr__(self, "h", tuple(self.h))
        object.__setattr__(self, "l", tuple(self.l))
        if self.N < 1:
            raise ValueError("N must be positive")

    def check_stage(self, stage: int) -> None:
        if stage not in (1, 2, 3, 4):
            raise StageArityMismatch(f"stage must be 1..4, got {stage}")
        if stage == 1:
            ok = len(self.h) == 8 and len(self.l) == 0
        else:
            ok = len(self.h) == 4 and len(self.l) == 4
        if not ok:
            raise StageArityMismatch(
                f"stage {stage} needs {'8 h' if stage == 1 else '4 h and 4 l'}, "
                f"got {len(self.h)} h and {len(self.l)} l")

    @property
    def h8(self) -> tuple:
        """Eight-parameter view for stage 2 formulas: (h_1..h_4, -l_1..-l_4)."""
        if len(self.h) == 8:
            return self.h
        return tuple(self.h) + tuple(-x for x in self.l)

    def to_mp(self) -> "DegenParams":
        return DegenParams(self.modulus.to_mp(), to_mp(self.h), to_mp(self.l), to_mp(self.mu), self.N)

    def with_modulus(self, modulus: ModulusPair) -> "DegenParams":
        return replace(self, modulus=modulus)


def trig_modulus(a_minus) -> ModulusPair:
    """Modulus of the degenerate stages (q_+ = 0)."""
    return ModulusPair(math.inf, a_minus)


@dataclass(frozen=True)
class StageShift:
    """How the stage-k limit is approached from the gauged stage k-1 operator.

    The pre-limit operator is ``scale * A~^{k-1}(h + i R dh, l + i R dl; z + i R dz)``
    with ``scale = exp(prefactor_rate * pi * R)``.
    """

    stage: int
    dz: int
    dh: tuple
    dl: tuple
    prefactor_rate: int  # exponent of exp(pi R)

    def shift_params(self, p: DegenParams, R) -> DegenParams:
        iR = 1j * R
        if self.stage == 2:
            # from stage 1 (eight h~) to stage 2 (h, l): h~ = h8 + i R v
            h8 = p.h8
            newh = tuple(hn + iR * s for hn, s in zip(h8, self.dh))
            return DegenParams(p.modulus, newh, (), p.mu, p.N)
        newh = tuple(hn + iR * s for hn, s in zip(p.h, self.dh))
        newl = tuple(ln + iR * s for ln, s in zip(p.l, self.dl))
        return DegenParams(p.modulus, newh, newl, p.mu, p.N)


STAGE_SHIFTS = {
    2: StageShift(2, +1, V8, (), -4),
    3: StageShift(3, -1, (-1, -1, 1, 1), (-1, -1, -1, -1), -4),
    # No exp(-4 pi R) prefactor here: the shifted stage-3 coefficients already stay finite.
    4: StageShift(4, +1, V2, V1, 0),
}
