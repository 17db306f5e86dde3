"""
Alternating update schedule

AE for the first ``n_ini`` iterations, then blocks of ``n_ch`` iterations
alternating RET, AE, RET, ...
"""

from typing import Dict

from retrofit_prae.rprae.params import ParamGroup

UpdateTarget = ParamGroup


def update_target(i: int, n_ini: int, n_ch: int) -> ParamGroup:
    """AE if i < n_ini or ((i - n_ini) // n_ch) is odd, else RET"""
    if i < 0:
        raise ValueError(f"iteration must be non-negative, got {i}")
    if n_ch < 1:
        raise ValueError(f"n_ch must be >= 1, got {n_ch}")
    if i < n_ini or ((i - n_ini) // n_ch) % 2 == 1:
        return ParamGroup.AE
    return ParamGroup.RET


def count_targets(iterations: int, n_ini: int, n_ch: int) -> Dict[ParamGroup, int]:
    """Closed-form number of AE and RET iterations among 0 .. iterations-1"""
    ae = min(n_ini, iterations)
    rest = max(iterations - n_ini, 0)
    full_blocks, partial = divmod(rest, n_ch)
    ae += (full_blocks // 2) * n_ch
    if full_blocks % 2 == 1:
        ae += partial
    return {ParamGroup.AE: ae, ParamGroup.RET: iterations - ae}
