"""Formula-level reliability analysis of the fault-tolerant NAND stage.

One stage is a computation NAND followed by D error-correction layers.
The worst-case per-wire error after the stage, as a function of the
input wrong-wire rate Delta, is the stage error curve f(Delta).  Its
fixed points bound the amplification window; the largest physical error
rate for which the window exists is the pseudothreshold.  Logical error
rates follow from a binomial tail because formula (fan-out-1) gadgets
have independent output wires.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .numerics import bisect, binom_tail, golden_max, golden_min, log_binom_tail


def _check_domain(depth: int, eps_p: float, delta: float):
    if depth < 2 or depth % 2 != 0:
        raise ValueError(f"EC depth must be even and >= 2, got {depth}")
    if not 0.0 <= eps_p < 0.5:
        raise ValueError(f"eps_p must be in [0, 1/2), got {eps_p}")
    if not 0.0 <= delta < 0.5:
        raise ValueError(f"delta must be in [0, 1/2), got {delta}")


def _noisy_either(e: float, eps_p: float) -> float:
    # NAND output wrong if either input wrong (inputs encode 1), then flip
    return eps_p + (1.0 - 2.0 * eps_p) * (2.0 * e - e * e)


def _noisy_both(e: float, eps_p: float) -> float:
    # NAND output wrong only if both inputs wrong (inputs encode 0)
    return eps_p + (1.0 - 2.0 * eps_p) * e * e


def stage_error(depth: int, eps_p: float, delta: float) -> float:
    """Worst-case per-wire error f(delta) after one computation NAND and
    D error-correction layers.

    The signal alternates encoded value layer to layer: the computation
    layer sees the worst case (both inputs encode 1, either wrong input
    corrupts the output), the first EC layer sees encoded 0 (both inputs
    must be wrong), and so on.
    """
    _check_domain(depth, eps_p, delta)
    e = _noisy_either(delta, eps_p)
    for k in range(1, depth + 1):
        e = _noisy_both(e, eps_p) if k % 2 == 1 else _noisy_either(e, eps_p)
    return e


def stage_error_depth2_closed_form(eps_p: float, delta: float) -> float:
    """The depth-2 stage error as a single algebraic expression.

    Kept as an independent implementation; it must agree with
    stage_error(2, ...) identically.
    """
    g = 2.0 * eps_p - 1.0
    inner = g * (((delta - 2.0) * delta * g + eps_p) ** 2) - eps_p + 1.0
    return 1.0 - eps_p + g * inner * inner


@dataclass(frozen=True)
class AmplificationWindow:
    """Fixed points of the stage error curve; f < identity between them."""

    exists: bool
    delta_lo: float = math.nan
    delta_hi: float = math.nan


def fixed_points(depth: int, eps_p: float, tol: float = 1e-10) -> AmplificationWindow:
    """Locate the fixed points of f(delta) = delta by bisection.

    Returns exists=False when f lies above the identity on all of
    (0, 1/2), i.e. eps_p is at or above the pseudothreshold.
    """
    _check_domain(depth, eps_p, 0.0)
    gap = lambda d: stage_error(depth, eps_p, d) - d
    d_min, g_min = golden_min(gap, 0.0, 0.5 - 1e-12, tol=1e-12)
    if g_min > 0.0:
        return AmplificationWindow(False)
    lo = bisect(gap, 0.0, d_min, tol=tol)
    hi = bisect(gap, d_min, 0.5 - 1e-12, tol=tol)
    return AmplificationWindow(True, lo, hi)


def pseudothreshold(depth: int, tol: float = 1e-7) -> float:
    """Largest eps_p for which the amplification window exists."""
    _check_domain(depth, 0.0, 0.0)

    def window_gap(eps_p: float) -> float:
        gap = lambda d: stage_error(depth, eps_p, d) - d
        return golden_min(gap, 0.0, 0.5 - 1e-12, tol=1e-10)[1]

    return bisect(window_gap, 0.0, 0.25, tol=tol)


def optimal_fiducial(depth: int, eps_p: float) -> float:
    """The fiducial rate maximizing (delta - f)/sqrt(f(1-f)), the sqrt(n)
    coefficient of the normal-approximation logical error exponent."""
    window = fixed_points(depth, eps_p)
    if not window.exists:
        raise ValueError(
            f"eps_p={eps_p} is at or above the depth-{depth} pseudothreshold")

    def coeff(d: float) -> float:
        f = stage_error(depth, eps_p, d)
        return (d - f) / math.sqrt(f * (1.0 - f))

    return golden_max(coeff, window.delta_lo, window.delta_hi, tol=1e-8)[0]


def _wrong_threshold(n: int, delta: float) -> int:
    """Wrong-wire count at which a bundle stops encoding: ceil(delta*n);
    a bundle with wrong count r encodes iff r < delta*n."""
    return max(math.ceil(delta * n), 1)


def logical_error_formula(n: int, depth: int, eps_p: float,
                          delta: float) -> tuple[float, float]:
    """Logical error of the formula gadget at code size n.

    Returns (exact, normal): the exact binomial tail
    Pr[Binomial(n, f) >= ceil(delta n)] and the paper-style normal
    approximation Pr[Z >= sqrt(n)(delta - f)/sqrt(f(1-f))].
    """
    window = fixed_points(depth, eps_p)
    if not window.exists or not window.delta_lo < delta < window.delta_hi:
        raise ValueError(
            f"delta={delta} is outside the amplification window; "
            "the signal is not amplified")
    f = stage_error(depth, eps_p, delta)
    exact = binom_tail(n, f, _wrong_threshold(n, delta))
    z = math.sqrt(n) * (delta - f) / math.sqrt(f * (1.0 - f))
    normal = 0.5 * math.erfc(z / math.sqrt(2.0))
    return exact, normal


def log10_logical_error(n: int, depth: int, eps_p: float, delta: float) -> float:
    """log10 of the exact formula logical error; stays finite far below
    float underflow."""
    f = stage_error(depth, eps_p, delta)
    return log_binom_tail(n, f, _wrong_threshold(n, delta)) / math.log(10.0)


@dataclass(frozen=True)
class CodeSizeResult:
    """Smallest odd code size reaching a target logical error, with the
    leading coefficient of its ln(1/eps_l) asymptotic."""

    n: int
    coefficient: float
    eps_l_achieved: float


def code_size_coefficient(depth: int, eps_p: float, delta: float) -> float:
    """Leading coefficient of n ~ coeff * ln(1/eps_l): 2f(1-f)/(f-delta)^2."""
    f = stage_error(depth, eps_p, delta)
    return 2.0 * f * (1.0 - f) / (f - delta) ** 2


def required_code_size(eps_l_target: float, depth: int, eps_p: float,
                       delta: float) -> CodeSizeResult:
    """Smallest odd n whose exact formula logical error is <= the target."""
    if not 0.0 < eps_l_target < 1.0:
        raise ValueError(f"target must be in (0, 1), got {eps_l_target}")
    log10_target = math.log10(eps_l_target)
    coeff = code_size_coefficient(depth, eps_p, delta)
    # validates the window once; per-n evaluation then uses the log form
    logical_error_formula(1, depth, eps_p, delta)

    guess = max(1, int(coeff * math.log(1.0 / eps_l_target)))
    n = guess if guess % 2 == 1 else guess + 1
    while n > 1 and log10_logical_error(n - 2, depth, eps_p, delta) <= log10_target:
        n -= 2
    while log10_logical_error(n, depth, eps_p, delta) > log10_target:
        n += 2
    achieved = 10.0 ** log10_logical_error(n, depth, eps_p, delta)
    return CodeSizeResult(n, coeff, achieved)


def number_overhead(eps_l: float, eps_p: float, delta: float, depth: int,
                    chi: float) -> float:
    """Gate-count overhead of the fault-tolerant construction:
    (D+1) n(eps_l) / chi."""
    if not 0.0 < chi <= 1.0:
        raise ValueError(f"chi must be in (0, 1], got {chi}")
    n = required_code_size(eps_l, depth, eps_p, delta).n
    return (depth + 1) * n / chi
