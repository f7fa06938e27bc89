"""Noisy-circuit inference: the Bayesian network induced by a circuit
with independently flipping gates, exact layered propagation of the
joint error state, and seeded Monte Carlo estimation.

The exact engine tracks the joint distribution of the wrong-wire
indicator vector of one n-wire bundle (2^n states).  A NAND layer whose
inputs all encode 1 corrupts its output when either input is wrong; a
layer whose inputs encode 0 needs both.  Deterministic layers are
pushforwards of the state distribution; i.i.d. output noise is an XOR
convolution, applied in the Walsh-Hadamard domain where it is a
diagonal factor (1 - 2 eps)^popcount.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .circuit import Circuit, CircuitError, Gate
from .numerics import binom_tail, wilson_interval
from .transform import (FtParams, WIRING_OFFSET_DOUBLING, WIRING_SHARED,
                        WIRING_UNIT, _layer_offset)

EXACT_ENGINE_CAP = 15

EITHER = "either"  # inputs encode 1: one wrong input corrupts the output
BOTH = "both"      # inputs encode 0: both inputs must be wrong


class ExactEngineError(CircuitError):
    """The exact engine cannot serve the request (use Monte Carlo)."""


@dataclass(frozen=True)
class ErrorEstimate:
    """A logical error probability with a 95% confidence interval."""

    mean: float
    ci_low: float
    ci_high: float
    method: str
    samples: int = 0
    seed: int | None = None

    def __post_init__(self):
        if not self.ci_low <= self.mean <= self.ci_high:
            raise ValueError("confidence interval must contain the mean")

    def to_record(self, params: FtParams) -> dict:
        return {
            "n": params.n, "D": params.depth, "eps_p": params.eps_p,
            "delta": params.delta, "method": self.method,
            "estimate": self.mean, "ci_low": self.ci_low,
            "ci_high": self.ci_high, "samples": self.samples,
            "seed": self.seed,
        }


def exact_estimate(p: float, method: str = "exact") -> ErrorEstimate:
    return ErrorEstimate(p, p, p, method)


@dataclass(frozen=True)
class LayeredNoisyNetwork:
    """The Bayesian network of a noisy circuit: each wire is a node,
    inputs flip from the reference with probability input_error, every
    gate output flips with probability eps_p."""

    circuit: Circuit
    eps_p: float
    input_error: float
    reference: dict[str, int]
    layers: tuple[tuple[Gate, ...], ...] = field(init=False, repr=False)
    reference_values: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        if not 0.0 <= self.eps_p < 0.5:
            raise ValueError(f"eps_p must be in [0, 1/2), got {self.eps_p}")
        if not 0.0 <= self.input_error < 0.5:
            raise ValueError(
                f"input_error must be in [0, 1/2), got {self.input_error}")
        layers = tuple(tuple(l) for l in self.circuit.topological_layers())
        object.__setattr__(self, "layers", layers)
        object.__setattr__(self, "reference_values",
                           self.circuit.evaluate_all(self.reference))

    def is_tree(self) -> bool:
        """True when every wire feeds at most one gate (fan-out <= 1)."""
        fan_out: dict[str, int] = {}
        for g in self.circuit.gates:
            for w in g.inputs:
                fan_out[w] = fan_out.get(w, 0) + 1
                if fan_out[w] > 1:
                    return False
        return True


def induce_network(circuit: Circuit, eps_p: float, input_error: float,
                   reference: Mapping[str, int]) -> LayeredNoisyNetwork:
    """Build the noisy network; the reference assignment fixes the
    intended (noiseless) value of every wire."""
    circuit.check_valid()
    return LayeredNoisyNetwork(circuit, eps_p, input_error, dict(reference))


def tree_error_marginals(net: LayeredNoisyNetwork) -> dict[str, float]:
    """Exact per-wire wrong probabilities for fan-out-1 circuits.

    In a tree the wrong indicators of a gate's inputs are independent,
    so marginals propagate exactly.
    """
    if not net.is_tree():
        raise ExactEngineError("marginal propagation is exact only on trees")
    wrong: dict[str, float] = {w: net.input_error for w in net.circuit.inputs}
    ref = net.reference_values
    for g in net.circuit.topological_order:
        p_out_ref = 0.0
        # sum over joint wrong patterns of the (independent) inputs
        for pattern in range(1 << len(g.inputs)):
            prob = 1.0
            vals = []
            for j, w in enumerate(g.inputs):
                flip = (pattern >> j) & 1
                prob *= wrong[w] if flip else 1.0 - wrong[w]
                vals.append(ref[w] ^ flip)
            if g.label.apply(vals) == ref[g.name]:
                p_out_ref += prob
        wrong[g.name] = net.eps_p + (1.0 - 2.0 * net.eps_p) * (1.0 - p_out_ref)
    return {w: wrong[w] for w in net.circuit.outputs}


# ---------------------------------------------------------------------------
# exact joint engine over one n-wire bundle


def _walsh_hadamard(a: np.ndarray) -> np.ndarray:
    h = 1
    size = a.shape[0]
    while h < size:
        a = a.reshape(-1, 2, h)
        top = a[:, 0, :].copy()
        a[:, 0, :] = top + a[:, 1, :]
        a[:, 1, :] = top - a[:, 1, :]
        a = a.reshape(size)
        h *= 2
    return a


class BundleState:
    """Joint distribution of the wrong-bit vector of an n-wire bundle."""

    def __init__(self, n: int, probs: np.ndarray):
        if n > EXACT_ENGINE_CAP:
            raise ExactEngineError(
                f"exact engine caps at n={EXACT_ENGINE_CAP}, got {n}; "
                "use Monte Carlo")
        if probs.shape != (1 << n,):
            raise ValueError("state size mismatch")
        self.n = n
        self.probs = probs
        self._index = np.arange(1 << n, dtype=np.int64)
        pop = np.zeros(1 << n, dtype=np.int64)
        for k in range(n):
            pop += (self._index >> k) & 1
        self._popcount = pop

    @classmethod
    def iid(cls, n: int, p_wrong: float) -> "BundleState":
        if n > EXACT_ENGINE_CAP:
            raise ExactEngineError(
                f"exact engine caps at n={EXACT_ENGINE_CAP}, got {n}; "
                "use Monte Carlo")
        idx = np.arange(1 << n, dtype=np.int64)
        pop = np.zeros(1 << n, dtype=np.int64)
        for k in range(n):
            pop += (idx >> k) & 1
        if p_wrong <= 0.0:
            probs = np.where(pop == 0, 1.0, 0.0)
        elif p_wrong >= 1.0:
            probs = np.where(pop == n, 1.0, 0.0)
        else:
            probs = np.exp(pop * math.log(p_wrong)
                           + (n - pop) * math.log1p(-p_wrong))
        return cls(n, probs)

    def apply_noise(self, eps_p: float):
        """XOR-convolve with i.i.d. Bernoulli(eps_p) flips on every wire."""
        if eps_p == 0.0:
            return
        spectrum = (1.0 - 2.0 * eps_p) ** self._popcount
        hat = _walsh_hadamard(self.probs.copy())
        hat *= spectrum
        self.probs = _walsh_hadamard(hat) / (1 << self.n)
        np.maximum(self.probs, 0.0, out=self.probs)

    def apply_wiring_layer(self, offsets: tuple[tuple[int, int], ...],
                           rule: str):
        """Push forward through one NAND layer; output wire i reads input
        wires offsets[i] = (a_i, b_i).  rule is EITHER or BOTH on the
        wrong-bit indicators."""
        idx = self._index
        out = np.zeros(1 << self.n, dtype=np.int64)
        for i, (a, b) in enumerate(offsets):
            bit_a = (idx >> a) & 1
            bit_b = (idx >> b) & 1
            bit = (bit_a | bit_b) if rule == EITHER else (bit_a & bit_b)
            out |= bit << i
        self.probs = np.bincount(out, weights=self.probs,
                                 minlength=1 << self.n)

    def combine_iid_nand(self, rule: str):
        """Replace the state by the NAND-layer output of two i.i.d.
        bundles each distributed as the current state (wire i reads wire
        i of both copies).

        EITHER (out_i = a_i | b_i) is a subset-space square; BOTH
        (out_i = a_i & b_i) a superset-space square.
        """
        t = self.probs.copy()
        idx = self._index
        if rule == BOTH:
            for k in range(self.n):
                low = (idx >> k) & 1 == 0
                t[low] += t[low.nonzero()[0] | (1 << k)]
            t *= t
            for k in range(self.n):
                low = (idx >> k) & 1 == 0
                t[low] -= t[low.nonzero()[0] | (1 << k)]
        else:
            for k in range(self.n):
                hi = (idx >> k) & 1 == 1
                t[hi] += t[hi.nonzero()[0] & ~(1 << k)]
            t *= t
            for k in range(self.n):
                hi = (idx >> k) & 1 == 1
                t[hi] -= t[hi.nonzero()[0] & ~(1 << k)]
        self.probs = np.maximum(t, 0.0)

    def rotate(self, shift: int):
        """Cyclically relabel wires: wire i becomes wire (i+shift) mod n."""
        shift %= self.n
        idx = self._index
        rotated = ((idx << shift) | (idx >> (self.n - shift))) & ((1 << self.n) - 1)
        out = np.zeros_like(self.probs)
        out[rotated] = self.probs
        self.probs = out

    def wrong_count_distribution(self) -> np.ndarray:
        """Distribution of the number of wrong wires; length n + 1."""
        return np.bincount(self._popcount, weights=self.probs,
                           minlength=self.n + 1)[: self.n + 1]


def _ec_offsets(n: int, layer: int, wiring: str) -> tuple[tuple[int, int], ...]:
    if wiring == WIRING_SHARED:
        return tuple((0, 1 % n) for _ in range(n))
    off = _layer_offset(layer, n, wiring)
    return tuple((i, (i - off) % n) for i in range(n))


def _apply_ec_block(state: BundleState, depth: int, eps_p: float,
                    wiring: str, first_rule: str):
    rule = first_rule
    for layer in range(1, depth + 1):
        state.apply_wiring_layer(_ec_offsets(state.n, layer, wiring), rule)
        state.apply_noise(eps_p)
        rule = BOTH if rule == EITHER else EITHER


def exact_stage_error(params: FtParams, block: str = "gadget",
                      wiring: str = WIRING_OFFSET_DOUBLING,
                      stages: int = 1) -> np.ndarray:
    """Exact distribution of the wrong-wire count at the output bundle.

    block "gadget": one computation NAND layer (both input bundles carry
    i.i.d. Bernoulli(delta) wrong wires against encoded 1) followed by
    the depth-D error-correction block.  block "ec": the error-correction
    block alone, fed an encoded-0 bundle with i.i.d. Bernoulli(delta)
    wrong wires.  stages > 1 (gadget only) chains gadgets, each reading
    two independent copies of the previous output.
    """
    n, depth = params.n, params.depth
    eps_p, delta = params.eps_p, params.delta
    if stages < 1:
        raise ValueError("stages must be >= 1")
    if block == "ec":
        if stages != 1:
            raise ValueError("multi-stage applies to gadget blocks only")
        state = BundleState.iid(n, delta)
        _apply_ec_block(state, depth, eps_p, wiring, first_rule=BOTH)
        return state.wrong_count_distribution()
    if block != "gadget":
        raise ValueError(f"unknown block kind: {block}")

    # inputs to the first computation layer encode 1 (NAND worst case);
    # its outputs are i.i.d., so the joint state starts as a product
    e_comp = eps_p + (1.0 - 2.0 * eps_p) * (2.0 * delta - delta * delta)
    state = BundleState.iid(n, e_comp)
    comp_rule = EITHER
    for stage in range(stages):
        if stage > 0:
            comp_rule = BOTH if comp_rule == EITHER else EITHER
            state.combine_iid_nand(comp_rule)
            state.apply_noise(eps_p)
        ec_first = BOTH if comp_rule == EITHER else EITHER
        _apply_ec_block(state, depth, eps_p, wiring, first_rule=ec_first)
    return state.wrong_count_distribution()


def formula_stage_error_rate(params: FtParams, block: str = "gadget") -> float:
    """Per-wire error of the fan-out-1 (tree) variant of a block, where
    every wire is independent; the wrong-count law is then binomial."""
    eps_p, delta, depth = params.eps_p, params.delta, params.depth
    if block == "gadget":
        e = eps_p + (1.0 - 2.0 * eps_p) * (2.0 * delta - delta * delta)
        rule = BOTH
    elif block == "ec":
        e = delta
        rule = BOTH
    else:
        raise ValueError(f"unknown block kind: {block}")
    for _ in range(depth):
        if rule == BOTH:
            e = eps_p + (1.0 - 2.0 * eps_p) * e * e
        else:
            e = eps_p + (1.0 - 2.0 * eps_p) * (2.0 * e - e * e)
        rule = EITHER if rule == BOTH else BOTH
    return e


def formula_wrong_count_distribution(params: FtParams,
                                     block: str = "gadget") -> np.ndarray:
    n = params.n
    e = formula_stage_error_rate(params, block)
    ks = np.arange(n + 1)
    from scipy.stats import binom
    return binom.pmf(ks, n, e)


def failure_threshold(n: int, delta: float | None) -> int:
    """Wrong-count threshold for logical failure: majority (more wrong
    than right) when delta is None, else ceil(delta * n)."""
    if delta is None:
        return n // 2 + 1
    return max(math.ceil(delta * n), 1)


def tail_probability(dist: np.ndarray, threshold: int) -> float:
    return float(dist[threshold:].sum())


# ---------------------------------------------------------------------------
# Monte Carlo


def monte_carlo_logical_error(net: LayeredNoisyNetwork,
                              delta_threshold: float | None,
                              samples: int, seed: int,
                              batch_size: int = 1 << 20) -> ErrorEstimate:
    """Forward-sample the network and estimate the probability that the
    wrong-output count reaches the failure threshold.

    Bit-reproducible for a fixed seed (single threaded); the 95% CI is
    the Wilson score interval.
    """
    if samples < 10_000:
        raise ValueError(f"need >= 10^4 samples, got {samples}")
    rng = np.random.default_rng(seed)
    circuit = net.circuit
    ref = net.reference_values
    n_out = len(circuit.outputs)
    threshold = failure_threshold(n_out, delta_threshold)
    failures = 0
    remaining = samples
    order = circuit.topological_order
    while remaining > 0:
        m = min(batch_size, remaining)
        remaining -= m
        values: dict[str, np.ndarray] = {}
        for w in circuit.inputs:
            flips = rng.random(m) < net.input_error
            values[w] = np.uint8(ref[w]) ^ flips.astype(np.uint8)
        for g in order:
            a, b = (values[w] for w in g.inputs)
            out = 1 - (a & b)
            noise = (rng.random(m) < net.eps_p).astype(np.uint8)
            values[g.name] = out ^ noise
        wrong = np.zeros(m, dtype=np.int64)
        for w in circuit.outputs:
            wrong += values[w] != ref[w]
        failures += int(np.count_nonzero(wrong >= threshold))
    mean = failures / samples
    lo, hi = wilson_interval(failures, samples)
    return ErrorEstimate(mean, min(lo, mean), max(hi, mean),
                         "monte_carlo", samples, seed)


def gadget_network(params: FtParams, wiring: str = WIRING_OFFSET_DOUBLING,
                   block: str = "gadget") -> LayeredNoisyNetwork:
    """The noisy network of one gadget (or bare EC block) with the
    worst-case reference: gadget input bundles encode 1, EC inputs 0."""
    from . import transform
    if block == "gadget":
        gadget = transform.build_ft_gadget(transform.NAND, params, wiring)
        circuit = gadget.circuit
        reference = {w: 1 for w in circuit.inputs}
    elif block == "ec":
        circuit = transform.build_majority_ec_circuit(params.n, params.depth,
                                                      wiring)
        reference = {w: 0 for w in circuit.inputs}
    else:
        raise ValueError(f"unknown block kind: {block}")
    return induce_network(circuit, params.eps_p, params.delta, reference)


def circuit_logical_error(params: FtParams, method: str = "auto",
                          delta_threshold: float | None = None,
                          variant: str = "circuit",
                          block: str = "gadget",
                          wiring: str = WIRING_OFFSET_DOUBLING,
                          samples: int = 1_000_000,
                          seed: int = 0) -> ErrorEstimate:
    """One-stage logical failure probability of a gadget (or EC block).

    variant "circuit" is the width-n construction; "formula" the
    fan-out-1 tree expansion (independent wires, binomial law).  method
    "auto" uses the exact engine up to its cap, then Monte Carlo.
    """
    threshold = failure_threshold(params.n, delta_threshold)
    if variant == "formula":
        dist = formula_wrong_count_distribution(params, block)
        return exact_estimate(tail_probability(dist, threshold))
    if variant != "circuit":
        raise ValueError(f"unknown variant: {variant}")
    if method == "auto":
        method = "exact" if params.n <= EXACT_ENGINE_CAP else "monte_carlo"
    if method == "exact":
        dist = exact_stage_error(params, block, wiring)
        return exact_estimate(tail_probability(dist, threshold))
    if method != "monte_carlo":
        raise ValueError(f"unknown method: {method}")
    net = gadget_network(params, wiring, block)
    return monte_carlo_logical_error(net, delta_threshold, samples, seed)
