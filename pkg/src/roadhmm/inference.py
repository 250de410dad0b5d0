"""HMM filter and forward-backward smoother with per-step scaling.

The raw forward/backward recursions multiply T likelihoods together and
underflow long before T = 50 at M = 105, so every message is renormalized
to sum 1 at each step and the log of the divided-out normalizer is kept.
The smoother's final elementwise product cancels the factors, so results
are identical to the unscaled recursions up to floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .sensor import likelihood_vector


class InferenceError(ValueError):
    """A measurement has zero probability under the model."""


@dataclass(frozen=True)
class ScaledMessages:
    """Per-step normalized forward or backward messages.

    ``vectors[t]`` sums to 1; ``log_scale_factors[t]`` is the natural log of
    the normalizer divided out at step t+1. The unnormalized message is
    vectors[t] * exp(cumulative factors): prefix sums for a forward pass,
    suffix sums for a backward pass. The cumulative forward factor at step k
    equals log p(y_1..y_k).
    """

    vectors: np.ndarray
    log_scale_factors: np.ndarray

    def __len__(self) -> int:
        return self.vectors.shape[0]


@dataclass(frozen=True)
class InferenceResult:
    """Filter and smoother beliefs for one measurement sequence."""

    filtered: np.ndarray
    smoothed: np.ndarray
    log_likelihood: float


def uniform_belief(num_states: int) -> np.ndarray:
    return np.full(num_states, 1.0 / num_states)


def point_mass_belief(num_states: int, node: int) -> np.ndarray:
    """Belief certain of one node id."""
    if not 1 <= node <= num_states:
        raise ValueError(f"node {node} out of range 1..{num_states}")
    belief = np.zeros(num_states)
    belief[int(node) - 1] = 1.0
    return belief


def filter_step(
    prior: np.ndarray, A: np.ndarray, likelihood: np.ndarray
) -> tuple[np.ndarray, float]:
    """One predict/update cycle.

    Returns the posterior (likelihood-weighted prediction, renormalized) and
    the normalizer, i.e. the probability of the measurement given the prior.
    """
    predicted = np.asarray(A) @ np.asarray(prior)
    unnormalized = np.asarray(likelihood) * predicted
    normalizer = float(unnormalized.sum())
    if not normalizer > 0.0 or not math.isfinite(normalizer):
        raise InferenceError("measurement impossible under model")
    return unnormalized / normalizer, normalizer


def forward_pass(A, obs, measurements, initial) -> ScaledMessages:
    """Scaled forward recursion; vectors equal the filter beliefs."""
    A = np.asarray(A, dtype=float)
    obs = np.asarray(obs, dtype=float)
    m = A.shape[0]
    steps = len(measurements)
    vectors = np.empty((steps, m))
    logs = np.empty(steps)
    belief = np.asarray(initial, dtype=float)
    for t, y in enumerate(measurements):
        try:
            belief, normalizer = filter_step(belief, A, likelihood_vector(obs, y))
        except InferenceError as exc:
            raise InferenceError(f"step {t + 1}: {exc}") from exc
        vectors[t] = belief
        logs[t] = math.log(normalizer)
    return ScaledMessages(vectors, logs)


def run_filter(A, obs, measurements, initial) -> tuple[np.ndarray, float]:
    """Filter beliefs after each measurement plus log p(y_1..y_T)."""
    messages = forward_pass(A, obs, measurements, initial)
    return messages.vectors, float(messages.log_scale_factors.sum())


def backward_pass(A, obs, measurements) -> ScaledMessages:
    """Scaled backward recursion using the transpose of the transition matrix.

    The final message is the all-ones vector (stored normalized, factor
    log M); earlier messages fold in future measurements one at a time.
    """
    A = np.asarray(A, dtype=float)
    obs = np.asarray(obs, dtype=float)
    m = A.shape[0]
    steps = len(measurements)
    vectors = np.empty((steps, m))
    logs = np.empty(steps)
    if steps == 0:
        return ScaledMessages(vectors, logs)
    vectors[-1] = 1.0 / m
    logs[-1] = math.log(m)
    transposed = A.T
    for t in range(steps - 2, -1, -1):
        likelihood = likelihood_vector(obs, measurements[t + 1])
        raw = transposed @ (likelihood * vectors[t + 1])
        normalizer = float(raw.sum())
        if not normalizer > 0.0 or not math.isfinite(normalizer):
            raise InferenceError(f"step {t + 2}: measurement impossible under model")
        vectors[t] = raw / normalizer
        logs[t] = math.log(normalizer)
    return ScaledMessages(vectors, logs)


def smooth(forward: ScaledMessages, backward: ScaledMessages) -> np.ndarray:
    """Smoother beliefs: elementwise product of the two passes, renormalized.

    The per-step scale factors cancel in the normalization, so the scaled
    vectors can be multiplied directly.
    """
    if forward.vectors.shape != backward.vectors.shape:
        raise ValueError(
            f"forward/backward shape mismatch: {forward.vectors.shape} "
            f"vs {backward.vectors.shape}"
        )
    product = forward.vectors * backward.vectors
    sums = product.sum(axis=1, keepdims=True)
    if not np.all(sums > 0.0):
        raise InferenceError("inconsistent forward/backward messages")
    return product / sums


def run_smoother(A, obs, measurements, initial) -> InferenceResult:
    """Run both passes and combine into filter and smoother beliefs."""
    fwd = forward_pass(A, obs, measurements, initial)
    bwd = backward_pass(A, obs, measurements)
    return InferenceResult(
        filtered=fwd.vectors,
        smoothed=smooth(fwd, bwd),
        log_likelihood=float(fwd.log_scale_factors.sum()),
    )


def map_estimate(belief) -> int:
    """Most probable node id; ties go to the smallest id."""
    belief = np.asarray(belief)
    if belief.size == 0:
        raise ValueError("empty belief")
    return int(np.argmax(belief)) + 1
