"""Local-differential-privacy primitives.

Generalized randomized response and optimized unary encoding for frequency
reports, exponential-mechanism selection over candidate sequences, and the
matching unbiased aggregation estimators.  All randomness flows through an
explicit seeded source so whole runs replay bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .metrics import DistanceMetric, score
from .series import SymbolSequence

# Domain tags for deriving independent per-role streams from one run seed.
_SERVER_DOMAIN = 0
_USER_DOMAIN = 1


@dataclass(frozen=True)
class PrivacyBudget:
    """Privacy budget epsilon > 0; math.inf selects the noiseless limit."""

    epsilon: float

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")

    @property
    def noiseless(self) -> bool:
        return math.isinf(self.epsilon)


@dataclass(eq=False)
class RandomSource:
    """Seeded generator wrapper: identical seed, identical draw sequence."""

    seed: int
    generator: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        self.generator = np.random.Generator(np.random.PCG64(np.random.SeedSequence(self.seed)))

    @classmethod
    def derive(cls, root_seed: int, *keys: int) -> "RandomSource":
        child = int(np.random.SeedSequence((root_seed, *keys)).generate_state(1, np.uint64)[0])
        return cls(seed=child)

    @classmethod
    def for_user(cls, run_seed: int, user_id: int) -> "RandomSource":
        return cls.derive(run_seed, _USER_DOMAIN, user_id)

    @classmethod
    def for_server(cls, run_seed: int) -> "RandomSource":
        return cls.derive(run_seed, _SERVER_DOMAIN)

    def random(self) -> float:
        return float(self.generator.random())

    def integers(self, low: int, high: int) -> int:
        return int(self.generator.integers(low, high))

    def permutation(self, n: int) -> np.ndarray:
        return self.generator.permutation(n)

    def normal(self, scale: float, size: int) -> np.ndarray:
        return self.generator.normal(0.0, scale, size)


@dataclass(frozen=True)
class CandidateSet:
    """Ordered, duplicate-free candidate sequences sent to one user group."""

    candidates: tuple[SymbolSequence, ...]

    def __post_init__(self):
        if not self.candidates:
            raise ValueError("candidate set must not be empty")
        seen = {c.symbols for c in self.candidates}
        if len(seen) != len(self.candidates):
            raise ValueError("candidate set contains duplicate sequences")

    def __len__(self) -> int:
        return len(self.candidates)

    def __iter__(self):
        return iter(self.candidates)

    def __getitem__(self, idx: int) -> SymbolSequence:
        return self.candidates[idx]


def grr_probs(d: int, budget: PrivacyBudget) -> tuple[float, float]:
    """Keep/flip probabilities p = e^eps/(e^eps+d-1), q = (1-p)/(d-1).

    Computed through exp(-eps) so arbitrarily large and infinite budgets
    stay finite (p -> 1, q -> 0).
    """
    if d < 2:
        raise ValueError(f"perturbation domain must have >= 2 values, got {d}")
    e = math.exp(-budget.epsilon)
    p = 1.0 / (1.0 + (d - 1) * e)
    q = e / (1.0 + (d - 1) * e)
    return p, q


def grr_perturb(value: int, d: int, budget: PrivacyBudget, rng: RandomSource) -> int:
    """Report the true value with probability p, else a uniform other value."""
    p, _ = grr_probs(d, budget)
    if not 0 <= value < d:
        raise ValueError(f"value {value} outside domain of size {d}")
    if rng.random() < p:
        return value
    other = rng.integers(0, d - 1)
    return other if other < value else other + 1


def grr_perturb_many(values: np.ndarray, d: int, budget: PrivacyBudget, rng: RandomSource) -> np.ndarray:
    """Vectorized grr_perturb for simulation-scale report counts."""
    p, _ = grr_probs(d, budget)
    values = np.asarray(values, dtype=np.int64)
    if values.size and (values.min() < 0 or values.max() >= d):
        raise ValueError("values outside perturbation domain")
    keep = rng.generator.random(values.shape) < p
    others = rng.generator.integers(0, d - 1, size=values.shape)
    others = np.where(others < values, others, others + 1)
    return np.where(keep, values, others)


def grr_debias(counts: np.ndarray, n: int, d: int, budget: PrivacyBudget) -> np.ndarray:
    """Unbiased per-value estimates (count_v - n*q)/(p - q); they sum to n."""
    p, q = grr_probs(d, budget)
    if p == q:
        raise ValueError("debiasing undefined when keep and flip probabilities coincide")
    counts = np.asarray(counts, dtype=np.float64)
    return (counts - n * q) / (p - q)


def oue_flip_prob(budget: PrivacyBudget) -> float:
    """Probability 1/(e^eps + 1) that a zero bit reports as one."""
    e = math.exp(-budget.epsilon)
    return e / (1.0 + e)


def oue_perturb(true_cell: int, num_cells: int, budget: PrivacyBudget, rng: RandomSource) -> np.ndarray:
    """Unary-encode and flip: the true bit survives with probability 1/2,
    every other bit turns on with probability 1/(e^eps+1), independently."""
    if not 0 <= true_cell < num_cells:
        raise ValueError(f"cell {true_cell} outside domain of size {num_cells}")
    thresholds = np.full(num_cells, oue_flip_prob(budget))
    thresholds[true_cell] = 0.5
    return (rng.generator.random(num_cells) < thresholds).astype(np.uint8)


def oue_bit_sums(true_cells: np.ndarray, num_cells: int, budget: PrivacyBudget,
                 rng: RandomSource, chunk: int = 4096) -> np.ndarray:
    """Per-cell sums of many oue_perturb reports, computed in chunks."""
    true_cells = np.asarray(true_cells, dtype=np.int64)
    q = oue_flip_prob(budget)
    sums = np.zeros(num_cells, dtype=np.int64)
    for start in range(0, true_cells.size, chunk):
        block = true_cells[start:start + chunk]
        thresholds = np.full((block.size, num_cells), q)
        thresholds[np.arange(block.size), block] = 0.5
        bits = rng.generator.random((block.size, num_cells)) < thresholds
        sums += bits.sum(axis=0)
    return sums


def oue_debias(bit_sums: np.ndarray, n: int, budget: PrivacyBudget) -> np.ndarray:
    """Unbiased per-cell estimates (sum_c - n*q)/(1/2 - q)."""
    q = oue_flip_prob(budget)
    bit_sums = np.asarray(bit_sums, dtype=np.float64)
    return (bit_sums - n * q) / (0.5 - q)


def em_probabilities(user_seq: SymbolSequence, candidates: CandidateSet,
                     metric: DistanceMetric, budget: PrivacyBudget) -> np.ndarray:
    """Selection distribution exp(eps*s_j/2) / sum_z exp(eps*s_z/2).

    Scores are the bounded 1/(1+dist) similarity, so sensitivity is 1.
    At infinite budget the mass splits evenly over the maximal scores.
    """
    scores = np.array([score(user_seq, c, metric) for c in candidates])
    top = scores.max()
    if budget.noiseless:
        weights = (scores == top).astype(np.float64)
    else:
        weights = np.exp(budget.epsilon * (scores - top) / 2.0)
    return weights / weights.sum()


def em_select(user_seq: SymbolSequence, candidates: CandidateSet,
              metric: DistanceMetric, budget: PrivacyBudget, rng: RandomSource) -> int:
    """Draw a candidate index by exact cumulative-probability inversion."""
    probs = em_probabilities(user_seq, candidates, metric, budget)
    return select_from_probs(probs, rng)


def select_from_probs(probs: np.ndarray, rng: RandomSource) -> int:
    cum = np.cumsum(probs)
    idx = int(np.searchsorted(cum, rng.random(), side="right"))
    return min(idx, len(probs) - 1)
