"""Sampling from the Haar measure on U(d) and on its quotient by a finite group.

The quotient sampler draws U from Haar on U(d) and reads it as the coset
U·H: because the quotient measure assigns a set S exactly the Haar mass
of its preimage under the canonical projection, pushing full-group Haar
samples through the projection is already quotient-Haar sampling.  No
canonicalization happens here; picking a representative is a downstream
policy decision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionMismatchError
from .linalg import MAX_DIM
from .symmetry import SymmetryGroup


class RandomSource:
    """Reproducible random stream keyed by (master_seed, stream_index).

    Identical key pairs replay identical sample sequences; distinct
    stream indices give statistically independent streams, so parallel
    workers can be handed ``RandomSource(seed, i)`` per work item and the
    combined result does not depend on the worker count.
    """

    def __init__(self, master_seed: int, stream_index: int = 0):
        master_seed = int(master_seed)
        stream_index = int(stream_index)
        if not 0 <= master_seed < 2**64:
            raise ValueError("master_seed must fit in an unsigned 64-bit integer")
        if stream_index < 0:
            raise ValueError("stream_index must be nonnegative")
        self.master_seed = master_seed
        self.stream_index = stream_index
        self._generator: np.random.Generator | None = None

    @property
    def generator(self) -> np.random.Generator:
        if self._generator is None:
            self._generator = np.random.default_rng(
                np.random.SeedSequence(
                    entropy=self.master_seed, spawn_key=(self.stream_index,)
                )
            )
        return self._generator

    def stream(self, index: int) -> "RandomSource":
        """A fresh source on the same master seed with a different stream index."""
        return RandomSource(self.master_seed, index)

    def __repr__(self) -> str:
        return f"RandomSource(master_seed={self.master_seed}, stream_index={self.stream_index})"


def _subchunk_generator(rng: RandomSource, chunk: int) -> np.random.Generator:
    # Streams for internal chunked Monte Carlo; keyed below the caller's
    # stream so they never collide with RandomSource(seed, i) streams.
    return np.random.default_rng(
        np.random.SeedSequence(
            entropy=rng.master_seed, spawn_key=(rng.stream_index, chunk)
        )
    )


def _ginibre(d: int, count: int, gen: np.random.Generator) -> np.ndarray:
    real = gen.standard_normal((count, d, d))
    imag = gen.standard_normal((count, d, d))
    return (real + 1j * imag) / np.sqrt(2.0)


def _haar_from_ginibre(z: np.ndarray) -> np.ndarray:
    q, r = np.linalg.qr(z)
    diag = r[..., np.arange(z.shape[-1]), np.arange(z.shape[-1])]
    # Fix the QR gauge: fold the phases of R's diagonal into Q so the
    # result follows the Haar distribution rather than the factorization's
    # arbitrary column phases.
    phases = diag / np.abs(diag)
    return q * phases[..., None, :]


def _check_dim(d: int) -> None:
    if d < 1:
        raise ValueError("dimension must be positive")
    if d > MAX_DIM:
        raise ValueError(f"dimension {d} exceeds supported maximum {MAX_DIM}")


def sample_haar_unitaries(d: int, count: int, rng: RandomSource) -> np.ndarray:
    """``count`` independent Haar unitaries, shape (count, d, d).

    Complex Ginibre draws orthonormalized by QR with the phase fix above;
    this is the standard exact Haar recipe.
    """
    _check_dim(d)
    if count < 1:
        raise ValueError("count must be positive")
    return _haar_from_ginibre(_ginibre(d, count, rng.generator))


def sample_haar_unitary(d: int, rng: RandomSource) -> np.ndarray:
    """One sample from the Haar measure on U(d)."""
    return sample_haar_unitaries(d, 1, rng)[0]


def sample_haar_states(d: int, count: int, rng: RandomSource) -> np.ndarray:
    """``count`` Haar-random pure states, shape (count, d).

    Normalized complex Gaussian vectors, equivalent to U|0> for Haar U.
    """
    _check_dim(d)
    if count < 1:
        raise ValueError("count must be positive")
    gen = rng.generator
    vec = (gen.standard_normal((count, d)) + 1j * gen.standard_normal((count, d)))
    return vec / np.linalg.norm(vec, axis=1, keepdims=True)


def sample_haar_state(d: int, rng: RandomSource) -> np.ndarray:
    """One Haar-random pure state in dimension d."""
    return sample_haar_states(d, 1, rng)[0]


@dataclass(frozen=True)
class QuotientSample:
    """A coset U·H, stored via one raw Haar representative U."""

    representative: np.ndarray
    group: SymmetryGroup

    @property
    def group_ref(self) -> str:
        return self.group.label

    def orbit_elements(self) -> np.ndarray:
        """All coset members {h U : h in H}, shape (|H|, d, d)."""
        return self.group.elements @ self.representative


def sample_quotient_class(d: int, group: SymmetryGroup, rng: RandomSource) -> QuotientSample:
    """Haar sample on U(d)/H: a Haar draw on U(d) read as its coset."""
    if group.dim != d:
        raise DimensionMismatchError(
            f"group acts on dim {group.dim}, requested dim {d}"
        )
    return QuotientSample(representative=sample_haar_unitary(d, rng), group=group)


# ---------------------------------------------------------------------------
# Sampler self-diagnostics
# ---------------------------------------------------------------------------

_DIAG_CHUNK = 8192


def haar_diagnostics(d: int, samples: int, rng: RandomSource) -> dict:
    """Statistical self-tests of the Haar sampler.

    Checks the second moment E|U_00|^2 = 1/d, the first moment
    E U_00 = 0, the fidelity law F = |U_00|^2 ~ 1 - (1-F)^(d-1) via a
    Kolmogorov-Smirnov statistic, and left invariance of |U_00|^2 under a
    fixed unitary V.  Thresholds (documented in the README): second and
    first moments within max(0.01, 5 standard errors); KS statistic below
    max(0.01, 2.5/sqrt(samples)); paired left-invariance difference within
    3 standard errors.  For d = 1 only phase uniformity is meaningful.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    _check_dim(d)

    if d == 1:
        u = sample_haar_unitaries(1, samples, rng)[:, 0, 0]
        mean = complex(np.mean(u))
        se = 1.0 / np.sqrt(2.0 * samples)
        tol = max(0.01, 5.0 * se)
        modulus_dev = float(np.max(np.abs(np.abs(u) - 1.0)))
        phase_pass = abs(mean.real) < tol and abs(mean.imag) < tol
        ok = phase_pass and modulus_dev < 1e-10
        return {
            "dim": 1,
            "samples": samples,
            "first_moment": [mean.real, mean.imag],
            "first_moment_tolerance": tol,
            "first_moment_pass": phase_pass,
            "modulus_deviation": modulus_dev,
            "overall_pass": ok,
        }

    gen_v = _subchunk_generator(rng, 0)
    v = _haar_from_ginibre(_ginibre(d, 1, gen_v))[0]

    entry = np.empty(samples, dtype=complex)
    entry_left = np.empty(samples, dtype=complex)
    done = 0
    chunk_idx = 1
    while done < samples:
        c = min(_DIAG_CHUNK, samples - done)
        u = _haar_from_ginibre(_ginibre(d, c, _subchunk_generator(rng, chunk_idx)))
        entry[done : done + c] = u[:, 0, 0]
        # (VU)_00 = V[0, :] @ U[:, 0]
        entry_left[done : done + c] = np.einsum("k,nk->n", v[0, :], u[:, :, 0])
        done += c
        chunk_idx += 1

    f = np.abs(entry) ** 2
    m2 = float(np.mean(f))
    m2_se = float(np.std(f, ddof=1) / np.sqrt(samples))
    m2_tol = max(0.01, 5.0 * m2_se)
    m2_pass = abs(m2 - 1.0 / d) < m2_tol

    m1 = complex(np.mean(entry))
    m1_se = float(np.sqrt(1.0 / (2.0 * d)) / np.sqrt(samples))
    m1_tol = max(0.01, 5.0 * m1_se)
    m1_pass = abs(m1.real) < m1_tol and abs(m1.imag) < m1_tol

    ks = fidelity_ks_statistic(f, d)
    ks_tol = max(0.01, 2.5 / np.sqrt(samples))
    ks_pass = ks < ks_tol

    diff = np.abs(entry_left) ** 2 - f
    diff_mean = float(np.mean(diff))
    diff_se = float(np.std(diff, ddof=1) / np.sqrt(samples))
    li_pass = abs(diff_mean) <= 3.0 * diff_se + 1e-12

    ok = m2_pass and m1_pass and ks_pass and li_pass
    return {
        "dim": d,
        "samples": samples,
        "second_moment": m2,
        "second_moment_expected": 1.0 / d,
        "second_moment_se": m2_se,
        "second_moment_tolerance": m2_tol,
        "second_moment_pass": m2_pass,
        "first_moment": [m1.real, m1.imag],
        "first_moment_tolerance": m1_tol,
        "first_moment_pass": m1_pass,
        "ks_statistic": ks,
        "ks_threshold": ks_tol,
        "ks_pass": ks_pass,
        "left_invariance_mean_diff": diff_mean,
        "left_invariance_se": diff_se,
        "left_invariance_pass": li_pass,
        "overall_pass": ok,
    }


def fidelity_ks_statistic(fidelities: np.ndarray, d: int) -> float:
    """KS distance between empirical fidelities and the Haar law 1-(1-F)^(d-1)."""
    if d < 2:
        raise ValueError("the fidelity law needs d >= 2")
    f = np.sort(np.asarray(fidelities, dtype=float))
    n = f.size
    cdf = 1.0 - (1.0 - f) ** (d - 1)
    upper = np.max(np.arange(1, n + 1) / n - cdf)
    lower = np.max(cdf - np.arange(0, n) / n)
    return float(max(upper, lower))
