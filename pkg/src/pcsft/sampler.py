"""Seeded sampling of complex Gaussian bi-signals.

Samples are circularly-symmetric complex Gaussians: zero mean, covariance
E[z z†] equal to the assembled block covariance, and vanishing
pseudo-covariance E[z zᵀ] = 0.  Circularity is a model choice: only the
covariance itself is prescribed by the encoding of a state, and the
zero-pseudo-covariance completion is the one under which the quadratic
form correlation identities of :mod:`pcsft.quadratic` hold.

Determinism contract
--------------------
All randomness flows through the counter-based Philox 4x64 generator.
A batch is produced in fixed-size chunks; chunk ``c`` of a draw with seed
``s`` uses the substream ``Philox(key=(s, domain << 56 | c))``, where the
domain separates bi-signal draws from background draws.  Raw 64-bit words
are mapped to open-interval uniforms and then through the inverse normal
CDF (scipy.special.ndtri), a branch-free transform, so regenerating with
the same (covariance, seed, count) is bit-identical no matter how many
worker threads are used.  The generator identity is recorded on every
batch as ``prng_id``.
"""

from __future__ import annotations

import hashlib
import json
import os
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .covariance import PSD_TOL, BlockCovariance
from .errors import DimensionError, NotPositiveError, SchemaError

PRNG_ID = "philox4x64:invcdf-ndtri:v1"

# Samples per substream chunk.  Part of the determinism contract: changing
# it changes every batch.
CHUNK_SIZE = 16384

_DOMAIN_BISIGNAL = 0
_DOMAIN_BACKGROUND = 1

_MAGIC = b"PCSFTBATCH1\n"


def resolve_workers(workers: int | None = None) -> int:
    """Worker count for chunk-parallel generation.

    Explicit argument wins; otherwise the PCSFT_THREADS environment
    variable caps the hardware parallelism.  Results never depend on the
    resolved value.
    """
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("PCSFT_THREADS")
    if env is not None:
        return max(1, int(env))
    return max(1, os.cpu_count() or 1)


def _substream(seed: int, domain: int, chunk: int) -> np.random.Philox:
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must fit in 64 bits, got {seed}")
    if chunk >= 2**56:
        raise ValueError("chunk index out of range")
    key = np.array([seed, (domain << 56) | chunk], dtype=np.uint64)
    return np.random.Philox(key=key)


def _standard_normals(seed: int, domain: int, chunk: int, n: int) -> np.ndarray:
    """n iid N(0,1) variates from the (seed, domain, chunk) substream."""
    raw = _substream(seed, domain, chunk).random_raw(n)
    # (raw >> 11) + 0.5 scaled by 2^-53 lies strictly inside (0, 1).
    u = ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53
    return ndtri(u)


def _standard_complex(seed: int, domain: int, chunk: int, count: int, dim: int) -> np.ndarray:
    """count x dim standard circular complex normals, E|w|^2 = 1 per mode."""
    z = _standard_normals(seed, domain, chunk, 2 * count * dim).reshape(count, 2, dim)
    return (z[:, 0, :] + 1j * z[:, 1, :]) * np.sqrt(0.5)


@dataclass(frozen=True)
class BiSignalSample:
    """One realization (phi1, phi2) of the bi-signal."""

    phi1: np.ndarray
    phi2: np.ndarray


class SampleBatch:
    """Ordered batch of bi-signal realizations plus its provenance.

    phi1 has shape (count, d1) and phi2 (count, d2); row k is sample k.
    """

    def __init__(self, phi1: np.ndarray, phi2: np.ndarray, seed: int, prng_id: str = PRNG_ID):
        phi1 = np.array(phi1, dtype=complex)
        phi2 = np.array(phi2, dtype=complex)
        if phi1.ndim != 2 or phi2.ndim != 2 or phi1.shape[0] != phi2.shape[0]:
            raise DimensionError(
                f"component arrays disagree: {phi1.shape} vs {phi2.shape}"
            )
        phi1.setflags(write=False)
        phi2.setflags(write=False)
        self.phi1 = phi1
        self.phi2 = phi2
        self.seed = int(seed)
        self.prng_id = prng_id

    @property
    def count(self) -> int:
        return self.phi1.shape[0]

    @property
    def d1(self) -> int:
        return self.phi1.shape[1]

    @property
    def d2(self) -> int:
        return self.phi2.shape[1]

    def __len__(self) -> int:
        return self.count

    def __getitem__(self, k: int) -> BiSignalSample:
        return BiSignalSample(phi1=self.phi1[k], phi2=self.phi2[k])

    def __iter__(self):
        for k in range(self.count):
            yield self[k]


@dataclass(frozen=True)
class ComponentBatch:
    """Batch of single-component draws (used for the background field)."""

    samples: np.ndarray  # (count, dim) complex
    seed: int
    prng_id: str = PRNG_ID

    @property
    def count(self) -> int:
        return self.samples.shape[0]


def factor_covariance(cov: BlockCovariance) -> np.ndarray:
    """Factor F with F F† equal to the assembled covariance.

    Uses the Hermitian eigendecomposition so that exact zero modes (the
    boundary case epsilon = epsilon_min) are handled; eigenvalues in
    [-1e-10, 0) are clipped to zero, anything lower is an error.
    """
    c = cov.assembled()
    evals, evecs = np.linalg.eigh(c)
    lo = float(evals.min())
    if lo < -PSD_TOL:
        raise NotPositiveError(f"covariance has eigenvalue {lo:.3e} < -{PSD_TOL:.1e}")
    evals = np.clip(evals, 0.0, None)
    f = evecs * np.sqrt(evals)[None, :]
    residual = float(np.max(np.abs(f @ f.conj().T - c)))
    if residual > 1e-8:
        raise NotPositiveError(f"factorization residual {residual:.3e} exceeds 1e-8")
    return f


def _chunk_bounds(count: int) -> list[tuple[int, int, int]]:
    """(chunk_index, start, size) triples covering [0, count)."""
    bounds = []
    start = 0
    chunk = 0
    while start < count:
        size = min(CHUNK_SIZE, count - start)
        bounds.append((chunk, start, size))
        start += size
        chunk += 1
    return bounds


def draw(
    cov: BlockCovariance, seed: int, count: int, workers: int | None = None
) -> SampleBatch:
    """Draw ``count`` iid bi-signal samples with the given covariance.

    Deterministic in (cov, seed, count): chunk substreams are indexed by
    position, so any worker split merges back to the same batch.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    f = factor_covariance(cov)
    dim = f.shape[0]
    ft = f.T.copy()
    out = np.empty((count, dim), dtype=complex)

    def fill(chunk: int, start: int, size: int):
        w = _standard_complex(seed, _DOMAIN_BISIGNAL, chunk, size, dim)
        out[start : start + size] = w @ ft

    bounds = _chunk_bounds(count)
    nworkers = min(resolve_workers(workers), len(bounds))
    if nworkers > 1:
        with ThreadPoolExecutor(max_workers=nworkers) as pool:
            list(pool.map(lambda b: fill(*b), bounds))
    else:
        for b in bounds:
            fill(*b)
    return SampleBatch(phi1=out[:, : cov.d1], phi2=out[:, cov.d1 :], seed=seed)


def draw_background(dim: int, epsilon: float, seed: int, count: int) -> ComponentBatch:
    """White-noise background: iid circular complex Gaussian, covariance eps I."""
    if dim < 1:
        raise DimensionError(f"dim must be >= 1, got {dim}")
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    eps = float(epsilon)
    if eps < 0.0:
        raise NotPositiveError(f"epsilon must be nonnegative, got {eps}")
    scale = np.sqrt(eps)
    out = np.empty((count, dim), dtype=complex)
    for chunk, start, size in _chunk_bounds(count):
        w = _standard_complex(seed, _DOMAIN_BACKGROUND, chunk, size, dim)
        out[start : start + size] = scale * w
    out.setflags(write=False)
    return ComponentBatch(samples=out, seed=int(seed))


def covariance_hash(cov: BlockCovariance) -> str:
    """SHA-256 over a canonical little-endian byte encoding of the blocks."""
    h = hashlib.sha256()
    h.update(struct.pack("<qqd", cov.d1, cov.d2, cov.epsilon))
    for block in (cov.d11, cov.d12, cov.d21, cov.d22):
        h.update(np.ascontiguousarray(block, dtype="<c16").tobytes())
    return h.hexdigest()


def save_batch(batch: SampleBatch, path, covariance: BlockCovariance | None = None):
    """Binary dump: header line, then little-endian float64 payload.

    Payload layout is [count][d1][d2] followed by re,im interleaved per
    mode per sample (phi1 modes first, then phi2, row by row).
    """
    header = {
        "format": "pcsft-batch",
        "version": 1,
        "seed": batch.seed,
        "prng_id": batch.prng_id,
        "covariance_hash": covariance_hash(covariance) if covariance is not None else None,
    }
    joint = np.hstack([batch.phi1, batch.phi2])
    flat = np.empty((batch.count, 2 * joint.shape[1]), dtype="<f8")
    flat[:, 0::2] = joint.real
    flat[:, 1::2] = joint.imag
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write((json.dumps(header, sort_keys=True) + "\n").encode("utf-8"))
        fh.write(
            np.array([batch.count, batch.d1, batch.d2], dtype="<f8").tobytes()
        )
        fh.write(flat.tobytes())


def load_batch(path) -> tuple[SampleBatch, dict]:
    """Read a batch written by save_batch; returns (batch, header)."""
    with open(path, "rb") as fh:
        magic = fh.read(len(_MAGIC))
        if magic != _MAGIC:
            raise SchemaError("field 'magic': not a pcsft batch file")
        header = json.loads(fh.readline().decode("utf-8"))
        meta = np.frombuffer(fh.read(24), dtype="<f8")
        count, d1, d2 = (int(x) for x in meta)
        dim = d1 + d2
        flat = np.frombuffer(fh.read(count * 2 * dim * 8), dtype="<f8")
    flat = flat.reshape(count, 2 * dim)
    joint = flat[:, 0::2] + 1j * flat[:, 1::2]
    batch = SampleBatch(
        phi1=joint[:, :d1],
        phi2=joint[:, d1:],
        seed=int(header.get("seed", 0)),
        prng_id=header.get("prng_id", PRNG_ID),
    )
    return batch, header
