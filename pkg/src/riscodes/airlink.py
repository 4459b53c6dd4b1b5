"""Pilot transmission through K coded RISs, despreading, and interference metrics.

Array conventions: channel matrices may carry extra leading batch axes (for
example one per OFDM subcarrier) between the path axis and the antenna axes.
A frame ``y`` has shape ``(T, *batch, N_rx)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm

import numpy as np

from riscodes.codes.matrix import PhaseCodeMatrix, correlation_counts
from riscodes.cyclotomic import UnitRoot, vanishing_rows
from riscodes.seeding import complex_normal

__all__ = [
    "ChannelSet",
    "FrameConfig",
    "SlowProfileSet",
    "DespreadBlock",
    "iid_channels",
    "random_profiles",
    "compose_profile",
    "path_response",
    "simulate_frame",
    "despread",
    "nearest_root",
    "quantize_matrix",
    "quantized_dft",
    "leakage_matrix",
    "channel_mse",
]


@dataclass(frozen=True)
class ChannelSet:
    H0: np.ndarray  # (*batch, N_rx, N_tx)
    Hsr: np.ndarray  # (K, *batch, N_rx, N_ris)
    Hts: np.ndarray  # (K, *batch, N_ris, N_tx)
    delays: np.ndarray | None = None  # (K + 1,) or (K + 1, N_rx) seconds, path 0 first

    def __post_init__(self):
        H0, Hsr, Hts = (np.asarray(a, dtype=complex) for a in (self.H0, self.Hsr, self.Hts))
        object.__setattr__(self, "H0", H0)
        object.__setattr__(self, "Hsr", Hsr)
        object.__setattr__(self, "Hts", Hts)
        if H0.ndim < 2 or Hsr.ndim != H0.ndim + 1 or Hts.ndim != H0.ndim + 1:
            raise ValueError("inconsistent channel ranks")
        n_rx, n_tx = H0.shape[-2:]
        if Hsr.shape[0] != Hts.shape[0]:
            raise ValueError("Hsr and Hts disagree on the number of RISs")
        if Hsr.shape[1:-2] != H0.shape[:-2] or Hts.shape[1:-2] != H0.shape[:-2]:
            raise ValueError("batch axes differ between paths")
        if Hsr.shape[-2] != n_rx or Hts.shape[-1] != n_tx or Hsr.shape[-1] != Hts.shape[-2]:
            raise ValueError("antenna / element dimensions do not match")
        if not (np.all(np.isfinite(H0)) and np.all(np.isfinite(Hsr)) and np.all(np.isfinite(Hts))):
            raise ValueError("channel entries must be finite")
        if self.delays is not None:
            d = np.asarray(self.delays, dtype=float)
            if d.shape not in ((Hsr.shape[0] + 1,), (Hsr.shape[0] + 1, n_rx)):
                raise ValueError(f"delays must have shape (K+1,) or (K+1, N_rx), got {d.shape}")
            if not np.all(np.isfinite(d)) or d.min(initial=0.0) < 0:
                raise ValueError("delays must be finite and non-negative")
            object.__setattr__(self, "delays", d)

    @property
    def K(self) -> int:
        return self.Hsr.shape[0]

    @property
    def n_rx(self) -> int:
        return self.H0.shape[-2]

    @property
    def n_tx(self) -> int:
        return self.H0.shape[-1]

    @property
    def n_ris(self) -> int:
        return self.Hsr.shape[-1]

    @property
    def batch_shape(self) -> tuple[int, ...]:
        return self.H0.shape[:-2]


@dataclass(frozen=True)
class FrameConfig:
    P: int
    Q: int = 1
    Es: float = 1.0
    N0: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.P < 1 or self.Q < 1:
            raise ValueError("P and Q must be positive")
        if not self.Es > 0 or self.N0 < 0:
            raise ValueError("need Es > 0 and N0 >= 0")

    @property
    def T(self) -> int:
        return self.P * self.Q


@dataclass(frozen=True)
class SlowProfileSet:
    """Beamforming phases zeta[k-1, q, :] of RIS k in slow slot q, as R-th root exponents."""

    exponents: np.ndarray  # (K, Q, N_ris)
    modulus: int

    def __post_init__(self):
        e = np.asarray(self.exponents, dtype=np.int64)
        if e.ndim != 3:
            raise ValueError("slow profiles must have shape (K, Q, N_ris)")
        if self.modulus < 2 or e.min(initial=0) < 0 or e.max(initial=0) >= self.modulus:
            raise ValueError(f"exponents must lie in [0, {self.modulus})")
        object.__setattr__(self, "exponents", e)

    @property
    def K(self) -> int:
        return self.exponents.shape[0]

    @property
    def Q(self) -> int:
        return self.exponents.shape[1]

    def to_complex(self) -> np.ndarray:
        return np.exp(2j * np.pi * self.exponents / self.modulus)


@dataclass(frozen=True)
class DespreadBlock:
    z: np.ndarray  # (K + 1, Q, *batch, N_rx)
    P: int
    Es: float
    effective_noise_var: float

    def normalized(self) -> np.ndarray:
        """Per-path channel estimates z / (P sqrt(Es))."""
        return self.z / (self.P * np.sqrt(self.Es))


def iid_channels(rng: np.random.Generator, K: int, n_rx: int, n_tx: int, n_ris: int) -> ChannelSet:
    """Unstructured channels with i.i.d. CN(0, 1) entries."""
    return ChannelSet(
        H0=complex_normal(rng, (n_rx, n_tx)),
        Hsr=complex_normal(rng, (K, n_rx, n_ris)),
        Hts=complex_normal(rng, (K, n_ris, n_tx)),
    )


def random_profiles(rng: np.random.Generator, K: int, Q: int, n_ris: int, R: int) -> SlowProfileSet:
    return SlowProfileSet(rng.integers(0, R, (K, Q, n_ris)), R)


def _code_values(code) -> np.ndarray:
    if isinstance(code, PhaseCodeMatrix):
        return code.to_complex()
    return np.asarray(code, dtype=complex)


def compose_profile(code: PhaseCodeMatrix, zeta: SlowProfileSet, k: int, t: int) -> tuple[np.ndarray, int]:
    """Phase profile of RIS k at transmission t as ``(exponents, modulus)``.

    The fast code entry for ``p = t mod P`` multiplies the slow profile of
    slot ``q = t // P``.  When code and profile use different resolutions the
    result is expressed over the lcm of the two.
    """
    P = code.P
    if not 1 <= k <= code.K or k > zeta.K:
        raise IndexError(f"RIS index {k} out of range")
    if not 0 <= t < P * zeta.Q:
        raise IndexError(f"transmission index {t} out of range for T={P * zeta.Q}")
    p, q = t % P, t // P
    L = lcm(code.modulus, zeta.modulus)
    beta = UnitRoot(int(code.exponents[k, p]) * (L // code.modulus), L)
    gamma = (zeta.exponents[k - 1, q] * (L // zeta.modulus) + beta.exponent) % L
    return gamma, L


def path_response(ch: ChannelSet, k: int, gamma: np.ndarray | None = None) -> np.ndarray:
    """``H_k(gamma) 1`` for RIS path k (k >= 1), or ``H_0 1`` for k = 0; shape (*batch, N_rx)."""
    if k == 0:
        return ch.H0.sum(axis=-1)
    a = ch.Hts[k - 1].sum(axis=-1)  # (*batch, N_ris)
    return np.einsum("...ri,...i->...r", ch.Hsr[k - 1], np.asarray(gamma) * a)


def _unit_pilots(pilots, T: int) -> np.ndarray:
    if pilots is None:
        return np.ones(T, dtype=complex)
    pilots = np.asarray(pilots, dtype=complex)
    if pilots.shape != (T,) or not np.allclose(np.abs(pilots), 1.0):
        raise ValueError("pilots must be T unit-modulus symbols")
    return pilots


def simulate_frame(
    ch: ChannelSet,
    code,
    zeta: SlowProfileSet,
    cfg: FrameConfig,
    noise: np.ndarray | None = None,
    pilots=None,
) -> np.ndarray:
    """Received pilots ``y_t`` for t = 0..T-1, shape (T, *batch, N_rx).

    ``code`` is a :class:`PhaseCodeMatrix` or any (K+1) x P complex array.
    Noise is CN(0, N0 I) drawn from ``cfg.seed`` unless given explicitly.
    """
    beta = _code_values(code)
    K = ch.K
    if beta.shape[0] < K + 1 or zeta.K != K:
        raise ValueError(f"need codes and slow profiles for all {K} RISs")
    if beta.shape[1] != cfg.P or zeta.Q != cfg.Q:
        raise ValueError("frame config disagrees with code length or slow-profile count")
    if zeta.exponents.shape[2] != ch.n_ris:
        raise ValueError("slow profile length differs from the RIS element count")
    T = cfg.T
    s = _unit_pilots(pilots, T)
    t = np.arange(T)
    p, q = t % cfg.P, t // cfg.P
    zc = zeta.to_complex()  # (K, Q, N_ris)
    gamma = beta[1 : K + 1, p][:, :, None] * zc[:, q, :]  # (K, T, N_ris)

    y = np.broadcast_to(path_response(ch, 0), (T, *ch.batch_shape, ch.n_rx)).copy()
    for k in range(1, K + 1):
        a = ch.Hts[k - 1].sum(axis=-1)  # (*batch, N_ris)
        weighted = ch.Hsr[k - 1] * a[..., None, :]  # (*batch, N_rx, N_ris)
        y += np.moveaxis(weighted @ gamma[k - 1].T, -1, 0)
    y *= np.sqrt(cfg.Es) * s.reshape((T,) + (1,) * (y.ndim - 1))
    if noise is None:
        if cfg.N0 > 0:
            noise = complex_normal(np.random.default_rng(cfg.seed), y.shape, cfg.N0)
    elif noise.shape != y.shape:
        raise ValueError(f"noise shape {noise.shape} != frame shape {y.shape}")
    if noise is not None:
        y = y + noise
    return y


def despread(y: np.ndarray, code, cfg: FrameConfig, pilots=None) -> DespreadBlock:
    """Correlate each slow slot against the conjugate fast codes.

    ``z[k, q] = sum_p conj(beta[k, p]) * w[q P + p]`` with ``w_t = y_t conj(s_t)``.
    """
    beta = _code_values(code)
    y = np.asarray(y)
    if y.shape[0] != cfg.T or beta.shape[1] != cfg.P:
        raise ValueError(f"expected {cfg.T} observations of a length-{cfg.P} code, got {y.shape[0]}")
    s = _unit_pilots(pilots, cfg.T)
    w = y * s.conj().reshape((cfg.T,) + (1,) * (y.ndim - 1))
    w = w.reshape((cfg.Q, cfg.P) + y.shape[1:])
    z = np.einsum("kp,qp...->kq...", beta.conj(), w)
    return DespreadBlock(z=z, P=cfg.P, Es=cfg.Es, effective_noise_var=cfg.P * cfg.N0)


def nearest_root(value: complex, R: int) -> UnitRoot:
    """Nearest R-th root of unity; exact ties go to the smaller exponent."""
    if abs(abs(value) - 1.0) > 1e-9:
        raise ValueError(f"expected a unit-modulus value, got |v| = {abs(value)}")
    return UnitRoot(int(quantize_matrix(np.array([[value]]), R)[0, 0]), R)


def quantize_matrix(values: np.ndarray, R: int, tie_tol: float = 1e-12) -> np.ndarray:
    """Element-wise nearest-root exponents of a unit-modulus array."""
    values = np.asarray(values, dtype=complex)
    roots = np.exp(2j * np.pi * np.arange(R) / R)
    dist = np.abs(values[..., None] - roots)
    best = dist.min(axis=-1, keepdims=True)
    return np.argmax(dist <= best + tie_tol, axis=-1).astype(np.int64)


def quantized_dft(P: int, K: int, R: int) -> PhaseCodeMatrix:
    """Rows 0..K of the P-point DFT matrix mapped to the nearest R-th roots of unity."""
    k = np.arange(K + 1)
    F = np.exp(-2j * np.pi * np.outer(k, np.arange(P)) / P)
    return PhaseCodeMatrix(quantize_matrix(F, R), R)


def leakage_matrix(code) -> np.ndarray:
    """``|sum_p b[k,p] conj(b[k',p])| / P``; identity for an orthogonal code.

    For root-valued codes, entries whose correlation vanishes exactly are set
    to exactly 0.0.
    """
    beta = _code_values(code)
    P = beta.shape[1]
    L = np.abs(beta @ beta.conj().T) / P
    if isinstance(code, PhaseCodeMatrix):
        zero = vanishing_rows(correlation_counts(code.exponents, code.modulus), code.modulus)
        L[zero] = 0.0
    np.fill_diagonal(L, 1.0)
    return L


def channel_mse(block: DespreadBlock, truth: ChannelSet, zeta: SlowProfileSet, cfg: FrameConfig) -> np.ndarray:
    """Per-path mean squared error of ``z / (P sqrt(Es))`` against ``H_k(zeta) 1``.

    Averaged over slow slots, batch entries and receive antennas; shape (K + 1,).
    """
    est = block.normalized()
    zc = zeta.to_complex()
    out = np.zeros(truth.K + 1)
    for k in range(truth.K + 1):
        err = 0.0
        for q in range(cfg.Q):
            ref = path_response(truth, k, None if k == 0 else zc[k - 1, q])
            err += np.mean(np.abs(est[k, q] - ref) ** 2)
        out[k] = err / cfg.Q
    return out
