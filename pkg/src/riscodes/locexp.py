"""Wideband RIS localization from despread per-path delays.

A single-antenna BS sends OFDM pilot frames through K coded RISs to a few
synchronized receivers.  After despreading, each path's frequency response is
turned into a time of arrival, and the RIS position follows from the range
sums ``|BS - x| + |x - RX_i|`` measured at every receiver.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

from riscodes.airlink import (
    ChannelSet,
    DespreadBlock,
    FrameConfig,
    SlowProfileSet,
    despread,
    path_response,
    quantized_dft,
    simulate_frame,
)
from riscodes.codes.design import design_code
from riscodes.config import ExperimentConfig, Scenario
from riscodes.seeding import complex_normal, stream

__all__ = [
    "SPEED_OF_LIGHT",
    "Geometry",
    "OfdmConfig",
    "ToaEstimate",
    "LocalizationResult",
    "ExperimentResult",
    "ris_element_offsets",
    "synth_wideband_channel",
    "estimate_toa",
    "localize_ris",
    "method_code",
    "genie_block",
    "scenario_noise_level",
    "run_experiment",
]


@dataclass(frozen=True)
class Geometry:
    bs: np.ndarray  # (3,)
    ris: np.ndarray  # (K, 3)
    rx: np.ndarray  # (N_rx, 3)

    def __post_init__(self):
        bs = np.asarray(self.bs, dtype=float).reshape(3)
        ris = np.asarray(self.ris, dtype=float).reshape(-1, 3)
        rx = np.asarray(self.rx, dtype=float).reshape(-1, 3)
        nodes = np.vstack([bs, ris, rx])
        gaps = np.linalg.norm(nodes[:, None] - nodes[None], axis=-1)
        np.fill_diagonal(gaps, np.inf)
        if gaps.min() < 1e-9:
            raise ValueError("two nodes of the geometry coincide")
        for name, val in (("bs", bs), ("ris", ris), ("rx", rx)):
            val.setflags(write=False)
            object.__setattr__(self, name, val)

    @property
    def K(self) -> int:
        return self.ris.shape[0]

    @classmethod
    def circular(
        cls,
        K: int,
        n_rx: int = 3,
        radius: float = 10.0,
        ris_z: float = -3.0,
        rx_z: float = 1.0,
        rx_phase_deg: float = 60.0,
    ) -> Geometry:
        """BS at the origin; RIS k at angle 2 pi (k-1)/K and the receivers evenly
        spaced from ``rx_phase_deg``, all on a circle of the given radius."""
        a = 2 * np.pi * np.arange(K) / K
        b = np.deg2rad(rx_phase_deg) + 2 * np.pi * np.arange(n_rx) / n_rx
        ris = np.stack([radius * np.cos(a), radius * np.sin(a), np.full(K, ris_z)], axis=1)
        rx = np.stack([radius * np.cos(b), radius * np.sin(b), np.full(n_rx, rx_z)], axis=1)
        return cls(np.zeros(3), ris, rx)

    @classmethod
    def from_config(cls, K: int, exp: ExperimentConfig) -> Geometry:
        return cls.circular(K, exp.n_receivers, exp.radius, exp.ris_z, exp.rx_z, exp.rx_phase_deg)

    def los_delays(self) -> np.ndarray:
        return np.linalg.norm(self.rx - self.bs, axis=1) / SPEED_OF_LIGHT

    def ris_delays(self) -> np.ndarray:
        """(K, N_rx) delays of the BS -> RIS k -> RX i paths."""
        d_in = np.linalg.norm(self.ris - self.bs, axis=1)
        d_out = np.linalg.norm(self.ris[:, None] - self.rx[None], axis=-1)
        return (d_in[:, None] + d_out) / SPEED_OF_LIGHT


@dataclass(frozen=True)
class OfdmConfig:
    n_subcarriers: int = 3000
    spacing: float = 120e3
    carrier: float = 28e9
    Es: float = 1.0
    N0: float = 0.0

    def __post_init__(self):
        if self.n_subcarriers < 2 or not self.spacing > 0 or not self.carrier > 0:
            raise ValueError("need >= 2 subcarriers and positive spacing and carrier")
        if not self.Es > 0 or self.N0 < 0:
            raise ValueError("need Es > 0 and N0 >= 0")

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier

    @property
    def bin_width(self) -> float:
        """Delay resolution 1 / (N_sc * spacing) in seconds."""
        return 1.0 / (self.n_subcarriers * self.spacing)

    @property
    def max_delay(self) -> float:
        return 1.0 / self.spacing

    def offsets(self) -> np.ndarray:
        """Baseband subcarrier frequencies n * spacing, n = 0..N_sc-1."""
        return np.arange(self.n_subcarriers) * self.spacing


@dataclass(frozen=True)
class ToaEstimate:
    tau: np.ndarray  # (..., N_rx) seconds
    variance: np.ndarray  # same shape, CRB-style proxy in s^2


@dataclass(frozen=True)
class LocalizationResult:
    position: np.ndarray
    converged: bool
    residual: float  # rms range-sum mismatch in meters
    iterations: int


def ris_element_offsets(n_ris: int, spacing: float, normal: np.ndarray) -> np.ndarray:
    """Element positions of a near-square planar array centred on the origin.

    The array is vertical and faces ``normal`` (projected to the horizontal plane).
    """
    width = int(np.ceil(np.sqrt(n_ris)))
    col, row = np.divmod(np.arange(n_ris), width)
    u = np.array([-normal[1], normal[0], 0.0])
    u /= np.linalg.norm(u)
    v = np.array([0.0, 0.0, 1.0])
    x = (row - (width - 1) / 2) * spacing
    y = (col - (np.ceil(n_ris / width) - 1) / 2) * spacing
    return x[:, None] * u + y[:, None] * v


def synth_wideband_channel(
    geom: Geometry,
    ofdm: OfdmConfig,
    n_ris: int,
    ris_gain_db: float = 0.0,
    los_attenuation_db: float = 0.0,
) -> ChannelSet:
    """Far-field free-space channels to every receiver, one batch entry per subcarrier.

    Each leg has Friis amplitude ``lambda / (4 pi d)`` and the phase ramp
    ``exp(-j 2 pi n spacing tau)``; subcarrier 0 carries no delay phase.  The
    array response uses the carrier wavelength on all subcarriers.
    """
    lam = ofdm.wavelength
    f = ofdm.offsets()
    g_ris = 10 ** (ris_gain_db / 20)
    g_los = 10 ** (-los_attenuation_db / 20)
    K, n_rx = geom.K, geom.rx.shape[0]
    k0 = 2 * np.pi / lam

    d0 = np.linalg.norm(geom.rx - geom.bs, axis=1)
    H0 = g_los * lam / (4 * np.pi * d0) * np.exp(-2j * np.pi * np.outer(f, d0 / SPEED_OF_LIGHT))
    Hsr = np.empty((K, f.size, n_rx, n_ris), dtype=complex)
    Hts = np.empty((K, f.size, n_ris, 1), dtype=complex)
    for k in range(K):
        centre = geom.ris[k]
        elements = ris_element_offsets(n_ris, lam / 2, geom.bs - centre)
        to_bs = geom.bs - centre
        d_in = np.linalg.norm(to_bs)
        a_in = np.exp(1j * k0 * elements @ (to_bs / d_in))
        ramp_in = np.exp(-2j * np.pi * f * d_in / SPEED_OF_LIGHT)
        Hts[k, :, :, 0] = (lam / (4 * np.pi * d_in)) * ramp_in[:, None] * a_in
        to_rx = geom.rx - centre
        d_out = np.linalg.norm(to_rx, axis=1)
        a_out = np.exp(1j * k0 * (to_rx / d_out[:, None]) @ elements.T)  # (N_rx, N_ris)
        ramp_out = np.exp(-2j * np.pi * np.outer(f, d_out / SPEED_OF_LIGHT))  # (N_sc, N_rx)
        Hsr[k] = g_ris * (lam / (4 * np.pi * d_out))[None, :, None] * ramp_out[:, :, None] * a_out
    delays = np.vstack([geom.los_delays(), geom.ris_delays()])
    return ChannelSet(H0=H0[:, :, None], Hsr=Hsr, Hts=Hts, delays=delays)


def estimate_toa(z, ofdm: OfdmConfig, oversampling: int = 8, noise_var: float | None = None) -> ToaEstimate:
    """Delay of the strongest tap of each per-subcarrier response.

    ``z`` is a :class:`DespreadBlock` (slot q = 0 is used) or an array whose
    second-to-last axis runs over subcarriers.  The oversampled inverse DFT
    peak is refined by a parabola through the peak and its two neighbours.
    """
    if isinstance(z, DespreadBlock):
        if noise_var is None:
            noise_var = z.effective_noise_var
        z = z.z[:, 0]
    z = np.moveaxis(np.asarray(z, dtype=complex), -2, -1)
    N = z.shape[-1]
    if N != ofdm.n_subcarriers:
        raise ValueError(f"expected {ofdm.n_subcarriers} subcarriers, got {N}")
    M = N * oversampling
    mag = np.abs(np.fft.ifft(z, n=M, axis=-1))
    i = np.argmax(mag, axis=-1)[..., None]
    a = np.take_along_axis(mag, (i - 1) % M, axis=-1)[..., 0]
    b = np.take_along_axis(mag, i, axis=-1)[..., 0]
    c = np.take_along_axis(mag, (i + 1) % M, axis=-1)[..., 0]
    denom = a - 2 * b + c
    with np.errstate(divide="ignore", invalid="ignore"):
        delta = np.where(denom < 0, 0.5 * (a - c) / denom, 0.0)
    tau = ((i[..., 0] + delta) % M) / (M * ofdm.spacing)

    n = np.arange(N)
    spread = np.sum((n - n.mean()) ** 2)
    signal = np.maximum(np.mean(np.abs(z) ** 2, axis=-1) - (noise_var or 0.0), np.finfo(float).tiny)
    var = (noise_var or 0.0) / (2 * signal * (2 * np.pi * ofdm.spacing) ** 2 * spread)
    return ToaEstimate(tau=tau, variance=var)


def localize_ris(
    tau_ris: np.ndarray,
    tau_los: np.ndarray,
    geom: Geometry,
    initial: np.ndarray | None = None,
    max_iter: int = 50,
    tol: float = 1e-9,
) -> LocalizationResult:
    """Damped Gauss-Newton on the range sums ``|BS - x| + |x - RX_i|``.

    Each receiver gives the range sum ``c (tau_ris - tau_los) + |BS - RX_i|``.
    With three receivers the ellipsoids also meet at a mirror point on the
    far side of the receivers, so the default start is the receiver centroid
    reflected through the horizontal plane of the BS.
    """
    rx, bs = geom.rx, geom.bs
    if rx.shape[0] < 3:
        raise ValueError("need at least 3 receivers")
    tau_ris, tau_los = np.asarray(tau_ris, float), np.asarray(tau_los, float)
    rho = SPEED_OF_LIGHT * (tau_ris - tau_los) + np.linalg.norm(rx - bs, axis=1)
    if initial is None:
        initial = rx.mean(axis=0)
        initial[2] = 2 * bs[2] - initial[2]
    x = np.asarray(initial, dtype=float).copy()

    def residual(x):
        return np.linalg.norm(x - bs) + np.linalg.norm(x - rx, axis=1) - rho

    r = residual(x)
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        d_bs = np.linalg.norm(x - bs)
        d_rx = np.linalg.norm(x - rx, axis=1)
        if d_bs == 0 or np.any(d_rx == 0):
            break
        J = (x - bs) / d_bs + (x - rx) / d_rx[:, None]
        step = np.linalg.lstsq(J, -r, rcond=None)[0]
        scale, cost = 1.0, r @ r
        while scale > 1e-6:
            r_new = residual(x + scale * step)
            if r_new @ r_new <= cost:
                break
            scale /= 2
        else:
            converged = np.linalg.norm(step) < 1e3 * tol
            break
        x = x + scale * step
        r = r_new
        if np.linalg.norm(scale * step) < tol:
            converged = True
            break
    return LocalizationResult(x, bool(converged), float(np.sqrt(np.mean(r**2))), it)


def method_code(method: str, K: int, R: int, P: int | None = None):
    """Code used by a named method: the designed code, or the quantized DFT benchmark."""
    if method in ("proposed", "genie"):
        return design_code(K, R, P).code
    if method.startswith("dft-q"):
        Rq = int(method[len("dft-q") :])
        if Rq < 2:
            raise ValueError(f"benchmark resolution must be >= 2, got {Rq}")
        P = design_code(K, R, P).code.P if P is None else P
        return quantized_dft(P, K, Rq)
    raise ValueError(f"unknown method {method!r}")


@dataclass
class ExperimentResult:
    methods: tuple[str, ...]
    errors: dict[str, np.ndarray]  # method -> (realizations, K) meters
    converged: dict[str, np.ndarray]
    P: int
    N0: float
    medians: dict[str, float] = field(default_factory=dict)
    median_se: dict[str, float] = field(default_factory=dict)

    def cdf(self, method: str) -> tuple[np.ndarray, np.ndarray]:
        e = np.sort(self.errors[method].ravel())
        return e, np.arange(1, e.size + 1) / e.size

    def quantile_table(self, probs=(0.1, 0.25, 0.5, 0.75, 0.9)) -> list[dict]:
        rows = []
        for p in probs:
            row = {"quantile": p}
            for m in self.methods:
                row[m] = float(np.quantile(self.errors[m], p))
            rows.append(row)
        return rows


def scenario_noise_level(ch: ChannelSet, exp: ExperimentConfig, scenario: Scenario) -> float:
    """N0 giving the configured per-subcarrier SNR for the average RIS path, or the scenario's N0."""
    if exp.ris_snr_db is None:
        return scenario.N0
    gain = np.mean([np.mean(np.abs(path_response(ch, k, np.ones(ch.n_ris))) ** 2) for k in range(1, ch.K + 1)])
    return scenario.Es * gain * 10 ** (-exp.ris_snr_db / 10)


def _median_se(errors: np.ndarray, n_boot: int, seed: int) -> float:
    """Bootstrap standard error of the pooled median, resampling whole realizations."""
    rng = stream(seed, "bootstrap")
    n = errors.shape[0]
    meds = [np.median(errors[rng.integers(0, n, n)]) for _ in range(n_boot)]
    return float(np.std(meds))


def run_experiment(scenario: Scenario) -> ExperimentResult:
    """Localization error of every RIS for each method over random slow profiles.

    Per realization all methods share the slow profiles and the receiver
    noise; the genie despreads each path without interference and draws its
    own noise of the same post-despreading variance.
    """
    exp = scenario.experiment
    K = scenario.K
    geom = Geometry.from_config(K, exp)
    ofdm = OfdmConfig(exp.n_subcarriers, exp.subcarrier_spacing, exp.carrier_frequency, scenario.Es)
    if max(geom.ris_delays().max(), geom.los_delays().max()) >= ofdm.max_delay:
        raise ValueError("path delays exceed the OFDM delay span 1/spacing")
    ch = synth_wideband_channel(geom, ofdm, scenario.N_ris, exp.ris_element_gain_db, exp.los_attenuation_db)
    N0 = scenario_noise_level(ch, exp, scenario)
    codes = {m: method_code(m, K, scenario.R, scenario.P) for m in exp.methods}
    P = next(iter(codes.values())).P
    if any(code.P != P for code in codes.values()):
        raise ValueError("all methods must share the code length")
    cfg = FrameConfig(P=P, Q=1, Es=scenario.Es, N0=N0, seed=scenario.seed)

    shape = (exp.realizations, K)
    errors = {m: np.empty(shape) for m in exp.methods}
    converged = {m: np.empty(shape, dtype=bool) for m in exp.methods}
    frame_shape = (P, exp.n_subcarriers, geom.rx.shape[0])
    for n in range(exp.realizations):
        u = stream(scenario.seed, "slow-profile", n).random((K, 1, scenario.N_ris))
        zeta = SlowProfileSet(np.floor(u * scenario.R).astype(np.int64), scenario.R)
        noise = complex_normal(stream(scenario.seed, "receiver-noise", n), frame_shape, N0)
        for m in exp.methods:
            if m == "genie":
                z = genie_block(ch, zeta, cfg, stream(scenario.seed, "genie", n))
            else:
                y = simulate_frame(ch, codes[m], zeta, cfg, noise=noise)
                z = despread(y, codes[m], cfg)
            toa = estimate_toa(z, ofdm, exp.oversampling)
            for k in range(1, K + 1):
                est = localize_ris(toa.tau[k], toa.tau[0], geom)
                errors[m][n, k - 1] = np.linalg.norm(est.position - geom.ris[k - 1])
                converged[m][n, k - 1] = est.converged

    result = ExperimentResult(tuple(exp.methods), errors, converged, P, N0)
    for m in exp.methods:
        result.medians[m] = float(np.median(errors[m]))
        result.median_se[m] = _median_se(errors[m], exp.bootstrap, scenario.seed)
    return result


def genie_block(ch: ChannelSet, zeta: SlowProfileSet, cfg: FrameConfig, rng: np.random.Generator) -> DespreadBlock:
    """Interference-free despreader output: every path observed on its own."""
    zc = zeta.to_complex()
    clean = [path_response(ch, 0)] + [path_response(ch, k, zc[k - 1, 0]) for k in range(1, ch.K + 1)]
    z = cfg.P * np.sqrt(cfg.Es) * np.stack(clean)[:, None]
    z = z + complex_normal(rng, z.shape, cfg.P * cfg.N0)
    return DespreadBlock(z=z, P=cfg.P, Es=cfg.Es, effective_noise_var=cfg.P * cfg.N0)
