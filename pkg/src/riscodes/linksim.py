"""Link-level Monte Carlo: interference leakage and channel-estimation error per path."""

from __future__ import annotations

import numpy as np

from riscodes.airlink import (
    FrameConfig,
    SlowProfileSet,
    channel_mse,
    despread,
    iid_channels,
    leakage_matrix,
    path_response,
    simulate_frame,
)
from riscodes.config import Scenario
from riscodes.locexp import (
    Geometry,
    OfdmConfig,
    genie_block,
    scenario_noise_level,
    method_code,
    synth_wideband_channel,
)
from riscodes.seeding import complex_normal, stream

CSV_COLUMNS = ("method", "R", "trial", "path", "leakage", "mse", "nmse")


def _method_resolution(method: str, R: int) -> int:
    return int(method[len("dft-q") :]) if method.startswith("dft-q") else R


def run_link_trials(scenario: Scenario) -> list[dict]:
    """One row per (method, trial, path) with leakage, MSE and power-normalized MSE.

    ``leakage`` is the largest correlation of the path's code row with any
    other row.  All methods share the channel, slow profiles and receiver
    noise of a trial; the genie observes each path separately.
    """
    exp = scenario.experiment
    K = scenario.K
    codes = {m: method_code(m, K, scenario.R, scenario.P) for m in exp.methods}
    P = next(iter(codes.values())).P
    if any(code.P != P for code in codes.values()):
        raise ValueError("all methods must share the code length")
    leak = {}
    for m, code in codes.items():
        L = leakage_matrix(code)
        np.fill_diagonal(L, 0.0)
        leak[m] = np.zeros(K + 1) if m == "genie" else L.max(axis=1)

    fixed = None
    if scenario.channel_model == "geometric":
        ofdm = OfdmConfig(exp.n_subcarriers, exp.subcarrier_spacing, exp.carrier_frequency, scenario.Es)
        fixed = synth_wideband_channel(
            Geometry.from_config(K, exp), ofdm, scenario.N_ris, exp.ris_element_gain_db, exp.los_attenuation_db
        )
        N0 = scenario_noise_level(fixed, exp, scenario)
    else:
        N0 = scenario.N0
    cfg = FrameConfig(P=P, Q=scenario.Q, Es=scenario.Es, N0=N0, seed=scenario.seed)

    rows = []
    for trial in range(scenario.trials):
        ch = fixed if fixed is not None else iid_channels(stream(scenario.seed, "channel", trial), K, scenario.N_rx, scenario.N_tx, scenario.N_ris)
        u = stream(scenario.seed, "slow-profile", trial).random((K, scenario.Q, scenario.N_ris))
        zeta = SlowProfileSet(np.floor(u * scenario.R).astype(np.int64), scenario.R)
        shape = (cfg.T, *ch.batch_shape, ch.n_rx)
        noise = complex_normal(stream(scenario.seed, "receiver-noise", trial), shape, N0)
        power = _path_power(ch, zeta)
        for m in exp.methods:
            if m == "genie":
                block = genie_block(ch, zeta, cfg, stream(scenario.seed, "genie", trial))
            else:
                block = despread(simulate_frame(ch, codes[m], zeta, cfg, noise=noise), codes[m], cfg)
            mse = channel_mse(block, ch, zeta, cfg)
            for k in range(K + 1):
                rows.append(
                    {
                        "method": m,
                        "R": _method_resolution(m, scenario.R),
                        "trial": trial,
                        "path": k,
                        "leakage": float(leak[m][k]),
                        "mse": float(mse[k]),
                        "nmse": float(mse[k] / power[k]),
                    }
                )
    return rows


def _path_power(ch, zeta: SlowProfileSet) -> np.ndarray:
    zc = zeta.to_complex()
    out = np.empty(ch.K + 1)
    for k in range(ch.K + 1):
        resp = [path_response(ch, k, None if k == 0 else zc[k - 1, q]) for q in range(zeta.Q)]
        out[k] = np.mean(np.abs(np.stack(resp)) ** 2)
    return out


def summarize(rows: list[dict]) -> list[dict]:
    """Mean leakage, MSE and NMSE per (method, path), in first-seen method order."""
    groups: dict[tuple, list[dict]] = {}
    for r in rows:
        groups.setdefault((r["method"], r["R"], r["path"]), []).append(r)
    return [
        {
            "method": m,
            "R": R,
            "path": k,
            "trials": len(g),
            "leakage": float(np.mean([r["leakage"] for r in g])),
            "mse": float(np.mean([r["mse"] for r in g])),
            "nmse": float(np.mean([r["nmse"] for r in g])),
        }
        for (m, R, k), g in groups.items()
    ]
