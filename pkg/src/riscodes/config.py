"""Scenario files: one JSON document drives both ``simulate`` and ``locexp``."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

SCHEMA_VERSION = 1

DEFAULT_METHODS = ("proposed", "dft-q2", "dft-q4", "dft-q8", "dft-q16", "dft-q32", "dft-q64", "genie")


@dataclass(frozen=True)
class ExperimentConfig:
    # geometry
    radius: float = 10.0
    ris_z: float = -3.0
    rx_z: float = 1.0
    n_receivers: int = 3
    rx_phase_deg: float = 60.0
    # OFDM numerology (artifact defaults; the source study's table is not available)
    n_subcarriers: int = 3000
    subcarrier_spacing: float = 120e3
    carrier_frequency: float = 28e9
    oversampling: int = 8
    # RIS element gain on top of free-space loss, and LOS attenuation, both in dB
    ris_element_gain_db: float = 0.0
    los_attenuation_db: float = 0.0
    methods: tuple[str, ...] = DEFAULT_METHODS
    realizations: int = 100
    # per-subcarrier SNR of the average RIS path before despreading; when set,
    # it replaces the scenario's absolute N0 (path gains here are ~1e-8)
    ris_snr_db: float | None = -10.0
    bootstrap: int = 200

    def __post_init__(self):
        object.__setattr__(self, "methods", tuple(self.methods))
        if self.n_subcarriers < 2 or self.subcarrier_spacing <= 0:
            raise ValueError("need at least 2 subcarriers and a positive spacing")
        if self.n_receivers < 3:
            raise ValueError("RIS localization needs at least 3 receivers")
        if self.realizations < 1 or self.oversampling < 1 or self.bootstrap < 1:
            raise ValueError("realizations and oversampling must be positive")


@dataclass(frozen=True)
class Scenario:
    K: int = 8
    R: int = 2
    N_tx: int = 1
    N_rx: int = 1
    N_ris: int = 16
    P: int | None = None
    Q: int = 1
    Es: float = 1.0
    N0: float = 1e-3
    seed: int = 0
    channel_model: str = "iid"
    trials: int = 100
    experiment: ExperimentConfig = field(default_factory=ExperimentConfig)

    def __post_init__(self):
        if self.K < 1 or self.R < 2:
            raise ValueError("need K >= 1 and R >= 2")
        if min(self.N_tx, self.N_rx, self.N_ris, self.Q, self.trials) < 1:
            raise ValueError("dimensions, Q and trials must be positive")
        if not self.Es > 0 or self.N0 < 0:
            raise ValueError("need Es > 0 and N0 >= 0")
        if self.channel_model not in ("iid", "geometric"):
            raise ValueError(f"unknown channel model {self.channel_model!r}")

    @classmethod
    def from_dict(cls, doc: dict) -> Scenario:
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known - {"schema_version"}
        if unknown:
            raise ValueError(f"unknown scenario keys: {sorted(unknown)}")
        doc = dict(doc)
        doc.pop("schema_version", None)
        exp = doc.pop("experiment", None) or {}
        exp_known = {f.name for f in fields(ExperimentConfig)}
        bad = set(exp) - exp_known
        if bad:
            raise ValueError(f"unknown experiment keys: {sorted(bad)}")
        return cls(**doc, experiment=ExperimentConfig(**exp))

    @classmethod
    def load(cls, path: str | Path) -> Scenario:
        return cls.from_dict(json.loads(Path(path).read_text()))

    def to_dict(self) -> dict:
        doc = asdict(self)
        doc["experiment"]["methods"] = list(self.experiment.methods)
        doc["schema_version"] = SCHEMA_VERSION
        return doc
