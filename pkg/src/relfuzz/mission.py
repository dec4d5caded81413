"""Mission profiles: (ambient temperature, power, probability) operating states."""

import csv
import io
from dataclasses import dataclass
import math
from pathlib import Path

import numpy as np

from .fuzzy import TFN, scale

__all__ = [
    "MissionState",
    "MissionProfile",
    "ProfileError",
    "load_profile",
    "write_profile",
    "profile_csv",
    "load_telemetry",
    "cluster_telemetry",
    "default_edges",
    "aggregate_rate",
    "T_AMBIENT_BOUNDS",
]

T_AMBIENT_BOUNDS = (-40.0, 85.0)
NORMALIZE_TOLERANCE = 0.01
SUM_TOLERANCE = 1e-9

PROFILE_COLUMNS = ("t_ambient_c", "power_w", "probability")
TELEMETRY_COLUMNS = ("timestamp", "t_ambient_c", "power_w")


class ProfileError(ValueError):
    pass


@dataclass(frozen=True)
class MissionState:
    t_ambient: float
    power: float
    probability: float

    def validate(self, t_bounds=T_AMBIENT_BOUNDS):
        if not all(math.isfinite(v) for v in (self.t_ambient, self.power, self.probability)):
            raise ProfileError(f"non-finite value in state {self}")
        if self.probability < 0 or self.probability > 1:
            raise ProfileError(f"probability must lie in [0, 1], got {self.probability}")
        if self.power < 0:
            raise ProfileError(f"power must be nonnegative, got {self.power}")
        lo, hi = t_bounds
        if not lo <= self.t_ambient <= hi:
            raise ProfileError(f"ambient temperature {self.t_ambient} outside [{lo}, {hi}] degC")


@dataclass(frozen=True)
class MissionProfile:
    states: tuple

    def __post_init__(self):
        states = tuple(self.states)
        object.__setattr__(self, "states", states)
        if not states:
            raise ProfileError("mission profile needs at least one state")
        keys = [(s.t_ambient, s.power) for s in states]
        if len(set(keys)) != len(keys):
            raise ProfileError("duplicate (t_ambient, power) pairs in mission profile")
        total = math.fsum(s.probability for s in states)
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise ProfileError(f"probabilities sum to {total:.12g}, expected 1")

    @property
    def n(self) -> int:
        return len(self.states)

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([s.probability for s in self.states])

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    @classmethod
    def from_states(cls, states, t_bounds=T_AMBIENT_BOUNDS, normalize=True):
        """Validate raw states, renormalizing probabilities within 1 % of unity."""
        states = list(states)
        if not states:
            raise ProfileError("mission profile needs at least one state")
        for s in states:
            s.validate(t_bounds)
        total = math.fsum(s.probability for s in states)
        if abs(total - 1.0) > NORMALIZE_TOLERANCE:
            raise ProfileError(f"probabilities sum to {total:.6g}; must be within 1% of 1")
        if normalize and total != 1.0:
            states = [MissionState(s.t_ambient, s.power, s.probability / total) for s in states]
        return cls(tuple(states))


def _read_rows(path, required):
    path = Path(path)
    if not path.is_file():
        raise ProfileError(f"file not found: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ProfileError(f"{path}: empty file")
        fields = [f.strip() for f in reader.fieldnames]
        missing = [c for c in required if c not in fields]
        if missing:
            raise ProfileError(f"{path}: missing columns {', '.join(missing)}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            row = {k.strip(): v for k, v in row.items() if k is not None}
            try:
                rows.append(tuple(float(row[c]) for c in required))
            except (TypeError, ValueError):
                raise ProfileError(f"{path}:{lineno}: non-numeric value in {row}") from None
    if not rows:
        raise ProfileError(f"{path}: no data rows")
    return rows


def load_profile(path, t_bounds=T_AMBIENT_BOUNDS) -> MissionProfile:
    """Read a ``t_ambient_c,power_w,probability`` CSV into a validated profile."""
    rows = _read_rows(path, PROFILE_COLUMNS)
    for t, p, mu in rows:
        if mu < 0:
            raise ProfileError(f"{path}: negative probability {mu} at ({t}, {p})")
    return MissionProfile.from_states((MissionState(*r) for r in rows), t_bounds=t_bounds)


def profile_csv(profile: MissionProfile) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(PROFILE_COLUMNS)
    for s in profile:
        w.writerow([repr(float(s.t_ambient)), repr(float(s.power)), repr(float(s.probability))])
    return buf.getvalue()


def write_profile(path, profile: MissionProfile):
    Path(path).write_text(profile_csv(profile), encoding="utf-8")


def load_telemetry(path) -> np.ndarray:
    """Read a ``timestamp,t_ambient_c,power_w`` CSV; returns an (N, 2) array."""
    path = Path(path)
    if not path.is_file():
        raise ProfileError(f"file not found: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ProfileError(f"{path}: empty file")
        fields = [f.strip() for f in reader.fieldnames]
        missing = [c for c in TELEMETRY_COLUMNS if c not in fields]
        if missing:
            raise ProfileError(f"{path}: missing columns {', '.join(missing)}")
        out = []
        for lineno, row in enumerate(reader, start=2):
            row = {k.strip(): v for k, v in row.items() if k is not None}
            try:
                out.append((float(row["t_ambient_c"]), float(row["power_w"])))
            except (TypeError, ValueError):
                raise ProfileError(f"{path}:{lineno}: non-numeric value in {row}") from None
    if not out:
        raise ProfileError(f"{path}: no telemetry samples")
    return np.array(out, dtype=float)


def default_edges(values, width):
    """Bin edges of the given width covering ``values``, aligned to multiples of ``width``."""
    values = np.asarray(values, dtype=float)
    lo = math.floor(values.min() / width) * width
    hi = math.ceil(values.max() / width) * width
    if hi <= lo:
        hi = lo + width
    n = int(round((hi - lo) / width))
    return lo + width * np.arange(n + 1)


def _bin_index(values, edges):
    # right-closed last bin, like numpy.histogram
    idx = np.searchsorted(edges, values, side="right") - 1
    idx[values == edges[-1]] = len(edges) - 2
    return idx


def cluster_telemetry(samples, t_edges=None, p_edges=None, clamp=False,
                      t_width=5.0, p_width=100.0, t_bounds=T_AMBIENT_BOUNDS):
    """Cluster (t_ambient, power) samples into a 2-D histogram profile.

    Every non-empty bin becomes one state at the bin midpoint with
    probability ``count / total``. Samples outside the outer edges are
    rejected, or moved into the edge bins when ``clamp`` is set.

    Parameters
    ----------
    samples : array_like, shape (N, 2)
        Ambient temperature (degC) and power (W) per sample.
    t_edges, p_edges : array_like, optional
        Strictly increasing bin edges. Default: ``t_width`` degC and
        ``p_width`` W bins spanning the data.

    Returns
    -------
    MissionProfile
    """
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise ProfileError("telemetry contains no samples")
    if samples.ndim != 2 or samples.shape[1] != 2:
        raise ProfileError("telemetry samples must have shape (N, 2)")
    if not np.all(np.isfinite(samples)):
        raise ProfileError("telemetry contains non-finite values")
    t, p = samples[:, 0], samples[:, 1]
    t_edges = default_edges(t, t_width) if t_edges is None else np.asarray(t_edges, dtype=float)
    p_edges = default_edges(p, p_width) if p_edges is None else np.asarray(p_edges, dtype=float)
    for name, e in (("t_edges", t_edges), ("p_edges", p_edges)):
        if e.ndim != 1 or e.size < 2 or np.any(np.diff(e) <= 0):
            raise ProfileError(f"{name} must be strictly increasing with at least two entries")

    outside = (t < t_edges[0]) | (t > t_edges[-1]) | (p < p_edges[0]) | (p > p_edges[-1])
    if np.any(outside):
        if not clamp:
            first = samples[np.argmax(outside)]
            raise ProfileError(
                f"{int(outside.sum())} sample(s) outside the bin edges, first at "
                f"({first[0]}, {first[1]}); pass clamp=True to fold them into the edge bins"
            )
        t = np.clip(t, t_edges[0], t_edges[-1])
        p = np.clip(p, p_edges[0], p_edges[-1])

    ti = _bin_index(t, t_edges)
    pi = _bin_index(p, p_edges)
    counts = np.zeros((t_edges.size - 1, p_edges.size - 1), dtype=np.int64)
    np.add.at(counts, (ti, pi), 1)
    total = int(counts.sum())
    t_mid = (t_edges[:-1] + t_edges[1:]) / 2.0
    p_mid = (p_edges[:-1] + p_edges[1:]) / 2.0
    states = [
        MissionState(float(t_mid[i]), float(p_mid[j]), counts[i, j] / total)
        for i, j in zip(*np.nonzero(counts))
    ]
    for s in states:
        s.validate(t_bounds)
    return MissionProfile(tuple(states))


def aggregate_rate(profile: MissionProfile, per_state_rates) -> TFN:
    """Profile-weighted sum ``sum_i mu_i * rate_i`` of per-state fuzzy rates.

    Vertex sums use :func:`math.fsum`, so the result does not depend on the
    order of the states.
    """
    rates = list(per_state_rates)
    if len(rates) != profile.n:
        raise ValueError(f"expected {profile.n} per-state rates, got {len(rates)}")
    units = {r.unit for r in rates}
    if len(units) > 1:
        raise ValueError(f"per-state rates carry mixed units: {sorted(units)}")
    terms = [scale(r, s.probability) for r, s in zip(rates, profile)]
    return TFN(
        math.fsum(x.a for x in terms),
        math.fsum(x.b for x in terms),
        math.fsum(x.c for x in terms),
        rates[0].unit,
    )
