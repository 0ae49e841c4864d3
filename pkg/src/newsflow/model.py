"""Multiagent model of topic-based news diffusion.

Every message is an agent carrying an integer energy.  Each tick the energy
drops by one and the agent may receive a like (+1), a repost (+2, and a copy
of the message is born) or a link (+1).  Event probabilities scale with
``phi(energy)``.  Independently, one new message may be published per tick
with probability ``p_spawn``.  Agents whose energy reaches zero die.

The population is kept as parallel numpy arrays sorted by agent id so a tick
is a handful of vectorised operations.  Random draws per tick are, in order:
an ``(n, 3)`` block of uniforms (columns like, repost, link; row ``i`` is the
``i``-th alive agent by ascending id), then one uniform for the spontaneous
birth.  An event fires when its uniform is strictly below its probability.
"""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Iterator, Mapping, Sequence

import numpy as np

from .errors import ConfigError
from .timeseries import Series

__all__ = [
    "PhiSpec",
    "ModelParams",
    "ParamSchedule",
    "Agent",
    "PopulationState",
    "DeltaDistribution",
    "phi_eval",
    "delta_distribution",
    "initial_state",
    "step",
    "simulate",
    "run",
    "run_ensemble",
    "derive_seed",
    "schedule_from_dict",
    "schedule_to_dict",
    "load_schedule",
]

DEFAULT_E0 = 10
DEFAULT_STEPS = 1000

_MASK64 = (1 << 64) - 1
_GOLDEN_GAMMA = 0x9E3779B97F4A7C15


@dataclass(frozen=True)
class PhiSpec:
    """Energy response ``phi``: ``"constant"`` (always 1) or ``"saturating"`` (E / (E + scale))."""

    kind: str = "constant"
    scale: float = 1.0

    def __post_init__(self):
        if self.kind not in ("constant", "saturating"):
            raise ConfigError(f"phi.kind must be 'constant' or 'saturating', got {self.kind!r}")
        if self.kind == "saturating" and not self.scale > 0:
            raise ConfigError(f"phi.scale must be positive, got {self.scale!r}")


@dataclass(frozen=True)
class ModelParams:
    p_spawn: float = 0.9
    p_like0: float = 0.05
    p_repost0: float = 0.001
    p_link0: float = 0.0
    e0: int = DEFAULT_E0
    phi: PhiSpec = field(default_factory=PhiSpec)

    def __post_init__(self):
        for name in ("p_spawn", "p_like0", "p_repost0", "p_link0"):
            p = getattr(self, name)
            if isinstance(p, bool) or not isinstance(p, (int, float)) or not 0.0 <= p <= 1.0:
                raise ConfigError(f"{name} must be a probability in [0, 1], got {p!r}")
        if isinstance(self.e0, bool) or not isinstance(self.e0, (int, np.integer)) or self.e0 < 1:
            raise ConfigError(f"e0 must be an integer >= 1, got {self.e0!r}")


@dataclass(frozen=True)
class ParamSchedule:
    """Piecewise-constant parameters: segment ``(start_tick, params)`` applies until the next start."""

    segments: tuple[tuple[int, ModelParams], ...]

    def __post_init__(self):
        segs = tuple((int(t), p) for t, p in self.segments)
        if not segs:
            raise ConfigError("schedule must have at least one segment")
        if segs[0][0] != 0:
            raise ConfigError(f"first segment must start at tick 0, got {segs[0][0]}")
        for (a, _), (b, _) in zip(segs, segs[1:]):
            if b <= a:
                raise ConfigError(f"segment start ticks must be strictly increasing ({a} then {b})")
        object.__setattr__(self, "segments", segs)

    @classmethod
    def constant(cls, params: ModelParams) -> "ParamSchedule":
        return cls(((0, params),))

    def params_at(self, tick: int) -> ModelParams:
        current = self.segments[0][1]
        for start, params in self.segments:
            if start > tick:
                break
            current = params
        return current


@dataclass(frozen=True)
class Agent:
    id: int
    energy: int
    birth_tick: int
    parent_id: int | None = None


@dataclass(frozen=True, eq=False)
class PopulationState:
    """Alive agents at ``tick`` as id-sorted parallel arrays, plus cumulative counters.

    ``parent`` holds -1 for self-generated agents.
    """

    tick: int
    ids: np.ndarray
    energy: np.ndarray
    birth: np.ndarray
    parent: np.ndarray
    next_id: int
    births_spawn: int = 0
    births_repost: int = 0
    deaths: int = 0
    likes: int = 0
    reposts: int = 0
    links: int = 0

    @property
    def size(self) -> int:
        return int(self.ids.size)

    @property
    def alive(self) -> list[Agent]:
        return list(self.agents())

    def agents(self) -> Iterator[Agent]:
        for i, e, b, p in zip(self.ids.tolist(), self.energy.tolist(),
                              self.birth.tolist(), self.parent.tolist()):
            yield Agent(i, e, b, None if p < 0 else p)

    @classmethod
    def from_agents(cls, agents: Sequence[Agent], tick: int = 0, next_id: int | None = None,
                    **counters: int) -> "PopulationState":
        agents = sorted(agents, key=lambda a: a.id)
        if any(a.energy < 1 for a in agents):
            raise ValueError("alive agents must have energy >= 1")
        ids = np.array([a.id for a in agents], dtype=np.int64)
        if next_id is None:
            next_id = int(ids.max()) + 1 if ids.size else 0
        return cls(
            tick=tick,
            ids=ids,
            energy=np.array([a.energy for a in agents], dtype=np.int64),
            birth=np.array([a.birth_tick for a in agents], dtype=np.int64),
            parent=np.array([-1 if a.parent_id is None else a.parent_id for a in agents], dtype=np.int64),
            next_id=next_id,
            **counters,
        )


@dataclass(frozen=True)
class DeltaDistribution:
    """Law of one agent's per-tick energy increment."""

    support: tuple[int, ...]
    probs: tuple[float, ...]

    def as_dict(self) -> dict[int, float]:
        return dict(zip(self.support, self.probs))

    def __getitem__(self, delta: int) -> float:
        return self.as_dict().get(delta, 0.0)


def phi_eval(phi: PhiSpec, energy):
    """``phi(energy)``; accepts a scalar or an integer array."""
    if phi.kind == "constant":
        if np.ndim(energy) == 0:
            return 1.0
        return np.ones(np.shape(energy), dtype=np.float64)
    e = np.asarray(energy, dtype=np.float64)
    out = e / (e + phi.scale)
    return float(out) if out.ndim == 0 else out


def delta_distribution(params: ModelParams, energy: int) -> DeltaDistribution:
    if energy < 1:
        raise ValueError(f"energy must be >= 1, got {energy}")
    f = phi_eval(params.phi, energy)
    pl = params.p_like0 * f
    pr = params.p_repost0 * f
    probs = [(1 - pl) * (1 - pr), pl * (1 - pr), pr * (1 - pl), pl * pr]
    support = (-1, 0, 1, 2)
    if params.p_link0 > 0:
        pk = params.p_link0 * f
        # one more Bernoulli(+1) convolved in
        shifted = [0.0] + probs
        probs = [a * (1 - pk) + b * pk for a, b in zip(probs + [0.0], shifted)]
        support = (-1, 0, 1, 2, 3)
    return DeltaDistribution(support, tuple(float(p) for p in probs))


def initial_state(params: ModelParams) -> PopulationState:
    """One fresh self-generated agent at tick 0."""
    return PopulationState.from_agents([Agent(0, params.e0, 0)], tick=0)


def step(state: PopulationState, params: ModelParams, rng: np.random.Generator) -> PopulationState:
    n = state.size
    u = rng.random((n, 3))
    f = phi_eval(params.phi, state.energy)
    like = u[:, 0] < params.p_like0 * f
    repost = u[:, 1] < params.p_repost0 * f
    link = u[:, 2] < params.p_link0 * f
    energy = state.energy - 1 + like + 2 * repost + link

    spawned = rng.random() < params.p_spawn

    n_rep = int(np.count_nonzero(repost))
    n_new = n_rep + int(spawned)
    new_ids = np.arange(state.next_id, state.next_id + n_new, dtype=np.int64)
    new_parent = np.concatenate([state.ids[repost], np.full(int(spawned), -1, dtype=np.int64)])

    keep = energy > 0
    return PopulationState(
        tick=state.tick + 1,
        ids=np.concatenate([state.ids[keep], new_ids]),
        energy=np.concatenate([energy[keep], np.full(n_new, params.e0, dtype=np.int64)]),
        birth=np.concatenate([state.birth[keep], np.full(n_new, state.tick + 1, dtype=np.int64)]),
        parent=np.concatenate([state.parent[keep], new_parent]),
        next_id=state.next_id + n_new,
        births_spawn=state.births_spawn + int(spawned),
        births_repost=state.births_repost + n_rep,
        deaths=state.deaths + (n - int(np.count_nonzero(keep))),
        likes=state.likes + int(np.count_nonzero(like)),
        reposts=state.reposts + n_rep,
        links=state.links + int(np.count_nonzero(link)),
    )


def simulate(schedule: ParamSchedule, steps: int, seed: int) -> tuple[Series, PopulationState]:
    """Like :func:`run` but also returns the final population state."""
    if not isinstance(schedule, ParamSchedule):
        raise ConfigError("schedule must be a ParamSchedule")
    if steps < 1:
        raise ConfigError(f"steps must be >= 1, got {steps}")
    rng = np.random.default_rng(seed)
    state = initial_state(schedule.segments[0][1])
    counts = np.empty(steps, dtype=np.float64)
    bounds = [t for t, _ in schedule.segments[1:]] + [None]
    params = schedule.segments[0][1]
    seg = 0
    for i in range(steps):
        while bounds[seg] is not None and state.tick >= bounds[seg]:
            seg += 1
            params = schedule.segments[seg][1]
        state = step(state, params, rng)
        counts[i] = state.size
    return Series(counts, origin_tick=1), state


def run(schedule: ParamSchedule, steps: int = DEFAULT_STEPS, seed: int = 0) -> Series:
    """Alive-agent counts at ticks ``1..steps``, starting from one agent at tick 0."""
    return simulate(schedule, steps, seed)[0]


def derive_seed(base_seed: int, index: int) -> int:
    """Seed of ensemble member ``index``: SplitMix64 output for state ``base_seed + index * gamma``.

    With ``z = (base_seed + (index + 1) * 0x9E3779B97F4A7C15) mod 2**64``::

        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2**64
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB mod 2**64
        seed = z ^ (z >> 31)
    """
    z = (base_seed + (index + 1) * _GOLDEN_GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _run_member(args):
    schedule, steps, seed = args
    return run(schedule, steps, seed)


def run_ensemble(schedule: ParamSchedule, steps: int, base_seed: int, n_runs: int,
                 workers: int | None = None) -> list[Series]:
    """Independent runs seeded by :func:`derive_seed`; ``workers > 1`` uses a process pool."""
    if n_runs < 1:
        raise ConfigError(f"n_runs must be >= 1, got {n_runs}")
    jobs = [(schedule, steps, derive_seed(base_seed, i)) for i in range(n_runs)]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_member, jobs))
    return [_run_member(j) for j in jobs]


# --- JSON configuration -------------------------------------------------------

_PARAM_KEYS = {"p_spawn": "p_spawn", "p_like": "p_like0", "p_repost": "p_repost0", "p_link": "p_link0"}


def _params_from_dict(d: Mapping[str, Any], where: str) -> ModelParams:
    if not isinstance(d, Mapping):
        raise ConfigError(f"{where} must be an object")
    unknown = set(d) - set(_PARAM_KEYS) - {"e0", "phi"}
    if unknown:
        raise ConfigError(f"{where}: unknown field(s) {', '.join(sorted(unknown))}")
    kw: dict[str, Any] = {}
    for key, attr in _PARAM_KEYS.items():
        if key in d:
            v = d[key]
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not 0.0 <= v <= 1.0:
                raise ConfigError(f"{where}.{key} must be a probability in [0, 1], got {v!r}")
            kw[attr] = float(v)
    if "e0" in d:
        v = d["e0"]
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise ConfigError(f"{where}.e0 must be an integer >= 1, got {v!r}")
        kw["e0"] = v
    if "phi" in d:
        phi = d["phi"]
        if not isinstance(phi, Mapping) or "kind" not in phi:
            raise ConfigError(f"{where}.phi must be an object with a 'kind'")
        try:
            kw["phi"] = PhiSpec(kind=phi["kind"], scale=phi.get("scale", 1.0))
        except ConfigError as exc:
            raise ConfigError(f"{where}.{exc}") from None
    return ModelParams(**kw)


def schedule_from_dict(doc: Mapping[str, Any]) -> ParamSchedule:
    """Build a schedule from the ``{"segments": [{"start_tick", "params"}, ...]}`` document."""
    if not isinstance(doc, Mapping) or "segments" not in doc:
        raise ConfigError("config must be an object with a 'segments' list")
    segs = doc["segments"]
    if not isinstance(segs, list) or not segs:
        raise ConfigError("segments must be a non-empty list")
    out = []
    for i, seg in enumerate(segs):
        where = f"segments[{i}]"
        if not isinstance(seg, Mapping):
            raise ConfigError(f"{where} must be an object")
        start = seg.get("start_tick", 0 if i == 0 else None)
        if isinstance(start, bool) or not isinstance(start, int) or start < 0:
            raise ConfigError(f"{where}.start_tick must be an integer >= 0, got {start!r}")
        out.append((start, _params_from_dict(seg.get("params", {}), f"{where}.params")))
    return ParamSchedule(tuple(out))


def schedule_to_dict(schedule: ParamSchedule) -> dict[str, Any]:
    segs = []
    for start, p in schedule.segments:
        phi = {"kind": p.phi.kind}
        if p.phi.kind == "saturating":
            phi["scale"] = p.phi.scale
        segs.append({"start_tick": start, "params": {
            "p_spawn": p.p_spawn, "p_like": p.p_like0, "p_repost": p.p_repost0,
            "p_link": p.p_link0, "e0": p.e0, "phi": phi}})
    return {"segments": segs}


def load_schedule(text: str | bytes) -> ParamSchedule:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    return schedule_from_dict(doc)

