"""Exact event-driven stochastic simulation of the agent model.

Agents carry a behaviour bit (protection on/off) and an SIS health state.
Contacts follow an activity-driven process (each agent activates at its own
Poisson rate and meets a uniformly random partner); behaviour switches follow
imitation dynamics at rates built from neighbours' payoffs on the static
influence graph.

All clock rates are constant between events, so the direct stochastic
simulation method is statistically exact: waiting times are exponential in
the total rate and the event kind is chosen proportionally.

Random-draw contract (per event, in order; this is what seeded replay
reproduces):

1. ``rng.exponential(1/R)``     -- waiting time, R the total rate
2. ``rng.random()``             -- channel choice, cumulative over
   [recovery, infection|contact, adopt, drop]
3. member selection inside the channel:
   complete graph  -- ``rng.random()`` uniform index into the group list;
                      with heterogeneous activities the infection/contact
                      channels use rejection sampling (one extra
                      ``rng.random()`` per attempt)
   general graph   -- ``rng.random()`` positioned in the cumulative
                      per-node rate vector of the channel
4. contact events only: ``rng.random()`` for the partner (uniform over the
   other n-1 agents) and, only when a transmissible pair realises,
   ``rng.random()`` against the per-contact infection probability.

Initial conditions sampled from fractions consume ``rng.random(n)`` twice
(behaviours first, then healths) before any event draw.
"""
from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import ConfigError, ModelParams, NumericalError
from .meanfield import Trajectory
from .network import InfluenceGraph

NO_PROTECTION, PROTECTION = 0, 1
SUSCEPTIBLE, INFECTED = 0, 1

RNG_NAME = "numpy-pcg64"

EVENT_CONTACT = "contact"
EVENT_INFECTION = "infection"
EVENT_RECOVERY = "recovery"
EVENT_ADOPT = "adopt"
EVENT_DROP = "drop"


@dataclass
class Population:
    """Agent vectors: behaviour bits, SIS health states, activity rates."""

    behaviours: np.ndarray
    healths: np.ndarray
    activities: np.ndarray

    def __post_init__(self):
        self.behaviours = np.asarray(self.behaviours, dtype=np.int8)
        self.healths = np.asarray(self.healths, dtype=np.int8)
        self.activities = np.asarray(self.activities, dtype=float)
        n = self.behaviours.size
        if not (self.healths.size == n and self.activities.size == n):
            raise ConfigError("population vectors must have equal lengths")
        if not np.isin(self.behaviours, (NO_PROTECTION, PROTECTION)).all():
            raise ConfigError("behaviours must be 0 or 1")
        if not np.isin(self.healths, (SUSCEPTIBLE, INFECTED)).all():
            raise ConfigError("healths must be S(0) or I(1)")
        if np.any(self.activities <= 0.0) or not np.isfinite(self.activities).all():
            raise ConfigError("activities must be positive and finite")

    @property
    def n(self) -> int:
        return self.behaviours.size

    @property
    def x_bar(self) -> float:
        return float(self.behaviours.sum()) / self.n

    @property
    def y_bar(self) -> float:
        return float((self.healths == INFECTED).sum()) / self.n


def node_payoffs(g: InfluenceGraph, pop: Population, p: ModelParams):
    """Per-node payoffs (pi1, pi0): neighbourhood adoption share plus risk
    perception, and the complementary share plus the protection cost."""
    x = pop.behaviours.astype(float)
    nbr = g.neighbor_mean(x)
    pi1 = nbr + p.zeta * pop.y_bar
    pi0 = 1.0 - nbr + p.c
    return pi1, pi0


def switch_rates(g: InfluenceGraph, pop: Population, p: ModelParams):
    """Imitation rates (q01, q10); q01 drives adoption of non-adopters only,
    q10 drives dropping by adopters only."""
    x = pop.behaviours.astype(float)
    pi1, pi0 = node_payoffs(g, pop, p)
    q01 = g.neighbor_mean(x * pi1)
    q10 = g.neighbor_mean((1.0 - x) * pi0)
    return q01, q10


def infection_rate(pop: Population, i: int, p: ModelParams, bidirectional: bool = True) -> float:
    """Poisson rate at which susceptible agent i becomes infected.

    lam * (1 - x_i) / (n - 1) * (n * a_i * y_bar + sum of infected activities);
    with one-directional transmission only contacts initiated by the infected
    count (the second term).
    """
    if pop.healths[i] != SUSCEPTIBLE:
        raise ValueError(f"agent {i} is not susceptible")
    if pop.behaviours[i] == PROTECTION:
        return 0.0
    n = pop.n
    infected_activity = float(pop.activities[pop.healths == INFECTED].sum())
    pressure = infected_activity
    if bidirectional:
        pressure += n * float(pop.activities[i]) * pop.y_bar
    return p.lam / (n - 1) * pressure


@dataclass
class EventLog:
    """Chronological event record. Times are non-decreasing."""

    events: list = field(default_factory=list)
    seed: int | None = None
    rng_name: str = RNG_NAME

    def append(self, t: float, kind: str, actor: int, counterpart: int | None = None):
        self.events.append((t, kind, actor, counterpart))

    def __len__(self):
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as f:
            f.write(f"# rng={self.rng_name} seed={self.seed}\n")
            f.write("t,kind,actor,counterpart\n")
            for t, kind, actor, cp in self.events:
                f.write(f"{t:.17g},{kind},{actor},{'' if cp is None else cp}\n")


@dataclass
class AbmConfig:
    """Full specification of one stochastic run."""

    params: ModelParams
    graph: InfluenceGraph
    activities: np.ndarray
    horizon: float
    sample_dt: float
    seed: int
    x0: float | None = None
    y0: float | None = None
    behaviours0: np.ndarray | None = None
    healths0: np.ndarray | None = None
    infection_mode: str = "aggregated"  # "aggregated" | "contact"
    directionality: str = "bidirectional"  # "bidirectional" | "activator-infects"
    record_events: bool | None = None  # default: only for n <= 1000
    debug_check: bool = False

    def __post_init__(self):
        self.activities = np.asarray(self.activities, dtype=float)
        if self.activities.shape != (self.graph.n,):
            raise ConfigError("activities length must equal graph order")
        if np.any(self.activities <= 0.0):
            raise ConfigError("activities must be positive")
        if self.horizon <= 0:
            raise ConfigError("horizon must be > 0")
        if self.sample_dt <= 0:
            raise ConfigError("sample_dt must be > 0")
        if self.infection_mode not in ("aggregated", "contact"):
            raise ConfigError(f"unknown infection_mode {self.infection_mode!r}")
        if self.directionality not in ("bidirectional", "activator-infects"):
            raise ConfigError(f"unknown directionality {self.directionality!r}")
        explicit = self.behaviours0 is not None or self.healths0 is not None
        sampled = self.x0 is not None or self.y0 is not None
        if explicit and sampled:
            raise ConfigError("give either explicit initial vectors or fractions, not both")
        if explicit:
            if self.behaviours0 is None or self.healths0 is None:
                raise ConfigError("explicit initial condition needs both behaviours0 and healths0")
            self.behaviours0 = np.asarray(self.behaviours0, dtype=np.int8)
            self.healths0 = np.asarray(self.healths0, dtype=np.int8)
            if self.behaviours0.shape != (self.graph.n,) or self.healths0.shape != (self.graph.n,):
                raise ConfigError("initial vectors must have length n")
        elif sampled:
            if self.x0 is None or self.y0 is None:
                raise ConfigError("sampled initial condition needs both x0 and y0")
            if not (0.0 <= self.x0 <= 1.0 and 0.0 <= self.y0 <= 1.0):
                raise ConfigError("initial fractions must lie in [0,1]")
        else:
            raise ConfigError("no initial condition given")
        if self.record_events is None:
            self.record_events = self.graph.n <= 1000

    @property
    def bidirectional(self) -> bool:
        return self.directionality == "bidirectional"

    def to_dict(self) -> dict:
        d = {
            "params": self.params.to_dict(),
            "graph": self.graph.to_dict(),
            "activities": (
                "uniform"
                if np.ptp(self.activities) == 0.0 and self.activities[0] == self.params.alpha
                else self.activities.tolist()
            ),
            "horizon": self.horizon,
            "sample_dt": self.sample_dt,
            "seed": self.seed,
            "infection_mode": self.infection_mode,
            "directionality": self.directionality,
            "record_events": self.record_events,
            "rng": RNG_NAME,
        }
        if self.behaviours0 is not None:
            d["behaviours0"] = self.behaviours0.tolist()
            d["healths0"] = self.healths0.tolist()
        else:
            d["x0"] = self.x0
            d["y0"] = self.y0
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "AbmConfig":
        params = ModelParams.from_dict(d["params"])
        graph = InfluenceGraph.from_dict(d["graph"])
        acts = d.get("activities", "uniform")
        if acts == "uniform":
            activities = np.full(graph.n, params.alpha)
        else:
            activities = np.asarray(acts, dtype=float)
        kwargs = {}
        if "behaviours0" in d:
            kwargs["behaviours0"] = np.asarray(d["behaviours0"])
            kwargs["healths0"] = np.asarray(d["healths0"])
        else:
            kwargs["x0"] = d["x0"]
            kwargs["y0"] = d["y0"]
        return cls(
            params=params,
            graph=graph,
            activities=activities,
            horizon=float(d["horizon"]),
            sample_dt=float(d["sample_dt"]),
            seed=int(d["seed"]),
            infection_mode=d.get("infection_mode", "aggregated"),
            directionality=d.get("directionality", "bidirectional"),
            record_events=d.get("record_events"),
            debug_check=bool(d.get("debug_check", False)),
            **kwargs,
        )


class _IndexedSet:
    """Set of agent ids with O(1) add/remove/uniform-sample (swap-with-last)."""

    __slots__ = ("items", "pos")

    def __init__(self, n: int, members):
        self.items = list(members)
        self.pos = [-1] * n
        for k, i in enumerate(self.items):
            self.pos[i] = k

    def __len__(self):
        return len(self.items)

    def __contains__(self, i):
        return self.pos[i] >= 0

    def add(self, i):
        self.pos[i] = len(self.items)
        self.items.append(i)

    def remove(self, i):
        k = self.pos[i]
        last = self.items.pop()
        if last != i:
            self.items[k] = last
            self.pos[last] = k
        self.pos[i] = -1

    def sample(self, u: float):
        return self.items[int(u * len(self.items))]


def _initial_population(cfg: AbmConfig, rng: np.random.Generator) -> Population:
    n = cfg.graph.n
    if cfg.behaviours0 is not None:
        behaviours = cfg.behaviours0.copy()
        healths = cfg.healths0.copy()
    else:
        behaviours = (rng.random(n) < cfg.x0).astype(np.int8)
        healths = (rng.random(n) < cfg.y0).astype(np.int8)
    return Population(behaviours=behaviours, healths=healths, activities=cfg.activities.copy())


def simulate(cfg: AbmConfig) -> tuple[Trajectory, EventLog]:
    """One statistically exact realization; identical seeds give identical logs."""
    rng = np.random.default_rng(cfg.seed)
    pop = _initial_population(cfg, rng)
    if not cfg.params.payoff_assumption_holds:
        import warnings

        warnings.warn(
            "parameters violate the payoff ordering (c > 1, zeta > c + 1); "
            "simulation is well-defined but the analytical regime results do not apply",
            stacklevel=2,
        )
    if cfg.graph.is_complete:
        times, xs, ys, log = _run_complete(cfg, pop, rng)
    else:
        times, xs, ys, log = _run_general(cfg, pop, rng)
    log.seed = cfg.seed
    traj = Trajectory(
        times=times,
        xs=xs,
        ys=ys,
        params=cfg.params,
        meta={"seed": cfg.seed, "rng": RNG_NAME, "mode": cfg.infection_mode,
              "directionality": cfg.directionality, "n": cfg.graph.n},
    )
    return traj, log


def _grid(cfg: AbmConfig) -> np.ndarray:
    m = int(math.floor(cfg.horizon / cfg.sample_dt + 1e-9))
    grid = np.arange(m + 1) * cfg.sample_dt
    if grid[-1] < cfg.horizon - 1e-12 * max(1.0, cfg.horizon):
        grid = np.append(grid, cfg.horizon)
    return grid


def _check_counts(pop: Population, n1: int, n_inf: int):
    if int(pop.behaviours.sum()) != n1 or int((pop.healths == INFECTED).sum()) != n_inf:
        raise NumericalError("incremental counters diverged from agent vectors")


def _run_complete(cfg: AbmConfig, pop: Population, rng: np.random.Generator):
    """Fast path for the complete influence graph (payoffs uniform across agents)."""
    p = cfg.params
    n = pop.n
    x = pop.behaviours
    y = pop.healths
    a = pop.activities
    uniform_act = float(np.ptp(a)) == 0.0
    a_max = float(a.max())
    a_total = float(a.sum())
    bidi = cfg.bidirectional
    contact_mode = cfg.infection_mode == "contact"
    record = cfg.record_events
    log = EventLog()

    adopters = _IndexedSet(n, np.nonzero(x == PROTECTION)[0])
    nonadopters = _IndexedSet(n, np.nonzero(x == NO_PROTECTION)[0])
    infected = _IndexedSet(n, np.nonzero(y == INFECTED)[0])
    eligible = _IndexedSet(
        n, np.nonzero((y == SUSCEPTIBLE) & (x == NO_PROTECTION))[0]
    )
    a_inf = float(a[y == INFECTED].sum())
    a_elig = float(a[(y == SUSCEPTIBLE) & (x == NO_PROTECTION)].sum())

    grid = _grid(cfg)
    out_x = np.empty(grid.size)
    out_y = np.empty(grid.size)
    si = 0
    t = 0.0
    lam, mu, c, zeta = p.lam, p.mu, p.c, p.zeta

    def record_through(t_limit):
        # record every grid point strictly before t_limit with the current state
        nonlocal si
        n1 = len(adopters)
        n_inf = len(infected)
        while si < grid.size and grid[si] < t_limit:
            _check_counts(pop, n1, n_inf)
            out_x[si] = n1 / n
            out_y[si] = n_inf / n
            si += 1

    def infect(i, t, source=None):
        nonlocal a_inf, a_elig
        y[i] = INFECTED
        infected.add(i)
        a_inf += a[i]
        if i in eligible:
            eligible.remove(i)
            a_elig -= a[i]
        if record:
            log.append(t, EVENT_INFECTION, i, source)

    while True:
        n1 = len(adopters)
        n0 = n - n1
        n_inf = len(infected)
        n_elig = len(eligible)
        xbar = n1 / n
        ybar = n_inf / n
        pi1 = xbar + zeta * ybar
        pi0 = 1.0 - xbar + c
        r_adopt = n0 * xbar * pi1
        r_drop = n1 * (1.0 - xbar) * pi0
        r_rec = mu * n_inf
        if contact_mode:
            # contacts cannot change state without infected present; skipping
            # them then is exact thinning, but only when no log is kept
            r_mid = a_total if (n_inf > 0 or record) else 0.0
        else:
            if bidi:
                r_mid = lam / (n - 1) * (n_inf * a_elig + n_elig * a_inf)
            else:
                r_mid = lam / (n - 1) * n_elig * a_inf
        total = r_rec + r_mid + r_adopt + r_drop
        if total <= 0.0:
            break
        dt = rng.exponential(1.0 / total)
        t_new = t + dt
        record_through(min(t_new, cfg.horizon))
        if t_new >= cfg.horizon:
            t = cfg.horizon
            break
        t = t_new
        u = rng.random() * total
        if u < r_rec:
            i = infected.sample(rng.random())
            y[i] = SUSCEPTIBLE
            infected.remove(i)
            a_inf -= a[i]
            if x[i] == NO_PROTECTION:
                eligible.add(i)
                a_elig += a[i]
            if record:
                log.append(t, EVENT_RECOVERY, i)
        elif u < r_rec + r_mid:
            if contact_mode:
                if uniform_act:
                    i = int(rng.random() * n)
                else:
                    while True:
                        i = int(rng.random() * n)
                        if rng.random() * a_max <= a[i]:
                            break
                j = int(rng.random() * (n - 1))
                if j >= i:
                    j += 1
                if record:
                    log.append(t, EVENT_CONTACT, i, j)
                target = None
                if y[i] == INFECTED and y[j] == SUSCEPTIBLE and x[j] == NO_PROTECTION:
                    target, source = j, i
                elif (
                    bidi
                    and y[i] == SUSCEPTIBLE
                    and x[i] == NO_PROTECTION
                    and y[j] == INFECTED
                ):
                    target, source = i, j
                if target is not None and rng.random() < lam:
                    infect(target, t, source)
            else:
                if bidi and not uniform_act:
                    # per-agent weight a_i*nI + A_I; rejection against the max
                    w_max = a_max * n_inf + a_inf
                    while True:
                        i = eligible.sample(rng.random())
                        if rng.random() * w_max <= a[i] * n_inf + a_inf:
                            break
                else:
                    i = eligible.sample(rng.random())
                infect(i, t)
        elif u < r_rec + r_mid + r_adopt:
            i = nonadopters.sample(rng.random())
            x[i] = PROTECTION
            nonadopters.remove(i)
            adopters.add(i)
            if i in eligible:
                eligible.remove(i)
                a_elig -= a[i]
            if record:
                log.append(t, EVENT_ADOPT, i)
        else:
            i = adopters.sample(rng.random())
            x[i] = NO_PROTECTION
            adopters.remove(i)
            nonadopters.add(i)
            if y[i] == SUSCEPTIBLE:
                eligible.add(i)
                a_elig += a[i]
            if record:
                log.append(t, EVENT_DROP, i)
        if cfg.debug_check:
            _debug_check_complete(cfg, pop, n, a, adopters, infected, eligible, a_inf, a_elig)

    record_through(cfg.horizon + cfg.sample_dt)  # flush remaining grid points
    _check_counts(pop, len(adopters), len(infected))
    return grid, out_x, out_y, log


def _debug_check_complete(cfg, pop, n, a, adopters, infected, eligible, a_inf, a_elig):
    q01, q10 = switch_rates(cfg.graph, pop, cfg.params)
    xbar = pop.x_bar
    ybar = pop.y_bar
    pi1 = xbar + cfg.params.zeta * ybar
    pi0 = 1.0 - xbar + cfg.params.c
    assert np.allclose(q01, xbar * pi1), "complete-graph adoption rate mismatch"
    assert np.allclose(q10, (1.0 - xbar) * pi0), "complete-graph drop rate mismatch"
    assert len(adopters) == int(pop.behaviours.sum())
    assert len(infected) == int((pop.healths == INFECTED).sum())
    mask = (pop.healths == SUSCEPTIBLE) & (pop.behaviours == NO_PROTECTION)
    assert len(eligible) == int(mask.sum())
    assert math.isclose(a_inf, float(a[pop.healths == INFECTED].sum()), abs_tol=1e-9)
    assert math.isclose(a_elig, float(a[mask].sum()), abs_tol=1e-9)
    for i in np.nonzero(pop.healths == SUSCEPTIBLE)[0][:5]:
        expect = infection_rate(pop, int(i), cfg.params, cfg.bidirectional)
        assert expect >= 0.0


def _run_general(cfg: AbmConfig, pop: Population, rng: np.random.Generator):
    """General influence graph: rates are recomputed from scratch every event
    (O(n * d) per event; intended for modest populations)."""
    p = cfg.params
    g = cfg.graph
    n = pop.n
    x = pop.behaviours
    y = pop.healths
    a = pop.activities
    bidi = cfg.bidirectional
    contact_mode = cfg.infection_mode == "contact"
    record = cfg.record_events
    log = EventLog()
    cum_act = np.cumsum(a)
    a_total = float(cum_act[-1])

    grid = _grid(cfg)
    out_x = np.empty(grid.size)
    out_y = np.empty(grid.size)
    si = 0
    t = 0.0

    def record_through(t_limit):
        nonlocal si
        n1 = int(x.sum())
        n_inf = int((y == INFECTED).sum())
        while si < grid.size and grid[si] < t_limit:
            out_x[si] = n1 / n
            out_y[si] = n_inf / n
            si += 1

    while True:
        n_inf = int((y == INFECTED).sum())
        q01, q10 = switch_rates(g, pop, p)
        adopt_rates = np.where(x == NO_PROTECTION, q01, 0.0)
        drop_rates = np.where(x == PROTECTION, q10, 0.0)
        rec_rates = np.where(y == INFECTED, p.mu, 0.0)
        if np.any(adopt_rates < 0) or np.any(drop_rates < 0):
            raise NumericalError("negative imitation rate")
        if contact_mode:
            r_mid = a_total if (n_inf > 0 or record) else 0.0
            mid_rates = None
        else:
            a_inf = float(a[y == INFECTED].sum())
            elig = (y == SUSCEPTIBLE) & (x == NO_PROTECTION)
            ybar = n_inf / n
            if bidi:
                mid_rates = np.where(elig, p.lam / (n - 1) * (n * a * ybar + a_inf), 0.0)
            else:
                mid_rates = np.where(elig, p.lam / (n - 1) * a_inf, 0.0)
            r_mid = float(mid_rates.sum())
        r_rec = float(rec_rates.sum())
        r_adopt = float(adopt_rates.sum())
        r_drop = float(drop_rates.sum())
        total = r_rec + r_mid + r_adopt + r_drop
        if total <= 0.0:
            break
        dt = rng.exponential(1.0 / total)
        t_new = t + dt
        record_through(min(t_new, cfg.horizon))
        if t_new >= cfg.horizon:
            t = cfg.horizon
            break
        t = t_new
        u = rng.random() * total

        def pick(rates, subtotal):
            v = rng.random() * subtotal
            return int(np.searchsorted(np.cumsum(rates), v, side="right"))

        if u < r_rec:
            i = pick(rec_rates, r_rec)
            y[i] = SUSCEPTIBLE
            if record:
                log.append(t, EVENT_RECOVERY, i)
        elif u < r_rec + r_mid:
            if contact_mode:
                v = rng.random() * a_total
                i = int(np.searchsorted(cum_act, v, side="right"))
                j = int(rng.random() * (n - 1))
                if j >= i:
                    j += 1
                if record:
                    log.append(t, EVENT_CONTACT, i, j)
                target = source = None
                if y[i] == INFECTED and y[j] == SUSCEPTIBLE and x[j] == NO_PROTECTION:
                    target, source = j, i
                elif (
                    bidi and y[i] == SUSCEPTIBLE and x[i] == NO_PROTECTION and y[j] == INFECTED
                ):
                    target, source = i, j
                if target is not None and rng.random() < p.lam:
                    y[target] = INFECTED
                    if record:
                        log.append(t, EVENT_INFECTION, target, source)
            else:
                i = pick(mid_rates, r_mid)
                y[i] = INFECTED
                if record:
                    log.append(t, EVENT_INFECTION, i)
        elif u < r_rec + r_mid + r_adopt:
            i = pick(adopt_rates, r_adopt)
            x[i] = PROTECTION
            if record:
                log.append(t, EVENT_ADOPT, i)
        else:
            i = pick(drop_rates, r_drop)
            x[i] = NO_PROTECTION
            if record:
                log.append(t, EVENT_DROP, i)

    record_through(cfg.horizon + cfg.sample_dt)
    return grid, out_x, out_y, log


@dataclass
class EnsembleResult:
    """Pointwise mean and deviation across seeded replicate runs."""

    times: np.ndarray
    x_mean: np.ndarray
    y_mean: np.ndarray
    x_std: np.ndarray
    y_std: np.ndarray
    finals: np.ndarray  # (n_runs, 2)
    seeds: list[int]
    params: ModelParams

    @property
    def n_runs(self) -> int:
        return len(self.seeds)

    def mean_trajectory(self) -> Trajectory:
        return Trajectory(
            times=self.times,
            xs=self.x_mean,
            ys=self.y_mean,
            params=self.params,
            meta={"n_runs": self.n_runs, "seeds": list(self.seeds)},
        )

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as f:
            f.write("t,x_mean,y_mean,x_std,y_std\n")
            for row in zip(self.times, self.x_mean, self.y_mean, self.x_std, self.y_std):
                f.write(",".join(f"{v:.17g}" for v in row) + "\n")


def _one_run(cfg: AbmConfig) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    traj, _ = simulate(cfg)
    return traj.times, traj.xs, traj.ys


def ensemble(cfg: AbmConfig, n_runs: int, n_jobs: int = 1) -> EnsembleResult:
    """Replicate runs with seeds cfg.seed + 0 ... cfg.seed + n_runs - 1."""
    if n_runs < 1:
        raise ConfigError("n_runs must be >= 1")
    seeds = [cfg.seed + k for k in range(n_runs)]
    cfgs = [dataclasses.replace(cfg, seed=s) for s in seeds]
    if n_jobs > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            results = list(pool.map(_one_run, cfgs))
    else:
        results = [_one_run(c) for c in cfgs]
    times = results[0][0]
    xs = np.stack([r[1] for r in results])
    ys = np.stack([r[2] for r in results])
    ddof = 1 if n_runs > 1 else 0
    return EnsembleResult(
        times=times,
        x_mean=xs.mean(axis=0),
        y_mean=ys.mean(axis=0),
        x_std=xs.std(axis=0, ddof=ddof),
        y_std=ys.std(axis=0, ddof=ddof),
        finals=np.column_stack([xs[:, -1], ys[:, -1]]),
        seeds=seeds,
        params=cfg.params,
    )
