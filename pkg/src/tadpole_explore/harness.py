"""Experiment runner: random instances, ratio sweeps, oracle cross-checks and CSV output.

A config is a flat ``key = value`` file::

    mode = fuzz-greedy
    trials = 1000
    i = 3..40
    j = 1..20
    P = 1000
    Q = 10
    seed = 7
    output = fuzz.csv

The ``SEED`` environment variable overrides ``seed``.
"""

from __future__ import annotations

import configparser
import csv
import io
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .adversary import adversary_game, verify_case_accounting
from .advice import advice_length, advise, explore_with_advice
from .explorers import greedy_explore, make_policy, run_policy
from .fog_env import new_session
from .graph_core import Graph, cycle_edges, decompose_tadpole, is_cycle, make_cycle, make_tadpole
from .optimal_oracle import brute_force_opt, optimal_cost

MODES = ("fuzz-greedy", "adversary-sweep", "advice-check", "oracle-check")
CSV_HEADER = ["trial", "instance", "start", "explorer", "cost", "opt", "ratio", "bound", "pass"]
DEFAULT_EXPLORERS = ("greedy", "dfs") + tuple(f"random:{s}" for s in range(10))


class ConfigError(ValueError):
    pass


class ExperimentIOError(OSError):
    pass


def exact(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def decimal(x, places: int = 6) -> str:
    """Display-only rendering; never compare these."""
    return f"{float(x):.{places}f}"


@dataclass(frozen=True)
class WeightDist:
    """Uniform rational weights p/q with p in [1, P] and q in [1, Q]."""

    P: int = 1000
    Q: int = 10

    def __post_init__(self):
        if self.P < 1 or self.Q < 1:
            raise ConfigError(f"weight bounds must be positive, got P={self.P}, Q={self.Q}")

    def draw(self, rng: random.Random) -> Fraction:
        return Fraction(rng.randint(1, self.P), rng.randint(1, self.Q))


def random_tadpole(rng_seed, i_range: tuple[int, int], j_range: tuple[int, int], weight_dist: WeightDist) -> Graph:
    rng = random.Random(rng_seed)
    i = rng.randint(*i_range)
    j = rng.randint(*j_range)
    return make_tadpole(i, j, [weight_dist.draw(rng) for _ in range(i + j)])


def random_cycle(rng_seed, n_range: tuple[int, int], weight_dist: WeightDist) -> Graph:
    rng = random.Random(rng_seed)
    n = rng.randint(*n_range)
    return make_cycle(n, [weight_dist.draw(rng) for _ in range(n)])


def describe(g: Graph) -> str:
    """Instance descriptor that is enough to rebuild the graph."""
    if is_cycle(g):
        kind = f"C{g.n}"
        weights = [e.weight for e in cycle_edges(g)]
    else:
        d = decompose_tadpole(g)
        kind = f"T{d.i},{d.j}"
        weights = list(d.weights)
    return kind + ":" + " ".join(exact(w) for w in weights)


def sample_starts(g: Graph, rng: random.Random, limit: int = 12, samples: int = 5) -> list[int]:
    vertices = sorted(g.vertices)
    if g.n <= limit:
        return vertices
    return sorted(rng.sample(vertices, samples))


def trial_seed(master: int, trial: int) -> str:
    # str seeds hash deterministically across runs and platforms
    return f"{master}:{trial}"


@dataclass
class ExperimentConfig:
    mode: str
    trials: int = 100
    i_range: tuple[int, int] = (3, 40)
    j_range: tuple[int, int] = (1, 20)
    n_range: tuple[int, int] = (3, 16)
    weights: WeightDist = field(default_factory=WeightDist)
    seed: int = 0
    output: Path | None = None
    family: str = "tadpole"
    scheme: str | None = None
    explorers: tuple[str, ...] = DEFAULT_EXPLORERS
    k_values: tuple[int, ...] = (4, 10, 50, 200)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}; expected one of {', '.join(MODES)}")
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        for name, (lo, hi) in (("i", self.i_range), ("j", self.j_range), ("n", self.n_range)):
            if lo > hi:
                raise ConfigError(f"empty range for {name}: {lo}..{hi}")
        if self.i_range[0] < 3 or self.j_range[0] < 1 or self.n_range[0] < 3:
            raise ConfigError("need i >= 3, j >= 1 and n >= 3")
        if self.family not in ("tadpole", "cycle"):
            raise ConfigError(f"unknown family {self.family!r}")
        if self.scheme is None:
            self.scheme = "cycle" if self.family == "cycle" else "tadpole"
        if self.scheme not in ("2bit", "cycle", "tadpole"):
            raise ConfigError(f"unknown advice scheme {self.scheme!r}")
        if (self.scheme == "cycle") != (self.family == "cycle"):
            raise ConfigError(f"scheme {self.scheme} does not fit family {self.family}")
        if not self.explorers:
            raise ConfigError("explorer list is empty")
        if not self.k_values or min(self.k_values) < 4:
            raise ConfigError("k values must be nonempty and at least 4")


def _range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    if not sep:
        lo, sep, hi = text.partition("-")
    if not sep:
        return int(text), int(text)
    return int(lo), int(hi)


def _list(text: str) -> list[str]:
    return [t.strip().strip("\"'") for t in text.strip("[]").split(",") if t.strip()]


def parse_config(text: str, env: dict | None = None) -> ExperimentConfig:
    parser = configparser.ConfigParser(delimiters=("=",), inline_comment_prefixes=("#",))
    parser.optionxform = str
    try:
        parser.read_string("[experiment]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None
    raw = {k: v.strip().strip("\"'") for k, v in parser["experiment"].items()}
    known = {"mode", "trials", "i", "j", "n", "P", "Q", "seed", "output", "family", "scheme", "explorers", "k"}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    if "mode" not in raw:
        raise ConfigError("config needs a mode")
    env = os.environ if env is None else env
    kwargs: dict = {"mode": raw["mode"]}
    try:
        if "trials" in raw:
            kwargs["trials"] = int(raw["trials"])
        for key, name in (("i", "i_range"), ("j", "j_range"), ("n", "n_range")):
            if key in raw:
                kwargs[name] = _range(raw[key])
        kwargs["weights"] = WeightDist(int(raw.get("P", 1000)), int(raw.get("Q", 10)))
        seed = env.get("SEED", raw.get("seed", "0"))
        kwargs["seed"] = int(seed)
        if "k" in raw:
            kwargs["k_values"] = tuple(int(k) for k in _list(raw["k"]))
    except ValueError as exc:
        raise ConfigError(f"bad number in config: {exc}") from None
    if "output" in raw:
        kwargs["output"] = Path(raw["output"])
    if "family" in raw:
        kwargs["family"] = raw["family"]
    if "scheme" in raw:
        kwargs["scheme"] = raw["scheme"]
    if "explorers" in raw:
        kwargs["explorers"] = tuple(_list(raw["explorers"]))
    return ExperimentConfig(**kwargs)


def load_config(path, env: dict | None = None) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ExperimentIOError(f"{path}: {exc.strerror or exc}") from exc
    return parse_config(text, env)


@dataclass
class ResultRow:
    trial: int
    instance: str
    start: int
    explorer: str
    cost: Fraction
    opt: Fraction
    bound: Fraction | None
    passed: bool

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.cost) / self.opt

    @property
    def ratio_decimal(self) -> str:
        return decimal(self.ratio)

    def as_csv(self) -> list[str]:
        bound = "" if self.bound is None else exact(self.bound)
        return [
            str(self.trial), self.instance, str(self.start), self.explorer,
            exact(self.cost), exact(self.opt), exact(self.ratio), bound,
            "true" if self.passed else "false",
        ]


def _fuzz_greedy(cfg: ExperimentConfig):
    for trial in range(cfg.trials):
        seed = trial_seed(cfg.seed, trial)
        g = random_tadpole(seed, cfg.i_range, cfg.j_range, cfg.weights)
        opt = optimal_cost(g).cost
        desc = describe(g)
        for s in sample_starts(g, random.Random(seed + ":starts")):
            cost = greedy_explore(new_session(g, s)).total_cost
            yield ResultRow(trial, desc, s, "greedy", cost, opt, Fraction(2), cost <= 2 * opt)


def _adversary_sweep(cfg: ExperimentConfig):
    trial = 0
    for k in cfg.k_values:
        for name in cfg.explorers:
            result = adversary_game(name, k)
            ok = result.ratio >= result.bound
            try:
                verify_case_accounting(result)
            except AssertionError:
                ok = False
            desc = f"adversary k={k} {result.case} t1={result.t1} aux={result.aux}"
            yield ResultRow(trial, desc, 0, name, result.explorer_cost, result.opt_cost, result.bound, ok)
            trial += 1


def _advice_check(cfg: ExperimentConfig):
    for trial in range(cfg.trials):
        seed = trial_seed(cfg.seed, trial)
        if cfg.family == "cycle":
            g = random_cycle(seed, cfg.n_range, cfg.weights)
        else:
            g = random_tadpole(seed, cfg.i_range, cfg.j_range, cfg.weights)
        opt = optimal_cost(g).cost
        desc = describe(g)
        for s in sample_starts(g, random.Random(seed + ":starts")):
            bits = advise(cfg.scheme, g, s)
            tour = explore_with_advice(cfg.scheme, new_session(g, s), bits)
            tour.validate(g)
            ok = len(bits) == advice_length(cfg.scheme, g.n)
            if cfg.scheme == "2bit":
                counts = tour.edge_counts()
                ok = ok and all(counts.get(e.key) == 2 for e in decompose_tadpole(g).stem_edges)
                bound = None
            else:
                ok = ok and tour.total_cost == opt
                bound = Fraction(1)
            yield ResultRow(trial, desc, s, f"advice:{cfg.scheme}", tour.total_cost, opt, bound, ok)


def _oracle_check(cfg: ExperimentConfig):
    for trial in range(cfg.trials):
        seed = trial_seed(cfg.seed, trial)
        if cfg.family == "cycle":
            g = random_cycle(seed, cfg.n_range, cfg.weights)
        else:
            g = random_tadpole(seed, cfg.i_range, cfg.j_range, cfg.weights)
        closed = optimal_cost(g).cost
        brute = brute_force_opt(g)
        yield ResultRow(trial, describe(g), 0, "brute-force", brute, closed, Fraction(1), brute == closed)


_RUNNERS = {
    "fuzz-greedy": _fuzz_greedy,
    "adversary-sweep": _adversary_sweep,
    "advice-check": _advice_check,
    "oracle-check": _oracle_check,
}


def rows_to_csv(rows: list[ResultRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    writer.writerows(row.as_csv() for row in rows)
    return buf.getvalue()


def run_experiment(config: ExperimentConfig) -> list[ResultRow]:
    rows = list(_RUNNERS[config.mode](config))
    if config.output is not None:
        try:
            config.output.parent.mkdir(parents=True, exist_ok=True)
            config.output.write_text(rows_to_csv(rows))
        except OSError as exc:
            raise ExperimentIOError(f"{config.output}: {exc.strerror or exc}") from exc
    return rows


def explore_by_name(name: str, g: Graph, start: int):
    """Tour of ``g`` from ``start`` for any explorer name ``make_policy`` accepts."""
    return run_policy(new_session(g, start), make_policy(name, g, start))
