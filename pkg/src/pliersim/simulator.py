"""Discrete-time replay of contact and content traces with knowledge gossip.

Each agent keeps a local knowledge graph (LKG) that grows when the agent
creates content and when it meets other agents; a global knowledge graph
(GKG) accumulates everything ever created. Per-step metrics compare every
agent's local view (and locally computed recommendations) against the
global ones.

Time is integer seconds; step s covers [s*step_length, (s+1)*step_length)
and its metrics are stamped with the step's end time. Within a step all
content events apply first, then contacts run sequentially in input order,
so knowledge can travel several hops in a single step.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

import numpy as np

from .evaluation import jaccard, spearman_similarity
from .graph import FolksonomyGraph
from .recommend import pliers_tripartite, rank


class SimulationError(ValueError):
    pass


# ----------------------------------------------------------------------
# events and configuration
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ContactEvent:
    """One proximity contact; (a, b) and (b, a) mean the same exchange."""

    time: int
    a: str
    b: str

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError(f"contact of agent {self.a!r} with itself")
        if self.time < 0:
            raise ValueError("contact time must be >= 0")


@dataclass(frozen=True)
class ContentEvent:
    """Creation of one tagged item by an agent."""

    time: int
    creator: str
    item: str
    tags: tuple[str, ...]

    def __post_init__(self):
        if not self.tags:
            raise ValueError(f"content {self.item!r} carries no tags")
        if self.time < 0:
            raise ValueError("content time must be >= 0")


@dataclass(frozen=True)
class DownloadPolicySpec:
    """Which automatic download rule agents apply to newly discovered items.

    ``mean_threshold`` downloads scores strictly above the mean of the score
    history, ``percentile_threshold`` above the given percentile of it, and
    ``bounded_buffer`` keeps the ``capacity`` best-scored items seen so far.
    ``history_span_s`` limits the threshold history to a sliding time span.
    """

    kind: str
    percentile: float = 50.0
    capacity: int = 16
    history_span_s: int | None = None

    KINDS = ("mean_threshold", "percentile_threshold", "bounded_buffer")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown download policy {self.kind!r}")
        if self.kind == "bounded_buffer" and self.capacity < 1:
            raise ValueError("buffer capacity must be >= 1")
        if not 0.0 <= self.percentile <= 100.0:
            raise ValueError("percentile must lie in [0, 100]")


@dataclass
class DownloadPolicyState:
    """Per-agent mutable policy state: score history and/or item buffer."""

    spec: DownloadPolicySpec
    history: deque = field(default_factory=deque)  # (time, score) pairs
    buffer: dict[str, float] = field(default_factory=dict)
    observed: int = 0
    downloaded: int = 0


def apply_download_policy(
    state: DownloadPolicyState, item: str, score: float, now: int | None = None
) -> bool:
    """Decide download/skip for one scored item and update the state.

    The score history records every observation regardless of the decision.
    ``now`` drives the sliding-span eviction; when omitted, the observation
    index is used, which keeps the history unbounded unless a span is set.
    """
    if score < 0.0:
        raise ValueError("score must be >= 0")
    spec = state.spec
    t = state.observed if now is None else now
    if spec.history_span_s is not None:
        while state.history and t - state.history[0][0] > spec.history_span_s:
            state.history.popleft()

    if spec.kind == "bounded_buffer":
        if len(state.buffer) < spec.capacity:
            state.buffer[item] = score
            decision = True
        else:
            evict_score, evict_item = min(
                (s, i) for i, s in state.buffer.items()
            )
            if score > evict_score:
                del state.buffer[evict_item]
                state.buffer[item] = score
                decision = True
            else:
                decision = False
    else:
        values = [s for _, s in state.history]
        if not values:
            decision = True
        elif spec.kind == "mean_threshold":
            decision = score > sum(values) / len(values)
        else:
            decision = score > float(np.percentile(values, spec.percentile))

    state.history.append((t, score))
    state.observed += 1
    state.downloaded += decision
    return decision


@dataclass
class SimConfig:
    step_length: int = 60
    affinity_weight: float = 0.5
    expiry_window: int | None = None
    metric_cadence: int = 1
    top_n: int | None = None
    spearman_mode: str = "corrected"
    rng_seed: int = 0
    download_policy: DownloadPolicySpec | None = None

    def __post_init__(self):
        if self.step_length <= 0:
            raise ValueError("step_length must be positive")
        if self.metric_cadence < 1:
            raise ValueError("metric_cadence must be >= 1")
        if self.expiry_window is not None and self.expiry_window <= 0:
            raise ValueError("expiry_window must be positive when set")
        if self.spearman_mode not in ("corrected", "literal"):
            raise ValueError(f"unknown spearman_mode {self.spearman_mode!r}")
        if not 0.0 <= self.affinity_weight <= 1.0:
            raise ValueError("affinity_weight must lie in [0, 1]")


@dataclass(frozen=True)
class StepMetrics:
    step: int
    sim_time_s: int
    avg_graph_jaccard: float
    avg_rec_jaccard: float
    avg_rec_spearman_corrected: float
    avg_rec_spearman_literal: float
    n_contacts: int
    n_contents: int


# ----------------------------------------------------------------------
# metric computation
# ----------------------------------------------------------------------

def compute_step_metrics(
    lkgs: Mapping[str, FolksonomyGraph],
    gkg: FolksonomyGraph,
    config: SimConfig,
    *,
    step: int = 0,
    now: int | None = None,
    n_contacts: int = 0,
    n_contents: int = 0,
) -> StepMetrics:
    """Compare every agent's local view and recommendations with the global ones.

    Graph similarity averages over *all* agents (an empty local graph scores 0
    against a non-empty global one). Recommendation similarities skip agents
    whose local and global recommendation vectors are both empty; when that
    skips everyone, the averages are 1.0 by convention (nothing to recommend,
    local trivially agrees with global). With an expiry window configured,
    all graphs are first pruned to contents created inside the window.
    """
    if now is None:
        now = (step + 1) * config.step_length
    gview = gkg
    if config.expiry_window is not None:
        gview = gkg.prune_older_than(now, config.expiry_window)
    flat_global = gview.flatten()

    graph_sims: list[float] = []
    rec_jaccards: list[float] = []
    rec_spear_corr: list[float] = []
    rec_spear_lit: list[float] = []
    for agent in sorted(lkgs):
        lview = lkgs[agent]
        if config.expiry_window is not None:
            lview = lview.prune_older_than(now, config.expiry_window)
        graph_sims.append(jaccard(lview.flatten(), flat_global))

        local = rank(pliers_tripartite(lview, agent, config.affinity_weight), lview, config.top_n)
        glob = rank(pliers_tripartite(gview, agent, config.affinity_weight), gview, config.top_n)
        if not local.ranked and not glob.ranked:
            continue
        lk, gk = local.item_keys(), glob.item_keys()
        rec_jaccards.append(jaccard(set(lk), set(gk)))
        rec_spear_corr.append(spearman_similarity(lk, gk, "corrected"))
        rec_spear_lit.append(spearman_similarity(lk, gk, "literal"))

    def mean(values: list[float], empty: float) -> float:
        return sum(values) / len(values) if values else empty

    return StepMetrics(
        step=step,
        sim_time_s=now,
        avg_graph_jaccard=mean(graph_sims, 1.0),
        avg_rec_jaccard=mean(rec_jaccards, 1.0),
        avg_rec_spearman_corrected=mean(rec_spear_corr, 1.0),
        avg_rec_spearman_literal=mean(rec_spear_lit, 1.0),
        n_contacts=n_contacts,
        n_contents=n_contents,
    )


# ----------------------------------------------------------------------
# the engine
# ----------------------------------------------------------------------

class Simulation:
    """Holds per-agent local graphs, the global graph, and policy states."""

    def __init__(self, config: SimConfig, agents: Iterable[str] = ()):
        self.config = config
        self.gkg = FolksonomyGraph()
        self.lkgs: dict[str, FolksonomyGraph] = {}
        self.policies: dict[str, DownloadPolicyState] = {}
        for agent in agents:
            self.register(agent)
        # with an explicit roster, trace events naming outsiders are an error;
        # without one the roster is derived from the traces themselves
        self._strict = bool(self.lkgs)

    def register(self, agent: str) -> None:
        if agent not in self.lkgs:
            self.lkgs[agent] = FolksonomyGraph()
            if self.config.download_policy is not None:
                self.policies[agent] = DownloadPolicyState(self.config.download_policy)

    def apply_content(self, event: ContentEvent) -> None:
        if event.creator not in self.lkgs:
            raise SimulationError(f"content by unknown agent {event.creator!r}")
        self.lkgs[event.creator].add_content(event.creator, event.item, event.tags, event.time)
        self.gkg.add_content(event.creator, event.item, event.tags, event.time)

    def encounter(self, a: str, b: str, now: int) -> tuple[set[str], set[str]]:
        """Symmetric knowledge exchange followed by scoring of discoveries.

        Both sides end up with the union of the two pre-merge graphs (merge
        is a semilattice, so merging the already-updated side back gives the
        same union). Each side then scores its newly discovered items on its
        updated graph; the scores drive the download policy when one is set.
        Returns the two new-item sets (for a, for b).
        """
        for agent in (a, b):
            if agent not in self.lkgs:
                raise SimulationError(f"contact names unknown agent {agent!r}")
        ga, gb = self.lkgs[a], self.lkgs[b]
        new_a = set(gb.items - ga.items)
        new_b = set(ga.items - gb.items)
        ga.merge(gb)
        gb.merge(ga)
        self._evaluate_discoveries(a, new_a, now)
        self._evaluate_discoveries(b, new_b, now)
        return new_a, new_b

    def _evaluate_discoveries(self, agent: str, new_items: set[str], now: int) -> None:
        if not new_items:
            return
        scores = pliers_tripartite(
            self.lkgs[agent], agent, self.config.affinity_weight
        ).scores
        policy = self.policies.get(agent)
        if policy is None:
            return
        for item in sorted(new_items):
            apply_download_policy(policy, item, scores[item], now)

    def run(
        self,
        contacts: Sequence[ContactEvent],
        contents: Sequence[ContentEvent],
    ) -> list[StepMetrics]:
        return next(iter(self.run_windows(contacts, contents, [self.config.expiry_window]).values()))

    def run_windows(
        self,
        contacts: Sequence[ContactEvent],
        contents: Sequence[ContentEvent],
        windows: Sequence[int | None],
    ) -> dict[int | None, list[StepMetrics]]:
        """Replay the traces once, measuring under several expiry windows.

        The expiry window only affects measurement, never the exchanged
        knowledge, so one pass over the dynamics serves all windows.
        """
        length = self.config.step_length
        for ev in contents:
            if self._strict and ev.creator not in self.lkgs:
                raise SimulationError(
                    f"content at t={ev.time} names unknown agent {ev.creator!r}"
                )
            self.register(ev.creator)
        for ev in contacts:
            for agent in (ev.a, ev.b):
                if self._strict and agent not in self.lkgs:
                    raise SimulationError(
                        f"contact at t={ev.time} names unknown agent {agent!r}"
                    )
                self.register(agent)

        contents_by_step: dict[int, list[ContentEvent]] = {}
        for ev in contents:
            contents_by_step.setdefault(ev.time // length, []).append(ev)
        contacts_by_step: dict[int, list[ContactEvent]] = {}
        for ev in contacts:
            contacts_by_step.setdefault(ev.time // length, []).append(ev)

        last_step = -1
        if contents_by_step:
            last_step = max(contents_by_step)
        if contacts_by_step:
            last_step = max(last_step, max(contacts_by_step))

        out: dict[int | None, list[StepMetrics]] = {w: [] for w in windows}
        cadence = self.config.metric_cadence
        for step in range(last_step + 1):
            step_contents = contents_by_step.get(step, ())
            for ev in step_contents:
                self.apply_content(ev)
            step_contacts = contacts_by_step.get(step, ())
            for ev in step_contacts:
                self.encounter(ev.a, ev.b, ev.time)
            if (step + 1) % cadence == 0 or step == last_step:
                for window in windows:
                    cfg = replace(self.config, expiry_window=window)
                    out[window].append(
                        compute_step_metrics(
                            self.lkgs,
                            self.gkg,
                            cfg,
                            step=step,
                            n_contacts=len(step_contacts),
                            n_contents=len(step_contents),
                        )
                    )
        return out


def run(
    config: SimConfig,
    contacts: Sequence[ContactEvent],
    contents: Sequence[ContentEvent],
    agents: Iterable[str] = (),
) -> list[StepMetrics]:
    """Replay the traces under ``config`` and return the metric series.

    Agents are taken from the traces themselves plus the optional explicit
    roster (needed for silent agents that neither create nor appear first in
    a contact before meeting someone).
    """
    return Simulation(config, agents).run(contacts, contents)


# ----------------------------------------------------------------------
# synthetic contacts
# ----------------------------------------------------------------------

def agent_name(index: int) -> str:
    return f"a{index:04d}"


def generate_synthetic_contacts(
    n_agents: int,
    n_communities: int,
    rewiring_p: float,
    duration: int,
    rng_seed: int,
) -> list[ContactEvent]:
    """Community-structured random contacts, one draw per agent per minute.

    Agents are split round-robin into communities; every minute each agent
    picks a partner inside its community with probability ``1 - rewiring_p``
    and outside it otherwise. An agent whose candidate pool for the drawn
    side is empty (singleton community, or a single community and an outside
    draw) simply skips that minute.
    """
    if n_communities < 1 or n_communities > n_agents:
        raise ValueError("need 1 <= n_communities <= n_agents")
    if not 0.0 <= rewiring_p <= 1.0:
        raise ValueError("rewiring_p must lie in [0, 1]")
    rng = random.Random(rng_seed)
    agents = [agent_name(i) for i in range(n_agents)]
    community = {a: i % n_communities for i, a in enumerate(agents)}
    members: dict[int, list[str]] = {c: [] for c in range(n_communities)}
    for a in agents:
        members[community[a]].append(a)
    outside = {
        c: [a for a in agents if community[a] != c] for c in range(n_communities)
    }

    events: list[ContactEvent] = []
    for minute in range(duration // 60):
        t = minute * 60
        for a in agents:
            c = community[a]
            if rng.random() < 1.0 - rewiring_p:
                pool = [m for m in members[c] if m != a]
            else:
                pool = outside[c]
            if not pool:
                continue
            events.append(ContactEvent(t, a, rng.choice(pool)))
    return events
