"""Timestamped tripartite user-item-tag graph (a folksonomy).

The same structure backs an agent's local knowledge graph, the global
knowledge graph, and the static graphs used for link-prediction runs.
All node keys are plain strings; users, items and tags live in separate
namespaces, so the same string may name both a tag and an item.
"""

from __future__ import annotations

import sys
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator


class EntityKind(Enum):
    """The three node namespaces; the same key may exist in more than one."""

    USER = "U"
    ITEM = "I"
    TAG = "T"


class FolksonomyGraph:
    """Simple (0/1) tripartite graph with per-edge and per-item creation times.

    Mutators (``add_content``, ``merge``) require exclusive access; all read
    accessors are safe to call concurrently on an un-mutated graph.
    User-tag adjacency is never stored: it is derived from the two edge sets.
    Set-valued accessors return live internal sets for speed; treat them as
    read-only views.
    """

    __slots__ = (
        "_user_items",
        "_item_users",
        "_item_tags",
        "_tag_items",
        "_ui_times",
        "_it_times",
        "_item_created",
        "_version",
    )

    def __init__(self) -> None:
        self._user_items: dict[str, set[str]] = {}
        self._item_users: dict[str, set[str]] = {}
        self._item_tags: dict[str, set[str]] = {}
        self._tag_items: dict[str, set[str]] = {}
        self._ui_times: dict[tuple[str, str], int] = {}
        self._it_times: dict[tuple[str, str], int] = {}
        self._item_created: dict[str, int] = {}
        # bumped on every mutation; lets scorers cache derived structures
        self._version = 0

    # ------------------------------------------------------------------
    # node / edge views
    # ------------------------------------------------------------------

    @property
    def users(self):
        return self._user_items.keys()

    @property
    def items(self):
        return self._item_users.keys()

    @property
    def tags(self):
        return self._tag_items.keys()

    @property
    def user_item_edges(self):
        """Mapping (user, item) -> creation time in seconds."""
        return self._ui_times

    @property
    def item_tag_edges(self):
        """Mapping (item, tag) -> creation time in seconds."""
        return self._it_times

    @property
    def item_created_at(self):
        return self._item_created

    @property
    def version(self) -> int:
        return self._version

    def items_of_user(self, user: str) -> set[str]:
        return self._user_items.get(user, set())

    def users_of_item(self, item: str) -> set[str]:
        return self._item_users.get(item, set())

    def tags_of_item(self, item: str) -> set[str]:
        return self._item_tags.get(item, set())

    def items_of_tag(self, tag: str) -> set[str]:
        return self._tag_items.get(tag, set())

    def tags_of_user(self, user: str) -> set[str]:
        """Derived user-tag view: tags reached through the user's items."""
        out: set[str] = set()
        for item in self._user_items.get(user, ()):
            out |= self._item_tags[item]
        return out

    def has_node(self, kind: EntityKind, key: str) -> bool:
        if kind is EntityKind.USER:
            return key in self._user_items
        if kind is EntityKind.ITEM:
            return key in self._item_users
        return key in self._tag_items

    # degree accessors; the scoring formulas divide by these
    def user_degree(self, user: str) -> int:
        """Number of items linked to ``user``."""
        return len(self._user_items.get(user, ()))

    def item_popularity(self, item: str) -> int:
        """Number of users linked to ``item``."""
        return len(self._item_users.get(item, ()))

    def item_tag_count(self, item: str) -> int:
        return len(self._item_tags.get(item, ()))

    def tag_degree(self, tag: str) -> int:
        """Number of items carrying ``tag``."""
        return len(self._tag_items.get(tag, ()))

    def __len__(self) -> int:
        return len(self._user_items) + len(self._item_users) + len(self._tag_items)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FolksonomyGraph):
            return NotImplemented
        return (
            self._ui_times == other._ui_times
            and self._it_times == other._it_times
            and self._item_created == other._item_created
        )

    def __hash__(self):  # mutable container
        raise TypeError("FolksonomyGraph is not hashable")

    # ------------------------------------------------------------------
    # mutation
    # ------------------------------------------------------------------

    def add_content(self, creator: str, item: str, tags: Iterable[str], time: int) -> None:
        """Insert one content: the creator-item link plus one item-tag link per tag.

        Idempotent: repeating a call changes nothing. On re-announcement the
        earlier creation time wins for every edge and for the item itself
        (first creation is the fact; later sightings add no information).
        """
        tags = list(tags)
        if not tags:
            raise ValueError(f"content {item!r} must carry at least one tag")
        creator = sys.intern(creator)
        item = sys.intern(item)
        time = int(time)

        self._user_items.setdefault(creator, set()).add(item)
        self._item_users.setdefault(item, set()).add(creator)
        item_tags = self._item_tags.setdefault(item, set())

        ui = (creator, item)
        prev = self._ui_times.get(ui)
        self._ui_times[ui] = time if prev is None else min(prev, time)

        for tag in tags:
            tag = sys.intern(tag)
            item_tags.add(tag)
            self._tag_items.setdefault(tag, set()).add(item)
            it = (item, tag)
            prev = self._it_times.get(it)
            self._it_times[it] = time if prev is None else min(prev, time)

        prev = self._item_created.get(item)
        self._item_created[item] = time if prev is None else min(prev, time)
        self._version += 1

    def remove_user_item_edge(self, user: str, item: str) -> None:
        """Drop one user-item link; endpoints stay while still connected.

        An item left with no user is removed together with its tag links, as
        is a user left with no items.
        """
        if (user, item) not in self._ui_times:
            raise KeyError(f"no edge ({user!r}, {item!r})")
        del self._ui_times[(user, item)]
        self._user_items[user].discard(item)
        self._item_users[item].discard(user)
        if not self._user_items[user]:
            del self._user_items[user]
        if not self._item_users[item]:
            self._drop_item(item)
        self._version += 1

    def _drop_item(self, item: str) -> None:
        del self._item_users[item]
        del self._item_created[item]
        for tag in self._item_tags.pop(item):
            del self._it_times[(item, tag)]
            self._tag_items[tag].discard(item)
            if not self._tag_items[tag]:
                del self._tag_items[tag]

    def merge(self, other: "FolksonomyGraph") -> None:
        """Component-wise set union with ``other``; earlier timestamps win."""
        for (user, item), time in other._ui_times.items():
            self._user_items.setdefault(user, set()).add(item)
            self._item_users.setdefault(item, set()).add(user)
            self._item_tags.setdefault(item, set())
            prev = self._ui_times.get((user, item))
            self._ui_times[(user, item)] = time if prev is None else min(prev, time)
        for (item, tag), time in other._it_times.items():
            self._item_tags.setdefault(item, set()).add(tag)
            self._tag_items.setdefault(tag, set()).add(item)
            prev = self._it_times.get((item, tag))
            self._it_times[(item, tag)] = time if prev is None else min(prev, time)
        for item, time in other._item_created.items():
            prev = self._item_created.get(item)
            self._item_created[item] = time if prev is None else min(prev, time)
        self._version += 1

    # ------------------------------------------------------------------
    # derived graphs
    # ------------------------------------------------------------------

    def copy(self) -> "FolksonomyGraph":
        g = FolksonomyGraph()
        g._user_items = {u: set(s) for u, s in self._user_items.items()}
        g._item_users = {i: set(s) for i, s in self._item_users.items()}
        g._item_tags = {i: set(s) for i, s in self._item_tags.items()}
        g._tag_items = {t: set(s) for t, s in self._tag_items.items()}
        g._ui_times = dict(self._ui_times)
        g._it_times = dict(self._it_times)
        g._item_created = dict(self._item_created)
        return g

    def prune_older_than(self, now: int, window: int) -> "FolksonomyGraph":
        """Copy containing only items created at or after ``now - window``.

        An expired item takes all its incident edges with it; users and tags
        left without any edge are dropped, so node counts reflect surviving
        knowledge only.
        """
        if window <= 0:
            raise ValueError("window must be positive")
        cutoff = now - window
        g = FolksonomyGraph()
        keep = {i for i, t in self._item_created.items() if t >= cutoff}
        for (user, item), time in self._ui_times.items():
            if item in keep:
                g._user_items.setdefault(user, set()).add(item)
                g._item_users.setdefault(item, set()).add(user)
                g._ui_times[(user, item)] = time
        for (item, tag), time in self._it_times.items():
            if item in keep:
                g._item_tags.setdefault(item, set()).add(tag)
                g._tag_items.setdefault(tag, set()).add(item)
                g._it_times[(item, tag)] = time
        for item in keep:
            g._item_created[item] = self._item_created[item]
            g._item_tags.setdefault(item, set())
        return g

    def flatten(self) -> set[tuple[str, str, str]]:
        """Both edge sets as one set of typed tuples, ready for set algebra.

        User-item edges become ``("UI", user, item)`` and item-tag edges
        ``("IT", item, tag)``; the size equals the total edge count.
        """
        out = {("UI", u, i) for (u, i) in self._ui_times}
        out |= {("IT", i, t) for (i, t) in self._it_times}
        return out

    def is_subgraph_of(self, other: "FolksonomyGraph") -> bool:
        return (
            self._ui_times.keys() <= other._ui_times.keys()
            and self._it_times.keys() <= other._it_times.keys()
        )

    def validate(self) -> None:
        """Check structural invariants; raises AssertionError on violation."""
        for (u, i) in self._ui_times:
            assert i in self._user_items[u] and u in self._item_users[i]
        for (i, t) in self._it_times:
            assert t in self._item_tags[i] and i in self._tag_items[t]
        for i in self._item_users:
            assert i in self._item_created, f"item {i!r} has no creation time"
        for (u, i), ts in self._ui_times.items():
            assert ts >= self._item_created[i]
        for (i, t), ts in self._it_times.items():
            assert ts >= self._item_created[i]


# ----------------------------------------------------------------------
# flat-file snapshots
# ----------------------------------------------------------------------

class GraphFormatError(ValueError):
    """Raised when a graph snapshot file is malformed or dangling."""

    def __init__(self, message: str, path: str | Path = "", line: int = 0):
        self.path = str(path)
        self.line = line
        where = f"{path}:{line}: " if line else (f"{path}: " if path else "")
        super().__init__(f"{where}{message}")


def _records(lines: Iterable[str]) -> Iterator[tuple[int, list[str]]]:
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        yield lineno, line.split("\t")


def load_graph_tsv(path: str | Path) -> FolksonomyGraph:
    """Read a snapshot written by :func:`save_graph_tsv`.

    Records are ``UI<TAB>user<TAB>item<TAB>time`` and
    ``IT<TAB>item<TAB>tag<TAB>time``. The load fails on dangling records:
    every item must end up with at least one user link and one tag link.
    """
    g = FolksonomyGraph()
    ui: list[tuple[str, str, int]] = []
    it: list[tuple[str, str, int]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, fields in _records(fh):
            if len(fields) != 4:
                raise GraphFormatError("expected 4 tab-separated fields", path, lineno)
            kind, a, b, time_s = (f.strip() for f in fields)
            if not a or not b:
                raise GraphFormatError("empty node key", path, lineno)
            try:
                time = int(time_s)
            except ValueError:
                raise GraphFormatError(f"bad time {time_s!r}", path, lineno) from None
            if kind == "UI":
                ui.append((a, b, time))
            elif kind == "IT":
                it.append((a, b, time))
            else:
                raise GraphFormatError(f"unknown record kind {kind!r}", path, lineno)

    tagged = {item for item, _, _ in it}
    owned = {item for _, item, _ in ui}
    dangling = sorted((tagged - owned) | (owned - tagged))
    if dangling:
        raise GraphFormatError(
            "dangling items (need both a user link and a tag link): "
            + ", ".join(dangling),
            path,
        )

    created: dict[str, int] = {}
    for user, item, time in ui:
        user, item = sys.intern(user), sys.intern(item)
        g._user_items.setdefault(user, set()).add(item)
        g._item_users.setdefault(item, set()).add(user)
        prev = g._ui_times.get((user, item))
        g._ui_times[(user, item)] = time if prev is None else min(prev, time)
        created[item] = min(created.get(item, time), time)
    for item, tag, time in it:
        item, tag = sys.intern(item), sys.intern(tag)
        g._item_tags.setdefault(item, set()).add(tag)
        g._tag_items.setdefault(tag, set()).add(item)
        prev = g._it_times.get((item, tag))
        g._it_times[(item, tag)] = time if prev is None else min(prev, time)
        created[item] = min(created.get(item, time), time)
    # the snapshot format carries no separate item record; the earliest
    # incident edge time is the item's creation time
    g._item_created = created
    g.validate()
    return g


def save_graph_tsv(graph: FolksonomyGraph, path: str | Path) -> None:
    """Write a canonical snapshot: sorted UI records, then sorted IT records."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# folksonomy graph snapshot\n")
        for (user, item) in sorted(graph.user_item_edges):
            fh.write(f"UI\t{user}\t{item}\t{graph.user_item_edges[(user, item)]}\n")
        for (item, tag) in sorted(graph.item_tag_edges):
            fh.write(f"IT\t{item}\t{tag}\t{graph.item_tag_edges[(item, tag)]}\n")
