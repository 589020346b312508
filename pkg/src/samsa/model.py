"""Semantic-graph data model and the scene-level queries built on it.

A passage is a rooted DAG over a fixed token sequence.  Internal units carry
labelled edges to child units or directly to terminals; an edge may be marked
*remote* (a reentrancy: the child also has a primary parent elsewhere).  The
primary (non-remote) edges always form a forest.

The queries implemented here are the ones the scoring layer needs:

* ``scenes``     -- every unit that evokes an event (has a primary Process or
                    State child), with its main relation and participants.
* ``scene_leaves`` -- the terminal indices a scene spans via primary edges.
* ``minimal_centers`` -- the lexical head(s) of a unit, found by descending
                    through centers (and through the main relation when the
                    unit is itself a scene).
* ``validate``   -- structural well-formedness report.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import ImplicitUnitError, MalformedGraph, MalformedScene


class EdgeCategory(enum.Enum):
    """Closed set of edge labels of the foundational annotation layer."""

    PARALLEL_SCENE = "H"
    LINKER = "L"
    PROCESS = "P"
    STATE = "S"
    PARTICIPANT = "A"
    CENTER = "C"
    ELABORATOR = "E"
    ADVERBIAL = "D"
    TIME = "T"
    CONNECTOR = "N"
    RELATOR = "R"
    FUNCTION = "F"
    GROUND = "G"


_CATEGORY_BY_TAG = {c.value: c for c in EdgeCategory}


def category_from_tag(tag: str) -> EdgeCategory | None:
    """Return the category for a single-letter tag, or None if unknown."""
    return _CATEGORY_BY_TAG.get(tag)


@dataclass(frozen=True)
class Terminal:
    """One surface token: its 0-based position and its text."""

    index: int
    text: str


@dataclass(frozen=True)
class Edge:
    """A labelled edge from a unit to a child unit."""

    child: str
    category: EdgeCategory
    remote: bool = False


@dataclass(frozen=True)
class TerminalEdge:
    """An attachment from a unit directly to a terminal position."""

    terminal: int


@dataclass(frozen=True)
class Unit:
    """An internal node: an identifier plus its outgoing edges, in order."""

    id: str
    edges: tuple[Edge | TerminalEdge, ...] = ()
    implicit: bool = False


@dataclass(frozen=True)
class Passage:
    """A full annotated passage: tokens, units and the root unit ids."""

    id: str
    tokens: tuple[Terminal, ...]
    units: dict[str, Unit]
    roots: tuple[str, ...]

    def unit(self, unit_id: str) -> Unit:
        return self.units[unit_id]


@dataclass(frozen=True)
class Scene:
    """A scene: the evoking unit, its main relation and its participants.

    ``participants`` preserves annotation order and includes remote ones;
    ``order_key`` is the smallest terminal index of the scene's primary
    yield (None when the scene has no surface material at all).
    """

    node: str
    main_relation: str
    participants: tuple[str, ...]
    order_key: int | None


# ---------------------------------------------------------------------------
# yields


def primary_yield(passage: Passage, unit_id: str) -> frozenset[int]:
    """All terminal indices reachable from ``unit_id`` via primary edges."""
    out: set[int] = set()
    _collect_yield(passage, unit_id, out, set())
    return frozenset(out)


def _collect_yield(passage, unit_id, out, path):
    if unit_id in path:
        raise MalformedGraph(f"cycle through unit {unit_id!r}")
    path = path | {unit_id}
    for edge in passage.unit(unit_id).edges:
        if isinstance(edge, TerminalEdge):
            out.add(edge.terminal)
        elif not edge.remote:
            _collect_yield(passage, edge.child, out, path)


# ---------------------------------------------------------------------------
# scenes


def scenes(passage: Passage) -> list[Scene]:
    """Extract every scene of the passage, ordered by surface position.

    A unit evokes a scene iff it has a primary Process or State child; that
    child is the scene's main relation.  More than one such child on a
    single unit is contradictory and rejected.  Participants are the A
    children (remote ones included).  Ordering is by the smallest terminal
    index of the scene's primary yield, with annotation order breaking ties
    and anchoring scenes that have no surface material.
    """
    found: list[Scene] = []
    for position, unit in enumerate(passage.units.values()):
        mains = [
            e for e in unit.edges
            if isinstance(e, Edge) and not e.remote
            and e.category in (EdgeCategory.PROCESS, EdgeCategory.STATE)
        ]
        if not mains:
            continue
        if len(mains) > 1:
            raise MalformedScene(
                f"unit {unit.id!r} has {len(mains)} main relations"
            )
        participants = tuple(
            e.child for e in unit.edges
            if isinstance(e, Edge) and e.category is EdgeCategory.PARTICIPANT
        )
        spanned = primary_yield(passage, unit.id)
        found.append((
            min(spanned) if spanned else None,
            position,
            Scene(
                node=unit.id,
                main_relation=mains[0].child,
                participants=participants,
                order_key=min(spanned) if spanned else None,
            ),
        ))
    found.sort(key=lambda item: (item[0] is None, item[0], item[1]))
    return [scene for _, _, scene in found]


def scene_leaves(passage: Passage, scene: Scene) -> frozenset[int]:
    """Terminal indices the scene covers, remote material excluded."""
    return primary_yield(passage, scene.node)


# ---------------------------------------------------------------------------
# minimal centers


def minimal_centers(passage: Passage, unit_id: str) -> tuple[int, ...]:
    """Resolve a unit to the terminal position(s) of its lexical head.

    Descend iteratively: a scene continues into its main relation; a unit
    with Center children continues into *all* of them (coordination keeps
    every conjunct's head); any other unit stops and contributes the first
    terminal of its primary yield.  A unit whose whole primary yield is a
    single terminal stops immediately.  Implicit units reached on the way
    contribute nothing, but asking for the centers of an implicit unit
    itself is a contract violation (use the implicit-unit scoring rule).

    Returns the head positions in discovery order, deduplicated.  The
    result may be empty (e.g. a unit whose only material is implicit).
    """
    if passage.unit(unit_id).implicit:
        raise ImplicitUnitError(f"unit {unit_id!r} is implicit")
    heads: list[int] = []
    _descend(passage, unit_id, heads, set())
    seen: set[int] = set()
    unique: list[int] = []
    for h in heads:
        if h not in seen:
            seen.add(h)
            unique.append(h)
    return tuple(unique)


def _descend(passage, unit_id, heads, path):
    if unit_id in path:
        raise MalformedGraph(f"cycle through unit {unit_id!r}")
    path = path | {unit_id}
    unit = passage.unit(unit_id)
    if unit.implicit:
        return
    spanned = primary_yield(passage, unit_id)
    if len(spanned) == 1:
        heads.append(next(iter(spanned)))
        return
    mains = [
        e for e in unit.edges
        if isinstance(e, Edge) and not e.remote
        and e.category in (EdgeCategory.PROCESS, EdgeCategory.STATE)
    ]
    if mains:
        if len(mains) > 1:
            raise MalformedScene(
                f"unit {unit_id!r} has {len(mains)} main relations"
            )
        _descend(passage, mains[0].child, heads, path)
        return
    centers = [
        e for e in unit.edges
        if isinstance(e, Edge) and not e.remote
        and e.category is EdgeCategory.CENTER
    ]
    if centers:
        for edge in centers:
            _descend(passage, edge.child, heads, path)
        return
    if spanned:
        heads.append(min(spanned))


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class ValidationIssue:
    """One structural defect: a machine-readable code plus a message."""

    code: str
    message: str

    def __str__(self):
        return f"{self.code}: {self.message}"


def validate(passage: Passage) -> list[ValidationIssue]:
    """Check structural invariants; an empty list means the passage is ok.

    Checked: terminal indices are exactly 0..n-1 with no duplicates; every
    edge and root points at an existing unit; terminal attachments are in
    range; the primary-edge graph is acyclic and forest-shaped (at most one
    primary parent per unit); implicit units have no outgoing edges and are
    never targets of terminal attachments; every terminal is reachable from
    some root via primary edges.
    """
    issues: list[ValidationIssue] = []
    n = len(passage.tokens)

    seen_idx: set[int] = set()
    for term in passage.tokens:
        if term.index in seen_idx:
            issues.append(ValidationIssue(
                "DuplicateTerminal", f"terminal index {term.index} repeats"))
        seen_idx.add(term.index)
    expected = set(range(n))
    if seen_idx != expected:
        missing = sorted(expected - seen_idx)
        extra = sorted(seen_idx - expected)
        issues.append(ValidationIssue(
            "BadTerminalIndexing",
            f"terminal indices must be 0..{n - 1} (missing {missing}, stray {extra})"))

    primary_parent: dict[str, str] = {}
    for unit in passage.units.values():
        if unit.implicit and unit.edges:
            issues.append(ValidationIssue(
                "ImplicitWithChildren", f"implicit unit {unit.id!r} has edges"))
        for edge in unit.edges:
            if isinstance(edge, TerminalEdge):
                if not 0 <= edge.terminal < n:
                    issues.append(ValidationIssue(
                        "TerminalOutOfRange",
                        f"unit {unit.id!r} attaches terminal {edge.terminal}"))
                continue
            if edge.child not in passage.units:
                issues.append(ValidationIssue(
                    "DanglingEdge",
                    f"unit {unit.id!r} references missing unit {edge.child!r}"))
                continue
            if not edge.remote:
                if edge.child in primary_parent:
                    issues.append(ValidationIssue(
                        "NotForest",
                        f"unit {edge.child!r} has primary parents "
                        f"{primary_parent[edge.child]!r} and {unit.id!r}"))
                else:
                    primary_parent[edge.child] = unit.id

    for root in passage.roots:
        if root not in passage.units:
            issues.append(ValidationIssue(
                "DanglingRoot", f"root {root!r} is not a unit"))

    # cycle check over primary edges (iterative DFS, colouring)
    WHITE, GREY, BLACK = 0, 1, 2
    colour = {uid: WHITE for uid in passage.units}
    for start in passage.units:
        if colour[start] != WHITE:
            continue
        stack: list[tuple[str, int]] = [(start, 0)]
        colour[start] = GREY
        while stack:
            uid, i = stack[-1]
            children = [
                e.child for e in passage.units[uid].edges
                if isinstance(e, Edge) and not e.remote
                and e.child in passage.units
            ]
            if i < len(children):
                stack[-1] = (uid, i + 1)
                nxt = children[i]
                if colour[nxt] == GREY:
                    issues.append(ValidationIssue(
                        "CyclicGraph", f"primary cycle through {nxt!r}"))
                elif colour[nxt] == WHITE:
                    colour[nxt] = GREY
                    stack.append((nxt, 0))
            else:
                colour[uid] = BLACK
                stack.pop()

    if not any(i.code == "CyclicGraph" for i in issues):
        reachable: set[int] = set()
        visited: set[str] = set()
        stack = [r for r in passage.roots if r in passage.units]
        while stack:
            uid = stack.pop()
            if uid in visited:
                continue
            visited.add(uid)
            for edge in passage.units[uid].edges:
                if isinstance(edge, TerminalEdge):
                    reachable.add(edge.terminal)
                elif not edge.remote and edge.child in passage.units:
                    stack.append(edge.child)
        unreachable = sorted(expected - reachable)
        if unreachable and not any(
                i.code == "BadTerminalIndexing" for i in issues):
            issues.append(ValidationIssue(
                "UnreachableTerminal",
                f"terminals {unreachable} not reachable from any root"))

    return issues
