"""Per-repository publication graphs, sameAs identity joins, and dedup candidates.

A graph holds author and paper nodes plus authorship edges from accepted
claims. Graphs from two repositories are joined logically: identity
assertions (author A2 in one repo is author A4 in the other) are kept as
sameAs pairs and resolved into classes by union-find, which is what makes
previously separate components fall together.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, NamedTuple

from .errors import ValidationError
from .store import ReadView

AUTHOR = "author"
PAPER = "paper"


class Node(NamedTuple):
    repo: str
    kind: str
    local_id: str

    def label(self) -> str:
        return f"{self.repo}:{self.kind}:{self.local_id}"


@dataclass(frozen=True)
class IdentityAssertion:
    """A sameAs statement across repositories, with provenance."""

    left: Node
    right: Node
    source: str = ""

    def __post_init__(self) -> None:
        if self.left.kind != self.right.kind:
            raise ValidationError(f"assertion links different kinds: {self.left} vs {self.right}")
        if self.left == self.right:
            raise ValidationError(f"self-assertion on {self.left}")

    @property
    def pair(self) -> tuple[Node, Node]:
        return (self.left, self.right) if self.left <= self.right else (self.right, self.left)


@dataclass(frozen=True)
class PubGraph:
    nodes: frozenset[Node] = field(default_factory=frozenset)
    authorship_edges: frozenset[tuple[Node, Node]] = field(default_factory=frozenset)
    assertions: frozenset[tuple[Node, Node]] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        for author, paper in self.authorship_edges:
            if author not in self.nodes or paper not in self.nodes:
                raise ValidationError(f"edge ({author}, {paper}) references a missing node")
            if author.kind != AUTHOR or paper.kind != PAPER:
                raise ValidationError(f"authorship edge must link an author to a paper: ({author}, {paper})")
        for a, b in self.assertions:
            if a not in self.nodes or b not in self.nodes:
                raise ValidationError(f"assertion ({a}, {b}) references a missing node")
            if a.kind != b.kind:
                raise ValidationError(f"assertion ({a}, {b}) links different kinds")
            if a == b:
                raise ValidationError(f"self-assertion on {a}")
            if a.repo == b.repo:
                raise ValidationError(f"assertion ({a}, {b}) must link distinct repositories")


class UnionFind:
    """Disjoint sets with path compression and union by rank."""

    def __init__(self, items: Iterable[Node] = ()) -> None:
        self._parent: dict[Node, Node] = {}
        self._rank: dict[Node, int] = {}
        for item in items:
            self.add(item)

    def add(self, item: Node) -> None:
        if item not in self._parent:
            self._parent[item] = item
            self._rank[item] = 0

    def find(self, item: Node) -> Node:
        root = item
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[item] != root:
            self._parent[item], item = root, self._parent[item]
        return root

    def union(self, a: Node, b: Node) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self._rank[ra] < self._rank[rb]:
            ra, rb = rb, ra
        self._parent[rb] = ra
        if self._rank[ra] == self._rank[rb]:
            self._rank[ra] += 1

    def groups(self) -> list[list[Node]]:
        members: dict[Node, list[Node]] = defaultdict(list)
        for item in self._parent:
            members[self.find(item)].append(item)
        return list(members.values())


def build_graph(view: ReadView, repo_label: str) -> PubGraph:
    """One author node per author record, one paper node per paper, one edge
    per accepted authorship claim whose user owns an author record."""
    author_by_owner = {a.owner_user_id: a.author_id for a in view.authors.values()}
    nodes = {Node(repo_label, AUTHOR, author_id) for author_id in view.authors}
    nodes |= {Node(repo_label, PAPER, paper_id) for paper_id in view.papers}
    edges = set()
    for claim in view.claims.values():
        if not claim.is_accepted:
            continue
        author_id = author_by_owner.get(claim.user_id)
        if author_id is None:
            continue
        edges.add((Node(repo_label, AUTHOR, author_id), Node(repo_label, PAPER, claim.paper_id)))
    return PubGraph(nodes=frozenset(nodes), authorship_edges=frozenset(edges))


def merge_graphs(g1: PubGraph, g2: PubGraph, assertions: Iterable[IdentityAssertion]) -> PubGraph:
    """Union of two graphs plus identity assertions; nodes are never collapsed,
    joining happens through the sameAs classes."""
    nodes = g1.nodes | g2.nodes
    pairs = set(g1.assertions | g2.assertions)
    for assertion in assertions:
        for endpoint in (assertion.left, assertion.right):
            if endpoint not in nodes:
                raise ValidationError(f"assertion references unknown node {endpoint}")
        pairs.add(assertion.pair)
    return PubGraph(
        nodes=frozenset(nodes),
        authorship_edges=g1.authorship_edges | g2.authorship_edges,
        assertions=frozenset(pairs),
    )


def connected_components(graph: PubGraph) -> dict[Node, tuple[Node, ...]]:
    """Partition nodes under "shares an authorship edge or a sameAs pair".

    Each component is keyed by its lexicographically least node; members are
    sorted, so the output is canonical for a given graph.
    """
    dsu = UnionFind(graph.nodes)
    for a, b in graph.authorship_edges:
        dsu.union(a, b)
    for a, b in graph.assertions:
        dsu.union(a, b)
    return {min(group): tuple(sorted(group)) for group in dsu.groups()}


def identity_classes(graph: PubGraph) -> dict[Node, Node]:
    """Map each node to its identity-class representative (least member),
    where classes are the transitive closure of sameAs assertions only."""
    dsu = UnionFind(graph.nodes)
    for a, b in graph.assertions:
        dsu.union(a, b)
    least: dict[Node, Node] = {}
    for group in dsu.groups():
        rep = min(group)
        for node in group:
            least[node] = rep
    return least


def coauthor_edges(graph: PubGraph) -> set[tuple[Node, Node]]:
    """Unordered pairs of distinct author classes that share at least one
    paper class, named by class representatives."""
    classes = identity_classes(graph)
    authors_by_paper: dict[Node, set[Node]] = defaultdict(set)
    for author, paper in graph.authorship_edges:
        authors_by_paper[classes[paper]].add(classes[author])
    pairs: set[tuple[Node, Node]] = set()
    for authors in authors_by_paper.values():
        pairs.update(combinations(sorted(authors), 2))
    return pairs


_PUNCT_RE = re.compile(r"[^\w\s]")


def normalize_title(title: str) -> str:
    """Lowercase, strip punctuation, collapse whitespace."""
    return " ".join(_PUNCT_RE.sub("", title.lower()).split())


def dedup_papers(
    left_view: ReadView,
    right_view: ReadView,
    left_repo: str = "left",
    right_repo: str = "right",
) -> list[IdentityAssertion]:
    """Candidate paper sameAs assertions for cross-repo pairs with equal
    normalized titles, sorted by (left id, right id)."""
    right_by_title: dict[str, list[str]] = defaultdict(list)
    for paper in right_view.papers.values():
        right_by_title[normalize_title(paper.title)].append(paper.paper_id)
    candidates = []
    for paper in left_view.papers.values():
        for right_id in right_by_title.get(normalize_title(paper.title), ()):
            candidates.append(
                IdentityAssertion(
                    left=Node(left_repo, PAPER, paper.paper_id),
                    right=Node(right_repo, PAPER, right_id),
                    source="title-dedup",
                )
            )
    candidates.sort(key=lambda a: (a.left.local_id, a.right.local_id))
    return candidates
