"""Enriques diagrams of planar curve singularities.

A diagram stores only the singular points (including infinitely near ones)
with their multiplicities, the parent of each non-root and the set of
earlier points each vertex is proximate to.  From that data we read off the
equisingularity invariants and count singularity sequences.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping


@dataclass(frozen=True)
class Vertex:
    id: str
    mult: int
    parent: str | None = None
    proximities: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "proximities", frozenset(self.proximities))


@dataclass(frozen=True)
class EnriquesDiagram:
    vertices: tuple[Vertex, ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))

    # construction / serialization
    @classmethod
    def from_mapping(cls, data: Mapping, name: str = "") -> "EnriquesDiagram":
        verts = []
        for raw in data["vertices"]:
            verts.append(Vertex(str(raw["id"]), int(raw["mult"]),
                                None if raw.get("parent") is None else str(raw["parent"]),
                                frozenset(str(p) for p in raw.get("proximities", ()))))
        return cls(tuple(verts), name or data.get("name", ""))

    @classmethod
    def from_json(cls, text: str) -> "EnriquesDiagram":
        return cls.from_mapping(json.loads(text))

    def to_mapping(self) -> dict:
        return {"vertices": [
            {"id": v.id, "mult": v.mult, "parent": v.parent, "proximities": sorted(v.proximities)}
            for v in self.vertices]}

    def to_json(self) -> str:
        return json.dumps(self.to_mapping(), sort_keys=True)

    # structure
    @property
    def by_id(self) -> dict[str, Vertex]:
        return {v.id: v for v in self.vertices}

    def roots(self) -> list[Vertex]:
        return [v for v in self.vertices if v.parent is None]

    def children(self, vid: str) -> list[Vertex]:
        return [v for v in self.vertices if v.parent == vid]

    def ancestors(self, vid: str) -> list[str]:
        """Strict ancestors, nearest first.  Assumes the parent map is acyclic."""
        table = self.by_id
        out = []
        cur = table[vid].parent
        while cur is not None:
            out.append(cur)
            cur = table[cur].parent
        return out

    def proximate_to(self, vid: str) -> list[Vertex]:
        """Vertices proximate to ``vid``."""
        return [v for v in self.vertices if vid in v.proximities]

    def is_satellite(self, v: Vertex) -> bool:
        return len(v.proximities) == 2

    def is_free(self, v: Vertex) -> bool:
        return v.parent is not None and len(v.proximities) == 1

    def disjoint_union(self, other: "EnriquesDiagram") -> "EnriquesDiagram":
        def tag(v: Vertex, t: str) -> Vertex:
            return Vertex(f"{t}{v.id}", v.mult, None if v.parent is None else f"{t}{v.parent}",
                          frozenset(f"{t}{p}" for p in v.proximities))
        return EnriquesDiagram(tuple(tag(v, "a.") for v in self.vertices)
                               + tuple(tag(v, "b.") for v in other.vertices))

    def relabeled(self, mapping: Mapping[str, str]) -> "EnriquesDiagram":
        m = dict(mapping)
        return EnriquesDiagram(tuple(
            Vertex(m[v.id], v.mult, None if v.parent is None else m[v.parent],
                   frozenset(m[p] for p in v.proximities)) for v in self.vertices), self.name)


# validation ---------------------------------------------------------------

def _structural_violations(diagram: EnriquesDiagram) -> list[str]:
    out = []
    ids = [v.id for v in diagram.vertices]
    dup = sorted(i for i, c in Counter(ids).items() if c > 1)
    if dup:
        out.append(f"duplicate vertex ids: {', '.join(dup)}")
    known = set(ids)
    for v in diagram.vertices:
        if v.parent is not None and v.parent not in known:
            out.append(f"{v.id}: unknown parent {v.parent}")
        for p in sorted(v.proximities - known):
            out.append(f"{v.id}: proximate to unknown vertex {p}")
    if out:
        return out
    table = diagram.by_id
    for v in diagram.vertices:
        seen = {v.id}
        cur = v.parent
        while cur is not None:
            if cur in seen:
                out.append(f"{v.id}: parent relation has a cycle")
                break
            seen.add(cur)
            cur = table[cur].parent
    return out


def validate(diagram: EnriquesDiagram) -> list[str]:
    """All violated axioms, each naming the offending vertices; empty when valid."""
    out = _structural_violations(diagram)
    if out:
        return out
    table = diagram.by_id
    for v in diagram.vertices:
        if v.mult < 1:
            out.append(f"{v.id}: multiplicity must be >= 1")
        anc = diagram.ancestors(v.id)
        if v.parent is None:
            if v.proximities:
                out.append(f"{v.id}: a root cannot be proximate to anything")
            if v.mult < 2:
                out.append(f"{v.id}: a root must be singular (multiplicity >= 2)")
            continue
        if v.parent not in v.proximities:
            out.append(f"{v.id}: not proximate to its parent {v.parent}")
        if len(v.proximities) > 2:
            out.append(f"{v.id}: exceeds two proximities ({', '.join(sorted(v.proximities))})")
        for p in sorted(v.proximities):
            if p not in anc:
                out.append(f"{v.id}: proximate to {p}, which does not precede it")
            elif p != v.parent and p not in table[v.parent].proximities:
                out.append(f"{v.id}: proximate to {p} but its parent {v.parent} is not")
    # on the exceptional curve of r, the strict transform of E_p meets it once
    for r in diagram.vertices:
        kids = diagram.children(r.id)
        for p in {p for k in kids for p in k.proximities if p != r.id}:
            hits = sorted(k.id for k in kids if p in k.proximities)
            if len(hits) > 1:
                out.append(f"{', '.join(hits)}: several children of {r.id} proximate to {p}")
    for p in diagram.vertices:
        excess = p.mult - sum(q.mult for q in diagram.proximate_to(p.id))
        if excess < 0:
            out.append(f"{p.id}: proximity inequality fails ({excess})")
    for v in diagram.vertices:
        if v.mult == 1 and not diagram.is_satellite(v):
            later = [w for w in diagram.vertices if v.id in diagram.ancestors(w.id)]
            if not any(diagram.is_satellite(w) for w in later):
                out.append(f"{v.id}: nonsingular free point that precedes no satellite")
    return out


def is_valid(diagram: EnriquesDiagram) -> bool:
    return not validate(diagram)


class InvalidDiagramError(ValueError):
    pass


# invariants ---------------------------------------------------------------

@dataclass(frozen=True)
class EquisingularityInvariants:
    delta: int
    mu: int
    r: int
    roots: int
    free: int
    deg: int
    dim: int
    expcod: int


def branch_excess(diagram: EnriquesDiagram, vid: str) -> int:
    """Multiplicity of ``vid`` minus the multiplicities proximate to it."""
    return diagram.by_id[vid].mult - sum(q.mult for q in diagram.proximate_to(vid))


def invariants(diagram: EnriquesDiagram) -> EquisingularityInvariants:
    problems = validate(diagram)
    if problems:
        raise InvalidDiagramError("; ".join(problems))
    vs = diagram.vertices
    delta = sum(comb(v.mult, 2) for v in vs)
    deg = sum(comb(v.mult + 1, 2) for v in vs)
    r = sum(branch_excess(diagram, v.id) for v in vs)
    roots = len(diagram.roots())
    free = sum(1 for v in vs if diagram.is_free(v))
    dim = 2 * roots + free
    return EquisingularityInvariants(delta=delta, mu=2 * delta - r + roots, r=r, roots=roots,
                                     free=free, deg=deg, dim=dim, expcod=deg - dim)


# canonical form -----------------------------------------------------------

def _subtree_code(diagram: EnriquesDiagram, vid: str, kids: Mapping[str, list[str]]):
    v = diagram.by_id[vid]
    anc = diagram.ancestors(vid)
    distances = tuple(sorted(anc.index(p) + 1 for p in v.proximities if p in anc))
    return (v.mult, distances, tuple(sorted(_subtree_code(diagram, c, kids) for c in kids[vid])))


def canonical_form(diagram: EnriquesDiagram) -> tuple:
    """Relabeling-invariant encoding.

    Each vertex becomes ``(mult, proximity distances up the ancestor chain,
    sorted child codes)``; the forest is the sorted tuple of root codes.
    """
    kids: dict[str, list[str]] = {v.id: [] for v in diagram.vertices}
    for v in diagram.vertices:
        if v.parent is not None:
            kids[v.parent].append(v.id)
    return tuple(sorted(_subtree_code(diagram, r.id, kids) for r in diagram.roots()))


def iso(d1: EnriquesDiagram, d2: EnriquesDiagram) -> bool:
    return canonical_form(d1) == canonical_form(d2)


def from_canonical(code: tuple, name: str = "") -> EnriquesDiagram:
    """Rebuild a diagram with ids ``p0, p1, ...`` (depth-first) from its code."""
    verts: list[Vertex] = []

    def build(node, chain: list[str]):
        mult, distances, kids = node
        vid = f"p{len(verts)}"
        parent = chain[-1] if chain else None
        prox = frozenset(chain[-dist] for dist in distances)
        verts.append(Vertex(vid, mult, parent, prox))
        for k in kids:
            build(k, chain + [vid])

    for root in code:
        build(root, [])
    return EnriquesDiagram(tuple(verts), name)


# built-ins ----------------------------------------------------------------

def _chain(name: str, spec: list[tuple[int, tuple[int, ...]]]) -> EnriquesDiagram:
    """A single chain ``p0 -> p1 -> ...``; ``spec`` holds (mult, indices proximate to)."""
    verts = []
    for i, (mult, prox) in enumerate(spec):
        verts.append(Vertex(f"p{i}", mult, f"p{i-1}" if i else None, frozenset(f"p{j}" for j in prox)))
    return EnriquesDiagram(tuple(verts), name)


BUILTIN_DIAGRAMS: dict[str, EnriquesDiagram] = {
    "A1": _chain("A1", [(2, ())]),
    "A2": _chain("A2", [(2, ()), (1, (0,)), (1, (1, 0))]),
    "A3": _chain("A3", [(2, ()), (2, (0,))]),
    "D4": _chain("D4", [(3, ())]),
    "D6": _chain("D6", [(3, ()), (2, (0,))]),
    "E7": _chain("E7", [(3, ()), (2, (0,)), (1, (1, 0))]),
    "X1,0": _chain("X1,0", [(4, ())]),
}
_ALIASES = {"X10": "X1,0", "X1_0": "X1,0"}


def builtin(name: str) -> EnriquesDiagram:
    key = _ALIASES.get(name, name)
    if key not in BUILTIN_DIAGRAMS:
        raise KeyError(f"no built-in diagram {name!r}; available: {', '.join(BUILTIN_DIAGRAMS)}")
    return BUILTIN_DIAGRAMS[key]


# enumeration --------------------------------------------------------------

MAX_ENUMERATION_EXPCOD = 8


def _extensions(d: EnriquesDiagram, max_mult: int) -> Iterable[EnriquesDiagram]:
    """Every way of adding one leaf that keeps the monotone axioms."""
    new_id = f"p{len(d.vertices)}"
    for par in d.vertices:
        options = [frozenset({par.id})]
        options += [frozenset({par.id, p}) for p in par.proximities]
        for prox in options:
            siblings = d.children(par.id)
            if any(p != par.id and p in s.proximities for s in siblings for p in prox):
                continue
            cap = min(max_mult, par.mult)
            for mult in range(1, cap + 1):
                if any(branch_excess(d, p) < mult for p in prox):
                    continue
                yield EnriquesDiagram(d.vertices + (Vertex(new_id, mult, par.id, prox),))


def _expcod_partial(d: EnriquesDiagram) -> int:
    return sum(comb(v.mult + 1, 2) for v in d.vertices) - 2 * len(d.roots()) - sum(
        1 for v in d.vertices if d.is_free(v))


@lru_cache(maxsize=None)
def _single_root_classes(max_expcod: int) -> tuple[tuple, ...]:
    found: set[tuple] = set()
    max_vertices = 2 * max_expcod + 1
    frontier = {}
    for m in range(2, max_expcod + 2):
        root = EnriquesDiagram((Vertex("p0", m),))
        if _expcod_partial(root) <= max_expcod:
            frontier[canonical_form(root)] = root
    while frontier:
        nxt = {}
        for code, d in frontier.items():
            if is_valid(d):
                found.add(code)
            if len(d.vertices) >= max_vertices:
                continue
            for e in _extensions(d, max_expcod + 1):
                if _expcod_partial(e) <= max_expcod:
                    c = canonical_form(e)
                    if c not in nxt:
                        nxt[c] = e
        frontier = nxt
    return tuple(sorted(found, key=lambda c: (_code_expcod(c), c)))


def _code_expcod(code: tuple) -> int:
    return invariants(from_canonical(code)).expcod


def enumerate_classes(max_expcod: int, max_roots: int = 1) -> list[EnriquesDiagram]:
    """All diagrams up to isomorphism with expcod <= ``max_expcod`` and 1..max_roots roots."""
    if max_expcod > MAX_ENUMERATION_EXPCOD:
        raise ValueError(f"enumeration bound {max_expcod} exceeds {MAX_ENUMERATION_EXPCOD}")
    if max_roots < 1 or max_expcod < 1:
        return []
    singles = [(c, _code_expcod(c)) for c in _single_root_classes(max_expcod)]
    results: set[tuple] = set()

    def grow(chosen: list[tuple], budget: int, start: int):
        if chosen:
            results.add(tuple(sorted(chosen)))
        if len(chosen) == max_roots:
            return
        for idx in range(start, len(singles)):
            root_code, cost = singles[idx]
            if cost <= budget:
                grow(chosen + [root_code[0]], budget - cost, idx)

    grow([], max_expcod, 0)
    diagrams = [from_canonical(code) for code in results]
    diagrams.sort(key=lambda d: (invariants(d).expcod, len(d.roots()), canonical_form(d)))
    return [EnriquesDiagram(d.vertices, _known_name(d)) for d in diagrams]


def _known_name(d: EnriquesDiagram) -> str:
    code = canonical_form(d)
    for name, ref in BUILTIN_DIAGRAMS.items():
        if canonical_form(ref) == code:
            return name
    return ""


# singularity sequences ----------------------------------------------------

SEQUENCE_TRANSITIONS: dict[str, dict[str, int]] = {
    "A1": {},
    "D4": {"A1": 3},
    "D6": {"D4": 1, "A1": 1},
    "E7": {"D6": 1},
}


@lru_cache(maxsize=None)
def _sequence_count(key: tuple[tuple[str, int], ...]) -> int:
    if not key:
        return 1
    state = dict(key)
    total = 0
    for name, mult in key:
        nxt = Counter(state)
        nxt[name] -= 1
        for t, c in SEQUENCE_TRANSITIONS[name].items():
            nxt[t] += c
        total += mult * _sequence_count(tuple(sorted((k, v) for k, v in nxt.items() if v)))
    return total


def sequence_count(multiset: Mapping[str, int] | str) -> int:
    """Number of ordered singularity sequences of double points for the given types."""
    if isinstance(multiset, str):
        multiset = parse_type_multiset(multiset)
    bad = sorted(set(multiset) - set(SEQUENCE_TRANSITIONS))
    if bad:
        raise ValueError(f"unsupported singularity type(s) {', '.join(bad)}; "
                         f"supported: {', '.join(SEQUENCE_TRANSITIONS)}")
    if any(c < 0 for c in multiset.values()):
        raise ValueError("negative multiplicity in type multiset")
    return _sequence_count(tuple(sorted((k, v) for k, v in multiset.items() if v)))


def parse_type_multiset(text: str) -> dict[str, int]:
    """Parse ``"D4+2A1"`` or ``"A1^3*D6"`` into a count per type."""
    from .kazarian import parse_spec
    return dict(parse_spec(text).counts)
