"""Certificate finders that follow the structural proofs class by class.

Each finder rebuilds the proof's vertex sets on the given graph, re-checks the
numbered claims (raising :class:`ClaimViolated` with witness vertices when one
fails) and packages the resulting structure as a certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

from ..errors import (ArgumentError, ClaimViolated, NotBipartiteError, NotInClassError,
                      PreconditionMissing, ResourceError)
from ..graph import BipartiteGraph, Graph, bits_to_list, iter_bits, to_mask
from ..patterns import instantiate
from ..recognition import (contains_biclique, contains_induced, is_prime, maximal_biclique_extension,
                           one_sided_embedding)
from ..speed import bipartite_ramsey
from ..succinct import find_delta_pair
from .certificates import (BIPARTITE_CO_DEGREE, DEGREE, Cover, Delta, Layer, LowDegree, LowDegreeList,
                           Modular, Part, Peel, PrimePiece, Reduce, prime_representatives)
from .classes import ClassRef

# P7-free bipartite graphs have no chordless cycle longer than 7
P7_CHORDALITY = 7
RAMSEY_LIMIT = 5


def as_bipartite(g) -> BipartiteGraph:
    if isinstance(g, BipartiteGraph):
        return g
    if g.two_colouring() is None:
        raise NotBipartiteError("the input graph is not bipartite")
    return BipartiteGraph.from_graph(g)


def _first(mask: int, count: int = 1) -> list[int]:
    out = []
    for v in iter_bits(mask):
        if len(out) == count:
            break
        out.append(v)
    return out


def _union_rows(g: BipartiteGraph, mask: int) -> int:
    out = 0
    for v in iter_bits(mask):
        out |= g.row(v)
    return out


def _embedding_vertices(emb: dict) -> tuple[int, ...]:
    return tuple(emb[k] for k in sorted(emb))


def _forbid_pattern(g: BipartiteGraph, mask: int, name: str, claim: str, **params) -> None:
    emb = contains_induced(g.induced(mask), instantiate(name, **params))
    if emb is not None:
        raise ClaimViolated(claim, _embedding_vertices(emb), f"induced {name} inside the restricted subgraph")


def _forbid_one_sided(g: BipartiteGraph, mask: int, name: str, p: int, side: str, claim: str) -> None:
    emb = one_sided_embedding(g.induced(mask), instantiate(name, p=p), side)
    if emb is not None:
        raise ClaimViolated(claim, _embedding_vertices(emb),
                            f"one-sided {name}({p}) with its larger part in the {side} part")


def _independent(g: BipartiteGraph, left: int, right: int, claim: str) -> None:
    for v in iter_bits(left):
        hit = g.row(v) & right
        if hit:
            raise ClaimViolated(claim, (v, _first(hit)[0]), "edge between sets that must be independent")


def _parts_cover(g: BipartiteGraph, entries, of: Optional[ClassRef], claims) -> Cover:
    parts = tuple(Part(tuple(bits_to_list(m)), tag) for m, tag in entries if m)
    count: dict[int, int] = {}
    for part in parts:
        for v in part.vertices:
            count[v] = count.get(v, 0) + 1
    return Cover(parts, max(count.values(), default=0), of, tuple(claims))


def _component_cover(g: BipartiteGraph, ref: ClassRef) -> Cover:
    """Disconnected inputs: one part per component, each tagged with the class itself."""
    return _parts_cover(g, [(m, ref) for m in g.graph.components()], ref, ("components",))


def _modular(g: BipartiteGraph, ref: ClassRef, finder) -> Modular:
    pieces = []
    for reps in prime_representatives(g.graph):
        pieces.append(PrimePiece(reps, finder(g.induced(to_mask(reps)), ref)))
    return Modular(tuple(pieces), ref, ("modular",))


def _biclique_tag() -> ClassRef:
    return ClassRef.make("biclique")


# ---------------------------------------------------------------------------
# the biclique partition shared by the Q(p), M(p) and N(p) proofs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BicliquePartition:
    """Cells around a maximal biclique grown from the least K_{p^2,p^2}.

    ``*_close`` vertices have a neighbour in the opposite core and at most
    p-1 non-neighbours there; ``*_far`` vertices have a neighbour and at least
    p non-neighbours; ``*_detached`` vertices have no neighbour in it.
    """

    p: int
    top_core: int
    bottom_core: int
    top_close: int
    top_far: int
    top_detached: int
    bottom_close: int
    bottom_far: int
    bottom_detached: int

    @property
    def top_touching(self) -> int:
        return self.top_close | self.top_far

    @property
    def bottom_touching(self) -> int:
        return self.bottom_close | self.bottom_far

    def cells(self) -> dict[str, list[int]]:
        names = ("top_core", "bottom_core", "top_close", "top_far", "top_detached",
                 "bottom_close", "bottom_far", "bottom_detached")
        return {name: bits_to_list(getattr(self, name)) for name in names}

    def to_json(self) -> dict:
        return {"p": self.p, **self.cells()}


def biclique_partition(g, p: int) -> BicliquePartition:
    g = as_bipartite(g)
    if p < 1:
        raise ArgumentError("p must be positive")
    q = p * p
    seed = contains_biclique(g, q, q)
    if seed is None:
        raise PreconditionMissing(f"the graph contains no K_{{{q},{q}}}")
    top, bottom = maximal_biclique_extension(g, seed)
    a0, b0 = to_mask(top), to_mask(bottom)

    def split(side: int, core: int, other_core: int):
        close = far = detached = 0
        for v in iter_bits(side & ~core):
            row = g.row(v)
            if not row & other_core:
                detached |= 1 << v
            elif (other_core & ~row).bit_count() <= p - 1:
                close |= 1 << v
            else:
                far |= 1 << v
        return close, far, detached

    tc, tf, td = split(g.top, a0, b0)
    bc, bf, bd = split(g.bottom, b0, a0)
    return BicliquePartition(p, a0, b0, tc, tf, td, bc, bf, bd)


# ---------------------------------------------------------------------------
# bounded chordality classes
# ---------------------------------------------------------------------------

def _find_kpp_chordality(g: BipartiteGraph, ref: ClassRef):
    v = min(g.vertices, key=lambda u: (g.row(u).bit_count(), u))
    return LowDegree(v, g.row(v).bit_count(), DEGREE, ref, ())


def _find_kpp_plus_k1(g: BipartiteGraph, ref: ClassRef):
    p, k = ref.param("p"), ref.param("k")
    s = p * (2 ** (p - 1) + 1)
    if contains_biclique(g, s, s) is None:
        return Reduce(ClassRef.make("kpp-chordality", p=s, k=k), ref, ())
    v = min(g.vertices, key=lambda u: (g.bipartite_codegree(u), u))
    got = g.bipartite_codegree(v)
    if got > 2 * p - 2:
        raise ClaimViolated("lemma", (v,), f"every vertex has more than {2 * p - 2} opposite non-neighbours")
    return LowDegree(v, got, BIPARTITE_CO_DEGREE, ref, ("lemma",))


def _find_qp(g: BipartiteGraph, ref: ClassRef):
    p, k = ref.param("p"), ref.param("k")
    if contains_biclique(g, p * p, p * p) is None:
        return Reduce(ClassRef.make("kpp-chordality", p=p * p, k=k), ref, ())
    if not g.graph.is_connected():
        return _component_cover(g, ref)
    bp = biclique_partition(g, p)
    cores = ((bp.top_far, bp.bottom_core, bp.top_core), (bp.bottom_far, bp.top_core, bp.bottom_core))
    for far, other_core, own_core in cores:
        for x in iter_bits(far):
            row = g.row(x)
            witness = (x, _first(row & other_core)[0], *_first(other_core & ~row, p), *_first(own_core, p))
            raise ClaimViolated("1", witness, "a vertex with a neighbour and p non-neighbours in the core")
    for detached, close, core_of_close, core_opp in ((bp.top_detached, bp.bottom_close, bp.top_core,
                                                      bp.bottom_core),
                                                     (bp.bottom_detached, bp.top_close, bp.bottom_core,
                                                      bp.top_core)):
        for x in iter_bits(detached):
            hit = g.row(x) & close
            if not hit:
                raise ClaimViolated("2", (x,), "vertex without a neighbour in the close cells")
            y = _first(hit)[0]
            raise ClaimViolated("2", (x, y, *_first(g.row(y) & core_of_close, p), *_first(core_opp, p)))
    close = bp.top_close | bp.bottom_close
    _forbid_pattern(g, close, "Kpp+K1", "3", p=p)
    layers = []
    if close:
        layers.append(Layer(tuple(bits_to_list(close)), ClassRef.make("kpp-plus-k1", p=p, k=k)))
    layers.append(Layer(tuple(bits_to_list(bp.top_core | bp.bottom_core)), _biclique_tag()))
    return Peel(tuple(layers), p - 1, ref, ("1", "2", "3"))


def _find_l_plus_o01(g: BipartiteGraph, ref: ClassRef):
    s, p, k = ref.param("s"), ref.param("p"), ref.param("k")
    emb = contains_induced(g, instantiate("K2p+O01", p=p))
    if emb is None:
        return Reduce(ClassRef.make("kpp-plus-k1", p=max(2, p), k=k), ref, ())
    x, y = sorted((emb[p + 1], emb[p + 2]))
    for a, b in ((x, y), (y, x)):
        private = g.row(a) & ~g.row(b)
        if private.bit_count() >= s:
            raise ClaimViolated("private", (a, b, *_first(private, s)),
                                f"vertex {a} has at least {s} private neighbours")
    delta = g.row(x) ^ g.row(y)
    return Delta(x, y, tuple(bits_to_list(delta)), 2 * (s - 1), True, ref, ("private",))


def _check_sides_claim(g, bp, claim):
    """M(p) claims 3/4: far vertices have no neighbour among the touching cells opposite."""
    p = bp.p
    for far, touching, far_core, touch_core in ((bp.top_far, bp.bottom_touching, bp.bottom_core, bp.top_core),
                                                (bp.bottom_far, bp.top_touching, bp.top_core, bp.bottom_core)):
        for x in iter_bits(far):
            hit = g.row(x) & touching
            if hit:
                y = _first(hit)[0]
                yrow = g.row(y)
                witness = (x, y, *_first(far_core & ~g.row(x), p), _first(yrow & touch_core)[0],
                           _first(touch_core & ~yrow)[0])
                raise ClaimViolated(claim if far == bp.top_far else str(int(claim) + 1), witness)


def _find_mp(g: BipartiteGraph, ref: ClassRef):
    p, k = ref.param("p"), ref.param("k")
    if contains_biclique(g, p * p, p * p) is None:
        return Reduce(ClassRef.make("kpp-chordality", p=p * p, k=k), ref, ())
    if not is_prime(g):
        return _modular(g, ref, _find_mp)
    bp = biclique_partition(g, p)
    detached = bp.top_detached | bp.bottom_detached
    if detached:
        touching = bp.top_touching | bp.bottom_touching
        for x in iter_bits(detached):
            hit = g.row(x) & touching
            if hit:
                y = _first(hit)[0]
                core_y = bp.top_core if g.side(y) == 0 else bp.bottom_core
                core_x = bp.top_core if g.side(x) == 0 else bp.bottom_core
                raise ClaimViolated("2", (x, y, _first(g.row(y) & core_y)[0],
                                          _first(core_y & ~g.row(y))[0], *_first(core_x, p)))
        raise ClaimViolated("2", tuple(_first(detached)), "detached cells are cut off from the rest")
    _check_sides_claim(g, bp, "3")
    close = bp.top_close | bp.bottom_close
    _forbid_pattern(g, close, "M*", "5", p=p)
    _forbid_one_sided(g, bp.top_core | bp.bottom_touching, "M*", p, "top", "6")
    _forbid_one_sided(g, bp.bottom_core | bp.top_touching, "M*", p, "bottom", "6")
    entries = [
        (bp.top_core | bp.bottom_core, _biclique_tag()),
        (close, ClassRef.make("Mstar-free", p=p)),
        (bp.top_core | bp.bottom_touching, ClassRef.make("Mstar-one-sided", p=p, sides="top")),
        (bp.bottom_core | bp.top_touching, ClassRef.make("Mstar-one-sided", p=p, sides="bottom")),
    ]
    return _parts_cover(g, entries, ref, ("2", "3", "4", "5", "6"))


def _find_np(g: BipartiteGraph, ref: ClassRef):
    p, k = ref.param("p"), ref.param("k")
    if contains_biclique(g, p * p, p * p) is None:
        return Reduce(ClassRef.make("kpp-chordality", p=p * p, k=k), ref, ())
    if not is_prime(g):
        return _modular(g, ref, _find_np)
    bp = biclique_partition(g, p)
    top_rest = bp.top_touching | bp.top_detached
    bottom_rest = bp.bottom_touching | bp.bottom_detached
    _forbid_one_sided(g, bp.top_core | bottom_rest, "N*", p, "top", "2")
    _forbid_one_sided(g, bp.bottom_core | top_rest, "N*", p, "bottom", "2")
    # claims 3 and 4: completeness towards the far and detached cells
    for claim, touching, far_side, core_x, core_y in (
            ("3", bp.top_touching, bp.bottom_far | bp.bottom_detached, bp.bottom_core, bp.top_core),
            ("4", bp.bottom_touching, bp.top_far | bp.top_detached, bp.top_core, bp.bottom_core)):
        for x in iter_bits(touching):
            miss = far_side & ~g.row(x)
            if miss:
                y = _first(miss)[0]
                raise ClaimViolated(claim, (x, y, _first(g.row(x) & core_x)[0], _first(core_x & ~g.row(x))[0],
                                            *_first(core_y & ~g.row(y), p)))
    detached = bp.top_detached | bp.bottom_detached
    sides = []
    if detached:
        if not (bp.top_touching | bp.bottom_touching):
            raise ClaimViolated("5", tuple(_first(detached)), "detached cells are cut off from the rest")
        if bp.top_touching:
            sides.append("bottom")
        if bp.bottom_touching:
            sides.append("top")
        for side in sides:
            _forbid_one_sided(g, detached, "N*", p, side, "5")
    close = bp.top_close | bp.bottom_close
    _forbid_pattern(g, close, "N*", "6", p=p)
    joins = []
    for left, right in ((bp.top_touching, bp.bottom_far | bp.bottom_detached),
                        (bp.bottom_touching, bp.top_far | bp.top_detached)):
        if left and right:
            joins.append((left | right, _biclique_tag()))
    entries = [
        (bp.top_core | bp.bottom_core, _biclique_tag()),
        (bp.top_core | bottom_rest, ClassRef.make("Nstar-one-sided", p=p, sides="top")),
        (bp.bottom_core | top_rest, ClassRef.make("Nstar-one-sided", p=p, sides="bottom")),
        (close, ClassRef.make("Nstar-free", p=p)),
        *joins,
    ]
    if detached:
        entries.append((detached, ClassRef.make("Nstar-one-sided", p=p, sides="+".join(sorted(sides)))))
    return _parts_cover(g, entries, ref, ("2", "3", "4", "5", "6"))


def _find_a_graph(g: BipartiteGraph, ref: ClassRef):
    k = ref.param("k")
    seed = contains_biclique(g, 2, 2)
    if seed is None:
        return Reduce(ClassRef.make("kpp-chordality", p=2, k=k), ref, ())
    if not is_prime(g):
        return _modular(g, ref, _find_a_graph)
    top, bottom = maximal_biclique_extension(g, seed)
    a, b = to_mask(top), to_mask(bottom)
    c = g.top & ~a & _union_rows(g, b)
    d = g.bottom & ~b & _union_rows(g, a)
    if not c or not d:
        raise ClaimViolated("1", tuple(bits_to_list(b if not c else a)), "the biclique side is a module")
    for s, core in ((c, b), (d, a)):
        for v in iter_bits(s):
            if not core & ~g.row(v):
                raise ClaimViolated("2", (v,), "the biclique is not maximal")
    for cv in iter_bits(c):
        miss = d & ~g.row(cv)
        if miss:
            dv = _first(miss)[0]
            raise ClaimViolated("3", (_first(g.row(dv) & a)[0], _first(a & ~g.row(dv))[0],
                                      _first(g.row(cv) & b)[0], _first(b & ~g.row(cv))[0], cv, dv))
    outside = g.graph.vertex_mask & ~(a | b | c | d)
    if outside:
        raise ClaimViolated("4", tuple(_first(outside)), "vertex outside the four sets")
    for claim, pairs in (("5", ((d, a), (c, b))), ("6", ((a, d), (b, c)))):
        for s, other in pairs:
            for v in iter_bits(s):
                miss = other & ~g.row(v)
                if miss.bit_count() > 1:
                    raise ClaimViolated(claim, (v, *_first(miss, 2)), "two non-neighbours")
    entries = [
        (a | b, _biclique_tag()),
        (c | d, _biclique_tag()),
        (a | d, ClassRef.make("bc-maxdeg1")),
        (b | c, ClassRef.make("bc-maxdeg1")),
    ]
    return _parts_cover(g, entries, ref, ("1", "2", "3", "4", "5", "6"))


# ---------------------------------------------------------------------------
# P7-free classes
# ---------------------------------------------------------------------------

def _find_p7_spp(g: BipartiteGraph, ref: ClassRef):
    p = ref.param("p")
    seed = contains_biclique(g, p, p)
    if seed is None:
        return Reduce(ClassRef.make("kpp-chordality", p=p, k=P7_CHORDALITY), ref, ())
    core = to_mask(seed[0]) | to_mask(seed[1])
    around = _union_rows(g, core) & ~core
    full = g.graph.vertex_mask
    if not around:
        rest = full & ~core
        layers = [Layer(tuple(bits_to_list(core)), _biclique_tag())]
        if rest:
            layers.append(Layer(tuple(bits_to_list(rest)), ref))
        return Peel(tuple(layers), 2 * p - 1, ref, ())
    entries = []
    for u in seed[0]:
        for v in seed[1]:
            h = around & (g.row(u) | g.row(v))
            emb = contains_induced(g.induced(h), instantiate("O_bip", n=p, m=p))
            if emb is not None:
                raise ClaimViolated("1", (u, v, *_embedding_vertices(emb)), "O_{p,p} among neighbours of an edge")
            entries.append((h, ClassRef.make("P7-Opp", p=p)))
    for x in iter_bits(around):
        out = g.row(x) & ~around
        if out.bit_count() > 2 * p - 1:
            raise ClaimViolated("2", (x, *_first(out, 2 * p)), f"more than {2 * p - 1} neighbours outside the set")
    inner = _parts_cover(g.induced(around), entries, None, ("1",))
    layers = (Layer(tuple(bits_to_list(around)), inner),
              Layer(tuple(bits_to_list(full & ~around)), ref))
    return Peel(layers, 2 * p - 1, ref, ("1", "2"))


@lru_cache(maxsize=None)
def _ramsey(p: int) -> int:
    value = bipartite_ramsey(p, p, RAMSEY_LIMIT)
    if value is None:
        raise ResourceError(f"B({p},{p}) exceeds the search limit {RAMSEY_LIMIT}")
    return value


def _find_p7_kpp_o0p(g: BipartiteGraph, ref: ClassRef):
    p = ref.param("p")
    t = _ramsey(p) + p - 1
    target = dict(p=t, k=P7_CHORDALITY)
    if contains_biclique(g, t, t) is None:
        return Reduce(ClassRef.make("kpp-chordality", **target), ref, ("lemma",))
    emb = contains_induced(g, instantiate("O_bip", n=t, m=t))
    if emb is None:
        return Reduce(ClassRef.make("kpp-chordality", complemented=True, **target), ref, ("lemma",))
    raise ClaimViolated("lemma", _embedding_vertices(emb), f"both K_{{{t},{t}}} and O_{{{t},{t}}} occur")


def maximum_induced_matching(g) -> list[tuple[int, int]]:
    """A largest induced matching; the first one met in lexicographic edge order."""
    gg = g.graph if isinstance(g, BipartiteGraph) else g
    edges = gg.edges()
    best: list[tuple[int, int]] = []

    def rec(i: int, alive: int, chosen: list):
        nonlocal best
        if len(chosen) > len(best):
            best = list(chosen)
        if len(chosen) + alive.bit_count() // 2 <= len(best):
            return
        for j in range(i, len(edges)):
            u, v = edges[j]
            if alive >> u & 1 and alive >> v & 1:
                gone = gg.row(u) | gg.row(v) | (1 << u) | (1 << v)
                chosen.append((u, v))
                rec(j + 1, alive & ~gone, chosen)
                chosen.pop()
                if len(chosen) + (alive & ~(1 << u)).bit_count() // 2 <= len(best):
                    return

    rec(0, gg.vertex_mask, [])
    return best


def _oriented(g: BipartiteGraph, pairs) -> list[tuple[int, int]]:
    """Pairs rewritten as (top end, bottom end)."""
    return [(a, b) if g.top >> a & 1 else (b, a) for a, b in pairs]


def _three_matching(g: BipartiteGraph):
    emb = contains_induced(g, instantiate("3K2"))
    if emb is None:
        return None
    return _oriented(g, [(emb[1], emb[2]), (emb[3], emb[4]), (emb[5], emb[6])])


def _delta(g, x, y, bound, ref, claims) -> Delta:
    x, y = sorted((x, y))
    delta = bits_to_list(g.row(x) ^ g.row(y))
    if len(delta) > bound:
        raise ClaimViolated("lemma", (x, y, *delta), f"symmetric difference {len(delta)} exceeds {bound}")
    return Delta(x, y, tuple(delta), bound, True, ref, tuple(claims))


def _find_p7_k12_2k2(g: BipartiteGraph, ref: ClassRef):
    m = _three_matching(g)
    if m is None:
        return Reduce(ClassRef.make("P7-3K2"), ref, ())
    xs = [x for x, _ in m]
    xmask = to_mask(xs)
    used = to_mask(v for e in m for v in e)
    pair = None
    pair_vertex = None
    for v in iter_bits(g.graph.vertex_mask & ~used):
        hit = g.row(v) & xmask
        if hit.bit_count() == 1:
            x = _first(hit)[0]
            i = xs.index(x)
            rest = [e for j, e in enumerate(m) if j != i]
            raise ClaimViolated("1", (v, *m[i], *rest[0], *rest[1]), "induced K_{1,2}+2K_2")
        if hit.bit_count() == 2:
            if pair is None:
                pair, pair_vertex = hit, v
            elif hit != pair:
                raise ClaimViolated("2", (pair_vertex, v), "two different pairs of neighbours in the matching")
    chosen = bits_to_list(pair) if pair is not None else sorted(xs)[:2]
    return _delta(g, chosen[0], chosen[1], 2, ref, ("1", "2"))


def _matching_frame(g: BipartiteGraph, claim: str, exact_one: bool):
    """Maximum induced matching and the A/B/C cells of both sides."""
    m = sorted(_oriented(g, maximum_induced_matching(g)))
    s = len(m)
    xs, ys = [x for x, _ in m], [y for _, y in m]
    m1, m2 = to_mask(xs), to_mask(ys)
    cells = {}
    for side, own, opp, name in ((g.top, m1, m2, 1), (g.bottom, m2, m1, 2)):
        full = near = none = 0
        for v in iter_bits(side & ~own):
            cnt = (g.row(v) & opp).bit_count()
            if cnt == s:
                full |= 1 << v
            elif cnt == 0:
                none |= 1 << v
            elif cnt == 1 or not exact_one:
                near |= 1 << v
            else:
                hits = bits_to_list(g.row(v) & opp)
                miss = _first(opp & ~g.row(v))[0]
                mate = dict(m) if name == 2 else {y: x for x, y in m}
                raise ClaimViolated(claim, (mate[hits[0]], hits[0], v, hits[1], mate[hits[1]], miss, mate[miss]),
                                    "a vertex with some but not all, and more than one, matched neighbours")
        cells[name] = (full, near, none)
    return m, cells


def _find_p7_p5k2(g: BipartiteGraph, ref: ClassRef):
    if _three_matching(g) is None:
        return Reduce(ClassRef.make("P7-3K2"), ref, ())
    m, cells = _matching_frame(g, "observation", exact_one=True)
    s = len(m)
    (a1, b1, c1), (a2, b2, c2) = cells[1], cells[2]
    xnb = [g.row(x) & b2 for x, _ in m]   # X_i
    ynb = [g.row(y) & b1 for _, y in m]   # Y_i
    for i in range(s):
        for j in range(s):
            if i != j:
                _independent(g, xnb[i], ynb[j], "1")
    for full, near in ((a1, b2), (a2, b1)):
        for v in iter_bits(full):
            miss = near & ~g.row(v)
            if miss:
                raise ClaimViolated("2", (v, _first(miss)[0]), "non-adjacent to a vertex with one matched neighbour")
    groups = {}
    for name, none, nbs in (("R", c1, xnb), ("Q", c2, ynb)):
        split = [0] * s
        for v in iter_bits(none):
            touched = [i for i in range(s) if g.row(v) & nbs[i]]
            if len(touched) > 1:
                raise ClaimViolated("3", (v, _first(g.row(v) & nbs[touched[0]])[0],
                                          _first(g.row(v) & nbs[touched[1]])[0]))
            if touched:
                split[touched[0]] |= 1 << v
        groups[name] = split
    for full, target in ((a1, c2 & ~_unsplit(c2, groups["Q"])), (a2, c1 & ~_unsplit(c1, groups["R"]))):
        for v in iter_bits(full):
            miss = target & ~g.row(v)
            if miss:
                raise ClaimViolated("4", (v, _first(miss)[0]))
    _independent(g, c1, c2, "maximality")
    for i in range(s):
        _forbid_pattern(g, xnb[i] | c2 | ynb[i] | c1, "2K2", "maximality")
    pick = next((i for i in range(s) if xnb[i].bit_count() >= 2 and ynb[i].bit_count() >= 2), None)
    if pick is not None:
        h = g.induced(xnb[pick] | groups["Q"][pick] | ynb[pick] | groups["R"][pick])
        pair = find_delta_pair(h, 1, same_part=True)
        if pair is None:
            raise ClaimViolated("chain", tuple(h.vertices), "no same-part pair with a small difference")
        x, y = pair.x, pair.y
    else:
        tops = [x for i, (x, _) in enumerate(m) if xnb[i].bit_count() <= 1]
        bottoms = [y for i, (_, y) in enumerate(m) if ynb[i].bit_count() <= 1]
        x, y = (tops if len(tops) >= 2 else sorted(bottoms))[:2]
    return _delta(g, x, y, 4, ref, ("observation", "1", "2", "3", "4", "maximality"))


def _unsplit(none: int, split: list[int]) -> int:
    """Vertices of ``none`` that belong to no group (the R or Q set)."""
    out = none
    for m in split:
        out &= ~m
    return out


def _find_p7_c4k2(g: BipartiteGraph, ref: ClassRef):
    if _three_matching(g) is None:
        return Reduce(ClassRef.make("P7-3K2"), ref, ())
    m, cells = _matching_frame(g, "frame", exact_one=False)
    s = len(m)
    (a1, b1, c1), (a2, b2, c2) = cells[1], cells[2]
    sides = ((b1, [y for _, y in m], to_mask(y for _, y in m), b2, a2, c2),
             (b2, [x for x, _ in m], to_mask(x for x, _ in m), b1, a1, c1))
    singles = []
    for near, matched, mmask, near_opp, full_opp, none_opp in sides:
        verts = bits_to_list(near)
        for i, u in enumerate(verts):
            nu = g.row(u) & mmask
            for v in verts[i + 1:]:
                nv = g.row(v) & mmask
                if nu & nv and nu & ~nv and nv & ~nu:
                    raise ClaimViolated("1", (u, v), "crossing matched neighbourhoods")
        for i, y in enumerate(matched):
            for z in matched[i + 1:]:
                common = g.row(y) & g.row(z) & near
                if common.bit_count() > 1:
                    raise ClaimViolated("2", (y, z, *_first(common, 2)))
        only = []
        for y in matched:
            hood = g.row(y) & near
            multi = [v for v in iter_bits(hood) if (g.row(v) & mmask).bit_count() > 1]
            if len(multi) > 1:
                raise ClaimViolated("3", (y, *multi[:2]))
            only.append(to_mask(v for v in iter_bits(hood) if (g.row(v) & mmask).bit_count() == 1))
        for y, single in zip(matched, only):
            for v in iter_bits(single):
                if (g.row(v) & near_opp).bit_count() > 2:
                    raise ClaimViolated("4", (v, *_first(g.row(v) & near_opp, 3)))
                if (full_opp & ~g.row(v)).bit_count() > 1:
                    raise ClaimViolated("5", (v, *_first(full_opp & ~g.row(v), 2)))
            _forbid_pattern(g, single | none_opp, "2K2", "6")
            _forbid_pattern(g, single | none_opp, "C", "6", k=4)
        singles.append(only)
    ys = [y for _, y in m]
    big = next((i for i, y in enumerate(ys) if (g.row(y) & b1).bit_count() > 3), None)
    if big is None:
        x, y = sorted(ys)[:2]
    else:
        trio = _first(singles[0][big], 3)
        if len(trio) < 3:
            raise ClaimViolated("7", (ys[big],), "fewer than three vertices with a single matched neighbour")
        x = y = None
        for u, v in ((trio[0], trio[1]), (trio[0], trio[2]), (trio[1], trio[2])):
            if ((g.row(u) ^ g.row(v)) & c2).bit_count() <= 1:
                x, y = u, v
                break
        if x is None:
            raise ClaimViolated("7", tuple(trio), "no pair agrees on the unmatched cell")
    return _delta(g, x, y, 8, ref, ("1", "2", "3", "4", "5", "6", "7"))


def _find_chain(g: BipartiteGraph, ref: ClassRef):
    if g.n < 3:
        raise PreconditionMissing("a same-part pair needs at least three vertices")
    big = g.top if g.top.bit_count() >= g.bottom.bit_count() else g.bottom
    order = sorted(iter_bits(big), key=lambda v: (-g.row(v).bit_count(), v))
    for u, v in zip(order, order[1:]):
        if g.row(v) & ~g.row(u):
            raise ClaimViolated("inclusion", (u, v), "neighbourhoods are not nested")
    x1, x2 = order[0], order[1]
    diff = g.row(x1) & ~g.row(x2)
    if diff.bit_count() <= 1:
        return _delta(g, x1, x2, 1, ref, ("inclusion",))
    u, w = _first(diff, 2)
    return _delta(g, u, w, 1, ref, ("inclusion",))


def _find_2k2_c4(g: BipartiteGraph, ref: ClassRef):
    low, exceptions, shared = [], [], []
    for name, side in (("top", g.top), ("bottom", g.bottom)):
        high = [v for v in iter_bits(side) if g.row(v).bit_count() > 1]
        if len(high) > 1:
            raise ClaimViolated("1", tuple(high[:2]), "two vertices of degree above one in a part")
        exceptions += high
        ones = [v for v in iter_bits(side) if g.row(v).bit_count() == 1]
        hoods = {g.row(v) for v in ones}
        if len(hoods) > 1:
            raise ClaimViolated("2", tuple(ones[:2]), "degree-one vertices with different neighbours")
        if ones:
            shared.append((name, _first(g.row(ones[0]))[0]))
        low += [v for v in iter_bits(side) if g.row(v).bit_count() <= 1]
    return LowDegreeList(tuple(sorted(low)), 1, tuple(sorted(exceptions)), tuple(shared), ref, ("1", "2"))


def _layered_sets(g: BipartiteGraph, a: int, b: int) -> dict[str, int]:
    """The eight sets grown breadth-first around a maximal biclique."""
    c = _union_rows(g, b) & ~a
    d = _union_rows(g, a) & ~b
    e = _union_rows(g, d) & ~(a | c)
    f = _union_rows(g, c) & ~(b | d)
    i = _union_rows(g, f) & ~(a | c | e)
    j = _union_rows(g, e) & ~(b | d | f)
    return {"A": a, "B": b, "C": c, "D": d, "E": e, "F": f, "I": i, "J": j}


def _check_layered_cover(g: BipartiteGraph, sets: dict[str, int], claim: str) -> None:
    rest = g.graph.vertex_mask
    for m in sets.values():
        rest &= ~m
    if rest:
        raise ClaimViolated(claim, tuple(_first(rest)), "vertex outside the eight sets")


def _find_p7_domino(g: BipartiteGraph, ref: ClassRef):
    seed = contains_biclique(g, 2, 2)
    if seed is None:
        return Reduce(ClassRef.make("kpp-chordality", p=2, k=P7_CHORDALITY), ref, ())
    if not g.graph.is_connected():
        return _component_cover(g, ref)
    top, bottom = maximal_biclique_extension(g, seed)
    S = _layered_sets(g, to_mask(top), to_mask(bottom))
    A, B, C, D, E, F, I, J = (S[k] for k in "ABCDEFIJ")
    for cv in iter_bits(C):
        hit = g.row(cv) & D
        if hit:
            dv = _first(hit)[0]
            raise ClaimViolated("1", (cv, dv, _first(A & ~g.row(dv))[0], _first(A & g.row(dv))[0],
                                      _first(B & ~g.row(cv))[0], _first(B & g.row(cv))[0]))
    for claim, mask, side in (("2", A | D, "bottom"), ("3", B | C, "top")):
        emb = one_sided_embedding(g.induced(mask), instantiate("P", k=5), side)
        if emb is not None:
            raise ClaimViolated(claim, _embedding_vertices(emb), "one-sided P5 with three vertices in the core")
        for name, params in (("P", {"k": 6}), ("C", {"k": 6})):
            _forbid_pattern(g, mask, name, claim, **params)
    _independent(g, E, F, "4")
    for claim, mask in (("5", F | C), ("6", E | D), ("8", J | E), ("9", I | F)):
        _forbid_pattern(g, mask, "C", claim, k=6)
    _independent(g, I, J, "7")
    _check_layered_cover(g, S, "10")
    c6 = ClassRef.make("P7-C6")
    entries = [
        (A | B, _biclique_tag()),
        (A | D, ClassRef.make("P6C6")),
        (B | C, ClassRef.make("P6C6")),
        (C | F, c6), (D | E, c6), (E | J, c6), (F | I, c6),
    ]
    return _parts_cover(g, entries, ref, tuple(str(i) for i in range(1, 11)))


def _find_p7_k33e(g: BipartiteGraph, ref: ClassRef):
    seed = contains_biclique(g, 4, 4)
    if seed is None:
        return Reduce(ClassRef.make("kpp-chordality", p=4, k=P7_CHORDALITY), ref, ())
    if not g.graph.is_connected():
        return _component_cover(g, ref)
    top, bottom = maximal_biclique_extension(g, seed)
    S = _layered_sets(g, to_mask(top), to_mask(bottom))
    A, B, C, D, E, F, I, J = (S[k] for k in "ABCDEFIJ")
    _check_layered_cover(g, S, "domino-10")
    _independent(g, I, J, "domino-7")
    core = A | B
    for x in iter_bits(g.graph.vertex_mask & ~core):
        hit = g.row(x) & core
        if hit.bit_count() > 1:
            raise ClaimViolated("1", (x, *_first(hit, 2)), "two neighbours in the biclique")
    for claim, mask in (("2", C | D | F | J), ("3", E | F | J), ("2", D | C | E | I), ("3", F | E | I)):
        _forbid_pattern(g, mask, "domino", claim)
    dom = ClassRef.make("P7-domino")
    entries = [
        (A | B, _biclique_tag()),
        (A | D, dom), (B | C, dom),
        (C | D | F | J, dom), (E | F | J, dom), (D | C | E | I, dom), (F | E | I, dom),
    ]
    return _parts_cover(g, entries, ref, ("domino-7", "domino-10", "1", "2", "3"))


FINDERS: dict[str, Callable] = {
    "kpp-chordality": _find_kpp_chordality,
    "kpp-plus-k1": _find_kpp_plus_k1,
    "Qp": _find_qp,
    "L-plus-O01": _find_l_plus_o01,
    "Mp": _find_mp,
    "Np": _find_np,
    "A-graph": _find_a_graph,
    "P7-Spp": _find_p7_spp,
    "P7-KppO0p": _find_p7_kpp_o0p,
    "P7-K12-2K2": _find_p7_k12_2k2,
    "P7-P5K2": _find_p7_p5k2,
    "P7-C4K2": _find_p7_c4k2,
    "P7-domino": _find_p7_domino,
    "P7-K33e": _find_p7_k33e,
    "chain": _find_chain,
    "2k2-c4-structure": _find_2k2_c4,
}


def find_certificate(g, class_id: str, params: dict | None = None, *, check_membership: bool = True, **kw):
    """Structural certificate for ``g`` in ``class_id``.

    Membership is checked first unless ``check_membership`` is False; an
    out-of-class input then typically surfaces as :class:`ClaimViolated`.
    """
    ref = ClassRef.make(class_id, **{**(params or {}), **kw})
    finder = FINDERS.get(class_id)
    if finder is None:
        raise PreconditionMissing(f"no certificate construction for class {class_id}")
    g = as_bipartite(g)
    if g.n == 0:
        raise ArgumentError("the graph has no vertices")
    if check_membership:
        bad = ref.violation(g)
        if bad is not None:
            reason, verts = bad
            raise NotInClassError(f"graph is not in {ref}: {reason} {list(verts)}".rstrip(), residual=verts)
    return finder(g, ref)
