"""Edge cancellation up to homotopy, filtered pages, and brute-force homology.

An invertible term is one with pure-idempotent outputs on every D side,
empty inputs on every A side, and distinct endpoints.  Cancelling the
pair (i, j) it connects rewrites every zigzag k -> j, i -> l into a
composite k -> l (D outputs multiply, A inputs concatenate) and deletes
everything incident to i or j.  Composites toggle F2-style against
existing terms.

Cancellation additionally requires that the invertible term is the ONLY
term between its endpoints.  A parallel labeled term blocks the move:
transferring through it would need an infinite series of corrections, so
such pairs are left alone and survive reduction as residual structure.

For plain complexes (no sides) reduction is filtered: edges are cancelled
in increasing order of filtration drop, the per-level generator counts
after finishing the drop-k round are recorded as pages[k], and when a
single generator survives its level is tau.  For sided structures only
filtration-preserving (drop 0) cancellations are sound, and no pages or
tau are reported.
"""

from __future__ import annotations

import hashlib
import heapq
from collections import Counter
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .algebra import is_idempotent, mul_basis
from .structures import BorderedStructure, Generator, OperationTerm, StructureError
from . import gf2

__all__ = [
    "CancellationPolicy", "ReductionResult", "ReductionError", "BruteHomology",
    "cancel_pair", "reduce", "brute_homology",
]

MAX_BRUTE_GENERATORS = 2000

# internal working term: (src, dst, outs, ins) with the payload tuples in
# OperationTerm's canonical label order


class ReductionError(ValueError):
    pass


class CancellationPolicy:
    """order: 'filtration_then_key' (default) or 'key_only'.

    seed permutes the tie-break key ordering deterministically; None means
    plain lexicographic (source, target) order.
    """

    FILTRATION_THEN_KEY = "filtration_then_key"
    KEY_ONLY = "key_only"

    __slots__ = ("order", "seed")

    def __init__(self, order: str = FILTRATION_THEN_KEY, seed: Optional[int] = None):
        if order not in (self.FILTRATION_THEN_KEY, self.KEY_ONLY):
            raise ReductionError(f"unknown cancellation order {order!r}")
        self.order = order
        self.seed = seed

    def key(self, src: str, dst: str):
        if self.seed is None:
            return (src, dst)
        h = hashlib.blake2b(f"{self.seed}|{src}|{dst}".encode(), digest_size=8)
        return (h.digest(), src, dst)


class ReductionResult:
    __slots__ = ("structure", "survivors", "pages", "tau", "trace")

    def __init__(self, structure: BorderedStructure, survivors: List[str],
                 pages: Dict[int, Dict[int, int]], tau: Optional[int],
                 trace: List[dict]):
        self.structure = structure
        self.survivors = survivors
        self.pages = pages
        self.tau = tau
        self.trace = trace

    def __repr__(self):
        return (f"ReductionResult({len(self.survivors)} survivors, "
                f"pages={sorted(self.pages)}, tau={self.tau})")


def _term_tuple(t: OperationTerm):
    return (t.src, t.dst, t.outs, t.ins)


def _is_invertible_shape(term) -> bool:
    src, dst, outs, ins = term
    if src == dst:
        return False
    for _, v in outs:
        if not is_idempotent(v):
            return False
    for _, seq in ins:
        if seq:
            return False
    return True


def _compose(u, v):
    """Composite of zigzag k -> j (u) and i -> l (v); None when a D product dies."""
    outs = []
    for (lab, a), (_, b) in zip(u[2], v[2]):
        p = mul_basis(a, b)
        if p == 0:
            return None
        outs.append((lab, p.bit_length() - 1))
    ins = tuple((lab, sa + sb) for (lab, sa), (_, sb) in zip(u[3], v[3]))
    return (u[0], v[1], tuple(outs), ins)


class _Engine:
    """Mutable working copy of a structure for repeated cancellation."""

    def __init__(self, S: BorderedStructure):
        self.sides = S.sides
        self.gens: Dict[str, Generator] = dict(S.generators)
        self.alex: Dict[str, int] = {n: g.alexander for n, g in S.generators.items()}
        self.terms: Set[tuple] = set()
        self.out_map: Dict[str, Set[tuple]] = {n: set() for n in self.gens}
        self.in_map: Dict[str, Set[tuple]] = {n: set() for n in self.gens}
        self.pair_count: Dict[Tuple[str, str], int] = {}
        for t in S.terms:
            if t.src not in self.gens or t.dst not in self.gens:
                raise ReductionError(f"term references unknown generator: {t!r}")
            self._toggle(_term_tuple(t))

    def _toggle(self, term) -> bool:
        """Add or cancel a term; True when the term is present afterward."""
        pair = (term[0], term[1])
        if term in self.terms:
            self.terms.discard(term)
            self.out_map[term[0]].discard(term)
            self.in_map[term[1]].discard(term)
            self.pair_count[pair] -= 1
            return False
        self.terms.add(term)
        self.out_map[term[0]].add(term)
        self.in_map[term[1]].add(term)
        self.pair_count[pair] = self.pair_count.get(pair, 0) + 1
        return True

    def drop(self, term) -> int:
        return self.alex[term[0]] - self.alex[term[1]]

    def parallel_free(self, term) -> bool:
        return self.pair_count.get((term[0], term[1]), 0) == 1

    def cancel(self, term, min_drop: Optional[int] = None) -> List[tuple]:
        """Cancel the pair joined by `term`; returns the toggled composites."""
        if term not in self.terms:
            raise ReductionError("term to cancel is not present")
        if not _is_invertible_shape(term):
            raise ReductionError("term to cancel is not invertible "
                                 "(labeled payload or self-loop)")
        if not self.parallel_free(term):
            raise ReductionError("cancellation blocked by a parallel term "
                                 "between the same generators")
        i, j = term[0], term[1]
        ins_j = [u for u in self.in_map[j] if u[0] != i and u[0] != j]
        outs_i = [v for v in self.out_map[i] if v[1] != i and v[1] != j]
        touched = []
        for u in ins_j:
            for v in outs_i:
                comp = _compose(u, v)
                if comp is None:
                    continue
                if min_drop is not None:
                    # created edges never drop less than the edge being
                    # cancelled while rounds run in increasing drop order
                    d = self.alex[comp[0]] - self.alex[comp[1]]
                    if d < min_drop:
                        raise AssertionError(
                            f"monotone drop violated: created {comp[0]}->{comp[1]} "
                            f"with drop {d} while cancelling drop {min_drop}")
                self._toggle(comp)
                touched.append(comp)
        for n in (i, j):
            for t in list(self.out_map[n]) + list(self.in_map[n]):
                if t in self.terms:
                    self._toggle(t)
            del self.out_map[n]
            del self.in_map[n]
            del self.gens[n]
            del self.alex[n]
        return touched

    def level_counts(self) -> Dict[int, int]:
        return dict(Counter(self.alex.values()))

    def to_structure(self) -> BorderedStructure:
        terms = [OperationTerm(s, d, o, i) for (s, d, o, i) in self.terms]
        return BorderedStructure(self.sides, list(self.gens.values()), terms)


def cancel_pair(S: BorderedStructure, term: OperationTerm) -> BorderedStructure:
    """One cancellation as a pure function; raises ReductionError when the
    term is absent, not invertible, a self-loop, or has a parallel term."""
    eng = _Engine(S)
    eng.cancel(_term_tuple(term))
    return eng.to_structure()


def reduce(S: BorderedStructure, policy: Optional[CancellationPolicy] = None
           ) -> ReductionResult:
    policy = policy or CancellationPolicy()
    eng = _Engine(S)
    sided = bool(S.sides)
    filtered = not sided and policy.order == CancellationPolicy.FILTRATION_THEN_KEY
    trace: List[dict] = []

    def heap_key(term):
        d = eng.drop(term)
        k = policy.key(term[0], term[1])
        if policy.order == CancellationPolicy.KEY_ONLY:
            return (k, term)
        return (d, k, term)

    def push(term, heap):
        if not _is_invertible_shape(term):
            return
        if sided and eng.drop(term) != 0:
            return
        heapq.heappush(heap, (heap_key(term), term))

    heap: list = []
    for t in eng.terms:
        push(t, heap)

    pages: Dict[int, Dict[int, int]] = {}
    current_round = 0

    while heap:
        _, term = heapq.heappop(heap)
        if term not in eng.terms:
            continue
        if not eng.parallel_free(term):
            continue
        d = eng.drop(term)
        if filtered:
            if d > current_round:
                # rounds current_round .. d-1 are complete
                snap = eng.level_counts()
                for k in range(current_round, d):
                    pages[k] = dict(snap)
                current_round = d
            elif d < current_round:
                raise AssertionError("drop order regressed during filtered reduction")
        created = eng.cancel(term, min_drop=d if filtered else None)
        trace.append({"cancel": [term[0], term[1]], "drop": d,
                      "created_or_toggled": len(created)})
        # terms unblocked by a parallel partner toggling away, plus all
        # newly created composites, re-enter the queue
        for comp in created:
            pair = (comp[0], comp[1])
            if eng.pair_count.get(pair, 0) == 1:
                for t in eng.out_map.get(comp[0], ()):
                    if t[1] == comp[1]:
                        push(t, heap)

    if filtered:
        snap = eng.level_counts()
        for k in range(current_round, current_round + 1):
            pages[k] = dict(snap)
    tau = None
    if filtered and len(eng.gens) == 1 and not eng.terms:
        tau = next(iter(eng.alex.values()))
    survivors = sorted(eng.gens)
    return ReductionResult(eng.to_structure(), survivors, pages, tau, trace)


class BruteHomology:
    __slots__ = ("total", "per_level")

    def __init__(self, total: int, per_level: Optional[Dict[int, int]]):
        self.total = total
        self.per_level = per_level

    def __repr__(self):
        return f"BruteHomology(total={self.total}, per_level={self.per_level})"


def brute_homology(S: BorderedStructure) -> BruteHomology:
    """F2 homology ranks of a plain complex by full matrix elimination.

    `total` ignores the filtration.  `per_level` is the blockwise count
    when every term preserves the level (e.g. an associated-graded
    complex) and None otherwise.
    """
    if S.sides:
        raise ReductionError("brute_homology needs a plain complex (no sides)")
    names = sorted(S.generators)
    if len(names) > MAX_BRUTE_GENERATORS:
        raise ReductionError(f"complex too large for brute homology "
                             f"({len(names)} > {MAX_BRUTE_GENERATORS} generators)")
    index = {n: k for k, n in enumerate(names)}
    alex = {n: g.alexander for n, g in S.generators.items()}
    rows = [0] * len(names)
    graded = True
    for t in S.terms:
        rows[index[t.src]] ^= 1 << index[t.dst]
        if alex[t.src] != alex[t.dst]:
            graded = False
    rank = gf2.rank_from_int_rows(rows, len(names))
    total = len(names) - 2 * rank
    per_level = None
    if graded:
        per_level = {}
        levels = sorted({alex[n] for n in names})
        for lv in levels:
            sub = [n for n in names if alex[n] == lv]
            sub_index = {n: k for k, n in enumerate(sub)}
            sub_rows = [0] * len(sub)
            for t in S.terms:
                if alex[t.src] == lv:
                    sub_rows[sub_index[t.src]] ^= 1 << sub_index[t.dst]
            r = gf2.rank_from_int_rows(sub_rows, len(sub))
            per_level[lv] = len(sub) - 2 * r
    return BruteHomology(total, per_level)
