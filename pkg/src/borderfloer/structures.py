"""Unified representation for chain complexes and one- or two-sided modules.

A BorderedStructure is a set of generators and a canonical F2 set of
operation terms over a fixed tuple of boundary sides.  Each side is
labeled and has a kind:

- kind "D": every term carries exactly one output basis element for that
  side (a pure idempotent output is the coefficient-1 arrow);
- kind "A": every term carries a finite, possibly empty, composable input
  chord sequence for that side.

A structure with zero sides is a filtered chain complex; one A side is a
right module up to homotopy; one D side a left twisted complex; two sides
of mixed kinds the corresponding bimodules.  The integer `alexander`
grading on generators filters everything: terms never raise it.

Terms are stored atomically (one basis output summand per term per D
side); adding a term that is already present cancels it, so the term set
is always F2-canonical.
"""

from __future__ import annotations

import json
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from . import algebra
from .algebra import (
    el, idempotent_of_side, is_chord, is_idempotent, mul_basis,
    seq_idempotents, seq_is_composable,
)

__all__ = [
    "SideSpec", "Generator", "OperationTerm", "BorderedStructure",
    "StructureError", "StructureFormatError", "ValidationReport",
    "validate_generic", "validate_type_d", "validate_a_infinity",
    "support_closure_pool", "exhaustive_pool",
    "is_bounded", "relabel_side", "associated_graded",
    "load_structure", "loads_structure", "save_structure", "dumps_structure",
]


class StructureError(ValueError):
    """Malformed structure construction."""


class StructureFormatError(StructureError):
    """Malformed structure file."""


class SideSpec:
    """A labeled boundary side of kind 'A' or 'D'."""

    __slots__ = ("label", "kind")

    def __init__(self, label: str, kind: str):
        if kind not in ("A", "D"):
            raise StructureError(f"side kind must be 'A' or 'D', got {kind!r}")
        if not label or not isinstance(label, str):
            raise StructureError(f"side label must be a nonempty string, got {label!r}")
        self.label = label
        self.kind = kind

    def __eq__(self, other):
        return (isinstance(other, SideSpec)
                and self.label == other.label and self.kind == other.kind)

    def __hash__(self):
        return hash((self.label, self.kind))

    def __repr__(self):
        return f"SideSpec({self.label!r}, {self.kind!r})"


class Generator:
    """A named generator with one idempotent per side and a filtration level."""

    __slots__ = ("name", "idem", "alexander")

    def __init__(self, name: str, idem: Mapping[str, int], alexander: int = 0):
        self.name = name
        self.idem = dict(idem)
        self.alexander = int(alexander)

    def _key(self):
        return (self.name, tuple(sorted(self.idem.items())), self.alexander)

    def __eq__(self, other):
        return isinstance(other, Generator) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"Generator({self.name!r}, {self.idem!r}, {self.alexander})"


class OperationTerm:
    """One atomic operation row: source, target, and per-side payloads.

    outs: tuple of (label, basis index), sorted by label, one entry per
    D side.  ins: tuple of (label, chord tuple), sorted by label, one
    entry per A side.
    """

    __slots__ = ("src", "dst", "outs", "ins", "_hash")

    def __init__(self, src: str, dst: str,
                 outs: Iterable[Tuple[str, int]] = (),
                 ins: Iterable[Tuple[str, Sequence[int]]] = ()):
        self.src = src
        self.dst = dst
        self.outs = tuple(sorted((lab, int(v)) for lab, v in
                                 (outs.items() if isinstance(outs, Mapping) else outs)))
        self.ins = tuple(sorted((lab, tuple(int(c) for c in seq)) for lab, seq in
                                (ins.items() if isinstance(ins, Mapping) else ins)))
        for _, v in self.outs:
            if not (0 <= v <= 7):
                raise StructureError(f"output is not a single basis index: {v!r}")
        self._hash = hash((self.src, self.dst, self.outs, self.ins))

    @property
    def d_output(self) -> Dict[str, int]:
        return dict(self.outs)

    @property
    def a_inputs(self) -> Dict[str, Tuple[int, ...]]:
        return dict(self.ins)

    def key(self):
        return (self.src, self.dst, self.outs, self.ins)

    def __eq__(self, other):
        return isinstance(other, OperationTerm) and self.key() == other.key()

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"OperationTerm({self.src!r} -> {self.dst!r}, outs={self.outs}, ins={self.ins})"


class BorderedStructure:
    """Immutable after construction; build a new one to change anything."""

    __slots__ = ("sides", "generators", "terms")

    def __init__(self, sides: Sequence[SideSpec],
                 generators: Iterable[Generator],
                 terms: Iterable[OperationTerm]):
        self.sides = tuple(sides)
        labels = [s.label for s in self.sides]
        if len(set(labels)) != len(labels):
            raise StructureError(f"duplicate side labels: {labels}")
        self.generators: Dict[str, Generator] = {}
        for g in generators:
            if g.name in self.generators:
                raise StructureError(f"duplicate generator name: {g.name!r}")
            self.generators[g.name] = g
        d_labels = tuple(s.label for s in self.sides if s.kind == "D")
        a_labels = tuple(s.label for s in self.sides if s.kind == "A")
        term_set = set()
        for t in terms:
            t = self._normalize_term(t, d_labels, a_labels)
            if t in term_set:
                term_set.discard(t)  # F2 cancellation
            else:
                term_set.add(t)
        self.terms = frozenset(term_set)

    @staticmethod
    def _normalize_term(t: OperationTerm, d_labels, a_labels) -> OperationTerm:
        outs = dict(t.outs)
        ins = dict(t.ins)
        if set(outs) != set(d_labels):
            raise StructureError(
                f"term {t.src!r}->{t.dst!r}: outputs {sorted(outs)} do not match "
                f"D sides {sorted(d_labels)}")
        extra = set(ins) - set(a_labels)
        if extra:
            raise StructureError(
                f"term {t.src!r}->{t.dst!r}: inputs on unknown A sides {sorted(extra)}")
        for lab in a_labels:
            ins.setdefault(lab, ())
        return OperationTerm(t.src, t.dst, outs, ins)

    def side_kinds(self) -> Dict[str, str]:
        return {s.label: s.kind for s in self.sides}

    def d_labels(self) -> Tuple[str, ...]:
        return tuple(s.label for s in self.sides if s.kind == "D")

    def a_labels(self) -> Tuple[str, ...]:
        return tuple(s.label for s in self.sides if s.kind == "A")

    def terms_from(self) -> Dict[str, List[OperationTerm]]:
        out: Dict[str, List[OperationTerm]] = {name: [] for name in self.generators}
        for t in self.terms:
            out.setdefault(t.src, []).append(t)
        return out

    def __eq__(self, other):
        return (isinstance(other, BorderedStructure)
                and self.sides == other.sides
                and self.generators == other.generators
                and self.terms == other.terms)

    def __repr__(self):
        return (f"BorderedStructure(sides={[s.label + ':' + s.kind for s in self.sides]}, "
                f"{len(self.generators)} generators, {len(self.terms)} terms)")


class ValidationReport:
    __slots__ = ("errors",)

    def __init__(self, errors: Optional[List[str]] = None):
        self.errors = list(errors or [])

    @property
    def ok(self) -> bool:
        return not self.errors

    def __bool__(self):
        return self.ok

    def __repr__(self):
        if self.ok:
            return "ValidationReport(ok)"
        return f"ValidationReport({len(self.errors)} errors)"


def _shape_errors(S: BorderedStructure) -> List[str]:
    errors: List[str] = []
    kinds = S.side_kinds()
    side_labels = set(kinds)
    for name, g in S.generators.items():
        if set(g.idem) != side_labels:
            errors.append(f"generator {name!r}: idempotent labels {sorted(g.idem)} "
                          f"do not match sides {sorted(side_labels)}")
            continue
        for lab, v in g.idem.items():
            if v not in (algebra.I0, algebra.I1):
                errors.append(f"generator {name!r}: bad idempotent {v!r} on side {lab!r}")
    for t in sorted(S.terms, key=lambda t: t.key()):
        where = f"term {t.src!r}->{t.dst!r}"
        src = S.generators.get(t.src)
        dst = S.generators.get(t.dst)
        if src is None:
            errors.append(f"{where}: dangling source generator {t.src!r}")
        if dst is None:
            errors.append(f"{where}: dangling target generator {t.dst!r}")
        if src is None or dst is None:
            continue
        if src.alexander < dst.alexander:
            errors.append(f"{where}: filtration level rises "
                          f"({src.alexander} -> {dst.alexander})")
        for lab, v in t.outs:
            si = src.idem.get(lab)
            di = dst.idem.get(lab)
            if si is None or di is None:
                continue  # flagged above
            if is_idempotent(v):
                if v != si or v != di:
                    errors.append(f"{where}: idempotent output {algebra.BASIS_TOKENS[v]} "
                                  f"on side {lab!r} incompatible with generators")
            else:
                left, right = algebra.chord_idempotents(v)
                if left != si:
                    errors.append(f"{where}: output {algebra.BASIS_TOKENS[v]} on side "
                                  f"{lab!r} has left idempotent mismatching source")
                if right != di:
                    errors.append(f"{where}: output {algebra.BASIS_TOKENS[v]} on side "
                                  f"{lab!r} has right idempotent mismatching target")
        for lab, seq in t.ins:
            si = src.idem.get(lab)
            di = dst.idem.get(lab)
            if si is None or di is None:
                continue
            if not seq:
                if si != di:
                    errors.append(f"{where}: empty input on side {lab!r} but source and "
                                  f"target idempotents differ")
                continue
            if not seq_is_composable(seq):
                errors.append(f"{where}: input sequence on side {lab!r} is not composable")
                continue
            left, right = seq_idempotents(seq)
            if left != si:
                errors.append(f"{where}: input sequence on side {lab!r} has left "
                              f"idempotent mismatching source")
            if right != di:
                errors.append(f"{where}: input sequence on side {lab!r} has right "
                              f"idempotent mismatching target")
    return errors


def validate_generic(S: BorderedStructure, relations: bool = True) -> ValidationReport:
    """Shape checks, then the structure relation appropriate for the side kinds."""
    errors = _shape_errors(S)
    if errors or not relations:
        return ValidationReport(errors)
    if S.a_labels():
        return validate_a_infinity(S)
    return validate_type_d(S)


def validate_type_d(S: BorderedStructure) -> ValidationReport:
    """d-squared = 0 for structures whose sides are all of kind D.

    Covers plain complexes (zero sides): the relation degenerates to the
    boundary map squaring to zero.
    """
    if S.a_labels():
        return ValidationReport([f"validate_type_d requires all sides of kind D, "
                                 f"found A sides {list(S.a_labels())}"])
    errors = _shape_errors(S)
    if errors:
        return ValidationReport(errors)
    outgoing = S.terms_from()
    for x in S.generators:
        acc: Dict[Tuple[str, Tuple[int, ...]], int] = {}
        for t1 in outgoing[x]:
            for t2 in outgoing[t1.dst]:
                prods = []
                dead = False
                for (lab, v1), (_, v2) in zip(t1.outs, t2.outs):
                    p = mul_basis(v1, v2)
                    if p == 0:
                        dead = True
                        break
                    prods.append(p.bit_length() - 1)
                if dead:
                    continue
                key = (t2.dst, tuple(prods))
                acc[key] = acc.get(key, 0) ^ 1
        for (z, prods), parity in acc.items():
            if parity:
                pretty = ",".join(algebra.BASIS_TOKENS[p] for p in prods)
                errors.append(f"d-squared fails: {x!r} -> {z!r} with output ({pretty})")
    return ValidationReport(errors)


def support_closure_pool(S: BorderedStructure) -> List[Dict[str, Tuple[int, ...]]]:
    """Input-sequence vectors to test the structure relation against.

    Built from the sequences the structure actually uses: all per-side
    contiguous subsequences of stored input vectors, concatenations of two
    stored vectors, and single-chord extensions of stored vectors at
    either end of either side.  Every vector is per-side composable.

    Concatenations and extensions are kept only when the junction pair
    (last chord meeting first chord, per side) multiplies to zero.  A
    longer sequence is realized in pairing only through a chain of type D
    outputs, and the type D structures this engine constructs never emit
    consecutive chords with nonzero product, so a hot junction would probe
    relation instances outside the domain a pairing-truncated module
    carries.  Contiguous subsequences of stored vectors are always kept:
    a sub-window of a realizable sequence is realized by the sub-chain.
    This keeps the pool sound for modules transcribed from pairing
    computations; it is a soundness check, not completeness.
    """
    a_labels = S.a_labels()
    base = set()
    for t in S.terms:
        base.add(tuple(seq for _, seq in t.ins))
    base.add(tuple(() for _ in a_labels))
    pool = set(base)

    def contig(seq):
        subs = {()}
        n = len(seq)
        for i in range(n):
            for j in range(i + 1, n + 1):
                subs.add(seq[i:j])
        return subs

    for vec in base:
        parts = [sorted(contig(seq)) for seq in vec]
        counts = 1
        for p in parts:
            counts *= len(p)
        if counts > 4096:
            continue  # enormous vectors only arise in adversarial inputs
        stack = [()]
        for p in parts:
            stack = [pref + (s,) for pref in stack for s in p]
        pool.update(stack)
    for u in base:
        for v in base:
            if any(a and b and mul_basis(a[-1], b[0]) != 0 for a, b in zip(u, v)):
                continue
            cat = tuple(a + b for a, b in zip(u, v))
            if all(seq_is_composable(s) for s in cat):
                pool.add(cat)
    for vec in base:
        for i in range(len(a_labels)):
            seq = vec[i]
            for c in algebra.CHORDS:
                exts = []
                if not seq or mul_basis(c, seq[0]) == 0:
                    exts.append((c,) + seq)
                if seq and mul_basis(seq[-1], c) == 0:
                    exts.append(seq + (c,))
                for ext in exts:
                    if seq_is_composable(ext):
                        pool.add(vec[:i] + (ext,) + vec[i + 1:])
    return [dict(zip(a_labels, vec)) for vec in sorted(pool)]


def exhaustive_pool(S: BorderedStructure, total_length: int) -> List[Dict[str, Tuple[int, ...]]]:
    """All composable per-side input vectors of total length <= total_length."""
    a_labels = S.a_labels()

    def seqs_upto(n):
        out = [()]
        frontier = [()]
        for _ in range(n):
            nxt = []
            for seq in frontier:
                for c in algebra.CHORDS:
                    ext = seq + (c,)
                    if seq_is_composable(ext):
                        nxt.append(ext)
            out.extend(nxt)
            frontier = nxt
        return out

    single = seqs_upto(total_length)
    vecs = [()]
    for _ in a_labels:
        vecs = [v + (s,) for v in vecs for s in single
                if sum(len(x) for x in v) + len(s) <= total_length]
    return [dict(zip(a_labels, v)) for v in vecs]


def validate_a_infinity(S: BorderedStructure,
                        sequence_pool: Optional[Iterable[Mapping[str, Sequence[int]]]] = None,
                        ) -> ValidationReport:
    """Structure relation for any mix of A and D sides (at least one A side).

    For each generator x and input vector (one chord sequence per A side)
    from the pool, the F2 sum of

    - two-step compositions: a stored term consuming a per-side prefix of
      the vector followed by a stored term consuming exactly the per-side
      remainder, with D-side outputs multiplied pairwise (zero products
      dropping the contribution), and
    - collapses: a stored term consuming the vector with one adjacent
      chord pair on one side replaced by its nonzero product

    must vanish.  The algebra is unital with d = 0, so unit and
    differential terms of the relation vanish identically and are not
    enumerated.
    """
    a_labels = S.a_labels()
    if not a_labels:
        return ValidationReport(["validate_a_infinity requires at least one A side"])
    errors = _shape_errors(S)
    if errors:
        return ValidationReport(errors)
    if sequence_pool is None:
        pool = support_closure_pool(S)
    else:
        pool = [dict(p) for p in sequence_pool]

    outgoing = S.terms_from()
    exact: Dict[Tuple[str, Tuple[Tuple[int, ...], ...]], List[OperationTerm]] = {}
    for t in S.terms:
        vec = tuple(seq for _, seq in t.ins)
        exact.setdefault((t.src, vec), []).append(t)

    for x, g in S.generators.items():
        terms_x = outgoing[x]
        for seqs in pool:
            vec = tuple(seqs[lab] for lab in a_labels)
            skip = False
            for lab, seq in zip(a_labels, vec):
                if seq and algebra.chord_idempotents(seq[0])[0] != g.idem[lab]:
                    skip = True
                    break
            if skip:
                continue
            acc: Dict[Tuple[str, Tuple[Tuple[str, int], ...]], int] = {}

            for t1 in terms_x:
                pref = tuple(seq for _, seq in t1.ins)
                if any(vec[i][:len(pref[i])] != pref[i] for i in range(len(vec))):
                    continue
                rest = tuple(vec[i][len(pref[i]):] for i in range(len(vec)))
                for t2 in exact.get((t1.dst, rest), ()):
                    prods = []
                    dead = False
                    for (lab, v1), (_, v2) in zip(t1.outs, t2.outs):
                        p = mul_basis(v1, v2)
                        if p == 0:
                            dead = True
                            break
                        prods.append((lab, p.bit_length() - 1))
                    if dead:
                        continue
                    key = (t2.dst, tuple(prods))
                    acc[key] = acc.get(key, 0) ^ 1

            for i, seq in enumerate(vec):
                for pos in range(len(seq) - 1):
                    p = mul_basis(seq[pos], seq[pos + 1])
                    if p == 0:
                        continue
                    collapsed = seq[:pos] + (p.bit_length() - 1,) + seq[pos + 2:]
                    cvec = vec[:i] + (collapsed,) + vec[i + 1:]
                    for t in exact.get((x, cvec), ()):
                        key = (t.dst, t.outs)
                        acc[key] = acc.get(key, 0) ^ 1

            for (z, prods), parity in acc.items():
                if parity:
                    seq_txt = "; ".join(
                        f"{lab}:({','.join(algebra.BASIS_TOKENS[c] for c in seqs[lab])})"
                        for lab in a_labels)
                    errors.append(f"structure relation fails at {x!r} with inputs "
                                  f"[{seq_txt}] hitting {z!r} / {prods}")
                    if len(errors) > 50:
                        errors.append("... further failures suppressed")
                        return ValidationReport(errors)
    return ValidationReport(errors)


def is_bounded(S: BorderedStructure) -> bool:
    """True when iterated compositions must terminate.

    Structures with no D side are bounded by definition here.  Otherwise
    the term graph (every term is an edge, pure-idempotent outputs
    included) must be acyclic.
    """
    if not S.d_labels():
        return True
    succ: Dict[str, set] = {name: set() for name in S.generators}
    for t in S.terms:
        if t.src == t.dst:
            return False
        succ.setdefault(t.src, set()).add(t.dst)
    indeg = {name: 0 for name in succ}
    for name, outs in succ.items():
        for m in outs:
            indeg[m] = indeg.get(m, 0) + 1
    queue = [n for n, d in indeg.items() if d == 0]
    seen = 0
    while queue:
        n = queue.pop()
        seen += 1
        for m in succ.get(n, ()):
            indeg[m] -= 1
            if indeg[m] == 0:
                queue.append(m)
    return seen == len(indeg)


def relabel_side(S: BorderedStructure, old: str, new: str) -> BorderedStructure:
    """Rename one side label everywhere."""
    kinds = S.side_kinds()
    if old not in kinds:
        raise StructureError(f"no side labeled {old!r}")
    if new != old and new in kinds:
        raise StructureError(f"side label {new!r} already in use")

    def ren(lab):
        return new if lab == old else lab

    sides = [SideSpec(ren(s.label), s.kind) for s in S.sides]
    gens = [Generator(g.name, {ren(l): v for l, v in g.idem.items()}, g.alexander)
            for g in S.generators.values()]
    terms = [OperationTerm(t.src, t.dst,
                           tuple((ren(l), v) for l, v in t.outs),
                           tuple((ren(l), seq) for l, seq in t.ins))
             for t in S.terms]
    return BorderedStructure(sides, gens, terms)


def associated_graded(S: BorderedStructure) -> BorderedStructure:
    """Keep only the terms that preserve the filtration level."""
    gens = list(S.generators.values())
    alex = {g.name: g.alexander for g in gens}
    terms = [t for t in S.terms
             if t.src in alex and t.dst in alex and alex[t.src] == alex[t.dst]]
    return BorderedStructure(S.sides, gens, terms)


# --- serialization ---

def _term_to_json(t: OperationTerm) -> dict:
    row: dict = {"src": t.src, "dst": t.dst}
    if t.outs:
        row["out"] = {lab: algebra.BASIS_TOKENS[v] for lab, v in t.outs}
    ins = {lab: [algebra.BASIS_TOKENS[c] for c in seq] for lab, seq in t.ins if seq}
    if ins:
        row["in"] = ins
    return row


def dumps_structure(S: BorderedStructure) -> str:
    data = {
        "sides": [{"label": s.label, "kind": s.kind} for s in S.sides],
        "generators": [
            {"name": g.name,
             "idem": {lab: algebra.BASIS_TOKENS[v] for lab, v in sorted(g.idem.items())},
             **({"alexander": g.alexander} if g.alexander else {})}
            for g in S.generators.values()
        ],
        "terms": [_term_to_json(t) for t in sorted(S.terms, key=lambda t: t.key())],
    }
    return json.dumps(data, indent=1)


def save_structure(S: BorderedStructure, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_structure(S))
        fh.write("\n")


def _parse_out_token(tok: str, lab: str, src: Generator, dst: Generator,
                     where: str) -> List[int]:
    """Expand one output token into atomic basis indices.

    The summand '1' is the coefficient-1 arrow; it resolves to the shared
    idempotent of source and target on that side.  Sums split into one
    term per summand.
    """
    vals: List[int] = []
    for part in tok.split("+"):
        part = part.strip()
        if part == "1":
            si = src.idem.get(lab)
            di = dst.idem.get(lab)
            if si is None or di is None or si != di:
                raise StructureFormatError(
                    f"{where}: output '1' on side {lab!r} needs matching "
                    f"source/target idempotents")
            vals.append(si)
            continue
        try:
            mask = algebra.parse_element(part)
        except ValueError as e:
            raise StructureFormatError(f"{where}: {e}") from None
        if mask == 0:
            raise StructureFormatError(f"{where}: zero output on side {lab!r}")
        vals.extend(algebra.basis_elements(mask))
    return vals


def loads_structure(text: str) -> BorderedStructure:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise StructureFormatError(f"not valid JSON: {e}") from None
    if not isinstance(data, dict):
        raise StructureFormatError("top level must be an object")
    for field in ("sides", "generators", "terms"):
        if field not in data:
            raise StructureFormatError(f"missing field {field!r}")
        if not isinstance(data[field], list):
            raise StructureFormatError(f"field {field!r} must be a list")

    sides = []
    for k, s in enumerate(data["sides"]):
        if not isinstance(s, dict) or "label" not in s or "kind" not in s:
            raise StructureFormatError(f"sides[{k}] needs 'label' and 'kind'")
        try:
            sides.append(SideSpec(s["label"], s["kind"]))
        except StructureError as e:
            raise StructureFormatError(f"sides[{k}]: {e}") from None
    d_labels = {s.label for s in sides if s.kind == "D"}
    a_labels = {s.label for s in sides if s.kind == "A"}

    gens = []
    for k, g in enumerate(data["generators"]):
        if not isinstance(g, dict) or "name" not in g:
            raise StructureFormatError(f"generators[{k}] needs 'name'")
        idem_raw = g.get("idem", {})
        if not isinstance(idem_raw, dict):
            raise StructureFormatError(f"generators[{k}]: 'idem' must be an object")
        idem = {}
        for lab, tok in idem_raw.items():
            try:
                idem[lab] = algebra.parse_idempotent(tok)
            except ValueError as e:
                raise StructureFormatError(f"generators[{k}]: {e}") from None
        alex = g.get("alexander", 0)
        if not isinstance(alex, int):
            raise StructureFormatError(f"generators[{k}]: 'alexander' must be an integer")
        gens.append(Generator(g["name"], idem, alex))
    by_name = {g.name: g for g in gens}

    terms = []
    for k, row in enumerate(data["terms"]):
        where = f"terms[{k}]"
        if not isinstance(row, dict) or "src" not in row or "dst" not in row:
            raise StructureFormatError(f"{where} needs 'src' and 'dst'")
        src_name, dst_name = row["src"], row["dst"]
        if src_name not in by_name or dst_name not in by_name:
            raise StructureFormatError(
                f"{where}: dangling generator reference "
                f"{src_name if src_name not in by_name else dst_name!r}")
        src, dst = by_name[src_name], by_name[dst_name]
        out_raw = row.get("out", {})
        in_raw = row.get("in", {})
        if not isinstance(out_raw, dict) or not isinstance(in_raw, dict):
            raise StructureFormatError(f"{where}: 'out' and 'in' must be objects")
        if set(out_raw) != d_labels:
            raise StructureFormatError(
                f"{where}: 'out' labels {sorted(out_raw)} must be exactly the D sides "
                f"{sorted(d_labels)}")
        if not set(in_raw) <= a_labels:
            raise StructureFormatError(
                f"{where}: 'in' labels {sorted(in_raw)} must be among A sides "
                f"{sorted(a_labels)}")
        ins = {}
        for lab, seq in in_raw.items():
            if not isinstance(seq, list):
                raise StructureFormatError(f"{where}: 'in' values must be lists")
            try:
                ins[lab] = tuple(algebra.parse_chord(c) for c in seq)
            except ValueError as e:
                raise StructureFormatError(f"{where}: {e}") from None
        # A sum output on any side splits the row into one term per
        # combination of summands.
        out_choices = [(lab, _parse_out_token(tok, lab, src, dst, where))
                       for lab, tok in sorted(out_raw.items())]
        combos = [()]
        for lab, vals in out_choices:
            combos = [c + ((lab, v),) for c in combos for v in vals]
        for combo in combos:
            terms.append(OperationTerm(src_name, dst_name, combo, ins))

    try:
        return BorderedStructure(sides, gens, terms)
    except StructureError as e:
        raise StructureFormatError(str(e)) from None


def load_structure(path) -> BorderedStructure:
    with open(path) as fh:
        return loads_structure(fh.read())
