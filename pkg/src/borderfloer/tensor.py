"""Box tensor product pairing an A side of one structure with a D side of
another.

Generators of the product are idempotent-matched pairs x|y; filtration
levels add.  Terms arise three ways:

1. a left term consuming the nonempty sequence (a_1 .. a_k) on the paired
   side matches every chain of k right terms whose outputs on the paired
   side are exactly those chords, in order (chains never contain
   pure-idempotent steps);
2. a left term consuming the empty sequence on the paired side matches
   every right generator with the correct idempotent (the right side
   rides along unchanged);
3. a right term whose paired-side output is a pure idempotent acts
   through the unit: every left generator with that idempotent rides
   along unchanged while the right term's remaining payloads fire.

Remaining D outputs along a chain multiply in order (a zero product kills
the contribution) and remaining A inputs concatenate in order.  The
result is F2-canonical.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import R1, R2, R3, R12, R23, chord_idempotents, is_idempotent, mul_basis
from .structures import (
    BorderedStructure, Generator, OperationTerm, SideSpec, StructureError,
    is_bounded,
)

__all__ = ["TensorPlan", "TensorError", "box", "glue_filtered_complex",
           "FORBIDDEN_ADJACENT", "has_forbidden_pair"]

# Adjacent chord pairs that can never occur inside the output chain of a
# framed-complement module (in either algebra copy), so input sequences
# containing them can never pair with such a module.
FORBIDDEN_ADJACENT = frozenset({
    (R1, R2), (R1, R23), (R2, R3), (R12, R3),
})


class TensorError(StructureError):
    pass


class TensorPlan:
    """left's A side `left_side` is consumed against right's D side `right_side`."""

    __slots__ = ("left", "left_side", "right", "right_side")

    def __init__(self, left: BorderedStructure, left_side: str,
                 right: BorderedStructure, right_side: str):
        self.left = left
        self.left_side = left_side
        self.right = right
        self.right_side = right_side


def has_forbidden_pair(seq: Sequence[int]) -> bool:
    return any((a, b) in FORBIDDEN_ADJACENT for a, b in zip(seq, seq[1:]))


def box(plan: TensorPlan, prune: bool = False,
        max_chain_length: Optional[int] = None) -> BorderedStructure:
    left, right = plan.left, plan.right
    lk = left.side_kinds()
    rk = right.side_kinds()
    if lk.get(plan.left_side) != "A":
        raise TensorError(f"left structure has no A side labeled {plan.left_side!r}")
    if rk.get(plan.right_side) != "D":
        raise TensorError(f"right structure has no D side labeled {plan.right_side!r}")
    if not (is_bounded(left) or is_bounded(right)):
        raise TensorError("box tensor needs at least one bounded factor")

    l_sides = [s for s in left.sides if s.label != plan.left_side]
    r_sides = [s for s in right.sides if s.label != plan.right_side]
    overlap = {s.label for s in l_sides} & {s.label for s in r_sides}
    if overlap:
        raise TensorError(f"surviving side labels collide: {sorted(overlap)}; "
                          f"relabel one factor first")
    sides = l_sides + r_sides
    r_other_d = [s.label for s in r_sides if s.kind == "D"]
    r_other_a = [s.label for s in r_sides if s.kind == "A"]

    def pair_name(x: str, y: str) -> str:
        return f"{x}|{y}"

    gens: List[Generator] = []
    gen_names = set()
    for x in left.generators.values():
        xi = x.idem[plan.left_side]
        for y in right.generators.values():
            if y.idem[plan.right_side] != xi:
                continue
            idem = {s.label: x.idem[s.label] for s in l_sides}
            idem.update({s.label: y.idem[s.label] for s in r_sides})
            gens.append(Generator(pair_name(x.name, y.name), idem,
                                  x.alexander + y.alexander))
            gen_names.add(pair_name(x.name, y.name))

    # index right terms by (source, paired-side output chord); collect the
    # pure-idempotent-output terms separately for the unit action
    chord_steps: Dict[Tuple[str, int], List[tuple]] = {}
    unit_terms: List[tuple] = []
    for u in right.terms:
        paired_out = dict(u.outs)[plan.right_side]
        rest_outs = tuple((lab, v) for lab, v in u.outs if lab != plan.right_side)
        rest_ins = u.ins
        if is_idempotent(paired_out):
            unit_terms.append((u.src, u.dst, paired_out, rest_outs, rest_ins))
        else:
            chord_steps.setdefault((u.src, paired_out), []).append(
                (u.dst, rest_outs, rest_ins))

    right_idem = {n: g.idem[plan.right_side] for n, g in right.generators.items()}

    terms: Dict[OperationTerm, int] = {}

    def toggle(term: OperationTerm):
        terms[term] = terms.get(term, 0) ^ 1

    def emit(lsrc, ldst, lrest_outs, lrest_ins, ystart, yend, racc_outs, racc_ins):
        toggle(OperationTerm(pair_name(lsrc, ystart), pair_name(ldst, yend),
                             lrest_outs + racc_outs, lrest_ins + racc_ins))

    for t in left.terms:
        seq = dict(t.ins)[plan.left_side]
        lrest_ins = tuple((lab, s) for lab, s in t.ins if lab != plan.left_side)
        lrest_outs = t.outs
        if max_chain_length is not None and len(seq) > max_chain_length:
            continue
        if prune and has_forbidden_pair(seq):
            continue
        if not seq:
            want = left.generators[t.src].idem[plan.left_side]
            for yname, yi in right_idem.items():
                if yi != want:
                    continue
                racc_outs = tuple((lab, right.generators[yname].idem[lab])
                                  for lab in r_other_d)
                racc_ins = tuple((lab, ()) for lab in r_other_a)
                emit(t.src, t.dst, lrest_outs, lrest_ins, yname, yname,
                     racc_outs, racc_ins)
            continue
        # chains: start anywhere the first chord fires, then follow
        for (ystart, c0), steps in chord_steps.items():
            if c0 != seq[0]:
                continue
            y0 = right.generators[ystart]
            frontier = [(ystart,
                         tuple((lab, 1 << y0.idem[lab]) for lab in r_other_d),
                         tuple((lab, ()) for lab in r_other_a))]
            # masks carried while multiplying; collapse to indices at emit
            for pos, c in enumerate(seq):
                nxt = []
                for (ycur, acco, acci) in frontier:
                    for (ydst, rest_outs, rest_ins) in chord_steps.get((ycur, c), ()):
                        acco2 = []
                        dead = False
                        ro = dict(rest_outs)
                        for lab, m in acco:
                            p = 0
                            v = ro[lab]
                            # multiply accumulated mask by the step's basis output
                            if m:
                                p = _mul_mask_basis(m, v)
                            if p == 0:
                                dead = True
                                break
                            acco2.append((lab, p))
                        if dead:
                            continue
                        ri = dict(rest_ins)
                        acci2 = tuple((lab, s + ri[lab]) for lab, s in acci)
                        nxt.append((ydst, tuple(acco2), acci2))
                frontier = nxt
                if not frontier:
                    break
            for (yend, acco, acci) in frontier:
                racc_outs = tuple((lab, m.bit_length() - 1) for lab, m in acco)
                emit(t.src, t.dst, lrest_outs, lrest_ins, ystart, yend,
                     racc_outs, acci)

    left_idem = {n: g.idem[plan.left_side] for n, g in left.generators.items()}
    for (usrc, udst, uidem, rest_outs, rest_ins) in unit_terms:
        for xname, xi in left_idem.items():
            if xi != uidem:
                continue
            x = left.generators[xname]
            lrest_outs = tuple((lab, x.idem[lab]) for lab in
                               (s.label for s in l_sides if s.kind == "D"))
            lrest_ins = tuple((lab, ()) for lab in
                              (s.label for s in l_sides if s.kind == "A"))
            emit(xname, xname, lrest_outs, lrest_ins, usrc, udst,
                 rest_outs, rest_ins)

    final_terms = [t for t, parity in terms.items() if parity]
    for t in final_terms:
        if t.src not in gen_names or t.dst not in gen_names:
            raise TensorError(f"internal: emitted term on unmatched pair {t!r}")
    return BorderedStructure(sides, gens, final_terms)


def _mul_mask_basis(mask: int, basis: int) -> int:
    """mask (single-bit) times basis index, as a mask."""
    return mul_basis(mask.bit_length() - 1, basis)


def glue_filtered_complex(J_cfd: BorderedStructure, K_cfd: BorderedStructure,
                          cfaa: Optional[BorderedStructure] = None,
                          prune: bool = False) -> BorderedStructure:
    """Literal double box of the two-A-side pattern module against two
    framed-complement modules; the result is a filtered complex."""
    if cfaa is None:
        from .fixtures import fixtures
        cfaa = fixtures().cfaa_y_b3_reference
    inner = box(TensorPlan(cfaa, "rho", J_cfd, "rho"), prune=prune)
    return box(TensorPlan(inner, "sigma", K_cfd, "sigma"), prune=prune)
