"""Embedded reference (bi)modules for the three-component pattern.

- identity_aa: the type AA identity bimodule of the torus (sides "rho"
  and "sigma", both kind A);
- cfdd_y_b3: the 19-generator type DD module of the pattern complement
  (sides "rho" and "sigma", both kind D);
- cfaa_y_b3_reference: the corresponding type AA module (sides "rho" and
  "sigma", both kind A), the input the satellite pipeline consumes.

A fourth data file, cfaa_y_b3_pruned, holds the reference with its
chain-incompatible input sequences removed; prune_reference must
reproduce it term for term.

Data files live in the package's data directory; the environment variable
BORDERFLOER_FIXTURES overrides the directory (files of the same names).
"""

from __future__ import annotations

import os
from importlib import resources
from typing import Dict, Optional

from ..structures import (
    BorderedStructure, OperationTerm, load_structure, relabel_side,
)
from ..tensor import TensorPlan, box, has_forbidden_pair
from ..reduction import reduce

__all__ = ["FixtureSet", "fixtures", "load_fixture", "fixture_text",
           "derive_cfaa_y_b3", "prune_reference", "pair_free_pool",
           "check_fixtures"]

_FILES = {
    "identity_aa": "identity_aa.json",
    "cfdd_y_b3": "cfdd_y_b3.json",
    "cfaa_y_b3": "cfaa_y_b3.json",
    "cfaa_y_b3_pruned": "cfaa_y_b3_pruned.json",
}


class FixtureSet:
    __slots__ = ("identity_aa", "cfdd_y_b3", "cfaa_y_b3_reference")

    def __init__(self, identity_aa: BorderedStructure,
                 cfdd_y_b3: BorderedStructure,
                 cfaa_y_b3_reference: BorderedStructure):
        self.identity_aa = identity_aa
        self.cfdd_y_b3 = cfdd_y_b3
        self.cfaa_y_b3_reference = cfaa_y_b3_reference


def fixture_text(name: str) -> str:
    fname = _FILES[name]
    override = os.environ.get("BORDERFLOER_FIXTURES")
    if override:
        with open(os.path.join(override, fname)) as fh:
            return fh.read()
    return resources.files(__package__).joinpath("data", fname).read_text()


def load_fixture(name: str) -> BorderedStructure:
    from ..structures import loads_structure
    return loads_structure(fixture_text(name))


_cache: Dict[str, FixtureSet] = {}


def fixtures() -> FixtureSet:
    key = os.environ.get("BORDERFLOER_FIXTURES", "")
    if key not in _cache:
        _cache[key] = FixtureSet(load_fixture("identity_aa"),
                                 load_fixture("cfdd_y_b3"),
                                 load_fixture("cfaa_y_b3"))
    return _cache[key]


def derive_cfaa_y_b3() -> BorderedStructure:
    """Convert both D sides of the DD module using the identity AA
    bimodule, then cancel filtration-preserving differentials.

    The identity bimodule's "rho"-labeled side is the one the tensor
    consumes; the surviving side then takes over the consumed label.
    """
    fx = fixtures()
    ida = fx.identity_aa
    dd = fx.cfdd_y_b3

    id1 = relabel_side(ida, "sigma", "rho_out")
    inner = box(TensorPlan(id1, "rho", dd, "rho"))
    id2 = relabel_side(ida, "sigma", "sigma_out")
    outer = box(TensorPlan(id2, "rho", inner, "sigma"))
    collapsed = reduce(outer).structure
    collapsed = relabel_side(collapsed, "rho_out", "rho")
    return relabel_side(collapsed, "sigma_out", "sigma")


def prune_reference(S: BorderedStructure) -> BorderedStructure:
    """Drop terms whose input sequence on any A side contains an adjacent
    chord pair that no framed-complement output chain can produce."""
    keep = [t for t in S.terms
            if not any(has_forbidden_pair(seq) for _, seq in t.ins)]
    return BorderedStructure(S.sides, list(S.generators.values()), keep)


def pair_free_pool(S: BorderedStructure):
    """Support-closure pool restricted to framed-complement-realizable
    inputs.  The pruned module only carries operations for these, so its
    relation check must not probe outside them."""
    from ..structures import support_closure_pool
    return [p for p in support_closure_pool(S)
            if not any(has_forbidden_pair(seq) for seq in p.values())]


def check_fixtures() -> list:
    """Run every structural check over the packaged data files.

    Returns a list of failure strings; empty means all checks passed.
    Shared by the CLI `fixtures check` subcommand and the test suite.
    """
    from collections import Counter
    from ..structures import is_bounded, validate_a_infinity, validate_generic

    failures = []

    def report(name, rep):
        if not rep.ok:
            failures.extend(f"{name}: {e}" for e in rep.errors[:10])

    try:
        ida = load_fixture("identity_aa")
        dd = load_fixture("cfdd_y_b3")
        aa = load_fixture("cfaa_y_b3")
        aap = load_fixture("cfaa_y_b3_pruned")
    except Exception as e:  # noqa: BLE001 - any load failure is a finding
        return [f"fixture load failed: {e}"]

    report("identity_aa", validate_generic(ida))
    if len(ida.generators) != 6 or len(ida.terms) != 16:
        failures.append(f"identity_aa counts off: {len(ida.generators)} gens, "
                        f"{len(ida.terms)} terms")

    report("cfdd_y_b3", validate_generic(dd))
    if not is_bounded(dd):
        failures.append("cfdd_y_b3 is not bounded")
    for name, S, nterms in (("cfdd_y_b3", dd, 51), ("cfaa_y_b3", aa, 170),
                            ("cfaa_y_b3_pruned", aap, 144)):
        if len(S.generators) != 19 or len(S.terms) != nterms:
            failures.append(f"{name} counts off: {len(S.generators)} gens, "
                            f"{len(S.terms)} terms (want 19/{nterms})")
        buckets = Counter((g.idem["rho"], g.idem["sigma"])
                          for g in S.generators.values())
        if (buckets[(0, 0)], buckets[(1, 0)], buckets[(0, 1)], buckets[(1, 1)]) \
                != (7, 4, 4, 4):
            failures.append(f"{name} idempotent buckets off: {dict(buckets)}")
        levels = Counter(g.alexander for g in S.generators.values())
        if levels != {-1: 1, 0: 9, 1: 9}:
            failures.append(f"{name} filtration counts off: {dict(levels)}")

    report("cfaa_y_b3", validate_a_infinity(aa))
    report("cfaa_y_b3_pruned", validate_a_infinity(aap, pair_free_pool(aap)))

    if prune_reference(aa) != aap:
        failures.append("prune_reference(cfaa_y_b3) != cfaa_y_b3_pruned")
    return failures
