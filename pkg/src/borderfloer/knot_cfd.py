"""Type D module of a framed knot complement from a knot Floer chain model.

A CFKModel records a reduced chain model of a knot: 2n+1 generators in
each of two simplified bases (xi for the vertical differential, eta for
the horizontal one), the arrow lengths of the n vertical and n horizontal
differential pairs, the knot's tau, and the mutually inverse F2 matrices
translating between the bases (xi_p = sum_q X[p][q] eta_q and
eta_p = sum_q Y[p][q] xi_q).

For framing s the module has one D side.  Its generators are the xi basis
(idempotent i0), one interior generator per step of each vertical chain
(kappa), each horizontal chain (lambda), and the unstable chain (gamma,
length r = |2 tau - s|), all with idempotent i1 and filtration level 0.

Chains, writing "a -> c -> b" for arrows labeled by output chords:

    vertical j:    xi_{2j} -r123-> kappa^j_1 -r23-> ... kappa^j_{k_j}
                   and xi_{2j-1} -r1-> kappa^j_{k_j}
    horizontal j:  eta_{2j-1} -r3-> lambda^j_1 -r23-> ...
                   lambda^j_{l_j} -r2-> eta_{2j}
    unstable, s < 2 tau:  eta_0 -r3-> gamma_1 -r23-> ... gamma_r
                          and xi_0 -r1-> gamma_r
    unstable, s = 2 tau:  xi_0 -r12-> eta_0
    unstable, s > 2 tau:  xi_0 -r123-> gamma_1 -r23-> ... gamma_r -r2-> eta_0

Arrows written against the eta basis are rewritten into the stored xi
basis: an arrow out of eta_p fires out of every xi_q with X[q][p] = 1,
and an arrow into eta_p lands on every xi_q with Y[p][q] = 1.  The first
uses a column of X because xi_q contains eta_p exactly when X[q][p] = 1;
the second expands eta_p itself.  (These differ whenever X is not a
permutation; the cross terms of the structure relation cancel through
Y X = I, which fails under any other rewrite.)

The construction asserts the structure relation after building.
"""

from __future__ import annotations

import json
from typing import List, Optional, Sequence, Tuple

from .algebra import I0, I1, R1, R2, R3, R12, R23, R123, el
from .structures import (
    BorderedStructure, Generator, OperationTerm, SideSpec, StructureError,
    ValidationReport, validate_type_d,
)

__all__ = [
    "CFKModel", "FramedComplement", "KnotModelError",
    "build_cfd", "builtin_model", "BUILTIN_MODELS",
    "validate_model", "load_model", "loads_model", "save_model",
]


class KnotModelError(ValueError):
    pass


class CFKModel:
    __slots__ = ("name", "n", "tau", "vertical_lengths", "horizontal_lengths",
                 "xi_to_eta", "eta_to_xi")

    def __init__(self, name: str, n: int, tau: int,
                 vertical_lengths: Sequence[int],
                 horizontal_lengths: Sequence[int],
                 xi_to_eta: Sequence[Sequence[int]],
                 eta_to_xi: Sequence[Sequence[int]]):
        self.name = name
        self.n = int(n)
        self.tau = int(tau)
        self.vertical_lengths = tuple(int(k) for k in vertical_lengths)
        self.horizontal_lengths = tuple(int(k) for k in horizontal_lengths)
        self.xi_to_eta = tuple(tuple(int(v) for v in row) for row in xi_to_eta)
        self.eta_to_xi = tuple(tuple(int(v) for v in row) for row in eta_to_xi)

    def _key(self):
        return (self.name, self.n, self.tau, self.vertical_lengths,
                self.horizontal_lengths, self.xi_to_eta, self.eta_to_xi)

    def __eq__(self, other):
        return isinstance(other, CFKModel) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"CFKModel({self.name!r}, n={self.n}, tau={self.tau})"


class FramedComplement:
    __slots__ = ("model", "framing", "side_label")

    def __init__(self, model: CFKModel, framing: int, side_label: str = "rho"):
        self.model = model
        self.framing = int(framing)
        self.side_label = side_label


def validate_model(model: CFKModel) -> ValidationReport:
    errors: List[str] = []
    n = model.n
    if n < 0:
        errors.append(f"n must be nonnegative, got {n}")
        return ValidationReport(errors)
    dim = 2 * n + 1
    if len(model.vertical_lengths) != n:
        errors.append(f"vertical_lengths must have n={n} entries, "
                      f"got {len(model.vertical_lengths)}")
    if len(model.horizontal_lengths) != n:
        errors.append(f"horizontal_lengths must have n={n} entries, "
                      f"got {len(model.horizontal_lengths)}")
    for which, lens in (("vertical", model.vertical_lengths),
                        ("horizontal", model.horizontal_lengths)):
        for k in lens:
            if k < 1:
                errors.append(f"{which} arrow length must be positive, got {k}")
    for which, mat in (("xi_to_eta", model.xi_to_eta),
                       ("eta_to_xi", model.eta_to_xi)):
        if len(mat) != dim or any(len(row) != dim for row in mat):
            errors.append(f"{which} must be {dim}x{dim}")
            return ValidationReport(errors)
        for row in mat:
            for v in row:
                if v not in (0, 1):
                    errors.append(f"{which} entries must be 0 or 1, got {v}")
                    return ValidationReport(errors)
    X, Y = model.xi_to_eta, model.eta_to_xi
    for a, b, label in ((X, Y, "xi_to_eta * eta_to_xi"),
                        (Y, X, "eta_to_xi * xi_to_eta")):
        for i in range(dim):
            for j in range(dim):
                s = 0
                for k in range(dim):
                    s ^= a[i][k] & b[k][j]
                if s != (1 if i == j else 0):
                    errors.append(f"{label} is not the identity at ({i},{j})")
    return ValidationReport(errors)


def build_cfd(fc: FramedComplement) -> BorderedStructure:
    model = fc.model
    rep = validate_model(model)
    if not rep.ok:
        raise KnotModelError("invalid model: " + "; ".join(rep.errors[:3]))
    lab = fc.side_label
    n = model.n
    s = fc.framing
    two_tau = 2 * model.tau
    r = abs(two_tau - s)
    X, Y = model.xi_to_eta, model.eta_to_xi

    gens: List[Generator] = []
    xi = [f"xi{p}" for p in range(2 * n + 1)]
    for name in xi:
        gens.append(Generator(name, {lab: I0}, 0))

    raw: List[Tuple[str, str, int]] = []

    def out_of_eta(p: int, chord: int, dst: str):
        for q in range(2 * n + 1):
            if X[q][p]:
                raw.append((xi[q], dst, chord))

    def into_eta(src: str, chord: int, p: int):
        for q in range(2 * n + 1):
            if Y[p][q]:
                raw.append((src, xi[q], chord))

    for j in range(1, n + 1):
        k_j = model.vertical_lengths[j - 1]
        kap = [f"kappa{j}_{i}" for i in range(1, k_j + 1)]
        for name in kap:
            gens.append(Generator(name, {lab: I1}, 0))
        raw.append((xi[2 * j], kap[0], R123))
        for a, b in zip(kap, kap[1:]):
            raw.append((a, b, R23))
        raw.append((xi[2 * j - 1], kap[-1], R1))

    for j in range(1, n + 1):
        l_j = model.horizontal_lengths[j - 1]
        lam = [f"lambda{j}_{i}" for i in range(1, l_j + 1)]
        for name in lam:
            gens.append(Generator(name, {lab: I1}, 0))
        out_of_eta(2 * j - 1, R3, lam[0])
        for a, b in zip(lam, lam[1:]):
            raw.append((a, b, R23))
        into_eta(lam[-1], R2, 2 * j)

    gam = [f"gamma{i}" for i in range(1, r + 1)]
    for name in gam:
        gens.append(Generator(name, {lab: I1}, 0))
    if s < two_tau:
        out_of_eta(0, R3, gam[0])
        for a, b in zip(gam, gam[1:]):
            raw.append((a, b, R23))
        raw.append((xi[0], gam[-1], R1))
    elif s == two_tau:
        into_eta(xi[0], R12, 0)
    else:
        raw.append((xi[0], gam[0], R123))
        for a, b in zip(gam, gam[1:]):
            raw.append((a, b, R23))
        into_eta(gam[-1], R2, 0)

    terms = [OperationTerm(src, dst, {lab: chord}, {}) for src, dst, chord in raw]
    S = BorderedStructure([SideSpec(lab, "D")], gens, terms)
    rep = validate_type_d(S)
    if not rep.ok:
        raise KnotModelError(
            "framed complement module fails its structure relation; the model "
            "is inconsistent: " + "; ".join(rep.errors[:3]))
    return S


_UNKNOT = CFKModel("unknot", 0, 0, (), (), ((1,),), ((1,),))

_TREFOIL_RH = CFKModel(
    "trefoil_rh", 1, 1, (1,), (1,),
    ((0, 0, 1), (0, 1, 0), (1, 0, 0)),
    ((0, 0, 1), (0, 1, 0), (1, 0, 0)),
)

_TREFOIL_LH = CFKModel(
    "trefoil_lh", 1, -1, (1,), (1,),
    ((0, 1, 0), (1, 0, 0), (0, 0, 1)),
    ((0, 1, 0), (1, 0, 0), (0, 0, 1)),
)

# genus-1 square-plus-dot model: xi = (e, a, b, c, d) with vertical arrows
# a -> b, c -> d; horizontal pairs (c -> a), (d -> b); eta = (e, c, a, d, b)
_FIG8_X = (
    (1, 0, 0, 0, 0),
    (0, 0, 1, 0, 0),
    (0, 0, 0, 0, 1),
    (0, 1, 0, 0, 0),
    (0, 0, 0, 1, 0),
)
_FIG8_Y = tuple(tuple(_FIG8_X[j][i] for j in range(5)) for i in range(5))

_FIGURE_EIGHT = CFKModel("figure_eight", 2, 0, (1, 1), (1, 1), _FIG8_X, _FIG8_Y)

BUILTIN_MODELS = {
    "unknot": _UNKNOT,
    "trefoil_rh": _TREFOIL_RH,
    "trefoil_lh": _TREFOIL_LH,
    "figure_eight": _FIGURE_EIGHT,
}


def builtin_model(name: str) -> CFKModel:
    try:
        return BUILTIN_MODELS[name]
    except KeyError:
        raise KnotModelError(
            f"unknown builtin model {name!r}; available: "
            f"{', '.join(sorted(BUILTIN_MODELS))}") from None


def loads_model(text: str) -> CFKModel:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise KnotModelError(f"not valid JSON: {e}") from None
    if not isinstance(data, dict):
        raise KnotModelError("model file must hold a JSON object")
    required = ("name", "n", "tau", "vertical_lengths", "horizontal_lengths",
                "xi_to_eta", "eta_to_xi")
    missing = [f for f in required if f not in data]
    if missing:
        raise KnotModelError(f"model file missing fields: {', '.join(missing)}")
    try:
        return CFKModel(data["name"], data["n"], data["tau"],
                        data["vertical_lengths"], data["horizontal_lengths"],
                        data["xi_to_eta"], data["eta_to_xi"])
    except (TypeError, ValueError) as e:
        raise KnotModelError(f"malformed model file: {e}") from None


def load_model(path) -> CFKModel:
    with open(path) as fh:
        return loads_model(fh.read())


def save_model(model: CFKModel, path) -> None:
    data = {
        "name": model.name, "n": model.n, "tau": model.tau,
        "vertical_lengths": list(model.vertical_lengths),
        "horizontal_lengths": list(model.horizontal_lengths),
        "xi_to_eta": [list(r) for r in model.xi_to_eta],
        "eta_to_xi": [list(r) for r in model.eta_to_xi],
    }
    with open(path, "w") as fh:
        json.dump(data, fh, indent=1)
        fh.write("\n")
