"""Closed-form constructors for the worked constraint sets and equations.

Every entry is exact: levels are the stated closed forms, canonical pairs are
attached where a closed form exists, and the expected uniqueness/existence
type is recorded where it is known a priori.  These entries are the ground
truth the generic oracles are tested against.

Gårding-eigenvalue variants of the universal constructions (replacing the
spectrum by the eigenvalues of a hyperbolic polynomial) are deliberately not
represented here; only the ordinary spectrum and block spectra are.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geneq import GenEq, make_ge, mirror
from .sets import (SpectralSet, dual, empty_set, full_set, intersect,
                   make_prim, negate, shift, union)

__all__ = [
    "P", "Ptilde", "Delta",
    "quasiconvex_cone", "quasisubaffine_cone",
    "constrained_laplacian", "quasi_band", "subaffine_band",
    "split_constrained", "twisted_product_universal",
    "separate_convexity", "elementary", "affine_ge", "determined",
    "subeq_as_ge", "negated_subeq_as_ge",
    "diagonal_segment", "segment_union_traceless", "hyperbola_branch",
    "polar_affinity_condition",
    "CatalogEntry", "REGISTRY", "get_entry", "list_entries",
    "catalog_subequations",
]


# ---------------------------------------------------------------------------
# elementary subequations


def P(n: int) -> SpectralSet:
    """Convex cone: all eigenvalues nonnegative."""
    return make_prim("P", n)


def Ptilde(n: int) -> SpectralSet:
    """Subaffine cone: top eigenvalue nonnegative (dual of P)."""
    return make_prim("Ptilde", n)


def Delta(n: int) -> SpectralSet:
    """Trace halfspace (self-dual)."""
    return make_prim("Delta", n)


def quasiconvex_cone(r: float, n: int) -> SpectralSet:
    """P - r*Id: Hessians of functions u with u + r|x|^2/2 convex."""
    return shift(P(n), -r)


def quasisubaffine_cone(r: float, n: int) -> SpectralSet:
    """Ptilde + r*Id = dual(P - r*Id)."""
    return shift(Ptilde(n), r)


# ---------------------------------------------------------------------------
# constrained Laplacian


def constrained_laplacian(r: float, n: int = 2) -> GenEq:
    """Harmonics with all eigenvalues confined to [-r, r].

    H = {tr A = 0, -r*Id <= A <= r*Id}; the canonical pair is
    E_min = Delta ∩ (P - r*Id) (closed, no closure needed) and
    G_max = dual(E_min), since -H = H.  Uniqueness holds, existence fails.
    """
    if r < 0:
        raise ValueError("radius must be nonnegative")
    e_min = intersect(Delta(n), quasiconvex_cone(r, n))
    g_max = dual(e_min)
    h = make_prim("laplacianBand", n, r=r)
    h.exact_plus = e_min
    h.exact_minus = negate(e_min)  # -H = H, so cl(H - P) = -E_min
    return make_ge(e_min, g_max, h_exact=h,
                   name=f"constrained-laplacian[r={r:g}, n={n}]")


# ---------------------------------------------------------------------------
# quasi-convex/quasi-concave band and its mirror


def quasi_band(r1: float, r2: float, n: int = 2) -> GenEq:
    """Functions both r1-quasiconvex and r2-quasiconcave: -r1*Id <= D2u <= r2*Id.

    With r1 = r2 = lam this is the lam-C^{1,1} equation; both uniqueness and
    existence fail as soon as the band has interior.
    """
    if -r1 > r2:
        raise ValueError("band requires -r1 <= r2")
    e = quasiconvex_cone(r1, n)
    g = quasisubaffine_cone(r2, n)  # g~ = P - r2*Id, so -g~ = {A <= r2*Id}
    h = make_prim("band", n, lo=-r1, hi=r2)
    h.exact_plus = e
    h.exact_minus = negate(quasiconvex_cone(-r2, n))  # {A <= r2*Id}
    return make_ge(e, g, h_exact=h, name=f"quasi-band[{r1:g},{r2:g}, n={n}]")


def subaffine_band(r1: float, r2: float, n: int = 2) -> GenEq:
    """Top eigenvalue >= r1 and bottom eigenvalue <= -r2.

    Parameterized so that subaffine_band(lam, lam) is the mirror of
    quasi_band(lam, lam); the sign convention absorbs the reflection.
    """
    e = quasisubaffine_cone(r1, n)   # {lam_max >= r1}
    g = quasiconvex_cone(r2, n)      # -g~ = {lam_min <= -r2}
    h = _minmax_outside_band(n, r1, r2)
    return make_ge(e, g, h_exact=h, name=f"subaffine-band[{r1:g},{r2:g}, n={n}]")


def _minmax_outside_band(n, r1, r2):
    def raw(x):
        return np.minimum(x.max(axis=-1) - r1, -r2 - x.min(axis=-1))

    def sampler(rng, size):
        z = rng.uniform(-r2 - 2.0, r1 + 2.0, size=(size, n))
        z[:, -1] = rng.uniform(r1, r1 + 2.0, size=size)
        z[:, 0] = rng.uniform(-r2 - 2.0, -r2, size=size)
        return z

    return SpectralSet(n, (n,), raw, op="prim",
                       params=("subaffineBand", (("r1", r1), ("r2", r2))),
                       name=f"subaffineBand[{r1:g},{r2:g}]",
                       kind="closed-form-catalog", on_sampler=sampler)


# ---------------------------------------------------------------------------
# split-space examples (block spectra)


def split_constrained(k: int = 1, l: int = 1) -> GenEq:
    """Traceless matrices with PSD first block and NSD second block.

    Closed-form canonical pair (first block nonneg + trace nonneg, and its
    mirror image) is attached for k = l = 1, where it is exact; for larger
    blocks the sum with the cone couples the block spectra and the generic
    oracle is the authority.
    """
    m, blocks = k + l, (k, l)
    h = make_prim("splitH", m, blocks)
    if k == 1 and l == 1:
        e_min = intersect(make_prim("blockP", m, blocks, which=0),
                          make_prim("Delta", m, blocks))
        gt_max = intersect(make_prim("blockP", m, blocks, which=1),
                           make_prim("Delta", m, blocks))
        h.exact_plus = e_min
        h.exact_minus = negate(gt_max)
        return make_ge(e_min, dual(gt_max), h_exact=h,
                       name=f"split-constrained[{k}+{l}]")
    from .geneq import canonical_pair
    cp = canonical_pair(h)
    return make_ge(cp.e_min, cp.g_max, h_exact=h,
                   name=f"split-constrained[{k}+{l}]")


def twisted_product_universal(k: int, l: int) -> GenEq:
    """Universal product-balance equation on R^k x R^l.

    H = {x in Q+, y in Q-, x1...xk = |y1...yl|}.  E = cl(H + Q+) is fibred
    over Q+ with dual product-cone fibres; G~ = cl(-H + Q+) mirrors it.
    """
    if k < 1 or l < 1 or k + l > 4:
        raise ValueError("blocks must be nonempty with k + l <= 4")
    m, blocks = k + l, (k, l)
    e = make_prim("twistedE", m, blocks)
    gt = make_prim("twistedGtilde", m, blocks)
    h = make_prim("twistedH", m, blocks)
    h.exact_plus = e
    h.exact_minus = negate(gt)
    return make_ge(e, dual(gt), h_exact=h, name=f"twisted-product[{k}+{l}]")


def twisted_fiber_level(x_block, prod_level):
    """Level of the dual product cone at level c >= 0 on the first argument.

    Membership: outside the negative orthant, or inside it with
    |product| <= c.  Vectorized over rows of x_block.
    """
    x = np.atleast_2d(np.asarray(x_block, dtype=float))
    c = np.asarray(prod_level, dtype=float)
    q = np.clip(-x, 0.0, None).prod(axis=-1)
    return c - q


def separate_convexity(k: int, l: int) -> GenEq:
    """Functions separately convex in the first block, concave in the second."""
    m, blocks = k + l, (k, l)
    e = make_prim("blockP", m, blocks, which=0)
    gt = make_prim("blockP", m, blocks, which=1)
    return make_ge(e, dual(gt), name=f"separate-convexity[{k}+{l}]")


# ---------------------------------------------------------------------------
# elementary pairs, affine equation, determined equations


def elementary(first: str, second: str, n: int = 2) -> GenEq:
    """The four pairs built from P and Ptilde ('p' or 'ptilde' each)."""
    builders = {"p": P, "ptilde": Ptilde}
    try:
        e, g = builders[first.lower()](n), builders[second.lower()](n)
    except KeyError:
        raise ValueError("elementary pair members are 'p' or 'ptilde'") from None
    ge = make_ge(e, g, name=f"elementary[{first},{second}, n={n}]")
    if (first.lower(), second.lower()) == ("p", "ptilde"):
        h = make_prim("zero", n)
        h.exact_plus = P(n)
        h.exact_minus = negate(P(n))
        ge = make_ge(e, g, h_exact=h, name=ge.name)
    return ge


def affine_ge(n: int = 2) -> GenEq:
    """H = {0}: harmonics are exactly the affine functions."""
    return elementary("p", "ptilde", n)


def determined(f: SpectralSet) -> GenEq:
    """The determined equation of a subequation: the pair (F, F)."""
    return make_ge(f, f, name=f"determined[{f.name}]")


def subeq_as_ge(e: SpectralSet) -> GenEq:
    """A subequation E itself as a generalized equation: the pair (E, EMPTY)."""
    return make_ge(e, empty_set(e.m, e.blocks), h_exact=e,
                   name=f"as-ge[{e.name}]")


def negated_subeq_as_ge(f: SpectralSet) -> GenEq:
    """-F as a generalized equation: the pair (FULL, F~)."""
    return make_ge(full_set(f.m, f.blocks), dual(f), h_exact=negate(f),
                   name=f"neg-as-ge[{f.name}]")


# ---------------------------------------------------------------------------
# closed sets for the hull construction


def diagonal_segment(n: int = 2, lo: float = -1.0, hi: float = 1.0) -> SpectralSet:
    """{t*Id : lo <= t <= hi}: a compact diagonal segment."""
    h = make_prim("segment", n, lo=lo, hi=hi)
    h.exact_plus = shift(P(n), lo)          # {A >= lo*Id}
    h.exact_minus = negate(shift(P(n), -hi))  # {A <= hi*Id}
    return h


def segment_union_traceless(n: int = 2) -> SpectralSet:
    """{tr A = 0} ∪ {t*Id : -1 <= t <= 1}."""
    h = union(make_prim("traceZero", n), make_prim("segment", n, lo=-1.0, hi=1.0))
    h.exact_plus = union(shift(P(n), -1.0), Delta(n))
    h.exact_minus = negate(h.exact_plus)  # -H = H
    return h


def hyperbola_branch() -> SpectralSet:
    """{lam1*lam2 = -1}: det = -1, mixed signs; its orthant sums fail to close."""
    h = make_prim("hyperbola", 2, c=1.0)
    h.exact_plus = Ptilde(2)          # cl(H + P) = {lam_max >= 0}
    h.exact_minus = negate(Ptilde(2))  # cl(H - P) = {lam_min <= 0}
    return h


# ---------------------------------------------------------------------------
# polar-cone affinity condition


def polar_affinity_condition(ge: GenEq, tol=None) -> bool:
    """Sufficient condition for harmonics to be affine: E ⊆ Delta ⊆ G.

    This is the polar-cone criterion specialized to the trace functional
    (the identity matrix lies in the interior of the polar cone of E).
    """
    from .config import DEFAULT
    from .sets import contains
    tol = tol or DEFAULT
    d = make_prim("Delta", ge.m, ge.blocks)
    return bool(contains(ge.e, d, tol=tol) and contains(d, ge.g, tol=tol))


# ---------------------------------------------------------------------------
# registry


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    kind: str            # 'ge' | 'set' | 'subeq'
    build: object        # callable(**params)
    defaults: dict = field(default_factory=dict)
    expected_type: str | None = None
    notes: str = ""


REGISTRY = {
    "constrained-laplacian": CatalogEntry(
        "constrained-laplacian", "ge", constrained_laplacian,
        {"r": 1.0, "n": 2}, expected_type="II",
        notes="traceless with |eigenvalues| <= r; uniqueness without existence"),
    "quasi-band": CatalogEntry(
        "quasi-band", "ge", quasi_band, {"r1": 1.0, "r2": 1.0, "n": 2},
        expected_type="IV",
        notes="-r1*Id <= D2u <= r2*Id; the C11 equation when r1 = r2"),
    "subaffine-band": CatalogEntry(
        "subaffine-band", "ge", subaffine_band, {"r1": 1.0, "r2": 1.0, "n": 2},
        expected_type="IV",
        notes="mirror of quasi-band: lam_max >= r1 and lam_min <= -r2"),
    "split-constrained": CatalogEntry(
        "split-constrained", "ge", split_constrained, {"k": 1, "l": 1},
        expected_type="II",
        notes="traceless, first block PSD, second NSD (block spectra)"),
    "twisted-product": CatalogEntry(
        "twisted-product", "ge", twisted_product_universal, {"k": 1, "l": 1},
        expected_type="II",
        notes="universal product balance prod(x) = |prod(y)| on Q+ x Q-"),
    "separate-convexity": CatalogEntry(
        "separate-convexity", "ge", separate_convexity, {"k": 1, "l": 1},
        expected_type=None,
        notes="separately convex in x, concave in y; type computed, not asserted"),
    "elementary": CatalogEntry(
        "elementary", "ge", elementary,
        {"first": "p", "second": "ptilde", "n": 2},
        notes="pairs from P and Ptilde; (p,ptilde) is the affine equation"),
    "affine": CatalogEntry(
        "affine", "ge", affine_ge, {"n": 2}, expected_type="II",
        notes="H = {0}; harmonics are affine"),
    "determined": CatalogEntry(
        "determined", "ge",
        lambda f="delta", n=2: determined(_named_subeq(f, n)),
        {"f": "delta", "n": 2}, expected_type="I",
        notes="the pair (F, F): boundary of a subequation"),
    "as-ge": CatalogEntry(
        "as-ge", "ge", lambda f="p", n=2: subeq_as_ge(_named_subeq(f, n)),
        {"f": "p", "n": 2}, expected_type="III",
        notes="a subequation itself, paired with EMPTY"),
    "neg-as-ge": CatalogEntry(
        "neg-as-ge", "ge", lambda f="p", n=2: negated_subeq_as_ge(_named_subeq(f, n)),
        {"f": "p", "n": 2}, expected_type="II",
        notes="the negative of a subequation, paired (FULL, F~)"),
    "diagonal-segment": CatalogEntry(
        "diagonal-segment", "set", diagonal_segment,
        {"n": 2, "lo": -1.0, "hi": 1.0},
        notes="closed diagonal segment; its hull is the band (type IV)"),
    "segment-union": CatalogEntry(
        "segment-union", "set", segment_union_traceless, {"n": 2},
        notes="traceless plane union diagonal segment; hull is type III"),
    "hyperbola-branch": CatalogEntry(
        "hyperbola-branch", "set", hyperbola_branch, {},
        notes="det = -1 branch: orthant sums are not closed; not a GE"),
}


def _named_subeq(name: str, n: int) -> SpectralSet:
    table = {
        "p": P, "ptilde": Ptilde, "delta": Delta,
        "quasiconvex": lambda n: quasiconvex_cone(1.0, n),
        "quasisubaffine": lambda n: quasisubaffine_cone(1.0, n),
        "cl-emin": lambda n: intersect(Delta(n), quasiconvex_cone(1.0, n)),
        "cl-gmax": lambda n: dual(intersect(Delta(n), quasiconvex_cone(1.0, n))),
        "su-emin": lambda n: union(quasiconvex_cone(1.0, n), Delta(n)),
        "su-gmax": lambda n: intersect(quasisubaffine_cone(1.0, n), Delta(n)),
    }
    if name.lower() not in table:
        raise KeyError(f"unknown subequation name {name!r}; "
                       f"options: {sorted(table)}")
    return table[name.lower()](n)


def get_entry(name: str, **params):
    """Build a catalog object by registry name and JSON-style parameters."""
    if name not in REGISTRY:
        raise KeyError(f"unknown catalog entry {name!r}")
    entry = REGISTRY[name]
    kw = dict(entry.defaults)
    kw.update(params)
    return entry.build(**kw)


def list_entries():
    return [
        {"name": e.name, "kind": e.kind, "defaults": dict(e.defaults),
         "expected_type": e.expected_type, "notes": e.notes}
        for e in REGISTRY.values()
    ]


def catalog_subequations():
    """The fixed list of 14 catalog subequations (n = 2 and 3) used by the
    duality verification suite."""
    cl = constrained_laplacian(1.0, 2)
    su_emin = union(quasiconvex_cone(1.0, 2), Delta(2))
    sc = split_constrained(1, 1)
    return [
        ("P(2)", P(2)),
        ("Ptilde(2)", Ptilde(2)),
        ("Delta(2)", Delta(2)),
        ("P(2)-Id", quasiconvex_cone(1.0, 2)),
        ("Ptilde(2)+Id", quasisubaffine_cone(1.0, 2)),
        ("laplacian-Emin(2)", cl.e),
        ("laplacian-Gmax(2)", cl.g),
        ("segment-union-Emin(2)", su_emin),
        ("segment-union-Gmax(2)", dual(su_emin)),
        ("split-Emin(1+1)", sc.e),
        ("split-Gtmax(1+1)", dual(sc.g)),
        ("P(3)", P(3)),
        ("Ptilde(3)", Ptilde(3)),
        ("Delta(3)", Delta(3)),
    ]
