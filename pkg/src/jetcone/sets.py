"""Eigenvalue-level cone calculus for pure second-order constraint sets.

Every set here lives in R^m as a closed region {g >= 0} for a continuous,
vectorized level function g.  Sets are block-permutation symmetric: g only
ever sees block-sorted vectors, which makes the symmetry structural.  A set
with blocks == (m,) realizes an O(n)-invariant matrix set through the full
spectrum; blocks == (k, l) realizes a split-invariant set through the two
diagonal block spectra.

Levels are *graph normalized*: for monotone sets we arrange
``g(x + t*ones) = g(x) + t`` whenever possible (``diag_additive``), so the
level value is the signed diagonal distance to the boundary and the boundary
graph t*(mu) = min{t : mu + t*Id in F} is just -g(spectrum(mu)).

The Dirichlet dual is g~(x) = -g(-x) (with a block re-sort), positivity is
the statement that g is nondecreasing along the positive orthant, and the
sum-with-orthant closures cl(H + P), cl(H - P) are computed by maximizing
the diagonal slack min_i(x_i - y_i) over y in H.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, Tolerances
from .symmat import SymMat, block_spectrum

__all__ = [
    "JetconeError",
    "DimensionMismatch",
    "BracketOverflow",
    "SignedVerdict",
    "SpectralSet",
    "make_prim",
    "empty_set",
    "full_set",
    "intersect",
    "union",
    "shift",
    "negate",
    "dual",
    "member",
    "boundary_offset",
    "boundary_offsets",
    "direction_vectors",
    "direction_matrices",
    "contains",
    "Containment",
    "add_P",
    "sub_P",
    "PRIMS",
]


class JetconeError(Exception):
    pass


class DimensionMismatch(JetconeError):
    pass


class BracketOverflow(JetconeError):
    """No sign change found within the bracket limit: the set is EMPTY or FULL."""


# ---------------------------------------------------------------------------
# membership verdicts


@dataclass(frozen=True)
class SignedVerdict:
    cls: str  # 'inside' | 'boundary' | 'outside'
    margin: float

    @property
    def is_in(self) -> bool:
        return self.cls != "outside"

    @property
    def inside(self) -> bool:
        return self.cls == "inside"

    @property
    def outside(self) -> bool:
        return self.cls == "outside"


def _classify(margin: float, tau: float) -> str:
    if margin > tau:
        return "inside"
    if margin < -tau:
        return "outside"
    return "boundary"


# ---------------------------------------------------------------------------
# block sorting


def blocksort(x, blocks):
    """Sort each block ascending along the last axis."""
    x = np.asarray(x, dtype=float)
    if len(blocks) == 1:
        return np.sort(x, axis=-1)
    out = np.empty_like(x)
    i = 0
    for b in blocks:
        out[..., i:i + b] = np.sort(x[..., i:i + b], axis=-1)
        i += b
    return out


# ---------------------------------------------------------------------------
# the set class


class SpectralSet:
    """Closed block-invariant subset of R^m given by a level function.

    Parameters are normally supplied by the prim registry or the combinators
    below; construct through those.  ``monotone`` asserts positivity (the set
    plus the nonnegative orthant stays inside), i.e. the set is a subequation
    at the vector level.
    """

    def __init__(self, m, blocks, raw, *, op, params=(), children=(),
                 monotone=False, diag_additive=False, kind="combinator",
                 name=None, sentinel=None, on_sampler=None,
                 oracle_resolution=0.0):
        self.m = int(m)
        self.blocks = tuple(int(b) for b in blocks)
        if sum(self.blocks) != self.m:
            raise ValueError("blocks must sum to m")
        self._raw = raw
        self.op = op
        self.params = tuple(params)
        self.children = tuple(children)
        self.monotone = bool(monotone)
        self.diag_additive = bool(diag_additive)
        self.kind = kind
        self.name = name or op
        self.sentinel = sentinel  # None | 'empty' | 'full'
        self.on_sampler = on_sampler
        self.oracle_resolution = float(oracle_resolution)

    # -- evaluation ---------------------------------------------------------

    def level(self, x) -> np.ndarray:
        """Level value at x (any shape (..., m)); block-sorts first."""
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.m:
            raise DimensionMismatch(
                f"point dimension {x.shape[-1]} != set dimension {self.m}")
        return self._raw(blocksort(x, self.blocks))

    def level_raw(self, x) -> np.ndarray:
        """Level at an already block-sorted x."""
        return self._raw(np.asarray(x, dtype=float))

    def spectrum(self, a: SymMat) -> np.ndarray:
        if a.n != self.m:
            raise DimensionMismatch(f"matrix n={a.n} vs set m={self.m}")
        if len(self.blocks) == 1:
            return a.eigs
        return block_spectrum(a, self.blocks[0], self.blocks[1])

    def sample_on(self, rng, size):
        """Points on the set, shape (size, m); None if no sampler is known."""
        if self.on_sampler is None:
            return None
        return self.on_sampler(rng, size)

    def __repr__(self):
        return f"<SpectralSet {self.name} m={self.m} blocks={self.blocks}>"


# ---------------------------------------------------------------------------
# primitive registry
#
# Each entry: factory(m, blocks, **params) -> dict of SpectralSet kwargs
# (minus m/blocks/op/params).  Levels take block-sorted input.

PRIMS = {}


def _register(name, dual_name=None):
    def deco(fn):
        PRIMS[name] = {"factory": fn, "dual": dual_name}
        return fn
    return deco


def make_prim(name, m, blocks=None, **params) -> SpectralSet:
    if name not in PRIMS:
        raise KeyError(f"unknown primitive {name!r}")
    blocks = tuple(blocks) if blocks is not None else (m,)
    kw = PRIMS[name]["factory"](m, blocks, **params)
    kw.setdefault("kind", "closed-form-catalog")
    return SpectralSet(m, blocks, kw.pop("raw"), op="prim",
                       params=(name, tuple(sorted(params.items()))),
                       name=kw.pop("name", name), **kw)


@_register("P", dual_name="Ptilde")
def _prim_p(m, blocks):
    return {"raw": lambda x: x.min(axis=-1), "monotone": True,
            "diag_additive": True,
            "on_sampler": _boundary_of_orthant_sampler(m, +1)}


@_register("Ptilde", dual_name="P")
def _prim_ptilde(m, blocks):
    return {"raw": lambda x: x.max(axis=-1), "monotone": True,
            "diag_additive": True}


@_register("Delta", dual_name="Delta")
def _prim_delta(m, blocks):
    # trace halfspace, graph normalized: mean instead of sum
    return {"raw": lambda x: x.mean(axis=-1), "monotone": True,
            "diag_additive": True}


def _block_slice(blocks, which):
    start = sum(blocks[:which])
    return slice(start, start + blocks[which])


@_register("blockP", dual_name="blockPtilde")
def _prim_blockp(m, blocks, which=0):
    sl = _block_slice(blocks, which)
    return {"raw": lambda x: x[..., sl].min(axis=-1), "monotone": True,
            "diag_additive": True, "name": f"blockP[{which}]"}


@_register("blockPtilde", dual_name="blockP")
def _prim_blockptilde(m, blocks, which=0):
    sl = _block_slice(blocks, which)
    return {"raw": lambda x: x[..., sl].max(axis=-1), "monotone": True,
            "diag_additive": True, "name": f"blockPtilde[{which}]"}


@_register("EMPTY", dual_name="FULL")
def _prim_empty(m, blocks):
    return {"raw": lambda x: np.broadcast_to(-1.0, x.shape[:-1]).copy(),
            "monotone": True, "sentinel": "empty"}


@_register("FULL", dual_name="EMPTY")
def _prim_full(m, blocks):
    return {"raw": lambda x: np.broadcast_to(1.0, x.shape[:-1]).copy(),
            "monotone": True, "sentinel": "full"}


# -- product (twisted) sets: x block in Q+, y block in Q-, product coupling


def _pos_prod(x, sl):
    return np.clip(x[..., sl], 0.0, None).prod(axis=-1)


def _neg_prod(x, sl):
    return np.clip(-x[..., sl], 0.0, None).prod(axis=-1)


@_register("twistedE")
def _prim_twisted_e(m, blocks):
    # cl(H + Q+): fibred over Q+ in the first block, each fibre the dual
    # product set at level prod(x).
    slx, sly = _block_slice(blocks, 0), _block_slice(blocks, 1)

    def raw(x):
        return np.minimum(x[..., slx].min(axis=-1),
                          _pos_prod(x, slx) - _neg_prod(x, sly))
    return {"raw": raw, "monotone": True}


@_register("twistedGtilde")
def _prim_twisted_gt(m, blocks):
    # cl(-H + Q+): same with the roles of the blocks exchanged.
    slx, sly = _block_slice(blocks, 0), _block_slice(blocks, 1)

    def raw(x):
        return np.minimum(x[..., sly].min(axis=-1),
                          _pos_prod(x, sly) - _neg_prod(x, slx))
    return {"raw": raw, "monotone": True}


@_register("twistedH")
def _prim_twisted_h(m, blocks):
    slx, sly = _block_slice(blocks, 0), _block_slice(blocks, 1)

    def raw(x):
        return np.minimum(
            np.minimum(x[..., slx].min(axis=-1), -x[..., sly].max(axis=-1)),
            -np.abs(_pos_prod(x, slx) - _neg_prod(x, sly)))

    def sampler(rng, size):
        k, l = blocks
        xs = rng.uniform(0.05, 2.0, size=(size, k))
        yhat = -rng.uniform(0.05, 2.0, size=(size, l))
        px = xs.prod(axis=1)
        qy = np.abs(yhat).prod(axis=1)
        ys = yhat * (px / qy)[:, None] ** (1.0 / l)
        return np.concatenate([xs, ys], axis=1)

    return {"raw": raw, "on_sampler": sampler}


# -- non-monotone closed sets used by the examples


@_register("segment")
def _prim_segment(m, blocks, lo=-1.0, hi=1.0):
    def raw(x):
        return -np.maximum.reduce([
            x.max(axis=-1) - x.min(axis=-1),
            x.max(axis=-1) - hi,
            lo - x.min(axis=-1),
        ])

    def sampler(rng, size):
        t = rng.uniform(lo, hi, size=size)
        return np.repeat(t[:, None], m, axis=1)

    return {"raw": raw, "on_sampler": sampler, "name": f"segment[{lo},{hi}]"}


@_register("traceZero")
def _prim_trace_zero(m, blocks):
    def sampler(rng, size):
        z = rng.standard_normal((size, m)) * 1.5
        return z - z.mean(axis=1, keepdims=True)
    return {"raw": lambda x: -np.abs(x.mean(axis=-1)), "on_sampler": sampler}


@_register("laplacianBand")
def _prim_laplacian_band(m, blocks, r=1.0):
    def raw(x):
        return -np.maximum.reduce([
            np.abs(x.mean(axis=-1)),
            x.max(axis=-1) - r,
            -r - x.min(axis=-1),
        ])

    def sampler(rng, size):
        out = np.empty((size, m))
        got = 0
        while got < size:
            z = rng.uniform(-r, r, size=(2 * size, m))
            z -= z.mean(axis=1, keepdims=True)
            z = z[np.abs(z).max(axis=1) <= r]
            take = min(size - got, len(z))
            out[got:got + take] = z[:take]
            got += take
        return out

    return {"raw": raw, "on_sampler": sampler, "name": f"laplacianBand[r={r}]"}


@_register("band")
def _prim_band(m, blocks, lo=-1.0, hi=1.0):
    # all eigenvalues in [lo, hi]; has interior when lo < hi
    def raw(x):
        return np.minimum(x.min(axis=-1) - lo, hi - x.max(axis=-1))

    def sampler(rng, size):
        return rng.uniform(lo, hi, size=(size, m))

    return {"raw": raw, "on_sampler": sampler, "name": f"band[{lo},{hi}]"}


@_register("zero")
def _prim_zero(m, blocks):
    def sampler(rng, size):
        return np.zeros((size, m))
    return {"raw": lambda x: -np.abs(x).max(axis=-1), "on_sampler": sampler}


@_register("hyperbola")
def _prim_hyperbola(m, blocks, c=1.0):
    # {x1 * x2 = -c}: the negative-product hyperbola, one branch after sorting
    if m != 2:
        raise ValueError("hyperbola branch is a planar example")

    def sampler(rng, size):
        a = np.exp(rng.uniform(-1.5, 1.5, size=size))
        return np.stack([-a, c / a], axis=1)

    return {"raw": lambda x: -np.abs(x[..., 0] * x[..., 1] + c),
            "on_sampler": sampler}


@_register("splitH")
def _prim_split_h(m, blocks):
    # first block in Q+, second in Q-, trace zero
    slx, sly = _block_slice(blocks, 0), _block_slice(blocks, 1)

    def raw(x):
        return np.minimum(
            np.minimum(x[..., slx].min(axis=-1), -x[..., sly].max(axis=-1)),
            -np.abs(x.mean(axis=-1)))

    def sampler(rng, size):
        k, l = blocks
        xs = rng.uniform(0.0, 2.0, size=(size, k))
        ys = -rng.uniform(0.05, 2.0, size=(size, l))
        ys *= (xs.sum(axis=1) / (-ys.sum(axis=1)))[:, None]
        return np.concatenate([xs, ys], axis=1)

    return {"raw": raw, "on_sampler": sampler}


def _boundary_of_orthant_sampler(m, sign):
    def sampler(rng, size):
        z = rng.uniform(0.0, 2.0, size=(size, m)) * sign
        kill = rng.integers(0, m, size=size)
        z[np.arange(size), kill] = 0.0
        return z
    return sampler


def empty_set(m, blocks=None) -> SpectralSet:
    return make_prim("EMPTY", m, blocks)


def full_set(m, blocks=None) -> SpectralSet:
    return make_prim("FULL", m, blocks)


# ---------------------------------------------------------------------------
# combinators


def _check_compatible(sets):
    first = sets[0]
    for s in sets[1:]:
        if s.m != first.m or s.blocks != first.blocks:
            raise DimensionMismatch(
                f"incompatible sets: {first.m}/{first.blocks} vs {s.m}/{s.blocks}")


def intersect(*sets) -> SpectralSet:
    """Intersection; level is the min of the levels."""
    _check_compatible(sets)
    if any(s.sentinel == "empty" for s in sets):
        return empty_set(sets[0].m, sets[0].blocks)
    sets = tuple(s for s in sets if s.sentinel != "full") or sets[:1]
    if len(sets) == 1:
        return sets[0]
    raws = [s._raw for s in sets]

    def raw(x):
        return np.minimum.reduce([r(x) for r in raws])

    return SpectralSet(
        sets[0].m, sets[0].blocks, raw, op="intersect", children=sets,
        monotone=all(s.monotone for s in sets),
        diag_additive=all(s.diag_additive for s in sets),
        name="(" + " & ".join(s.name for s in sets) + ")")


def union(*sets) -> SpectralSet:
    """Union; level is the max of the levels."""
    _check_compatible(sets)
    if any(s.sentinel == "full" for s in sets):
        return full_set(sets[0].m, sets[0].blocks)
    sets = tuple(s for s in sets if s.sentinel != "empty") or sets[:1]
    if len(sets) == 1:
        return sets[0]
    raws = [s._raw for s in sets]

    def raw(x):
        return np.maximum.reduce([r(x) for r in raws])

    def sampler(rng, size):
        if any(s.on_sampler is None for s in sets):
            return None
        pick = rng.integers(0, len(sets), size=size)
        out = np.empty((size, sets[0].m))
        for i, s in enumerate(sets):
            idx = np.nonzero(pick == i)[0]
            if len(idx):
                out[idx] = s.sample_on(rng, len(idx))
        return out

    return SpectralSet(
        sets[0].m, sets[0].blocks, raw, op="union", children=sets,
        monotone=all(s.monotone for s in sets),
        diag_additive=all(s.diag_additive for s in sets),
        on_sampler=sampler if all(s.on_sampler is not None for s in sets) else None,
        name="(" + " | ".join(s.name for s in sets) + ")")


def shift(f: SpectralSet, t: float) -> SpectralSet:
    """F + t*Id: the set translated along the diagonal."""
    t = float(t)
    if f.sentinel:
        return f
    if f.op == "shift":  # collapse nested shifts
        return shift(f.children[0], t + f.params[0])
    child_raw = f._raw

    def raw(x):
        return child_raw(x - t)

    sampler = None
    if f.on_sampler is not None:
        base = f.on_sampler
        def sampler(rng, size):
            return base(rng, size) + t

    return SpectralSet(
        f.m, f.blocks, raw, op="shift", params=(t,), children=(f,),
        monotone=f.monotone, diag_additive=f.diag_additive,
        on_sampler=sampler, name=f"({f.name} {'+' if t >= 0 else '-'} {abs(t):g}*Id)")


def negate(s: SpectralSet) -> SpectralSet:
    """-S = {-x : x in S}.  Not monotone unless S is trivial."""
    if s.op == "negate":
        return s.children[0]
    if s.sentinel:
        return s
    child_raw, blocks = s._raw, s.blocks

    def raw(x):
        return child_raw(blocksort(-x, blocks))

    sampler = None
    if s.on_sampler is not None:
        base = s.on_sampler
        def sampler(rng, size):
            return -base(rng, size)

    return SpectralSet(
        s.m, s.blocks, raw, op="negate", children=(s,), monotone=False,
        on_sampler=sampler, name=f"-{s.name}")


def dual(f: SpectralSet) -> SpectralSet:
    """Dirichlet dual F~ = complement of the reflected interior.

    Level realization g~(x) = -g(-x).  Structural rewrites keep catalog
    exactness: dual of dual, named prims, shifts, and De Morgan on
    intersections/unions.
    """
    if not f.monotone:
        raise JetconeError(f"dual requires a subequation, got {f.name}")
    if f.op == "dual":
        return f.children[0]
    if f.op == "prim":
        pname = f.params[0]
        dname = PRIMS[pname]["dual"]
        if dname is not None:
            return make_prim(dname, f.m, f.blocks, **dict(f.params[1]))
    if f.op == "shift":
        return shift(dual(f.children[0]), -f.params[0])
    if f.op == "intersect":
        return union(*[dual(c) for c in f.children])
    if f.op == "union":
        return intersect(*[dual(c) for c in f.children])

    child_raw, blocks = f._raw, f.blocks

    def raw(x):
        return -child_raw(blocksort(-x, blocks))

    return SpectralSet(
        f.m, f.blocks, raw, op="dual", children=(f,), monotone=True,
        diag_additive=f.diag_additive, kind=f.kind, name=f"~{f.name}",
        oracle_resolution=f.oracle_resolution)


# ---------------------------------------------------------------------------
# membership


def member(f: SpectralSet, a, tol: Tolerances = DEFAULT) -> SignedVerdict:
    """Signed membership verdict of a matrix (or spectrum vector) in a set."""
    if isinstance(a, SymMat):
        v = f.spectrum(a)
    else:
        v = np.asarray(a, dtype=float)
    margin = float(f.level(v))
    return SignedVerdict(_classify(margin, tol.tau_member), margin)


# ---------------------------------------------------------------------------
# boundary graphs: t*(mu) = min{t : mu + t*Id in F}


def boundary_offsets(f: SpectralSet, v, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Vectorized boundary graph over spectrum vectors v, shape (..., m).

    For diagonal-additive levels this is exactly -level(v); otherwise a
    bracketed bisection along v + t*ones (membership along the ray is
    monotone by positivity).
    """
    if not f.monotone:
        raise JetconeError("boundary graph requires a subequation")
    if f.sentinel:
        raise BracketOverflow(f"set is {f.sentinel.upper()}")
    v = np.asarray(v, dtype=float)
    if f.diag_additive:
        return -f.level(v)

    vs = blocksort(v, f.blocks)
    ones = np.ones(f.m)

    def lv(t):
        return f.level_raw(vs + t[..., None] * ones)

    lo = np.full(vs.shape[:-1], -1.0)
    hi = np.full(vs.shape[:-1], 1.0)
    # grow the bracket until level(lo) < 0 <= level(hi)
    for _ in range(64):
        bad_hi = lv(hi) < 0
        bad_lo = lv(lo) >= 0
        if not bad_hi.any() and not bad_lo.any():
            break
        hi = np.where(bad_hi, hi * 2.0, hi)
        lo = np.where(bad_lo, lo * 2.0, lo)
        if hi.max() > tol.bracket_limit or lo.min() < -tol.bracket_limit:
            raise BracketOverflow(
                f"no boundary within |t| <= {tol.bracket_limit:g} for {f.name}")
    else:
        raise BracketOverflow(f"bracket search failed for {f.name}")
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        inside = lv(mid) >= 0
        hi = np.where(inside, mid, hi)
        lo = np.where(inside, lo, mid)
        if float((hi - lo).max()) < 1e-14 * max(1.0, float(np.abs(hi).max())):
            break
    return 0.5 * (lo + hi)


def boundary_offset(f: SpectralSet, mu, tol: Tolerances = DEFAULT) -> float:
    """t*(mu) for a single trace-free direction (SymMat or spectrum vector)."""
    if isinstance(mu, SymMat):
        if abs(mu.trace()) > 1e-9 * max(1.0, mu.frobenius()):
            raise ValueError("direction must be trace-free")
        v = f.spectrum(mu)
    else:
        v = np.asarray(mu, dtype=float)
    return float(boundary_offsets(f, v, tol))


# ---------------------------------------------------------------------------
# direction sampling on the (block-sorted) trace-free sphere


def _special_directions(m, blocks):
    """Deterministic extreme directions, unit Euclidean norm, sum zero."""
    out = []
    if len(blocks) == 1:
        for k in range(1, m):
            v = np.array([-(m - k)] * k + [k] * (m - k), dtype=float)
            out.append(v / np.linalg.norm(v))
        if m >= 3:
            v = np.zeros(m)
            v[0], v[-1] = -1.0, 1.0
            out.append(v / np.sqrt(2.0))
    else:
        k, l = blocks
        v = np.concatenate([np.full(k, -l), np.full(l, k)]).astype(float)
        out.append(v / np.linalg.norm(v))
        out.append(-v / np.linalg.norm(v))
        for i in range(k):
            for j in range(l):
                w = np.zeros(m)
                w[i], w[k + j] = -1.0, 1.0
                out.append(w / np.sqrt(2.0))
                out.append(-w / np.sqrt(2.0))
    return out


def direction_vectors(m, blocks=None, n_dirs=DEFAULT.n_dirs, seed=DEFAULT.seed):
    """Block-sorted, trace-free, unit direction vectors, shape (N, m).

    For full-spectrum planar sets every unit trace-free direction has the
    same sorted spectrum, so a single vector decides containment exactly.
    """
    blocks = tuple(blocks) if blocks is not None else (m,)
    if blocks == (2,):
        return np.array([[-1.0, 1.0]]) / np.sqrt(2.0)
    dirs = list(_special_directions(m, blocks))
    rng = np.random.default_rng(seed)
    need = max(0, n_dirs - len(dirs))
    z = rng.standard_normal((4 * need + 8, m))
    z -= z.mean(axis=1, keepdims=True)
    norms = np.linalg.norm(z, axis=1)
    z = z[norms > 1e-8][:need] / norms[norms > 1e-8][:need, None]
    dirs.extend(z)
    return blocksort(np.array(dirs[:max(n_dirs, len(_special_directions(m, blocks)))]), blocks)


def direction_matrices(n, n_dirs=DEFAULT.n_dirs, seed=DEFAULT.seed):
    """Random unit trace-free SymMat directions (exercises the eigen path)."""
    rng = np.random.default_rng(seed)
    from .symmat import random_tracefree_direction
    return [random_tracefree_direction(rng, n) for _ in range(n_dirs)]


# ---------------------------------------------------------------------------
# containment by boundary-graph comparison


@dataclass(frozen=True)
class Containment:
    contained: bool
    gap: float                 # min over directions of t*_F - t*_G
    witness: SymMat | None     # worst direction when not contained
    n_dirs: int
    exact: bool                # direction set covers the quotient exactly
    indeterminate: bool = False

    def __bool__(self):
        return self.contained


def contains(f: SpectralSet, g: SpectralSet, n_dirs=None,
             tol: Tolerances = DEFAULT, seed=None) -> Containment:
    """Decide F subset-of G via boundary graphs: t*_F >= t*_G in every direction.

    Planar full-spectrum pairs are decided by the single sorted direction
    (exact); otherwise this is a semidecision at n_dirs sampled directions
    within tau_contain.
    """
    if f.m != g.m or f.blocks != g.blocks:
        raise DimensionMismatch("containment across different spectra")
    # sentinel structure
    if f.sentinel == "empty" or g.sentinel == "full":
        return Containment(True, np.inf, None, 0, True)
    if g.sentinel == "empty":
        return Containment(f.sentinel == "empty", -np.inf, None, 0, True)
    if f.sentinel == "full":
        return Containment(g.sentinel == "full", -np.inf, None, 0, True)

    n_dirs = n_dirs or tol.n_dirs
    seed = tol.seed if seed is None else seed
    dirs = direction_vectors(f.m, f.blocks, n_dirs, seed)
    tf = boundary_offsets(f, dirs, tol)
    tg = boundary_offsets(g, dirs, tol)
    gaps = tf - tg
    i = int(np.argmin(gaps))
    gap = float(gaps[i])
    exact = f.blocks == (2,)
    witness = None
    if gap < -tol.tau_contain:
        witness = _direction_to_matrix(dirs[i], f.blocks)
    indet = (-10.0 * tol.tau_contain <= gap < -tol.tau_contain)
    return Containment(gap >= -tol.tau_contain, gap, witness, len(dirs),
                       exact, indeterminate=indet)


def _direction_to_matrix(v, blocks) -> SymMat:
    return SymMat(np.diag(np.asarray(v, dtype=float)))


# ---------------------------------------------------------------------------
# orthant-sum closures: cl(S + Q+) and cl(S - Q+)
#
# Membership level: phi_plus(x) = sup_{y in S} min_i (x_i - y_i), the largest
# diagonal slack of a witness below x.  phi_plus is 1-Lipschitz (sup norm),
# monotone, diagonal-additive, and {phi_plus >= 0} = cl(S + Q+); closure
# points reachable only "at infinity" are resolved up to the search box.


def _down_slack_batch(level_raw, blocks, x, sign, box, rounds, per_axis, keep,
                      penalty):
    """Maximize min_i(sign*(x_i - y_i)) + penalty*min(level(y), 0) over y.

    sign=+1 gives phi_plus, sign=-1 gives phi_minus.  x: (Q, m).  Returns
    (values (Q,), witnesses (Q, m)).  Deterministic multi-zoom grid search;
    exact-penalty with unit-slope levels makes the constrained optimum the
    unconstrained one.  Search boxes scale with |x| so far-out queries still
    bracket their witnesses.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    q, m = x.shape

    def objective(y):  # y: (Q, C, m)
        slack = (sign * (x[:, None, :] - y)).min(axis=-1)
        lev = level_raw(blocksort(y.reshape(-1, m), blocks)).reshape(q, -1)
        return slack + penalty * np.minimum(lev, 0.0)

    scale = np.maximum(box, 2.0 + 1.5 * np.abs(x).max(axis=1))  # (Q,)

    # round 0: coarse global grid in the box around x
    grid1d = np.linspace(-1.0, 1.0, 2 * per_axis + 1)
    offs = np.stack(np.meshgrid(*([grid1d] * m), indexing="ij"),
                    axis=-1).reshape(-1, m)
    cand = x[:, None, :] + scale[:, None, None] * offs[None, :, :]
    vals = objective(cand)
    top = np.argsort(vals, axis=1)[:, -keep:]
    centers = np.take_along_axis(cand, top[:, :, None], axis=1)

    radius = scale / per_axis  # (Q,)
    local1d = np.linspace(-1.0, 1.0, 5)
    local = np.stack(np.meshgrid(*([local1d] * m), indexing="ij"),
                     axis=-1).reshape(-1, m)
    for _ in range(rounds):
        cand = (centers[:, :, None, :]
                + radius[:, None, None, None] * local[None, None, :, :])
        cand = cand.reshape(q, -1, m)
        vals = objective(cand)
        top = np.argsort(vals, axis=1)[:, -keep:]
        centers = np.take_along_axis(cand, top[:, :, None], axis=1)
        radius = radius * 0.6
    best_val = np.take_along_axis(vals, top[:, -1:], axis=1)[:, 0]
    best_y = centers[:, -1, :]
    return best_val, best_y


class _OrthantSumOracle:
    """Level oracle for cl(S + sign*Q+), graph normalized by construction."""

    def __init__(self, base, sign, box, rounds, per_axis, keep, penalty):
        self.base = base
        self.sign = sign
        self.box = box
        self.rounds = rounds
        self.per_axis = per_axis
        self.keep = keep
        self.penalty = penalty

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        shp = x.shape[:-1]
        m = x.shape[-1]
        flat = x.reshape(-1, m)
        vals = np.empty(len(flat))
        # keep candidate tensors below ~2e7 floats
        chunk = max(1, int(2e7 / ((2 * self.per_axis + 1) ** m * m)))
        for i in range(0, len(flat), chunk):
            vals[i:i + chunk], _ = _down_slack_batch(
                self.base.level_raw, self.base.blocks, flat[i:i + chunk],
                self.sign, self.box, self.rounds, self.per_axis, self.keep,
                self.penalty)
        return vals.reshape(shp)


def _orthant_sum(s: SpectralSet, sign: int, box=None, rounds=40,
                 per_axis=6, keep=6, penalty=8.0,
                 use_exact=True) -> SpectralSet:
    if s.sentinel:
        return s
    if use_exact:
        exact = getattr(s, "exact_plus" if sign > 0 else "exact_minus", None)
        if exact is not None:
            return exact
    opts = dict(box=box, rounds=rounds, per_axis=per_axis, keep=keep,
                penalty=penalty, use_exact=use_exact)
    # structural rules keep the search single-modal and exact:
    # cl((A ∪ B) ± Q) = cl(A ± Q) ∪ cl(B ± Q), and shifts commute with sums
    if s.op == "union":
        return union(*[_orthant_sum(c, sign, **opts) for c in s.children])
    if s.op == "shift":
        return shift(_orthant_sum(s.children[0], sign, **opts), s.params[0])
    opname = "addP" if sign > 0 else "subP"
    box = box if box is not None else 16.0
    oracle = _OrthantSumOracle(s, sign, box, rounds, per_axis, keep, penalty)
    resolution = 2.0 * box / (2 * per_axis) * 0.6 ** rounds * (1 + penalty)
    return SpectralSet(
        s.m, s.blocks, oracle, op=opname, children=(s,), monotone=sign > 0,
        diag_additive=sign > 0, kind="generic-oracle",
        name=f"cl({s.name} {'+' if sign > 0 else '-'} Q+)",
        oracle_resolution=resolution)


def add_P(s: SpectralSet, **opts) -> SpectralSet:
    """Minimal monotone closure cl(S + Q+); a subequation at the vector level.

    The oracle maximizes the diagonal slack of a witness in S over a search
    box (multi-zoom grid with an exact penalty on the level), so the reported
    margin is the signed diagonal distance to the boundary.  Verdicts within
    tau_member of zero at the oracle resolution are Boundary/indeterminate.
    """
    return _orthant_sum(s, +1, **opts)


def sub_P(s: SpectralSet, **opts) -> SpectralSet:
    """cl(S - Q+): the down-monotone counterpart (not a subequation)."""
    return _orthant_sum(s, -1, **opts)
