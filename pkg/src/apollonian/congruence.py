"""Reductions of the swap group mod q, Cayley graphs on the finite images,
adjacency spectra, and Cheeger-constant diagnostics.

The four swap matrices generate a finite group inside GL_4(Z/q); its Cayley
graph with respect to the swaps is 4-regular and, over square-free q, the
family exhibits a uniform spectral gap below the top eigenvalue 4, which is
what the expander reports measure.  Mod 2 every generator reduces to the
identity (all off-diagonal entries are even), so the image is trivial and
each generator contributes a weight-1 self-loop, keeping the adjacency
operator exactly 4-regular.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .arithmetic import is_squarefree
from .quadruples import SWAP_MATRICES

DENSE_CAP_DEFAULT = 5000
ELEMENT_CAP_DEFAULT = 10**7
_FAST_Q = 16  # 4 bits per matrix entry pack a 4x4 matrix into one uint64


class SizeCapError(RuntimeError):
    pass


class EigenConvergenceError(RuntimeError):
    pass


def _pack_mats(mats: np.ndarray) -> np.ndarray:
    """(n, 4, 4) matrices with entries < 16 -> (n,) uint64 keys."""
    flat = mats.reshape(len(mats), 16).astype(np.uint64)
    key = np.zeros(len(mats), dtype=np.uint64)
    for k in range(16):
        key = (key << np.uint64(4)) | flat[:, k]
    return key


@dataclass
class FiniteGroupImage:
    """The group generated by the swaps in GL_4(Z/q), elements sorted by
    packed key so membership and index lookups are binary searches."""

    modulus: int
    elements: np.ndarray  # (n, 4, 4) uint8
    keys: np.ndarray  # (n,) uint64, sorted
    generators: np.ndarray  # (4, 4, 4) uint8

    @property
    def order(self) -> int:
        return int(len(self.elements))

    def index_of(self, mats: np.ndarray) -> np.ndarray:
        keys = _pack_mats(mats % self.modulus)
        idx = np.searchsorted(self.keys, keys)
        idx = np.clip(idx, 0, len(self.keys) - 1)
        ok = self.keys[idx] == keys
        if not ok.all():
            raise KeyError("matrix outside the group image")
        return idx


def reduce_group_mod(q: int, element_cap: int = ELEMENT_CAP_DEFAULT) -> FiniteGroupImage:
    """Closure of the four swap generators under multiplication mod q."""
    q = int(q)
    if q < 1:
        raise ValueError("modulus must be >= 1")
    if q > _FAST_Q:
        raise ValueError(
            f"group reduction is supported for moduli up to {_FAST_Q}; "
            f"orbit_mod covers larger moduli"
        )
    gens64 = (SWAP_MATRICES % q).astype(np.int64)
    frontier = (np.eye(4, dtype=np.int64) % q)[None, :, :]
    seen_keys = _pack_mats(frontier)
    mats_acc = [frontier.astype(np.uint8)]
    while len(frontier):
        cand = np.concatenate([(frontier @ g) % q for g in gens64])
        keys = _pack_mats(cand)
        keys, first = np.unique(keys, return_index=True)
        cand = cand[first]
        fresh = ~np.isin(keys, seen_keys, assume_unique=True)
        frontier = cand[fresh]
        if not len(frontier):
            break
        mats_acc.append(frontier.astype(np.uint8))
        seen_keys = np.sort(np.concatenate([seen_keys, keys[fresh]]))
        if len(seen_keys) > element_cap:
            raise SizeCapError(f"group image mod {q} exceeds the element cap {element_cap}")
    mats = np.concatenate(mats_acc)
    keys = _pack_mats(mats)
    order = np.argsort(keys)
    return FiniteGroupImage(
        modulus=q,
        elements=mats[order],
        keys=keys[order],
        generators=(SWAP_MATRICES % q).astype(np.uint8),
    )


@dataclass
class CayleyGraph:
    modulus: int
    n: int
    edges: np.ndarray  # (m, 2) int64, u < v, each undirected edge once
    loops: np.ndarray  # (n,) int64: weight-1 self-loop count per vertex
    degree: int = 4

    def adjacency(self) -> sp.csr_matrix:
        n = self.n
        if len(self.edges):
            u, v = self.edges[:, 0], self.edges[:, 1]
            a = sp.coo_matrix(
                (
                    np.ones(2 * len(self.edges)),
                    (np.concatenate([u, v]), np.concatenate([v, u])),
                ),
                shape=(n, n),
            )
        else:
            a = sp.coo_matrix((n, n))
        if self.loops.any():
            a = a + sp.diags(self.loops.astype(float))
        return a.tocsr()

    def is_connected(self) -> bool:
        ncomp, _ = sp.csgraph.connected_components(self.adjacency(), directed=False)
        return bool(ncomp == 1)


def build_cayley(img: FiniteGroupImage) -> CayleyGraph:
    """4-regular Cayley graph {g, g*S_i} on the group image.

    A generator fixing an element (which happens exactly when it reduces to
    the identity, i.e. q <= 2) contributes a weight-1 self-loop.
    """
    n = img.order
    q = img.modulus
    loops = np.zeros(n, dtype=np.int64)
    pairs = []
    idx = np.arange(n, dtype=np.int64)
    for g in range(4):
        prods = (img.elements.astype(np.int64) @ img.generators[g].astype(np.int64)) % q
        nb = img.index_of(prods)
        self_m = nb == idx
        loops += self_m.astype(np.int64)
        u = np.minimum(idx[~self_m], nb[~self_m])
        v = np.maximum(idx[~self_m], nb[~self_m])
        pairs.append(np.stack([u, v], axis=1))
    edges = np.concatenate(pairs) if pairs else np.empty((0, 2), dtype=np.int64)
    if len(edges):
        edges = np.unique(edges, axis=0)
    return CayleyGraph(modulus=img.modulus, n=n, edges=edges, loops=loops)


@dataclass
class SpectralReport:
    lambda0: float
    lambda1: float | None
    lambda_min: float | None
    cheeger_lower: float | None
    cheeger_upper: float | None
    n: int
    method: str
    exact_cheeger: float | None = None


def spectrum(
    g: CayleyGraph,
    dense_cap: int = DENSE_CAP_DEFAULT,
    tol: float = 1e-8,
) -> SpectralReport:
    """lambda_0, lambda_1, lambda_min of the adjacency operator plus the
    Cheeger bounds (k - lambda_1)/2 <= h <= sqrt(2k(k - lambda_1)).

    Dense symmetric solver up to ``dense_cap`` vertices; deterministic
    Lanczos iteration above it, with the Rayleigh residual of every returned
    eigenpair checked against ``tol``.
    """
    a = g.adjacency()
    k = g.degree
    if g.n == 1:
        return SpectralReport(float(a[0, 0]), None, None, None, None, 1, "trivial")
    if g.n <= dense_cap:
        vals = np.linalg.eigvalsh(a.toarray())
        lam0, lam1, lammin = float(vals[-1]), float(vals[-2]), float(vals[0])
        method = "dense"
    else:
        rng = np.random.default_rng(0)
        v0 = rng.standard_normal(g.n)
        af = a.astype(float)
        try:
            vals, vecs = spla.eigsh(af, k=2, which="LA", v0=v0)
            vmin, wmin = spla.eigsh(af, k=1, which="SA", v0=v0)
        except spla.ArpackNoConvergence as exc:  # pragma: no cover
            raise EigenConvergenceError(str(exc)) from exc
        for lam, vec in zip(
            np.concatenate([vals, vmin]), np.concatenate([vecs.T, wmin.T])
        ):
            resid = float(np.linalg.norm(af @ vec - lam * vec))
            if resid > tol * max(1.0, abs(lam)) * np.sqrt(g.n):
                raise EigenConvergenceError(f"eigen residual {resid:.2e} above tolerance")
        lam0, lam1 = float(vals[-1]), float(vals[-2])
        lammin = float(vmin[0])
        method = "lanczos"
    gap = k - lam1
    return SpectralReport(
        lambda0=lam0,
        lambda1=lam1,
        lambda_min=lammin,
        cheeger_lower=gap / 2.0,
        cheeger_upper=float(np.sqrt(2.0 * k * gap)),
        n=g.n,
        method=method,
    )


def exact_cheeger(g: CayleyGraph, cap: int = 20) -> float:
    """Exhaustive Cheeger constant: min over nonempty W with |W| <= n/2 of
    #boundary_edges(W) / |W|.  Self-loops never cross a cut."""
    n = g.n
    if n < 2:
        raise ValueError("Cheeger constant needs at least two vertices")
    if n > cap:
        raise SizeCapError(f"exhaustive Cheeger limited to {cap} vertices")
    adj_bits = [0] * n
    deg = [0] * n
    for u, v in g.edges:
        adj_bits[u] |= 1 << int(v)
        adj_bits[v] |= 1 << int(u)
        deg[u] += 1
        deg[v] += 1
    best = float("inf")
    for size in range(1, n // 2 + 1):
        for subset in combinations(range(n), size):
            wmask = 0
            for v in subset:
                wmask |= 1 << v
            # deg(v) counts boundary edges once and internal edges once per
            # endpoint; subtracting internal neighbors leaves the boundary
            boundary = sum(
                deg[v] - bin(adj_bits[v] & wmask).count("1") for v in subset
            )
            best = min(best, boundary / size)
    return best


def expander_report(
    moduli,
    element_cap: int = ELEMENT_CAP_DEFAULT,
    dense_cap: int = DENSE_CAP_DEFAULT,
) -> list[tuple[int, int, SpectralReport]]:
    """(q, group order, spectral report) per square-free modulus, skipping
    those whose image exceeds the element cap."""
    out = []
    for q in moduli:
        q = int(q)
        if not is_squarefree(q):
            raise ValueError(f"expander reports take square-free moduli; got {q}")
        try:
            img = reduce_group_mod(q, element_cap=element_cap)
        except SizeCapError:
            continue
        graph = build_cayley(img)
        out.append((q, img.order, spectrum(graph, dense_cap=dense_cap)))
    return out


def orbit_mod(root, q: int) -> np.ndarray:
    """Orbit of the root quadruple under the swaps mod q, as a sorted (n, 4)
    array; the proportion of the orbit satisfying a congruence is the natural
    density estimate for the matching congruence slice of the sieve."""
    q = int(q)
    if q < 1:
        raise ValueError("modulus must be >= 1")
    if q > 255:
        raise ValueError("moduli above 255 are not supported")

    def pack(vecs: np.ndarray) -> np.ndarray:
        k = np.zeros(len(vecs), dtype=np.uint64)
        for c in range(4):
            k = (k << np.uint64(8)) | vecs[:, c].astype(np.uint64)
        return k

    root_v = (np.array([int(x) for x in root], dtype=np.int64) % q)[None, :]
    seen = pack(root_v)
    frontier = root_v
    gens = [SWAP_MATRICES[g] for g in range(4)]
    while len(frontier):
        cand = np.concatenate([(frontier @ g) % q for g in gens])
        keys = pack(cand)
        keys, first = np.unique(keys, return_index=True)
        cand = cand[first]
        fresh = ~np.isin(keys, seen, assume_unique=True)
        frontier = cand[fresh]
        if not len(frontier):
            break
        seen = np.sort(np.concatenate([seen, keys[fresh]]))
    out = np.zeros((len(seen), 4), dtype=np.int64)
    rem = seen.copy()
    for c in range(3, -1, -1):
        out[:, c] = (rem & np.uint64(0xFF)).astype(np.int64)
        rem >>= np.uint64(8)
    return out
