"""Edge bases and triangle-rooted spanning 3-trees.

Edges are indexed in the global order of :class:`~.mesh.Triangulation`,
i.e. sorted by ``(min vertex, max vertex)``; free vertices are taken in
ascending index order.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Sequence

import numpy as np

from .errors import SingularSubmatrix, TooLarge
from .exact import bareiss_det, fraction_inverse, permutation_parity
from .mesh import Triangulation

MAX_TREE_N = 8


def incidence_matrix(t: Triangulation) -> np.ndarray:
    """Vertex-edge incidence ``R`` (0/1 integers)."""
    r = np.zeros((t.n_vertices, t.n_edges), dtype=np.int64)
    idx = np.arange(t.n_edges)
    r[t.edges[:, 0], idx] = 1
    r[t.edges[:, 1], idx] = 1
    return r


def _find_cycle(n_vertices: int, edges: Sequence[tuple[int, int]]) -> list[int] | None:
    """Vertices of the unique cycle of a connected unicyclic graph."""
    adj = {v: set() for v in range(n_vertices)}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    deg = {v: len(n) for v, n in adj.items()}
    leaves = deque(v for v, d in deg.items() if d == 1)
    removed = set()
    while leaves:
        v = leaves.popleft()
        removed.add(v)
        for w in adj[v]:
            if w not in removed:
                deg[w] -= 1
                if deg[w] == 1:
                    leaves.append(w)
    core = [v for v in range(n_vertices) if v not in removed]
    if not core or any(deg[v] != 2 for v in core):
        return None
    # walk the cycle in order
    start = core[0]
    cyc = [start]
    prev, cur = None, start
    while True:
        nxt = next(w for w in adj[cur] if w not in removed and w != prev and deg[w] == 2)
        if nxt == start:
            break
        cyc.append(nxt)
        prev, cur = cur, nxt
        if len(cyc) > len(core):
            return None
    return cyc


def _connected(n_vertices: int, edges: Sequence[tuple[int, int]]) -> bool:
    parent = list(range(n_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = n_vertices
    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            comps -= 1
    return comps == 1


def _dual_components(t: Triangulation, edge_set) -> int:
    parent = list(range(t.n_faces))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = t.n_faces
    for e in edge_set:
        f, g = t.edge_faces(e)
        rf, rg = find(f), find(g)
        if rf != rg:
            parent[rf] = rg
            comps -= 1
    return comps


@dataclass(frozen=True, eq=False)
class EdgeBasis:
    """A set of ``2N`` edges whose complement is an odd cycle-rooted spanning tree.

    Attributes
    ----------
    edges : tuple of int
        Basis edges, ascending global order.
    complement : tuple of int
        The ``N + 3`` remaining edges.
    cycle : tuple of int
        Vertices of the odd cycle of the complement.
    """

    triangulation: Triangulation
    edges: tuple[int, ...]
    complement: tuple[int, ...]
    cycle: tuple[int, ...]
    dual_components: int

    @property
    def size(self) -> int:
        return len(self.edges)

    @cached_property
    def P0(self) -> np.ndarray:
        """Inclusion of basis coordinates into edge coordinates, shape (E, 2N)."""
        p = np.zeros((self.triangulation.n_edges, len(self.edges)), dtype=np.int64)
        p[list(self.edges), np.arange(len(self.edges))] = 1
        return p

    @cached_property
    def M0(self) -> np.ndarray:
        """Exact rational map from basis angle variations to all edge variations.

        Rows follow the global edge order; rows of basis edges are unit
        vectors and the others solve the vertex constraints ``R dtheta = 0``.
        """
        t = self.triangulation
        r = incidence_matrix(t)
        rc = r[:, list(self.complement)]
        r0 = r[:, list(self.edges)]
        inv = fraction_inverse(rc)
        sol = -inv.dot(r0.astype(object))
        m = np.empty((t.n_edges, len(self.edges)), dtype=object)
        for j, e in enumerate(self.edges):
            m[e, :] = [Fraction(int(k == j)) for k in range(len(self.edges))]
        for i, e in enumerate(self.complement):
            m[e, :] = sol[i, :]
        return m

    def complement_det(self) -> int:
        """Exact ``det`` of ``R`` restricted to the complement columns."""
        r = incidence_matrix(self.triangulation)
        return bareiss_det(r[:, list(self.complement)])


def validate_basis(t: Triangulation, edges) -> EdgeBasis:
    """Check that ``edges`` is a valid basis and wrap it.

    Raises
    ------
    ValueError
        If the complement is not a connected spanning graph with exactly one
        odd cycle, or the dual of the basis is not a two-tree forest.
    """
    edges = tuple(sorted(int(e) for e in edges))
    n = t.n_free
    if len(set(edges)) != 2 * n:
        raise ValueError(f"a basis has {2 * n} edges, got {len(set(edges))}")
    comp = tuple(e for e in range(t.n_edges) if e not in set(edges))
    pairs = [tuple(int(x) for x in t.edges[e]) for e in comp]
    if not _connected(t.n_vertices, pairs):
        raise ValueError("complement is not connected")
    cyc = _find_cycle(t.n_vertices, pairs)
    if cyc is None:
        raise ValueError("complement is not cycle-rooted")
    if len(cyc) % 2 == 0:
        raise ValueError("complement cycle has even length")
    comps = _dual_components(t, edges)
    if comps != 2:
        raise ValueError(f"dual of the basis has {comps} components")
    return EdgeBasis(t, edges, comp, tuple(cyc), comps)


def find_edge_basis(t: Triangulation, f0: int) -> EdgeBasis:
    """Canonical basis: the dual spanning tree of all faces other than ``f0``.

    The complement consists of the three edges of ``f0`` plus a spanning
    forest hanging off them, so its cycle is the boundary of ``f0``.
    """
    banned = set(t.face_edges(f0))
    start = next(f for f in range(t.n_faces) if f != f0)
    seen = {start}
    basis = []
    queue = deque([start])
    while queue:
        f = queue.popleft()
        for k in range(3):
            h = 3 * f + k
            e = int(t.he_edge[h])
            g = int(t.twin[h]) // 3
            if g == f0 or g in seen or e in banned:
                continue
            seen.add(g)
            basis.append(e)
            queue.append(g)
    return validate_basis(t, basis)


def random_edge_basis(t: Triangulation, rng: np.random.Generator,
                      max_tries: int = 10000) -> EdgeBasis:
    """Random basis: random spanning tree plus one edge closing an odd cycle."""
    for _ in range(max_tries):
        order = rng.permutation(t.n_edges)
        parent = list(range(t.n_vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        tree, rest = [], []
        for e in order.tolist():
            a, b = (int(x) for x in t.edges[e])
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
                tree.append(e)
            else:
                rest.append(e)
        extra = rest[int(rng.integers(len(rest)))]
        comp = set(tree) | {extra}
        basis = [e for e in range(t.n_edges) if e not in comp]
        try:
            return validate_basis(t, basis)
        except ValueError:
            continue
    raise RuntimeError("no odd cycle-rooted spanning tree found")


def count_perfect_matchings(t: Triangulation, basis: EdgeBasis) -> int:
    """Perfect matchings of basis edges, pairing edges that share a face."""
    edges = list(basis.edges)
    faces_of = {e: set(t.edge_faces(e)) for e in edges}

    def count(rem: tuple[int, ...]) -> int:
        if not rem:
            return 1
        e = rem[0]
        total = 0
        for j in range(1, len(rem)):
            if faces_of[e] & faces_of[rem[j]]:
                total += count(rem[1:j] + rem[j + 1:])
        return total

    return count(tuple(edges))


# ---------------------------------------------------------------------------
# spanning 3-trees

@dataclass(frozen=True)
class SpanningThreeTree:
    """Partition of the non-root edges into three root-triangle forests.

    ``sigma[k]`` and ``sigmabar[k]`` are the outgoing edges (towards the
    root triangle) of the ``k``-th free vertex in ``I`` and ``I'``.
    ``extra_cycles`` counts odd cycles of ``I''`` besides the root triangle
    (zero for a proper 3-tree); then ``|epsilon| = 2**extra_cycles``.
    """

    I: tuple[int, ...]
    Ip: tuple[int, ...]
    Ipp: tuple[int, ...]
    sigma: tuple[int, ...]
    sigmabar: tuple[int, ...]
    epsilon: int
    extra_cycles: int = 0

    def swapped(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return self.Ip, self.I


def _triangle_vertices(t: Triangulation, triangle) -> tuple[int, int, int]:
    if isinstance(triangle, (int, np.integer)):
        tri = tuple(int(x) for x in t.faces[int(triangle)])
    else:
        tri = tuple(int(x) for x in triangle)
        if t.find_face(tri) is None:
            raise ValueError("root triangle is not a face")
    if set(tri) != set(t.config.fixed):
        raise ValueError("root triangle must consist of the fixed vertices")
    return tri


def rooted_forests(t: Triangulation, roots, odd_cycles: bool = False
                   ) -> tuple[np.ndarray, np.ndarray]:
    """All spanning forests in which every free vertex points to a root.

    Parameters
    ----------
    odd_cycles : bool
        Also admit components that close on an odd cycle of free vertices
        instead of reaching a root (each edge set is reported once).

    Returns
    -------
    masks : ndarray of int64, shape (K,)
        Edge bitmasks.
    sigma : ndarray of int64, shape (K, N)
        Outgoing edge of each free vertex (ascending vertex order).
    """
    roots = set(roots)
    free = [v for v in range(t.n_vertices) if v not in roots]
    pos = {v: i for i, v in enumerate(free)}
    choices = []
    for v in free:
        opts = []
        for h in t.vertex_star(v):
            w = int(t.he_dest[h])
            opts.append((int(t.he_edge[h]), w))
        choices.append(opts)
    n = len(free)
    nxt = [-1] * n  # target vertex of each assigned free vertex
    sig = [0] * n
    masks, sigmas = [], []
    seen = set()

    def cycle_length(k: int, w: int) -> int:
        """Length of the cycle closed by k -> w, or 0 if none."""
        length = 1
        while w not in roots:
            j = pos[w]
            if j == k:
                return length
            if nxt[j] < 0 or length > n:
                return 0  # open path, or trapped in an earlier cycle
            w = nxt[j]
            length += 1
        return 0

    def rec(k: int, mask: int):
        if k == n:
            if mask not in seen:
                seen.add(mask)
                masks.append(mask)
                sigmas.append(tuple(sig))
            return
        for e, w in choices[k]:
            if mask >> e & 1:
                continue
            cl = cycle_length(k, w)
            if cl and not (odd_cycles and cl % 2 == 1):
                continue
            nxt[k] = w
            sig[k] = e
            rec(k + 1, mask | (1 << e))
        nxt[k] = -1

    rec(0, 0)
    return (np.array(masks, dtype=np.int64),
            np.array(sigmas, dtype=np.int64).reshape(len(masks), n))


def enumerate_3tree_arrays(t: Triangulation, triangle, guard: int = MAX_TREE_N,
                           odd_cycles: bool = False):
    """Vectorised enumeration of triangle-rooted spanning 3-trees.

    With ``odd_cycles=True`` the third set ``I''`` may additionally close
    on odd cycles of free vertices; these pairs carry even edge-form minors
    and complete the expansion of the Jacobian determinant.

    Returns ``(sigma, sigmabar, masks_I, masks_Ip)`` arrays; see
    :func:`enumerate_3trees` for the object interface.
    """
    n = t.n_free
    if n > guard:
        raise TooLarge(f"exhaustive 3-tree enumeration limited to N <= {guard}")
    tri = _triangle_vertices(t, triangle)
    if n == 0:
        empty = np.zeros((1, 0), dtype=np.int64)
        return empty, empty, np.zeros(1, np.int64), np.zeros(1, np.int64)
    masks, sig = rooted_forests(t, tri)
    third = rooted_forests(t, tri, odd_cycles=True)[0] if odd_cycles else masks
    tri_edges = set(t.face_edges(t.find_face(tri)))
    full = 0
    for e in range(t.n_edges):
        if e not in tri_edges:
            full |= 1 << e
    smasks = np.sort(third)
    rows_i, rows_j = [], []
    for i, m in enumerate(masks.tolist()):
        ok = np.nonzero((masks & m) == 0)[0]
        if ok.size == 0:
            continue
        rest = full ^ m ^ masks[ok]
        where = np.searchsorted(smasks, rest)
        where[where >= smasks.size] = 0
        hit = smasks[where] == rest
        js = ok[hit]
        rows_i.append(np.full(js.size, i))
        rows_j.append(js)
    ii = np.concatenate(rows_i) if rows_i else np.zeros(0, np.int64)
    jj = np.concatenate(rows_j) if rows_j else np.zeros(0, np.int64)
    return sig[ii], sig[jj], masks[ii], masks[jj]


def _mask_edges(mask: int) -> tuple[int, ...]:
    out, e = [], 0
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return tuple(out)


def tree_signs(t: Triangulation, basis: EdgeBasis, sigma: np.ndarray,
               sigmabar: np.ndarray, E: np.ndarray | None = None) -> np.ndarray:
    """Signs ``epsilon`` for arrays of ``(sigma, sigmabar)`` choices.

    ``epsilon`` is the Leibniz sign of the row assignment (rows interleaved
    as ``z_1, z̄_1, z_2, z̄_2, ...``; columns the sorted union ``I ∪ I'``)
    times ``det E[I ∪ I', basis]``. Each ``E`` minor is a small integer
    (``±1`` for proper 3-trees, ``±2**k`` when ``I''`` carries ``k`` extra
    odd cycles), so it is evaluated in floating point and rounded.
    """
    if E is None:
        from .operators import edge_form
        E = edge_form(t)
    k = sigma.shape[0]
    n = sigma.shape[1]
    if n == 0:
        return np.ones(k, dtype=np.int64)
    inter = np.empty((k, 2 * n), dtype=np.int64)
    inter[:, 0::2] = sigma
    inter[:, 1::2] = sigmabar
    cols = np.sort(inter, axis=1)
    # parity of the permutation row -> position of its edge in the sorted union
    inv = (inter[:, :, None] > inter[:, None, :])
    upper = np.triu(np.ones((2 * n, 2 * n), dtype=bool), 1)
    parity = np.where((inv & upper).sum(axis=(1, 2)) % 2 == 0, 1, -1)
    e0 = np.asarray(basis.edges)
    sub = E[cols[:, :, None], e0[None, None, :]].astype(float)
    dets = np.linalg.det(sub)
    rd = np.rint(dets)
    if np.any(np.abs(dets - rd) > 1e-6):
        raise ArithmeticError("non-integer minor of the edge form")
    if np.any(rd == 0):
        raise SingularSubmatrix("edge-form minor vanishes for an enumerated 3-tree")
    return parity * rd.astype(np.int64)


def sign_epsilon(f3: SpanningThreeTree, basis: EdgeBasis, ops=None) -> int:
    """Exact sign of a 3-tree: permutation parity times an integer minor of ``E``."""
    from .operators import edge_form
    t = basis.triangulation
    E = ops.E if ops is not None else edge_form(t)
    inter = []
    for a, b in zip(f3.sigma, f3.sigmabar):
        inter += [a, b]
    if not inter:
        return 1
    cols = sorted(inter)
    minor = E[np.ix_(cols, list(basis.edges))]
    d = bareiss_det(minor)
    if d == 0:
        raise SingularSubmatrix("edge-form minor vanishes")
    return permutation_parity(inter) * d


def enumerate_3trees(t: Triangulation, triangle, basis: EdgeBasis | None = None,
                     guard: int = MAX_TREE_N, odd_cycles: bool = False
                     ) -> list[SpanningThreeTree]:
    """All triangle-rooted spanning 3-trees of ``t`` with their signs.

    Parameters
    ----------
    triangle : int or triple of int
        Root face (index or vertex triple); its vertices must be the fixed
        vertices.
    basis : EdgeBasis, optional
        Basis used for the sign; defaults to the canonical basis of the
        root face.
    odd_cycles : bool
        Include the pairs whose third set closes on extra odd cycles.

    Raises
    ------
    TooLarge
        If ``N`` exceeds ``guard``.
    """
    tri = _triangle_vertices(t, triangle)
    if basis is None:
        basis = find_edge_basis(t, t.find_face(tri))
    sig, sigb, mi, mj = enumerate_3tree_arrays(t, tri, guard, odd_cycles)
    eps = tree_signs(t, basis, sig, sigb)
    tri_edges = set(t.face_edges(t.find_face(tri)))
    every = set(range(t.n_edges)) - tri_edges
    out = []
    for k in range(sig.shape[0]):
        I = _mask_edges(int(mi[k]))
        Ip = _mask_edges(int(mj[k]))
        Ipp = tuple(sorted(every - set(I) - set(Ip)))
        extra = int(abs(eps[k])).bit_length() - 1
        out.append(SpanningThreeTree(I, Ip, Ipp, tuple(int(x) for x in sig[k]),
                                     tuple(int(x) for x in sigb[k]), int(eps[k]), extra))
    return out


def is_rooted_forest(t: Triangulation, edges, roots) -> bool:
    """Whether ``edges`` together with the root triangle form a CRST with that cycle."""
    roots = tuple(roots)
    tri_edges = [t.edge_index[(min(a, b), max(a, b))] for a, b in combinations(roots, 2)]
    all_e = set(edges) | set(tri_edges)
    if len(all_e) != t.n_vertices:
        return False
    pairs = [tuple(int(x) for x in t.edges[e]) for e in all_e]
    if not _connected(t.n_vertices, pairs):
        return False
    cyc = _find_cycle(t.n_vertices, pairs)
    return cyc is not None and set(cyc) == set(roots)


def forest_count_matrix_tree(t: Triangulation, roots) -> int:
    """Number of root-directed spanning forests from the reduced Laplacian."""
    roots = set(roots)
    free = [v for v in range(t.n_vertices) if v not in roots]
    lap = np.zeros((t.n_vertices, t.n_vertices), dtype=np.int64)
    for a, b in t.edges:
        lap[a, b] -= 1
        lap[b, a] -= 1
        lap[a, a] += 1
        lap[b, b] += 1
    return bareiss_det(lap[np.ix_(free, free)])
