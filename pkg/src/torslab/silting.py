"""Two-term complexes of projectives, silting mutation, and g-vector fans.

A two-term complex lives in homological degrees -1 and 0; both terms are
finite direct sums of the indecomposable projectives e_i A.  A component
P(j) -> P(i) is an algebra element supported on paths i -> j, so a
differential is a matrix of {basis_index: coeff} dicts and every step here
is exact over F_p.

Mutation exchanges one indecomposable summand through an approximation
triangle.  The left construction is tried first; when its cone cannot be
flattened back into two terms the right-hand one is used instead, and for a
genuine silting input exactly one of the two lands in range.  Summands are
kept individually and every vertex of the exchange graph is keyed by its
sorted tuple of summand g-vectors, which pins the whole walk down to a
deterministic object.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .algebra import (
    AlgebraError,
    direct_sum_many,
    image_submodule,
    injective_module,
    inj_struct,
    kernel_submodule,
    proj_struct,
    projective_module,
    quotient_module,
    submodule_rep,
)
from .cones import RationalCone
from .linalg import inv_mod, nullspace, rref
from .torsion import fac_closure, left_perp


class SiltingError(Exception):
    pass


class MutationError(SiltingError):
    pass


# -- algebra-valued matrices --------------------------------------------------


def _unit_index(A, i):
    cache = getattr(A, "_unit_idx", None)
    if cache is None:
        cache = {}
        A._unit_idx = cache
    got = cache.get(i)
    if got is None:
        for k in A.paths_between(i, i):
            if not A.basis[k][1]:
                got = k
                break
        else:
            raise AlgebraError("vertex %r has no trivial path" % (i,))
        cache[i] = got
    return got


def _local_inverse(A, i, u):
    """Inverse of u in e_i A e_i; u must have a unit coefficient there."""
    e = _unit_index(A, i)
    c = u.get(e, 0) % A.p
    if not c:
        raise AlgebraError("element has no unit part at vertex %r" % (i,))
    x = {e: inv_mod(c, A.p)}
    one = {e: 1}
    for _ in range(64):
        t = A.mult(u, x)
        if t == one:
            return x
        # Newton step x <- x(2 - t) squares the radical error term
        corr = {k: -v % A.p for k, v in t.items() if k != e}
        ce = (2 - t.get(e, 0)) % A.p
        if ce:
            corr[e] = ce
        x = A.mult(x, corr)
    raise AlgebraError("local inverse iteration did not terminate")


def _elem_neg(p, x):
    return {k: (p - v) % p for k, v in x.items() if v % p}


def _elem_sub(p, x, y):
    out = dict(x)
    for k, v in y.items():
        out[k] = (out.get(k, 0) - v) % p
    return {k: v for k, v in out.items() if v}


def _mat_compose(A, M, N, ndst, nmid, nsrc):
    """Matrix product of algebra-valued matrices, composition order M after N."""
    p = A.p
    out = []
    for l in range(ndst):
        row = []
        for k in range(nsrc):
            acc = {}
            for j in range(nmid):
                x = M[l][j]
                y = N[j][k]
                if x and y:
                    for bi, c in A.mult(x, y).items():
                        acc[bi] = (acc.get(bi, 0) + c) % p
            row.append({bi: c for bi, c in acc.items() if c})
        out.append(tuple(row))
    return tuple(out)


def _layout(A, src, dst):
    """Coordinate slots (dst summand, src summand, path) of Hom(+P(src), +P(dst))."""
    cache = getattr(A, "_hom_layouts", None)
    if cache is None:
        cache = {}
        A._hom_layouts = cache
    key = (src, dst)
    got = cache.get(key)
    if got is None:
        slots = []
        for l, zl in enumerate(dst):
            for k, mk in enumerate(src):
                for b in A.paths_between(zl, mk):
                    slots.append((l, k, b))
        got = tuple(slots)
        cache[key] = got
    return got


def _vec(slots, M):
    return tuple(M[l][k].get(b, 0) for (l, k, b) in slots)


def _unvec(slots, nsrc, ndst, vec):
    rows = [[{} for _ in range(nsrc)] for _ in range(ndst)]
    for (l, k, b), c in zip(slots, vec):
        if c:
            cell = rows[l][k]
            if not cell:
                rows[l][k] = cell = {}
            cell[b] = c
    return tuple(tuple(rows[l][k] for k in range(nsrc)) for l in range(ndst))


def _residual(v, rows, p):
    v = list(v)
    for row in rows:
        piv = next((j for j, x in enumerate(row) if x), None)
        if piv is None or not v[piv]:
            continue
        f = v[piv]
        v = [(a - f * b) % p for a, b in zip(v, row)]
    return v


# -- complexes ----------------------------------------------------------------


class TwoTermComplex:
    """Complex of projectives concentrated in degrees -1 and 0.

    mat[l][k] is the component P(minus[k]) -> P(zero[l]); its support must
    consist of paths from zero[l] to minus[k].
    """

    __slots__ = ("algebra", "minus", "zero", "mat")

    def __init__(self, algebra, minus, zero, mat):
        self.algebra = algebra
        self.minus = tuple(minus)
        self.zero = tuple(zero)
        p = algebra.p
        rows = []
        if len(mat) != len(self.zero):
            raise SiltingError("differential has %d rows, expected %d" % (len(mat), len(self.zero)))
        for l, zl in enumerate(self.zero):
            row = mat[l]
            if len(row) != len(self.minus):
                raise SiltingError("differential row %d has wrong width" % l)
            cleaned = []
            for k, mk in enumerate(self.minus):
                allowed = set(algebra.paths_between(zl, mk))
                cell = {}
                for b, c in row[k].items():
                    c %= p
                    if not c:
                        continue
                    if b not in allowed:
                        raise SiltingError(
                            "entry (%d, %d) uses a path outside e_%d A e_%d" % (l, k, zl, mk)
                        )
                    cell[b] = c
                cleaned.append(cell)
            rows.append(tuple(cleaned))
        self.mat = tuple(rows)

    def g_vector(self):
        n = self.algebra.n
        g = [0] * n
        for i in self.zero:
            g[i] += 1
        for i in self.minus:
            g[i] -= 1
        return tuple(g)

    def total_summands(self):
        return len(self.minus) + len(self.zero)

    def __repr__(self):
        return "TwoTermComplex(minus=%r, zero=%r)" % (self.minus, self.zero)


def projective_complex(A, i):
    """Stalk complex P(i) in degree 0."""
    if not 0 <= i < A.n:
        raise SiltingError("invalid vertex %r" % (i,))
    return TwoTermComplex(A, (), (i,), ((),))


def shifted_projective_complex(A, i):
    """Stalk complex P(i) in degree -1."""
    if not 0 <= i < A.n:
        raise SiltingError("invalid vertex %r" % (i,))
    return TwoTermComplex(A, (i,), (), ())


def initial_silting(A):
    """The algebra itself, one stalk summand per vertex."""
    parts = [projective_complex(A, i) for i in range(A.n)]
    return tuple(sorted(parts, key=lambda c: c.g_vector()))


def direct_sum_complex(parts, A):
    minus = []
    zero = []
    for part in parts:
        minus.extend(part.minus)
        zero.extend(part.zero)
    mat = []
    roff = 0
    coff = 0
    nm = len(minus)
    for part in parts:
        for l in range(len(part.zero)):
            row = [{} for _ in range(nm)]
            for k in range(len(part.minus)):
                row[coff + k] = dict(part.mat[l][k])
            mat.append(tuple(row))
        roff += len(part.zero)
        coff += len(part.minus)
    return TwoTermComplex(A, tuple(minus), tuple(zero), tuple(mat))


# -- chain maps up to homotopy -------------------------------------------------


def _pair_cache(A):
    cache = getattr(A, "_chain_cache", None)
    if cache is None:
        cache = {}
        A._chain_cache = cache
    return cache


def _chain_data(X, Y):
    """Chain maps X -> Y: solution space, null-homotopic span, and
    representatives for a basis of the homotopy classes."""
    A = X.algebra
    cache = _pair_cache(A)
    key = (id(X), id(Y))
    got = cache.get(key)
    if got is not None:
        return got[2]
    p = A.p
    sa = _layout(A, X.minus, Y.minus)
    sb = _layout(A, X.zero, Y.zero)
    sc = _layout(A, X.minus, Y.zero)
    na, nb, nc = len(sa), len(sb), len(sc)
    scpos = {slot: j for j, slot in enumerate(sc)}
    # chain condition beta f_X - f_Y alpha = 0, one column per unknown slot
    rows = [[0] * (na + nb) for _ in range(nc)]
    for col, (l, k, b) in enumerate(sa):
        # alpha slot contributes -f_Y[j][l] . b in column k
        for j in range(len(Y.zero)):
            prod = A.mult(Y.mat[j][l], {b: 1})
            for bi, c in prod.items():
                rows[scpos[(j, k, bi)]][col] = (-c) % p
    for col, (l, k, b) in enumerate(sb):
        # beta slot contributes b . f_X[k][j] in row l
        for j in range(len(X.minus)):
            prod = A.mult({b: 1}, X.mat[k][j])
            for bi, c in prod.items():
                rows[scpos[(l, j, bi)]][na + col] = c % p
    sol = nullspace(tuple(tuple(r) for r in rows), na + nb, p)
    # null-homotopic chain maps (h f_X, f_Y h) for h: X^0 -> Y^{-1}
    hvecs = []
    for (l, k, b) in _layout(A, X.zero, Y.minus):
        va = [0] * na
        vb = [0] * nb
        for j in range(len(X.minus)):
            prod = A.mult({b: 1}, X.mat[k][j])
            for col, slot in enumerate(sa):
                if slot[0] == l and slot[1] == j:
                    va[col] = prod.get(slot[2], 0)
        for j in range(len(Y.zero)):
            prod = A.mult(Y.mat[j][l], {b: 1})
            for col, slot in enumerate(sb):
                if slot[0] == j and slot[1] == k:
                    vb[col] = prod.get(slot[2], 0)
        hvecs.append(tuple(va) + tuple(vb))
    hot, _ = rref(tuple(hvecs), p)
    work = [list(r) for r in hot]
    k_vecs = []
    k_mats = []
    for v in sol:
        r = _residual(v, work, p)
        if any(r):
            k_vecs.append(v)
            alpha = _unvec(sa, len(X.minus), len(Y.minus), v[:na])
            beta = _unvec(sb, len(X.zero), len(Y.zero), v[na:])
            k_mats.append((alpha, beta))
            work, _ = rref(tuple(tuple(x) for x in work) + (tuple(r),), p)
            work = [list(row) for row in work]
    data = {
        "sa": sa,
        "sb": sb,
        "hot": hot,
        "k_vecs": tuple(k_vecs),
        "k_mats": tuple(k_mats),
    }
    cache[key] = (X, Y, data)
    return data


def hom_k_basis(X, Y):
    """Basis of the homotopy classes of chain maps X -> Y, as (alpha, beta)."""
    return _chain_data(X, Y)["k_mats"]


def _pair_compose(A, outer, inner, X, Y, Z):
    """Chain map composite (X -> Y -> Z)."""
    alpha = _mat_compose(A, outer[0], inner[0], len(Z.minus), len(Y.minus), len(X.minus))
    beta = _mat_compose(A, outer[1], inner[1], len(Z.zero), len(Y.zero), len(X.zero))
    return (alpha, beta)


def _pair_vec(X, Y, pair):
    data = _chain_data(X, Y)
    return _vec(data["sa"], pair[0]) + _vec(data["sb"], pair[1])


# -- presilting ----------------------------------------------------------------


def is_presilting(U):
    """Whether Hom(U, U[1]) vanishes up to homotopy."""
    return _self_ok(U) if isinstance(U, TwoTermComplex) else _set_presilting(U)


def _vanishing_rank_ok(A, X, Y):
    """Hom(X, Y[1]) = 0: maps X^{-1} -> Y^0 must all be null-homotopic."""
    p = A.p
    sc = _layout(A, X.minus, Y.zero)
    if not sc:
        return True
    scpos = {slot: j for j, slot in enumerate(sc)}
    gens = []
    for (l, k, b) in _layout(A, X.zero, Y.zero):
        v = [0] * len(sc)
        for j in range(len(X.minus)):
            prod = A.mult({b: 1}, X.mat[k][j])
            for bi, c in prod.items():
                v[scpos[(l, j, bi)]] = c
        gens.append(tuple(v))
    for (l, k, b) in _layout(A, X.minus, Y.minus):
        v = [0] * len(sc)
        for j in range(len(Y.zero)):
            prod = A.mult(Y.mat[j][l], {b: 1})
            for bi, c in prod.items():
                v[scpos[(j, k, bi)]] = c
        gens.append(tuple(v))
    reduced, _ = rref(tuple(gens), p)
    return len(reduced) == len(sc)


def _self_ok(U):
    return _vanishing_rank_ok(U.algebra, U, U)


def _set_presilting(summands):
    summands = tuple(summands)
    if not summands:
        return True
    A = summands[0].algebra
    cache = getattr(A, "_rigid_pairs", None)
    if cache is None:
        cache = {}
        A._rigid_pairs = cache
    for X in summands:
        for Y in summands:
            key = (id(X), id(Y))
            got = cache.get(key)
            if got is None:
                got = (X, Y, _vanishing_rank_ok(A, X, Y))
                cache[key] = got
            if not got[2]:
                return False
    return True


def is_silting(summands):
    """Presilting with one indecomposable summand per simple module.

    Summands must be pairwise nonisomorphic; since the g-vector separates
    indecomposable presilting complexes this is a g-vector distinctness check.
    """
    summands = tuple(summands)
    if not summands:
        return False
    if len(summands) != summands[0].algebra.n:
        return False
    if len({c.g_vector() for c in summands}) != len(summands):
        return False
    return _set_presilting(summands)


# -- reduction -----------------------------------------------------------------


def _find_pivot(A, terms, diffs):
    p = A.p
    for d, D in enumerate(diffs):
        src, dst = terms[d], terms[d + 1]
        for l in range(len(dst)):
            for k in range(len(src)):
                if src[k] != dst[l]:
                    continue
                if D[l][k].get(_unit_index(A, src[k]), 0) % p:
                    return d, l, k
    return None


def _eliminate(A, terms, diffs, d, l0, k0):
    p = A.p
    D = diffs[d]
    i = terms[d + 1][l0]
    u = D[l0][k0]
    uinv = _local_inverse(A, i, u)
    nr, ncs = len(terms[d + 1]), len(terms[d])
    w = {k: A.mult(uinv, D[l0][k]) for k in range(ncs) if k != k0}
    v = {l: A.mult(D[l][k0], uinv) for l in range(nr) if l != l0}
    newD = []
    for l in range(nr):
        if l == l0:
            continue
        row = []
        for k in range(ncs):
            if k == k0:
                continue
            if D[l][k0] and w[k]:
                row.append(_elem_sub(p, D[l][k], A.mult(D[l][k0], w[k])))
            else:
                row.append(dict(D[l][k]))
        newD.append(row)
    diffs[d] = newD
    if d > 0:
        Dp = diffs[d - 1]
        for j in range(len(terms[d - 1])):
            acc = dict(Dp[k0][j])
            for k in range(ncs):
                if k == k0 or not w[k] or not Dp[k][j]:
                    continue
                for bi, c in A.mult(w[k], Dp[k][j]).items():
                    acc[bi] = (acc.get(bi, 0) + c) % p
            assert not any(c % p for c in acc.values()), "split summand leaks upstream"
        diffs[d - 1] = [row for kk, row in enumerate(Dp) if kk != k0]
    if d + 1 < len(diffs):
        Dn = diffs[d + 1]
        for j in range(len(terms[d + 2])):
            acc = dict(Dn[j][l0])
            for l in range(nr):
                if l == l0 or not v[l] or not Dn[j][l]:
                    continue
                for bi, c in A.mult(Dn[j][l], v[l]).items():
                    acc[bi] = (acc.get(bi, 0) + c) % p
            assert not any(c % p for c in acc.values()), "split summand leaks downstream"
        diffs[d + 1] = [[e for ll, e in enumerate(row) if ll != l0] for row in Dn]
    terms[d] = [t for kk, t in enumerate(terms[d]) if kk != k0]
    terms[d + 1] = [t for ll, t in enumerate(terms[d + 1]) if ll != l0]


def _reduce_chain(A, terms, diffs):
    terms = [list(t) for t in terms]
    diffs = [[[dict(e) for e in row] for row in D] for D in diffs]
    while True:
        hit = _find_pivot(A, terms, diffs)
        if hit is None:
            break
        _eliminate(A, terms, diffs, *hit)
    out_terms = [tuple(t) for t in terms]
    out_diffs = [tuple(tuple(dict(e) for e in row) for row in D) for D in diffs]
    return out_terms, out_diffs


def reduced(U):
    """Strip invertible components of the differential; same homotopy type."""
    terms, diffs = _reduce_chain(U.algebra, [U.minus, U.zero], [U.mat])
    return TwoTermComplex(U.algebra, terms[0], terms[1], diffs[0])


# -- mutation ------------------------------------------------------------------


def _left_approximates(A, X, others, copies):
    for s, S in enumerate(others):
        data = _chain_data(X, S)
        need = len(data["hot"]) + len(data["k_vecs"])
        rows = [tuple(r) for r in data["hot"]]
        for t, pair in copies:
            for psi in hom_k_basis(others[t], S):
                comp = _pair_compose(A, psi, pair, X, others[t], S)
                rows.append(_pair_vec(X, S, comp))
        got, _ = rref(tuple(rows), A.p)
        if len(got) < need:
            return False
    return True


def _right_approximates(A, X, others, copies):
    for s, S in enumerate(others):
        data = _chain_data(S, X)
        need = len(data["hot"]) + len(data["k_vecs"])
        rows = [tuple(r) for r in data["hot"]]
        for t, pair in copies:
            for psi in hom_k_basis(S, others[t]):
                comp = _pair_compose(A, pair, psi, S, others[t], X)
                rows.append(_pair_vec(S, X, comp))
        got, _ = rref(tuple(rows), A.p)
        if len(got) < need:
            return False
    return True


def _strip_copies(copies, check):
    changed = True
    while changed:
        changed = False
        for c in range(len(copies)):
            trial = copies[:c] + copies[c + 1 :]
            if check(trial):
                copies = trial
                changed = True
                break
    return copies


def _stack_rows(pairs_mats):
    rows = []
    for m in pairs_mats:
        rows.extend(tuple(dict(e) for e in row) for row in m)
    return tuple(rows)


def _stack_cols(pairs_mats, nrows):
    rows = [[] for _ in range(nrows)]
    for m in pairs_mats:
        for r in range(nrows):
            rows[r].extend(dict(e) for e in m[r])
    return tuple(tuple(r) for r in rows)


def _left_exchange(X, others):
    A = X.algebra
    copies = []
    for t in range(len(others)):
        for pair in hom_k_basis(X, others[t]):
            copies.append((t, pair))
    assert _left_approximates(A, X, others, copies), "universal target fails to approximate"
    copies = _strip_copies(copies, lambda c: _left_approximates(A, X, others, c))
    E = direct_sum_complex([others[t] for t, _ in copies], A)
    g_alpha = _stack_rows([pair[0] for _, pair in copies])
    g_beta = _stack_rows([pair[1] for _, pair in copies])
    # cone(g: X -> E), degrees -2..0
    t0 = list(X.minus)
    t1 = list(X.zero) + list(E.minus)
    t2 = list(E.zero)
    D0 = [[_elem_neg(A.p, X.mat[l][k]) for k in range(len(X.minus))] for l in range(len(X.zero))]
    D0 += [[dict(g_alpha[l][k]) for k in range(len(X.minus))] for l in range(len(E.minus))]
    D1 = []
    for l in range(len(E.zero)):
        row = [dict(g_beta[l][k]) for k in range(len(X.zero))]
        row += [dict(E.mat[l][k]) for k in range(len(E.minus))]
        D1.append(row)
    terms, diffs = _reduce_chain(A, [t0, t1, t2], [D0, D1])
    if terms[0]:
        return None
    return TwoTermComplex(A, terms[1], terms[2], diffs[1])


def _right_exchange(X, others):
    A = X.algebra
    copies = []
    for t in range(len(others)):
        for pair in hom_k_basis(others[t], X):
            copies.append((t, pair))
    assert _right_approximates(A, X, others, copies), "universal source fails to approximate"
    copies = _strip_copies(copies, lambda c: _right_approximates(A, X, others, c))
    E = direct_sum_complex([others[t] for t, _ in copies], A)
    h_alpha = _stack_cols([pair[0] for _, pair in copies], len(X.minus))
    h_beta = _stack_cols([pair[1] for _, pair in copies], len(X.zero))
    # cone(h: E -> X) shifted one step to the right, degrees -1..+1
    t0 = list(E.minus)
    t1 = list(E.zero) + list(X.minus)
    t2 = list(X.zero)
    D0 = [[_elem_neg(A.p, E.mat[l][k]) for k in range(len(E.minus))] for l in range(len(E.zero))]
    D0 += [[dict(h_alpha[l][k]) for k in range(len(E.minus))] for l in range(len(X.minus))]
    D1 = []
    for l in range(len(X.zero)):
        row = [dict(h_beta[l][k]) for k in range(len(E.zero))]
        row += [dict(X.mat[l][k]) for k in range(len(X.minus))]
        D1.append(row)
    terms, diffs = _reduce_chain(A, [t0, t1, t2], [D0, D1])
    if terms[2]:
        return None
    return TwoTermComplex(A, terms[0], terms[1], diffs[0])


def mutate(summands, k):
    """Exchange summand k of a basic silting complex; returns the sorted
    summand tuple of the neighbouring silting complex."""
    summands = tuple(summands)
    if not summands:
        raise MutationError("empty complex cannot be mutated")
    A = summands[0].algebra
    if not 0 <= k < len(summands):
        raise MutationError("summand index %r out of range" % (k,))
    if not is_silting(summands):
        raise MutationError("mutation requires a basic silting complex")
    X = summands[k]
    others = summands[:k] + summands[k + 1 :]
    new = _left_exchange(X, others)
    if new is None:
        new = _right_exchange(X, others)
    if new is None:
        raise MutationError("mutation leaves the two-term range")
    out = tuple(sorted(others + (new,), key=lambda c: c.g_vector()))
    if not is_silting(out):
        raise MutationError("exchange did not produce a silting complex")
    return out


# -- the exchange graph ----------------------------------------------------------


def vertex_key(summands):
    return tuple(sorted(c.g_vector() for c in summands))


def enumerate_silting(A, depth):
    """Breadth-first walk of the mutation graph starting at the algebra.

    The result is complete when every reached vertex was expanded and all
    its neighbours were already known; a vertex parked at the depth limit
    leaves the answer a lower bound instead.
    """
    if depth < 0:
        raise SiltingError("depth must be nonnegative")
    start = initial_silting(A)
    key0 = vertex_key(start)
    info = {key0: {"summands": start, "depth": 0}}
    order = [key0]
    edges = set()
    complete = True
    qpos = 0
    while qpos < len(order):
        key = order[qpos]
        qpos += 1
        rec = info[key]
        if rec["depth"] >= depth:
            complete = False
            continue
        for k in range(len(rec["summands"])):
            new = mutate(rec["summands"], k)
            nk = vertex_key(new)
            if nk != key:
                edges.add((key, nk) if key <= nk else (nk, key))
            if nk not in info:
                info[nk] = {"summands": new, "depth": rec["depth"] + 1}
                order.append(nk)
    vertices = tuple(
        {"key": key, "summands": info[key]["summands"], "depth": info[key]["depth"]}
        for key in sorted(info)
    )
    return {
        "depth": depth,
        "complete": complete,
        "vertices": vertices,
        "edges": tuple(sorted(edges)),
    }


def silting_cone(summands):
    """Cone spanned by the summand g-vectors; rays must be independent."""
    summands = tuple(summands)
    if not summands:
        raise SiltingError("empty summand list")
    A = summands[0].algebra
    rays = tuple(c.g_vector() for c in summands)
    if _rank_q(rays) != len(rays):
        raise SiltingError("summand g-vectors are linearly dependent")
    return RationalCone.from_vectors(A.n, rays)


def _rank_q(rows):
    work = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(work)) if work[i][c] != 0), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        pv = work[rank][c]
        work[rank] = [x / pv for x in work[rank]]
        for i in range(len(work)):
            if i != rank and work[i][c] != 0:
                f = work[i][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[rank])]
        rank += 1
    return rank


def _positive_combination(rays, theta):
    """Strictly positive exact solution of sum(a_i rays_i) = theta, or None."""
    m = len(rays)
    n = len(theta)
    rows = [[Fraction(rays[j][i]) for j in range(m)] + [theta[i]] for i in range(n)]
    r = 0
    where = []
    for c in range(m):
        piv = next((i for i in range(r, n) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        where.append(c)
        r += 1
    for i in range(r, n):
        if rows[i][m] != 0:
            return None
    if len(where) < m:
        return None
    coeffs = [Fraction(0)] * m
    for i, c in enumerate(where):
        coeffs[c] = rows[i][m]
    if all(x > 0 for x in coeffs):
        return tuple(coeffs)
    return None


def rigidity(theta, graph):
    """Locate theta in the open face fan of an enumerated exchange graph.

    Returns a dict with verdict "rigid" (plus the witnessing rays and their
    strictly positive coefficients), "not_rigid" (only on a complete graph),
    or "unknown" (the walk was cut off at its depth limit).
    """
    theta = tuple(Fraction(t) for t in theta)
    depth = graph["depth"]
    if all(t == 0 for t in theta):
        return {"verdict": "rigid", "rays": (), "coeffs": (), "vertex": None, "depth": depth}
    seen = set()
    for vert in graph["vertices"]:
        gvs = vert["key"]
        for r in range(1, len(gvs) + 1):
            for subset in combinations(gvs, r):
                if subset in seen:
                    continue
                seen.add(subset)
                coeffs = _positive_combination(subset, theta)
                if coeffs is not None:
                    return {
                        "verdict": "rigid",
                        "rays": subset,
                        "coeffs": coeffs,
                        "vertex": vert["key"],
                        "depth": depth,
                    }
    if graph["complete"]:
        return {"verdict": "not_rigid", "rays": None, "coeffs": None, "vertex": None, "depth": depth}
    return {"verdict": "unknown", "rays": None, "coeffs": None, "vertex": None, "depth": depth}


# -- cohomology and induced torsion pairs ----------------------------------------


def _proj_block_maps(A, src, dst, mat):
    """Per-vertex matrices of the morphism on materialised projectives."""
    out = []
    for v in range(A.n):
        tgt_layout = []
        for l, zl in enumerate(dst):
            tgt_layout.extend((l, b) for b in proj_struct(A, zl)[v])
        src_layout = []
        for k, mk in enumerate(src):
            src_layout.extend((k, b) for b in proj_struct(A, mk)[v])
        pos = {lb: r for r, lb in enumerate(tgt_layout)}
        m = [[0] * len(src_layout) for _ in range(len(tgt_layout))]
        for cidx, (k, q) in enumerate(src_layout):
            for l in range(len(dst)):
                x = mat[l][k]
                if not x:
                    continue
                for bi, c in A.mult(x, {q: 1}).items():
                    m[pos[(l, bi)]][cidx] = c
        out.append(tuple(tuple(row) for row in m))
    return tuple(out)


def _nakayama_block_maps(A, src, dst, mat):
    """Per-vertex matrices of the morphism pushed through injectives."""
    p = A.p
    out = []
    for v in range(A.n):
        tgt_layout = []
        for l, zl in enumerate(dst):
            tgt_layout.extend((l, b) for b in inj_struct(A, zl)[v])
        src_layout = []
        for k, mk in enumerate(src):
            src_layout.extend((k, b) for b in inj_struct(A, mk)[v])
        pos = {lb: c for c, lb in enumerate(src_layout)}
        m = [[0] * len(src_layout) for _ in range(len(tgt_layout))]
        # entry x: P(src[k]) -> P(dst[l]) dualises right multiplication by x
        for ridx, (l, q) in enumerate(tgt_layout):
            for k in range(len(src)):
                x = mat[l][k]
                if not x:
                    continue
                for bi, c in A.mult({q: 1}, x).items():
                    m[ridx][pos[(k, bi)]] = (m[ridx][pos[(k, bi)]] + c) % p
        out.append(tuple(tuple(row) for row in m))
    return tuple(out)


def cohomology(U):
    """(H^0(U), H^{-1} of the Nakayama twist), both as representations."""
    A = U.algebra
    Mm = direct_sum_many(A, [projective_module(A, i) for i in U.minus])
    Mz = direct_sum_many(A, [projective_module(A, i) for i in U.zero])
    f = _proj_block_maps(A, U.minus, U.zero, U.mat)
    img = image_submodule(f, Mm, Mz)
    h0 = quotient_module(Mz, img)[0]
    Nm = direct_sum_many(A, [injective_module(A, i) for i in U.minus])
    Nz = direct_sum_many(A, [injective_module(A, i) for i in U.zero])
    nf = _nakayama_block_maps(A, U.minus, U.zero, U.mat)
    ker = kernel_submodule(nf, Nm, Nz)
    hm1 = submodule_rep(Nm, ker)[0]
    return h0, hm1


def induced_torsion_pairs(cat, U):
    """Pair of torsion class masks cut out by the cohomology of U.

    Returns (big, small): the perp class of the twisted kernel and the
    factor closure of the cokernel, with small <= big checked.
    """
    h0, hm1 = cohomology(U)
    big = left_perp(cat, [hm1])
    small = fac_closure(cat, [h0])
    if small & ~big:
        raise SiltingError("induced torsion classes are not nested")
    return big, small
