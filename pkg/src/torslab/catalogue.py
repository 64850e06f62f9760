"""Exhaustive catalogue of module isomorphism classes inside a dimension window.

For each dimension vector d below the bound, the matrix tuples satisfying the
relations are enumerated up to simultaneous base change by sweeping the code
space in lexicographic order and marking whole GL-orbits; the first unvisited
code of an orbit is its canonical form.  GL(d_v, F_p) is generated by a cyclic
permutation, the transvection I + E_12, and (for p > 2) a primitive diagonal
scalar, so orbit connectivity under these generators is isomorphism.

Krull-Schmidt data (decompositions, brick tests) is computed by Fitting
splittings found by sweeping endomorphism spaces; the sweeps are exhaustive,
capped, and never sampled.
"""

from __future__ import annotations

import itertools

from .algebra import (
    Representation,
    direct_sum_many,
    hom_space,
    image_submodule,
    kernel_submodule,
    quotient_module,
    submodule_rep,
)
from .linalg import inverse, mat_mul, nullspace, row_space, rref

BUDGET_DEFAULT = 22
CODE_CAP = 4_000_000
SWEEP_CAP = 1_000_000


class BudgetError(Exception):
    pass


class WindowError(Exception):
    pass


def _primitive_root(p):
    for g in range(2, p):
        seen = set()
        x = 1
        for _ in range(p - 1):
            x = x * g % p
            seen.add(x)
        if len(seen) == p - 1:
            return g
    return 1


def _gl_generators(d, p):
    """Matrices generating GL(d, F_p)."""
    if d == 0:
        return ()
    gens = []
    if d >= 2:
        cyc = tuple(
            tuple(1 if j == (i + 1) % d else 0 for j in range(d)) for i in range(d)
        )
        gens.append(cyc)
        trans = tuple(
            tuple(1 if i == j else (1 if (i, j) == (0, 1) else 0) for j in range(d))
            for i in range(d)
        )
        gens.append(trans)
    if p > 2:
        g = _primitive_root(p)
        gens.append(
            tuple(
                tuple((g if i == 0 else 1) if i == j else 0 for j in range(d))
                for i in range(d)
            )
        )
    return tuple(gens)


def _all_dims(bound):
    return [dims for dims in itertools.product(*(range(b + 1) for b in bound))]


class Catalogue:
    def __init__(self, algebra, bound, budget=BUDGET_DEFAULT, code_cap=CODE_CAP):
        self.algebra = algebra
        self.bound = tuple(bound)
        if len(self.bound) != algebra.n:
            raise BudgetError("bound length does not match the number of vertices")
        load = sum(
            self.bound[a.source] * self.bound[a.target] for a in algebra.arrows
        )
        if load > budget:
            raise BudgetError(
                "enumeration budget exceeded at dims %r: %d > %d"
                % (self.bound, load, budget)
            )
        self._enumerate(code_cap)
        self._sig = {}
        self._sig_index = {}
        self._brick = {}
        self._subs = {}
        self._subquots = {}
        self._homs = {}
        self._ext = {}
        self._find_memo = {}
        self._by_total = sorted(
            range(len(self.reps)), key=lambda i: (sum(self.dims_of(i)), i)
        )

    # -- enumeration --------------------------------------------------------

    def _enumerate(self, code_cap):
        A = self.algebra
        p = A.p
        items = []
        for dims in _all_dims(self.bound):
            cells = [dims[a.target] * dims[a.source] for a in A.arrows]
            N = sum(cells)
            if p**N > code_cap:
                raise BudgetError(
                    "orbit sweep too large at dims %r: %d^%d codes" % (dims, p, N)
                )
            items.extend(self._sweep_dims(dims, cells))
        items.sort(key=lambda it: (it[0], it[1]))
        self.reps = tuple(
            Representation(A, dims, mats, check=False) for dims, _, mats in items
        )
        self.fingerprints = tuple((dims, code) for dims, code, _ in items)
        self._fp_index = {fp: i for i, fp in enumerate(self.fingerprints)}

    def _decode(self, dims, cells, code):
        A = self.algebra
        p = A.p
        mats = []
        for ai, a in enumerate(A.arrows):
            dt, ds = dims[a.target], dims[a.source]
            block = code % (p ** cells[ai])
            code //= p ** cells[ai]
            m = []
            for _ in range(dt):
                row = []
                for _ in range(ds):
                    row.append(block % p)
                    block //= p
                m.append(tuple(row))
            mats.append(tuple(m))
        return tuple(mats)

    def _encode(self, dims, cells, mats):
        p = self.algebra.p
        code = 0
        mult = 1
        for ai, a in enumerate(self.algebra.arrows):
            block = 0
            bm = 1
            for row in mats[ai]:
                for x in row:
                    block += x * bm
                    bm *= p
            code += block * mult
            mult *= p ** cells[ai]
        return code

    def _sweep_dims(self, dims, cells):
        A = self.algebra
        p = A.p
        N = sum(cells)
        total = p**N
        # per-(vertex generator, arrow) block transition tables
        actions = []
        for v in range(A.n):
            for g in _gl_generators(dims[v], p):
                ginv = inverse(g, p)
                tables = []
                for ai, a in enumerate(A.arrows):
                    if a.source != v and a.target != v:
                        tables.append(None)
                        continue
                    dt, ds = dims[a.target], dims[a.source]
                    size = p ** cells[ai]
                    tab = [0] * size
                    for bcode in range(size):
                        m = self._decode_block(dt, ds, bcode)
                        if a.target == v:
                            m = mat_mul(g, m, p, inner=dt) if dt else m
                        if a.source == v:
                            m = mat_mul(m, ginv, p, inner=ds) if ds else m
                        tab[bcode] = self._encode_block(m)
                    tables.append(tab)
                actions.append(tables)
        bases = []
        mult = 1
        for c in cells:
            bases.append(mult)
            mult *= p**c
        sizes = [p**c for c in cells]
        visited = bytearray(total)
        out = []
        for c0 in range(total):
            if visited[c0]:
                continue
            visited[c0] = 1
            frontier = [c0]
            while frontier:
                code = frontier.pop()
                blocks = [(code // bases[ai]) % sizes[ai] for ai in range(len(cells))]
                for tables in actions:
                    nc = 0
                    for ai in range(len(cells)):
                        tab = tables[ai]
                        b = blocks[ai] if tab is None else tab[blocks[ai]]
                        nc += b * bases[ai]
                    if not visited[nc]:
                        visited[nc] = 1
                        frontier.append(nc)
            mats = self._decode(dims, cells, c0)
            if self._relations_hold(dims, mats):
                out.append((dims, c0, mats))
        return out

    def _decode_block(self, dt, ds, bcode):
        p = self.algebra.p
        m = []
        for _ in range(dt):
            row = []
            for _ in range(ds):
                row.append(bcode % p)
                bcode //= p
            m.append(tuple(row))
        return tuple(m)

    def _encode_block(self, m):
        p = self.algebra.p
        code = 0
        mult = 1
        for row in m:
            for x in row:
                code += x * mult
                mult *= p
        return code

    def _relations_hold(self, dims, mats):
        try:
            Representation(self.algebra, dims, mats, check=True)
        except Exception:
            return False
        return True

    # -- basic access --------------------------------------------------------

    def __len__(self):
        return len(self.reps)

    def rep(self, idx):
        return self.reps[idx]

    def dims_of(self, idx):
        return self.reps[idx].dims

    def zero_index(self):
        return self._fp_index[(tuple(0 for _ in self.bound), 0)]

    def in_window(self, dims):
        return all(d <= b for d, b in zip(dims, self.bound))

    def by_total_dim(self):
        return self._by_total

    def hom_basis(self, i, j):
        key = (i, j)
        got = self._homs.get(key)
        if got is None:
            got = hom_space(self.reps[i], self.reps[j])
            self._homs[key] = got
        return got

    def hom_dim(self, i, j):
        return len(self.hom_basis(i, j))

    # -- Krull-Schmidt -------------------------------------------------------

    def decompose_rep(self, rep):
        """Indecomposable direct summands of an explicit representation."""
        if rep.total_dim() == 0:
            return []
        p = self.algebra.p
        ends = hom_space(rep, rep)
        r = len(ends)
        if p**r > SWEEP_CAP:
            raise BudgetError("endomorphism sweep too large: %d^%d" % (p, r))
        total = rep.total_dim()
        kpow = max(1, total).bit_length()

        def split_by(phi):
            phin = phi
            for _ in range(kpow):
                phin = tuple(
                    mat_mul(m, m, p, inner=len(m)) for m in phin
                )
            rk = sum(
                len(rref(m, p)[1]) if m else 0 for m in phin
            )
            if 0 < rk < total:
                im = image_submodule(phin, rep, rep)
                ker = kernel_submodule(phin, rep, rep)
                r1, _ = submodule_rep(rep, im)
                r2, _ = submodule_rep(rep, ker)
                return self.decompose_rep(r1) + self.decompose_rep(r2)
            return None

        for phi in ends:
            got = split_by(phi)
            if got is not None:
                return got
        for coeffs in itertools.product(range(p), repeat=r):
            if not any(coeffs):
                continue
            if coeffs.count(0) >= r - 1:
                continue  # single basis elements already tried
            phi = _combine(ends, coeffs, p)
            got = split_by(phi)
            if got is not None:
                return got
        return [rep]

    def signature(self, idx):
        """Sorted catalogue indices of the indecomposable summands."""
        got = self._sig.get(idx)
        if got is not None:
            return got
        parts = self.decompose_rep(self.reps[idx])
        if len(parts) <= 1:
            sig = (idx,) if parts else ()
        else:
            sig = tuple(sorted(self._locate_indec(part) for part in parts))
        self._sig[idx] = sig
        self._sig_index[sig] = idx
        return sig

    def _locate_indec(self, part):
        for j in range(len(self.reps)):
            if self.reps[j].dims != part.dims:
                continue
            if is_isomorphic_rep(part, self.reps[j]):
                return j
        raise WindowError("summand of dims %r not found in catalogue" % (part.dims,))

    def is_indec(self, idx):
        return len(self.signature(idx)) == 1

    def find_index(self, rep):
        """Catalogue index of an explicit representation, up to isomorphism."""
        if not self.in_window(rep.dims):
            raise WindowError("dims %r outside catalogue bound %r" % (rep.dims, self.bound))
        key = (rep.dims, rep.mats)
        got = self._find_memo.get(key)
        if got is not None:
            return got
        parts = self.decompose_rep(rep)
        sig = tuple(sorted(self._locate_indec(part) for part in parts))
        idx = self._sig_index.get(sig)
        if idx is None:
            for j in range(len(self.reps)):
                if self.signature(j) == sig:
                    idx = j
                    break
        if idx is None:
            raise WindowError("no catalogue item with signature %r" % (sig,))
        self._find_memo[key] = idx
        return idx

    def from_signature(self, sig):
        sig = tuple(sorted(sig))
        idx = self._sig_index.get(sig)
        if idx is not None:
            return idx
        for j in range(len(self.reps)):
            if self.signature(j) == sig:
                return j
        raise WindowError("no catalogue item with signature %r" % (sig,))

    # -- bricks and semibricks -------------------------------------------------

    def is_brick(self, idx):
        got = self._brick.get(idx)
        if got is not None:
            return got
        p = self.algebra.p
        out = False
        if self.is_indec(idx) and self.reps[idx].total_dim() > 0:
            ends = self.hom_basis(idx, idx)
            r = len(ends)
            if p**r > SWEEP_CAP:
                raise BudgetError("endomorphism sweep too large: %d^%d" % (p, r))
            out = True
            for coeffs in itertools.product(range(p), repeat=r):
                if not any(coeffs):
                    continue
                phi = _combine(ends, coeffs, p)
                if any(inverse(m, p) is None for m in phi if m):
                    out = False
                    break
        self._brick[idx] = out
        return out

    def bricks(self):
        return tuple(i for i in range(len(self.reps)) if self.is_brick(i))

    def semibricks(self, size_cap=8):
        """All pairwise hom-orthogonal sets of bricks, as sorted index tuples."""
        bricks = self.bricks()
        ortho = {
            (i, j)
            for i in bricks
            for j in bricks
            if i != j and self.hom_dim(i, j) == 0 and self.hom_dim(j, i) == 0
        }
        out = [()]

        def grow(prefix, rest):
            for k, b in enumerate(rest):
                if all((a, b) in ortho for a in prefix):
                    nxt = prefix + (b,)
                    out.append(nxt)
                    if len(nxt) < size_cap:
                        grow(nxt, rest[k + 1 :])

        grow((), bricks)
        return tuple(sorted(out, key=lambda s: (len(s), s)))

    # -- submodule lattices ------------------------------------------------------

    def submodule_families(self, idx):
        """All submodules, as tuples of per-vertex reduced bases."""
        got = self._subs.get(idx)
        if got is not None:
            return got
        M = self.reps[idx]
        A = self.algebra
        p = A.p
        zero = tuple(() for _ in range(A.n))
        fams = {zero}
        seeds = []
        for v in range(A.n):
            d = M.dims[v]
            for vec in itertools.product(range(p), repeat=d):
                if not any(vec):
                    continue
                seeds.append(self._cyclic_closure(M, v, vec))
        fams.update(seeds)
        queue = list(fams)
        while queue:
            fam = queue.pop()
            for other in list(fams):
                joined = tuple(
                    row_space(fam[v] + other[v], p) for v in range(A.n)
                )
                if joined not in fams:
                    fams.add(joined)
                    queue.append(joined)
        got = tuple(sorted(fams))
        self._subs[idx] = got
        return got

    def _cyclic_closure(self, M, v0, vec):
        A = self.algebra
        p = A.p
        spans = [[] for _ in range(A.n)]
        spans[v0] = [tuple(vec)]
        work = [(v0, tuple(vec))]
        while work:
            u, w = work.pop()
            for ai, a in enumerate(A.arrows):
                if a.source != u:
                    continue
                img = tuple(
                    sum(M.mats[ai][r][c] * w[c] for c in range(M.dims[u])) % p
                    for r in range(M.dims[a.target])
                )
                if not any(img):
                    continue
                cur = row_space(tuple(spans[a.target]), p)
                stacked = row_space(cur + (img,), p)
                if len(stacked) > len(cur):
                    spans[a.target].append(img)
                    work.append((a.target, img))
        return tuple(row_space(tuple(spans[v]), p) for v in range(A.n))

    def submodule_dimvectors(self, idx):
        return sorted(
            {tuple(len(fam[v]) for v in range(self.algebra.n)) for fam in self.submodule_families(idx)}
        )

    def quotient_dimvectors(self, idx):
        dims = self.reps[idx].dims
        return sorted(
            {
                tuple(d - s for d, s in zip(dims, sub))
                for sub in self.submodule_dimvectors(idx)
            }
        )

    def subquot_pairs(self, idx):
        """(submodule index, quotient index) for every proper submodule."""
        got = self._subquots.get(idx)
        if got is not None:
            return got
        M = self.reps[idx]
        pairs = set()
        for fam in self.submodule_families(idx):
            if tuple(len(f) for f in fam) == M.dims:
                continue
            S, _ = submodule_rep(M, fam)
            Q, _ = quotient_module(M, fam)
            pairs.add((self.find_index(S), self.find_index(Q)))
        got = tuple(sorted(pairs))
        self._subquots[idx] = got
        return got

    # -- extensions ----------------------------------------------------------------

    def extensions(self, xi, yi):
        """Middle terms of short exact sequences 0 -> Y -> E -> X -> 0.

        Returns (sorted tuple of catalogue indices, truncated flag); the flag
        is set when the middle dimension vector leaves the window.
        """
        key = (xi, yi)
        got = self._ext.get(key)
        if got is not None:
            return got
        X, Y = self.reps[xi], self.reps[yi]
        A = self.algebra
        p = A.p
        dims = tuple(x + y for x, y in zip(X.dims, Y.dims))
        if not self.in_window(dims):
            out = ((), True)
            self._ext[key] = out
            return out
        offs = []
        acc = 0
        for a in A.arrows:
            offs.append(acc)
            acc += Y.dims[a.target] * X.dims[a.source]
        D = acc
        rows = []
        for rel in A.relations:
            src = rel[0][1][0]
            tgt = None
            block = {}
            for coeff, (psrc, arrs) in rel:
                cur_tgt = A.arrows[arrs[-1]].target
                tgt = cur_tgt
                for i, ai in enumerate(arrs):
                    a = A.arrows[ai]
                    left = Y.path_matrix((a.target, arrs[i + 1 :]))
                    right = X.path_matrix((psrc, arrs[:i]))
                    for u in range(Y.dims[cur_tgt]):
                        lrow = left[u] if left else ()
                        for w in range(X.dims[psrc]):
                            for rr in range(Y.dims[a.target]):
                                lv = lrow[rr] if rr < len(lrow) else 0
                                if not lv:
                                    continue
                                for ss in range(X.dims[a.source]):
                                    rv = right[ss][w] if right else 0
                                    if not rv:
                                        continue
                                    var = offs[ai] + rr * X.dims[a.source] + ss
                                    bkey = (u, w, var)
                                    block[bkey] = (block.get(bkey, 0) + coeff * lv * rv) % p
            if tgt is None:
                continue
            per_entry = {}
            for (u, w, var), val in block.items():
                per_entry.setdefault((u, w), [0] * D)[var] = val
            for row in per_entry.values():
                if any(row):
                    rows.append(tuple(row))
        Z = nullspace(tuple(rows), D, p)
        bvecs = []
        for v in range(A.n):
            for i in range(Y.dims[v]):
                for j in range(X.dims[v]):
                    vec = [0] * D
                    for ai, a in enumerate(A.arrows):
                        if a.source == v:
                            for rr in range(Y.dims[a.target]):
                                val = Y.mats[ai][rr][i]
                                if val:
                                    vec[offs[ai] + rr * X.dims[a.source] + j] = (
                                        vec[offs[ai] + rr * X.dims[a.source] + j] + val
                                    ) % p
                        if a.target == v:
                            for ss in range(X.dims[a.source]):
                                val = X.mats[ai][j][ss]
                                if val:
                                    vec[offs[ai] + i * X.dims[a.source] + ss] = (
                                        vec[offs[ai] + i * X.dims[a.source] + ss] - val
                                    ) % p
                    if any(vec):
                        bvecs.append(tuple(vec))
        bred, _ = rref(bvecs, p) if bvecs else ((), ())
        comp = []
        stack = list(bred)
        for z in Z:
            trial, _ = rref(tuple(stack) + (z,), p)
            if len(trial) > len(stack):
                comp.append(z)
                stack = list(trial)
        if p ** len(comp) > SWEEP_CAP:
            raise BudgetError("extension sweep too large: %d^%d" % (p, len(comp)))
        found = set()
        for coeffs in itertools.product(range(p), repeat=len(comp)):
            cvec = [0] * D
            for c, z in zip(coeffs, comp):
                if c:
                    cvec = [(x + c * y) % p for x, y in zip(cvec, z)]
            found.add(self.find_index(self._glue(X, Y, offs, cvec)))
        out = (tuple(sorted(found)), False)
        self._ext[key] = out
        return out

    def _glue(self, X, Y, offs, cvec):
        A = self.algebra
        dims = tuple(x + y for x, y in zip(X.dims, Y.dims))
        mats = []
        for ai, a in enumerate(A.arrows):
            dt, ds = dims[a.target], dims[a.source]
            yt, ys = Y.dims[a.target], Y.dims[a.source]
            m = [[0] * ds for _ in range(dt)]
            for r in range(yt):
                for c in range(ys):
                    m[r][c] = Y.mats[ai][r][c]
            for r in range(X.dims[a.target]):
                for c in range(X.dims[a.source]):
                    m[yt + r][ys + c] = X.mats[ai][r][c]
            for r in range(yt):
                for c in range(X.dims[a.source]):
                    m[r][ys + c] = cvec[offs[ai] + r * X.dims[a.source] + c]
            mats.append(tuple(tuple(row) for row in m))
        return Representation(A, dims, mats, check=False)


def _combine(homs, coeffs, p):
    """Linear combination of hom-space basis elements."""
    n = len(homs[0])
    out = []
    for v in range(n):
        acc = None
        for c, h in zip(coeffs, homs):
            if not c:
                continue
            m = h[v]
            if acc is None:
                acc = [[(c * x) % p for x in row] for row in m]
            else:
                for r, row in enumerate(m):
                    for s, x in enumerate(row):
                        acc[r][s] = (acc[r][s] + c * x) % p
        if acc is None:
            first = homs[0][v]
            acc = [[0] * len(row) for row in first]
        out.append(tuple(tuple(row) for row in acc))
    return tuple(out)


def is_isomorphic_rep(M, N, cap=SWEEP_CAP):
    """Exhaustive search for an invertible homomorphism."""
    if M.dims != N.dims:
        return False
    if M.total_dim() == 0:
        return True
    p = M.algebra.p
    homs = hom_space(M, N)
    r = len(homs)
    if r == 0:
        return False
    if len(hom_space(N, M)) != r:
        return False
    if p**r > cap:
        raise BudgetError("isomorphism sweep too large: %d^%d" % (p, r))
    for coeffs in itertools.product(range(p), repeat=r):
        if not any(coeffs):
            continue
        phi = _combine(homs, coeffs, p)
        if all(inverse(m, p) is not None for m in phi if m):
            return True
    return False


def module_from_signature(cat, sig):
    return direct_sum_many(cat.algebra, [cat.rep(i) for i in sig])
