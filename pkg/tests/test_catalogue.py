import itertools

import pytest

from torslab.algebra import Representation, direct_sum, projective_module, simple_module
from torslab.catalogue import (
    BudgetError,
    Catalogue,
    WindowError,
    is_isomorphic_rep,
)

from conftest import bundled


def raw_class_count(A, bound):
    """Enumerate every matrix tuple and dedup by pairwise isomorphism."""
    reps = []
    for dims in itertools.product(*(range(b + 1) for b in bound)):
        cells = [(a, dims[a.target], dims[a.source]) for a in A.arrows]
        spaces = [
            list(itertools.product(range(A.p), repeat=dt * ds)) for _, dt, ds in cells
        ]
        for choice in itertools.product(*spaces):
            mats = []
            for (a, dt, ds), flat in zip(cells, choice):
                mats.append(tuple(tuple(flat[r * ds : (r + 1) * ds]) for r in range(dt)))
            try:
                rep = Representation(A, dims, mats, check=True)
            except Exception:
                continue
            if not any(is_isomorphic_rep(rep, other) for other in reps if other.dims == dims):
                reps.append(rep)
    return len(reps)


@pytest.fixture(scope="module")
def cat_a2(a2):
    return Catalogue(a2, (1, 1))


@pytest.fixture(scope="module")
def cat_a2_big(a2):
    return Catalogue(a2, (2, 2))


@pytest.fixture(scope="module")
def cat_kron(kronecker):
    return Catalogue(kronecker, (1, 1))


@pytest.fixture(scope="module")
def cat_kron_big(kronecker):
    return Catalogue(kronecker, (2, 2))


@pytest.fixture(scope="module")
def cat_loop(loop):
    return Catalogue(loop, (2,))


def test_counts(cat_a2, cat_a2_big, cat_kron, cat_kron_big, cat_loop, kxk):
    assert len(cat_a2) == 5
    assert len(cat_a2_big) == 14
    assert len(cat_kron) == 7
    assert len(cat_kron_big) == 35
    assert len(cat_loop) == 4
    assert len(Catalogue(kxk, (1, 1))) == 4


def test_exhaustiveness_against_raw_sweep(a2, kronecker, loop, cat_a2, cat_kron, cat_loop):
    assert raw_class_count(a2, (1, 1)) == len(cat_a2)
    assert raw_class_count(kronecker, (1, 1)) == len(cat_kron)
    assert raw_class_count(loop, (2,)) == len(cat_loop)
    assert raw_class_count(a2, (2, 2)) == 14


def test_zero_first_and_ordering(cat_kron):
    assert cat_kron.zero_index() == 0
    assert cat_kron.dims_of(0) == (0, 0)
    fps = cat_kron.fingerprints
    assert fps == tuple(sorted(fps))


def test_find_index_permutation_invariance(a2, cat_a2):
    S1 = simple_module(a2, 0)
    S2 = simple_module(a2, 1)
    i = cat_a2.find_index(direct_sum(S1, S2))
    j = cat_a2.find_index(direct_sum(S2, S1))
    assert i == j
    with pytest.raises(WindowError):
        cat_a2.find_index(direct_sum(S1, S1))


def test_find_index_after_base_change(kronecker, cat_kron_big):
    # B_F4 carried by a conjugated pair of matrices
    C = ((0, 1), (1, 1))  # companion matrix of x^2 + x + 1
    M = Representation(kronecker, (2, 2), (((1, 0), (0, 1)), C))
    g = ((1, 1), (0, 1))
    # conjugate both matrices by g on the target side only: g*M_a
    M2 = Representation(
        kronecker,
        (2, 2),
        (
            tuple(tuple(sum(g[r][k] * M.mats[0][k][c] for k in range(2)) % 2 for c in range(2)) for r in range(2)),
            tuple(tuple(sum(g[r][k] * M.mats[1][k][c] for k in range(2)) % 2 for c in range(2)) for r in range(2)),
        ),
    )
    assert cat_kron_big.find_index(M) == cat_kron_big.find_index(M2)


def test_signatures(a2, cat_a2_big):
    P1 = projective_module(a2, 0)
    i = cat_a2_big.find_index(direct_sum(P1, P1))
    sig = cat_a2_big.signature(i)
    assert len(sig) == 2 and sig[0] == sig[1]
    assert cat_a2_big.is_indec(cat_a2_big.find_index(P1))
    assert not cat_a2_big.is_indec(i)


def test_bricks(cat_a2, cat_loop, cat_kron, cat_kron_big):
    assert len(cat_a2.bricks()) == 3
    assert len(cat_loop.bricks()) == 1
    assert len(cat_kron.bricks()) == 5
    # the eight bricks inside the (2,2) window, including the End = F_4 one
    assert len(cat_kron_big.bricks()) == 8
    indecs = [i for i in range(len(cat_kron_big)) if cat_kron_big.is_indec(i)]
    assert len(indecs) == 11


def test_f4_brick_has_no_middle_submodule(cat_kron_big):
    f4 = None
    for i in cat_kron_big.bricks():
        if cat_kron_big.dims_of(i) == (2, 2):
            f4 = i
    assert f4 is not None
    assert cat_kron_big.submodule_dimvectors(f4) == [
        (0, 0),
        (0, 1),
        (0, 2),
        (1, 2),
        (2, 2),
    ]


def test_semibricks(cat_a2, cat_kron):
    sbs = cat_a2.semibricks()
    assert len(sbs) == 5
    assert max(len(s) for s in sbs) == 2
    sbk = cat_kron.semibricks()
    assert len(sbk) == 11
    assert max(len(s) for s in sbk) == 3  # the p + 1 = 3 one-dimensional bricks


def test_submodules_and_subquots(a2, cat_a2):
    P1 = projective_module(a2, 0)
    i = cat_a2.find_index(P1)
    fams = cat_a2.submodule_families(i)
    assert len(fams) == 3
    s1 = cat_a2.find_index(simple_module(a2, 0))
    s2 = cat_a2.find_index(simple_module(a2, 1))
    assert set(cat_a2.subquot_pairs(i)) == {(0, i), (s2, s1)}


def test_extensions(a2, loop, cat_a2, cat_loop, cat_kron):
    s1 = cat_a2.find_index(simple_module(a2, 0))
    s2 = cat_a2.find_index(simple_module(a2, 1))
    p1 = cat_a2.find_index(projective_module(a2, 0))
    ss = cat_a2.find_index(direct_sum(simple_module(a2, 0), simple_module(a2, 1)))
    mids, trunc = cat_a2.extensions(s1, s2)
    assert not trunc and set(mids) == {ss, p1}
    mids2, trunc2 = cat_a2.extensions(s2, s1)
    assert not trunc2 and set(mids2) == {ss}
    # loop: the self-extension of the simple gives both the split sum and the
    # regular module
    s = next(i for i in range(len(cat_loop)) if cat_loop.dims_of(i) == (1,))
    mids3, _ = cat_loop.extensions(s, s)
    assert len(mids3) == 2
    # Kronecker at bound (1,1): four middles for Ext(S1, S2), truncation beyond
    ks1 = cat_kron.find_index(simple_module(cat_kron.algebra, 0))
    ks2 = cat_kron.find_index(simple_module(cat_kron.algebra, 1))
    mids4, trunc4 = cat_kron.extensions(ks1, ks2)
    assert not trunc4 and len(mids4) == 4
    b = next(i for i in cat_kron.bricks() if cat_kron.dims_of(i) == (1, 1))
    _, trunc5 = cat_kron.extensions(b, b)
    assert trunc5


def test_budget_guards(kronecker):
    with pytest.raises(BudgetError):
        Catalogue(kronecker, (4, 4))
    k3 = bundled("kronecker", p=3)
    with pytest.raises(BudgetError):
        Catalogue(k3, (3, 3))
