from collections import Counter

import pytest

from m24tmf.dcomplex import (
    AMBIENTS,
    TwistConfig,
    build_D,
    d_cohomology,
    epsilon_of,
    get_ambient,
    m24_ring,
    mod36_descriptors,
    nilpotency_holds,
    omega_label,
    periodicity_check,
)
from m24tmf.fieldalg import matmul, rank
from oracles import even_a_powers

EPS = (0, 1, -1)


def test_omega_dictionary():
    assert [omega_label(e) for e in EPS] == ["0", "-r", "+r"]
    assert [epsilon_of(w) for w in ("0", "-r", "+r")] == [0, 1, -1]
    assert TwistConfig(2).epsilon == -1 and TwistConfig(-1).omega == "+r"
    with pytest.raises(ValueError):
        epsilon_of("2r")


@pytest.mark.parametrize("ambient", AMBIENTS)
@pytest.mark.parametrize("eps", EPS)
def test_nilpotency(ambient, eps):
    for sigma in (1, -1) if ambient == "m24" else (1,):
        assert nilpotency_holds(TwistConfig(eps, sigma, 80), ambient)


def test_warmup_operator_values():
    amb = get_ambient("FAa")
    assert amb.D(2, 0).tolist() == [[1]]
    for i in range(0, 10):
        assert amb.D(2 * i, 1).tolist() == [[(i + 1) % 3]]
        assert amb.D(2 * i, -1).tolist() == [[(i - 1) % 3]]


def test_warmup_cohomology():
    got = {e: even_a_powers(d_cohomology(TwistConfig(e, 1, 40), "FAa")) for e in EPS}
    assert got == {0: ["{a^0}", "{a^1->a^3}"], 1: ["{a^0->a^2}"], -1: ["{a^1}"]}


def test_frr_sublists():
    def descr(e):
        return [str(c) for c in d_cohomology(TwistConfig(e, 1, 60), "FRr").reliable]

    assert descr(0) == ["{0} [1]", "{3->7} [R -> Rr]"]
    assert descr(1) == ["{0->4} [1 -> r]"]
    assert descr(-1) == ["{3} [R]"]


M24_LISTS = {
    0: ["{0}", "{2->6}", "{10}", "{11->15}", "{11->15}", "{12->16}", "{16}", "{22->26}", "{26}", "{27}", "{27}", "{28->32}"],
    1: ["{0->4}", "{10->14}", "{11->15}", "{15}", "{16}", "{26}", "{27}", "{35->39}"],
    -1: ["{2}", "{3}", "{11->15}", "{12->16}", "{22->26}", "{23->27}", "{27}", "{28}"],
}


@pytest.mark.parametrize("eps", EPS)
def test_m24_lists_frozen(eps):
    """Frozen engine output (the lists for eps = 0, -1 differ from the published
    ones by the {35->39} entry; see the acceptance notes)."""
    for sigma in (1, -1):
        rep = d_cohomology(TwistConfig(eps, sigma, 80))
        assert mod36_descriptors(rep.mod36(0)) == M24_LISTS[eps]
        assert mod36_descriptors(rep.mod36(1)) == M24_LISTS[eps]
        assert periodicity_check(rep)


def test_nonperiodic_class():
    rep = d_cohomology(TwistConfig(0, 1, 80))
    assert [c.descriptor for c in rep.nonperiodic()] == ["{3->7}"]
    assert [str(x) for x in rep.nonperiodic()[0].representatives] == ["R", "Rr"]
    assert not periodicity_check(rep, exclude_nonperiodic=False)
    for e in (1, -1):
        assert d_cohomology(TwistConfig(e, 1, 80)).nonperiodic() == []


@pytest.mark.parametrize("eps", EPS)
def test_sigma_independent(eps):
    a = d_cohomology(TwistConfig(eps, 1, 80))
    b = d_cohomology(TwistConfig(eps, -1, 80))
    assert [c.key() for c in a.reliable] == [c.key() for c in b.reliable]


@pytest.mark.parametrize("eps", EPS)
def test_no_classes_in_degree_one_mod_four(eps):
    rep = d_cohomology(TwistConfig(eps, 1, 80))
    assert all(c.start % 4 != 1 and c.top % 4 != 1 for c in rep.classes)


@pytest.mark.parametrize("eps", EPS)
def test_report_matches_raw_ranks(eps):
    """ker D / im D^2 sits at block tops, ker D^2 / im D at block starts."""
    amb = get_ambient("m24")
    cfg = TwistConfig(eps, 1, 80)
    rep = d_cohomology(cfg)

    def D(n):
        return amb.D(n, eps)

    def D2(n):
        return matmul(D(n + 4), D(n), 3)

    def rk(m):
        return rank(m) if m.size else 0

    tops, starts = Counter(), Counter()
    for c in rep.classes:
        tops[c.top] += 1
        starts[c.start] += 1
    for n in range(0, 72):
        h1 = amb.dim(n) - rk(D(n)) - rk(D2(n - 8))
        h2 = amb.dim(n) - rk(D2(n)) - rk(D(n - 4))
        assert h1 == tops[n], n
        assert h2 == starts[n], n


def test_U_intertwines_residues():
    ring = m24_ring(1)
    U = ring.gen("U")
    amb = get_ambient("m24")
    for eps in EPS:
        for n in range(0, 64, 4):
            mu, mu4 = ring.multiplication_matrix(U, n), ring.multiplication_matrix(U, n + 4)
            assert (matmul(amb.D(n + 10, eps), mu, 3) == matmul(mu4, amb.D(n, eps), 3)).all()
            assert rank(mu) == ring.dim(n) == ring.dim(n + 10), n


def test_pieces_respect_aux_degree():
    pieces = build_D(TwistConfig(0, 1, 40))
    assert {p.aux for p in pieces} <= {0, 1, 2, 3, 4}
    assert all(p.complex.ell == 3 for p in pieces)
