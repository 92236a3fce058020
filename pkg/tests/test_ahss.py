import pytest

from m24tmf.ahss import (
    CHAIN,
    FAMILY_DELTA,
    FAMILY_PLAIN,
    FAMILY_UPSILON,
    RESIDUE1_NODES,
    build_total_complex,
    d5_map,
    d9_map,
    e9_classes,
    engine,
    fr_subring_cohomology,
    fr_subring_exactness,
    group_at,
    restriction_to_point,
)
from m24tmf.dcomplex import TwistConfig, get_ambient
from m24tmf.fieldalg import matmul

EPS = (0, 1, -1)
CFG = {e: TwistConfig(e, 1) for e in EPS}


def labels(res):
    return sorted(g.label() for g in res.generators)


def test_chain_maps_are_twisted_steenrod():
    eng = engine(CFG[1])
    amb = get_ambient("m24")
    for m in (0, 4, 12, 24):
        assert (eng.chain_map(0, m) == amb.D(m, 1)).all()
        d2 = matmul(amb.D(m + 4, 1), amb.D(m, 1), 3)
        assert (eng.chain_map(1, m) == (-d2) % 3).all()
    # odd H-degree: nu passes an odd class
    assert (eng.chain_map(0, 3) == (-amb.D(3, 1)) % 3).all()


@pytest.mark.parametrize("eps", EPS)
def test_composites_vanish(eps):
    assert engine(CFG[eps]).check_composites()
    # maps leaving total degree -27 land in total degree -26
    chain = build_total_complex(CFG[eps], -27)
    assert chain and all(mat.shape[1] == engine(CFG[eps]).dim(m) for _, _, m, mat in chain)


# frozen engine output ------------------------------------------------------------

UPSILON_DEGREES = {0: [25, 13, 9, 5, -3, -11, -11, -27], 1: [13, -3, -11, -23], -1: [25, 9, 1, -11]}
PLAIN_DEGREES = {
    0: [17, 17, 5, 5, -3, -3, -19, -19],
    1: [29, 17, 5, 5, 5, -3, -15, -19],
    -1: [17, 17, 5, -3, -7, -7, -19, -27],
}


@pytest.mark.parametrize("eps", EPS)
def test_e9_families_frozen(eps):
    fam = e9_classes(CFG[eps]).families()
    assert fam[FAMILY_UPSILON] == UPSILON_DEGREES[eps]
    assert fam[FAMILY_PLAIN] == PLAIN_DEGREES[eps]
    assert fam[FAMILY_DELTA] == ([-3, -27] if eps == 0 else [])


@pytest.mark.parametrize("eps", EPS)
def test_e9_sigma_independent(eps):
    a = e9_classes(TwistConfig(eps, 1)).families()
    b = e9_classes(TwistConfig(eps, -1)).families()
    assert a == b


def test_group_at_minus_27():
    r0 = group_at(CFG[0], -27)
    assert labels(r0) == sorted(["s^4⊗νΔ³", "Us^4⊗νμΔ³", "1⊗{νΔ}", "R⊗μ³", "U⊗{νΔ}μ"])
    assert r0.flags()["torsion"] == 1 and r0.flags()["periodic"] == 4
    assert group_at(CFG[1], -27).rank == 0
    rm = group_at(CFG[-1], -27)
    assert labels(rm) == sorted(["s^4⊗νΔ³", "Us^4⊗νμΔ³", "R⊗μ³"])


def test_group_at_minus_3():
    assert labels(group_at(CFG[0], -3)) == sorted(["1⊗ν", "Rr⊗μ", "U⊗νμ", "Rs^2⊗μ³", "St⊗μ³"])
    assert labels(group_at(CFG[1], -3)) == sorted(["1⊗ν", "U⊗νμ", "St⊗μ³"])
    assert labels(group_at(CFG[-1], -3)) == ["St⊗μ³"]


def test_group_at_plus_1():
    assert group_at(CFG[0], 1).rank == 0
    assert group_at(CFG[1], 1).rank == 0
    r = group_at(CFG[-1], 1)
    assert labels(r) == sorted(["rs^2⊗{νΔ}", "Rvs^2⊗{νΔ}μ"])
    # the second generator is the Upsilon-translate of the first
    assert {g.node for g in r.generators} == {"{nu*Delta}", "{nu*Delta}*mu"}


def test_restriction_to_point():
    for eps in (0, 1):
        assert [g.label() for g in restriction_to_point(group_at(CFG[eps], -3))] == ["1⊗ν"]
    assert restriction_to_point(group_at(CFG[-1], -3)) == []


def test_fr_subring():
    assert [fr_subring_exactness(e) for e in EPS] == [False, False, True]
    assert [str(b) for b in fr_subring_cohomology(0)] == ["{0}"]
    assert [str(b) for b in fr_subring_cohomology(1)] == ["{0->1}"]


# invariants ----------------------------------------------------------------------


@pytest.mark.parametrize("eps", EPS)
def test_no_generators_from_even_rows(eps):
    gens = e9_classes(CFG[eps]).generators
    assert not [g for g in gens if g.node in ("1", "mu^2", "mu^4")]
    assert all(g.total_degree % 4 == 1 for g in gens)


@pytest.mark.parametrize("eps", EPS)
def test_node_cohomology_s3_periodic(eps):
    eng = engine(CFG[eps])
    for name in RESIDUE1_NODES:
        for m in range(8, 45):
            assert eng.node(name, m).dim == eng.node(name, m + 36).dim, (name, m)


@pytest.mark.parametrize("eps", EPS)
def test_generators_survive_their_module_maps(eps):
    eng = engine(CFG[eps])
    s3 = eng.ring.gen("s") ** 3
    for g in e9_classes(CFG[eps]).generators:
        if g.m + 36 > eng.hmax:
            continue
        vec = eng.ring.coordinates(g.h_rep)
        assert eng.survives(s3, g.node, g.m, vec) == (g.family != FAMILY_DELTA)


def test_delta_only_family_is_killed_by_s3():
    gens = [g for g in e9_classes(CFG[0]).generators if g.family == FAMILY_DELTA]
    assert sorted(g.label() for g in gens) == sorted(["R⊗μ³", "Rr⊗μ"])


def test_higher_differential_bookkeeping():
    d = d5_map("c4")
    assert (d.source_total(4), d.target_total(4)) == (-4, -3)
    d = d5_map("mu^2")
    assert d.target == "{3Delta}" and d.target_total(0) - d.source_total(0) == 1
    d = d9_map("c4")
    assert d.target_total(0) - d.source_total(0) == 1
    # these land on nontorsion rows, which the residue-1 pipeline never touches
    assert d5_map("c6").target not in CHAIN
    with pytest.raises(ValueError):
        d5_map("nu")
